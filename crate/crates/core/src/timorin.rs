//! Mixed Hodge theory for products of compatible forms: `T_k`-primitivity,
//! mixed hard Lefschetz, mixed Hodge-Riemann Gram matrices, the Lefschetz
//! star on `V_T = T∧(ℂ⊗∧V*)`, and Alexandrov-Fenchel type inequalities.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::{self, binomial, lefschetz_sign, Blade};
use crate::complex_structure::{primitive_pq_dimension, ComplexStructure};
use crate::error::{Error, Result};
use crate::lefschetz::LefschetzSpace;
use crate::linalg::{column_space, column_space_complex, hermitian_eigenvalues, nullspace, singular_values};
use crate::multivector::{check_n, GradedSlice, Multivector, C64};
use crate::symplectic::{rows, standard_matrix, PrimitivityCheck, SymplecticForm};

/// Positivity threshold for `(1,1)`-forms, relative to `max(1, max|A|)`.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Relative tolerance for `T`-primitivity and nullspace extraction.
pub const T_PRIMITIVITY_TOL: f64 = 1e-9;
/// Normalized smallest singular value required by the mixed hard Lefschetz check.
pub const MHL_TOL: f64 = 1e-8;
/// Gram asymmetry above this is reported as a failure.
pub const GRAM_ASYMMETRY_TOL: f64 = 1e-9;
/// Relative distance to `V_T` tolerated by membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Matrix of `u ↦ form∧u` from grade `k` to grade `k + deg(form)`, for a
/// real homogeneous `form`. Rows are empty when the target grade overflows.
pub fn wedge_matrix(form: &Multivector, k: usize) -> DMatrix<f64> {
    let n = form.n();
    let table = basis::slices(n);
    let deg = form.homogeneous_grade().ok().flatten().unwrap_or(0);
    let target = k + deg;
    if target > 2 * n || form.is_zero() {
        let rows = if target > 2 * n { 0 } else { table.len(target) };
        return DMatrix::zeros(rows, table.len(k));
    }
    let mut m = DMatrix::zeros(table.len(target), table.len(k));
    for (col, &mask) in table.masks(k).iter().enumerate() {
        let e = Multivector::blade(n, Blade(mask), C64::new(1.0, 0.0));
        for (b, c) in (form ^ &e).terms() {
            m[(table.position(b.mask()), col)] = c.re;
        }
    }
    m
}

fn columns_to_forms(n: usize, k: usize, basis: &DMatrix<f64>) -> Vec<Multivector> {
    (0..basis.ncols())
        .map(|j| {
            let coeffs = basis.column(j).map(|x| C64::new(x, 0.0));
            Multivector::from_slice(&GradedSlice { n, k, coeffs })
        })
        .collect()
}

/// Standard volume blade `e_1 f_1 ⋯ e_n f_n`, signed so that `reference^n`
/// has a positive top coefficient.
fn oriented_volume(reference: &Multivector) -> Result<Multivector> {
    let n = reference.n();
    let full = Blade((1u32 << (2 * n)) - 1);
    let vol = Multivector::blade(n, full, C64::new(1.0, 0.0));
    let c = reference.power(n).top_coefficient(&vol)?;
    Ok(if c.re < 0.0 { -&vol } else { vol })
}

/// Validates a real two-form as a positive `(1,1)`-form for `j`.
pub fn validate_positive(j: &ComplexStructure, m: &DMatrix<f64>, index: usize, name: &str) -> Result<SymplecticForm> {
    let invalid = |reason: String| Error::InvalidForm { index, reason: format!("{name}: {reason}") };
    if m.shape() != (2 * j.n(), 2 * j.n()) {
        return Err(invalid(format!("expected a {0}x{0} matrix, got {1}x{2}", 2 * j.n(), m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(1.0);
    let (defect, min_eig) = j.positivity(m);
    if defect > POSITIVITY_TOL * scale {
        return Err(invalid(format!("not of type (1,1), defect {defect:e}")));
    }
    if min_eig <= POSITIVITY_TOL * scale {
        return Err(invalid(format!("not positive, smallest eigenvalue {min_eig:e}")));
    }
    SymplecticForm::new(m.clone()).map_err(|e| invalid(e.to_string()))
}

/// `α_0, …, α_n` (or `α_1, …, α_n`) with the products
/// `T_k = α_k∧⋯∧α_n`, `T_{n+1} = 1`.
#[derive(Clone, Debug)]
pub struct MixedCollection {
    n: usize,
    j: ComplexStructure,
    first: usize,
    alphas: Vec<SymplecticForm>,
    products: Vec<Multivector>,
    volume: Multivector,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MhlReport {
    pub k: usize,
    pub rank: usize,
    pub expected: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `σ_min / σ_max`.
    pub normalized_sigma_min: f64,
    pub full_rank: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MhrReport {
    pub k: usize,
    pub pq: [usize; 2],
    pub dimension: usize,
    pub min_eigenvalue: f64,
    pub asymmetry: f64,
    #[serde(skip)]
    pub gram: DMatrix<C64>,
}

impl MhrReport {
    pub fn positive(&self) -> bool {
        self.dimension == 0 || (self.min_eigenvalue > 0.0 && self.asymmetry <= GRAM_ASYMMETRY_TOL)
    }
}

impl MixedCollection {
    /// `alphas[0]` is the lowest-indexed form; pass `n + 1` forms for
    /// `α_0..α_n` or `n` forms for `α_1..α_n`.
    pub fn new(j: ComplexStructure, alphas: &[DMatrix<f64>]) -> Result<Self> {
        let n = j.n();
        let first = match alphas.len() {
            l if l == n + 1 => 0,
            l if l == n => 1,
            l => {
                return Err(Error::Precondition(format!(
                    "expected {} or {n} forms for n = {n}, got {l}",
                    n + 1
                )))
            }
        };
        let forms = alphas
            .iter()
            .enumerate()
            .map(|(i, m)| validate_positive(&j, m, i + first, &format!("alpha_{}", i + first)))
            .collect::<Result<Vec<_>>>()?;
        // products[k] = T_k for k = 0..=n+1
        let mut products = vec![Multivector::zero(n); n + 2];
        products[n + 1] = Multivector::scalar(n, 1.0);
        for k in (0..=n).rev() {
            products[k] = if k < first {
                Multivector::zero(n)
            } else {
                forms[k - first].two_form() ^ &products[k + 1]
            };
        }
        let volume = oriented_volume(forms.last().expect("n >= 1").two_form())?;
        Ok(MixedCollection { n, j, first, alphas: forms, products, volume })
    }

    pub fn standard(n: usize) -> Result<Self> {
        let j = ComplexStructure::standard(n)?;
        Self::new(j, &vec![standard_matrix(n); n + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn complex_structure(&self) -> &ComplexStructure {
        &self.j
    }

    /// `α_i`, if present.
    pub fn alpha(&self, i: usize) -> Option<&SymplecticForm> {
        i.checked_sub(self.first).and_then(|x| self.alphas.get(x))
    }

    pub fn alpha_matrices(&self) -> Vec<DMatrix<f64>> {
        self.alphas.iter().map(|a| a.matrix().clone()).collect()
    }

    /// `T_k` for `0 <= k <= n + 1`. `T_0` has grade `2(n+1)` and vanishes.
    pub fn t(&self, k: usize) -> &Multivector {
        &self.products[k]
    }

    pub fn volume(&self) -> &Multivector {
        &self.volume
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k > self.n {
            return Err(Error::GradeOutOfRange { k, max: self.n });
        }
        Ok(())
    }

    /// `u∧T_k = 0`, relative to `‖u‖·‖T_k‖`.
    pub fn is_t_primitive(&self, k: usize, u: &Multivector) -> Result<PrimitivityCheck> {
        self.check_k(k)?;
        if let Some(g) = u.homogeneous_grade()? {
            if g != k {
                return Err(Error::Precondition(format!("expected a {k}-form, got grade {g}")));
            }
        }
        let t = self.t(k);
        if u.is_zero() || t.is_zero() {
            return Ok(PrimitivityCheck { primitive: true, residual: 0.0, relative: 0.0 });
        }
        let residual = (u ^ t).norm();
        let relative = residual / (u.norm() * t.norm());
        Ok(PrimitivityCheck { primitive: relative <= T_PRIMITIVITY_TOL, residual, relative })
    }

    /// Real orthonormal basis of `{u ∈ ∧^k : u∧T_k = 0}` as slice columns.
    fn t_primitive_columns(&self, k: usize) -> Result<DMatrix<f64>> {
        self.check_k(k)?;
        let basis = nullspace(&wedge_matrix(self.t(k), k), T_PRIMITIVITY_TOL);
        let expected = binomial(2 * self.n, k as i64) - binomial(2 * self.n, k as i64 - 2);
        if basis.ncols() != expected {
            return Err(Error::RankDeficient { expected, found: basis.ncols() });
        }
        Ok(basis)
    }

    pub fn t_primitive_basis(&self, k: usize) -> Result<Vec<Multivector>> {
        Ok(columns_to_forms(self.n, k, &self.t_primitive_columns(k)?))
    }

    /// Singular values of `u ↦ u∧T_{k+1}` from grade `k` to `2n - k`.
    pub fn mixed_hl_rank(&self, k: usize) -> Result<MhlReport> {
        self.check_k(k)?;
        let s = singular_values(&wedge_matrix(self.t(k + 1), k));
        let expected = binomial(2 * self.n, k as i64);
        let sigma_max = s.first().copied().unwrap_or(0.0);
        let sigma_min = if s.len() == expected { s.last().copied().unwrap_or(0.0) } else { 0.0 };
        let normalized = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
        let rank = s.iter().filter(|&&x| sigma_max > 0.0 && x > MHL_TOL * sigma_max).count();
        Ok(MhlReport {
            k,
            rank,
            expected,
            sigma_min,
            sigma_max,
            normalized_sigma_min: normalized,
            full_rank: rank == expected && normalized > MHL_TOL,
        })
    }

    /// Orthonormal basis of the `T_k`-primitive `(p,q)`-forms.
    pub fn t_primitive_pq_basis(&self, p: usize, q: usize) -> Result<Vec<Multivector>> {
        let k = p + q;
        let real = self.t_primitive_basis(k)?;
        let len = basis::slices(self.n).len(k);
        let mut cols = DMatrix::zeros(len, real.len());
        for (c, u) in real.iter().enumerate() {
            let part = self.j.pq_project(u, p, q)?;
            cols.set_column(c, &part.slice(k).coeffs);
        }
        let ortho = column_space_complex(&cols, T_PRIMITIVITY_TOL);
        let expected = if k == 0 {
            1
        } else if p > self.n || q > self.n {
            0
        } else {
            primitive_pq_dimension(self.n, p, q)
        };
        if ortho.ncols() != expected {
            return Err(Error::RankDeficient { expected, found: ortho.ncols() });
        }
        Ok((0..ortho.ncols())
            .map(|c| {
                let coeffs = DVector::from_iterator(len, ortho.column(c).iter().copied());
                Multivector::from_slice(&GradedSlice { n: self.n, k, coeffs })
            })
            .collect())
    }

    /// `G_ab = (-1)^{k(k+1)/2} c(T_{k+1}∧u_a∧conj(J u_b))` over an
    /// orthonormal basis of `T_k`-primitive `(p,q)`-forms.
    pub fn mixed_hr_gram(&self, p: usize, q: usize) -> Result<MhrReport> {
        let k = p + q;
        self.check_k(k)?;
        let basis = self.t_primitive_pq_basis(p, q)?;
        let t = self.t(k + 1);
        let weil: Vec<Multivector> = basis
            .iter()
            .map(|u| self.j.weil_apply(u).map(|x| x.conj()))
            .collect::<Result<_>>()?;
        let sign = lefschetz_sign(k);
        let left: Vec<Multivector> = basis.iter().map(|u| t ^ u).collect();
        let d = basis.len();
        let mut gram = DMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                gram[(a, b)] = (&left[a] ^ &weil[b]).top_coefficient(&self.volume)? * sign;
            }
        }
        let (ev, asymmetry) = hermitian_eigenvalues(&gram);
        Ok(MhrReport {
            k,
            pq: [p, q],
            dimension: d,
            min_eigenvalue: ev.first().copied().unwrap_or(f64::INFINITY),
            asymmetry,
            gram,
        })
    }

    /// Every `(p,q)` block with `p + q = k`.
    pub fn mixed_hr_all(&self, k: usize) -> Result<Vec<MhrReport>> {
        (0..=k).map(|p| self.mixed_hr_gram(p, k - p)).collect()
    }

    /// Smallest Gram eigenvalue over all `k <= n` and all `(p,q)`.
    pub fn min_gram_eigenvalue(&self) -> Result<f64> {
        let mut min = f64::INFINITY;
        for k in 0..=self.n {
            for r in self.mixed_hr_all(k)? {
                min = min.min(r.min_eigenvalue);
            }
        }
        Ok(min)
    }

    /// Collection with `α_j^t = (1-t)α_j + t·ω` for a reference form `ω`.
    pub fn deform_towards(&self, omega: &DMatrix<f64>, t: f64) -> Result<Self> {
        let alphas: Vec<DMatrix<f64>> =
            self.alphas.iter().map(|a| a.matrix() * (1.0 - t) + omega * t).collect();
        Self::new(self.j.clone(), &alphas)
    }

    /// Minimum Gram eigenvalue along `t = 0, 1/(s-1), …, 1` deforming
    /// towards the standard form.
    pub fn deformation_path(&self, samples: usize) -> Result<Vec<(f64, f64)>> {
        let omega = standard_matrix(self.n);
        (0..samples)
            .map(|i| {
                let t = i as f64 / (samples.max(2) - 1) as f64;
                Ok((t, self.deform_towards(&omega, t)?.min_gram_eigenvalue()?))
            })
            .collect()
    }
}

/// The graded space `V_T = T∧(ℂ⊗∧V*)` for `T = α_{m+1}∧⋯∧α_n`, with
/// `L = ω∧·` restricted to it. Grade `k` of `V_T` sits in ambient grade
/// `k + 2(n - m)`.
#[derive(Debug)]
pub struct TSpace {
    n: usize,
    m: usize,
    t: Multivector,
    omega: SymplecticForm,
    /// Orthonormal real bases of `V_T^k` (ambient slice columns), `k = 0..=2m`.
    bases: Vec<DMatrix<f64>>,
    space: LefschetzSpace,
}

impl TSpace {
    /// `factors` are `α_{m+1}, …, α_n`; `m = n - factors.len()`.
    pub fn new(omega: SymplecticForm, factors: &[SymplecticForm]) -> Result<Self> {
        let n = omega.n();
        if factors.len() > n {
            return Err(Error::Precondition(format!("at most {n} factors allowed")));
        }
        if let Some(f) = factors.iter().find(|f| f.n() != n) {
            return Err(Error::DimensionMismatch { left: n, right: f.n() });
        }
        let m = n - factors.len();
        let shift = 2 * (n - m);
        let t = factors
            .iter()
            .fold(Multivector::scalar(n, 1.0), |acc, f| f.two_form() ^ &acc);
        let mut bases = Vec::with_capacity(2 * m + 1);
        for k in 0..=2 * m {
            let b = column_space(&wedge_matrix(&t, k), T_PRIMITIVITY_TOL);
            let expected = binomial(2 * n, k.min(2 * m - k) as i64);
            if b.ncols() != expected {
                return Err(Error::RankDeficient { expected, found: b.ncols() });
            }
            bases.push(b);
        }
        let dims: Vec<usize> = bases.iter().map(|b| b.ncols()).collect();
        let raise = (0..(2 * m).saturating_sub(1))
            .map(|k| {
                let l = wedge_matrix(omega.two_form(), k + shift);
                bases[k + 2].transpose() * l * &bases[k]
            })
            .collect();
        let space = LefschetzSpace::new(m, dims, raise)?;
        Ok(TSpace { n, m, t, omega, bases, space })
    }

    pub fn from_collection(omega: SymplecticForm, mc: &MixedCollection, m: usize) -> Result<Self> {
        if m > mc.n() {
            return Err(Error::GradeOutOfRange { k: m, max: mc.n() });
        }
        let factors: Vec<SymplecticForm> =
            ((m + 1)..=mc.n()).map(|i| mc.alpha(i).expect("index in range").clone()).collect();
        Self::new(omega, &factors)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> &Multivector {
        &self.t
    }

    fn shift(&self) -> usize {
        2 * (self.n - self.m)
    }

    /// `T∧u`.
    pub fn f_t(&self, u: &Multivector) -> Result<Multivector> {
        self.t.wedge(u)
    }

    /// Coordinates of `u ∈ V_T^k` in the stored basis and the grade `k`.
    fn coordinates(&self, u: &Multivector) -> Result<(usize, DVector<C64>)> {
        let ambient = u
            .homogeneous_grade()?
            .ok_or_else(|| Error::Precondition("zero form has no grade".into()))?;
        let k = ambient
            .checked_sub(self.shift())
            .filter(|&k| k <= 2 * self.m)
            .ok_or(Error::NotInImage { distance: 1.0 })?;
        let y = u.slice(ambient).coeffs;
        let b = crate::linalg::to_complex(&self.bases[k]);
        let x = b.adjoint() * &y;
        let distance = (&b * &x - &y).norm() / y.norm();
        if distance > MEMBERSHIP_TOL {
            return Err(Error::NotInImage { distance });
        }
        Ok((k, x))
    }

    fn form_at(&self, k: usize, x: &DVector<C64>) -> Multivector {
        let coeffs = crate::linalg::to_complex(&self.bases[k]) * x;
        Multivector::from_slice(&GradedSlice { n: self.n, k: k + self.shift(), coeffs })
    }

    /// Relative distance of `u` from `V_T`.
    pub fn membership_distance(&self, u: &Multivector) -> Result<f64> {
        match self.coordinates(u) {
            Ok(_) => Ok(0.0),
            Err(Error::NotInImage { distance }) => Ok(distance),
            Err(e) => Err(e),
        }
    }

    /// Lefschetz star of `V_T`: `L_r u ↦ (-1)^{k(k+1)/2} L_{m-r-k} u` for
    /// primitive `u ∈ V_T^k`.
    pub fn star(&self, u: &Multivector) -> Result<Multivector> {
        if u.is_zero() {
            return Ok(u.clone());
        }
        let (k, x) = self.coordinates(u)?;
        let y = self.space.star(k, &x)?;
        Ok(self.form_at(2 * self.m - k, &y))
    }

    /// Unique `x` with `T∧x = u`, by least squares with a residual check.
    pub fn f_t_inverse(&self, u: &Multivector) -> Result<Multivector> {
        let (k, _) = self.coordinates(u)?;
        let ambient = k + self.shift();
        let a = crate::linalg::to_complex(&wedge_matrix(&self.t, k));
        let y = u.slice(ambient).coeffs;
        let svd = a.clone().svd(true, true);
        let x = svd
            .solve(&y, 1e-12 * svd.singular_values.max())
            .map_err(|e| Error::SingularSolve(e.to_string()))?;
        let distance = (&a * &x - &y).norm() / y.norm();
        if distance > MEMBERSHIP_TOL {
            return Err(Error::NotInImage { distance });
        }
        Ok(Multivector::from_slice(&GradedSlice { n: self.n, k, coeffs: x }))
    }

    /// Hodge star `* = *_s∘J` on `V_T`.
    pub fn hodge_star(&self, j: &ComplexStructure, u: &Multivector) -> Result<Multivector> {
        self.star(&j.weil_apply(u)?)
    }

    /// Pointwise inner product `(u, v)_T`, normalized by `c(ω_m∧T)`.
    pub fn inner(&self, j: &ComplexStructure, u: &Multivector, v: &Multivector) -> Result<C64> {
        let (k, _) = self.coordinates(u)?;
        let (kv, _) = self.coordinates(v)?;
        if k != kv {
            return Err(Error::Precondition(format!("grades {k} and {kv} differ")));
        }
        let star_v = self.hodge_star(j, v)?;
        let product = if k <= self.m {
            &self.f_t_inverse(u)? ^ &star_v.conj()
        } else {
            u ^ &self.f_t_inverse(&star_v)?.conj()
        };
        let vol = oriented_volume(self.omega.two_form())?;
        let norm = (&self.omega.omega_power(self.m) ^ &self.t).top_coefficient(&vol)?;
        if product.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(product.top_coefficient(&vol)? / norm)
    }
}

/// Alexandrov-Fenchel comparison `c(α₁α₂T)² ≥ c(α₁²T)·c(α₂²T)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AfReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub holds: bool,
    /// `‖α₁/‖α₁‖ - α₂/‖α₂‖‖`.
    pub proportionality_residual: f64,
}

struct AfInputs {
    alpha1: SymplecticForm,
    alpha2: SymplecticForm,
    t: Multivector,
    volume: Multivector,
}

fn af_inputs(j: &ComplexStructure, alpha1: &DMatrix<f64>, alpha2: &DMatrix<f64>, t_factors: &[DMatrix<f64>]) -> Result<AfInputs> {
    let n = j.n();
    if n < 2 || t_factors.len() != n - 2 {
        return Err(Error::Precondition(format!(
            "need n >= 2 and n - 2 = {} factors of T, got {}",
            n.saturating_sub(2),
            t_factors.len()
        )));
    }
    let a1 = validate_positive(j, alpha1, 1, "alpha1")?;
    let a2 = validate_positive(j, alpha2, 2, "alpha2")?;
    let mut t = Multivector::scalar(n, 1.0);
    for (i, m) in t_factors.iter().enumerate() {
        let f = validate_positive(j, m, i + 3, &format!("t_factors[{i}]"))?;
        t = f.two_form() ^ &t;
    }
    let volume = oriented_volume(a1.two_form())?;
    Ok(AfInputs { alpha1: a1, alpha2: a2, t, volume })
}

pub fn af_check(
    j: &ComplexStructure,
    alpha1: &DMatrix<f64>,
    alpha2: &DMatrix<f64>,
    t_factors: &[DMatrix<f64>],
) -> Result<AfReport> {
    let inp = af_inputs(j, alpha1, alpha2, t_factors)?;
    let (a1, a2) = (inp.alpha1.two_form(), inp.alpha2.two_form());
    let c = |x: &Multivector| -> Result<f64> { Ok((x ^ &inp.t).top_coefficient(&inp.volume)?.re) };
    let mixed = c(&(a1 ^ a2))?;
    let lhs = mixed * mixed;
    let rhs = c(&(a1 ^ a1))? * c(&(a2 ^ a2))?;
    let gap = lhs - rhs;
    let unit = |m: &DMatrix<f64>| m / m.norm();
    Ok(AfReport {
        lhs,
        rhs,
        gap,
        holds: lhs >= rhs - 1e-9 * lhs.abs().max(rhs.abs()),
        proportionality_residual: (unit(alpha1) - unit(alpha2)).norm(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiScan {
    pub samples: Vec<[f64; 2]>,
    pub second_differences: Vec<f64>,
    pub min_second_difference: f64,
    pub convex: bool,
}

/// `t_i = (i + 1)/(points + 1)`, strictly inside `(0, 1)`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| (i + 1) as f64 / (points + 1) as f64).collect()
}

/// `ψ(t) = -log c(ω_t²/2∧T)` with `ω_t = tα₁ + (1-t)α₂`, and its
/// second divided differences on `grid`.
pub fn psi_convexity_scan(
    j: &ComplexStructure,
    alpha1: &DMatrix<f64>,
    alpha2: &DMatrix<f64>,
    t_factors: &[DMatrix<f64>],
    grid: &[f64],
) -> Result<PsiScan> {
    let inp = af_inputs(j, alpha1, alpha2, t_factors)?;
    if grid.len() < 3 {
        return Err(Error::Precondition("grid needs at least three points".into()));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t < 1.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be increasing and inside (0, 1)".into()));
    }
    let mut samples = Vec::with_capacity(grid.len());
    for &t in grid {
        let m = alpha1 * t + alpha2 * (1.0 - t);
        let w = validate_positive(j, &m, 0, &format!("omega(t = {t})")).map_err(|e| match e {
            Error::InvalidForm { reason, .. } => Error::Precondition(reason),
            other => other,
        })?;
        let o = w.two_form();
        let c = (&(o ^ o) ^ &inp.t).top_coefficient(&inp.volume)?.re / 2.0;
        if c <= 0.0 {
            return Err(Error::Precondition(format!("non-positive volume {c:e} at t = {t}")));
        }
        samples.push([t, -c.ln()]);
    }
    let second_differences: Vec<f64> = samples
        .windows(3)
        .map(|w| {
            let (h0, h1) = (w[1][0] - w[0][0], w[2][0] - w[1][0]);
            2.0 * (w[2][1] * h0 - w[1][1] * (h0 + h1) + w[0][1] * h1) / (h0 * h1 * (h0 + h1))
        })
        .collect();
    let min = second_differences.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PsiScan { samples, second_differences, min_second_difference: min, convex: min >= -1e-9 })
}

/// Reference volume used for mixed top coefficients of `α₁^n`.
pub fn volume_for(alpha: &SymplecticForm) -> Result<Multivector> {
    oriented_volume(alpha.two_form())
}

#[derive(Serialize, Deserialize)]
struct CollectionJson {
    n: usize,
    #[serde(rename = "J", with = "rows")]
    j: DMatrix<f64>,
    alphas: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<CollectionJson> for MixedCollection {
    type Error = Error;
    fn try_from(json: CollectionJson) -> Result<Self> {
        check_n(json.n)?;
        let j = ComplexStructure::new(json.j)?;
        if j.n() != json.n {
            return Err(Error::DimensionMismatch { left: json.n, right: j.n() });
        }
        let alphas = json
            .alphas
            .iter()
            .map(|m| rows::from_rows(m).map_err(Error::Precondition))
            .collect::<Result<Vec<_>>>()?;
        MixedCollection::new(j, &alphas)
    }
}

impl<'de> Deserialize<'de> for MixedCollection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = CollectionJson::deserialize(d)?;
        MixedCollection::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl Serialize for MixedCollection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CollectionJson {
            n: self.n,
            j: self.j.matrix().clone(),
            alphas: self.alphas.iter().map(|a| rows::to_rows(a.matrix())).collect(),
        }
        .serialize(s)
    }
}
