//! Symplectic forms, Darboux bases, the induced pairing on forms, the
//! symplectic star, primitivity, Lefschetz decomposition and the
//! `(L, Λ, B)` triple.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::{self, binomial, factorial, Blade, MAX_N};
use crate::error::{Error, Result};
use crate::lefschetz::LefschetzSpace;
use crate::multivector::{check_n, GradedSlice, Multivector, C64};

/// Antisymmetry tolerance, relative to the largest entry.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Smallest admissible Darboux pivot, relative to the largest entry.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Default relative tolerance for primitivity tests.
pub const PRIMITIVITY_TOL: f64 = 1e-9;

/// A nondegenerate antisymmetric bilinear form on a `2n`-dimensional space,
/// given by its matrix `ω(b_i, b_j)` in the working basis.
#[derive(Debug, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct SymplecticForm {
    n: usize,
    matrix: DMatrix<f64>,
    two_form: Multivector,
    /// `ω^{-1}(b_i*, b_j*)`, the inverse of `matrix`.
    dual_pairing: DMatrix<f64>,
    darboux: DarbouxBasis,
    volume: OnceLock<Multivector>,
    space: OnceLock<LefschetzSpace>,
}

impl Clone for SymplecticForm {
    fn clone(&self) -> Self {
        SymplecticForm {
            n: self.n,
            matrix: self.matrix.clone(),
            two_form: self.two_form.clone(),
            dual_pairing: self.dual_pairing.clone(),
            darboux: self.darboux.clone(),
            volume: OnceLock::new(),
            space: OnceLock::new(),
        }
    }
}

impl PartialEq for SymplecticForm {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// Darboux frame of a symplectic form.
///
/// `vectors` holds the Darboux vectors `e_1, f_1, …, e_n, f_n` as columns in
/// the working basis, so `vectors^T · ω · vectors` is the standard block
/// form. `covectors = vectors^{-T}` holds the dual Darboux covectors
/// `e_1*, f_1*, …` as columns in the working dual basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarbouxBasis {
    pub n: usize,
    #[serde(rename = "matrix", with = "rows")]
    pub vectors: DMatrix<f64>,
    #[serde(with = "rows")]
    pub covectors: DMatrix<f64>,
    pub residual: f64,
}

/// Standard block matrix with `ω(e_j, f_j) = 1`.
pub fn standard_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

fn two_form_from_matrix(n: usize, m: &DMatrix<f64>) -> Multivector {
    let mut terms = Vec::new();
    for i in 0..2 * n {
        for j in (i + 1)..2 * n {
            if m[(i, j)] != 0.0 {
                terms.push((Blade((1 << i) | (1 << j)), C64::new(m[(i, j)], 0.0)));
            }
        }
    }
    Multivector::from_terms(n, terms).expect("n already validated")
}

/// Matrices of `u ↦ form ∧ u` from grade `j` to `j + 2`, `j = 0..=2n-2`, in
/// lexicographic slice coordinates. `form` must be a real two-form.
pub(crate) fn raise_matrices(form: &Multivector) -> Vec<DMatrix<f64>> {
    let n = form.n();
    let table = basis::slices(n);
    (0..=(2 * n - 2))
        .map(|j| {
            let mut m = DMatrix::zeros(table.len(j + 2), table.len(j));
            for (col, &mask) in table.masks(j).iter().enumerate() {
                let e = Multivector::blade(n, Blade(mask), C64::new(1.0, 0.0));
                for (b, c) in (form ^ &e).terms() {
                    m[(table.position(b.mask()), col)] = c.re;
                }
            }
            m
        })
        .collect()
}

fn graded_dims(n: usize) -> Vec<usize> {
    (0..=2 * n).map(|k| binomial(2 * n, k as i64)).collect()
}

static STANDARD_SPACES: [OnceLock<LefschetzSpace>; MAX_N + 1] =
    [const { OnceLock::new() }; MAX_N + 1];

/// The Lefschetz space of the standard form, shared across all Darboux
/// transports of dimension `n`.
fn standard_space(n: usize) -> &'static LefschetzSpace {
    STANDARD_SPACES[n].get_or_init(|| {
        let form = two_form_from_matrix(n, &standard_matrix(n));
        LefschetzSpace::new(n, graded_dims(n), raise_matrices(&form))
            .expect("standard shapes are consistent")
    })
}

/// Skew Gram-Schmidt with full pivoting: repeatedly split off the pair with
/// the largest `|ω(v_i, v_j)|` and project the rest onto its
/// `ω`-orthogonal complement.
pub fn darboux_basis(matrix: &DMatrix<f64>) -> Result<DarbouxBasis> {
    let dim = matrix.nrows();
    let n = dim / 2;
    let scale = matrix.amax();
    let threshold = DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    let form = |u: &DVector<f64>, v: &DVector<f64>| (u.transpose() * matrix * v)[(0, 0)];

    let mut pool: Vec<DVector<f64>> = (0..dim)
        .map(|i| {
            let mut v = DVector::zeros(dim);
            v[i] = 1.0;
            v
        })
        .collect();
    let mut q = DMatrix::zeros(dim, dim);
    for step in 0..n {
        let (mut bi, mut bj, mut best) = (0, 1, -1.0f64);
        for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                let w = form(&pool[i], &pool[j]).abs();
                if w > best {
                    (bi, bj, best) = (i, j, w);
                }
            }
        }
        if best < threshold || scale == 0.0 {
            return Err(Error::Degenerate { pivot: best.max(0.0), threshold });
        }
        let w = form(&pool[bi], &pool[bj]);
        let root = w.abs().sqrt();
        let e = &pool[bi] / root;
        let f = &pool[bj] * (w.signum() / root);
        pool.remove(bj);
        pool.remove(bi);
        for u in pool.iter_mut() {
            let ue = form(u, &e);
            let uf = form(u, &f);
            *u = &*u - &e * uf + &f * ue;
        }
        q.set_column(2 * step, &e);
        q.set_column(2 * step + 1, &f);
    }
    let pulled = q.transpose() * matrix * &q;
    let residual = (pulled - standard_matrix(n)).amax();
    let covectors = q
        .clone()
        .try_inverse()
        .ok_or(Error::Degenerate { pivot: 0.0, threshold })?
        .transpose();
    Ok(DarbouxBasis { n, vectors: q, covectors, residual })
}

impl SymplecticForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows % 2 == 1 || rows == 0 {
            return Err(Error::Shape { expected: rows.max(cols) + rows % 2, rows, cols });
        }
        let n = rows / 2;
        check_n(n)?;
        let scale = matrix.amax().max(1.0);
        let residual = (&matrix + matrix.transpose()).amax();
        if residual > ANTISYMMETRY_TOL * scale {
            return Err(Error::NotAntisymmetric { residual });
        }
        let darboux = darboux_basis(&matrix)?;
        let dual_pairing = matrix
            .clone()
            .try_inverse()
            .ok_or(Error::Degenerate { pivot: 0.0, threshold: 0.0 })?;
        let two_form = two_form_from_matrix(n, &matrix);
        Ok(SymplecticForm {
            n,
            matrix,
            two_form,
            dual_pairing,
            darboux,
            volume: OnceLock::new(),
            space: OnceLock::new(),
        })
    }

    /// `Σ_j e_j*∧f_j*`.
    pub fn standard(n: usize) -> Result<Self> {
        check_n(n)?;
        Self::new(standard_matrix(n))
    }

    /// From a real two-form given as a multivector.
    pub fn from_two_form(form: &Multivector) -> Result<Self> {
        let n = form.n();
        if form.homogeneous_grade()?.is_some_and(|g| g != 2) {
            return Err(Error::Precondition("symplectic form must be a 2-form".into()));
        }
        if form.terms().iter().any(|(_, c)| c.im != 0.0) {
            return Err(Error::Precondition("symplectic form must be real".into()));
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (b, c) in form.terms() {
            let idx = b.indices();
            m[(idx[0], idx[1])] = c.re;
            m[(idx[1], idx[0])] = -c.re;
        }
        Self::new(m)
    }

    /// Block sum `ω₁ ⊕ ω₂` on `V₁ ⊕ V₂` (generators of `V₂` come after `V₁`).
    pub fn direct_sum(a: &SymplecticForm, b: &SymplecticForm) -> Result<Self> {
        let (da, db) = (2 * a.n, 2 * b.n);
        let mut m = DMatrix::zeros(da + db, da + db);
        m.view_mut((0, 0), (da, da)).copy_from(&a.matrix);
        m.view_mut((da, da), (db, db)).copy_from(&b.matrix);
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `ω = Σ_{i<j} ω_ij b_i*∧b_j*`.
    pub fn two_form(&self) -> &Multivector {
        &self.two_form
    }

    pub fn darboux(&self) -> &DarbouxBasis {
        &self.darboux
    }

    /// `ω_n = ω^n / n!`.
    pub fn volume(&self) -> &Multivector {
        self.volume
            .get_or_init(|| self.two_form.power(self.n).scale(1.0 / factorial(self.n)))
    }

    /// `ω_r = ω^r / r!`.
    pub fn omega_power(&self, r: usize) -> Multivector {
        self.two_form.power(r).scale(1.0 / factorial(r))
    }

    /// Lefschetz space of `u ↦ ω∧u` in working-basis slice coordinates.
    pub fn lefschetz_space(&self) -> &LefschetzSpace {
        self.space.get_or_init(|| {
            LefschetzSpace::new(self.n, graded_dims(self.n), raise_matrices(&self.two_form))
                .expect("shapes are consistent")
        })
    }

    fn check_dim(&self, u: &Multivector) -> Result<()> {
        if u.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: u.n() });
        }
        Ok(())
    }

    /// The pairing `ω^{-1}(μ, ν)`: on blades the determinant of one-form
    /// pairings, extended bilinearly; different grades pair to zero.
    pub fn pairing(&self, mu: &Multivector, nu: &Multivector) -> Result<C64> {
        self.check_dim(mu)?;
        self.check_dim(nu)?;
        let mut acc = C64::new(0.0, 0.0);
        for (a, ca) in mu.terms() {
            let ia = a.indices();
            for (b, cb) in nu.terms() {
                if a.grade() != b.grade() {
                    continue;
                }
                let ib = b.indices();
                let p = ia.len();
                let det = if p == 0 {
                    1.0
                } else {
                    DMatrix::from_fn(p, p, |r, c| self.dual_pairing[(ia[r], ib[c])]).determinant()
                };
                acc += ca * cb * det;
            }
        }
        Ok(acc)
    }

    /// Symplectic star: transport to Darboux coordinates, split into
    /// primitive pieces, send `ω_r∧u ↦ (-1)^{k(k+1)/2} ω_{n-k-r}∧u` and
    /// transport back.
    pub fn star(&self, u: &Multivector) -> Result<Multivector> {
        self.check_dim(u)?;
        let n = self.n;
        let local = u.map_generators_real(&self.darboux.vectors);
        let space = standard_space(n);
        let mut dense = vec![C64::new(0.0, 0.0); 1 << (2 * n)];
        let table = basis::slices(n);
        for k in local.grades() {
            let x = local.slice(k).coeffs;
            let y = space.star(k, &x)?;
            for (pos, &mask) in table.masks(2 * n - k).iter().enumerate() {
                dense[mask as usize] += y[pos];
            }
        }
        let scale = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let image = Multivector::from_dense(n, &dense, scale);
        Ok(image.map_generators_real(&self.darboux.covectors.transpose()))
    }

    /// `L u = ω∧u`.
    pub fn lefschetz(&self, u: &Multivector) -> Result<Multivector> {
        self.two_form.wedge(u)
    }

    /// `Λ = *_s L *_s` (the star is an involution).
    pub fn dual_lefschetz(&self, u: &Multivector) -> Result<Multivector> {
        self.star(&self.lefschetz(&self.star(u)?)?)
    }

    /// `B = [L, Λ]`.
    pub fn weight(&self, u: &Multivector) -> Result<Multivector> {
        let l_lambda = self.lefschetz(&self.dual_lefschetz(u)?)?;
        let lambda_l = self.dual_lefschetz(&self.lefschetz(u)?)?;
        Ok(&l_lambda - &lambda_l)
    }

    pub fn sl2_apply(&self, op: Sl2Operator, u: &Multivector) -> Result<Multivector> {
        match op {
            Sl2Operator::L => self.lefschetz(u),
            Sl2Operator::Lambda => self.dual_lefschetz(u),
            Sl2Operator::B => self.weight(u),
        }
    }

    /// Primitivity test `ω^{n-k+1}∧u = 0` relative to `‖u‖·‖ω‖^{n-k+1}`.
    pub fn is_primitive(&self, u: &Multivector, tol: f64) -> Result<PrimitivityCheck> {
        self.check_dim(u)?;
        let Some(k) = u.homogeneous_grade()? else {
            return Ok(PrimitivityCheck { primitive: true, residual: 0.0, relative: 0.0 });
        };
        if k > self.n {
            let residual = u.norm();
            return Ok(PrimitivityCheck { primitive: false, residual, relative: 1.0 });
        }
        let power = self.n - k + 1;
        let residual = (&self.two_form.power(power) ^ u).norm();
        let relative = residual / (u.norm() * self.two_form.norm().powi(power as i32));
        Ok(PrimitivityCheck { primitive: relative <= tol, residual, relative })
    }

    /// Lefschetz decomposition of a homogeneous form, computed directly
    /// with this form's `L`. Pieces with norm below `1e-12·‖u‖` are dropped.
    pub fn lefschetz_decompose(&self, u: &Multivector) -> Result<LefschetzDecomposition> {
        self.check_dim(u)?;
        let Some(k) = u.homogeneous_grade()? else {
            return Ok(LefschetzDecomposition { n: self.n, k: 0, components: Vec::new() });
        };
        let pieces = self.lefschetz_space().decompose(k, &u.slice(k).coeffs)?;
        let cutoff = 1e-12 * u.norm();
        let components = pieces
            .into_iter()
            .map(|p| LefschetzComponent {
                r: p.r,
                form: Multivector::from_slice(&GradedSlice { n: self.n, k: p.grade, coeffs: p.coords }),
            })
            .filter(|c| c.form.norm() > cutoff)
            .collect();
        Ok(LefschetzDecomposition { n: self.n, k, components })
    }

    /// Solves `ω^{n-k}∧u = v` for `u` of grade `k <= n`.
    pub fn hard_lefschetz_invert(&self, v: &Multivector, k: usize) -> Result<Multivector> {
        self.check_dim(v)?;
        if k > self.n {
            return Err(Error::GradeOutOfRange { k, max: self.n });
        }
        let target = 2 * self.n - k;
        if let Some(g) = v.homogeneous_grade()? {
            if g != target {
                return Err(Error::Precondition(format!(
                    "expected a form of grade {target}, got grade {g}"
                )));
            }
        }
        let x = self.lefschetz_space().hard_lefschetz_solve(k, &v.slice(target).coeffs)?;
        let u = Multivector::from_slice(&GradedSlice { n: self.n, k, coeffs: x });
        let back = &self.two_form.power(self.n - k) ^ &u;
        let residual = (&back - v).norm();
        if residual > 1e-9 * v.norm().max(f64::MIN_POSITIVE) && residual > 0.0 {
            return Err(Error::SingularSolve(format!(
                "hard Lefschetz inversion left residual {residual:e}"
            )));
        }
        Ok(u)
    }
}

/// Spanning set of elementary primitive `k`-forms for the standard form.
///
/// Each element is a wedge product over disjoint Darboux pairs of factors
/// `e_j*` or `f_j*` (one pair each) and, on two pairs `i < j`, one of
/// `(e_i*+e_j*)∧(f_i*-f_j*)`, `e_i*∧f_j*`, `f_i*∧e_j*`. Every factor is the
/// leading part of a Darboux basis of its block, so the products are
/// elementary.
pub fn elementary_primitive_basis(n: usize, k: usize) -> Result<Vec<Multivector>> {
    check_n(n)?;
    if k > n {
        return Err(Error::GradeOutOfRange { k, max: n });
    }
    let e = |j: usize| Multivector::generator(n, 2 * j);
    let f = |j: usize| Multivector::generator(n, 2 * j + 1);
    let mut out = Vec::new();
    let mut used = vec![false; n];

    fn recurse(
        j: usize,
        budget: usize,
        acc: Multivector,
        used: &mut Vec<bool>,
        out: &mut Vec<Multivector>,
        e: &dyn Fn(usize) -> Multivector,
        f: &dyn Fn(usize) -> Multivector,
    ) {
        let n = used.len();
        if budget == 0 {
            out.push(acc);
            return;
        }
        if j >= n {
            return;
        }
        if used[j] {
            recurse(j + 1, budget, acc, used, out, e, f);
            return;
        }
        recurse(j + 1, budget, acc.clone(), used, out, e, f);
        used[j] = true;
        for single in [e(j), f(j)] {
            recurse(j + 1, budget - 1, &acc ^ &single, used, out, e, f);
        }
        if budget >= 2 {
            for l in (j + 1)..n {
                if used[l] {
                    continue;
                }
                used[l] = true;
                let couples = [
                    &(&e(j) + &e(l)) ^ &(&f(j) - &f(l)),
                    &e(j) ^ &f(l),
                    &f(j) ^ &e(l),
                ];
                for c in couples {
                    recurse(j + 1, budget - 2, &acc ^ &c, used, out, e, f);
                }
                used[l] = false;
            }
        }
        used[j] = false;
    }

    recurse(0, k, Multivector::scalar(n, 1.0), &mut used, &mut out, &e, &f);
    Ok(out)
}

/// `C(2n, k) - C(2n, k-2)`, the dimension of the primitive `k`-forms.
pub fn primitive_dimension(n: usize, k: usize) -> usize {
    binomial(2 * n, k as i64) - binomial(2 * n, k as i64 - 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sl2Operator {
    L,
    Lambda,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrimitivityCheck {
    pub primitive: bool,
    /// `‖ω^{n-k+1}∧u‖`.
    pub residual: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LefschetzComponent {
    pub r: usize,
    pub form: Multivector,
}

/// `u = Σ_r ω_r∧u^r` with `u^r` primitive of grade `k - 2r`.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzDecomposition {
    pub n: usize,
    pub k: usize,
    pub components: Vec<LefschetzComponent>,
}

impl LefschetzDecomposition {
    pub fn reconstruct(&self, omega: &SymplecticForm) -> Multivector {
        let mut acc = Multivector::zero(self.n);
        for c in &self.components {
            acc = &acc + &(&omega.omega_power(c.r) ^ &c.form);
        }
        acc
    }

    pub fn report(&self, omega: &SymplecticForm, input: &Multivector) -> DecompositionReport {
        DecompositionReport {
            k: self.k,
            components: self.components.clone(),
            reconstruction_residual: (&self.reconstruct(omega) - input).norm(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub k: usize,
    pub components: Vec<LefschetzComponent>,
    pub reconstruction_residual: f64,
}

/// Row-major `[[...], ...]` (de)serialization for dense matrices.
pub(crate) mod rows {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, String> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err("ragged matrix rows".into());
        }
        Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    #[serde(with = "rows")]
    matrix: DMatrix<f64>,
}

impl TryFrom<MatrixJson> for SymplecticForm {
    type Error = Error;
    fn try_from(json: MatrixJson) -> Result<Self> {
        check_n(json.n)?;
        let (r, c) = json.matrix.shape();
        if r != 2 * json.n || c != 2 * json.n {
            return Err(Error::Shape { expected: 2 * json.n, rows: r, cols: c });
        }
        SymplecticForm::new(json.matrix)
    }
}

impl From<SymplecticForm> for MatrixJson {
    fn from(w: SymplecticForm) -> Self {
        MatrixJson { n: w.n, matrix: w.matrix }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn gen(n: usize, i: usize) -> Multivector {
        Multivector::generator(n, i)
    }

    #[test]
    fn darboux_of_standard_is_identity() {
        let w = SymplecticForm::standard(3).unwrap();
        assert_eq!(w.darboux().vectors, DMatrix::identity(6, 6));
        assert_eq!(w.darboux().residual, 0.0);
    }

    #[test]
    fn darboux_of_scaled_form() {
        let w = SymplecticForm::new(standard_matrix(2) * 4.0).unwrap();
        let d = w.darboux();
        assert!((d.vectors.clone() - DMatrix::identity(4, 4) * 0.5).amax() < 1e-15);
        assert!((d.covectors.clone() - DMatrix::identity(4, 4) * 2.0).amax() < 1e-15);
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn degenerate_and_asymmetric_inputs_are_rejected() {
        let mut m = standard_matrix(2);
        m[(2, 3)] = 0.0;
        m[(3, 2)] = 0.0;
        match SymplecticForm::new(m) {
            Err(Error::Degenerate { pivot, .. }) => assert_eq!(pivot, 0.0),
            other => panic!("expected degeneracy error, got {other:?}"),
        }
        let mut m = standard_matrix(1);
        m[(0, 1)] = 2.0;
        assert!(matches!(SymplecticForm::new(m), Err(Error::NotAntisymmetric { .. })));
        assert!(matches!(
            SymplecticForm::new(DMatrix::zeros(3, 3)),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn pairing_on_one_forms_and_omega() {
        for n in 1..=3 {
            let w = SymplecticForm::standard(n).unwrap();
            assert_eq!(w.pairing(&gen(n, 1), &gen(n, 0)).unwrap(), c(1.0));
            assert_eq!(w.pairing(&gen(n, 0), &gen(n, 1)).unwrap(), c(-1.0));
            if n > 1 {
                assert_eq!(w.pairing(&gen(n, 0), &gen(n, 2)).unwrap(), c(0.0));
            }
            assert_eq!(w.pairing(w.two_form(), w.two_form()).unwrap(), c(n as f64));
        }
    }

    #[test]
    fn star_of_one_and_of_e() {
        for n in 1..=3 {
            let w = SymplecticForm::standard(n).unwrap();
            let s1 = w.star(&Multivector::scalar(n, 1.0)).unwrap();
            assert!((&s1 - w.volume()).norm() < 1e-14);
        }
        let w = SymplecticForm::standard(1).unwrap();
        assert!((&w.star(&gen(1, 0)).unwrap() + &gen(1, 0)).norm() < 1e-14);
    }

    #[test]
    fn star_of_e1f1_in_dimension_four() {
        // e1f1 = ω/2 + (e1f1 - e2f2)/2 ↦ 1/2·1·... : ω_1 ↦ 1 (r=1,k=0), primitive
        // 2-form picks up (-1)^3 = -1, so *(e1f1) = 1/2·ω... = e2f2.
        let w = SymplecticForm::standard(2).unwrap();
        let s = w.star(&(&gen(2, 0) ^ &gen(2, 1))).unwrap();
        let expected = &gen(2, 2) ^ &gen(2, 3);
        assert!((&s - &expected).norm() < 1e-14);
    }

    #[test]
    fn sl2_values_on_small_inputs() {
        for n in 1..=3 {
            let w = SymplecticForm::standard(n).unwrap();
            let lam = w.dual_lefschetz(w.two_form()).unwrap();
            assert!((&lam - &Multivector::scalar(n, n as f64)).norm() < 1e-13);
            let b = w.weight(&Multivector::scalar(n, 1.0)).unwrap();
            assert!((&b + &Multivector::scalar(n, n as f64)).norm() < 1e-13);
            assert!(w.dual_lefschetz(&gen(n, 0)).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn primitivity_examples() {
        for n in 1..=3 {
            let w = SymplecticForm::standard(n).unwrap();
            assert!(w.is_primitive(&gen(n, 0), PRIMITIVITY_TOL).unwrap().primitive);
            if n >= 2 {
                assert!(!w.is_primitive(w.two_form(), PRIMITIVITY_TOL).unwrap().primitive);
            }
        }
        let w = SymplecticForm::standard(2).unwrap();
        let u = &(&gen(2, 0) ^ &gen(2, 1)) - &(&gen(2, 2) ^ &gen(2, 3));
        assert!(w.is_primitive(&u, PRIMITIVITY_TOL).unwrap().primitive);
        let mixed = &Multivector::scalar(2, 1.0) + &gen(2, 0);
        assert!(matches!(
            w.is_primitive(&mixed, PRIMITIVITY_TOL),
            Err(Error::NotHomogeneous { .. })
        ));
        // grade above n is never primitive
        let top3 = &(&gen(2, 0) ^ &gen(2, 1)) ^ &gen(2, 2);
        assert!(!w.is_primitive(&top3, PRIMITIVITY_TOL).unwrap().primitive);
    }

    #[test]
    fn decomposition_of_e1f1() {
        let w = SymplecticForm::standard(2).unwrap();
        let u = &gen(2, 0) ^ &gen(2, 1);
        let d = w.lefschetz_decompose(&u).unwrap();
        assert_eq!(d.components.len(), 2);
        let half_diff = (&u - &(&gen(2, 2) ^ &gen(2, 3))).scale(0.5);
        assert_eq!(d.components[0].r, 0);
        assert!((&d.components[0].form - &half_diff).norm() < 1e-14);
        assert_eq!(d.components[1].r, 1);
        assert!((&d.components[1].form - &Multivector::scalar(2, 0.5)).norm() < 1e-14);
        assert!((&d.reconstruct(&w) - &u).norm() < 1e-14);
    }

    #[test]
    fn decomposition_of_primitive_and_volume() {
        for n in 1..=3 {
            let w = SymplecticForm::standard(n).unwrap();
            let d = w.lefschetz_decompose(&gen(n, 1)).unwrap();
            assert_eq!(d.components.len(), 1);
            assert_eq!(d.components[0].r, 0);
            let d = w.lefschetz_decompose(w.volume()).unwrap();
            assert_eq!(d.components.len(), 1);
            assert_eq!(d.components[0].r, n);
            assert!((&d.components[0].form - &Multivector::scalar(n, 1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn hard_lefschetz_examples() {
        let w = SymplecticForm::standard(2).unwrap();
        let u = w.hard_lefschetz_invert(w.volume(), 0).unwrap();
        assert!((&u - &Multivector::scalar(2, 0.5)).norm() < 1e-14);
        let v = &gen(2, 0) ^ &gen(2, 1);
        assert_eq!(w.hard_lefschetz_invert(&v, 2).unwrap(), v);
        let v = &(&gen(2, 0) ^ &gen(2, 2)) ^ &gen(2, 3);
        let u = w.hard_lefschetz_invert(&v, 1).unwrap();
        assert!((&(w.two_form() ^ &u) - &v).norm() < 1e-14);
        // ω∧e1 = e1 e2 f2
        assert!((&u - &gen(2, 0)).norm() < 1e-14);
        assert!(w.hard_lefschetz_invert(&v, 3).is_err());
    }

    #[test]
    fn elementary_spanning_sets_small() {
        assert_eq!(elementary_primitive_basis(2, 0).unwrap().len(), 1);
        assert!(elementary_primitive_basis(2, 3).is_err());
        let w = SymplecticForm::standard(2).unwrap();
        for u in elementary_primitive_basis(2, 2).unwrap() {
            assert!(w.is_primitive(&u, 1e-12).unwrap().primitive);
        }
    }

    #[test]
    fn json_round_trip() {
        let w = SymplecticForm::standard(2).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"n":2,"matrix":[[0.0,1.0,0.0,0.0],[-1.0,0.0,0.0,0.0],[0.0,0.0,0.0,1.0],[0.0,0.0,-1.0,0.0]]}"#);
        let back: SymplecticForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let bad = r#"{"n":1,"matrix":[[0.0,1.0],[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<SymplecticForm>(bad).is_err());
    }
}
