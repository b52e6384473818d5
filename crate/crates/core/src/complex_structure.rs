//! Almost complex structures, the `(p,q)` bigrading, the Weil operator, the
//! Hodge star and the Hermitian inner product induced by a compatible pair.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{binomial, lefschetz_sign};
use crate::error::{Error, Result};
use crate::linalg::{column_space_complex, symmetric_eigenvalues};
use crate::multivector::{check_n, Multivector, C64};
use crate::symplectic::{rows, SymplecticForm, PRIMITIVITY_TOL};

/// Tolerance on `|J² + I|`, relative to `max(1, |J|²)`.
pub const COMPLEX_STRUCTURE_TOL: f64 = 1e-12;
/// Tolerance on the asymmetry of `g(u, v) = ω(u, Jv)`.
pub const COMPATIBILITY_TOL: f64 = 1e-9;
/// Relative off-bidegree mass tolerated by operations that need pure bidegree.
pub const BIDEGREE_TOL: f64 = 1e-9;

/// A linear map `J` on `V` with `J² = -I`, stored as its matrix on vectors.
/// On one-forms it acts by `(Jv)(u) = v(Ju)`, so generator `i` goes to
/// `Σ_a J[i][a]·b_a*`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComplexJson", into = "ComplexJson")]
pub struct ComplexStructure {
    n: usize,
    matrix: DMatrix<f64>,
    /// Rows `0..n` span `E_i` (type `(1,0)`), rows `n..2n` their conjugates.
    frame: DMatrix<C64>,
    frame_inverse: DMatrix<C64>,
}

impl PartialEq for ComplexStructure {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub symmetric_residual: f64,
    pub min_positivity_eigenvalue: f64,
    pub compatible: bool,
}

/// `u = Σ_{p+q=k} u^{p,q}`; parts are listed by increasing `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PqDecomposition {
    pub k: usize,
    pub parts: Vec<((usize, usize), Multivector)>,
}

impl PqDecomposition {
    pub fn part(&self, p: usize, q: usize) -> Option<&Multivector> {
        self.parts.iter().find(|(pq, _)| *pq == (p, q)).map(|(_, u)| u)
    }

    pub fn sum(&self, n: usize) -> Multivector {
        self.parts.iter().fold(Multivector::zero(n), |acc, (_, u)| &acc + u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HodgeRiemannCheck {
    pub p: usize,
    pub q: usize,
    /// `(u, u)`.
    pub norm_squared: f64,
    /// Top coefficient of `u∧conj(Iu)∧ω_{n-k}`.
    pub top: C64,
    pub residual: f64,
}

impl ComplexStructure {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows % 2 == 1 || rows == 0 {
            return Err(Error::Shape { expected: rows.max(cols) + rows % 2, rows, cols });
        }
        let n = rows / 2;
        check_n(n)?;
        let squared = &matrix * &matrix + DMatrix::identity(rows, rows);
        let residual = squared.amax();
        if residual > COMPLEX_STRUCTURE_TOL * matrix.amax().powi(2).max(1.0) {
            return Err(Error::NotComplexStructure { residual });
        }
        // b_k* - iJb_k* spans E_i as k varies; J b_k* is row k of J.
        let candidates = DMatrix::from_fn(rows, rows, |a, k| {
            C64::new(if a == k { 1.0 } else { 0.0 }, -matrix[(k, a)])
        });
        let basis = column_space_complex(&candidates, 1e-10);
        if basis.ncols() != n {
            return Err(Error::NotComplexStructure { residual });
        }
        let frame = DMatrix::from_fn(rows, rows, |a, i| {
            if a < n {
                basis[(i, a)]
            } else {
                basis[(i, a - n)].conj()
            }
        });
        let frame_inverse = frame
            .clone()
            .try_inverse()
            .ok_or(Error::NotComplexStructure { residual })?;
        Ok(ComplexStructure { n, matrix, frame, frame_inverse })
    }

    /// `J e_j = f_j`, `J f_j = -e_j`.
    pub fn standard(n: usize) -> Result<Self> {
        check_n(n)?;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            m[(2 * j + 1, 2 * j)] = 1.0;
            m[(2 * j, 2 * j + 1)] = -1.0;
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Matrix of the dual action on one-form coefficient vectors, `Jᵀ`.
    pub fn dual_matrix(&self) -> DMatrix<f64> {
        self.matrix.transpose()
    }

    fn check_dim(&self, u: &Multivector) -> Result<()> {
        if u.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: u.n() });
        }
        Ok(())
    }

    /// Splits every grade of `u` by bidegree.
    fn bigraded(&self, u: &Multivector) -> Vec<((usize, usize), Multivector)> {
        let n = self.n;
        let low = (1u32 << n) - 1;
        let local = u.map_generators(&self.frame_inverse);
        let mut buckets: Vec<((usize, usize), Vec<_>)> = Vec::new();
        for &(b, c) in local.terms() {
            let p = (b.mask() & low).count_ones() as usize;
            let q = (b.mask() >> n).count_ones() as usize;
            match buckets.iter_mut().find(|(pq, _)| *pq == (p, q)) {
                Some((_, terms)) => terms.push((b, c)),
                None => buckets.push(((p, q), vec![(b, c)])),
            }
        }
        buckets.sort_by_key(|(pq, _)| (pq.0 + pq.1, pq.0));
        buckets
            .into_iter()
            .map(|(pq, terms)| {
                let part = Multivector::from_terms(n, terms).expect("masks in range");
                (pq, part.map_generators(&self.frame))
            })
            .collect()
    }

    /// Projection onto `∧^{p,q}`.
    pub fn pq_project(&self, u: &Multivector, p: usize, q: usize) -> Result<Multivector> {
        self.check_dim(u)?;
        if p + q > 2 * self.n {
            return Err(Error::GradeOutOfRange { k: p + q, max: 2 * self.n });
        }
        Ok(self
            .bigraded(u)
            .into_iter()
            .find(|(pq, _)| *pq == (p, q))
            .map_or_else(|| Multivector::zero(self.n), |(_, part)| part))
    }

    /// All `(p,q)` parts of a homogeneous form, including zero parts.
    pub fn pq_decompose(&self, u: &Multivector) -> Result<PqDecomposition> {
        self.check_dim(u)?;
        let k = u.homogeneous_grade()?.unwrap_or(0);
        let found = self.bigraded(u);
        let parts = (0..=k)
            .filter(|&p| p <= self.n && k - p <= self.n)
            .map(|p| {
                let part = found
                    .iter()
                    .find(|(pq, _)| *pq == (p, k - p))
                    .map_or_else(|| Multivector::zero(self.n), |(_, x)| x.clone());
                ((p, k - p), part)
            })
            .collect();
        Ok(PqDecomposition { k, parts })
    }

    /// The bidegree of a form that is pure up to [`BIDEGREE_TOL`].
    pub fn bidegree(&self, u: &Multivector) -> Result<(usize, usize)> {
        self.check_dim(u)?;
        let parts = self.bigraded(u);
        let Some((best, _)) = parts
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(pq, x)| (*pq, x.norm()))
        else {
            return Err(Error::Precondition("zero form has no bidegree".into()));
        };
        let off: f64 = parts
            .iter()
            .filter(|(pq, _)| *pq != best)
            .map(|(_, x)| x.norm().powi(2))
            .sum::<f64>()
            .sqrt();
        let off_mass = off / u.norm();
        if off_mass > BIDEGREE_TOL {
            return Err(Error::MixedBidegree { off_mass });
        }
        Ok(best)
    }

    /// Weil operator: the algebra automorphism induced by `J`, equal to
    /// `i^{p-q}` on `∧^{p,q}`.
    pub fn weil_apply(&self, u: &Multivector) -> Result<Multivector> {
        self.check_dim(u)?;
        Ok(u.map_generators_real(&self.matrix))
    }

    /// Whether a real two-form is of type `(1,1)` and positive for this `J`.
    /// Returns the `(1,1)` defect `|JᵀAJ - A|` and the smallest eigenvalue of
    /// the symmetric part of `A·J`.
    pub fn positivity(&self, form: &DMatrix<f64>) -> (f64, f64) {
        let defect = (self.matrix.transpose() * form * &self.matrix - form).amax();
        let ev = symmetric_eigenvalues(&(form * &self.matrix));
        (defect, ev.first().copied().unwrap_or(0.0))
    }
}

/// `g(u, v) = ω(u, Jv)` must be symmetric and positive definite.
pub fn check_compatibility(
    omega: &SymplecticForm,
    j: &ComplexStructure,
) -> Result<CompatibilityReport> {
    if omega.n() != j.n() {
        return Err(Error::DimensionMismatch { left: omega.n(), right: j.n() });
    }
    let g = omega.matrix() * j.matrix();
    let symmetric_residual = (&g - g.transpose()).amax();
    let min_positivity_eigenvalue = symmetric_eigenvalues(&g)[0];
    Ok(CompatibilityReport {
        symmetric_residual,
        min_positivity_eigenvalue,
        compatible: symmetric_residual <= COMPATIBILITY_TOL && min_positivity_eigenvalue > 0.0,
    })
}

fn require_compatible(omega: &SymplecticForm, j: &ComplexStructure) -> Result<()> {
    let r = check_compatibility(omega, j)?;
    if !r.compatible {
        return Err(Error::Incompatible {
            symmetric_residual: r.symmetric_residual,
            min_eigenvalue: r.min_positivity_eigenvalue,
        });
    }
    Ok(())
}

/// `* = *_s ∘ J`.
pub fn hodge_star(omega: &SymplecticForm, j: &ComplexStructure, u: &Multivector) -> Result<Multivector> {
    require_compatible(omega, j)?;
    omega.star(&j.weil_apply(u)?)
}

/// `(u, v) = ω^{-1}(u, J conj v)`.
pub fn hermitian_inner(
    omega: &SymplecticForm,
    j: &ComplexStructure,
    u: &Multivector,
    v: &Multivector,
) -> Result<C64> {
    require_compatible(omega, j)?;
    omega.pairing(u, &j.weil_apply(&v.conj())?)
}

/// Compares `(u, u)` with the top coefficient of
/// `u∧conj(Iu)∧ω_{n-k}`, `Iu = (-1)^{k(k+1)/2} i^{p-q} u`, for a primitive
/// form `u` of pure bidegree.
pub fn hodge_riemann(
    omega: &SymplecticForm,
    j: &ComplexStructure,
    u: &Multivector,
) -> Result<HodgeRiemannCheck> {
    require_compatible(omega, j)?;
    let n = omega.n();
    let Some(k) = u.homogeneous_grade()? else {
        return Err(Error::Precondition("zero form".into()));
    };
    if k > n {
        return Err(Error::GradeOutOfRange { k, max: n });
    }
    let prim = omega.is_primitive(u, PRIMITIVITY_TOL)?;
    if !prim.primitive {
        return Err(Error::NotPrimitive { residual: prim.relative });
    }
    let (p, q) = j.bidegree(u)?;
    let phase = C64::i().powi(p as i32 - q as i32) * lefschetz_sign(k);
    let iu = u * phase;
    let product = &(u ^ &iu.conj()) ^ &omega.omega_power(n - k);
    let top = product.top_coefficient(omega.volume())?;
    let norm_squared = hermitian_inner(omega, j, u, u)?.re;
    Ok(HodgeRiemannCheck { p, q, norm_squared, top, residual: (top - norm_squared).norm() })
}

pub fn hodge_riemann_residual(
    omega: &SymplecticForm,
    j: &ComplexStructure,
    u: &Multivector,
) -> Result<f64> {
    hodge_riemann(omega, j, u).map(|c| c.residual)
}

/// `dim ∧^{p,q} - dim ∧^{p-1,q-1}`, the dimension of primitive `(p,q)`-forms.
pub fn primitive_pq_dimension(n: usize, p: usize, q: usize) -> usize {
    binomial(n, p as i64) * binomial(n, q as i64)
        - binomial(n, p as i64 - 1) * binomial(n, q as i64 - 1)
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    n: usize,
    #[serde(with = "rows")]
    matrix: DMatrix<f64>,
}

impl TryFrom<ComplexJson> for ComplexStructure {
    type Error = Error;
    fn try_from(json: ComplexJson) -> Result<Self> {
        check_n(json.n)?;
        let (r, c) = json.matrix.shape();
        if r != 2 * json.n || c != 2 * json.n {
            return Err(Error::Shape { expected: 2 * json.n, rows: r, cols: c });
        }
        ComplexStructure::new(json.matrix)
    }
}

impl From<ComplexStructure> for ComplexJson {
    fn from(j: ComplexStructure) -> Self {
        ComplexJson { n: j.n, matrix: j.matrix }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(n: usize, i: usize) -> Multivector {
        Multivector::generator(n, i)
    }

    fn dz(n: usize, j: usize) -> Multivector {
        &gen(n, 2 * j) + &(&gen(n, 2 * j + 1) * C64::i())
    }

    #[test]
    fn standard_pair_is_compatible_with_identity_metric() {
        let w = SymplecticForm::standard(3).unwrap();
        let j = ComplexStructure::standard(3).unwrap();
        assert_eq!(w.matrix() * j.matrix(), DMatrix::identity(6, 6));
        let r = check_compatibility(&w, &j).unwrap();
        assert!(r.compatible);
        assert_eq!(r.min_positivity_eigenvalue, 1.0);
        let flipped = ComplexStructure::new(-j.matrix().clone()).unwrap();
        let r = check_compatibility(&w, &flipped).unwrap();
        assert!(!r.compatible);
        assert!((r.min_positivity_eigenvalue + 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_complex_structures_are_rejected() {
        assert!(matches!(
            ComplexStructure::new(DMatrix::identity(2, 2)),
            Err(Error::NotComplexStructure { .. })
        ));
    }

    #[test]
    fn asymmetric_metric_is_reported() {
        // S J S^{-1} with a shear S
        let j = ComplexStructure::standard(1).unwrap();
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.7, 0.0, 1.0]);
        let conj = &s * j.matrix() * s.clone().try_inverse().unwrap();
        let j2 = ComplexStructure::new(conj).unwrap();
        let w = SymplecticForm::standard(1).unwrap();
        let r = check_compatibility(&w, &j2).unwrap();
        // every J on R^2 preserves area, so only positivity can change here
        assert!(r.symmetric_residual < 1e-12);
        let w2 = SymplecticForm::standard(2).unwrap();
        let mut m = ComplexStructure::standard(2).unwrap().matrix().clone();
        let s = DMatrix::from_fn(4, 4, |a, b| if a == b { 1.0 } else if a == 0 && b == 2 { 0.9 } else { 0.0 });
        m = &s * m * s.clone().try_inverse().unwrap();
        let r = check_compatibility(&w2, &ComplexStructure::new(m).unwrap()).unwrap();
        assert!(!r.compatible);
        assert!(r.symmetric_residual > 1e-3);
    }

    #[test]
    fn dz_is_type_one_zero() {
        let j = ComplexStructure::standard(1).unwrap();
        let u = dz(1, 0);
        assert!((&j.pq_project(&u, 1, 0).unwrap() - &u).norm() < 1e-14);
        assert!(j.pq_project(&u, 0, 1).unwrap().norm() < 1e-14);
        let ju = j.weil_apply(&u).unwrap();
        assert!((&ju - &(&u * C64::i())).norm() < 1e-14);
        // J(e*) = -f*, J(f*) = e*
        assert_eq!(j.weil_apply(&gen(1, 0)).unwrap(), -&gen(1, 1));
        assert_eq!(j.weil_apply(&gen(1, 1)).unwrap(), gen(1, 0));
    }

    #[test]
    fn omega_is_type_one_one_and_parts_sum_up() {
        let n = 3;
        let w = SymplecticForm::standard(n).unwrap();
        let j = ComplexStructure::standard(n).unwrap();
        let o = w.two_form();
        assert!((&j.pq_project(o, 1, 1).unwrap() - o).norm() < 1e-13);
        let u = &gen(n, 0) ^ &gen(n, 3);
        let d = j.pq_decompose(&u).unwrap();
        assert_eq!(d.parts.len(), 3);
        assert!((&d.sum(n) - &u).norm() < 1e-13);
        for ((p, q), part) in &d.parts {
            let phase = C64::i().powi(*p as i32 - *q as i32);
            let wp = j.weil_apply(part).unwrap();
            assert!((&wp - &(part * phase)).norm() < 1e-13);
        }
    }

    #[test]
    fn weil_squares_to_minus_one_on_odd_grades() {
        let j = ComplexStructure::standard(2).unwrap();
        let u = &gen(2, 0) + &gen(2, 3).scale(2.0);
        let twice = j.weil_apply(&j.weil_apply(&u).unwrap()).unwrap();
        assert!((&twice + &u).norm() < 1e-14);
    }

    #[test]
    fn inner_product_examples() {
        let w = SymplecticForm::standard(1).unwrap();
        let j = ComplexStructure::standard(1).unwrap();
        let one = Multivector::scalar(1, 1.0);
        assert_eq!(hermitian_inner(&w, &j, &one, &one).unwrap(), C64::new(1.0, 0.0));
        let z = dz(1, 0);
        assert!((hermitian_inner(&w, &j, &z, &z).unwrap() - C64::new(2.0, 0.0)).norm() < 1e-14);
        let s1 = hodge_star(&w, &j, &one).unwrap();
        assert!((&s1 - w.volume()).norm() < 1e-14);
    }

    #[test]
    fn hodge_riemann_small_cases() {
        let w = SymplecticForm::standard(1).unwrap();
        let j = ComplexStructure::standard(1).unwrap();
        let c = hodge_riemann(&w, &j, &Multivector::scalar(1, 1.0)).unwrap();
        assert_eq!((c.norm_squared, c.residual), (1.0, 0.0));
        let c = hodge_riemann(&w, &j, &dz(1, 0)).unwrap();
        assert!((c.norm_squared - 2.0).abs() < 1e-14);
        assert!(c.residual < 1e-14);
        let w2 = SymplecticForm::standard(2).unwrap();
        let j2 = ComplexStructure::standard(2).unwrap();
        assert!(matches!(
            hodge_riemann(&w2, &j2, w2.two_form()),
            Err(Error::NotPrimitive { .. })
        ));
        let mixed = &gen(2, 0) + &gen(2, 2);
        assert!(hodge_riemann(&w2, &j2, &mixed).is_err());
    }

    #[test]
    fn primitive_pq_dimensions() {
        assert_eq!(primitive_pq_dimension(2, 1, 1), 3);
        assert_eq!(primitive_pq_dimension(2, 2, 0), 1);
        assert_eq!(primitive_pq_dimension(3, 1, 1), 8);
    }
}
