//! Complex multivectors over the exterior algebra of a `2n`-dimensional real
//! vector space.

use std::ops::{Add, BitXor, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{self, permutation_sign, wedge_sign, Blade, MAX_N};
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Coefficients below this fraction of the operands' largest coefficient are
/// dropped after every operation.
pub const PRUNE_RELATIVE: f64 = 1e-14;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionCap { n, max: MAX_N })
    }
}

/// An element of `ℂ ⊗ ∧V*` with `dim V = 2n`.
///
/// Terms are kept sorted by blade mask and never store negligible
/// coefficients. Values are immutable; every operation returns a new one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MultivectorJson", into = "MultivectorJson")]
pub struct Multivector {
    n: usize,
    terms: Vec<(Blade, C64)>,
}

impl Multivector {
    pub fn zero(n: usize) -> Self {
        Multivector { n, terms: Vec::new() }
    }

    pub fn scalar(n: usize, c: impl Into<C64>) -> Self {
        Self::blade(n, Blade::SCALAR, c.into())
    }

    /// The `i`-th generator (`i < 2n`): `e_{i/2+1}*` for even `i`, `f_{i/2+1}*` for odd.
    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i < 2 * n, "generator {i} out of range for n = {n}");
        Self::blade(n, Blade::generator(i), C64::new(1.0, 0.0))
    }

    pub fn blade(n: usize, blade: Blade, c: C64) -> Self {
        assert!(
            blade.mask() >> (2 * n) == 0,
            "blade {:?} out of range for n = {n}",
            blade
        );
        if c == C64::new(0.0, 0.0) {
            return Self::zero(n);
        }
        Multivector { n, terms: vec![(blade, c)] }
    }

    /// Builds a multivector from arbitrary terms; duplicate blades are summed.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Blade, C64)>,
    {
        check_n(n)?;
        let mut dense = vec![C64::new(0.0, 0.0); 1 << (2 * n)];
        let mut scale = 0.0f64;
        for (b, c) in terms {
            if b.mask() >> (2 * n) != 0 {
                return Err(Error::InvalidBlade(format!(
                    "blade {:?} uses generators beyond 2n = {}",
                    b.indices(),
                    2 * n
                )));
            }
            dense[b.mask() as usize] += c;
            scale = scale.max(c.norm());
        }
        Ok(Self::from_dense(n, &dense, scale))
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_terms(n: usize, terms: &[(&[usize], f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (idx, c) in terms {
            let blade = Blade::from_indices(idx)
                .ok_or_else(|| Error::InvalidBlade(format!("repeated index in {idx:?}")))?;
            out.push((blade, C64::new(permutation_sign(idx) * c, 0.0)));
        }
        Self::from_terms(n, out)
    }

    pub(crate) fn from_dense(n: usize, dense: &[C64], scale: f64) -> Self {
        let cutoff = PRUNE_RELATIVE * scale;
        let terms = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cutoff && **c != C64::new(0.0, 0.0))
            .map(|(m, c)| (Blade(m as u32), *c))
            .collect();
        Multivector { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Blade, C64)] {
        &self.terms
    }

    pub fn coefficient(&self, blade: Blade) -> C64 {
        match self.terms.binary_search_by_key(&blade, |(b, _)| *b) {
            Ok(i) => self.terms[i].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient 2-norm.
    pub fn norm(&self) -> f64 {
        self.terms.iter().fold(0.0, |acc, (_, c)| acc + c.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Sorted list of grades carrying at least one term.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.iter().map(|(b, _)| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The common grade of all terms, `None` for zero.
    pub fn homogeneous_grade(&self) -> Result<Option<usize>> {
        let g = self.grades();
        match g.len() {
            0 => Ok(None),
            1 => Ok(Some(g[0])),
            _ => Err(Error::NotHomogeneous { grades: g }),
        }
    }

    pub fn grade_part(&self, k: usize) -> Self {
        Multivector {
            n: self.n,
            terms: self.terms.iter().filter(|(b, _)| b.grade() == k).copied().collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(b, c)| (*b, c.conj())).collect(),
        }
    }

    pub fn real_part(&self) -> Self {
        let dense = self.to_dense_with(|c| C64::new(c.re, 0.0));
        Self::from_dense(self.n, &dense, self.max_abs())
    }

    pub fn imag_part(&self) -> Self {
        let dense = self.to_dense_with(|c| C64::new(c.im, 0.0));
        Self::from_dense(self.n, &dense, self.max_abs())
    }

    fn to_dense_with(&self, f: impl Fn(C64) -> C64) -> Vec<C64> {
        let mut dense = vec![C64::new(0.0, 0.0); 1 << (2 * self.n)];
        for (b, c) in &self.terms {
            dense[b.mask() as usize] = f(*c);
        }
        dense
    }

    pub fn scale(&self, c: impl Into<C64>) -> Self {
        let c = c.into();
        if c == C64::new(0.0, 0.0) {
            return Self::zero(self.n);
        }
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut dense = self.to_dense_with(|c| c);
        for (b, c) in &other.terms {
            dense[b.mask() as usize] += c * sign;
        }
        Self::from_dense(self.n, &dense, self.max_abs().max(other.max_abs()))
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let mut dense = vec![C64::new(0.0, 0.0); 1 << (2 * self.n)];
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let s = wedge_sign(a.mask(), b.mask());
                if s != 0.0 {
                    dense[(a.mask() | b.mask()) as usize] += ca * cb * s;
                }
            }
        }
        Ok(Self::from_dense(self.n, &dense, self.max_abs() * other.max_abs()))
    }

    /// `self ∧ self ∧ ... ∧ self` (`k` factors; `k = 0` gives 1).
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::scalar(self.n, 1.0);
        for _ in 0..k {
            acc = &acc ^ self;
        }
        acc
    }

    /// `c` with `grade_part(self, 2n) = c · vol`.
    pub fn top_coefficient(&self, vol: &Multivector) -> Result<C64> {
        if vol.n != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: vol.n });
        }
        let full = Blade((1u32 << (2 * self.n)) - 1);
        if vol.terms.len() != 1 || vol.terms[0].0 != full {
            return Err(Error::InvalidVolume(
                "reference volume must be a nonzero top-degree form".into(),
            ));
        }
        Ok(self.coefficient(full) / vol.terms[0].1)
    }

    /// Dense coordinates of the grade-`k` part in lexicographic blade order.
    pub fn slice(&self, k: usize) -> GradedSlice {
        let table = basis::slices(self.n);
        let mut coeffs = DVector::from_element(table.len(k), C64::new(0.0, 0.0));
        for (b, c) in &self.terms {
            if b.grade() == k {
                coeffs[table.position(b.mask())] = *c;
            }
        }
        GradedSlice { n: self.n, k, coeffs }
    }

    pub fn from_slice(slice: &GradedSlice) -> Self {
        let table = basis::slices(slice.n);
        let scale = slice.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cutoff = PRUNE_RELATIVE * scale;
        let mut terms: Vec<(Blade, C64)> = table
            .masks(slice.k)
            .iter()
            .zip(slice.coeffs.iter())
            .filter(|(_, c)| c.norm() > cutoff && **c != C64::new(0.0, 0.0))
            .map(|(m, c)| (Blade(*m), *c))
            .collect();
        terms.sort_by_key(|(b, _)| *b);
        Multivector { n: slice.n, terms }
    }

    /// Image under the algebra map induced by a linear map of one-forms that
    /// sends generator `i` to `Σ_a map[(i, a)] · generator_a`.
    pub fn map_generators(&self, map: &DMatrix<C64>) -> Self {
        let dim = 2 * self.n;
        assert_eq!((map.nrows(), map.ncols()), (dim, dim), "generator map shape");
        let size = 1usize << dim;
        let mut out = vec![C64::new(0.0, 0.0); size];
        let mut scratch = vec![C64::new(0.0, 0.0); size];
        let mut seen = vec![false; size];
        let mut cur: Vec<(u32, C64)> = Vec::new();
        let mut next: Vec<(u32, C64)> = Vec::new();
        let mut touched: Vec<u32> = Vec::new();
        for (b, c) in &self.terms {
            cur.clear();
            cur.push((0, *c));
            for i in b.indices() {
                touched.clear();
                for &(m, x) in &cur {
                    for a in 0..dim {
                        let g = map[(i, a)];
                        if g == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let s = wedge_sign(m, 1 << a);
                        if s == 0.0 {
                            continue;
                        }
                        let t = (m | (1 << a)) as usize;
                        if !seen[t] {
                            seen[t] = true;
                            touched.push(t as u32);
                        }
                        scratch[t] += x * g * s;
                    }
                }
                next.clear();
                touched.sort_unstable();
                for &t in &touched {
                    next.push((t, scratch[t as usize]));
                    scratch[t as usize] = C64::new(0.0, 0.0);
                    seen[t as usize] = false;
                }
                std::mem::swap(&mut cur, &mut next);
            }
            for &(m, x) in &cur {
                out[m as usize] += x;
            }
        }
        let scale = out.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self::from_dense(self.n, &out, scale)
    }

    /// Real-matrix variant of [`map_generators`](Self::map_generators).
    pub fn map_generators_real(&self, map: &DMatrix<f64>) -> Self {
        self.map_generators(&map.map(|x| C64::new(x, 0.0)))
    }

    /// Embeds into a larger algebra of half-dimension `n_total`, shifting
    /// generator `i` to `i + offset`.
    pub fn embed(&self, n_total: usize, offset: usize) -> Result<Self> {
        check_n(n_total)?;
        if offset + 2 * self.n > 2 * n_total {
            return Err(Error::Precondition(format!(
                "cannot embed n = {} at offset {offset} into n = {n_total}",
                self.n
            )));
        }
        Self::from_terms(
            n_total,
            self.terms.iter().map(|(b, c)| (Blade(b.mask() << offset), *c)),
        )
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Mul<C64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: C64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

/// Wedge product; panics on mismatched dimensions (use [`Multivector::wedge`]
/// for a fallible version).
impl BitXor for &Multivector {
    type Output = Multivector;
    fn bitxor(self, rhs: &Multivector) -> Multivector {
        self.wedge(rhs).expect("wedge of multivectors with different n")
    }
}

/// Dense view of one grade, indexed by the lexicographic blade enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSlice {
    pub n: usize,
    pub k: usize,
    pub coeffs: DVector<C64>,
}

impl GradedSlice {
    pub fn new(n: usize, k: usize, coeffs: DVector<C64>) -> Result<Self> {
        check_n(n)?;
        if k > 2 * n {
            return Err(Error::GradeOutOfRange { k, max: 2 * n });
        }
        let expected = basis::slices(n).len(k);
        if coeffs.len() != expected {
            return Err(Error::Precondition(format!(
                "grade-{k} slice needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(GradedSlice { n, k, coeffs })
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    blade: Vec<usize>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct MultivectorJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl TryFrom<MultivectorJson> for Multivector {
    type Error = Error;

    fn try_from(json: MultivectorJson) -> Result<Self> {
        check_n(json.n)?;
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in json.terms {
            if let Some(&bad) = t.blade.iter().find(|&&i| i >= 2 * json.n) {
                return Err(Error::InvalidBlade(format!(
                    "index {bad} out of range for n = {}",
                    json.n
                )));
            }
            let blade = Blade::from_indices(&t.blade)
                .ok_or_else(|| Error::InvalidBlade(format!("repeated index in {:?}", t.blade)))?;
            let sign = permutation_sign(&t.blade);
            terms.push((blade, C64::new(t.re, t.im) * sign));
        }
        Multivector::from_terms(json.n, terms)
    }
}

impl From<Multivector> for MultivectorJson {
    fn from(mv: Multivector) -> Self {
        let mut terms: Vec<(Blade, C64)> = mv.terms.clone();
        let table = basis::slices(mv.n);
        terms.sort_by_key(|(b, _)| (b.grade(), table.position(b.mask())));
        MultivectorJson {
            n: mv.n,
            terms: terms
                .into_iter()
                .map(|(b, c)| TermJson { blade: b.indices(), re: c.re, im: c.im })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn std_omega(n: usize) -> Multivector {
        let mut acc = Multivector::zero(n);
        for j in 0..n {
            acc = &acc + &(&Multivector::generator(n, 2 * j) ^ &Multivector::generator(n, 2 * j + 1));
        }
        acc
    }

    #[test]
    fn wedge_of_disjoint_and_repeated_generators() {
        let e1 = Multivector::generator(1, 0);
        let f1 = Multivector::generator(1, 1);
        let ef = &e1 ^ &f1;
        assert_eq!(ef.terms(), &[(Blade(0b11), c(1.0, 0.0))]);
        assert!((&e1 ^ &e1).is_zero());
        assert_eq!((&f1 ^ &e1).coefficient(Blade(0b11)), c(-1.0, 0.0));
    }

    #[test]
    fn omega_squared_is_twice_the_volume() {
        let w = std_omega(2);
        let w2 = &w ^ &w;
        assert_eq!(w2.terms(), &[(Blade(0b1111), c(2.0, 0.0))]);
        assert!(w2.grade_part(2).is_zero());
        let vol = w2.scale(0.5);
        assert_eq!(w2.top_coefficient(&vol).unwrap(), c(2.0, 0.0));
        assert_eq!(
            Multivector::generator(2, 0).top_coefficient(&vol).unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn top_coefficient_rejects_bad_volume() {
        let w = std_omega(2);
        assert!(matches!(w.top_coefficient(&w), Err(Error::InvalidVolume(_))));
        assert!(matches!(
            w.top_coefficient(&Multivector::zero(2)),
            Err(Error::InvalidVolume(_))
        ));
    }

    #[test]
    fn wedge_rejects_mismatched_dimensions() {
        let a = Multivector::scalar(1, 1.0);
        let b = Multivector::scalar(2, 1.0);
        assert!(matches!(a.wedge(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn grade_part_and_conjugation() {
        let w = std_omega(2);
        let one_plus_w = &Multivector::scalar(2, 1.0) + &w;
        assert_eq!(one_plus_w.grade_part(2), w);
        assert_eq!(w.grade_part(2), w);
        let ie = Multivector::generator(1, 0).scale(c(0.0, 1.0));
        assert_eq!(ie.conj(), Multivector::generator(1, 0).scale(c(0.0, -1.0)));
        assert_eq!(w.conj(), w);
        let dz = &Multivector::generator(1, 0) + &Multivector::generator(1, 1).scale(c(0.0, 1.0));
        let dzbar = &Multivector::generator(1, 0) - &Multivector::generator(1, 1).scale(c(0.0, 1.0));
        assert_eq!(dz.conj(), dzbar);
    }

    #[test]
    fn cancellation_is_pruned() {
        let a = Multivector::from_real_terms(2, &[(&[0, 1], 1.0), (&[2], 0.3)]).unwrap();
        let b = Multivector::from_real_terms(2, &[(&[0, 1], 1.0)]).unwrap();
        let d = &(&a - &b) - &Multivector::from_real_terms(2, &[(&[2], 0.3)]).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn json_canonicalizes_and_sums_duplicates() {
        let src = r#"{"n": 2, "terms": [
            {"blade": [1, 0], "re": 1.0, "im": 0.0},
            {"blade": [0, 1], "re": 3.0, "im": 1.0},
            {"blade": [], "re": 2.0}
        ]}"#;
        let mv: Multivector = serde_json::from_str(src).unwrap();
        assert_eq!(mv.coefficient(Blade(0b11)), c(2.0, 1.0));
        assert_eq!(mv.coefficient(Blade::SCALAR), c(2.0, 0.0));
        let back: Multivector = serde_json::from_str(&serde_json::to_string(&mv).unwrap()).unwrap();
        assert_eq!(back, mv);
    }

    #[test]
    fn json_rejects_out_of_range_and_repeats() {
        let bad = r#"{"n": 1, "terms": [{"blade": [2], "re": 1.0}]}"#;
        assert!(serde_json::from_str::<Multivector>(bad).is_err());
        let rep = r#"{"n": 1, "terms": [{"blade": [0, 0], "re": 1.0}]}"#;
        assert!(serde_json::from_str::<Multivector>(rep).is_err());
        let cap = r#"{"n": 8, "terms": []}"#;
        assert!(serde_json::from_str::<Multivector>(cap).is_err());
    }

    #[test]
    fn slice_round_trip() {
        let w = std_omega(3);
        let s = w.slice(2);
        assert_eq!(s.coeffs.len(), 15);
        assert_eq!(Multivector::from_slice(&s), w);
    }

    #[test]
    fn generator_map_identity_and_swap() {
        let w = std_omega(2);
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(w.map_generators_real(&id), w);
        // swap e1 <-> f1 flips the sign of e1∧f1 only
        let mut swap = DMatrix::<f64>::identity(4, 4);
        swap.swap_rows(0, 1);
        let img = w.map_generators_real(&swap);
        assert_eq!(img.coefficient(Blade(0b0011)), c(-1.0, 0.0));
        assert_eq!(img.coefficient(Blade(0b1100)), c(1.0, 0.0));
    }
}
