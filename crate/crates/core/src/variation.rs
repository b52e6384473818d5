//! Polynomial families `ω(t)` of symplectic forms and residuals of the
//! variation formula for the symplectic star and its algebraic companions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::Blade;
use crate::error::{Error, Result};
use crate::linalg::pfaffian;
use crate::multivector::{check_n, Multivector, C64};
use crate::symplectic::{rows, SymplecticForm, ANTISYMMETRY_TOL};

/// Default finite-difference step.
pub const DEFAULT_H: f64 = 1e-4;
/// Samples used to scan a family for degeneracy.
pub const SCAN_SAMPLES: usize = 64;
/// `|pf ω(t)|` below this fraction of `max|ω(t)|^n` counts as degenerate.
pub const PFAFFIAN_TOL: f64 = 1e-10;

/// `ω(t) = Σ_d t^d M_d` on `[t_min, t_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct FormFamily {
    n: usize,
    coeffs: Vec<DMatrix<f64>>,
    t_min: f64,
    t_max: f64,
}

impl FormFamily {
    pub fn new(coeffs: Vec<DMatrix<f64>>, t_min: f64, t_max: f64) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Precondition("family needs at least one coefficient".into()));
        };
        let dim = first.nrows();
        let n = dim / 2;
        check_n(n)?;
        for m in &coeffs {
            if m.shape() != (2 * n, 2 * n) {
                return Err(Error::Shape { expected: 2 * n, rows: m.nrows(), cols: m.ncols() });
            }
            let residual = (m + m.transpose()).amax();
            if residual > ANTISYMMETRY_TOL * m.amax().max(1.0) {
                return Err(Error::NotAntisymmetric { residual });
            }
        }
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::Precondition(format!("invalid interval [{t_min}, {t_max}]")));
        }
        let fam = FormFamily { n, coeffs, t_min, t_max };
        fam.scan()?;
        Ok(fam)
    }

    /// `t·α₁ + (1-t)·α₂` on `[0, 1]`.
    pub fn linear(alpha1: &DMatrix<f64>, alpha2: &DMatrix<f64>) -> Result<Self> {
        Self::new(vec![alpha2.clone(), alpha1 - alpha2], 0.0, 1.0)
    }

    pub fn constant(m: &DMatrix<f64>, t_min: f64, t_max: f64) -> Result<Self> {
        Self::new(vec![m.clone()], t_min, t_max)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn matrix_at(&self, t: f64) -> DMatrix<f64> {
        self.coeffs.iter().rev().fold(DMatrix::zeros(2 * self.n, 2 * self.n), |acc, m| acc * t + m)
    }

    /// `ω'(t)`.
    pub fn derivative_at(&self, t: f64) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(2 * self.n, 2 * self.n);
        for (d, m) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * t + m * d as f64;
        }
        acc
    }

    fn relative_pfaffian(&self, t: f64) -> f64 {
        let m = self.matrix_at(t);
        let scale = m.amax();
        if scale == 0.0 {
            return 0.0;
        }
        pfaffian(&m) / scale.powi(self.n as i32)
    }

    /// Samples the pfaffian and bisects between samples where it changes
    /// sign, since a root there means `ω(t)` degenerates.
    fn scan(&self) -> Result<()> {
        let ts: Vec<f64> = (0..SCAN_SAMPLES)
            .map(|i| self.t_min + (self.t_max - self.t_min) * i as f64 / (SCAN_SAMPLES - 1) as f64)
            .collect();
        let vals: Vec<f64> = ts.iter().map(|&t| self.relative_pfaffian(t)).collect();
        for (&t, &v) in ts.iter().zip(&vals) {
            if v.abs() <= PFAFFIAN_TOL {
                return Err(Error::DegenerateFamily { t, pfaffian: v.abs() });
            }
        }
        for i in 1..ts.len() {
            if vals[i - 1].signum() != vals[i].signum() {
                let (mut a, mut b) = (ts[i - 1], ts[i]);
                let sa = vals[i - 1].signum();
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    if self.relative_pfaffian(mid).signum() == sa {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                let t = 0.5 * (a + b);
                return Err(Error::DegenerateFamily { t, pfaffian: self.relative_pfaffian(t).abs() });
            }
        }
        Ok(())
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(self.t_min..=self.t_max).contains(&t) {
            return Err(Error::OutsideInterval { t, t_min: self.t_min, t_max: self.t_max });
        }
        Ok(())
    }

    /// `(ω(t), θ(t))` with `θ = ω'(t)` as a two-form.
    pub fn eval(&self, t: f64) -> Result<(SymplecticForm, Multivector)> {
        self.check_t(t)?;
        let omega = SymplecticForm::new(self.matrix_at(t)).map_err(|e| match e {
            Error::Degenerate { pivot, .. } => Error::DegenerateFamily { t, pfaffian: pivot },
            other => other,
        })?;
        let theta = two_form(self.n, &self.derivative_at(t));
        Ok((omega, theta))
    }
}

fn two_form(n: usize, m: &DMatrix<f64>) -> Multivector {
    let mut terms = Vec::new();
    for i in 0..2 * n {
        for j in (i + 1)..2 * n {
            if m[(i, j)] != 0.0 {
                terms.push((Blade((1 << i) | (1 << j)), C64::new(m[(i, j)], 0.0)));
            }
        }
    }
    Multivector::from_terms(n, terms).expect("indices in range")
}

fn check_grade(u: &Multivector, expected: usize, what: &str) -> Result<()> {
    match u.homogeneous_grade()? {
        Some(g) if g != expected => Err(Error::Precondition(format!(
            "{what} must have grade {expected}, got {g}"
        ))),
        _ => Ok(()),
    }
}

fn check_h(fam: &FormFamily, t: f64, h: f64) -> Result<()> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Precondition(format!("step h = {h} must be positive")));
    }
    fam.check_t(t - h)?;
    fam.check_t(t + h)
}

/// `(*_{ω(t+h)} u - *_{ω(t-h)} u) / 2h`.
pub fn star_derivative_fd(fam: &FormFamily, t: f64, u: &Multivector, h: f64) -> Result<Multivector> {
    check_h(fam, t, h)?;
    let (plus, _) = fam.eval(t + h)?;
    let (minus, _) = fam.eval(t - h)?;
    Ok((&plus.star(u)? - &minus.star(u)?).scale(1.0 / (2.0 * h)))
}

/// `[Λ, θ∧·] u = Λ(θ∧u) - θ∧Λu`.
pub fn lambda_theta_commutator(
    omega: &SymplecticForm,
    theta: &Multivector,
    u: &Multivector,
) -> Result<Multivector> {
    let a = omega.dual_lefschetz(&theta.wedge(u)?)?;
    let b = theta.wedge(&omega.dual_lefschetz(u)?)?;
    Ok(&a - &b)
}

/// `‖*_s⁻¹ (d/dt *_s) u - [Λ, θ] u‖ / max(1, ‖[Λ, θ] u‖)` at parameter `t`
/// for constant `u`, with the derivative taken by central differences.
pub fn variation_residual(fam: &FormFamily, t: f64, u: &Multivector, h: f64) -> Result<f64> {
    let derivative = star_derivative_fd(fam, t, u, h)?;
    let (omega, theta) = fam.eval(t)?;
    let lhs = omega.star(&derivative)?;
    let rhs = lambda_theta_commutator(&omega, &theta, u)?;
    Ok((&lhs - &rhs).norm() / rhs.norm().max(1.0))
}

/// `‖*_s(θ∧*_s u) + ½[Λ,[Λ,θ]] u‖`.
pub fn lemma33_residual(omega: &SymplecticForm, theta: &Multivector, u: &Multivector) -> Result<f64> {
    check_grade(theta, 2, "θ")?;
    let lhs = omega.star(&theta.wedge(&omega.star(u)?)?)?;
    let lam = |x: &Multivector| omega.dual_lefschetz(x);
    let th = |x: &Multivector| theta.wedge(x);
    // [Λ,[Λ,θ]] = ΛΛθ - 2ΛθΛ + θΛΛ
    let a = lam(&lam(&th(u)?)?)?;
    let b = lam(&th(&lam(u)?)?)?;
    let c = th(&lam(&lam(u)?)?)?;
    let double = &(&a - &b.scale(2.0)) + &c;
    Ok((&lhs + &double.scale(0.5)).norm())
}

/// `‖*_s(θ∧*_s u) + d/dt(Λ_t u)‖ / max(1, ‖*_s(θ∧*_s u)‖)` at parameter `t`,
/// by central differences.
pub fn corollary32_residual(fam: &FormFamily, t: f64, u: &Multivector, h: f64) -> Result<f64> {
    check_h(fam, t, h)?;
    let (omega, theta) = fam.eval(t)?;
    let lhs = omega.star(&theta.wedge(&omega.star(u)?)?)?;
    let (plus, _) = fam.eval(t + h)?;
    let (minus, _) = fam.eval(t - h)?;
    let d_lambda =
        (&plus.dual_lefschetz(u)? - &minus.dual_lefschetz(u)?).scale(1.0 / (2.0 * h));
    Ok((&lhs + &d_lambda).norm() / lhs.norm().max(1.0))
}

/// `‖*_s(σ∧*_s u) - (-1)^k (Λ(σ∧u) - σ∧Λu)‖` for a one-form `σ` and a
/// `k`-form `u`.
pub fn sigma_identity_residual(
    omega: &SymplecticForm,
    sigma: &Multivector,
    u: &Multivector,
) -> Result<f64> {
    check_grade(sigma, 1, "σ")?;
    let Some(k) = u.homogeneous_grade()? else {
        return Ok(omega.star(&sigma.wedge(&omega.star(u)?)?)?.norm());
    };
    let lhs = omega.star(&sigma.wedge(&omega.star(u)?)?)?;
    let comm = lambda_theta_commutator(omega, sigma, u)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok((&lhs - &comm.scale(sign)).norm())
}

/// Second-order check: residuals at `h` and `h/2` and their ratio. A
/// residual already at roundoff level at the larger step means the
/// difference quotient is exact for this input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub residual_h: f64,
    pub residual_half: f64,
    pub ratio: f64,
    pub exact: bool,
    pub second_order: bool,
}

/// Residual floor (relative to `‖u‖`) under which a finite-difference
/// residual counts as roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

pub fn fd_convergence<F>(h: f64, scale: f64, residual: F) -> Result<ConvergenceCheck>
where
    F: Fn(f64) -> Result<f64>,
{
    let residual_h = residual(h)?;
    let residual_half = residual(h / 2.0)?;
    let ratio = residual_h / residual_half;
    let exact = residual_h <= ROUNDOFF_FLOOR * scale.max(f64::MIN_POSITIVE);
    let second_order = exact || (3.0..=5.0).contains(&ratio);
    Ok(ConvergenceCheck { residual_h, residual_half, ratio, exact, second_order })
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    #[serde(with = "matrices")]
    coeffs: Vec<DMatrix<f64>>,
    t_min: f64,
    t_max: f64,
}

mod matrices {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::rows;

    pub fn serialize<S: Serializer>(ms: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(rows::to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
        let raw = Vec::<Vec<Vec<f64>>>::deserialize(d)?;
        raw.iter()
            .map(|m| rows::from_rows(m).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl TryFrom<FamilyJson> for FormFamily {
    type Error = Error;
    fn try_from(json: FamilyJson) -> Result<Self> {
        check_n(json.n)?;
        for m in &json.coeffs {
            if m.shape() != (2 * json.n, 2 * json.n) {
                return Err(Error::Shape { expected: 2 * json.n, rows: m.nrows(), cols: m.ncols() });
            }
        }
        FormFamily::new(json.coeffs, json.t_min, json.t_max)
    }
}

impl From<FormFamily> for FamilyJson {
    fn from(f: FormFamily) -> Self {
        FamilyJson { n: f.n, coeffs: f.coeffs, t_min: f.t_min, t_max: f.t_max }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::standard_matrix;

    fn scaled_std(n: usize) -> FormFamily {
        FormFamily::new(vec![standard_matrix(n), standard_matrix(n)], -0.5, 0.5).unwrap()
    }

    #[test]
    fn eval_of_linear_paths() {
        let fam = scaled_std(2);
        let (w, theta) = fam.eval(0.0).unwrap();
        assert_eq!(w.matrix(), &standard_matrix(2));
        assert_eq!(&theta, w.two_form());
        let c = FormFamily::constant(&standard_matrix(1), 0.0, 1.0).unwrap();
        assert!(c.eval(0.3).unwrap().1.is_zero());
        assert!(matches!(c.eval(1.5), Err(Error::OutsideInterval { .. })));
    }

    #[test]
    fn degenerate_families_are_rejected() {
        // (1 - 2t)·Ω vanishes at t = 1/2, between samples
        let r = FormFamily::new(vec![standard_matrix(1), standard_matrix(1) * -2.0], 0.0, 1.0);
        match r {
            Err(Error::DegenerateFamily { t, .. }) => assert!((t - 0.5).abs() < 1e-9),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn scaled_family_closed_forms() {
        let fam = scaled_std(1);
        let one = Multivector::scalar(1, 1.0);
        let d = star_derivative_fd(&fam, 0.0, &one, 1e-3).unwrap();
        assert!((&d - &Multivector::from_real_terms(1, &[(&[0, 1], 1.0)]).unwrap()).norm() < 1e-12);
        let r = variation_residual(&fam, 0.0, &one, 1e-3).unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn algebraic_identities_on_standard_form() {
        let w = SymplecticForm::standard(2).unwrap();
        let e1 = Multivector::generator(2, 0);
        let e2 = Multivector::generator(2, 2);
        let f2 = Multivector::generator(2, 3);
        let theta = &e1 ^ &e2;
        let u = &e1 ^ &f2;
        assert!(lemma33_residual(&w, &theta, &u).unwrap() < 1e-12);
        assert!(lemma33_residual(&w, w.two_form(), &u).unwrap() < 1e-12);
        assert!(sigma_identity_residual(&w, &f2, &u).unwrap() < 1e-12);
        assert!(sigma_identity_residual(&w, &e1, &Multivector::scalar(2, 1.0)).unwrap() < 1e-12);
        assert!(lemma33_residual(&w, &e1, &u).is_err());
    }
}
