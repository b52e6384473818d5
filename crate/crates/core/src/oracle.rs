//! Slow reference routes used to cross-check the closed-form operators.

use nalgebra::{DMatrix, DVector};

use crate::basis::{self, Blade};
use crate::error::{Error, Result};
use crate::multivector::{GradedSlice, Multivector, C64};
use crate::symplectic::SymplecticForm;

/// Gram matrix of the pairing `ω^{-1}` on the grade-`p` blades.
pub fn pairing_matrix(omega: &SymplecticForm, p: usize) -> Result<DMatrix<f64>> {
    let n = omega.n();
    let masks = basis::slices(n).masks(p);
    let blades: Vec<Multivector> = masks
        .iter()
        .map(|&m| Multivector::blade(n, Blade(m), C64::new(1.0, 0.0)))
        .collect();
    let mut g = DMatrix::zeros(masks.len(), masks.len());
    for (a, x) in blades.iter().enumerate() {
        for (b, y) in blades.iter().enumerate() {
            g[(a, b)] = omega.pairing(x, y)?.re;
        }
    }
    Ok(g)
}

/// Solves `μ∧X = ω^{-1}(μ, ν)·ω_n` for `X` over all blades `μ` of each grade
/// of `ν`, one dense system per grade.
pub fn star_by_defining_equation(omega: &SymplecticForm, nu: &Multivector) -> Result<Multivector> {
    let n = omega.n();
    let vol = omega.volume();
    let table = basis::slices(n);
    let mut out = Multivector::zero(n);
    for p in nu.grades() {
        let q = 2 * n - p;
        let rows = table.masks(p);
        let cols = table.masks(q);
        let mut a = DMatrix::zeros(rows.len(), cols.len());
        for (i, &mi) in rows.iter().enumerate() {
            for (j, &mj) in cols.iter().enumerate() {
                let sign = basis::wedge_sign(mi, mj);
                if sign != 0.0 {
                    let top = Multivector::blade(n, Blade(mi | mj), C64::new(sign, 0.0));
                    a[(i, j)] = top.top_coefficient(vol)?.re;
                }
            }
        }
        let g = pairing_matrix(omega, p)?;
        let rhs_c: DVector<C64> = crate::linalg::apply_real(&g, &nu.slice(p).coeffs);
        let lu = a.lu();
        let x = crate::linalg::lu_solve_complex(&lu, &rhs_c)
            .map_err(|_| Error::SingularSolve(format!("defining system singular on grade {p}")))?;
        out = &out + &Multivector::from_slice(&GradedSlice { n, k: q, coeffs: x });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_multivector, random_symplectic, trial_rng};

    #[test]
    fn oracle_matches_closed_form() {
        let mut rng = trial_rng(1, 0);
        for n in 1..=3 {
            let w = random_symplectic(&mut rng, n);
            let u = random_multivector(&mut rng, n);
            let a = w.star(&u).unwrap();
            let b = star_by_defining_equation(&w, &u).unwrap();
            assert!((&a - &b).norm() <= 1e-9 * u.norm(), "n = {n}");
        }
    }
}
