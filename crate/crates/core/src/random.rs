//! Seeded random inputs: symplectic forms, positive `(1,1)`-forms and
//! multivectors.
//!
//! Every trial draws from its own ChaCha stream derived from one 64-bit
//! seed, so serial and parallel runs see the same inputs.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis;
use crate::multivector::{GradedSlice, Multivector, C64};
use crate::symplectic::{standard_matrix, SymplecticForm};

/// Regularization added to `A*A` for random positive `(1,1)`-forms.
pub const POSITIVE_EPSILON: f64 = 1e-3;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn uniform<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-1.0..1.0)
}

/// Antisymmetric part of a uniform matrix plus `λ·Ω` with
/// `λ = |A|_F + 1/2`, which keeps every singular value above `1/2`.
pub fn random_symplectic_matrix<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let dim = 2 * n;
    let raw = DMatrix::from_fn(dim, dim, |_, _| uniform(rng));
    let a = (&raw - raw.transpose()) * 0.5;
    let lambda = a.norm() + 0.5;
    a + standard_matrix(n) * lambda
}

pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize) -> SymplecticForm {
    SymplecticForm::new(random_symplectic_matrix(rng, n)).expect("nondegenerate by construction")
}

/// `A*A + εI` for a uniform complex `A`.
pub fn random_hermitian_positive<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let a = DMatrix::from_fn(n, n, |_, _| C64::new(uniform(rng), uniform(rng)));
    a.adjoint() * &a + DMatrix::identity(n, n) * C64::new(POSITIVE_EPSILON, 0.0)
}

/// The real two-form `(i/2) Σ H_jk dz_j∧dz̄_k` for the standard complex
/// structure (`dz_j = e_j* + i f_j*`), as an antisymmetric matrix.
pub fn hermitian_to_two_form(h: &DMatrix<C64>) -> DMatrix<f64> {
    let n = h.nrows();
    let dz = |j: usize| {
        &Multivector::generator(n, 2 * j) + &(&Multivector::generator(n, 2 * j + 1) * C64::i())
    };
    let mut acc = Multivector::zero(n);
    for j in 0..n {
        for k in 0..n {
            let term = &dz(j) ^ &dz(k).conj();
            acc = &acc + &(&term * (h[(j, k)] * C64::new(0.0, 0.5)));
        }
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (b, c) in acc.real_part().terms() {
        let idx = b.indices();
        m[(idx[0], idx[1])] = c.re;
        m[(idx[1], idx[0])] = -c.re;
    }
    m
}

/// A random strictly positive `(1,1)`-form for the standard complex structure.
pub fn random_positive_11<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    hermitian_to_two_form(&random_hermitian_positive(rng, n))
}

/// Complex multivector with uniform coefficients on grade `k`.
pub fn random_homogeneous<R: Rng>(rng: &mut R, n: usize, k: usize) -> Multivector {
    let len = basis::slices(n).len(k);
    let coeffs = nalgebra::DVector::from_fn(len, |_, _| C64::new(uniform(rng), uniform(rng)));
    Multivector::from_slice(&GradedSlice { n, k, coeffs })
}

/// Real multivector with uniform coefficients on grade `k`.
pub fn random_real_homogeneous<R: Rng>(rng: &mut R, n: usize, k: usize) -> Multivector {
    let len = basis::slices(n).len(k);
    let coeffs = nalgebra::DVector::from_fn(len, |_, _| C64::new(uniform(rng), 0.0));
    Multivector::from_slice(&GradedSlice { n, k, coeffs })
}

/// Complex multivector with uniform coefficients on every grade.
pub fn random_multivector<R: Rng>(rng: &mut R, n: usize) -> Multivector {
    (0..=2 * n).fold(Multivector::zero(n), |acc, k| &acc + &random_homogeneous(rng, n, k))
}
