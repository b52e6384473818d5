//! Darboux normal form of a symplectic form.
//!
//! Run with:
//!
//! ```not_rust
//! cargo run --example darboux
//! ```

use lefschetz::random::{random_symplectic_matrix, trial_rng};
use lefschetz::symplectic::standard_matrix;
use lefschetz::SymplecticForm;
use nalgebra::DMatrix;

fn main() -> lefschetz::Result<()> {
    // ω = 4 e1*∧f1*: the Darboux vectors are e/2, f/2
    let scaled = SymplecticForm::new(DMatrix::from_row_slice(2, 2, &[0.0, 4.0, -4.0, 0.0]))?;
    println!("4·ω_std, vectors:{}", scaled.darboux().vectors);

    let mut rng = trial_rng(11, 0);
    let w = SymplecticForm::new(random_symplectic_matrix(&mut rng, 3))?;
    let d = w.darboux();
    let q = &d.vectors;
    let check = q.transpose() * w.matrix() * q - standard_matrix(3);
    println!("random ω on R^6:{}", w.matrix());
    println!("Darboux vectors (columns e1, f1, e2, f2, ...):{}", q);
    println!("|QᵀWQ - Ω| = {:.2e} (reported residual {:.2e})", check.amax(), d.residual);

    // e1*∧f1* alone is degenerate on R^4
    let mut degenerate = DMatrix::zeros(4, 4);
    degenerate[(0, 1)] = 1.0;
    degenerate[(1, 0)] = -1.0;
    if let Err(e) = SymplecticForm::new(degenerate) {
        println!("degenerate input rejected: {e}");
    }
    Ok(())
}
