//! Lefschetz decomposition `u = Σ ω^r/r! ∧ u^r` and hard Lefschetz inversion.
//!
//! ```not_rust
//! cargo run --example lefschetz_decomposition
//! ```

use lefschetz::random::{random_homogeneous, random_symplectic, trial_rng};
use lefschetz::{Multivector, SymplecticForm};

fn main() -> lefschetz::Result<()> {
    let w = SymplecticForm::standard(2)?;
    let u = Multivector::from_real_terms(2, &[(&[0, 1], 1.0)])?;
    let report = w.lefschetz_decompose(&u)?.report(&w, &u);
    println!("{}", serde_json::to_string_pretty(&report).unwrap());

    let mut rng = trial_rng(5, 0);
    let w = random_symplectic(&mut rng, 3);
    let u = random_homogeneous(&mut rng, 3, 4);
    let d = w.lefschetz_decompose(&u)?;
    println!("random 4-form on R^6:");
    for c in &d.components {
        let p = w.is_primitive(&c.form, 1e-9)?;
        println!(
            "  r = {}: grade {:?}, |u^r| = {:.3}, primitivity residual {:.1e}",
            c.r,
            c.form.homogeneous_grade()?,
            c.form.norm(),
            p.relative
        );
    }
    println!("  reconstruction error {:.2e}", (&d.reconstruct(&w) - &u).norm());

    // ω∧· : Λ² → Λ⁴ is invertible on R^6
    let v = random_homogeneous(&mut rng, 3, 4);
    let x = w.hard_lefschetz_invert(&v, 2)?;
    println!("hard Lefschetz: |ω∧x - v| = {:.2e}", (&w.lefschetz(&x)? - &v).norm());
    Ok(())
}
