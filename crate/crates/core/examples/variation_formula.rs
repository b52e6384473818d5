//! Derivative of the symplectic star along `ω_t = tα₁ + (1-t)α₂`:
//! `*_s⁻¹ (d/dt *_s) = [Λ, θ]`, with `θ = dω_t/dt`, checked by central
//! differences at shrinking steps.
//!
//! ```not_rust
//! cargo run --example variation_formula
//! ```

use lefschetz::random::{random_homogeneous, random_positive_11, random_real_homogeneous, trial_rng};
use lefschetz::variation::{lemma33_residual, variation_residual, FormFamily};

fn main() -> lefschetz::Result<()> {
    let mut rng = trial_rng(8, 0);
    let n = 3;
    let fam = FormFamily::linear(&random_positive_11(&mut rng, n), &random_positive_11(&mut rng, n))?;
    let u = random_homogeneous(&mut rng, n, 3);
    let u = u.scale(1.0 / u.norm());
    println!("{:>8}  {:>10}  {:>6}", "h", "residual", "ratio");
    let mut prev: Option<f64> = None;
    for i in 0..6 {
        let h = 1e-2 / 2f64.powi(i);
        let r = variation_residual(&fam, 0.4, &u, h)?;
        let ratio = prev.map(|p| format!("{:.3}", p / r)).unwrap_or_default();
        println!("{h:>8.2e}  {r:>10.3e}  {ratio:>6}");
        prev = Some(r);
    }

    let (w, _) = fam.eval(0.4)?;
    let theta = random_real_homogeneous(&mut rng, n, 2);
    println!("*θ* + ½[Λ,[Λ,θ]] on u: {:.2e}", lemma33_residual(&w, &theta, &u)?);
    Ok(())
}
