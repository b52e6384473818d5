//! Top-coefficient Alexandrov-Fenchel inequality and convexity of
//! `ψ(t) = -log c(ω_t²/2 ∧ T)`.
//!
//! ```not_rust
//! cargo run --example alexandrov_fenchel
//! ```

use lefschetz::complex_structure::ComplexStructure;
use lefschetz::random::{random_positive_11, trial_rng};
use lefschetz::timorin::{af_check, psi_convexity_scan, uniform_grid};

fn main() -> lefschetz::Result<()> {
    let n = 4;
    let j = ComplexStructure::standard(n)?;
    let mut rng = trial_rng(42, 0);
    let a1 = random_positive_11(&mut rng, n);
    let a2 = random_positive_11(&mut rng, n);
    let t: Vec<_> = (0..n - 2).map(|_| random_positive_11(&mut rng, n)).collect();

    let report = af_check(&j, &a1, &a2, &t)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    let equal = af_check(&j, &a1, &a1, &t)?;
    println!("α₂ = α₁: gap {:.2e}, proportionality residual {:.1e}", equal.gap, equal.proportionality_residual);

    let scan = psi_convexity_scan(&j, &a1, &a2, &t, &uniform_grid(33))?;
    for [s, psi] in scan.samples.iter().step_by(8) {
        println!("  ψ({s:.3}) = {psi:.6}");
    }
    println!("min second difference {:.4e}, convex: {}", scan.min_second_difference, scan.convex);
    Ok(())
}
