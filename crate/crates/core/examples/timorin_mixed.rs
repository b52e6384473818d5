//! Mixed hard Lefschetz and mixed Hodge-Riemann for a random collection of
//! positive (1,1)-forms on C^3.
//!
//! ```not_rust
//! cargo run --example timorin_mixed
//! ```

use lefschetz::complex_structure::ComplexStructure;
use lefschetz::random::{random_positive_11, trial_rng};
use lefschetz::timorin::MixedCollection;

fn main() -> lefschetz::Result<()> {
    let n = 3;
    let mut rng = trial_rng(17, 0);
    let alphas: Vec<_> = (0..=n).map(|_| random_positive_11(&mut rng, n)).collect();
    let mc = MixedCollection::new(ComplexStructure::standard(n)?, &alphas)?;

    for k in 0..=n {
        let hl = mc.mixed_hl_rank(k)?;
        println!(
            "k = {k}: u ↦ u∧T_(k+1) rank {}/{}, σ_min/σ_max = {:.3e}",
            hl.rank, hl.expected, hl.normalized_sigma_min
        );
        for r in mc.mixed_hr_all(k)? {
            println!("    (p,q) = {:?}: dim {:>2}, min eigenvalue {:.4e}", r.pq, r.dimension, r.min_eigenvalue);
        }
    }

    println!("deformation towards the standard form:");
    for (t, ev) in mc.deformation_path(5)? {
        println!("  t = {t:.2}: min Gram eigenvalue {ev:.4e}");
    }
    Ok(())
}
