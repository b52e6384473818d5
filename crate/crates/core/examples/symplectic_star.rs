//! The symplectic star and its defining equation `μ∧*ν = ω⁻¹(μ,ν)·ω^n/n!`.
//!
//! ```not_rust
//! cargo run --example symplectic_star
//! ```

use lefschetz::basis::{self, Blade};
use lefschetz::random::{random_homogeneous, random_symplectic, trial_rng};
use lefschetz::{Multivector, SymplecticForm, C64};

fn main() -> lefschetz::Result<()> {
    let w = SymplecticForm::standard(2)?;
    let e1f1 = Multivector::from_real_terms(2, &[(&[0, 1], 1.0)])?;
    println!("*(e1*∧f1*) = {}", serde_json::to_string(&w.star(&e1f1)?).unwrap());
    let one = Multivector::scalar(2, 1.0);
    println!("*1 = {}", serde_json::to_string(&w.star(&one)?).unwrap());

    let mut rng = trial_rng(3, 0);
    let w = random_symplectic(&mut rng, 3);
    let nu = random_homogeneous(&mut rng, 3, 2);
    let star = w.star(&nu)?;
    let involution = (&w.star(&star)? - &nu).norm() / nu.norm();
    println!("random ω, ν ∈ Λ²: |**ν - ν|/|ν| = {involution:.2e}");

    let mut worst: f64 = 0.0;
    for &mask in basis::slices(3).masks(2) {
        let mu = Multivector::blade(3, Blade(mask), C64::new(1.0, 0.0));
        let lhs = (&mu ^ &star).top_coefficient(w.volume())?;
        let rhs = w.pairing(&mu, &nu)?;
        worst = worst.max((lhs - rhs).norm());
    }
    println!("defining equation over all 15 blades μ: max error {worst:.2e}");
    Ok(())
}
