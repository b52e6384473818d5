//! The triple `L = ω∧·`, `Λ = *L*`, `B = [L, Λ]` on elementary primitive forms.
//!
//! ```not_rust
//! cargo run --example sl2_triple
//! ```

use lefschetz::symplectic::{elementary_primitive_basis, Sl2Operator};
use lefschetz::{Multivector, SymplecticForm};

fn main() -> lefschetz::Result<()> {
    let n = 3;
    let w = SymplecticForm::standard(n)?;
    for k in 0..=n {
        let u = &elementary_primitive_basis(n, k)?[0];
        println!("k = {k}, u = {}", serde_json::to_string(u).unwrap());
        for r in 0..=n - k {
            let lr = &w.omega_power(r) ^ u;
            let below = if r == 0 { Multivector::zero(n) } else { &w.omega_power(r - 1) ^ u };
            let lowered = w.sl2_apply(Sl2Operator::Lambda, &lr)?;
            let weight = w.sl2_apply(Sl2Operator::B, &lr)?;
            let a = (n + 1 - k - r) as f64;
            let h = k as f64 + 2.0 * r as f64 - n as f64;
            println!(
                "  r = {r}: |Λ L_r u - {a} L_(r-1) u| = {:.1e}, |B L_r u - ({h}) L_r u| = {:.1e}",
                (&lowered - &below.scale(a)).norm(),
                (&weight - &lr.scale(h)).norm()
            );
        }
    }
    Ok(())
}
