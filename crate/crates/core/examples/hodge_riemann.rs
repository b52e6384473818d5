//! Hodge star, Hermitian pairing and the Hodge-Riemann relation for the
//! standard compatible pair on C^2.
//!
//! ```not_rust
//! cargo run --example hodge_riemann
//! ```

use lefschetz::complex_structure::{check_compatibility, hermitian_inner, hodge_riemann, hodge_star, ComplexStructure};
use lefschetz::{Multivector, SymplecticForm, C64};

fn dz(n: usize, j: usize) -> Multivector {
    &Multivector::generator(n, 2 * j) + &(&Multivector::generator(n, 2 * j + 1) * C64::i())
}

fn main() -> lefschetz::Result<()> {
    let w = SymplecticForm::standard(2)?;
    let j = ComplexStructure::standard(2)?;
    println!("compatibility: {:?}", check_compatibility(&w, &j));

    let dz1 = dz(2, 0);
    println!("(dz1, dz1) = {}", hermitian_inner(&w, &j, &dz1, &dz1)?);

    // dz1∧dz̄2 is a primitive (1,1)-form
    let u = &dz1 ^ &dz(2, 1).conj();
    println!("bidegree of dz1∧dz̄2: {:?}", j.bidegree(&u)?);
    println!("*(dz1∧dz̄2) = {}", serde_json::to_string(&hodge_star(&w, &j, &u)?).unwrap());
    let check = hodge_riemann(&w, &j, &u)?;
    println!(
        "(u,u) = {:.6}, top(u∧conj(Iu)∧ω_0) = {:.6}, residual {:.1e}",
        check.norm_squared, check.top, check.residual
    );

    let v = &(&dz1 ^ &dz(2, 1)) * C64::new(0.0, 2.0);
    let check = hodge_riemann(&w, &j, &v)?;
    println!("(2,0) form 2i dz1∧dz2: (v,v) = {:.6}, residual {:.1e}", check.norm_squared, check.residual);
    Ok(())
}
