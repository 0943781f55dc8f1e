//! Graded sparse matrices: composition, the signed tensor product and inverses.

use std::sync::Arc;

use qweb::{GradedBasis, Parity, Scalar, SuperMatrix};

fn main() -> qweb::Result<()> {
    let v = Arc::new(GradedBasis::new(vec!["v".into(), "vb".into()], vec![Parity::Even, Parity::Odd])?);
    // The odd map v -> i vb, vb -> -i v. It squares to the identity.
    let j = SuperMatrix::from_entries(v.clone(), v.clone(), vec![(1, 0, Scalar::i()), (0, 1, -Scalar::i())]);
    println!("J parity: {:?}", j.parity());
    println!("J^2 = 1: {}", j.compose(&j)? == SuperMatrix::identity(v.clone()));

    // (J ⊗ 1)(1 ⊗ J) = -(1 ⊗ J)(J ⊗ 1): odd maps anticommute past each other.
    let id = SuperMatrix::identity(v.clone());
    let a = j.tensor(&id).compose(&id.tensor(&j))?;
    let b = id.tensor(&j).compose(&j.tensor(&id))?;
    println!("Koszul sign holds: {}", a == b.scale(&Scalar::from_int(-1)));

    let m = SuperMatrix::identity(v.clone()).add(&SuperMatrix::from_entries(v.clone(), v.clone(), vec![(0, 1, Scalar::sqrt2())]))?;
    let inv = m.inverse()?;
    println!("inverse of 1 + √2 E_12:");
    for (r, c, x) in inv.entries() {
        println!("  ({r}, {c}) = {x}");
    }
    println!("supertrace of J⊗J: {}", j.tensor(&j).supertrace()?);
    Ok(())
}
