//! Shifted tableaux: the staircase tableau of μ/λ(n), shifted
//! Littlewood-Richardson coefficients and Schur P-polynomials.

use qweb::shifted::{check_staircase, lr_coefficient, poly_mul, schur_p, staircase_tableau, expand_in_p_basis};
use qweb::StrictPartition;

fn main() -> qweb::Result<()> {
    let mu = StrictPartition::new(vec![8, 5, 4, 2])?;
    let t = staircase_tableau(&mu, 2)?;
    println!("staircase tableau of {mu} over the n = 2 staircase:\n{}", t.to_text());
    println!("content {:?}, LR: {}", t.content(), t.is_lr());
    println!("{:?}", check_staircase(&mu, 2)?);

    let (a, b) = (StrictPartition::new(vec![2, 1])?, StrictPartition::new(vec![2])?);
    let product = poly_mul(&schur_p(&a, 4), &schur_p(&b, 4));
    println!("\nP_{a} P_{b} in 4 variables:");
    for (nu, c) in expand_in_p_basis(&product, 4)? {
        println!("  {c} P_{nu}   (f = {})", lr_coefficient(&a, &b, &nu));
    }
    Ok(())
}
