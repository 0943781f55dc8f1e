//! The Sergeev algebra: products in normal form, odd Jucys-Murphy elements
//! and the quasi-idempotents e_λ.

use qweb::sergeev::{self, SergeevElt};
use qweb::shifted::strict_partitions;

fn main() -> qweb::Result<()> {
    let k = 3;
    let x = SergeevElt::parse("c[1] + 2*p[2,1,3]", k)?;
    let y = SergeevElt::parse("c[2]*c[3] - p[1,3,2]", k)?;
    println!("({}) * ({}) = {}", x.to_text(), y.to_text(), x.mul(&y)?.to_text());

    for j in 2..=k {
        let p = sergeev::pi(j, k)?;
        println!("pi_{j} = {}", p.to_text());
        println!("pi_{j}^2 = {}", p.mul(&p)?.to_text());
    }

    println!("\nquasi-idempotent constants e^2 = kappa e:");
    for size in 1..=4 {
        for lambda in strict_partitions(size) {
            let e = sergeev::e_lambda(&lambda)?;
            let kappa = e.mul(&e)?.ratio_to(&e).expect("e_lambda is quasi-idempotent");
            println!("  {lambda}: {} terms, kappa = {kappa}", e.len());
        }
    }
    Ok(())
}
