//! Clasps: the symmetriser in the Sergeev algebra and the same idempotent
//! drawn as a web, compared under evaluation.

use qweb::qfunctor::eval_web;
use qweb::sergeev::{self, psi_action};
use qweb::web::build;

fn main() -> qweb::Result<()> {
    for k in 1..=4 {
        let cl = sergeev::clasp(k);
        println!("Cl_{k}: {} terms, idempotent: {}", cl.len(), cl.mul(&cl)? == cl);
    }
    let (k, n) = (3, 2);
    let algebraic = psi_action(&sergeev::clasp(k), n);
    let diagram = eval_web(n, &build::clasp(k as i64))?;
    println!("clasp on V^{{⊗{k}}} at n = {n}: rank {} of {}", algebraic.rank(), algebraic.ncols());
    println!("web clasp agrees with psi(Cl_{k}): {}", algebraic == diagram);
    Ok(())
}
