//! Parse a web in the DSL, evaluate it as a map of q(n)-supermodules and
//! check that the result commutes with q(n).

use qweb::qfunctor::{eval_web, is_equivariant};
use qweb::web::{format_dsl, parse_typed};

fn main() -> qweb::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "merge(1,1) ; xup(1,1) ; split(1,1)".into());
    let n = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let (web, dom, cod) = parse_typed(&text)?;
    println!("web: {}", format_dsl(&web));
    println!("type: {dom} -> {cod}");

    let m = eval_web(n, &web)?;
    println!("n = {n}: {} x {} matrix, {} nonzero entries, parity {:?}", m.nrows(), m.ncols(), m.nnz(), m.parity());
    for (r, c, x) in m.entries().into_iter().take(12) {
        println!("  {} <- {}: {x}", m.codomain().label(r), m.domain().label(c));
    }
    println!("q({n})-equivariant: {}", is_equivariant(n, &m, &dom, &cod)?);
    Ok(())
}
