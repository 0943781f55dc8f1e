//! Dimensions of spaces of q(n)-equivariant maps between evaluated objects,
//! found by solving the supercommutation equations exactly.

use qweb::qfunctor::hom_dim;
use qweb::ObjectWord;

fn main() -> qweb::Result<()> {
    let pairs = [("^1", "^1"), ("^1^1", "^1^1"), ("^2", "^1^1"), ("^1v1", ""), ("^2^1", "^1^2")];
    for n in 1..=2 {
        for (a, b) in pairs {
            let (wa, wb) = (ObjectWord::parse(a)?, ObjectWord::parse(b)?);
            let (even, odd) = hom_dim(n, &wa, &wb);
            println!("n = {n}: Hom({wa}, {wb}) has dimension {even}|{odd}");
        }
    }
    Ok(())
}
