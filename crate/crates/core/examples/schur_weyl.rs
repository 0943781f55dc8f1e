//! The action of the Sergeev algebra on tensor powers of the natural
//! q(n)-supermodule, and the vanishing of e_λ once λ has more than n rows.

use qweb::sergeev::{e_lambda_factors, psi_product};
use qweb::shifted::strict_partitions;

fn main() -> qweb::Result<()> {
    for n in 1..=2 {
        for k in 1..=4 {
            for lambda in strict_partitions(k) {
                let image = psi_product(&e_lambda_factors(&lambda)?, k, n)?;
                let verdict = if image.nnz() == 0 { "zero" } else { "nonzero" };
                println!("n = {n}, {lambda} ({} rows): psi(e) is {verdict}, rank {}", lambda.len(), image.rank());
            }
        }
    }
    Ok(())
}
