//! Runs part of the relation catalog at small ranges and prints one line per
//! result. Pass a group id or check name to select, e.g. `R7` or `yang-baxter`.

use qweb::catalog::{run_catalog, Ranges};

fn main() -> qweb::Result<()> {
    let filter = std::env::args().nth(1).unwrap_or_else(|| "R4".into());
    let ranges = Ranges::default().with_overrides("kmax=3,nmax=2")?;
    for r in run_catalog(Some(&filter), &ranges) {
        println!("{:<5} {:<28} {:<12} {:?} cases={} equivariant={:?}", r.group, r.name, r.params.to_string(), r.status, r.cases, r.equivariant);
        if let Some(w) = &r.witness {
            println!("      witness: {w}");
        }
    }
    Ok(())
}
