//! Syntax and type errors from the DSL carry the byte offset they refer to.

use qweb::web::parse_typed;

fn main() {
    for text in ["merge(1,1) ; split(1,1)", "merge(1 1)", "dot(1) * (merge(1,1) ; merge(1,2))", "capL(1) ; capR(1)"] {
        match parse_typed(text) {
            Ok((_, dom, cod)) => println!("{text:<40} ok: {dom} -> {cod}"),
            Err(e) => println!("{text:<40} {e}"),
        }
    }
}
