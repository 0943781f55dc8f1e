use qweb::error::Error;
use qweb::web::{format_dsl, parse_dsl, parse_typed};

const CORPUS: &str = include_str!("data/dsl_corpus.txt");

fn entries(tag: &str) -> Vec<&'static str> {
    CORPUS.lines().filter_map(|l| l.strip_prefix(tag)).map(str::trim).collect()
}

#[test]
fn corpus_has_one_hundred_well_typed_expressions() {
    assert_eq!(entries("ok ").len(), 100);
    assert!(!entries("ill ").is_empty());
}

#[test]
fn well_typed_entries_round_trip() {
    for text in entries("ok ") {
        let (e, dom, cod) = parse_typed(text).unwrap_or_else(|err| panic!("`{text}`: {err}"));
        let printed = format_dsl(&e);
        let (again, dom2, cod2) = parse_typed(&printed).unwrap();
        assert_eq!(again, e, "`{text}` printed as `{printed}`");
        assert_eq!((dom2, cod2), (dom, cod));
        assert_eq!(format_dsl(&again), printed, "format is not a fixpoint for `{text}`");
    }
}

#[test]
fn ill_typed_entries_are_rejected_with_a_position() {
    for text in entries("ill ") {
        assert!(parse_dsl(text).is_ok(), "`{text}` should be syntactically valid");
        match parse_typed(text) {
            Err(Error::Parse(e)) => {
                assert!(e.pos < text.len(), "`{text}`: position {} out of range", e.pos);
                let rest = &text[e.pos..];
                assert!(rest.starts_with(|c: char| c == '(' || c.is_ascii_alphabetic()), "`{text}`: position {} is not the start of a sub-expression", e.pos);
                assert!(e.msg.contains("type error"), "`{text}`: {}", e.msg);
            }
            other => panic!("`{text}` was not rejected with a positioned error: {other:?}"),
        }
    }
}

#[test]
fn syntax_errors_point_at_the_offending_character() {
    for (text, pos) in [("merge(1,1) ; splt(1,1)", 13), ("merge(1 1)", 8), ("dot(1) * ", 9), ("dot(1))", 6), ("perm(1,1)", 5)] {
        match parse_dsl(text) {
            Err(e) => assert_eq!(e.pos, pos, "`{text}`: {}", e.msg),
            Ok(w) => panic!("`{text}` parsed as {w}"),
        }
    }
}
