use proptest::prelude::*;
use qweb::error::Error;
use qweb::qfunctor::eval_web;
use qweb::sergeev::Perm;
use qweb::web::{perm_web, typecheck, ObjectWord, Strand, WebExpr};

fn leaf() -> impl Strategy<Value = WebExpr> {
    let k = 1i64..=3;
    prop_oneof![
        k.clone().prop_map(|k| WebExpr::Id(Strand::up(k))),
        k.clone().prop_map(|k| WebExpr::Id(Strand::down(k))),
        k.clone().prop_map(WebExpr::Dot),
        (1i64..=2, 1i64..=2).prop_map(|(a, b)| WebExpr::Merge(a, b)),
        (1i64..=2, 1i64..=2).prop_map(|(a, b)| WebExpr::Split(a, b)),
        k.clone().prop_map(WebExpr::CupL),
        k.clone().prop_map(WebExpr::CapL),
        (1i64..=2, 1i64..=2).prop_map(|(a, b)| WebExpr::RCross(a, b)),
    ]
}

fn expr() -> impl Strategy<Value = WebExpr> {
    leaf().prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| WebExpr::compose(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| WebExpr::tensor(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn typecheck_is_total(w in expr()) {
        match typecheck(&w) {
            Ok(_) | Err(Error::Type { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn compose_typechecks_iff_types_meet(a in expr(), b in expr()) {
        if let (Ok((ad, _)), Ok((_, bc))) = (typecheck(&a), typecheck(&b)) {
            let ok = typecheck(&WebExpr::compose(a, b)).is_ok();
            prop_assert_eq!(ok, ad == bc);
        }
    }

    #[test]
    fn tensor_concatenates_types(a in expr(), b in expr()) {
        if let (Ok((ad, ac)), Ok((bd, bc))) = (typecheck(&a), typecheck(&b)) {
            let (d, c) = typecheck(&WebExpr::tensor(a, b)).unwrap();
            prop_assert_eq!(d, ad.concat(&bd));
            prop_assert_eq!(c, ac.concat(&bc));
        }
    }

    #[test]
    fn zero_thickness_strands_change_nothing(w in expr(), left in any::<bool>()) {
        if typecheck(&w).is_ok() {
            let padded = if left {
                WebExpr::tensor(WebExpr::Id(Strand::up(0)), w.clone())
            } else {
                WebExpr::tensor(w.clone(), WebExpr::Id(Strand::down(0)))
            };
            prop_assert_eq!(typecheck(&padded).unwrap(), typecheck(&w).unwrap());
            prop_assert_eq!(eval_web(1, &padded).unwrap(), eval_web(1, &w).unwrap());
        }
    }

    #[test]
    fn functoriality_of_tensor(a in leaf(), b in leaf()) {
        let t = eval_web(1, &WebExpr::tensor(a.clone(), b.clone())).unwrap();
        let direct = eval_web(1, &a).unwrap().tensor(&eval_web(1, &b).unwrap());
        prop_assert_eq!(t.entries(), direct.entries());
    }
}

#[test]
fn spec_types() {
    let (d, c) = typecheck(&WebExpr::Merge(2, 3)).unwrap();
    assert_eq!((d, c), (ObjectWord::ups(&[2, 3]), ObjectWord::ups(&[5])));
    let w = WebExpr::compose(WebExpr::Merge(1, 2), WebExpr::Split(1, 2));
    assert_eq!(typecheck(&w).unwrap(), (ObjectWord::ups(&[3]), ObjectWord::ups(&[3])));
    assert!(typecheck(&WebExpr::compose(WebExpr::Merge(1, 1), WebExpr::Dot(3))).is_err());
}

#[test]
fn permutation_webs_do_not_depend_on_the_reduced_word() {
    for k in 3..=4 {
        for p in Perm::all(k) {
            let a = perm_web(&p.reduced_word(true), k);
            let b = perm_web(&p.reduced_word(false), k);
            for n in 1..=2 {
                assert_eq!(eval_web(n, &a).unwrap(), eval_web(n, &b).unwrap(), "{p:?} n = {n}");
            }
        }
    }
}

#[test]
fn leftward_and_rightward_crossings_are_inverse() {
    use qweb::web::build::lcross;
    for (k, l) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for n in 1..=2 {
            let r = eval_web(n, &WebExpr::RCross(k, l)).unwrap();
            let x = eval_web(n, &lcross(k, l)).unwrap();
            assert_eq!(r.compose(&x).unwrap(), qweb::linalg::SuperMatrix::identity(x.domain().clone()));
            assert_eq!(x.compose(&r).unwrap(), qweb::linalg::SuperMatrix::identity(r.domain().clone()));
        }
    }
}
