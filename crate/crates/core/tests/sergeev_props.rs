use proptest::prelude::*;
use qweb::linalg::Parity;
use qweb::scalar::Scalar;
use qweb::sergeev::{self, basis_words, psi_action, Perm, SergeevElt};
use qweb::shifted::{strict_partitions, StrictPartition};

fn element(k: usize) -> impl Strategy<Value = SergeevElt> {
    let n = basis_words(k).len();
    proptest::collection::vec((0..n, -3i64..=3), 1..=4).prop_map(move |picks| {
        let words = basis_words(k);
        picks.into_iter().fold(SergeevElt::zero(k), |acc, (i, c)| {
            acc.lincomb(&Scalar::from_int(c), &SergeevElt::basis(words[i])).unwrap()
        })
    })
}

fn homogeneous(k: usize, odd: bool) -> impl Strategy<Value = SergeevElt> {
    let words: Vec<_> = basis_words(k).into_iter().filter(|b| b.parity().is_odd() == odd).collect();
    let n = words.len();
    proptest::collection::vec((0..n, 1i64..=3), 1..=3).prop_map(move |picks| {
        picks.into_iter().fold(SergeevElt::zero(k), |acc, (i, c)| {
            acc.lincomb(&Scalar::from_int(c), &SergeevElt::basis(words[i])).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn multiplication_is_associative(x in element(4), y in element(4), z in element(4)) {
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn product_parity_is_the_sum(a in any::<bool>(), b in any::<bool>(), (x, y) in (any::<bool>(), any::<bool>()).prop_flat_map(|(a, b)| (homogeneous(3, a), homogeneous(3, b)))) {
        let _ = (a, b);
        let (px, py) = (x.parity().unwrap(), y.parity().unwrap());
        let p = x.mul(&y).unwrap();
        if !p.is_zero() {
            prop_assert_eq!(p.parity(), Some(px + py));
        }
    }

    #[test]
    fn psi_is_multiplicative(x in element(2), y in element(2), n in 1usize..=2) {
        let lhs = psi_action(&x.mul(&y).unwrap(), n);
        let rhs = psi_action(&x, n).compose(&psi_action(&y, n)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_round_trip(x in element(3)) {
        prop_assert_eq!(SergeevElt::parse(&x.to_text(), 3).unwrap(), x);
    }
}

#[test]
fn basis_has_dimension_two_to_k_times_k_factorial() {
    let mut fact = 1;
    for k in 1..=6 {
        fact *= k;
        assert_eq!(basis_words(k).len(), (1 << k) * fact, "k = {k}");
    }
}

#[test]
fn spec_products() {
    let s1 = SergeevElt::s(1, 2);
    assert_eq!(s1.mul(&s1).unwrap(), SergeevElt::one(2));
    let lhs = s1.mul(&SergeevElt::c(1, 2)).unwrap();
    assert_eq!(lhs, SergeevElt::c(2, 2).mul(&s1).unwrap());
    assert_eq!(lhs.to_text(), "c[2] * p[2,1]");
    let c12 = SergeevElt::c(1, 2).mul(&SergeevElt::c(2, 2)).unwrap();
    let c21 = SergeevElt::c(2, 2).mul(&SergeevElt::c(1, 2)).unwrap();
    assert_eq!(c12.mul(&c21).unwrap(), SergeevElt::one(2));
}

#[test]
fn permutation_composition_applies_right_factor_first() {
    let a = Perm::from_images(&[2, 1, 3]).unwrap();
    let b = Perm::from_images(&[1, 3, 2]).unwrap();
    let ab = a.compose(&b);
    for i in 0..3 {
        assert_eq!(ab.apply(i), a.apply(b.apply(i)));
    }
}

#[test]
fn jucys_murphy_parities() {
    for k in 2..=5 {
        for j in 2..=k {
            assert_eq!(sergeev::pi(j, k).unwrap().parity(), Some(Parity::Odd));
        }
    }
    assert!(sergeev::pi(1, 3).unwrap().is_zero());
}

#[test]
fn odd_jucys_murphy_elements_anticommute() {
    let k = 4;
    for i in 2..=k {
        for j in i + 1..=k {
            let (a, b) = (sergeev::pi(i, k).unwrap(), sergeev::pi(j, k).unwrap());
            assert!(a.mul(&b).unwrap().add(&b.mul(&a).unwrap()).unwrap().is_zero(), "π{i}, π{j}");
        }
    }
}

#[test]
fn quasi_idempotents_are_even_and_quasi_idempotent() {
    for k in 1..=4 {
        for l in strict_partitions(k) {
            let e = sergeev::e_lambda(&l).unwrap();
            assert_eq!(e.parity(), Some(Parity::Even), "{l}");
            let kappa = e.mul(&e).unwrap().ratio_to(&e).expect("e² is a multiple of e");
            assert!(!kappa.is_zero(), "{l}");
        }
    }
}

#[test]
fn e_lambda_kernel_matches_length() {
    for k in 1..=4 {
        for l in strict_partitions(k) {
            for n in 1..=2 {
                let zero = psi_action(&sergeev::e_lambda(&l).unwrap(), n).is_zero();
                assert_eq!(zero, l.len() > n, "λ = {l}, n = {n}");
            }
        }
    }
}

#[test]
fn psi_product_agrees_with_psi_of_product() {
    let l = StrictPartition::new(vec![3, 1]).unwrap();
    let factors = sergeev::e_lambda_factors(&l).unwrap();
    let direct = psi_action(&sergeev::e_lambda(&l).unwrap(), 2);
    assert_eq!(sergeev::psi_product(&factors, 4, 2).unwrap(), direct);
}

#[test]
fn literal_a_lambda_is_invertible_scalar_shift() {
    // With c_i² = 1 each literal factor q(col) - π_i² has no kernel; e.g. π_2² = -1.
    let p = sergeev::pi(2, 2).unwrap();
    assert_eq!(p.mul(&p).unwrap(), SergeevElt::scalar(Scalar::from_int(-1), 2));
    let l = StrictPartition::new(vec![2, 1]).unwrap();
    let lit = sergeev::a_lambda_literal(&l).unwrap().mul(&sergeev::b_lambda(&l)).unwrap();
    assert!(lit.mul(&lit).unwrap().ratio_to(&lit).is_none());
}

#[test]
fn clasp_is_idempotent() {
    for k in 1..=5 {
        let c = sergeev::clasp(k);
        assert_eq!(c.mul(&c).unwrap(), c, "k = {k}");
    }
}

#[test]
fn literal_factors_for_431() {
    // 1·(3 - π₂²)(6 - π₃²)(10 - π₄²)(3 - π₅²)(6 - π₆²)(10 - π₇²)(6 - π₈²)
    let l = StrictPartition::new(vec![4, 3, 1]).unwrap();
    let k = 8;
    let factors = sergeev::a_lambda_literal_factors(&l).unwrap();
    assert_eq!(factors[0], SergeevElt::one(k));
    for (i, t) in [3, 6, 10, 3, 6, 10, 6].into_iter().enumerate() {
        let p = sergeev::pi(i + 2, k).unwrap();
        let expected = SergeevElt::scalar(Scalar::from_int(t), k).sub(&p.mul(&p).unwrap()).unwrap();
        assert_eq!(factors[i + 1], expected, "factor {}", i + 2);
    }
}
