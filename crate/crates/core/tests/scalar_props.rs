use proptest::prelude::*;
use qweb::scalar::{Rational, Scalar};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| Rational::new(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational(), rational(), rational()).prop_map(|(a, b, c, d)| Scalar::new(a, b, c, d))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #[test]
    fn addition_is_associative_and_commutative(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x + &Scalar::zero(), x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn multiplication_is_associative_and_commutative(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &Scalar::one(), x.clone());
    }

    #[test]
    fn distributivity(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn inverse_is_two_sided(x in nonzero_scalar()) {
        let inv = x.inv().unwrap();
        prop_assert!((&x * &inv).is_one());
        prop_assert!((&inv * &x).is_one());
    }

    #[test]
    fn text_round_trip(x in scalar()) {
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn components_stay_reduced(x in scalar(), y in scalar()) {
        for r in (&x * &y).components() {
            let (n, d) = (r.numer(), r.denom());
            prop_assert!(d > 0.into());
            prop_assert_eq!(num_integer::Integer::gcd(&n, &d), if n == 0.into() { d.clone() } else { 1.into() });
        }
    }
}

#[test]
fn multiplication_table() {
    let (i, r2) = (Scalar::i(), Scalar::sqrt2());
    assert_eq!(&i * &i, Scalar::from_int(-1));
    assert_eq!(&r2 * &r2, Scalar::from_int(2));
    assert_eq!(&Scalar::inv_sqrt2() * &r2, Scalar::one());
    assert_eq!(&(&Scalar::one() + &i) + &(&Scalar::one() - &i), Scalar::from_int(2));
}

#[test]
fn ten_thousand_inverses() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 10_000 {
        let mut c = || Rational::new(rng.random_range(-6..=6), rng.random_range(1..=5));
        let x = Scalar::new(c(), c(), c(), c());
        if x.is_zero() {
            continue;
        }
        assert!((&x * &x.inv().unwrap()).is_one(), "{x}");
        done += 1;
    }
}

#[test]
fn zero_has_no_inverse() {
    assert!(Scalar::zero().inv().is_err());
}
