use std::sync::Arc;

use proptest::prelude::*;
use qweb::linalg::{GradedBasis, Parity, SuperMatrix};
use qweb::scalar::{Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn basis(parities: &[bool]) -> Arc<GradedBasis> {
    let labels = (0..parities.len()).map(|i| format!("b{i}")).collect();
    Arc::new(GradedBasis::new(labels, parities.iter().map(|&p| Parity::from_odd(p)).collect()).unwrap())
}

fn random_basis(rng: &mut ChaCha8Rng, len: usize) -> Arc<GradedBasis> {
    basis(&(0..len).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>())
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let a = Rational::new(rng.random_range(-3..=3), rng.random_range(1..=3));
    let b = Rational::from_int(rng.random_range(-2..=2));
    let c = Rational::new(rng.random_range(-1..=1), 2);
    Scalar::new(a, b, c, Rational::zero())
}

/// A random matrix `d → c` whose entries all have parity `odd`.
fn homogeneous(rng: &mut ChaCha8Rng, d: &Arc<GradedBasis>, c: &Arc<GradedBasis>, odd: bool) -> SuperMatrix {
    let mut entries = Vec::new();
    for r in 0..c.len() {
        for k in 0..d.len() {
            if (c.parity(r) + d.parity(k)).is_odd() == odd && rng.random_bool(0.7) {
                entries.push((r, k, random_scalar(rng)));
            }
        }
    }
    SuperMatrix::from_entries(d.clone(), c.clone(), entries)
}

fn id(b: &Arc<GradedBasis>) -> SuperMatrix {
    SuperMatrix::identity(b.clone())
}

proptest! {
    #[test]
    fn compose_is_associative(seed in any::<u64>(), p in any::<[bool; 3]>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bs: Vec<_> = (0..4).map(|_| { let n = rng.random_range(1..=4); random_basis(&mut rng, n) }).collect();
        let f = homogeneous(&mut rng, &bs[0], &bs[1], p[0]);
        let g = homogeneous(&mut rng, &bs[1], &bs[2], p[1]);
        let h = homogeneous(&mut rng, &bs[2], &bs[3], p[2]);
        prop_assert_eq!(h.compose(&g).unwrap().compose(&f).unwrap(), h.compose(&g.compose(&f).unwrap()).unwrap());
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>(), p in any::<[bool; 3]>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = |odd| {
            let (a, b) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let (d, c) = (random_basis(&mut rng, a), random_basis(&mut rng, b));
            homogeneous(&mut rng, &d, &c, odd)
        };
        let (f, g, h) = (m(p[0]), m(p[1]), m(p[2]));
        // Both bracketings index the product basis identically.
        prop_assert_eq!(f.tensor(&g).tensor(&h).entries(), f.tensor(&g.tensor(&h)).entries());
    }

    #[test]
    fn super_interchange(seed in any::<u64>(), fo in any::<bool>(), go in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bs: Vec<_> = (0..4).map(|_| { let n = rng.random_range(1..=3); random_basis(&mut rng, n) }).collect();
        let f = homogeneous(&mut rng, &bs[0], &bs[1], fo);
        let g = homogeneous(&mut rng, &bs[2], &bs[3], go);
        // (f ⊗ id)(id ⊗ g) = (-1)^{p(f)p(g)} (id ⊗ g)(f ⊗ id)
        let lhs = f.tensor(&id(&bs[3])).compose(&id(&bs[0]).tensor(&g)).unwrap();
        let rhs = id(&bs[1]).tensor(&g).compose(&f.tensor(&id(&bs[2]))).unwrap();
        prop_assert_eq!(lhs, rhs.scale(&Scalar::sign(fo && go)));
    }

    #[test]
    fn identity_is_neutral(seed in any::<u64>(), odd in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, c) = (random_basis(&mut rng, 3), random_basis(&mut rng, 4));
        let f = homogeneous(&mut rng, &d, &c, odd);
        prop_assert_eq!(&id(&c).compose(&f).unwrap(), &f);
        prop_assert_eq!(&f.compose(&id(&d)).unwrap(), &f);
    }

    #[test]
    fn components_partition_entries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, c) = (random_basis(&mut rng, 4), random_basis(&mut rng, 4));
        let m = homogeneous(&mut rng, &d, &c, false).add(&homogeneous(&mut rng, &d, &c, true)).unwrap();
        let (even, odd) = (m.component(Parity::Even), m.component(Parity::Odd));
        prop_assert_eq!(even.add(&odd).unwrap(), m.clone());
        prop_assert_eq!(even.nnz() + odd.nnz(), m.nnz());
        prop_assert!(even.entries().iter().all(|(r, k, _)| m.entry_parity(*r, *k) == Parity::Even));
        prop_assert!(odd.entries().iter().all(|(r, k, _)| m.entry_parity(*r, *k) == Parity::Odd));
    }

    #[test]
    fn inverse_of_invertible(n in 1usize..=20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_basis(&mut rng, n);
        // L·U with nonzero diagonals is invertible.
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for r in 0..n {
            for c in 0..n {
                let v = random_scalar(&mut rng);
                match r.cmp(&c) {
                    std::cmp::Ordering::Equal => {
                        lower.push((r, c, Scalar::from_int(rng.random_range(1..=3))));
                        upper.push((r, c, Scalar::frac(1, rng.random_range(1..=4))));
                    }
                    std::cmp::Ordering::Greater => lower.push((r, c, v)),
                    std::cmp::Ordering::Less => upper.push((r, c, v)),
                }
            }
        }
        let a = SuperMatrix::from_entries(b.clone(), b.clone(), lower)
            .compose(&SuperMatrix::from_entries(b.clone(), b.clone(), upper))
            .unwrap();
        let inv = a.inverse().unwrap();
        prop_assert_eq!(inv.compose(&a).unwrap(), id(&b));
        prop_assert_eq!(a.compose(&inv).unwrap(), id(&b));
    }
}

#[test]
fn singular_matrix_is_rejected() {
    let b = basis(&[false, true]);
    let m = SuperMatrix::from_entries(b.clone(), b, [(0, 0, Scalar::one())]);
    assert!(m.inverse().is_err());
}

#[test]
fn koszul_sign_in_tensor() {
    // id on an odd line tensored with an odd map: (id ⊗ g)(v ⊗ w) = -v ⊗ g(w).
    let odd = basis(&[true]);
    let two = basis(&[false, true]);
    let g = SuperMatrix::from_entries(two.clone(), two, [(1, 0, Scalar::one())]);
    assert_eq!(id(&odd).tensor(&g).get(1, 0), Scalar::from_int(-1));
    assert_eq!(g.tensor(&id(&odd)).get(1, 0), Scalar::one());
}
