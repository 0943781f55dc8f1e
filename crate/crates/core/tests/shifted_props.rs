use proptest::prelude::*;
use qweb::shifted::{self, strict_partitions, StrictPartition};

#[test]
fn enumeration_examples() {
    let four: Vec<String> = strict_partitions(4).iter().map(ToString::to_string).collect();
    assert_eq!(four.len(), 2);
    assert!(four.contains(&"(4)".to_string()) && four.contains(&"(3,1)".to_string()));
    assert_eq!(strict_partitions(0), vec![StrictPartition::empty()]);
    assert!(strict_partitions(6).contains(&StrictPartition::staircase(2).unwrap()));
}

#[test]
fn staircase_tableaux_are_lr_tableaux() {
    for n in 1..=2 {
        for case in shifted::verify_staircase(n, 10).unwrap() {
            assert!(case.passed(), "{case:?}");
        }
    }
}

#[test]
fn staircase_content_is_strict_and_sums_correctly() {
    for n in 1..=2 {
        let base = StrictPartition::staircase(n).unwrap();
        for size in 1..=10 {
            for mu in strict_partitions(size).into_iter().filter(|m| m.len() > n) {
                let t = shifted::staircase_tableau(&mu, n).unwrap();
                let content = t.content();
                let nz: Vec<usize> = content.iter().copied().filter(|&c| c > 0).collect();
                assert!(nz.windows(2).all(|w| w[0] > w[1]), "{mu}: {content:?}");
                assert_eq!(content.iter().sum::<usize>(), mu.size() - base.size());
                assert!(t.is_valid() && shifted::lattice_property(&t.word()));
            }
        }
    }
}

#[test]
fn worked_example_word() {
    let mu = StrictPartition::new(vec![8, 5, 4, 2]).unwrap();
    let t = shifted::staircase_tableau(&mu, 2).unwrap();
    let word: String = t.word().iter().map(ToString::to_string).collect();
    assert_eq!(word, "121'2'31'2'21'1111");
}

#[test]
fn staircase_precondition_is_enforced() {
    let mu = StrictPartition::new(vec![5, 3]).unwrap();
    assert!(shifted::staircase_tableau(&mu, 2).is_err());
}

#[test]
fn lr_agrees_with_schur_p_products() {
    // P_λ P_ν = Σ_μ f^μ_{λν} P_μ in 4 variables, |λ| + |ν| ≤ 8.
    for total in 0..=8 {
        for a in 0..=total {
            for lambda in strict_partitions(a) {
                for nu in strict_partitions(total - a) {
                    let prod = shifted::poly_mul(&shifted::schur_p(&lambda, 4), &shifted::schur_p(&nu, 4));
                    let expansion = shifted::expand_in_p_basis(&prod, 4).unwrap();
                    for mu in strict_partitions(total).into_iter().filter(|m| m.len() <= 4) {
                        let want = expansion.get(&mu).copied().unwrap_or(0);
                        assert_eq!(shifted::lr_coefficient(&lambda, &nu, &mu) as i64, want, "λ={lambda} ν={nu} μ={mu}");
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn schur_p_is_symmetric(size in 0usize..=6, pick in any::<prop::sample::Index>(), m in 1usize..=4, swap in any::<prop::sample::Index>()) {
        let parts = strict_partitions(size);
        let lambda = &parts[pick.index(parts.len())];
        let p = shifted::schur_p(lambda, m);
        if m >= 2 {
            let i = swap.index(m - 1);
            let swapped: shifted::Poly = p
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.swap(i, i + 1);
                    (e, *c)
                })
                .collect();
            prop_assert_eq!(swapped, p);
        }
    }

    #[test]
    fn word_text_round_trip(letters in proptest::collection::vec((1usize..=4, any::<bool>()), 0..12)) {
        let w: Vec<_> = letters.into_iter().map(|(v, m)| shifted::MarkedLetter::new(v, m)).collect();
        prop_assert_eq!(shifted::parse_word(&shifted::format_word(&w)).unwrap(), w);
    }
}
