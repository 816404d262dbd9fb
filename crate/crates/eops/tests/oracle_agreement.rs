use eops::algebra::{monomial, Algebra, EElement, Ring};
use eops::oracle::CoinvariantSpace;
use eops::{enumerate_allowable, Condition, Prime};

fn primes() -> [Prime; 2] {
    [Prime::TWO, Prime::THREE]
}

pub fn basis_counts_match_coinvariant_dimensions() {
    for p in primes() {
        for n in 1..=2 {
            let basis = enumerate_allowable(p, n, 24, Condition::EhatBasis);
            for d in 0..=24 {
                let count = basis.iter().filter(|j| j.degree(p) == d).count();
                assert_eq!(count, CoinvariantSpace::build(n, d, p).dim(), "p={p} n={n} d={d}");
            }
        }
    }
}

pub fn normal_forms_preserve_coinvariant_classes() {
    for p in primes() {
        let alg = Algebra::new(p);
        for d in 0..=24 {
            let space = CoinvariantSpace::build(2, d, p);
            for beta in 0..=2 {
                for key in monomial::monomials(p, 2, d, beta) {
                    let x = EElement::monomial(p, Ring::Ehat, key.clone());
                    let nf = alg.normal_form(&x).unwrap();
                    assert_eq!(
                        space.class_of_element(&x).unwrap(),
                        space.class_of_element(&nf).unwrap(),
                        "p={p} d={d} {key} -> {nf}"
                    );
                }
            }
        }
    }
}

pub fn unsorted_words_keep_their_classes() {
    for p in primes() {
        let alg = Algebra::new(p);
        let bits: &[u8] = if p.is_odd() { &[0, 1] } else { &[0] };
        for a in 0..=8u32 {
            for b in 0..=8u32 {
                for &e1 in bits {
                    for &e2 in bits {
                        let word = eops::Sequence::from_pairs(&[(e1, a), (e2, b)]);
                        if word.validate(p).is_err() {
                            continue;
                        }
                        let space = CoinvariantSpace::build(2, word.degree(p), p);
                        let nf = alg.normal_form(&EElement::word(p, Ring::Ehat, &word).unwrap()).unwrap();
                        assert_eq!(space.class_of_word(&word).unwrap(), space.class_of_element(&nf).unwrap(), "{word}");
                    }
                }
            }
        }
    }
}

pub fn basis_classes_are_independent() {
    for p in primes() {
        for d in 0..=24 {
            let space = CoinvariantSpace::build(2, d, p);
            let classes: Vec<_> = enumerate_allowable(p, 2, d, Condition::EhatBasis)
                .into_iter()
                .filter(|j| j.degree(p) == d)
                .map(|j| space.class_of_word(&j).unwrap())
                .collect();
            assert_eq!(space.rank_of(&classes), classes.len(), "p={p} d={d}");
        }
    }
}

pub fn length_three_normal_forms_match_oracle() {
    for p in primes() {
        let alg = Algebra::new(p);
        for d in 0..=14 {
            let space = CoinvariantSpace::build(3, d, p);
            let basis: Vec<_> =
                enumerate_allowable(p, 3, d, Condition::EhatBasis).into_iter().filter(|j| j.degree(p) == d).collect();
            assert_eq!(basis.len(), space.dim(), "p={p} d={d}");
            for beta in 0..=3 {
                for key in monomial::monomials(p, 3, d, beta) {
                    let x = EElement::monomial(p, Ring::Ehat, key.clone());
                    let nf = alg.normal_form(&x).unwrap();
                    assert_eq!(space.class_of_element(&x).unwrap(), space.class_of_element(&nf).unwrap(), "{key}");
                }
            }
        }
    }
}

pub fn defining_relations_hold_and_mixed_identity_is_independent() {
    use eops::algebra::{Identity, RelationSet};
    for p in primes() {
        assert!(Algebra::new(p).verify_defining_relations(16).passed());
    }
    let p = Prime::THREE;
    let mutated = Algebra::with_relations(p, RelationSet::without(p, Identity::Tilde { left: 1, right: 0 }));
    assert!(!mutated.verify_defining_relations(16).passed());
}

#[cfg(test)]
mod tests {
    #[test]
    fn basis_counts_match_coinvariant_dimensions() {
        super::basis_counts_match_coinvariant_dimensions()
    }

    #[test]
    fn normal_forms_preserve_coinvariant_classes() {
        super::normal_forms_preserve_coinvariant_classes()
    }

    #[test]
    fn unsorted_words_keep_their_classes() {
        super::unsorted_words_keep_their_classes()
    }

    #[test]
    fn basis_classes_are_independent() {
        super::basis_classes_are_independent()
    }

    #[test]
    fn length_three_normal_forms_match_oracle() {
        super::length_three_normal_forms_match_oracle()
    }

    #[test]
    fn defining_relations_hold_and_mixed_identity_is_independent() {
        super::defining_relations_hold_and_mixed_identity_is_independent()
    }
}
