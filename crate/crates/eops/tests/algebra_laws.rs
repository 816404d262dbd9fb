use eops::algebra::{Algebra, EElement, Ring};
use eops::{Entry, Lin, Prime, Scalar, Sequence};

fn primes() -> [Prime; 2] {
    [Prime::TWO, Prime::THREE]
}

fn entries(p: Prime, max_index: u32) -> Vec<Entry> {
    let mut out = Vec::new();
    for i in 0..=max_index {
        for eps in 0..=u8::from(p.is_odd()) {
            let e = Entry::new(eps, i);
            if e.is_legitimate(p) {
                out.push(e);
            }
        }
    }
    out
}

fn words(p: Prime, length: usize, max_index: u32) -> Vec<Sequence> {
    let es = entries(p, max_index);
    let mut out = vec![Sequence::empty()];
    for _ in 0..length {
        out = out.iter().flat_map(|w| es.iter().map(move |e| w.concat(&Sequence(vec![*e])))).collect();
    }
    out
}

fn basis(alg: &Algebra, max_length: usize, max_degree: u32) -> Vec<EElement> {
    let p = alg.p();
    (1..=max_length)
        .flat_map(|len| alg.basis(Ring::E, len, max_degree))
        .map(|j| EElement::monomial(p, Ring::E, j))
        .collect()
}

fn degree(p: Prime, x: &EElement) -> u32 {
    x.terms().keys().next().map_or(0, |k| k.degree(p))
}

type Pairs = Lin<(Sequence, Sequence)>;

/// `(a'⊗a'')∘(b'⊗b'') = (-1)^{|a''||b'|} (a'∘b')⊗(a''∘b'')`, normalized.
fn tensor_circ(alg: &Algebra, x: &Pairs, y: &Pairs) -> Pairs {
    let p = alg.p();
    let mono = |k: &Sequence| EElement::monomial(p, Ring::E, k.clone());
    let mut out = Lin::zero(p);
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let sign = p.sign(a2.degree(p) % 2 == 1 && b1.degree(p) % 2 == 1);
            let l = alg.circ(&mono(a1), &mono(b1)).unwrap();
            let r = alg.circ(&mono(a2), &mono(b2)).unwrap();
            for (kl, vl) in l.terms().iter() {
                for (kr, vr) in r.terms().iter() {
                    out.add_term((kl.clone(), kr.clone()), p.mul(p.mul(ca, cb), p.mul(sign, p.mul(vl, vr))));
                }
            }
        }
    }
    out
}

pub fn normal_form_is_idempotent_and_linear() {
    for p in primes() {
        let alg = Algebra::new(p);
        let mut previous: Option<(EElement, EElement)> = None;
        for len in 1..=3 {
            for w in words(p, len, 6) {
                let x = EElement::word(p, Ring::E, &w).unwrap();
                let nf = alg.normal_form(&x).unwrap();
                assert_eq!(alg.normal_form(&nf).unwrap(), nf, "p={p} {w}");
                if let Some((y, ny)) = &previous {
                    if y.grading() == x.grading() {
                        let two = p.scalar(2);
                        let combo = x.plus(&y.scaled(two));
                        assert_eq!(alg.normal_form(&combo).unwrap(), nf.plus(&ny.scaled(two)), "p={p} {w}");
                    }
                }
                previous = Some((x, nf));
            }
        }
    }
}

pub fn circ_is_graded_commutative() {
    for p in primes() {
        let alg = Algebra::new(p);
        let xs = basis(&alg, 2, 12);
        for x in &xs {
            for y in &xs {
                if degree(p, x) + degree(p, y) > 16 {
                    continue;
                }
                let sign = p.sign(degree(p, x) % 2 == 1 && degree(p, y) % 2 == 1);
                assert_eq!(alg.circ(x, y).unwrap(), alg.circ(y, x).unwrap().scaled(sign), "p={p} {x} {y}");
            }
        }
    }
}

pub fn coproduct_is_coassociative_and_counital() {
    for p in primes() {
        let alg = Algebra::new(p);
        for x in basis(&alg, 3, 20) {
            let psi = alg.coproduct(&x).unwrap();
            let mut left_unit = EElement::zero(p, Ring::E);
            let mut right_unit = EElement::zero(p, Ring::E);
            let mut left: Lin<(Sequence, Sequence, Sequence)> = Lin::zero(p);
            let mut right: Lin<(Sequence, Sequence, Sequence)> = Lin::zero(p);
            for ((a, b), c) in psi.terms().iter() {
                let ea = EElement::monomial(p, Ring::E, a.clone());
                let eb = EElement::monomial(p, Ring::E, b.clone());
                left_unit.add_scaled(&eb, p.mul(c, alg.counit(&ea)));
                right_unit.add_scaled(&ea, p.mul(c, alg.counit(&eb)));
                for ((a1, a2), ca) in alg.coproduct(&ea).unwrap().terms().iter() {
                    left.add_term((a1.clone(), a2.clone(), b.clone()), p.mul(c, ca));
                }
                for ((b1, b2), cb) in alg.coproduct(&eb).unwrap().terms().iter() {
                    right.add_term((a.clone(), b1.clone(), b2.clone()), p.mul(c, cb));
                }
            }
            assert_eq!(left, right, "p={p} {x}");
            assert_eq!(left_unit, x, "p={p} {x}");
            assert_eq!(right_unit, x, "p={p} {x}");
        }
    }
}

pub fn coproduct_and_counit_are_multiplicative() {
    for p in primes() {
        let alg = Algebra::new(p);
        let xs = basis(&alg, 2, 10);
        for x in &xs {
            for y in &xs {
                if degree(p, x) + degree(p, y) > 14 {
                    continue;
                }
                let xy = alg.circ(x, y).unwrap();
                let lhs = alg.coproduct(&xy).unwrap();
                let rhs = tensor_circ(&alg, alg.coproduct(x).unwrap().terms(), alg.coproduct(y).unwrap().terms());
                assert_eq!(lhs.terms(), &rhs, "p={p} {x} {y}");
                assert_eq!(alg.counit(&xy), p.mul(alg.counit(x), alg.counit(y)));
            }
        }
    }
}

pub fn steenrod_cartan_formula() {
    for p in primes() {
        let alg = Algebra::new(p);
        let xs = basis(&alg, 2, 14);
        for x in &xs {
            for y in &xs {
                if degree(p, x) + degree(p, y) > 20 {
                    continue;
                }
                let xy = alg.circ(x, y).unwrap();
                for k in 0..=6 {
                    let mut rhs = EElement::zero(p, Ring::E);
                    for k1 in 0..=k {
                        let a = alg.steenrod(k1, x).unwrap();
                        let b = alg.steenrod(k - k1, y).unwrap();
                        rhs.add_scaled(&alg.circ(&a, &b).unwrap(), Scalar::ONE);
                    }
                    assert_eq!(alg.steenrod(k, &xy).unwrap(), rhs, "p={p} P^{k}({x} o {y})");
                }
            }
        }
    }
}

pub fn bockstein_squares_to_zero() {
    let p = Prime::THREE;
    let alg = Algebra::new(p);
    for x in basis(&alg, 3, 20) {
        let bx = alg.bockstein(&x).unwrap();
        assert!(alg.bockstein(&bx).unwrap().is_zero(), "{x}");
    }
}

/// `E^ε_n ∘ r = 0` whenever `ε <= n < (ε + deg_β r) / 2`.
pub fn low_operations_vanish_on_bockstein_heavy_classes() {
    let p = Prime::THREE;
    let alg = Algebra::new(p);
    let mut checked = 0;
    for r in basis(&alg, 2, 20) {
        let key = r.terms().keys().next().unwrap().clone();
        let b = key.bockstein_degree();
        for eps in 0..=1u8 {
            for n in eps as u32..=20 {
                if 2 * n >= eps as u32 + b {
                    break;
                }
                let e = EElement::generator(p, Ring::E, eps, n).unwrap();
                assert!(alg.circ(&e, &r).unwrap().is_zero(), "E{eps}_{n} o {key}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

pub fn steenrod_operations_respect_the_bockstein_bound() {
    for p in primes() {
        let alg = Algebra::new(p);
        let q = p.value();
        for r in basis(&alg, 2, 24) {
            let key = r.terms().keys().next().unwrap().clone();
            let (deg, b) = (key.degree(p), key.bockstein_degree());
            for l in 1..=deg {
                let beyond = if p.is_odd() { 2 * q * l > deg - b } else { 2 * l > deg };
                if beyond {
                    assert!(alg.steenrod(l, &r).unwrap().is_zero(), "p={p} P^{l} {key}");
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn normal_form_is_idempotent_and_linear() {
        super::normal_form_is_idempotent_and_linear()
    }

    #[test]
    fn circ_is_graded_commutative() {
        super::circ_is_graded_commutative()
    }

    #[test]
    fn coproduct_is_coassociative_and_counital() {
        super::coproduct_is_coassociative_and_counital()
    }

    #[test]
    fn coproduct_and_counit_are_multiplicative() {
        super::coproduct_and_counit_are_multiplicative()
    }

    #[test]
    fn steenrod_cartan_formula() {
        super::steenrod_cartan_formula()
    }

    #[test]
    fn bockstein_squares_to_zero() {
        super::bockstein_squares_to_zero()
    }

    #[test]
    fn low_operations_vanish_on_bockstein_heavy_classes() {
        super::low_operations_vanish_on_bockstein_heavy_classes()
    }

    #[test]
    fn steenrod_operations_respect_the_bockstein_bound() {
        super::steenrod_operations_respect_the_bockstein_bound()
    }
}
