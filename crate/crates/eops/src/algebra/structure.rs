//! Coproduct, counit, Steenrod and Bockstein operations on normal forms.

use crate::arith::{Prime, Scalar};
use crate::lin::Lin;
use crate::sequence::{Entry, Sequence};

use super::element::entry_is_odd;
use super::monomial;
use super::relations::free_mul;
use super::{Algebra, AlgebraError, EElement, ETensor};

type Pairs = Lin<(Sequence, Sequence)>;

/// `ψ` of one generator as pairs of single entries (or the unit for `E^0_0` splits).
fn generator_coproduct(e: Entry, p: Prime) -> Pairs {
    let mut out = Lin::zero(p);
    let g = |eps: u8, i: u32| Sequence::generator(eps, i);
    for i in 0..=e.index {
        let j = e.index - i;
        if e.bockstein == 0 {
            out.add_term((g(0, i), g(0, j)), Scalar::ONE);
        } else {
            if i >= 1 {
                out.add_term((g(1, i), g(0, j)), Scalar::ONE);
            }
            if j >= 1 {
                out.add_term((g(0, i), g(1, j)), Scalar::ONE);
            }
        }
    }
    out
}

/// `(a'⊗a'')(b'⊗b'') = (-1)^{|a''||b'|} a'b' ⊗ a''b''` in the free algebra.
fn tensor_product(x: &Pairs, y: &Pairs, p: Prime) -> Pairs {
    let mut out = Lin::zero(p);
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let (Some((l, sl)), Some((r, sr))) = (monomial::multiply(a1, b1, p), monomial::multiply(a2, b2, p)) else {
                continue;
            };
            let koszul = p.sign(a2.degree(p) % 2 == 1 && b1.degree(p) % 2 == 1);
            let c = p.mul(p.mul(ca, cb), p.mul(koszul, p.mul(sl, sr)));
            out.add_term((l, r), c);
        }
    }
    out
}

/// `P^k_*` of one generator.
fn generator_steenrod(k: u32, e: Entry, p: Prime) -> Option<(Entry, Scalar)> {
    if k > e.index {
        return None;
    }
    let rest = (e.index - k) as i64;
    let top = (p.value() as i64 - 1) * rest - e.bockstein as i64;
    let c = p.binom(top, k as i64);
    (!c.is_zero()).then_some((Entry::new(e.bockstein, e.index - k), c))
}

impl Algebra {
    pub fn coproduct(&self, x: &EElement) -> Result<ETensor, AlgebraError> {
        let p = self.p;
        let mut free = Lin::zero(p);
        for (key, c) in x.terms().iter() {
            let mut acc: Pairs = Lin::basis(p, (Sequence::empty(), Sequence::empty()));
            for &e in key.entries() {
                acc = tensor_product(&acc, &generator_coproduct(e, p), p);
            }
            free.add_scaled(&acc, c);
        }
        let mut out = Lin::zero(p);
        for ((a, b), c) in free.iter() {
            let na = self.normal_form(&EElement::monomial(p, x.ring(), a.clone()))?;
            if na.is_zero() {
                continue;
            }
            let nb = self.normal_form(&EElement::monomial(p, x.ring(), b.clone()))?;
            for (ka, va) in na.terms().iter() {
                for (kb, vb) in nb.terms().iter() {
                    out.add_term((ka.clone(), kb.clone()), p.mul(c, p.mul(va, vb)));
                }
            }
        }
        Ok(ETensor::from_terms(x.ring(), out))
    }

    pub fn counit(&self, x: &EElement) -> Scalar {
        monomial_counit(x)
    }

    pub fn steenrod(&self, k: u32, x: &EElement) -> Result<EElement, AlgebraError> {
        let p = self.p;
        let mut free = Lin::zero(p);
        for (key, c) in x.terms().iter() {
            free.add_scaled(&steenrod_word(k, key.entries(), p), c);
        }
        self.normal_form(&EElement::from_terms(x.ring(), free))
    }

    /// The Bockstein on the ε-bookkeeping of odd primes; zero at p = 2, where the
    /// Bockstein is `steenrod(1, _)`.
    pub fn bockstein(&self, x: &EElement) -> Result<EElement, AlgebraError> {
        let p = self.p;
        let mut free = Lin::zero(p);
        if p.is_odd() {
            for (key, c) in x.terms().iter() {
                free.add_scaled(&bockstein_word(key.entries(), p), c);
            }
        }
        self.normal_form(&EElement::from_terms(x.ring(), free))
    }
}

pub(crate) fn monomial_counit(x: &EElement) -> Scalar {
    let p = x.p();
    let mut total = Scalar::ZERO;
    for (key, c) in x.terms().iter() {
        if key.entries().iter().all(|e| *e == Entry::new(0, 0)) {
            total = p.add(total, c);
        }
    }
    total
}

/// Cartan formula over the factors of a word.
fn steenrod_word(k: u32, word: &[Entry], p: Prime) -> Lin<Sequence> {
    let Some((&first, rest)) = word.split_first() else {
        return if k == 0 { Lin::basis(p, Sequence::empty()) } else { Lin::zero(p) };
    };
    let mut out = Lin::zero(p);
    for k1 in 0..=k.min(first.index) {
        let Some((e, c)) = generator_steenrod(k1, first, p) else { continue };
        let tail = steenrod_word(k - k1, rest, p);
        if tail.is_empty() {
            continue;
        }
        let head = Lin::term(p, Sequence(vec![e]), c);
        out.add_scaled(&free_mul(&head, &tail, p), Scalar::ONE);
    }
    out
}

/// `β` as a derivation with sign `(-1)^{degree of the prefix}`.
fn bockstein_word(word: &[Entry], p: Prime) -> Lin<Sequence> {
    let mut out = Lin::zero(p);
    let mut prefix_odd = false;
    for (pos, &e) in word.iter().enumerate() {
        if e.bockstein == 0 && e.index >= 1 {
            let mut w = word.to_vec();
            w[pos] = Entry::new(1, e.index);
            if let Some((key, sign)) = monomial::sort_word(&w, p) {
                out.add_term(key, p.mul(sign, p.sign(prefix_odd)));
            }
        }
        prefix_odd ^= entry_is_odd(e, p);
    }
    out
}
