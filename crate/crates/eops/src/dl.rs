//! Dyer–Lashof operations expressed through E-operations, the conjugate Steenrod
//! action, and the bijection between admissible and allowable index sequences.
//!
//! The Q-side is a formal alphabet: `β^ε Q^n x` is stored as the pair `(op, x)` and
//! never rewritten. Every canonical form lives on the E-side.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, EElement};
use crate::arith::{Prime, Scalar};
use crate::lin::Linear;
use crate::semiring::{Semiring, SemiringElement, SemiringError};
use crate::sequence::{Entry, Sequence, SequenceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("{0} has no preimage under the angle transform")]
    NonIntegral(Sequence),
    #[error("({bockstein},{index}) at position {position} does not come from an admissible sequence")]
    NotAdmissible { position: usize, bockstein: u8, index: i64 },
    #[error("Bockstein operations are not defined at p = 2")]
    BocksteinAtTwo,
    #[error("module error: {0}")]
    Module(String),
}

/// A module with E-operations, dual Steenrod operations and a Bockstein, on which the
/// conversion formulas can be evaluated.
pub trait OperationModule {
    type Element: Linear;

    fn prime(&self) -> Prime;

    /// `E^ε_n ∘ x`. Never called with the illegitimate pair `(1, 0)`.
    fn e_op(&self, op: Entry, x: &Self::Element) -> Result<Self::Element, DlError>;

    fn steenrod(&self, k: u32, x: &Self::Element) -> Result<Self::Element, DlError>;

    fn bockstein(&self, x: &Self::Element) -> Result<Self::Element, DlError>;

    /// The largest degree of a term of `x`, or `None` for zero.
    fn top_degree(&self, x: &Self::Element) -> Option<u32>;
}

impl OperationModule for Algebra {
    type Element = EElement;

    fn prime(&self) -> Prime {
        self.p()
    }

    fn e_op(&self, op: Entry, x: &EElement) -> Result<EElement, DlError> {
        let g = self.generator(x.ring(), op.bockstein, op.index)?;
        Ok(self.circ(&g, x)?)
    }

    fn steenrod(&self, k: u32, x: &EElement) -> Result<EElement, DlError> {
        Ok(Algebra::steenrod(self, k, x)?)
    }

    fn bockstein(&self, x: &EElement) -> Result<EElement, DlError> {
        Ok(Algebra::bockstein(self, x)?)
    }

    fn top_degree(&self, x: &EElement) -> Option<u32> {
        x.terms().keys().map(|k| k.degree(self.p())).max()
    }
}

impl OperationModule for Semiring {
    type Element = SemiringElement;

    fn prime(&self) -> Prime {
        self.p()
    }

    fn e_op(&self, op: Entry, x: &SemiringElement) -> Result<SemiringElement, DlError> {
        let g = self.algebra().generator(crate::algebra::Ring::E, op.bockstein, op.index)?;
        let g = self.inject_e(&g)?;
        Ok(self.circ(&g, x)?)
    }

    fn steenrod(&self, k: u32, x: &SemiringElement) -> Result<SemiringElement, DlError> {
        Ok(Semiring::steenrod(self, k, x)?)
    }

    fn bockstein(&self, x: &SemiringElement) -> Result<SemiringElement, DlError> {
        Ok(Semiring::bockstein(self, x)?)
    }

    fn top_degree(&self, x: &SemiringElement) -> Option<u32> {
        x.keys().map(|m| m.degree(self.p())).max()
    }
}

/// `β^ε Q^n`, one letter of the formal Dyer–Lashof alphabet.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DlOp {
    pub bockstein: u8,
    pub index: u32,
}

impl DlOp {
    pub fn new(bockstein: u8, index: u32) -> Self {
        DlOp { bockstein, index }
    }

    /// Degree shift: `2n(p-1) - ε` for odd `p`, `n` at `p = 2`.
    pub fn degree(self, p: Prime) -> i64 {
        if p.is_odd() {
            2 * self.index as i64 * (p.value() as i64 - 1) - self.bockstein as i64
        } else {
            self.index as i64
        }
    }
}

impl fmt::Display for DlOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bockstein == 1 {
            write!(f, "bQ_{}", self.index)
        } else {
            write!(f, "Q_{}", self.index)
        }
    }
}

/// A formal sum `Σ op(x_op)`, stored as the map `op ↦ x_op` with zero values dropped.
/// Two formal sums are equal exactly when these maps agree.
#[derive(Clone, PartialEq)]
pub struct Formal<O: Ord, X> {
    terms: BTreeMap<O, X>,
}

impl<O: Ord + Copy, X: Linear> Formal<O, X> {
    pub fn zero() -> Self {
        Formal { terms: BTreeMap::new() }
    }

    pub fn single(op: O, x: X) -> Self {
        let mut out = Self::zero();
        out.add(op, &x, Scalar::ONE);
        out
    }

    pub fn add(&mut self, op: O, x: &X, c: Scalar) {
        if x.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(op).or_insert_with(|| x.zero_like());
        slot.add_scaled(x, c);
        if slot.is_zero() {
            self.terms.remove(&op);
        }
    }

    pub fn add_formal(&mut self, other: &Self, c: Scalar) {
        for (op, x) in &other.terms {
            self.add(*op, x, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&O, &X)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<O: Ord + fmt::Display, X: fmt::Debug> fmt::Debug for Formal<O, X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (op, x)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{op}({x:?})")?;
        }
        Ok(())
    }
}

pub type QSide<X> = Formal<DlOp, X>;
pub type ESide<X> = Formal<Entry, X>;

/// Largest `k` for which `P^k_*` can be nonzero on `x`.
fn steenrod_bound<M: OperationModule>(module: &M, x: &M::Element) -> u32 {
    let p = module.prime();
    let step = if p.is_odd() { 2 * (p.value() - 1) } else { 1 };
    module.top_degree(x).map_or(0, |d| d / step)
}

/// `[(χP^0)_* x, ..., (χP^k)_* x]` by `χP^k = -Σ_{j<k} P^{k-j} χP^j`.
pub fn chi_sequence<M: OperationModule>(module: &M, k: u32, x: &M::Element) -> Result<Vec<M::Element>, DlError> {
    let p = module.prime();
    let mut out: Vec<M::Element> = vec![x.clone()];
    for n in 1..=k {
        let mut acc = x.zero_like();
        for j in 0..n {
            acc.add_scaled(&module.steenrod(n - j, &out[j as usize])?, p.scalar(-1));
        }
        out.push(acc);
    }
    Ok(out)
}

pub fn chi_p<M: OperationModule>(module: &M, k: u32, x: &M::Element) -> Result<M::Element, DlError> {
    Ok(chi_sequence(module, k, x)?.pop().expect("chi_sequence is nonempty"))
}

/// `Σ_{i+j=k} P^i_* (χP^j)_* x`, which vanishes for `k >= 1`.
pub fn antipode_defect<M: OperationModule>(module: &M, k: u32, x: &M::Element) -> Result<M::Element, DlError> {
    let chi = chi_sequence(module, k, x)?;
    let mut acc = x.zero_like();
    for (j, c) in chi.iter().enumerate() {
        acc.add_scaled(&module.steenrod(k - j as u32, c)?, Scalar::ONE);
    }
    Ok(acc)
}

fn check_op(p: Prime, bockstein: u8) -> Result<(), DlError> {
    if bockstein == 1 && !p.is_odd() {
        return Err(DlError::BocksteinAtTwo);
    }
    Ok(())
}

/// Rewrites formal Dyer–Lashof letters as formal E-operations:
/// `Q^n x = Σ (-1)^{n+k} E^0_{n+k} ∘ χP^k x` and
/// `βQ^n x = Σ (-1)^{n+k} E^1_{n+k} ∘ χP^k x + Σ (-1)^{n+k} E^0_{n+k} ∘ βχP^k x`.
pub fn formal_q_to_e<M: OperationModule>(module: &M, q: &QSide<M::Element>) -> Result<ESide<M::Element>, DlError> {
    let p = module.prime();
    let mut out = Formal::zero();
    for (op, x) in q.iter() {
        check_op(p, op.bockstein)?;
        let n = op.index;
        let chi = chi_sequence(module, steenrod_bound(module, x), x)?;
        for (k, c) in chi.iter().enumerate() {
            let m = n + k as u32;
            let sign = p.sign_of(m as i64);
            if op.bockstein == 0 {
                out.add(Entry::new(0, m), c, sign);
            } else {
                if m >= 1 {
                    out.add(Entry::new(1, m), c, sign);
                }
                out.add(Entry::new(0, m), &module.bockstein(c)?, sign);
            }
        }
    }
    Ok(out)
}

/// Rewrites formal E-operations as formal Dyer–Lashof letters:
/// `E^0_n ∘ x = (-1)^n Σ Q^{n+k} P^k x` and
/// `E^1_n ∘ x = (-1)^n (Σ βQ^{n+k} P^k x - Σ Q^{n+k} P^k βx)`.
pub fn formal_e_to_q<M: OperationModule>(module: &M, e: &ESide<M::Element>) -> Result<QSide<M::Element>, DlError> {
    let p = module.prime();
    let mut out = Formal::zero();
    for (op, x) in e.iter() {
        check_op(p, op.bockstein)?;
        let n = op.index;
        let sign = p.sign_of(n as i64);
        for k in 0..=steenrod_bound(module, x) {
            let px = module.steenrod(k, x)?;
            out.add(DlOp::new(op.bockstein, n + k), &px, sign);
        }
        if op.bockstein == 1 {
            let bx = module.bockstein(x)?;
            for k in 0..=steenrod_bound(module, &bx) {
                let pbx = module.steenrod(k, &bx)?;
                out.add(DlOp::new(0, n + k), &pbx, p.neg(sign));
            }
        }
    }
    Ok(out)
}

/// Applies each formal E-operation in the module and sums; `zero` fixes the ambient module.
pub fn evaluate_e<M: OperationModule>(
    module: &M,
    e: &ESide<M::Element>,
    zero: &M::Element,
) -> Result<M::Element, DlError> {
    let mut acc = zero.zero_like();
    for (op, x) in e.iter() {
        if op.bockstein == 1 && op.index == 0 {
            continue;
        }
        acc.add_scaled(&module.e_op(*op, x)?, Scalar::ONE);
    }
    Ok(acc)
}

/// `β^ε Q^n x` as an element of the module.
pub fn q_from_e<M: OperationModule>(module: &M, op: DlOp, x: &M::Element) -> Result<M::Element, DlError> {
    check_op(module.prime(), op.bockstein)?;
    let formal = formal_q_to_e(module, &Formal::single(op, x.clone()))?;
    evaluate_e(module, &formal, x)
}

/// `E^ε_n ∘ x` computed through Dyer–Lashof operations supplied by `oracle`.
pub fn e_from_q<M, F>(module: &M, op: Entry, x: &M::Element, mut oracle: F) -> Result<M::Element, DlError>
where
    M: OperationModule,
    F: FnMut(DlOp, &M::Element) -> Result<M::Element, DlError>,
{
    let formal = formal_e_to_q(module, &Formal::single(op, x.clone()))?;
    let mut acc = x.zero_like();
    for (q, y) in formal.iter() {
        acc.add_scaled(&oracle(*q, y)?, Scalar::ONE);
    }
    Ok(acc)
}

/// Sends an admissible sequence `((ε_1,i_1),...,(ε_n,i_n))`, read as
/// `β^{ε_1}Q^{i_1} ⋯ β^{ε_n}Q^{i_n}`, to the allowable sequence `⟨K⟩` with
/// `k_s = i_s - (p-1)Σ_{ℓ>s} i_ℓ + Σ_{ℓ>s} ε_ℓ`.
pub fn admissible_to_allowable(p: Prime, pairs: &[(u8, u32)]) -> Result<Sequence, DlError> {
    let q = p.value() as i64;
    let n = pairs.len();
    let mut ks = Vec::with_capacity(n);
    for s in 0..n {
        let later = &pairs[s + 1..];
        let i_sum: i64 = later.iter().map(|&(_, i)| i as i64).sum();
        let e_sum: i64 = later.iter().map(|&(e, _)| e as i64).sum();
        let (eps, i) = pairs[s];
        let k = i as i64 - (q - 1) * i_sum + e_sum;
        let entry = u32::try_from(k).ok().map(|k| Entry::new(eps, k));
        match entry {
            Some(e) if e.is_legitimate(p) && ks.last().is_none_or(|prev: &Entry| prev.index <= e.index) => ks.push(e),
            _ => return Err(DlError::NotAdmissible { position: s, bockstein: eps, index: k }),
        }
    }
    Ok(Sequence(ks).angle_transform(p)?)
}

/// Inverse of [`admissible_to_allowable`]:
/// `i_s = k_s + Σ_{ℓ>s} (p^{ℓ-s} - p^{ℓ-s-1}) k_ℓ - Σ_{ℓ>s} p^{ℓ-s-1} ε_ℓ` where `⟨K⟩ = J`.
pub fn allowable_to_admissible(p: Prime, j: &Sequence) -> Result<Vec<(u8, u32)>, DlError> {
    let ks = j.inverse_angle(p).ok_or_else(|| DlError::NonIntegral(j.clone()))?;
    let q = p.value() as i64;
    let ks = ks.entries();
    let mut out = Vec::with_capacity(ks.len());
    for s in 0..ks.len() {
        let mut i = ks[s].index as i64;
        let mut power = 1i64;
        for later in &ks[s + 1..] {
            i += (power * q - power) * later.index as i64 - power * later.bockstein as i64;
            power = power.checked_mul(q).ok_or(SequenceError::Overflow)?;
        }
        let i = u32::try_from(i).map_err(|_| SequenceError::Overflow)?;
        out.push((ks[s].bockstein, i));
    }
    Ok(out)
}

/// Total degree shift of an admissible sequence.
pub fn admissible_degree(p: Prime, pairs: &[(u8, u32)]) -> i64 {
    pairs.iter().map(|&(e, i)| DlOp::new(e, i).degree(p)).sum()
}

/// All admissible sequences of the given length whose degree shift is at most `max_degree`:
/// `i_{s} <= p·i_{s+1} - ε_{s+1}`, every letter legitimate. Enumerated independently of
/// the allowable side, for cross-counting.
pub fn enumerate_admissible(p: Prime, length: usize, max_degree: u32) -> Vec<Vec<(u8, u32)>> {
    let mut out = Vec::new();
    let eps_range: &[u8] = if p.is_odd() { &[0, 1] } else { &[0] };
    let mut stack: Vec<(u8, u32)> = Vec::new();
    fn rec(
        p: Prime,
        length: usize,
        budget: i64,
        eps_range: &[u8],
        stack: &mut Vec<(u8, u32)>,
        out: &mut Vec<Vec<(u8, u32)>>,
    ) {
        if stack.len() == length {
            let seq: Vec<(u8, u32)> = stack.iter().rev().copied().collect();
            let ok = seq.windows(2).all(|w| (w[0].1 as i64) <= p.value() as i64 * w[1].1 as i64 - w[1].0 as i64);
            if ok {
                out.push(seq);
            }
            return;
        }
        // Built innermost-first, so every letter's index is bounded by the remaining budget.
        for &e in eps_range {
            let mut i = e as u32;
            loop {
                let d = DlOp::new(e, i).degree(p);
                if d > budget {
                    break;
                }
                let admissible =
                    stack.last().is_none_or(|&(pe, pi)| i as i64 <= p.value() as i64 * pi as i64 - pe as i64);
                if !admissible {
                    break;
                }
                if e == 0 || i >= 1 {
                    stack.push((e, i));
                    rec(p, length, budget - d, eps_range, stack, out);
                    stack.pop();
                }
                i += 1;
            }
        }
    }
    rec(p, length, max_degree as i64, eps_range, &mut stack, &mut out);
    out.sort();
    out
}

/// The formal `Q`-side element `Σ c·op(x)` evaluated by `q_from_e`.
pub fn evaluate_q<M: OperationModule>(
    module: &M,
    q: &QSide<M::Element>,
    zero: &M::Element,
) -> Result<M::Element, DlError> {
    let mut acc = zero.zero_like();
    for (op, x) in q.iter() {
        acc.add_scaled(&q_from_e(module, *op, x)?, Scalar::ONE);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;
    use crate::sequence::{enumerate_allowable, Condition};

    fn alg(p: u32) -> Algebra {
        Algebra::new(Prime::new(p).unwrap())
    }

    #[test]
    fn chi_first_steps() {
        let a = alg(3);
        let p = a.p();
        let x = EElement::monomial(p, Ring::E, Sequence::from_pairs(&[(0, 2), (0, 6)]));
        assert_eq!(chi_p(&a, 0, &x).unwrap(), x);
        assert_eq!(chi_p(&a, 1, &x).unwrap(), a.steenrod(1, &x).unwrap().scaled(p.scalar(-1)));
        let p1p1 = a.steenrod(1, &a.steenrod(1, &x).unwrap()).unwrap();
        let expect = a.steenrod(2, &x).unwrap().scaled(p.scalar(-1)).plus(&p1p1);
        assert_eq!(chi_p(&a, 2, &x).unwrap(), expect);
    }

    #[test]
    fn degree_zero_collapse() {
        for pv in [2, 3] {
            let a = alg(pv);
            let p = a.p();
            let unit = a.unit(Ring::E);
            for n in 0..6 {
                let q = q_from_e(&a, DlOp::new(0, n), &unit).unwrap();
                let e = a.generator(Ring::E, 0, n).unwrap().scaled(p.sign_of(n as i64));
                assert_eq!(q, e);
                if p.is_odd() && n >= 1 {
                    let bq = q_from_e(&a, DlOp::new(1, n), &unit).unwrap();
                    let e1 = a.generator(Ring::E, 1, n).unwrap().scaled(p.sign_of(n as i64));
                    assert_eq!(bq, e1);
                }
            }
        }
    }

    #[test]
    fn bockstein_rejected_at_two() {
        let a = alg(2);
        let unit = a.unit(Ring::E);
        assert_eq!(q_from_e(&a, DlOp::new(1, 3), &unit), Err(DlError::BocksteinAtTwo));
    }

    #[test]
    fn q_output_degree() {
        let a = alg(3);
        let p = a.p();
        for x in enumerate_allowable(p, 1, 12, Condition::EBasis) {
            let xe = EElement::monomial(p, Ring::E, x.clone());
            for n in 0..4 {
                let q = q_from_e(&a, DlOp::new(0, n), &xe).unwrap();
                let want = x.degree(p) as i64 + DlOp::new(0, n).degree(p);
                assert!(q.terms().keys().all(|k| k.degree(p) as i64 == want));
            }
        }
    }

    #[test]
    fn length_one_bijection_is_identity() {
        let p = Prime::new(3).unwrap();
        for (e, i) in [(0u8, 0u32), (0, 4), (1, 1), (1, 7)] {
            let j = admissible_to_allowable(p, &[(e, i)]).unwrap();
            assert_eq!(j, Sequence::from_pairs(&[(e, i)]));
            assert_eq!(allowable_to_admissible(p, &j).unwrap(), vec![(e, i)]);
        }
    }

    #[test]
    fn bijection_round_trips() {
        for pv in [2, 3] {
            let p = Prime::new(pv).unwrap();
            let eps: &[u8] = if pv == 2 { &[0] } else { &[0, 1] };
            for len in 1..=3usize {
                let mut word = vec![(0u8, 0u32); len];
                let total = (eps.len() * 11).pow(len as u32);
                for code in 0..total {
                    let mut c = code;
                    for slot in word.iter_mut() {
                        let i = (c % 11) as u32;
                        c /= 11;
                        let e = eps[c % eps.len()];
                        c /= eps.len();
                        *slot = (e, i);
                    }
                    if let Ok(j) = admissible_to_allowable(p, &word) {
                        assert!(j.is_allowable(p));
                        assert_eq!(j.degree(p) as i64, admissible_degree(p, &word));
                        assert_eq!(allowable_to_admissible(p, &j).unwrap(), word);
                    }
                }
            }
        }
    }

    #[test]
    fn non_image_is_non_integral() {
        let p = Prime::new(3).unwrap();
        let j = Sequence::from_pairs(&[(0, 1), (0, 4)]);
        assert!(matches!(allowable_to_admissible(p, &j), Err(DlError::NonIntegral(_))));
    }

    #[test]
    fn admissible_enumeration_matches_allowable_images() {
        for pv in [2, 3] {
            let p = Prime::new(pv).unwrap();
            for len in 1..=3 {
                let mut images: Vec<Sequence> = enumerate_admissible(p, len, 30)
                    .iter()
                    .filter_map(|w| admissible_to_allowable(p, w).ok())
                    .collect();
                images.sort();
                let mut direct = enumerate_allowable(p, len, 30, Condition::None);
                direct.sort();
                assert_eq!(images, direct, "p={pv} len={len}");
            }
        }
    }
}
