use std::fmt;

use crate::arith::{Prime, Scalar};
use crate::lin::{Lin, Linear};
use crate::sequence::{Condition, Entry, Sequence, SequenceError};

use super::monomial;
use super::AlgebraError;

/// Which of the two rings an element lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// The coinvariant ring, with basis `min(J) >= m(J)`.
    Ehat,
    /// Its quotient acting on all E∞-spaces, with basis `min(J) >= deg_β(J)/2`.
    E,
}

impl Ring {
    pub fn condition(self) -> Condition {
        match self {
            Ring::Ehat => Condition::EhatBasis,
            Ring::E => Condition::EBasis,
        }
    }
}

/// A linear combination of sorted ∘-monomials. Elements built by [`super::Algebra`]
/// are in normal form; the constructors here only sort words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EElement {
    ring: Ring,
    terms: Lin<Sequence>,
}

impl EElement {
    pub fn zero(p: Prime, ring: Ring) -> Self {
        EElement { ring, terms: Lin::zero(p) }
    }

    pub fn unit(p: Prime, ring: Ring) -> Self {
        Self::monomial(p, ring, Sequence::empty())
    }

    /// A sorted monomial key taken as is.
    pub fn monomial(p: Prime, ring: Ring, key: Sequence) -> Self {
        EElement { ring, terms: Lin::basis(p, key) }
    }

    pub fn generator(p: Prime, ring: Ring, bockstein: u8, index: u32) -> Result<Self, AlgebraError> {
        Self::word(p, ring, &Sequence::generator(bockstein, index))
    }

    /// The ∘-word `E^{ε_1}_{i_1} ∘ ... ∘ E^{ε_n}_{i_n}` as a signed monomial.
    pub fn word(p: Prime, ring: Ring, word: &Sequence) -> Result<Self, AlgebraError> {
        word.validate(p)?;
        let mut out = Self::zero(p, ring);
        if let Some((key, sign)) = monomial::sort_word(word.entries(), p) {
            out.add_term(key, sign);
        }
        Ok(out)
    }

    pub fn from_terms(ring: Ring, terms: Lin<Sequence>) -> Self {
        EElement { ring, terms }
    }

    pub fn p(&self) -> Prime {
        self.terms.p()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn with_ring(mut self, ring: Ring) -> Self {
        self.ring = ring;
        self
    }

    pub fn terms(&self) -> &Lin<Sequence> {
        &self.terms
    }

    pub fn into_terms(self) -> Lin<Sequence> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Sequence, c: Scalar) {
        self.terms.add_term(key, c);
    }

    pub fn add_scaled(&mut self, other: &EElement, c: Scalar) {
        self.terms.add_scaled(&other.terms, c);
    }

    pub fn plus(&self, other: &EElement) -> EElement {
        EElement { ring: self.ring, terms: self.terms.plus(&other.terms) }
    }

    pub fn minus(&self, other: &EElement) -> EElement {
        EElement { ring: self.ring, terms: self.terms.minus(&other.terms) }
    }

    pub fn scaled(&self, c: Scalar) -> EElement {
        EElement { ring: self.ring, terms: self.terms.scaled(c) }
    }

    pub(crate) fn retain<F: FnMut(&Sequence) -> bool>(&mut self, keep: F) {
        self.terms.retain(keep);
    }

    /// Product in the free graded-commutative algebra, before any relation is applied.
    pub fn free_product(&self, other: &EElement) -> EElement {
        let p = self.p();
        let mut out = EElement::zero(p, self.ring);
        for (a, ca) in self.terms.iter() {
            for (b, cb) in other.terms.iter() {
                if let Some((key, sign)) = monomial::multiply(a, b, p) {
                    out.add_term(key, p.mul(sign, p.mul(ca, cb)));
                }
            }
        }
        out
    }

    /// The single (length, degree, Bockstein degree) shared by all terms, if homogeneous.
    pub fn grading(&self) -> Option<(usize, u32, u32)> {
        let p = self.p();
        let mut it = self.terms.keys().map(|k| (k.len(), k.degree(p), k.bockstein_degree()));
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn validate(&self) -> Result<(), SequenceError> {
        self.terms.keys().try_for_each(|k| k.validate(self.p()))
    }
}

impl Linear for EElement {
    fn prime(&self) -> Prime {
        self.p()
    }

    fn zero_like(&self) -> Self {
        EElement::zero(self.p(), self.ring)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, c: Scalar) {
        EElement::add_scaled(self, other, c)
    }
}

impl fmt::Display for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lin(f, &self.terms, |f, k| write!(f, "{k}"))
    }
}

impl fmt::Debug for EElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.ring, self)
    }
}

pub(crate) fn write_lin<K: Ord>(
    f: &mut fmt::Formatter<'_>,
    terms: &Lin<K>,
    mut key: impl FnMut(&mut fmt::Formatter<'_>, &K) -> fmt::Result,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (n, (k, c)) in terms.iter().enumerate() {
        if n > 0 {
            write!(f, " + ")?;
        }
        if c != Scalar::ONE {
            write!(f, "{c}*")?;
        }
        key(f, k)?;
    }
    Ok(())
}

/// An element of the tensor square, keyed by pairs of sorted monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct ETensor {
    ring: Ring,
    terms: Lin<(Sequence, Sequence)>,
}

impl ETensor {
    pub fn zero(p: Prime, ring: Ring) -> Self {
        ETensor { ring, terms: Lin::zero(p) }
    }

    pub fn from_terms(ring: Ring, terms: Lin<(Sequence, Sequence)>) -> Self {
        ETensor { ring, terms }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &Lin<(Sequence, Sequence)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for ETensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lin(f, &self.terms, |f, (a, b)| write!(f, "({a})(x)({b})"))
    }
}

impl fmt::Debug for ETensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Degree parity of a single generator.
pub(crate) fn entry_is_odd(e: Entry, p: Prime) -> bool {
    e.degree(p) % 2 == 1
}
