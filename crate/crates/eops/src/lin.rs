//! Sparse linear combinations over F_p keyed by an ordered basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Prime, Scalar};

/// A module over F_p in which truncated series can take coefficients.
pub trait Linear: Clone + PartialEq {
    fn prime(&self) -> Prime;
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: Scalar);

    fn scaled(&self, c: Scalar) -> Self {
        let mut out = self.zero_like();
        out.add_scaled(self, c);
        out
    }
}

/// A finite F_p-linear combination of keys. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lin<K: Ord> {
    p: Prime,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Lin<K> {
    pub fn zero(p: Prime) -> Self {
        Lin { p, terms: BTreeMap::new() }
    }

    pub fn term(p: Prime, key: K, c: Scalar) -> Self {
        let mut out = Lin::zero(p);
        out.add_term(key, c);
        out
    }

    pub fn basis(p: Prime, key: K) -> Self {
        Lin::term(p, key, Scalar::ONE)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn add_term(&mut self, key: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let p = self.p;
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = p.add(*o.get(), c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, Scalar)> {
        self.terms.into_iter()
    }

    pub fn scale_in_place(&mut self, c: Scalar) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        let p = self.p;
        for v in self.terms.values_mut() {
            *v = p.mul(*v, c);
        }
    }

    pub fn negated(&self) -> Self
    where
        K: Clone,
    {
        self.scaled(self.p.neg(Scalar::ONE))
    }

    /// Applies a linear map defined on keys.
    pub fn map_linear<L: Ord + Clone, F>(&self, mut f: F) -> Lin<L>
    where
        F: FnMut(&K) -> Lin<L>,
    {
        let mut out = Lin::zero(self.p);
        for (k, c) in self.iter() {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Fallible version of [`Lin::map_linear`].
    pub fn try_map_linear<L: Ord + Clone, E, F>(&self, mut f: F) -> Result<Lin<L>, E>
    where
        F: FnMut(&K) -> Result<Lin<L>, E>,
    {
        let mut out = Lin::zero(self.p);
        for (k, c) in self.iter() {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: Scalar)
    where
        K: Clone,
    {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), self.p.mul(v, c));
        }
    }

    pub fn add_owned(&mut self, other: Lin<K>) {
        for (k, v) in other.terms {
            self.add_term(k, v);
        }
    }

    /// Keeps only the terms whose keys satisfy the predicate.
    pub fn retain<F: FnMut(&K) -> bool>(&mut self, mut keep: F) {
        self.terms.retain(|k, _| keep(k));
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn scaled(&self, c: Scalar) -> Self {
        let mut out = self.clone();
        out.scale_in_place(c);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Scalar::ONE);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, self.p.neg(Scalar::ONE));
        out
    }
}

impl<K: Ord + Clone> Linear for Lin<K> {
    fn prime(&self) -> Prime {
        self.p
    }

    fn zero_like(&self) -> Self {
        Lin::zero(self.p)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, c: Scalar) {
        Lin::add_scaled(self, other, c)
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{k:?}")?;
        }
        Ok(())
    }
}

/// A single field element, usable as a series coefficient.
pub type FieldElt = Lin<()>;

pub fn field(p: Prime, c: Scalar) -> FieldElt {
    Lin::term(p, (), c)
}
