//! Index sequences `((ε_1, i_1), ..., (ε_n, i_n))`, their statistics, the angle transform
//! and enumeration of allowable sequences.

use std::fmt;

use thiserror::Error;

use crate::arith::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("entry {position} ({bockstein}, {index}) is not legitimate at p = {p}")]
    Illegitimate { position: usize, bockstein: u8, index: u32, p: u32 },
    #[error("index overflow while transforming a sequence")]
    Overflow,
}

/// One generator `E^bockstein_index`. Ordered by index, then Bockstein bit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub index: u32,
    pub bockstein: u8,
}

impl Entry {
    pub fn new(bockstein: u8, index: u32) -> Self {
        Entry { index, bockstein }
    }

    pub fn is_legitimate(self, p: Prime) -> bool {
        match self.bockstein {
            0 => true,
            1 => p.is_odd() && self.index >= 1,
            _ => false,
        }
    }

    /// Homological degree of `E^ε_i`: `2(p-1)i - ε`, or `i` at p = 2.
    pub fn degree(self, p: Prime) -> u32 {
        if p.is_odd() {
            2 * (p.value() - 1) * self.index - self.bockstein as u32
        } else {
            self.index
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}_{}", self.bockstein, self.index)
    }
}

/// A word `E^{ε_1}_{i_1} ∘ ... ∘ E^{ε_n}_{i_n}`; the empty word is `[1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(pub Vec<Entry>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceStats {
    pub length: usize,
    pub degree: u32,
    pub bockstein_degree: u32,
    /// `None` encodes the minimum `+∞` of the empty sequence.
    pub min: Option<u32>,
    pub m: u32,
    pub b: u32,
}

/// Side conditions accepted by [`enumerate_allowable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    None,
    /// `min >= m`: the basis of the coinvariant ring.
    EhatBasis,
    /// `min >= deg_β / 2`: the basis of the quotient ring.
    EBasis,
    /// Generators of the polynomial model of the symmetric-group homology.
    SemiringGenerator,
}

impl Sequence {
    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn from_pairs(pairs: &[(u8, u32)]) -> Self {
        Sequence(pairs.iter().map(|&(e, i)| Entry::new(e, i)).collect())
    }

    pub fn generator(bockstein: u8, index: u32) -> Self {
        Sequence(vec![Entry::new(bockstein, index)])
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Entry> {
        self.0.first().copied()
    }

    /// Everything after the first entry.
    pub fn tail(&self) -> Sequence {
        Sequence(self.0.iter().skip(1).copied().collect())
    }

    pub fn concat(&self, other: &Sequence) -> Sequence {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Sequence(v)
    }

    pub fn validate(&self, p: Prime) -> Result<(), SequenceError> {
        match self.0.iter().position(|e| !e.is_legitimate(p)) {
            None => Ok(()),
            Some(position) => {
                let e = self.0[position];
                Err(SequenceError::Illegitimate { position, bockstein: e.bockstein, index: e.index, p: p.value() })
            }
        }
    }

    pub fn degree(&self, p: Prime) -> u32 {
        self.0.iter().map(|e| e.degree(p)).sum()
    }

    pub fn bockstein_degree(&self) -> u32 {
        self.0.iter().map(|e| e.bockstein as u32).sum()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.iter().map(|e| e.index).min()
    }

    pub fn m(&self) -> u32 {
        u32::from(self.0.iter().any(|e| e.bockstein == 1))
    }

    pub fn b(&self) -> u32 {
        self.0.first().map_or(0, |e| e.bockstein as u32)
    }

    pub fn stats(&self, p: Prime) -> Result<SequenceStats, SequenceError> {
        self.validate(p)?;
        Ok(SequenceStats {
            length: self.len(),
            degree: self.degree(p),
            bockstein_degree: self.bockstein_degree(),
            min: self.min(),
            m: self.m(),
            b: self.b(),
        })
    }

    pub fn is_ascending(&self) -> bool {
        self.0.windows(2).all(|w| w[0].index <= w[1].index)
    }

    /// `⟨I⟩`: the s-th entry (1-based) becomes `p^{s-1} i_s - ε_s (p^{s-1} - 1)/(p - 1)`.
    pub fn angle_transform(&self, p: Prime) -> Result<Sequence, SequenceError> {
        self.validate(p)?;
        let q = p.value() as u64;
        let mut out = Vec::with_capacity(self.len());
        let mut power = 1u64;
        let mut geometric = 0u64;
        for e in &self.0 {
            let j = power
                .checked_mul(e.index as u64)
                .and_then(|v| v.checked_sub(e.bockstein as u64 * geometric))
                .ok_or(SequenceError::Overflow)?;
            out.push(Entry::new(e.bockstein, u32::try_from(j).map_err(|_| SequenceError::Overflow)?));
            geometric += power;
            power = power.checked_mul(q).ok_or(SequenceError::Overflow)?;
        }
        Ok(Sequence(out))
    }

    /// The unique legitimate ascending `I` with `⟨I⟩ = self`, if there is one.
    pub fn inverse_angle(&self, p: Prime) -> Option<Sequence> {
        self.validate(p).ok()?;
        let q = p.value() as u64;
        let mut out = Vec::with_capacity(self.len());
        let mut power = 1u64;
        let mut geometric = 0u64;
        for e in &self.0 {
            let shifted = e.index as u64 + e.bockstein as u64 * geometric;
            if !shifted.is_multiple_of(power) {
                return None;
            }
            let i = u32::try_from(shifted / power).ok()?;
            out.push(Entry::new(e.bockstein, i));
            geometric += power;
            power = power.checked_mul(q)?;
        }
        let seq = Sequence(out);
        (seq.is_ascending() && seq.validate(p).is_ok()).then_some(seq)
    }

    pub fn is_allowable(&self, p: Prime) -> bool {
        self.inverse_angle(p).is_some()
    }

    pub fn satisfies(&self, p: Prime, condition: Condition) -> bool {
        let min = self.min();
        match condition {
            Condition::None => true,
            Condition::EhatBasis => min.is_none_or(|m| m >= self.m()),
            Condition::EBasis => min.is_none_or(|m| 2 * m >= self.bockstein_degree()),
            Condition::SemiringGenerator => self.meets_generator_condition(p, 0),
        }
    }

    /// `deg_β - b + deg z < 2 min` for odd p, `deg z < min` at p = 2.
    pub fn meets_generator_condition(&self, p: Prime, class_degree: u32) -> bool {
        let Some(min) = self.min() else { return true };
        if p.is_odd() {
            self.bockstein_degree() - self.b() + class_degree < 2 * min
        } else {
            class_degree < min
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "[1]");
        }
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " o ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// All allowable sequences of the given length and degree at most `max_degree` that
/// satisfy `condition`, ordered by degree and then lexicographically.
pub fn enumerate_allowable(p: Prime, length: usize, max_degree: u32, condition: Condition) -> Vec<Sequence> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(length);
    enumerate_rec(p, length, max_degree, 0, 1, 0, &mut stack, &mut |j| {
        if j.satisfies(p, condition) {
            out.push(j.clone());
        }
    });
    out.sort_by_key(|j| (j.degree(p), j.clone()));
    out
}

/// Walks ascending legitimate `I` entry by entry; `stack` holds the transformed prefix.
#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    p: Prime,
    length: usize,
    budget: u32,
    lowest: u32,
    power: u64,
    geometric: u64,
    stack: &mut Vec<Entry>,
    emit: &mut dyn FnMut(&Sequence),
) {
    if stack.len() == length {
        emit(&Sequence(stack.clone()));
        return;
    }
    let bits: &[u8] = if p.is_odd() { &[0, 1] } else { &[0] };
    let mut i = lowest;
    loop {
        let mut any = false;
        for &eps in bits {
            if (eps as u32) > i {
                continue;
            }
            let j = power * i as u64 - eps as u64 * geometric;
            let entry = Entry::new(eps, j as u32);
            let d = entry.degree(p);
            if d > budget {
                continue;
            }
            any = true;
            stack.push(entry);
            enumerate_rec(p, length, budget - d, i, power * p.value() as u64, geometric + power, stack, emit);
            stack.pop();
        }
        // Entry degrees grow with i, so once nothing fits nothing larger will.
        if !any && i > 0 {
            break;
        }
        i += 1;
    }
}
