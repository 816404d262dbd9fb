//! Scalar arithmetic in the prime field, binomial coefficients and Koszul signs.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a supported prime (expected one of 2, 3, 5, 7, 11, 13)")]
    UnsupportedPrime(u32),
}

/// A supported prime: 2 or an odd prime at most 13.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

/// A residue in `0..p`. The prime is carried by the surrounding context.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn value(self) -> u32 {
        self.0
    }

    /// Wraps a residue already known to lie in `0..p`.
    pub fn from_u32(v: u32) -> Self {
        Scalar(v)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);

    pub fn new(p: u32) -> Result<Self, ArithError> {
        match p {
            2 | 3 | 5 | 7 | 11 | 13 => Ok(Prime(p)),
            _ => Err(ArithError::UnsupportedPrime(p)),
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Reduces an arbitrary integer into the field.
    pub fn scalar(self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.0 as i64) as u32)
    }

    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar((a.0 + b.0) % self.0)
    }

    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar((a.0 + self.0 - b.0) % self.0)
    }

    pub fn neg(self, a: Scalar) -> Scalar {
        Scalar((self.0 - a.0) % self.0)
    }

    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(a.0 * b.0 % self.0)
    }

    pub fn pow(self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: Scalar) -> Option<Scalar> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, (self.0 - 2) as u64))
        }
    }

    /// `(-1)^odd` as a field element.
    pub fn sign(self, odd: bool) -> Scalar {
        if odd {
            self.neg(Scalar::ONE)
        } else {
            Scalar::ONE
        }
    }

    /// `(-1)^n` as a field element.
    pub fn sign_of(self, n: i64) -> Scalar {
        self.sign(n.rem_euclid(2) == 1)
    }

    pub fn binom(self, n: i64, k: i64) -> Scalar {
        binom_mod_p(n, k, self)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `n choose k` mod `p` by Lucas' theorem; zero unless `0 <= k <= n`.
pub fn binom_mod_p(n: i64, k: i64, p: Prime) -> Scalar {
    if k < 0 || n < 0 || k > n {
        return Scalar::ZERO;
    }
    let q = p.0 as i64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return Scalar::ZERO;
        }
        acc = acc * small_binom(nd as u64, kd as u64) % p.0 as u64;
        n /= q;
        k /= q;
    }
    Scalar(acc as u32)
}

fn small_binom(n: u64, k: u64) -> u64 {
    // n < 13, so the exact value fits comfortably.
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The sign of moving a block of classes with degrees `left` past a block with
/// degrees `right`: `(-1)^(sum of products of odd degrees)`.
pub fn koszul_sign(left: &[u32], right: &[u32], p: Prime) -> Scalar {
    let odd_left = left.iter().filter(|d| *d % 2 == 1).count();
    let odd_right = right.iter().filter(|d| *d % 2 == 1).count();
    p.sign(odd_left * odd_right % 2 == 1)
}

/// The Koszul sign of reordering classes with the given degrees so that the
/// element at position `order[i]` ends up in position `i`.
pub fn permutation_sign(degrees: &[u32], order: &[usize], p: Prime) -> Scalar {
    let mut odd_inversions = 0usize;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[order[a]] % 2 == 1 && degrees[order[b]] % 2 == 1 {
                odd_inversions += 1;
            }
        }
    }
    p.sign(odd_inversions % 2 == 1)
}
