//! Free graded-commutative polynomial algebras over F_p on an ordered generator set.

use std::fmt;

use crate::arith::{Prime, Scalar};
use crate::lin::Lin;

pub trait Generator: Ord + Clone + fmt::Debug {
    fn degree(&self, p: Prime) -> u32;

    fn is_odd(&self, p: Prime) -> bool {
        p.is_odd() && self.degree(p) % 2 == 1
    }
}

/// A monomial: generators in increasing order with positive exponents. Odd generators
/// (at odd p) appear with exponent 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono<G>(Vec<(G, u32)>);

pub type Poly<G> = Lin<Mono<G>>;
pub type Tensor<G> = Lin<(Mono<G>, Mono<G>)>;

impl<G: Generator> Mono<G> {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn generator(g: G) -> Self {
        Mono(vec![(g, 1)])
    }

    pub fn power(g: G, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(g, e)])
        }
    }

    pub fn factors(&self) -> &[(G, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree(&self, p: Prime) -> u32 {
        self.0.iter().map(|(g, e)| g.degree(p) * e).sum()
    }

    pub fn is_odd(&self, p: Prime) -> bool {
        self.degree(p) % 2 == 1
    }

    /// Splits off one copy of the first generator: `self = g · rest`.
    pub fn split_first(&self) -> Option<(G, Mono<G>)> {
        let (g, e) = self.0.first()?.clone();
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(0);
        } else {
            rest[0].1 -= 1;
        }
        Some((g, Mono(rest)))
    }

    /// Splits into the first `k` factors (with multiplicity) and the rest; the product of
    /// the two parts is `self` with no sign.
    pub fn split_factors(&self, k: u32) -> (Mono<G>, Mono<G>) {
        let (mut head, mut tail) = (Vec::new(), Vec::new());
        let mut left = k;
        for (g, e) in &self.0 {
            let take = left.min(*e);
            left -= take;
            if take > 0 {
                head.push((g.clone(), take));
            }
            if e - take > 0 {
                tail.push((g.clone(), e - take));
            }
        }
        (Mono(head), Mono(tail))
    }

    /// `self · other` with its Koszul sign, or `None` when an odd generator would repeat.
    pub fn multiply(&self, other: &Mono<G>, p: Prime) -> Option<(Mono<G>, Scalar)> {
        let mut out: Vec<(G, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        // Odd factors of `self` not yet passed; an odd factor of `other` moves left past them.
        let mut odd_left_remaining = self.0.iter().filter(|(g, _)| g.is_odd(p)).count();
        while i < self.0.len() || j < other.0.len() {
            let take_left = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0 <= b.0,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                let (g, e) = self.0[i].clone();
                if g.is_odd(p) {
                    odd_left_remaining -= 1;
                }
                if let Some(b) = other.0.get(j) {
                    if b.0 == g {
                        if g.is_odd(p) {
                            return None;
                        }
                        out.push((g, e + b.1));
                        i += 1;
                        j += 1;
                        continue;
                    }
                }
                out.push((g, e));
                i += 1;
            } else {
                let (g, e) = other.0[j].clone();
                if g.is_odd(p) {
                    swaps += odd_left_remaining;
                }
                out.push((g, e));
                j += 1;
            }
        }
        Some((Mono(out), p.sign(swaps % 2 == 1)))
    }
}

impl<G: fmt::Debug> fmt::Debug for Mono<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (g, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g:?}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn poly_mul<G: Generator>(x: &Poly<G>, y: &Poly<G>, p: Prime) -> Poly<G> {
    let mut out = Lin::zero(p);
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            if let Some((m, s)) = a.multiply(b, p) {
                out.add_term(m, p.mul(s, p.mul(ca, cb)));
            }
        }
    }
    out
}

pub fn poly_pow<G: Generator>(x: &Poly<G>, e: u32, p: Prime) -> Poly<G> {
    let mut acc = Lin::basis(p, Mono::one());
    for _ in 0..e {
        acc = poly_mul(&acc, x, p);
    }
    acc
}

/// `(a'⊗a'')(b'⊗b'') = (-1)^{|a''||b'|} a'b' ⊗ a''b''`.
pub fn tensor_mul<G: Generator>(x: &Tensor<G>, y: &Tensor<G>, p: Prime) -> Tensor<G> {
    let mut out = Lin::zero(p);
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let (Some((l, sl)), Some((r, sr))) = (a1.multiply(b1, p), a2.multiply(b2, p)) else {
                continue;
            };
            let koszul = p.sign(a2.is_odd(p) && b1.is_odd(p));
            out.add_term((l, r), p.mul(p.mul(ca, cb), p.mul(koszul, p.mul(sl, sr))));
        }
    }
    out
}

/// Tensor of two polynomials.
pub fn tensor_of<G: Generator>(x: &Poly<G>, y: &Poly<G>, p: Prime) -> Tensor<G> {
    let mut out = Lin::zero(p);
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_term((a.clone(), b.clone()), p.mul(ca, cb));
        }
    }
    out
}
