//! The defining power-series identities and their coefficient extraction.

use std::fmt;

use crate::arith::{Prime, Scalar};
use crate::lin::Lin;
use crate::sequence::{Entry, Sequence};
use crate::series::{Substitution, TruncatedSeries};

use super::monomial;
use super::{Algebra, EElement, Ring};

/// One defining identity. At p = 2 there is a single one; at odd primes there is one
/// per pair of Bockstein bits `(left, right)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `E0(s)∘E0(t) = E0(s)∘E0(s+t)`.
    Even,
    /// `Ẽa(s)∘Ẽb(t) = Ẽa(s)∘Ẽb(s+t)`, plus `Ẽ0(s)∘Ẽ1(s+t)` on the right when `(a, b) = (1, 0)`.
    Tilde { left: u8, right: u8 },
}

impl Identity {
    pub fn all(p: Prime) -> Vec<Identity> {
        if p.is_odd() {
            vec![
                Identity::Tilde { left: 0, right: 0 },
                Identity::Tilde { left: 0, right: 1 },
                Identity::Tilde { left: 1, right: 0 },
                Identity::Tilde { left: 1, right: 1 },
            ]
        } else {
            vec![Identity::Even]
        }
    }

    pub fn bockstein_degree(self) -> u32 {
        match self {
            Identity::Even => 0,
            Identity::Tilde { left, right } => (left + right) as u32,
        }
    }

    /// Both sides expanded through total exponent `truncation`, with monomial coefficients.
    pub fn sides(self, p: Prime, truncation: i32) -> (Series, Series) {
        let zero = Lin::zero(p);
        let mul = |a: &Series, b: &Series| a.mul(b, zero.clone(), |x, y| free_mul(x, y, p));
        let at_t = |f: &Series| f.substitute(Substitution::Affine { c: 0, d: 1 }).expect("power series");
        let at_sum = |f: &Series| f.substitute(Substitution::Affine { c: 1, d: 1 }).expect("power series");
        match self {
            Identity::Even => {
                let e = tilde_series(p, 0, truncation);
                (mul(&e, &at_t(&e)), mul(&e, &at_sum(&e)))
            }
            Identity::Tilde { left, right } => {
                let a = tilde_series(p, left, truncation);
                let b = tilde_series(p, right, truncation);
                let lhs = mul(&a, &at_t(&b));
                let mut rhs = mul(&a, &at_sum(&b));
                if (left, right) == (1, 0) {
                    let e0 = tilde_series(p, 0, truncation);
                    let e1 = tilde_series(p, 1, truncation);
                    rhs.add_scaled(&mul(&e0, &at_sum(&e1)), Scalar::ONE);
                }
                (lhs, rhs)
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Even => write!(f, "E0(s)E0(t) = E0(s)E0(s+t)"),
            Identity::Tilde { left: 1, right: 0 } => {
                write!(f, "~E1(s)~E0(t) = ~E1(s)~E0(s+t) + ~E0(s)~E1(s+t)")
            }
            Identity::Tilde { left, right } => {
                write!(f, "~E{left}(s)~E{right}(t) = ~E{left}(s)~E{right}(s+t)")
            }
        }
    }
}

pub(crate) type Series = TruncatedSeries<Lin<Sequence>>;

pub(crate) fn free_mul(a: &Lin<Sequence>, b: &Lin<Sequence>, p: Prime) -> Lin<Sequence> {
    let mut out = Lin::zero(p);
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            if let Some((key, sign)) = monomial::multiply(x, y, p) {
                out.add_term(key, p.mul(sign, p.mul(cx, cy)));
            }
        }
    }
    out
}

/// `Ẽ^ε(s)` (or `E^0(s)` at p = 2) known through total exponent at least `truncation`.
pub(crate) fn tilde_series(p: Prime, bockstein: u8, truncation: i32) -> Series {
    let q = p.value() as i32;
    if !p.is_odd() {
        return TruncatedSeries::in_s(
            Lin::zero(p),
            truncation,
            (0..=truncation.max(0)).map(|k| (k, Lin::basis(p, Sequence::generator(0, k as u32)))),
        );
    }
    let eps = bockstein as i32;
    let top = (truncation + eps + q - 2).div_euclid(q - 1).max(0);
    let plain = TruncatedSeries::in_s(
        Lin::zero(p),
        top,
        (eps..=top).map(|k| (k, Lin::basis(p, Sequence(vec![Entry::new(bockstein, k as u32)])))),
    );
    plain.substitute(Substitution::Power { k: q - 1 }).expect("power substitution").shift(-eps, 0)
}

/// Which identities the rewriting engine uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    identities: Vec<Identity>,
}

impl RelationSet {
    pub fn all(p: Prime) -> Self {
        RelationSet { identities: Identity::all(p) }
    }

    /// The full set minus one identity; used to show that identity is independent.
    pub fn without(p: Prime, omitted: Identity) -> Self {
        RelationSet { identities: Identity::all(p).into_iter().filter(|i| *i != omitted).collect() }
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    /// Coefficient instances landing in the length-2 block of the given degree.
    pub(crate) fn pair_rows(&self, p: Prime, degree: u32, bockstein: u32) -> Vec<Lin<Sequence>> {
        let total = if p.is_odd() {
            if degree < bockstein || (degree - bockstein) % 2 == 1 {
                return Vec::new();
            }
            ((degree - bockstein) / 2) as i32
        } else {
            degree as i32
        };
        let mut rows = Vec::new();
        for identity in self.identities.iter().filter(|i| i.bockstein_degree() == bockstein) {
            let (lhs, rhs) = identity.sides(p, total);
            for i in 0..=total {
                let row = lhs
                    .coefficient(i, total - i)
                    .expect("within truncation")
                    .minus(&rhs.coefficient(i, total - i).expect("within truncation"));
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMismatch {
    pub identity: Identity,
    pub s_exponent: i32,
    pub t_exponent: i32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub p: Prime,
    pub truncation: i32,
    pub coefficients_checked: usize,
    pub mismatches: Vec<RelationMismatch>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl Algebra {
    /// Expands both sides of every defining identity for this prime through total
    /// exponent `truncation`, normalizes each coefficient and compares.
    pub fn verify_defining_relations(&self, truncation: i32) -> RelationReport {
        let p = self.p;
        let mut report = RelationReport { p, truncation, coefficients_checked: 0, mismatches: Vec::new() };
        for identity in Identity::all(p) {
            let (lhs, rhs) = identity.sides(p, truncation);
            for total in 0..=truncation {
                for i in 0..=total {
                    let j = total - i;
                    let l = EElement::from_terms(Ring::Ehat, lhs.coefficient(i, j).expect("within truncation"));
                    let r = EElement::from_terms(Ring::Ehat, rhs.coefficient(i, j).expect("within truncation"));
                    report.coefficients_checked += 1;
                    let detail = match (self.normal_form(&l), self.normal_form(&r)) {
                        (Ok(a), Ok(b)) if a == b => continue,
                        (Ok(a), Ok(b)) => format!("{a} != {b}"),
                        (Err(e), _) | (_, Err(e)) => e.to_string(),
                    };
                    report.mismatches.push(RelationMismatch { identity, s_exponent: i, t_exponent: j, detail });
                }
            }
        }
        report
    }
}
