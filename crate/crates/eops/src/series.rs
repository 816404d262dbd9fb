//! Bivariate truncated Laurent series in `s` and `t` with coefficients in an F_p-module.
//!
//! A series is known exactly in every bidegree `(i, j)` with `i + j <= truncation`;
//! stored terms never exceed that bound and absent terms below it are zero.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{Prime, Scalar};
use crate::lin::Linear;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("exponent ({0}, {1}) is negative where a power series is required")]
    LaurentUnderflow(i32, i32),
    #[error("coefficient ({0}, {1}) lies beyond truncation degree {2}")]
    BeyondTruncation(i32, i32, i32),
}

/// Substitutions supported by [`TruncatedSeries::substitute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// `s -> c*s + d*t`, with `t` left alone.
    Affine { c: i64, d: i64 },
    /// `s -> s^k` and `t -> t^k`.
    Power { k: i32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C: Linear> {
    zero: C,
    truncation: i32,
    terms: BTreeMap<(i32, i32), C>,
}

impl<C: Linear> TruncatedSeries<C> {
    pub fn zero(zero: C, truncation: i32) -> Self {
        TruncatedSeries { zero: zero.zero_like(), truncation, terms: BTreeMap::new() }
    }

    /// A series in `s` alone built from `(exponent, coefficient)` pairs; pairs beyond the
    /// truncation are dropped.
    pub fn in_s<I>(zero: C, truncation: i32, coefficients: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
    {
        let mut out = Self::zero(zero, truncation);
        for (e, c) in coefficients {
            out.add_term(e, 0, &c, Scalar::ONE);
        }
        out
    }

    pub fn prime(&self) -> Prime {
        self.zero.prime()
    }

    pub fn truncation(&self) -> i32 {
        self.truncation
    }

    pub fn zero_coefficient(&self) -> &C {
        &self.zero
    }

    /// Smallest total degree that may carry a nonzero coefficient.
    pub fn low_degree(&self) -> i32 {
        self.terms.keys().map(|(i, j)| i + j).min().unwrap_or(self.truncation + 1)
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: &C, scale: Scalar) {
        if i + j > self.truncation || scale.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(|| c.zero_like());
        slot.add_scaled(c, scale);
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coefficient(&self, i: i32, j: i32) -> Result<C, SeriesError> {
        if i + j > self.truncation {
            return Err(SeriesError::BeyondTruncation(i, j, self.truncation));
        }
        Ok(self.terms.get(&(i, j)).cloned().unwrap_or_else(|| self.zero.zero_like()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &C)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `s^ds t^dt`.
    pub fn shift(&self, ds: i32, dt: i32) -> Self {
        TruncatedSeries {
            zero: self.zero.clone(),
            truncation: self.truncation + ds + dt,
            terms: self.terms.iter().map(|(&(i, j), c)| ((i + ds, j + dt), c.clone())).collect(),
        }
    }

    pub fn require_power_series(&self) -> Result<(), SeriesError> {
        match self.terms.keys().find(|(i, j)| *i < 0 || *j < 0) {
            Some(&(i, j)) => Err(SeriesError::LaurentUnderflow(i, j)),
            None => Ok(()),
        }
    }

    pub fn substitute(&self, rule: Substitution) -> Result<Self, SeriesError> {
        match rule {
            Substitution::Power { k } => Ok(TruncatedSeries {
                zero: self.zero.clone(),
                truncation: k * self.truncation,
                terms: self.terms.iter().map(|(&(i, j), c)| ((k * i, k * j), c.clone())).collect(),
            }),
            Substitution::Affine { c, d } => {
                self.require_power_series()?;
                let p = self.prime();
                let (cs, ds) = (p.scalar(c), p.scalar(d));
                let mut out = Self::zero(self.zero.clone(), self.truncation);
                for (&(i, j), coeff) in &self.terms {
                    for u in 0..=i {
                        let scale =
                            p.mul(p.binom(i as i64, u as i64), p.mul(p.pow(cs, u as u64), p.pow(ds, (i - u) as u64)));
                        out.add_term(u, i - u + j, coeff, scale);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: Scalar) {
        self.truncation = self.truncation.min(other.truncation);
        let bound = self.truncation;
        self.terms.retain(|(i, j), _| i + j <= bound);
        for (&(i, j), v) in &other.terms {
            self.add_term(i, j, v, c);
        }
    }

    pub fn map_coefficients<D: Linear, F>(&self, zero: D, mut f: F) -> TruncatedSeries<D>
    where
        F: FnMut(&C) -> D,
    {
        let mut out = TruncatedSeries::zero(zero, self.truncation);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, &f(c), Scalar::ONE);
        }
        out
    }

    pub fn try_map_coefficients<D: Linear, E, F>(&self, zero: D, mut f: F) -> Result<TruncatedSeries<D>, E>
    where
        F: FnMut(&C) -> Result<D, E>,
    {
        let mut out = TruncatedSeries::zero(zero, self.truncation);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, &f(c)?, Scalar::ONE);
        }
        Ok(out)
    }

    /// Cauchy product with a bilinear coefficient pairing.
    pub fn mul<D: Linear, E: Linear, F>(&self, other: &TruncatedSeries<D>, zero: E, mut pair: F) -> TruncatedSeries<E>
    where
        F: FnMut(&C, &D) -> E,
    {
        self.try_mul(other, zero, |a, b| Ok::<E, std::convert::Infallible>(pair(a, b)))
            .unwrap_or_else(|never| match never {})
    }

    pub fn try_mul<D: Linear, E: Linear, Err, F>(
        &self,
        other: &TruncatedSeries<D>,
        zero: E,
        mut pair: F,
    ) -> Result<TruncatedSeries<E>, Err>
    where
        F: FnMut(&C, &D) -> Result<E, Err>,
    {
        let truncation = (self.truncation + other.low_degree()).min(other.truncation + self.low_degree());
        let mut out = TruncatedSeries::zero(zero, truncation);
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                if i1 + j1 + i2 + j2 > truncation {
                    continue;
                }
                out.add_term(i1 + i2, j1 + j2, &pair(a, b)?, Scalar::ONE);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lin::{field, FieldElt};

    fn one_plus_s(p: Prime, trunc: i32) -> TruncatedSeries<FieldElt> {
        TruncatedSeries::in_s(field(p, Scalar::ZERO), trunc, [(0, field(p, Scalar::ONE)), (1, field(p, Scalar::ONE))])
    }

    #[test]
    fn translate_linear_series() {
        let p = Prime::THREE;
        let f = one_plus_s(p, 5).substitute(Substitution::Affine { c: 1, d: 1 }).unwrap();
        assert_eq!(f.coefficient(0, 0).unwrap(), field(p, Scalar::ONE));
        assert_eq!(f.coefficient(1, 0).unwrap(), field(p, Scalar::ONE));
        assert_eq!(f.coefficient(0, 1).unwrap(), field(p, Scalar::ONE));
        assert!(f.coefficient(1, 1).unwrap().is_zero());
    }

    #[test]
    fn shift_is_bookkeeping() {
        let p = Prime::TWO;
        let f = TruncatedSeries::in_s(field(p, Scalar::ZERO), 6, [(2, field(p, Scalar::ONE))]);
        let g = f.shift(-1, 0);
        assert_eq!(g.coefficient(1, 0).unwrap(), field(p, Scalar::ONE));
        assert_eq!(g.truncation(), 5);
        assert_eq!(g.shift(1, 0), f);
    }

    #[test]
    fn power_substitution_spreads_exponents() {
        let p = Prime::THREE;
        let f = one_plus_s(p, 4).substitute(Substitution::Power { k: 2 }).unwrap();
        assert_eq!(f.coefficient(2, 0).unwrap(), field(p, Scalar::ONE));
        assert!(f.coefficient(1, 0).unwrap().is_zero());
        assert_eq!(f.truncation(), 8);
    }

    #[test]
    fn identity_substitution_is_identity() {
        for &q in &[2u32, 3, 5] {
            let p = Prime::new(q).unwrap();
            let f = TruncatedSeries::in_s(
                field(p, Scalar::ZERO),
                30,
                (0..=30).map(|e| (e, field(p, p.scalar(e as i64 * 7 + 1)))),
            );
            assert_eq!(f.substitute(Substitution::Affine { c: 1, d: 0 }).unwrap(), f);
        }
    }

    #[test]
    fn underflow_is_reported() {
        let p = Prime::THREE;
        let f = one_plus_s(p, 4).shift(-1, 0);
        assert!(matches!(f.substitute(Substitution::Affine { c: 1, d: 1 }), Err(SeriesError::LaurentUnderflow(-1, 0))));
    }

    #[test]
    fn product_truncation_tracks_low_degree() {
        let p = Prime::TWO;
        let f = TruncatedSeries::in_s(field(p, Scalar::ZERO), 5, [(2, field(p, Scalar::ONE))]);
        let g = one_plus_s(p, 4);
        let h = f.mul(&g, field(p, Scalar::ZERO), |a, b| field(p, p.mul(a.coeff(&()), b.coeff(&()))));
        assert_eq!(h.truncation(), 5);
        assert_eq!(h.coefficient(3, 0).unwrap(), field(p, Scalar::ONE));
    }
}
