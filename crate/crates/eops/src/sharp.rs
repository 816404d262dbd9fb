//! The multiplicative action `♯` of `⊕_k H_*(Σ_k)` on itself, induced by the
//! homomorphisms `Σ_m × Σ_n → Σ_{n^m}`.
//!
//! Evaluation reduces the left argument first (∘-words, then ·-products), then the
//! right one (∘-words via the coproduct of the left, ·-products via the mixed Cartan
//! formula), and ends at pairs of length-one generators read off generating series.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::algebra::{AlgebraError, EElement, Ring};
use crate::arith::{permutation_sign, Prime, Scalar};
use crate::lin::Lin;
use crate::semiring::{mono_weight, SemiMono, Semiring, SemiringElement, SemiringError};
use crate::sequence::{Entry, Sequence};
use crate::series::{SeriesError, Substitution, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SharpError {
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("p = {0} needs allow_large_primes")]
    LargePrime(u32),
    #[error("degree {degree} exceeds the cap {cap} for p = {p}")]
    DegreeCap { degree: u32, cap: u32, p: u32 },
    #[error("E{bockstein}_{index} is not a generator at p = {p}")]
    NotAGenerator { bockstein: u8, index: u32, p: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharpOptions {
    /// Primes `p >= 5` involve `(p^{p-2} - 1)`-fold coproducts and are off by default.
    pub allow_large_primes: bool,
    /// Largest input degree accepted at `p >= 5`.
    pub large_prime_degree_cap: u32,
}

impl Default for SharpOptions {
    fn default() -> Self {
        SharpOptions { allow_large_primes: false, large_prime_degree_cap: 8 }
    }
}

/// `(ε1, m, ε2, n)` for the pair `E^{ε1}_m ♯ E^{ε2}_n`.
pub type PairKey = (u8, u32, u8, u32);

/// `E^{ε1}_m ♯ E^{ε2}_n` keyed by `(ε1, m, ε2, n)`. Each value is homogeneous of degree
/// `deg E^{ε1}_m + deg E^{ε2}_n` and weight `p^p`.
#[derive(Debug, Default)]
pub struct SharpTable {
    memo: HashMap<PairKey, SemiringElement>,
    /// Truncation up to which each `(ε1, ε2)` family has been expanded.
    filled: HashMap<(u8, u8), i32>,
}

impl SharpTable {
    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }
}

/// Both sides of `r ♯ (s ∘ x) = Σ ± (r' ♯ s) ∘ (r'' ♯ x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedAdemReport {
    pub lhs: SemiringElement,
    pub rhs: SemiringElement,
}

impl MixedAdemReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

type Series = TruncatedSeries<SemiringElement>;

pub struct Sharp {
    ring: Arc<Semiring>,
    options: SharpOptions,
    table: RwLock<SharpTable>,
    memo: RwLock<HashMap<(SemiMono, SemiMono), SemiringElement>>,
}

impl std::fmt::Debug for Sharp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sharp").field("p", &self.p()).field("options", &self.options).finish()
    }
}

impl Sharp {
    pub fn new(ring: Arc<Semiring>, options: SharpOptions) -> Result<Self, SharpError> {
        let p = ring.p();
        if p.value() >= 5 && !options.allow_large_primes {
            return Err(SharpError::LargePrime(p.value()));
        }
        Ok(Sharp { ring, options, table: RwLock::new(SharpTable::default()), memo: RwLock::new(HashMap::new()) })
    }

    pub fn p(&self) -> Prime {
        self.ring.p()
    }

    pub fn semiring(&self) -> &Arc<Semiring> {
        &self.ring
    }

    pub fn table_size(&self) -> usize {
        self.table.read().expect("cache poisoned").len()
    }

    fn check_degree(&self, degree: u32) -> Result<(), SharpError> {
        let p = self.p();
        if p.value() >= 5 && degree > self.options.large_prime_degree_cap {
            return Err(SharpError::DegreeCap { degree, cap: self.options.large_prime_degree_cap, p: p.value() });
        }
        Ok(())
    }

    fn element(&self, m: &SemiMono) -> SemiringElement {
        Lin::basis(self.p(), m.clone())
    }

    fn inject_sequence(&self, seq: Sequence) -> Result<SemiringElement, SharpError> {
        Ok(self.ring.inject_e(&EElement::monomial(self.p(), Ring::E, seq))?)
    }

    /// `E^ε_i` as an element of the semiring; `E^0_0` is `[p]`.
    /// The memoized pair table, sorted by key.
    pub fn export_table(&self) -> Vec<(PairKey, SemiringElement)> {
        let guard = self.table.read().expect("cache poisoned");
        let mut out: Vec<_> = guard.memo.iter().map(|(k, v)| (*k, v.clone())).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Seeds one pair value. Values whose degree or weight cannot be that of the pair are
    /// rejected.
    pub fn import_pair(&self, key: PairKey, value: SemiringElement) -> bool {
        let p = self.p();
        let (left, right) = (Entry::new(key.0, key.1), Entry::new(key.2, key.3));
        if !left.is_legitimate(p) || !right.is_legitimate(p) {
            return false;
        }
        let degree = left.degree(p) + right.degree(p);
        let weight = (p.value() as u64).checked_pow(p.value());
        let ok = value.keys().all(|m| m.degree(p) == degree && mono_weight(m, p).ok() == weight);
        if ok {
            self.table.write().expect("cache poisoned").memo.entry(key).or_insert(value);
        }
        ok
    }

    pub fn length_one(&self, e: Entry) -> Result<SemiringElement, SharpError> {
        if !e.is_legitimate(self.p()) {
            return Err(SharpError::NotAGenerator { bockstein: e.bockstein, index: e.index, p: self.p().value() });
        }
        self.inject_sequence(Sequence(vec![e]))
    }

    pub fn sharp(&self, r: &SemiringElement, x: &SemiringElement) -> Result<SemiringElement, SharpError> {
        let p = self.p();
        let mut out = self.ring.zero();
        for (a, ca) in r.iter() {
            for (b, cb) in x.iter() {
                out.add_scaled(&self.sharp_mono(a, b)?, p.mul(ca, cb));
            }
        }
        Ok(out)
    }

    fn sharp_mono(&self, a: &SemiMono, b: &SemiMono) -> Result<SemiringElement, SharpError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.memo.read().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let p = self.p();
        self.check_degree(a.degree(p) + b.degree(p))?;
        let value = self.sharp_mono_uncached(a, b)?;
        self.memo.write().expect("cache poisoned").insert(key, value.clone());
        Ok(value)
    }

    fn sharp_mono_uncached(&self, a: &SemiMono, b: &SemiMono) -> Result<SemiringElement, SharpError> {
        let p = self.p();
        let ring = &self.ring;
        let bx = self.element(b);
        // 1 ♯ x = ε(x)[1]
        let Some((g, rest)) = a.split_first() else {
            return Ok(ring.bracket(1)?.scaled(ring.counit(&bx)));
        };
        if !rest.is_one() {
            // (u · v) ♯ x = Σ (-1)^{|v||x'|} (u ♯ x') ∘ (v ♯ x''), halving to keep recursion shallow
            let (u, v) = a.split_factors(a.factor_count() / 2);
            let (u_elt, v_elt) = (self.element(&u), self.element(&v));
            let mut out = ring.zero();
            for ((x1, x2), c) in ring.psi_mono(b)?.iter() {
                let left = self.sharp(&u_elt, &self.element(x1))?;
                if left.is_empty() {
                    continue;
                }
                let right = self.sharp(&v_elt, &self.element(x2))?;
                let sign = p.sign(v.is_odd(p) && x1.is_odd(p));
                out.add_scaled(&ring.circ(&left, &right)?, p.mul(c, sign));
            }
            return Ok(out);
        }
        if g.is_bracket() {
            return Ok(bx);
        }
        let seq = g.sequence();
        if seq.len() >= 2 {
            // (r ∘ s) ♯ x = r ♯ (s ♯ x)
            let head = self.inject_sequence(Sequence(vec![seq.entries()[0]]))?;
            let tail = self.inject_sequence(seq.tail())?;
            return self.sharp(&head, &self.sharp(&tail, &bx)?);
        }
        let r_entry = seq.entries()[0];
        let r_elt = self.element(a);
        let Some((h, b_rest)) = b.split_first() else {
            // r ♯ 1 = ε(r) 1
            return Ok(ring.one().scaled(ring.counit(&r_elt)));
        };
        if !b_rest.is_one() {
            let (x, y) = b.split_factors(b.factor_count() / 2);
            return self.mixed_cartan(&r_elt, &self.element(&x), &self.element(&y));
        }
        if h.is_bracket() {
            // r ♯ [1] = ε(r)[1]
            return Ok(ring.bracket(1)?.scaled(ring.counit(&r_elt)));
        }
        let hseq = h.sequence();
        if hseq.len() >= 2 {
            let s = self.inject_sequence(Sequence(vec![hseq.entries()[0]]))?;
            let y = self.inject_sequence(hseq.tail())?;
            return self.sharp_of_circ(&r_elt, &s, &y);
        }
        self.sharp_gen_pair(r_entry, hseq.entries()[0])
    }

    /// `r ♯ (s ∘ x) = Σ (-1)^{|s||r''|} (r' ♯ s) ∘ (r'' ♯ x)`.
    fn sharp_of_circ(
        &self,
        r: &SemiringElement,
        s: &SemiringElement,
        x: &SemiringElement,
    ) -> Result<SemiringElement, SharpError> {
        let p = self.p();
        let ring = &self.ring;
        let s_odd = s.keys().next().is_some_and(|m| m.is_odd(p));
        let mut out = ring.zero();
        for ((r1, r2), c) in ring.psi(r)?.iter() {
            let left = self.sharp(&self.element(r1), s)?;
            if left.is_empty() {
                continue;
            }
            let right = self.sharp(&self.element(r2), x)?;
            let sign = p.sign(s_odd && r2.is_odd(p));
            out.add_scaled(&ring.circ(&left, &right)?, p.mul(c, sign));
        }
        Ok(out)
    }

    /// The right side of the mixed Adem relation, for comparison with `r ♯ (s ∘ x)`.
    pub fn verify_mixed_adem(
        &self,
        r: &SemiringElement,
        s: &SemiringElement,
        x: &SemiringElement,
    ) -> Result<MixedAdemReport, SharpError> {
        let lhs = self.sharp(r, &self.ring.circ(s, x)?)?;
        let mut rhs = self.ring.zero();
        for (m, c) in s.iter() {
            rhs.add_scaled(&self.sharp_of_circ(r, &self.element(m), x)?, c);
        }
        Ok(MixedAdemReport { lhs, rhs })
    }

    /// `r ♯ (x y)` for `r ∈ H_*(Σ_p)`, summed over the `(p+1)`-fold coproduct of
    /// `r ⊗ x ⊗ y` with `T_0 ⋯ T_p` multiplied in order.
    pub fn mixed_cartan(
        &self,
        r: &SemiringElement,
        x: &SemiringElement,
        y: &SemiringElement,
    ) -> Result<SemiringElement, SharpError> {
        let p = self.p();
        let q = p.value() as usize;
        let ring = &self.ring;
        let rs = ring.psi_iterated(r, q + 1)?;
        let xs = ring.psi_iterated(x, q + 1)?;
        let ys = ring.psi_iterated(y, q + 1)?;
        let counit = |m: &SemiMono| ring.counit(&self.element(m));
        let order: Vec<usize> = (0..=q).flat_map(|i| [i, q + 1 + i, 2 * (q + 1) + i]).collect();
        let mut out = ring.zero();
        for (xv, cx) in xs.iter() {
            if counit(&xv[q]).is_zero() {
                continue;
            }
            for (yv, cy) in ys.iter() {
                let (ex, ey) = (counit(&xv[q]), counit(&yv[0]));
                if ey.is_zero() {
                    continue;
                }
                for (rv, cr) in rs.iter() {
                    let degrees: Vec<u32> = rv.iter().chain(xv.iter()).chain(yv.iter()).map(|m| m.degree(p)).collect();
                    let sign = permutation_sign(&degrees, &order, p);
                    let mut term = ring.one().scaled(p.mul(p.mul(cr, p.mul(cx, cy)), p.mul(sign, p.mul(ex, ey))));
                    for i in 0..=q {
                        if term.is_empty() {
                            break;
                        }
                        let t = self.cartan_factor(i, &rv[i], &xv[i], &yv[i])?;
                        term = ring.dot(&term, &t);
                    }
                    out.add_owned(term);
                }
            }
        }
        Ok(out)
    }

    /// `T_i(s ⊗ z ⊗ w)`; the counit factors of `T_0` and `T_p` are applied by the caller.
    fn cartan_factor(&self, i: usize, s: &SemiMono, z: &SemiMono, w: &SemiMono) -> Result<SemiringElement, SharpError> {
        let q = self.p().value() as usize;
        let ring = &self.ring;
        let (s, z, w) = (self.element(s), self.element(z), self.element(w));
        if i == 0 {
            return self.sharp(&s, &z);
        }
        if i == q {
            return self.sharp(&s, &w);
        }
        let count = exact_binomial(q as u64, i as u64) / q as u64;
        let zs = self.sharp(&ring.bracket((q - i) as i64)?, &z)?;
        let ws = self.sharp(&ring.bracket(i as i64)?, &w)?;
        let mut t = ring.circ(&ring.bracket(count as i64)?, &s)?;
        t = ring.circ(&t, &zs)?;
        Ok(ring.circ(&t, &ws)?)
    }

    /// `E^{ε1}_m ♯ E^{ε2}_n`, read off the generating-series identity for the pair.
    pub fn sharp_gen_pair(&self, left: Entry, right: Entry) -> Result<SemiringElement, SharpError> {
        let p = self.p();
        for e in [left, right] {
            if !e.is_legitimate(p) {
                return Err(SharpError::NotAGenerator { bockstein: e.bockstein, index: e.index, p: p.value() });
            }
        }
        let key = (left.bockstein, left.index, right.bockstein, right.index);
        if let Some(v) = self.table.read().expect("cache poisoned").memo.get(&key) {
            return Ok(v.clone());
        }
        let (a, b) = (tilde_exponent(p, left), tilde_exponent(p, right));
        let truncation = a + b;
        let family = (left.bockstein, right.bockstein);
        let series = self.pair_series(family.0, family.1, truncation)?;
        let mut table = self.table.write().expect("cache poisoned");
        let done = table.filled.get(&family).copied().unwrap_or(-1);
        if done < truncation {
            for (&(i, j), c) in series.terms() {
                if let (Some(m), Some(n)) = (tilde_index(p, family.0, i), tilde_index(p, family.1, j)) {
                    table.memo.insert((family.0, m, family.1, n), c.clone());
                }
            }
            table.filled.insert(family, truncation);
        }
        Ok(series.coefficient(a, b)?)
    }

    /// `Ẽ^ε(s)`: coefficient `E^ε_n` at `s^{(p-1)n - ε}`; at `p = 2` this is `E^0(s)`.
    fn tilde(&self, eps: u8, truncation: i32) -> Result<Series, SharpError> {
        let p = self.p();
        let mut coefficients = Vec::new();
        for n in eps as u32.. {
            let e = Entry::new(eps, n);
            let exponent = tilde_exponent(p, e);
            if exponent > truncation {
                break;
            }
            coefficients.push((exponent, self.length_one(e)?));
        }
        Ok(TruncatedSeries::in_s(self.ring.zero(), truncation, coefficients))
    }

    fn dot_series(&self, x: &Series, y: &Series) -> Series {
        x.mul(y, self.ring.zero(), |a, b| self.ring.dot(a, b))
    }

    /// `Π_c Ẽ^{d_c}(c s + t)` for the given exponents `d_0, ..., d_{p-1}`.
    fn orbit_product(&self, exps: &[u8], truncation: i32) -> Result<Series, SharpError> {
        let mut acc = TruncatedSeries::in_s(self.ring.zero(), truncation, [(0, self.ring.one())]);
        for (c, &d) in exps.iter().enumerate() {
            let factor = self.tilde(d, truncation)?.substitute(Substitution::Affine { c: c as i64, d: 1 })?;
            acc = self.dot_series(&acc, &factor);
        }
        Ok(acc)
    }

    /// `[p^{p-2} - 1] ∘ Ẽ^{ε1}(s) ∘ Ẽ^{ε2}(t)`.
    fn free_orbits(&self, e1: u8, e2: u8, truncation: i32) -> Result<Series, SharpError> {
        let p = self.p();
        let ring = &self.ring;
        let left = self.tilde(e1, truncation)?;
        let right = self.tilde(e2, truncation)?.substitute(Substitution::Affine { c: 0, d: 1 })?;
        let paired = left.try_mul(&right, ring.zero(), |a, b| ring.circ(a, b))?;
        let copies = (p.value() as i64).pow(p.value() - 2) - 1;
        let bracket = ring.bracket(copies)?;
        paired.try_map_coefficients(ring.zero(), |c| ring.circ(&bracket, c)).map_err(SharpError::from)
    }

    /// The full series `Ẽ^{ε1}(s) ♯ Ẽ^{ε2}(t)` through total `s,t`-degree `truncation`.
    pub fn pair_series(&self, e1: u8, e2: u8, truncation: i32) -> Result<Series, SharpError> {
        let p = self.p();
        let q = p.value() as usize;
        let one = Scalar::ONE;
        let delta = |k: usize| -> Vec<u8> { (0..q).map(|c| u8::from(c == k)).collect() };
        let mut out =
            self.dot_series(&self.free_orbits(e1, e2, truncation)?, &self.orbit_product(&vec![0; q], truncation)?);
        match (e1, e2) {
            (0, 0) => {}
            (0, 1) | (1, 0) => {
                let base = self.free_orbits(0, 0, truncation)?;
                for k in 0..q {
                    let weight = if e1 == 1 { p.scalar(k as i64) } else { one };
                    let term = self.dot_series(&base, &self.orbit_product(&delta(k), truncation)?);
                    out.add_scaled(&term, weight);
                }
            }
            _ => {
                let f01 = self.free_orbits(0, 1, truncation)?;
                let f10 = self.free_orbits(1, 0, truncation)?;
                let f00 = self.free_orbits(0, 0, truncation)?;
                for k in 0..q {
                    let single = self.orbit_product(&delta(k), truncation)?;
                    out.add_scaled(&self.dot_series(&f01, &single), p.neg(p.scalar(k as i64)));
                    out.add_scaled(&self.dot_series(&f10, &single), one);
                    for l in 0..k {
                        let exps: Vec<u8> = (0..q).map(|c| u8::from(c == k) + u8::from(c == l)).collect();
                        let double = self.orbit_product(&exps, truncation)?;
                        out.add_scaled(&self.dot_series(&f00, &double), p.neg(p.scalar((k - l) as i64)));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Exponent of `E^ε_n` in `Ẽ^ε`.
fn tilde_exponent(p: Prime, e: Entry) -> i32 {
    if p.is_odd() {
        (p.value() as i32 - 1) * e.index as i32 - e.bockstein as i32
    } else {
        e.index as i32
    }
}

/// The index `n` with `E^ε_n` at exponent `k` in `Ẽ^ε`, if any.
fn tilde_index(p: Prime, eps: u8, k: i32) -> Option<u32> {
    let step = if p.is_odd() { p.value() as i32 - 1 } else { 1 };
    let shifted = k + eps as i32;
    (shifted >= 0 && shifted % step == 0)
        .then(|| (shifted / step) as u32)
        .filter(|&n| Entry::new(eps, n).is_legitimate(p))
}

pub fn exact_binomial(n: u64, k: u64) -> u64 {
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
