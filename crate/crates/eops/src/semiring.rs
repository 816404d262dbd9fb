//! The coalgebraic semiring `⊕_k H_*(Σ_k)`, modelled as the free graded-commutative
//! algebra on `[1]` and the semiring generators `E_J`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, EElement, Ring};
use crate::arith::{Prime, Scalar};
use crate::lin::Lin;
use crate::poly::{poly_mul, poly_pow, tensor_mul, tensor_of, Generator, Mono, Poly, Tensor};
use crate::sequence::Sequence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("bracket [{0}] has negative size")]
    NegativeBracket(i64),
    #[error("{0} is not a semiring generator")]
    NotAGenerator(String),
    #[error("weight overflows 64 bits")]
    WeightOverflow,
}

/// A polynomial generator: `[1]` (empty sequence) or `E_J` for an allowable `J`
/// meeting the generator condition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemiGen {
    seq: Sequence,
    degree: u32,
}

impl SemiGen {
    pub fn bracket_one() -> Self {
        SemiGen { seq: Sequence::empty(), degree: 0 }
    }

    pub fn sequence(&self) -> &Sequence {
        &self.seq
    }

    pub fn is_bracket(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn weight(&self, p: Prime) -> Result<u64, SemiringError> {
        (p.value() as u64).checked_pow(self.seq.len() as u32).ok_or(SemiringError::WeightOverflow)
    }
}

impl Generator for SemiGen {
    fn degree(&self, _p: Prime) -> u32 {
        self.degree
    }
}

impl fmt::Debug for SemiGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.seq.is_empty() {
            write!(f, "[1]")
        } else {
            write!(f, "({})", self.seq)
        }
    }
}

pub type SemiringElement = Poly<SemiGen>;
pub type SemiringTensor = Tensor<SemiGen>;
pub type SemiMono = Mono<SemiGen>;

pub fn mono_weight(m: &SemiMono, p: Prime) -> Result<u64, SemiringError> {
    m.factors().iter().try_fold(0u64, |acc, (g, e)| {
        g.weight(p)?.checked_mul(*e as u64).and_then(|w| acc.checked_add(w)).ok_or(SemiringError::WeightOverflow)
    })
}

/// Number of `[1]` factors in a monomial.
pub fn bracket_power(m: &SemiMono) -> u32 {
    m.factors().iter().filter(|(g, _)| g.is_bracket()).map(|(_, e)| *e).sum()
}

pub struct Semiring {
    alg: Arc<Algebra>,
    inject_cache: RwLock<HashMap<Sequence, SemiringElement>>,
    psi_cache: RwLock<HashMap<SemiGen, SemiringTensor>>,
    circ_cache: RwLock<HashMap<(SemiMono, SemiMono), SemiringElement>>,
}

impl fmt::Debug for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semiring").field("p", &self.p()).finish()
    }
}

impl Semiring {
    pub fn new(alg: Arc<Algebra>) -> Self {
        Semiring {
            alg,
            inject_cache: RwLock::new(HashMap::new()),
            psi_cache: RwLock::new(HashMap::new()),
            circ_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn p(&self) -> Prime {
        self.alg.p()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn zero(&self) -> SemiringElement {
        Lin::zero(self.p())
    }

    /// The unit `1` of `·`, the class of `H_0(Σ_0)`.
    pub fn one(&self) -> SemiringElement {
        Lin::basis(self.p(), Mono::one())
    }

    pub fn bracket(&self, n: i64) -> Result<SemiringElement, SemiringError> {
        if n < 0 {
            return Err(SemiringError::NegativeBracket(n));
        }
        Ok(Lin::basis(self.p(), Mono::power(SemiGen::bracket_one(), n as u32)))
    }

    pub fn generator(&self, seq: &Sequence) -> Result<SemiringElement, SemiringError> {
        let p = self.p();
        if !(seq.is_allowable(p) && seq.satisfies(p, Ring::E.condition()) && seq.meets_generator_condition(p, 0)) {
            return Err(SemiringError::NotAGenerator(seq.to_string()));
        }
        Ok(Lin::basis(p, Mono::generator(self.gen(seq.clone()))))
    }

    fn gen(&self, seq: Sequence) -> SemiGen {
        let degree = seq.degree(self.p());
        SemiGen { seq, degree }
    }

    pub fn dot(&self, x: &SemiringElement, y: &SemiringElement) -> SemiringElement {
        poly_mul(x, y, self.p())
    }

    pub fn counit(&self, x: &SemiringElement) -> Scalar {
        let p = self.p();
        x.iter()
            .filter(|(m, _)| m.factors().iter().all(|(g, _)| g.is_bracket()))
            .fold(Scalar::ZERO, |a, (_, c)| p.add(a, c))
    }

    /// The image of an element of `𝓔` under the inclusion into the semiring.
    pub fn inject_e(&self, x: &EElement) -> Result<SemiringElement, SemiringError> {
        let nf = self.alg.normal_form(&x.clone().with_ring(Ring::E))?;
        let mut out = self.zero();
        for (key, c) in nf.terms().iter() {
            out.add_scaled(&self.inject_basis(key)?, c);
        }
        Ok(out)
    }

    fn inject_basis(&self, key: &Sequence) -> Result<SemiringElement, SemiringError> {
        if let Some(v) = self.inject_cache.read().expect("cache poisoned").get(key) {
            return Ok(v.clone());
        }
        let p = self.p();
        let value = if key.is_empty() {
            self.bracket(1)?
        } else if key.meets_generator_condition(p, 0) {
            Lin::basis(p, Mono::generator(self.gen(key.clone())))
        } else {
            // E_J = (-1)^{min J} (E_{J'})^p with J' the transform of the tail of I.
            let inner = key.inverse_angle(p).expect("basis keys are allowable").tail();
            let reduced = inner.angle_transform(p).map_err(AlgebraError::from)?;
            let e = EElement::monomial(p, Ring::E, reduced);
            let base = self.inject_e(&e)?;
            let sign = p.sign_of(key.min().unwrap_or(0) as i64);
            poly_pow(&base, p.value(), p).scaled(sign)
        };
        self.inject_cache.write().expect("cache poisoned").insert(key.clone(), value.clone());
        Ok(value)
    }

    fn generator_as_e(&self, g: &SemiGen) -> EElement {
        EElement::monomial(self.p(), Ring::E, g.seq.clone())
    }

    fn psi_gen(&self, g: &SemiGen) -> Result<SemiringTensor, SemiringError> {
        if let Some(v) = self.psi_cache.read().expect("cache poisoned").get(g) {
            return Ok(v.clone());
        }
        let p = self.p();
        let value = if g.is_bracket() {
            Lin::basis(p, (Mono::generator(g.clone()), Mono::generator(g.clone())))
        } else {
            let psi = self.alg.coproduct(&self.generator_as_e(g))?;
            let mut out = Lin::zero(p);
            for ((a, b), c) in psi.terms().iter() {
                let ia = self.inject_basis(a)?;
                let ib = self.inject_basis(b)?;
                out.add_scaled(&tensor_of(&ia, &ib, p), c);
            }
            out
        };
        self.psi_cache.write().expect("cache poisoned").insert(g.clone(), value.clone());
        Ok(value)
    }

    pub fn psi_mono(&self, m: &SemiMono) -> Result<SemiringTensor, SemiringError> {
        let p = self.p();
        let mut acc: SemiringTensor = Lin::basis(p, (Mono::one(), Mono::one()));
        for (g, e) in m.factors() {
            let t = self.psi_gen(g)?;
            for _ in 0..*e {
                acc = tensor_mul(&acc, &t, p);
            }
        }
        Ok(acc)
    }

    pub fn psi(&self, x: &SemiringElement) -> Result<SemiringTensor, SemiringError> {
        let mut out = Lin::zero(self.p());
        for (m, c) in x.iter() {
            out.add_scaled(&self.psi_mono(m)?, c);
        }
        Ok(out)
    }

    /// The `k`-fold iterated coproduct (`k >= 1` tensor factors), applying `ψ` to the last
    /// factor each time.
    pub fn psi_iterated(&self, x: &SemiringElement, k: usize) -> Result<Lin<Vec<SemiMono>>, SemiringError> {
        let p = self.p();
        let mut acc: Lin<Vec<SemiMono>> = x.map_linear(|m| Lin::basis(p, vec![m.clone()]));
        for _ in 1..k {
            let mut next = Lin::zero(p);
            for (parts, c) in acc.iter() {
                let (last, init) = parts.split_last().expect("nonempty");
                for ((a, b), v) in self.psi_mono(last)?.iter() {
                    let mut w = init.to_vec();
                    w.push(a.clone());
                    w.push(b.clone());
                    next.add_term(w, p.mul(c, v));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn circ(&self, x: &SemiringElement, y: &SemiringElement) -> Result<SemiringElement, SemiringError> {
        let p = self.p();
        let mut out = self.zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.circ_mono(a, b)?, p.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn circ_mono(&self, a: &SemiMono, b: &SemiMono) -> Result<SemiringElement, SemiringError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.circ_cache.read().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let value = self.circ_mono_uncached(a, b)?;
        self.circ_cache.write().expect("cache poisoned").insert(key, value.clone());
        Ok(value)
    }

    fn circ_mono_uncached(&self, a: &SemiMono, b: &SemiMono) -> Result<SemiringElement, SemiringError> {
        let p = self.p();
        let mono = |m: SemiMono| Lin::basis(p, m);
        if b.is_one() {
            return Ok(self.one().scaled(self.counit(&mono(a.clone()))));
        }
        if b.factor_count() >= 2 {
            // a ∘ (s t) = Σ (-1)^{|a''||s|} (a' ∘ s)(a'' ∘ t), halving to keep recursion shallow
            let (s, rest) = b.split_factors(b.factor_count() / 2);
            let mut out = self.zero();
            for ((a1, a2), c) in self.psi_mono(a)?.iter() {
                let sign = p.sign(a2.is_odd(p) && s.is_odd(p));
                let left = self.circ_mono(a1, &s)?;
                if left.is_empty() {
                    continue;
                }
                let right = self.circ_mono(a2, &rest)?;
                out.add_scaled(&poly_mul(&left, &right, p), p.mul(c, sign));
            }
            return Ok(out);
        }
        let (g, _) = b.split_first().expect("single factor");
        if g.is_bracket() {
            return Ok(mono(a.clone()));
        }
        if a.is_one() {
            return Ok(self.one().scaled(self.counit(&mono(b.clone()))));
        }
        if a.factor_count() >= 2 {
            let sign = p.sign(a.is_odd(p) && b.is_odd(p));
            return Ok(self.circ_mono(b, a)?.scaled(sign));
        }
        let (h, _) = a.split_first().expect("single factor");
        if h.is_bracket() {
            return Ok(mono(b.clone()));
        }
        let product = self.alg.circ(&self.generator_as_e(&h), &self.generator_as_e(&g))?;
        self.inject_e(&product)
    }

    pub fn steenrod(&self, k: u32, x: &SemiringElement) -> Result<SemiringElement, SemiringError> {
        let mut out = self.zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.steenrod_mono(k, m)?, c);
        }
        Ok(out)
    }

    fn steenrod_mono(&self, k: u32, m: &SemiMono) -> Result<SemiringElement, SemiringError> {
        let p = self.p();
        let brackets = bracket_power(m);
        if brackets > 0 {
            // Operations vanish on [1], so a bracket power factors out.
            let (head, rest) = m.split_factors(brackets);
            return Ok(poly_mul(&Lin::basis(p, head), &self.steenrod_mono(k, &rest)?, p));
        }
        let Some((g, rest)) = m.split_first() else {
            return Ok(if k == 0 { self.one() } else { self.zero() });
        };
        let mut out = self.zero();
        for k1 in 0..=k {
            let head = if g.is_bracket() {
                if k1 == 0 {
                    Lin::basis(p, Mono::generator(g.clone()))
                } else {
                    continue;
                }
            } else {
                self.inject_e(&self.alg.steenrod(k1, &self.generator_as_e(&g))?)?
            };
            if head.is_empty() {
                continue;
            }
            let tail = self.steenrod_mono(k - k1, &rest)?;
            out.add_scaled(&poly_mul(&head, &tail, p), Scalar::ONE);
        }
        Ok(out)
    }

    /// The Bockstein on the ε-bookkeeping of odd primes; zero at p = 2, where the
    /// Bockstein is `steenrod(1, _)`.
    pub fn bockstein(&self, x: &SemiringElement) -> Result<SemiringElement, SemiringError> {
        let mut out = self.zero();
        if self.p().is_odd() {
            for (m, c) in x.iter() {
                out.add_scaled(&self.bockstein_mono(m)?, c);
            }
        }
        Ok(out)
    }

    fn bockstein_mono(&self, m: &SemiMono) -> Result<SemiringElement, SemiringError> {
        let p = self.p();
        let brackets = bracket_power(m);
        if brackets > 0 {
            let (head, rest) = m.split_factors(brackets);
            return Ok(poly_mul(&Lin::basis(p, head), &self.bockstein_mono(&rest)?, p));
        }
        let Some((g, rest)) = m.split_first() else {
            return Ok(self.zero());
        };
        let g_elt = Lin::basis(p, Mono::generator(g.clone()));
        let rest_elt = Lin::basis(p, rest.clone());
        let mut out = self.zero();
        if !g.is_bracket() {
            let bg = self.inject_e(&self.alg.bockstein(&self.generator_as_e(&g))?)?;
            out.add_scaled(&poly_mul(&bg, &rest_elt, p), Scalar::ONE);
        }
        let brest = self.bockstein_mono(&rest)?;
        out.add_scaled(&poly_mul(&g_elt, &brest, p), p.sign(g.is_odd(p)));
        Ok(out)
    }

    /// Every term's weight, or an error on overflow.
    pub fn weights(&self, x: &SemiringElement) -> Result<Vec<u64>, SemiringError> {
        x.keys().map(|m| mono_weight(m, self.p())).collect()
    }

    /// Elements from `𝓔` given as signed words, injected.
    pub fn from_word(&self, word: &Sequence) -> Result<SemiringElement, SemiringError> {
        let e = EElement::word(self.p(), Ring::E, word).map_err(SemiringError::from)?;
        self.inject_e(&e)
    }
}

/// Canonical display order: weight, then degree, then lexicographic.
pub fn display_terms(x: &SemiringElement, p: Prime) -> String {
    if x.is_empty() {
        return "0".to_string();
    }
    let mut terms: Vec<(&SemiMono, Scalar)> = x.iter().collect();
    terms.sort_by_key(|(m, _)| (mono_weight(m, p).unwrap_or(u64::MAX), m.degree(p), (*m).clone()));
    terms
        .iter()
        .map(|(m, c)| {
            let body = display_mono(m);
            if *c == Scalar::ONE {
                body
            } else {
                format!("{c}*{body}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn display_mono(m: &SemiMono) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let brackets = bracket_power(m);
    if brackets > 0 {
        parts.push(format!("[{brackets}]"));
    }
    for (g, e) in m.factors().iter().filter(|(g, _)| !g.is_bracket()) {
        let body = if g.seq.len() == 1 { g.seq.to_string() } else { format!("({})", g.seq) };
        parts.push(if *e > 1 { format!("{body}^{e}") } else { body });
    }
    parts.join(" * ")
}
