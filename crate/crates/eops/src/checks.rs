//! Named verification routines behind `verify <name>`.
//!
//! Every check runs at one prime and a degree bound and returns a [`CheckReport`];
//! a failed computation counts as a failed case, never as a panic.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{monomial, Algebra, EElement, Ring};
use crate::arith::Prime;
use crate::dl::{self, admissible_to_allowable, enumerate_admissible, DlOp, Formal};
use crate::free::{free_dims, FreeAlgebra, GeneratorShape, Presentation};
use crate::oracle::{coinvariant_dims, CoinvariantSpace};
use crate::semiring::{Semiring, SemiringElement};
use crate::sequence::{enumerate_allowable, Condition, Entry, Sequence};
use crate::sharp::{Sharp, SharpOptions};

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("unknown check {name:?}; available: {available}")]
    Unknown { name: String, available: String },
    #[error("check {name} cannot run here: {reason}")]
    Unsupported { name: &'static str, reason: String },
}

/// Inputs shared by all checks.
#[derive(Debug, Clone)]
pub struct CheckContext {
    pub p: Prime,
    pub max_degree: u32,
    pub jobs: usize,
    pub algebra: Arc<Algebra>,
}

impl CheckContext {
    pub fn new(p: Prime, max_degree: u32) -> Self {
        CheckContext { p, max_degree, jobs: 1, algebra: Arc::new(Algebra::new(p)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub p: u32,
    pub max_degree: u32,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str, ctx: &CheckContext) -> Self {
        CheckReport { name, p: ctx.p.value(), max_degree: ctx.max_degree, cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "OK");
        }
        write!(f, "FAILED {} of {} cases", self.failures.len(), self.cases)?;
        for line in &self.failures {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError>;
}

pub struct Registry {
    checks: Vec<Box<dyn Check>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { checks: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(Relations));
        r.register(Box::new(Rewrite));
        r.register(Box::new(Coinvariants));
        r.register(Box::new(EQuotient));
        r.register(Box::new(BocksteinBound));
        r.register(Box::new(Antipode));
        r.register(Box::new(Conversions));
        r.register(Box::new(FreeHomology));
        r.register(Box::new(MixedAdem));
        r
    }

    /// Later registrations under an existing name replace the earlier one.
    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Check> + '_ {
        self.checks.iter().map(|c| c.as_ref())
    }

    pub fn run(&self, name: &str, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        match self.get(name) {
            Some(c) => c.run(ctx),
            None => Err(CheckError::Unknown {
                name: name.to_string(),
                available: self.iter().map(|c| c.name()).collect::<Vec<_>>().join(", "),
            }),
        }
    }
}

fn e_basis(alg: &Algebra, max_length: usize, max_degree: u32) -> Vec<Sequence> {
    let mut out = vec![Sequence::empty()];
    for len in 1..=max_length {
        out.extend(alg.basis(Ring::E, len, max_degree));
    }
    out
}

struct Relations;

impl Check for Relations {
    fn name(&self) -> &'static str {
        "relations"
    }

    fn summary(&self) -> &'static str {
        "defining generating-series identities hold after normalization, truncated at the degree bound"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new(self.name(), ctx);
        let rel = ctx.algebra.verify_defining_relations(ctx.max_degree as i32);
        report.cases = rel.coefficients_checked;
        report.failures = rel
            .mismatches
            .iter()
            .map(|m| format!("{:?} at s^{} t^{}: {}", m.identity, m.s_exponent, m.t_exponent, m.detail))
            .collect();
        Ok(report)
    }
}

struct Rewrite;

impl Check for Rewrite {
    fn name(&self) -> &'static str {
        "rewrite"
    }

    fn summary(&self) -> &'static str {
        "length-2 normal forms keep their coinvariant class"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let mut report = CheckReport::new(self.name(), ctx);
        for d in 0..=ctx.max_degree {
            let space = CoinvariantSpace::build(2, d, p);
            for beta in 0..=2 {
                for key in monomial::monomials(p, 2, d, beta) {
                    let x = EElement::monomial(p, Ring::Ehat, key.clone());
                    let same = ctx
                        .algebra
                        .normal_form(&x)
                        .ok()
                        .and_then(|nf| Some(space.class_of_element(&x).ok()? == space.class_of_element(&nf).ok()?));
                    report.expect(same == Some(true), || format!("{key} changes class under normalization"));
                }
            }
        }
        Ok(report)
    }
}

struct Coinvariants;

impl Check for Coinvariants {
    fn name(&self) -> &'static str {
        "coinvariants"
    }

    fn summary(&self) -> &'static str {
        "allowable basis counts equal coinvariant dimensions in lengths 1 and 2"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let mut report = CheckReport::new(self.name(), ctx);
        for n in 1..=2 {
            let dims = coinvariant_dims(n, ctx.max_degree, p, ctx.jobs);
            let basis = enumerate_allowable(p, n, ctx.max_degree, Condition::EhatBasis);
            for (d, &dim) in dims.iter().enumerate() {
                let count = basis.iter().filter(|j| j.degree(p) as usize == d).count();
                report
                    .expect(count == dim, || format!("length {n} degree {d}: {count} basis elements, dimension {dim}"));
            }
        }
        Ok(report)
    }
}

struct EQuotient;

impl Check for EQuotient {
    fn name(&self) -> &'static str {
        "e-quotient"
    }

    fn summary(&self) -> &'static str {
        "E^e_n o r vanishes for e <= n < (e + deg_b r)/2"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let mut report = CheckReport::new(self.name(), ctx);
        for len in 1..=2 {
            for key in ctx.algebra.basis(Ring::E, len, ctx.max_degree) {
                let r = EElement::monomial(p, Ring::E, key.clone());
                let b = key.bockstein_degree();
                for eps in 0..=u8::from(p.is_odd()) {
                    for n in eps as u32.. {
                        if 2 * n >= eps as u32 + b {
                            break;
                        }
                        let vanishes = ctx
                            .algebra
                            .generator(Ring::E, eps, n)
                            .and_then(|e| ctx.algebra.circ(&e, &r))
                            .is_ok_and(|x| x.is_zero());
                        report.expect(vanishes, || format!("E{eps}_{n} o {key} is nonzero"));
                    }
                }
            }
        }
        Ok(report)
    }
}

struct BocksteinBound;

impl Check for BocksteinBound {
    fn name(&self) -> &'static str {
        "bockstein-bound"
    }

    fn summary(&self) -> &'static str {
        "P^l_* r = 0 once 2pl exceeds deg r - deg_b r (2l > deg r at p = 2)"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let q = p.value();
        let mut report = CheckReport::new(self.name(), ctx);
        for len in 1..=2 {
            for key in ctx.algebra.basis(Ring::E, len, ctx.max_degree) {
                let r = EElement::monomial(p, Ring::E, key.clone());
                let (deg, b) = (key.degree(p), key.bockstein_degree());
                for l in 1..=deg {
                    let beyond = if p.is_odd() { 2 * q * l > deg - b } else { 2 * l > deg };
                    if beyond {
                        let zero = ctx.algebra.steenrod(l, &r).is_ok_and(|x| x.is_zero());
                        report.expect(zero, || format!("P^{l} {key} is nonzero"));
                    }
                }
            }
        }
        Ok(report)
    }
}

struct Antipode;

impl Check for Antipode {
    fn name(&self) -> &'static str {
        "antipode"
    }

    fn summary(&self) -> &'static str {
        "sum of P^i (chi P^j) over i + j = k vanishes for 1 <= k <= 8"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let mut report = CheckReport::new(self.name(), ctx);
        for key in e_basis(&ctx.algebra, 3, ctx.max_degree) {
            let x = EElement::monomial(p, Ring::E, key.clone());
            for k in 1..=8 {
                let zero = dl::antipode_defect(ctx.algebra.as_ref(), k, &x).is_ok_and(|d| d.is_zero());
                report.expect(zero, || format!("k={k} on {key}"));
            }
        }
        Ok(report)
    }
}

struct Conversions;

impl Check for Conversions {
    fn name(&self) -> &'static str {
        "conversions"
    }

    fn summary(&self) -> &'static str {
        "E-operations rebuilt from Dyer-Lashof operations agree with the rewriting engine"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let alg = ctx.algebra.as_ref();
        let mut report = CheckReport::new(self.name(), ctx);
        for key in e_basis(alg, 3, ctx.max_degree) {
            let Some(first) = key.first() else { continue };
            let tail = EElement::monomial(p, Ring::E, key.tail());
            let via_q = dl::e_from_q(alg, first, &tail, |op, z| dl::q_from_e(alg, op, z));
            let direct = alg.normal_form(&EElement::monomial(p, Ring::E, key.clone()));
            report.expect(matches!((via_q, direct), (Ok(a), Ok(b)) if a == b), || format!("{key}"));
            let xe = EElement::monomial(p, Ring::E, key.clone());
            for n in 0..=4 {
                for eps in 0..=u8::from(p.is_odd() && n >= 1) {
                    let q = Formal::single(DlOp::new(eps, n), xe.clone());
                    let back = dl::formal_q_to_e(alg, &q).and_then(|e| dl::formal_e_to_q(alg, &e));
                    report.expect(back.is_ok_and(|b| b == q), || {
                        format!("formal round trip of {} on {key}", DlOp::new(eps, n))
                    });
                }
            }
        }
        Ok(report)
    }
}

struct FreeHomology;

impl FreeHomology {
    /// Generator shapes reached through admissible sequences and the bijection.
    fn admissible_shapes(f: &FreeAlgebra, max_degree: u32) -> Vec<GeneratorShape> {
        let p = f.p();
        let pres = f.presentation();
        let mut out = Vec::new();
        for c in (0..pres.class_count()).filter(|&c| c != pres.basepoint() && pres.degree(c) <= max_degree) {
            let budget = max_degree - pres.degree(c);
            for len in 0..=budget as usize {
                for word in enumerate_admissible(p, len, budget) {
                    let Ok(j) = admissible_to_allowable(p, &word) else { continue };
                    if j.meets_generator_condition(p, pres.degree(c)) {
                        let weight = (p.value() as u64).pow(len as u32);
                        out.push(GeneratorShape { degree: j.degree(p) + pres.degree(c), weight });
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl Check for FreeHomology {
    fn name(&self) -> &'static str {
        "free-homology"
    }

    fn summary(&self) -> &'static str {
        "free E-infinity homology of S^0, S^1, S^2 and S^1 v S^2 counted from both sides of the bijection"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let mut report = CheckReport::new(self.name(), ctx);
        for dims in [&[0u32][..], &[1], &[2], &[1, 2]] {
            let Ok(f) = FreeAlgebra::new(Presentation::wedge_of_spheres(p, dims), ctx.algebra.clone()) else {
                report.expect(false, || format!("wedge of spheres {dims:?} rejected"));
                continue;
            };
            let bijected = Self::admissible_shapes(&f, ctx.max_degree);
            let mut direct: Vec<GeneratorShape> = f.generators(ctx.max_degree).iter().map(|g| g.shape(p)).collect();
            direct.sort();
            report.expect(direct == bijected, || format!("generator shapes differ for spheres {dims:?}"));
            let series = f.poincare_series(ctx.max_degree);
            report.expect(series == free_dims(p, &bijected, ctx.max_degree), || {
                format!("series differ for spheres {dims:?}")
            });
        }
        Ok(report)
    }
}

struct MixedAdem;

impl Check for MixedAdem {
    fn name(&self) -> &'static str {
        "mixed-adem"
    }

    fn summary(&self) -> &'static str {
        "r # (s o x) equals the signed sum of (r' # s) o (r'' # x) on length-one samples"
    }

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
        let p = ctx.p;
        let ring = Arc::new(Semiring::new(ctx.algebra.clone()));
        let sharp = Sharp::new(ring.clone(), SharpOptions::default())
            .map_err(|e| CheckError::Unsupported { name: "mixed-adem", reason: e.to_string() })?;
        let mut report = CheckReport::new(self.name(), ctx);
        let length_one = |max_degree: u32| -> Vec<(u32, String, SemiringElement)> {
            let mut out = Vec::new();
            for n in 1..=max_degree {
                for eps in 0..=u8::from(p.is_odd()) {
                    let e = Entry::new(eps, n);
                    if e.is_legitimate(p) && e.degree(p) <= max_degree {
                        if let Ok(x) = sharp.length_one(e) {
                            out.push((e.degree(p), e.to_string(), x));
                        }
                    }
                }
            }
            out.sort_by_key(|(d, name, _)| (*d, name.clone()));
            out
        };
        let gens = length_one(ctx.max_degree);
        let mut xs: Vec<(u32, String, SemiringElement)> = Vec::new();
        for n in [1, 2] {
            if let Ok(b) = ring.bracket(n) {
                xs.push((0, format!("[{n}]"), b));
            }
        }
        xs.extend(length_one(ctx.max_degree));
        for (dr, rn, r) in &gens {
            for (ds, sn, s) in &gens {
                for (dx, xn, x) in &xs {
                    if dr + ds + dx > ctx.max_degree {
                        continue;
                    }
                    let holds = sharp.verify_mixed_adem(r, s, x).is_ok_and(|rep| rep.holds());
                    report.expect(holds, || format!("r={rn} s={sn} x={xn}"));
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lists_and_finds_checks() {
        let r = Registry::standard();
        let names: Vec<_> = r.iter().map(|c| c.name()).collect();
        assert_eq!(names.len(), 9);
        assert!(names.contains(&"relations") && names.contains(&"mixed-adem"));
        let ctx = CheckContext::new(Prime::TWO, 4);
        assert!(matches!(r.run("nope", &ctx), Err(CheckError::Unknown { .. })));
    }

    #[test]
    fn small_runs_pass() {
        let r = Registry::standard();
        for p in [Prime::TWO, Prime::THREE] {
            let ctx = CheckContext::new(p, 6);
            for c in r.iter() {
                let report = c.run(&ctx).unwrap();
                assert!(report.passed(), "{} at p={p}: {report}", c.name());
                assert!(report.cases > 0 || c.name() == "e-quotient", "{} ran no cases at p={p}", c.name());
            }
        }
    }

    /// A check that always fails, to confirm reports carry failures through the registry.
    struct Broken;

    impl Check for Broken {
        fn name(&self) -> &'static str {
            "relations"
        }
        fn summary(&self) -> &'static str {
            "always fails"
        }
        fn run(&self, ctx: &CheckContext) -> Result<CheckReport, CheckError> {
            let mut report = CheckReport::new(self.name(), ctx);
            report.expect(false, || "forced".into());
            Ok(report)
        }
    }

    #[test]
    fn registration_replaces_by_name() {
        let mut r = Registry::standard();
        r.register(Box::new(Broken));
        let report = r.run("relations", &CheckContext::new(Prime::TWO, 2)).unwrap();
        assert!(!report.passed());
        assert_eq!(report.to_string(), "FAILED 1 of 1 cases\n  forced");
    }
}
