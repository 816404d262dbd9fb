//! Evaluation of parsed expressions in `𝓔`, in the semiring `⊕_k H_*(Σ_k)`, or in the
//! homology of a free E∞-space on a wedge of spheres.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use eops::algebra::{Algebra, AlgebraError, EElement, Ring};
use eops::cache::MemoCache;
use eops::free::{FreeAlgebra, FreeElement, FreeError, Presentation, RawClass, RawPresentation};
use eops::semiring::{Semiring, SemiringElement, SemiringError};
use eops::sharp::{Sharp, SharpError, SharpOptions};
use eops::{Prime, Scalar};
use thiserror::Error;

use crate::parse::Expr;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Sharp(#[from] SharpError),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error("{op} is not defined between {left} and {right}")]
    Mismatch { op: &'static str, left: &'static str, right: &'static str },
    #[error("[{0}] has no counterpart in the ring of operations; only [1] does")]
    BracketInOperations(u64),
    #[error("intermediate result of degree {degree} exceeds --max-degree {cap}")]
    DegreeCap { degree: u32, cap: u32 },
}

/// A value together with the structure it lives in. A bare bracket stays untyped until
/// it meets another value: `[1]` is the unit of `𝓔`, any `[n]` is a semiring class.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Bracket(u64),
    E(EElement),
    Semi(SemiringElement),
    Free(FreeElement),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Bracket(_) | Value::Semi(_) => "semiring",
            Value::E(_) => "operations",
            Value::Free(_) => "free",
        }
    }
}

/// Shared structures for one prime. The free algebra is built on the wedge of spheres
/// named by the `z[d]` symbols in play, with classes named `z[d]`.
pub struct Env {
    pub p: Prime,
    pub max_degree: u32,
    pub algebra: Arc<Algebra>,
    pub semiring: Arc<Semiring>,
    pub sharp_options: SharpOptions,
    sharp: OnceLock<Result<Sharp, SharpError>>,
    pub free: Option<FreeAlgebra>,
    pub cache: Option<MemoCache>,
}

impl Env {
    /// Seeds the rewrite blocks from `cache` when one is given; a broken cache only warns.
    pub fn new(p: Prime, max_degree: u32, sharp_options: SharpOptions, cache: Option<MemoCache>) -> Self {
        let algebra = Arc::new(Algebra::new(p));
        if let Some(c) = &cache {
            if let Err(e) = c.load_rewrites(&algebra) {
                eprintln!("warning: {e}");
            }
        }
        let semiring = Arc::new(Semiring::new(algebra.clone()));
        Env { p, max_degree, algebra, semiring, sharp_options, sharp: OnceLock::new(), free: None, cache }
    }

    /// Writes the memo tables back to the cache, if any.
    pub fn persist(&self) {
        let Some(c) = &self.cache else { return };
        let mut result = c.save_rewrites(&self.algebra).map(|_| ());
        if let (Ok(()), Some(s)) = (&result, self.sharp_if_built()) {
            result = c.save_sharp(s).map(|_| ());
        }
        if let Err(e) = result {
            eprintln!("warning: {e}");
        }
    }

    pub fn with_spheres(mut self, dims: &[u32]) -> Result<Self, EvalError> {
        if !dims.is_empty() {
            let pres = sphere_presentation(self.p, dims);
            self.free = Some(FreeAlgebra::new(pres, self.algebra.clone())?);
        }
        Ok(self)
    }

    pub fn sharp(&self) -> Result<&Sharp, EvalError> {
        let build = || {
            let s = Sharp::new(self.semiring.clone(), self.sharp_options)?;
            if let Some(c) = &self.cache {
                if let Err(e) = c.load_sharp(&s) {
                    eprintln!("warning: {e}");
                }
            }
            Ok(s)
        };
        match self.sharp.get_or_init(build) {
            Ok(s) => Ok(s),
            Err(e) => Err(EvalError::Sharp(e.clone())),
        }
    }

    /// The ♯ engine if one was built during this run.
    pub fn sharp_if_built(&self) -> Option<&Sharp> {
        self.sharp.get().and_then(|r| r.as_ref().ok())
    }

    fn free(&self) -> &FreeAlgebra {
        self.free.as_ref().expect("free classes imply a free algebra")
    }

    pub fn eval(&self, expr: &Expr) -> Result<Value, EvalError> {
        let p = self.p;
        let v = match expr {
            Expr::Int(n) => Value::Scalar(p.scalar(*n as i64)),
            Expr::Gen(e) => Value::E(self.algebra.generator(Ring::E, e.bockstein, e.index)?),
            Expr::Bracket(n) => Value::Bracket(*n),
            Expr::Class(d) => {
                let f = self.free();
                let c = f.presentation().class_by_name(&class_name(*d)).expect("class registered");
                Value::Free(f.class_element(c))
            }
            Expr::Neg(a) => self.scale(self.eval(a)?, p.scalar(-1)),
            Expr::Sum(a, b) => self.add(self.eval(a)?, self.eval(b)?)?,
            Expr::Dot(a, b) => self.dot(self.eval(a)?, self.eval(b)?)?,
            Expr::Circ(a, b) => self.circ(self.eval(a)?, self.eval(b)?)?,
            Expr::Sharp(a, b) => self.sharp_values(self.eval(a)?, self.eval(b)?)?,
            Expr::Pow(a, n) => {
                let base = self.eval(a)?;
                let mut acc = Value::Scalar(Scalar::ONE);
                for _ in 0..*n {
                    acc = self.dot(acc, base.clone())?;
                }
                acc
            }
        };
        self.check_degree(&v)?;
        Ok(v)
    }

    fn check_degree(&self, v: &Value) -> Result<(), EvalError> {
        let p = self.p;
        let degree = match v {
            Value::Scalar(_) | Value::Bracket(_) => 0,
            Value::E(x) => x.terms().keys().map(|k| k.degree(p)).max().unwrap_or(0),
            Value::Semi(x) => x.keys().map(|m| m.degree(p)).max().unwrap_or(0),
            Value::Free(x) => x.keys().map(|m| m.degree(p)).max().unwrap_or(0),
        };
        if degree > self.max_degree {
            return Err(EvalError::DegreeCap { degree, cap: self.max_degree });
        }
        Ok(())
    }

    fn scale(&self, v: Value, c: Scalar) -> Value {
        match v {
            Value::Scalar(a) => Value::Scalar(self.p.mul(a, c)),
            // [1] is also the unit of the operations, which keeps `c*[1]` usable on both sides
            Value::Bracket(1) => Value::E(self.algebra.unit(Ring::E).scaled(c)),
            Value::Bracket(n) => Value::Semi(self.bracket(n).scaled(c)),
            Value::E(x) => Value::E(x.scaled(c)),
            Value::Semi(x) => Value::Semi(x.scaled(c)),
            Value::Free(x) => Value::Free(x.scaled(c)),
        }
    }

    fn bracket(&self, n: u64) -> SemiringElement {
        self.semiring.bracket(n as i64).expect("brackets are nonnegative")
    }

    /// Coerces to the semiring; scalars become multiples of `1`.
    pub fn to_semiring(&self, v: &Value) -> Result<SemiringElement, EvalError> {
        match v {
            Value::Scalar(c) => Ok(self.semiring.one().scaled(*c)),
            Value::Bracket(n) => Ok(self.bracket(*n)),
            Value::E(x) => Ok(self.semiring.inject_e(x)?),
            Value::Semi(x) => Ok(x.clone()),
            Value::Free(_) => Err(EvalError::Mismatch { op: "coercion", left: "free", right: "semiring" }),
        }
    }

    /// Coerces to `𝓔`; scalars become multiples of the unit `[1]`.
    fn to_e(&self, v: &Value) -> Result<EElement, EvalError> {
        match v {
            Value::Scalar(c) => Ok(self.algebra.unit(Ring::E).scaled(*c)),
            Value::Bracket(1) => Ok(self.algebra.unit(Ring::E)),
            Value::Bracket(n) => Err(EvalError::BracketInOperations(*n)),
            Value::E(x) => Ok(x.clone()),
            Value::Semi(_) | Value::Free(_) => {
                Err(EvalError::Mismatch { op: "coercion", left: v.kind(), right: "operations" })
            }
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value, EvalError> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(self.p.add(x, y)),
            (Free(x), Free(y)) => Free(x.plus(&y)),
            (Free(x), Scalar(c)) | (Scalar(c), Free(x)) => Free(x.plus(&self.free().one().scaled(c))),
            (Free(_), other) | (other, Free(_)) => {
                return Err(EvalError::Mismatch { op: "+", left: "free", right: other.kind() })
            }
            (a @ (E(_) | Scalar(_) | Bracket(1)), b @ (E(_) | Scalar(_) | Bracket(1))) => {
                E(self.to_e(&a)?.plus(&self.to_e(&b)?))
            }
            (a, b) => Semi(self.to_semiring(&a)?.plus(&self.to_semiring(&b)?)),
        })
    }

    fn dot(&self, a: Value, b: Value) -> Result<Value, EvalError> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(c), v) | (v, Scalar(c)) => self.scale(v, c),
            (Free(x), Free(y)) => Free(self.free().mul(&x, &y)),
            (Free(_), other) | (other, Free(_)) => {
                return Err(EvalError::Mismatch { op: "*", left: other.kind(), right: "free" })
            }
            (Bracket(m), Bracket(n)) => Bracket(m + n),
            (a, b) => Semi(self.semiring.dot(&self.to_semiring(&a)?, &self.to_semiring(&b)?)),
        })
    }

    fn circ(&self, a: Value, b: Value) -> Result<Value, EvalError> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(c), v) | (v, Scalar(c)) => self.scale(v, c),
            (Free(_), other) => return Err(EvalError::Mismatch { op: "o", left: "free", right: other.kind() }),
            (E(r), Free(x)) => Free(self.free().act_e(&r, &x)?),
            (Bracket(1), Free(x)) => Free(x),
            (r, Free(x)) => Free(self.free().semiring_act(&self.to_semiring(&r)?, &x)?),
            (Bracket(m), Bracket(n)) => Bracket(m * n),
            (a @ (E(_) | Bracket(1)), b @ (E(_) | Bracket(1))) => {
                E(self.algebra.circ(&self.to_e(&a)?, &self.to_e(&b)?)?)
            }
            (a, b) => Semi(self.semiring.circ(&self.to_semiring(&a)?, &self.to_semiring(&b)?)?),
        })
    }

    fn sharp_values(&self, a: Value, b: Value) -> Result<Value, EvalError> {
        use Value::*;
        Ok(match (a, b) {
            (Scalar(c), v) | (v, Scalar(c)) => self.scale(v, c),
            (Free(_), other) | (other, Free(_)) => {
                return Err(EvalError::Mismatch { op: "#", left: other.kind(), right: "free" })
            }
            (a, b) => Semi(self.sharp()?.sharp(&self.to_semiring(&a)?, &self.to_semiring(&b)?)?),
        })
    }
}

pub fn class_name(d: u32) -> String {
    format!("z[{d}]")
}

/// `S^{d_1} ∨ ... ∨ S^{d_k}` with the sphere classes named `z[d]`.
pub fn sphere_presentation(p: Prime, dims: &[u32]) -> Presentation {
    let mut classes = vec![RawClass { name: "*".into(), degree: 0 }];
    classes.extend(dims.iter().map(|&d| RawClass { name: class_name(d), degree: d }));
    let pi0 = classes.iter().filter(|c| c.degree == 0).map(|c| c.name.clone()).collect();
    let raw = RawPresentation {
        p: p.value(),
        classes,
        basepoint: "*".into(),
        bockstein: BTreeMap::new(),
        steenrod: BTreeMap::new(),
        coproduct: BTreeMap::new(),
        pi0,
    };
    Presentation::from_raw(&raw).expect("a wedge of distinct spheres is a valid presentation")
}
