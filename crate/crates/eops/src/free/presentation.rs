//! The homology coalgebra of a pointed space, as loaded from JSON.
//!
//! Omitted tables mean the trivial Steenrod and Bockstein action, primitive
//! positive-degree classes and grouplike degree-0 classes.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Prime, Scalar};
use crate::lin::Lin;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("malformed presentation: {0}")]
    Json(String),
    #[error(transparent)]
    Prime(#[from] ArithError),
    #[error("class {0} is declared twice")]
    DuplicateClass(String),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error("basepoint {0} must have degree 0")]
    BasepointDegree(String),
    #[error("{table} entry for {class} has a term {term} of degree {found}, expected {expected}")]
    DegreeMismatch { table: &'static str, class: String, term: String, found: i64, expected: i64 },
    #[error("Steenrod table for {class} uses operation index {k}; indices start at 1")]
    ZeroSteenrod { class: String, k: u32 },
    #[error("a Bockstein table is given at p = 2")]
    BocksteinAtTwo,
    #[error("the Bockstein table does not square to zero on {0}")]
    BocksteinSquare(String),
    #[error("pi0 entry {0} is not a degree-0 class")]
    Pi0Degree(String),
}

/// A class name with coefficients, e.g. `{"x": 1, "y": -1}`.
pub type RawElement = BTreeMap<String, i64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawClass {
    pub name: String,
    pub degree: u32,
}

/// The on-disk format. Steenrod keys are `name → k → element`; coproduct entries are
/// `[coefficient, left, right]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPresentation {
    pub p: u32,
    pub classes: Vec<RawClass>,
    pub basepoint: String,
    #[serde(default)]
    pub bockstein: BTreeMap<String, RawElement>,
    #[serde(default)]
    pub steenrod: BTreeMap<String, BTreeMap<u32, RawElement>>,
    #[serde(default)]
    pub coproduct: BTreeMap<String, Vec<(i64, String, String)>>,
    #[serde(default)]
    pub pi0: Vec<String>,
}

/// Index of a class of `H_*(Z)` in its presentation.
pub type ClassId = usize;

pub type ClassElement = Lin<ClassId>;

#[derive(Debug, Clone)]
pub struct Presentation {
    p: Prime,
    names: Vec<String>,
    degrees: Vec<u32>,
    basepoint: ClassId,
    bockstein: HashMap<ClassId, ClassElement>,
    steenrod: HashMap<(u32, ClassId), ClassElement>,
    coproduct: HashMap<ClassId, Lin<(ClassId, ClassId)>>,
    pi0: Vec<ClassId>,
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        let raw: RawPresentation = serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawPresentation) -> Result<Self, PresentationError> {
        let p = Prime::new(raw.p)?;
        let mut index = HashMap::new();
        for (i, c) in raw.classes.iter().enumerate() {
            if index.insert(c.name.clone(), i).is_some() {
                return Err(PresentationError::DuplicateClass(c.name.clone()));
            }
        }
        let lookup =
            |name: &str| index.get(name).copied().ok_or_else(|| PresentationError::UnknownClass(name.to_string()));
        let basepoint = lookup(&raw.basepoint)?;
        let degrees: Vec<u32> = raw.classes.iter().map(|c| c.degree).collect();
        if degrees[basepoint] != 0 {
            return Err(PresentationError::BasepointDegree(raw.basepoint.clone()));
        }
        let names: Vec<String> = raw.classes.iter().map(|c| c.name.clone()).collect();
        let element = |table: &'static str, class: &str, e: &RawElement, expected: i64| {
            let mut out = Lin::zero(p);
            for (name, &c) in e {
                let id = lookup(name)?;
                if degrees[id] as i64 != expected {
                    return Err(PresentationError::DegreeMismatch {
                        table,
                        class: class.to_string(),
                        term: name.clone(),
                        found: degrees[id] as i64,
                        expected,
                    });
                }
                out.add_term(id, p.scalar(c));
            }
            Ok(out)
        };

        if !p.is_odd() && !raw.bockstein.is_empty() {
            return Err(PresentationError::BocksteinAtTwo);
        }
        let mut bockstein = HashMap::new();
        for (name, e) in &raw.bockstein {
            let id = lookup(name)?;
            let v = element("bockstein", name, e, degrees[id] as i64 - 1)?;
            if !v.is_empty() {
                bockstein.insert(id, v);
            }
        }
        let mut steenrod = HashMap::new();
        for (name, by_k) in &raw.steenrod {
            let id = lookup(name)?;
            for (&k, e) in by_k {
                if k == 0 {
                    return Err(PresentationError::ZeroSteenrod { class: name.clone(), k });
                }
                let v = element("steenrod", name, e, degrees[id] as i64 - steenrod_shift(p, k) as i64)?;
                if !v.is_empty() {
                    steenrod.insert((k, id), v);
                }
            }
        }
        let mut coproduct = HashMap::new();
        for (name, terms) in &raw.coproduct {
            let id = lookup(name)?;
            let mut v = Lin::zero(p);
            for (c, l, r) in terms {
                let (a, b) = (lookup(l)?, lookup(r)?);
                let found = (degrees[a] + degrees[b]) as i64;
                if found != degrees[id] as i64 {
                    return Err(PresentationError::DegreeMismatch {
                        table: "coproduct",
                        class: name.clone(),
                        term: format!("{l}⊗{r}"),
                        found,
                        expected: degrees[id] as i64,
                    });
                }
                v.add_term((a, b), p.scalar(*c));
            }
            coproduct.insert(id, v);
        }
        let mut pi0 = Vec::new();
        for name in &raw.pi0 {
            let id = lookup(name)?;
            if degrees[id] != 0 {
                return Err(PresentationError::Pi0Degree(name.clone()));
            }
            pi0.push(id);
        }
        pi0.sort_unstable();
        pi0.dedup();

        let out = Presentation { p, names, degrees, basepoint, bockstein, steenrod, coproduct, pi0 };
        for c in 0..out.class_count() {
            let bb = out.bockstein_of(&out.bockstein(c));
            if !bb.is_empty() {
                return Err(PresentationError::BocksteinSquare(out.names[c].clone()));
            }
        }
        Ok(out)
    }

    /// A wedge of spheres `S^{d_1} ∨ ... ∨ S^{d_k}` with trivial operations. Degree-0
    /// entries add points, so `&[0]` is `S^0` and `&[]` is the basepoint alone.
    pub fn wedge_of_spheres(p: Prime, dims: &[u32]) -> Self {
        let mut classes = vec![RawClass { name: "z0".into(), degree: 0 }];
        for (i, &d) in dims.iter().enumerate() {
            classes.push(RawClass { name: format!("s{}_{d}", i + 1), degree: d });
        }
        let pi0 = classes.iter().filter(|c| c.degree == 0).map(|c| c.name.clone()).collect();
        let raw = RawPresentation {
            p: p.value(),
            classes,
            basepoint: "z0".into(),
            bockstein: BTreeMap::new(),
            steenrod: BTreeMap::new(),
            coproduct: BTreeMap::new(),
            pi0,
        };
        Self::from_raw(&raw).expect("wedge of spheres is a valid presentation")
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn class_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, c: ClassId) -> &str {
        &self.names[c]
    }

    pub fn degree(&self, c: ClassId) -> u32 {
        self.degrees[c]
    }

    pub fn basepoint(&self) -> ClassId {
        self.basepoint
    }

    pub fn class_by_name(&self, name: &str) -> Option<ClassId> {
        self.names.iter().position(|n| n == name)
    }

    /// Classes of `π_0(Z)` other than the basepoint.
    pub fn units(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.pi0.iter().copied().filter(|&c| c != self.basepoint)
    }

    pub fn is_unit(&self, c: ClassId) -> bool {
        c != self.basepoint && self.pi0.contains(&c)
    }

    /// `P^k_*` of a class; `P^0_*` is the identity.
    pub fn steenrod(&self, k: u32, c: ClassId) -> ClassElement {
        if k == 0 {
            return Lin::basis(self.p, c);
        }
        self.steenrod.get(&(k, c)).cloned().unwrap_or_else(|| Lin::zero(self.p))
    }

    pub fn bockstein(&self, c: ClassId) -> ClassElement {
        self.bockstein.get(&c).cloned().unwrap_or_else(|| Lin::zero(self.p))
    }

    fn bockstein_of(&self, x: &ClassElement) -> ClassElement {
        let mut out = Lin::zero(self.p);
        for (&c, v) in x.iter() {
            out.add_scaled(&self.bockstein(c), v);
        }
        out
    }

    pub fn coproduct(&self, c: ClassId) -> Lin<(ClassId, ClassId)> {
        if let Some(v) = self.coproduct.get(&c) {
            return v.clone();
        }
        let mut out = Lin::zero(self.p);
        if self.degrees[c] == 0 {
            out.add_term((c, c), Scalar::ONE);
        } else {
            out.add_term((c, self.basepoint), Scalar::ONE);
            out.add_term((self.basepoint, c), Scalar::ONE);
        }
        out
    }

    /// Every degree-0 class is the class of a point.
    pub fn counit(&self, c: ClassId) -> Scalar {
        if self.degrees[c] == 0 {
            Scalar::ONE
        } else {
            Scalar::ZERO
        }
    }

    pub fn to_raw(&self) -> RawPresentation {
        let element = |x: &ClassElement| -> RawElement {
            x.iter().map(|(&c, v)| (self.names[c].clone(), v.value() as i64)).collect()
        };
        let mut steenrod: BTreeMap<String, BTreeMap<u32, RawElement>> = BTreeMap::new();
        for (&(k, c), v) in &self.steenrod {
            steenrod.entry(self.names[c].clone()).or_default().insert(k, element(v));
        }
        RawPresentation {
            p: self.p.value(),
            classes: self
                .names
                .iter()
                .zip(&self.degrees)
                .map(|(n, &d)| RawClass { name: n.clone(), degree: d })
                .collect(),
            basepoint: self.names[self.basepoint].clone(),
            bockstein: self.bockstein.iter().map(|(&c, v)| (self.names[c].clone(), element(v))).collect(),
            steenrod,
            coproduct: self
                .coproduct
                .iter()
                .map(|(&c, v)| {
                    let terms =
                        v.iter().map(|(&(a, b), s)| (s.value() as i64, self.names[a].clone(), self.names[b].clone()));
                    (self.names[c].clone(), terms.collect())
                })
                .collect(),
            pi0: self.pi0.iter().map(|&c| self.names[c].clone()).collect(),
        }
    }
}

/// Degree lowered by `P^k_*`.
pub fn steenrod_shift(p: Prime, k: u32) -> u32 {
    if p.is_odd() {
        2 * k * (p.value() - 1)
    } else {
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = r#"{
            "p": 3,
            "classes": [{"name": "z0", "degree": 0}, {"name": "a", "degree": 3}, {"name": "b", "degree": 4}],
            "basepoint": "z0",
            "bockstein": {"b": {"a": 1}},
            "pi0": ["z0"]
        }"#;
        let pres = Presentation::from_json(text).unwrap();
        assert_eq!(pres.class_count(), 3);
        let a = pres.class_by_name("a").unwrap();
        let b = pres.class_by_name("b").unwrap();
        assert_eq!(pres.bockstein(b), Lin::basis(pres.p(), a));
        assert_eq!(pres.coproduct(a).len(), 2);
        let again = Presentation::from_raw(&pres.to_raw()).unwrap();
        assert_eq!(again.bockstein(b), pres.bockstein(b));
    }

    #[test]
    fn rejects_bad_input() {
        let bad_degree = r#"{"p": 3, "classes": [{"name": "z0", "degree": 0}, {"name": "a", "degree": 3}],
            "basepoint": "z0", "bockstein": {"a": {"z0": 1}}}"#;
        assert!(matches!(Presentation::from_json(bad_degree), Err(PresentationError::DegreeMismatch { .. })));
        let bad_base = r#"{"p": 2, "classes": [{"name": "z0", "degree": 1}], "basepoint": "z0"}"#;
        assert!(matches!(Presentation::from_json(bad_base), Err(PresentationError::BasepointDegree(_))));
        let unknown = r#"{"p": 2, "classes": [{"name": "z0", "degree": 0}], "basepoint": "q"}"#;
        assert!(matches!(Presentation::from_json(unknown), Err(PresentationError::UnknownClass(_))));
        let prime = r#"{"p": 4, "classes": [{"name": "z0", "degree": 0}], "basepoint": "z0"}"#;
        assert!(matches!(Presentation::from_json(prime), Err(PresentationError::Prime(_))));
    }

    #[test]
    fn sphere_defaults() {
        let p = Prime::new(2).unwrap();
        let s = Presentation::wedge_of_spheres(p, &[0]);
        let z = s.class_by_name("s1_0").unwrap();
        assert!(s.is_unit(z));
        assert_eq!(s.coproduct(z), Lin::basis(p, (z, z)));
    }
}
