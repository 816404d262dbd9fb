//! Canonical text and JSON forms of results. Element text re-parses to the same element.

use eops::free::{display_element, FreeAlgebra};
use eops::poly::Mono;
use eops::semiring::{display_mono, display_terms, mono_weight};
use eops::{Lin, Scalar};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::eval::{Env, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub coeff: u32,
    pub monomial: String,
    pub degree: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorTerm {
    pub coeff: u32,
    pub left: String,
    pub right: String,
    pub degree: u32,
}

fn coefficient_prefix(c: Scalar) -> String {
    if c == Scalar::ONE {
        String::new()
    } else {
        format!("{}*", c.value())
    }
}

fn free_mono(f: &FreeAlgebra, m: &Mono<eops::free::FreeGen>) -> String {
    display_element(&Lin::basis(f.p(), m.clone()), f.presentation())
}

/// Text and per-term breakdown of a value.
pub fn element(env: &Env, v: &Value) -> (String, Vec<Term>) {
    let p = env.p;
    match v {
        Value::Scalar(c) if c.is_zero() => ("0".into(), Vec::new()),
        Value::Scalar(c) => (c.value().to_string(), vec![Term { coeff: c.value(), monomial: "1".into(), degree: 0 }]),
        Value::Bracket(n) => (format!("[{n}]"), vec![Term { coeff: 1, monomial: format!("[{n}]"), degree: 0 }]),
        Value::E(x) => {
            let terms = x
                .terms()
                .iter()
                .map(|(k, c)| Term { coeff: c.value(), monomial: k.to_string(), degree: k.degree(p) })
                .collect();
            (x.to_string(), terms)
        }
        Value::Semi(x) => {
            let mut monos: Vec<_> = x.iter().collect();
            monos.sort_by_key(|(m, _)| (mono_weight(m, p).unwrap_or(u64::MAX), m.degree(p), (*m).clone()));
            let terms = monos
                .iter()
                .map(|(m, c)| Term { coeff: c.value(), monomial: display_mono(m), degree: m.degree(p) })
                .collect();
            (display_terms(x, p), terms)
        }
        Value::Free(x) => {
            let f = env.free.as_ref().expect("free values come with a free algebra");
            let mut terms: Vec<Term> = x
                .iter()
                .map(|(m, c)| Term { coeff: c.value(), monomial: free_mono(f, m), degree: m.degree(p) })
                .collect();
            terms.sort_by(|a, b| (a.degree, &a.monomial).cmp(&(b.degree, &b.monomial)));
            (display_element(x, f.presentation()), terms)
        }
    }
}

pub fn element_json(env: &Env, v: &Value) -> Json {
    let (text, terms) = element(env, v);
    json!({ "p": env.p.value(), "kind": v.kind(), "text": text, "terms": terms })
}

pub fn tensor_text(terms: &[TensorTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|t| format!("{}({}) ⊗ ({})", coefficient_prefix(Scalar::from_u32(t.coeff)), t.left, t.right))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn tensor_terms<K: Ord>(
    x: &Lin<(K, K)>,
    show: impl Fn(&K) -> String,
    degree: impl Fn(&K) -> u32,
) -> Vec<TensorTerm> {
    let mut out: Vec<TensorTerm> = x
        .iter()
        .map(|((a, b), c)| TensorTerm {
            coeff: c.value(),
            left: show(a),
            right: show(b),
            degree: degree(a) + degree(b),
        })
        .collect();
    out.sort_by(|s, t| (s.degree, &s.left, &s.right).cmp(&(t.degree, &t.left, &t.right)));
    out
}

/// `text` for humans and the whole object for `--json`.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub json: Json,
}

impl Output {
    pub fn element(env: &Env, v: &Value) -> Self {
        Output { text: element(env, v).0, json: element_json(env, v) }
    }

    pub fn free_mono_text(env: &Env, m: &Mono<eops::free::FreeGen>) -> String {
        free_mono(env.free.as_ref().expect("free algebra present"), m)
    }
}
