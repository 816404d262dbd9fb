//! Reduction tables per (length, degree, Bockstein degree) block.
//!
//! A block's relation space is spanned by coefficient instances of the defining
//! identities (length 2) or by `(q - NF(q)) ∘ u` for non-basis pairs `q` and monomials `u`
//! (longer lengths). Eliminating with non-basis columns first expresses every non-basis
//! monomial in the basis.

use std::collections::HashMap;

use crate::lin::Lin;
use crate::linalg::Matrix;
use crate::sequence::Sequence;

use super::monomial::monomials;
use super::relations::free_mul;
use super::{is_basis, Algebra, AlgebraError, BlockKey, EElement, Ring};

#[derive(Debug, Default)]
pub(crate) struct Block {
    reductions: HashMap<Sequence, Lin<Sequence>>,
}

impl Block {
    pub(crate) fn from_reductions(reductions: HashMap<Sequence, Lin<Sequence>>) -> Self {
        Block { reductions }
    }

    pub(crate) fn reductions(&self) -> &HashMap<Sequence, Lin<Sequence>> {
        &self.reductions
    }

    pub(crate) fn reduce(&self, key: &Sequence) -> Option<&Lin<Sequence>> {
        self.reductions.get(key)
    }
}

pub(crate) fn build_block(alg: &Algebra, key: BlockKey) -> Result<Block, AlgebraError> {
    let p = alg.p;
    let BlockKey { length, degree, bockstein } = key;
    let columns = monomials(p, length, degree, bockstein);
    let (non_basis, basis): (Vec<Sequence>, Vec<Sequence>) =
        columns.into_iter().partition(|k| !is_basis(p, Ring::Ehat, k));
    if non_basis.is_empty() {
        return Ok(Block::default());
    }
    let ordered: Vec<Sequence> = non_basis.iter().chain(basis.iter()).cloned().collect();
    let position: HashMap<&Sequence, usize> = ordered.iter().enumerate().map(|(i, k)| (k, i)).collect();

    let rows = if length == 2 { alg.relations.pair_rows(p, degree, bockstein) } else { ideal_rows(alg, key)? };

    let mut m = Matrix::zeros(p, rows.len(), ordered.len());
    for (r, row) in rows.iter().enumerate() {
        for (k, c) in row.iter() {
            let col = *position.get(k).expect("relation rows stay inside their block");
            m.set(r, col, c);
        }
    }
    let pivots = m.rref();
    let describe = |k: &Sequence| k.to_string();
    let mut reductions = HashMap::new();
    let mut pivot_iter = pivots.iter().enumerate().peekable();
    for (c, key_c) in non_basis.iter().enumerate() {
        match pivot_iter.peek() {
            Some(&(_, &pc)) if pc == c => {}
            _ => return Err(AlgebraError::IncompleteRewrite { length, degree, bockstein, monomial: describe(key_c) }),
        }
        let (r, _) = pivot_iter.next().expect("peeked");
        let mut image = Lin::zero(p);
        for (b, key_b) in basis.iter().enumerate() {
            let v = m.get(r, non_basis.len() + b);
            image.add_term(key_b.clone(), p.neg(v));
        }
        reductions.insert(key_c.clone(), image);
    }
    if let Some((_, &pc)) = pivot_iter.next() {
        return Err(AlgebraError::BasisDependent { length, degree, bockstein, monomial: describe(&ordered[pc]) });
    }
    Ok(Block { reductions })
}

/// Spanning set of the relation ideal in a block of length at least 3.
fn ideal_rows(alg: &Algebra, key: BlockKey) -> Result<Vec<Lin<Sequence>>, AlgebraError> {
    let p = alg.p;
    let mut rows = Vec::new();
    let rest = key.length - 2;
    for d2 in 0..=key.degree {
        for b2 in 0..=key.bockstein.min(2) {
            let pairs: Vec<Sequence> =
                monomials(p, 2, d2, b2).into_iter().filter(|q| !is_basis(p, Ring::Ehat, q)).collect();
            if pairs.is_empty() {
                continue;
            }
            let cofactors = monomials(p, rest, key.degree - d2, key.bockstein - b2);
            if cofactors.is_empty() {
                continue;
            }
            for q in pairs {
                let q_elt = EElement::monomial(p, Ring::Ehat, q.clone());
                let relation = q_elt.minus(&alg.normal_form(&q_elt)?).into_terms();
                for u in &cofactors {
                    let row = free_mul(&relation, &Lin::basis(p, u.clone()), p);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    Ok(rows)
}
