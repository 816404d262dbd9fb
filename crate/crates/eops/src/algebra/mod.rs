//! The coinvariant ring `Ê` and its quotient `𝓔`: elements in the allowable basis,
//! the ∘-product, and the bialgebra and Steenrod structure.

mod element;
pub mod monomial;
mod normal;
mod relations;
mod structure;

pub use element::{EElement, ETensor, Ring};
pub use relations::{Identity, RelationMismatch, RelationReport, RelationSet};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::arith::Prime;
use crate::lin::Lin;
use crate::sequence::{enumerate_allowable, Condition, Sequence, SequenceError};

use normal::Block;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("relations leave {monomial} unreduced in length {length}, degree {degree}, Bockstein degree {bockstein}")]
    IncompleteRewrite { length: usize, degree: u32, bockstein: u32, monomial: String },
    #[error("relations make basis element {monomial} dependent in length {length}, degree {degree}, Bockstein degree {bockstein}")]
    BasisDependent { length: usize, degree: u32, bockstein: u32, monomial: String },
    #[error("operands live over different primes or rings")]
    Mismatch,
}

/// `(length, degree, Bockstein degree)` of a reduction block.
pub type BlockId = (usize, u32, u32);

/// Reductions of one block: each non-basis sequence with its basis expansion.
pub type BlockRows = Vec<(Sequence, Lin<Sequence>)>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
struct BlockKey {
    length: usize,
    degree: u32,
    bockstein: u32,
}

/// The rewriting engine for one prime. Reduction tables are built per
/// (length, degree, Bockstein degree) block on first use and shared afterwards.
pub struct Algebra {
    p: Prime,
    relations: RelationSet,
    blocks: RwLock<HashMap<BlockKey, Arc<Block>>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra").field("p", &self.p).field("relations", &self.relations).finish()
    }
}

impl Algebra {
    pub fn new(p: Prime) -> Self {
        Self::with_relations(p, RelationSet::all(p))
    }

    pub fn with_relations(p: Prime, relations: RelationSet) -> Self {
        Algebra { p, relations, blocks: RwLock::new(HashMap::new()) }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn generator(&self, ring: Ring, bockstein: u8, index: u32) -> Result<EElement, AlgebraError> {
        EElement::generator(self.p, ring, bockstein, index)
    }

    pub fn unit(&self, ring: Ring) -> EElement {
        EElement::unit(self.p, ring)
    }

    /// Whether a sorted monomial is a basis element of `ring`.
    pub fn is_basis(&self, ring: Ring, key: &Sequence) -> bool {
        is_basis(self.p, ring, key)
    }

    pub fn basis(&self, ring: Ring, length: usize, max_degree: u32) -> Vec<Sequence> {
        enumerate_allowable(self.p, length, max_degree, ring.condition())
    }

    pub fn normal_form(&self, x: &EElement) -> Result<EElement, AlgebraError> {
        if x.p() != self.p {
            return Err(AlgebraError::Mismatch);
        }
        let mut out = EElement::zero(self.p, x.ring());
        for (key, c) in x.terms().iter() {
            if is_basis(self.p, Ring::Ehat, key) {
                out.add_term(key.clone(), c);
                continue;
            }
            let block = self.block(key.len(), key.degree(self.p), key.bockstein_degree())?;
            let image = block.reduce(key).expect("non-basis monomials of a block are reduced");
            for (k, v) in image.iter() {
                out.add_term(k.clone(), self.p.mul(c, v));
            }
        }
        if x.ring() == Ring::E {
            out.retain(|key| is_basis(self.p, Ring::E, key));
        }
        Ok(out)
    }

    /// The ∘-product, in normal form. Ring tags must agree.
    pub fn circ(&self, a: &EElement, b: &EElement) -> Result<EElement, AlgebraError> {
        if a.ring() != b.ring() || a.p() != self.p || b.p() != self.p {
            return Err(AlgebraError::Mismatch);
        }
        self.normal_form(&a.free_product(b))
    }

    fn block(&self, length: usize, degree: u32, bockstein: u32) -> Result<Arc<Block>, AlgebraError> {
        let key = BlockKey { length, degree, bockstein };
        if let Some(b) = self.blocks.read().expect("block cache poisoned").get(&key) {
            return Ok(b.clone());
        }
        let built = Arc::new(normal::build_block(self, key)?);
        // Concurrent builders produce identical tables, so the first insert wins harmlessly.
        let mut guard = self.blocks.write().expect("block cache poisoned");
        Ok(guard.entry(key).or_insert(built).clone())
    }

    /// Number of cached reduction blocks; used by persistence and diagnostics.
    pub fn cached_blocks(&self) -> usize {
        self.blocks.read().expect("block cache poisoned").len()
    }

    /// Every cached block as `((length, degree, Bockstein degree), reductions)`, sorted by key.
    pub fn export_blocks(&self) -> Vec<(BlockId, BlockRows)> {
        let guard = self.blocks.read().expect("block cache poisoned");
        let mut out: Vec<_> = guard
            .iter()
            .map(|(k, b)| {
                let mut rows: Vec<_> = b.reductions().iter().map(|(s, l)| (s.clone(), l.clone())).collect();
                rows.sort_by(|x, y| x.0.cmp(&y.0));
                ((k.length, k.degree, k.bockstein), rows)
            })
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Seeds one block from persisted reductions. Each key must be a non-basis monomial
    /// of the block and each image a combination of basis monomials of the same block;
    /// anything else is rejected and nothing is inserted.
    pub fn import_block(&self, id: BlockId, rows: Vec<(Sequence, Lin<Sequence>)>) -> bool {
        let (length, degree, bockstein) = id;
        let p = self.p;
        let fits = |k: &Sequence| {
            k.len() == length && k.degree(p) == degree && k.bockstein_degree() == bockstein && k.validate(p).is_ok()
        };
        let ok = rows.iter().all(|(k, image)| {
            fits(k) && !is_basis(p, Ring::Ehat, k) && image.keys().all(|b| fits(b) && is_basis(p, Ring::Ehat, b))
        });
        if ok {
            let block = Arc::new(Block::from_reductions(rows.into_iter().collect()));
            self.blocks
                .write()
                .expect("block cache poisoned")
                .entry(BlockKey { length, degree, bockstein })
                .or_insert(block);
        }
        ok
    }

    /// The length-2 reduction table: every non-basis length-2 monomial of degree at most
    /// `max_degree` with its normal form.
    pub fn pair_table(&self, max_degree: u32) -> Result<Vec<(Sequence, EElement)>, AlgebraError> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for beta in 0..=2 {
                for key in monomial::monomials(self.p, 2, d, beta) {
                    if !is_basis(self.p, Ring::Ehat, &key) {
                        let nf = self.normal_form(&EElement::monomial(self.p, Ring::Ehat, key.clone()))?;
                        out.push((key, nf));
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn is_basis(p: Prime, ring: Ring, key: &Sequence) -> bool {
    key.satisfies(p, ring.condition()) && key.is_allowable(p) && key.satisfies(p, Condition::EhatBasis)
}
