//! Homology of free E∞-spaces `C̃Z` and `QZ`: a polynomial model on symbols
//! `E_J ∘ z_α`, normalized by the free-algebra relations, with the E-, Steenrod,
//! Bockstein and semiring actions.

mod presentation;
mod series;

pub use presentation::{
    steenrod_shift, ClassElement, ClassId, Presentation, PresentationError, RawClass, RawElement, RawPresentation,
};
pub use series::{free_dims, free_dims_by_weight, GeneratorShape};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, EElement, Ring};
use crate::arith::{Prime, Scalar};
use crate::dl::{DlError, OperationModule};
use crate::lin::Lin;
use crate::poly::{poly_mul, poly_pow, tensor_mul, tensor_of, Generator, Mono, Poly, Tensor};
use crate::semiring::{SemiMono, SemiringElement, SemiringError};
use crate::sequence::{enumerate_allowable, Condition, Entry, Sequence, SequenceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("presentation is over p = {presentation}, algebra over p = {algebra}")]
    PrimeMismatch { presentation: u32, algebra: u32 },
    #[error("the relations do not determine {0}")]
    Unsolved(String),
    #[error("the relations impose a relation among generators in the {0}")]
    Inconsistent(String),
}

/// A polynomial generator `E_J ∘ z_α`: `J` satisfies the generator condition for
/// `deg z_α` and `α` is not the basepoint.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeGen {
    degree: u32,
    seq: Sequence,
    class: ClassId,
}

impl FreeGen {
    pub fn sequence(&self) -> &Sequence {
        &self.seq
    }

    pub fn class(&self) -> ClassId {
        self.class
    }

    /// `p^{length of J}`: the symmetric-group component the generator comes from.
    pub fn weight(&self, p: Prime) -> u64 {
        (p.value() as u64).pow(self.seq.len() as u32)
    }

    pub fn shape(&self, p: Prime) -> GeneratorShape {
        GeneratorShape { degree: self.degree, weight: self.weight(p) }
    }
}

impl Generator for FreeGen {
    fn degree(&self, _p: Prime) -> u32 {
        self.degree
    }
}

impl fmt::Debug for FreeGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.seq.is_empty() {
            write!(f, "z{}", self.class)
        } else {
            write!(f, "({} o z{})", self.seq, self.class)
        }
    }
}

pub type FreeElement = Poly<FreeGen>;
pub type FreeTensor = Tensor<FreeGen>;

/// `𝓔 ⊗ H_*(Z)` before passing to the quotient ring; the left factor is an `𝓔` basis key.
type Symbols = Lin<(Sequence, ClassId)>;

/// The symbols `E_K ⊗ z` with fixed class, length and total degree; relations close up
/// inside a block modulo lower blocks.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
struct BlockId {
    class: ClassId,
    length: usize,
    degree: u32,
}

/// `H_*(C̃Z)` for a presented `Z`. Symbol normal forms are cached and shared.
pub struct FreeAlgebra {
    pres: Presentation,
    alg: Arc<Algebra>,
    symbols: RwLock<HashMap<(Sequence, ClassId), FreeElement>>,
}

impl fmt::Debug for FreeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeAlgebra").field("p", &self.p()).field("classes", &self.pres.class_count()).finish()
    }
}

impl FreeAlgebra {
    pub fn new(pres: Presentation, alg: Arc<Algebra>) -> Result<Self, FreeError> {
        if pres.p() != alg.p() {
            return Err(FreeError::PrimeMismatch { presentation: pres.p().value(), algebra: alg.p().value() });
        }
        Ok(FreeAlgebra { pres, alg, symbols: RwLock::new(HashMap::new()) })
    }

    pub fn p(&self) -> Prime {
        self.pres.p()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn zero(&self) -> FreeElement {
        Lin::zero(self.p())
    }

    pub fn one(&self) -> FreeElement {
        Lin::basis(self.p(), Mono::one())
    }

    fn gen(&self, seq: Sequence, class: ClassId) -> FreeGen {
        let degree = seq.degree(self.p()) + self.pres.degree(class);
        FreeGen { degree, seq, class }
    }

    /// `i_*(z)` for a class of `Z`: the unit for the basepoint, a generator otherwise.
    pub fn class_element(&self, c: ClassId) -> FreeElement {
        if c == self.pres.basepoint() {
            self.one()
        } else {
            Lin::basis(self.p(), Mono::generator(self.gen(Sequence::empty(), c)))
        }
    }

    /// Every polynomial generator of degree at most `max_degree`, sorted.
    pub fn generators(&self, max_degree: u32) -> Vec<FreeGen> {
        let p = self.p();
        let mut out = Vec::new();
        for c in 0..self.pres.class_count() {
            if c == self.pres.basepoint() || self.pres.degree(c) > max_degree {
                continue;
            }
            let budget = max_degree - self.pres.degree(c);
            for j in generator_sequences(p, budget, self.pres.degree(c)) {
                out.push(self.gen(j, c));
            }
        }
        out.sort();
        out
    }

    /// Generators of `H_*(QZ)` other than the invertible classes of `π_0(Z)`.
    pub fn qz_generators(&self, max_degree: u32) -> Vec<FreeGen> {
        self.generators(max_degree).into_iter().filter(|g| !(g.seq.is_empty() && self.pres.is_unit(g.class))).collect()
    }

    pub fn poincare_series(&self, max_degree: u32) -> Vec<Option<u64>> {
        let shapes: Vec<GeneratorShape> = self.generators(max_degree).iter().map(|g| g.shape(self.p())).collect();
        free_dims(self.p(), &shapes, max_degree)
    }

    pub fn poincare_by_weight(&self, max_degree: u32, max_weight: u64) -> Vec<Vec<u64>> {
        let shapes: Vec<GeneratorShape> = self.generators(max_degree).iter().map(|g| g.shape(self.p())).collect();
        free_dims_by_weight(self.p(), &shapes, max_degree, max_weight)
    }

    /// `H_*(QZ)` is a Laurent ring in the non-basepoint components tensored with a free
    /// algebra. Returns the number of Laurent variables and the dimensions of one component.
    pub fn qz_poincare(&self, max_degree: u32) -> (usize, Vec<Option<u64>>) {
        let shapes: Vec<GeneratorShape> = self.qz_generators(max_degree).iter().map(|g| g.shape(self.p())).collect();
        (self.pres.units().count(), free_dims(self.p(), &shapes, max_degree))
    }

    /// The image of `E_J ⊗ z_c` in the quotient ring, for an `𝓔` basis key `J`.
    pub fn symbol(&self, seq: &Sequence, class: ClassId) -> Result<FreeElement, FreeError> {
        let p = self.p();
        if class == self.pres.basepoint() {
            return Ok(self.one().scaled(e_counit(seq)));
        }
        if seq.meets_generator_condition(p, self.pres.degree(class)) {
            return Ok(Lin::basis(p, Mono::generator(self.gen(seq.clone(), class))));
        }
        let key = (seq.clone(), class);
        if let Some(v) = self.symbols.read().expect("symbol cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let block = BlockId { class, length: seq.len(), degree: seq.degree(p) + self.pres.degree(class) };
        let solved = self.solve_block(block)?;
        let mut cache = self.symbols.write().expect("symbol cache poisoned");
        for (k, v) in solved {
            cache.insert((k, class), v);
        }
        cache.get(&key).cloned().ok_or_else(|| FreeError::Unsolved(format!("{seq} o {}", self.pres.name(class))))
    }

    /// Solves for every non-generator symbol of one block at once. Each relation instance
    /// `Q̂^n(r ⊗ z) = [x^p]` (and its Bockstein counterpart) becomes a row whose unknowns are
    /// the block's non-generator symbols; generators, lower-length symbols and symbols on
    /// lower-degree classes move to the right-hand side.
    fn solve_block(&self, block: BlockId) -> Result<Vec<(Sequence, FreeElement)>, FreeError> {
        let p = self.p();
        let class_degree = self.pres.degree(block.class);
        let Some(inner_budget) = block.degree.checked_sub(class_degree) else { return Ok(Vec::new()) };
        let keys: Vec<Sequence> = enumerate_allowable(p, block.length, inner_budget, Condition::EBasis)
            .into_iter()
            .filter(|k| k.degree(p) == inner_budget)
            .collect();
        let unknowns: Vec<Sequence> =
            keys.iter().filter(|k| !k.meets_generator_condition(p, class_degree)).cloned().collect();
        if unknowns.is_empty() {
            return Ok(Vec::new());
        }
        let column: HashMap<&Sequence, usize> = unknowns.iter().enumerate().map(|(i, k)| (k, i)).collect();

        let mut rows: Vec<(Vec<Scalar>, FreeElement)> = Vec::new();
        for (lhs, rhs) in self.block_relations(block)? {
            let mut coeffs = vec![Scalar::ZERO; unknowns.len()];
            let mut rhs = rhs;
            for ((seq, class), c) in lhs.iter() {
                match column.get(seq) {
                    Some(&i) if *class == block.class => coeffs[i] = p.add(coeffs[i], c),
                    _ => rhs.add_scaled(&self.symbol(seq, *class)?, p.neg(c)),
                }
            }
            rows.push((coeffs, rhs));
        }

        let mut pivot_rows = Vec::with_capacity(unknowns.len());
        let mut next = 0;
        for (col, unknown) in unknowns.iter().enumerate() {
            let Some(found) = (next..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
                return Err(FreeError::Unsolved(format!("{} o {}", unknown, self.pres.name(block.class))));
            };
            rows.swap(next, found);
            let inv = p.inv(rows[next].0[col]).expect("nonzero pivot");
            let (c, r) = (rows[next].0.iter().map(|&v| p.mul(v, inv)).collect::<Vec<_>>(), rows[next].1.scaled(inv));
            rows[next] = (c, r);
            for other in 0..rows.len() {
                let f = rows[other].0[col];
                if other == next || f.is_zero() {
                    continue;
                }
                let (pc, pr) = rows[next].clone();
                let row = &mut rows[other];
                for (v, w) in row.0.iter_mut().zip(&pc) {
                    *v = p.sub(*v, p.mul(f, *w));
                }
                row.1.add_scaled(&pr, p.neg(f));
            }
            pivot_rows.push(next);
            next += 1;
        }
        if let Some((_, rhs)) = rows[next..].iter().find(|(_, rhs)| !rhs.is_empty()) {
            return Err(FreeError::Inconsistent(format!(
                "block of {} in length {}, degree {}: {}",
                self.pres.name(block.class),
                block.length,
                block.degree,
                display_element(rhs, &self.pres)
            )));
        }
        Ok(unknowns.into_iter().zip(pivot_rows).map(|(k, r)| (k, rows[r].1.clone())).collect())
    }

    /// Every relation instance landing in `block`, as (left side in `𝓔 ⊗ H_*(Z)`, right side).
    fn block_relations(&self, block: BlockId) -> Result<Vec<(Symbols, FreeElement)>, FreeError> {
        let p = self.p();
        let class_degree = self.pres.degree(block.class);
        let mut out = Vec::new();
        let Some(length) = block.length.checked_sub(1) else { return Ok(out) };
        let inner = block.degree - class_degree;
        for r in enumerate_allowable(p, length, inner, Condition::EBasis) {
            let x_degree = r.degree(p) + class_degree;
            let x: Symbols = Lin::basis(p, (r.clone(), block.class));
            let Some(gap) = block.degree.checked_sub(x_degree) else { continue };
            let chi = self.chi_symbols(&x, x_degree / steenrod_shift(p, 1))?;
            for eps in 0..=u8::from(p.is_odd()) {
                // deg E^ε_n = gap fixes n.
                let shifted = gap + eps as u32;
                let step = steenrod_shift(p, 1);
                if !shifted.is_multiple_of(step) {
                    continue;
                }
                let n = shifted / step;
                let critical = if p.is_odd() { 2 * n } else { n };
                if (eps == 1 && n == 0) || x_degree < critical {
                    continue;
                }
                let mut lhs: Symbols = Lin::zero(p);
                let mut rhs = self.zero();
                for (k, c) in chi.iter().enumerate() {
                    let m = n + k as u32;
                    let sign = p.sign_of(m as i64);
                    if eps == 0 {
                        lhs.add_scaled(&self.e_on_symbols(Entry::new(0, m), c)?, sign);
                    } else {
                        lhs.add_scaled(&self.e_on_symbols(Entry::new(1, m), c)?, sign);
                        lhs.add_scaled(&self.e_on_symbols(Entry::new(0, m), &self.bockstein_symbols(c)?)?, sign);
                    }
                }
                if eps == 0 && x_degree == critical {
                    rhs = poly_pow(&self.to_ring(&x)?, p.value(), p);
                }
                out.push((lhs, rhs));
            }
        }
        Ok(out)
    }

    fn to_ring(&self, x: &Symbols) -> Result<FreeElement, FreeError> {
        let mut out = self.zero();
        for ((seq, class), c) in x.iter() {
            out.add_scaled(&self.symbol(seq, *class)?, c);
        }
        Ok(out)
    }

    /// `E^ε_m ∘ (r ⊗ z) = (E^ε_m ∘ r) ⊗ z`.
    fn e_on_symbols(&self, op: Entry, x: &Symbols) -> Result<Symbols, FreeError> {
        let p = self.p();
        let mut out = Lin::zero(p);
        if op.bockstein == 1 && op.index == 0 {
            return Ok(out);
        }
        let g = self.alg.generator(Ring::E, op.bockstein, op.index)?;
        for ((r, z), c) in x.iter() {
            let prod = self.alg.circ(&g, &EElement::monomial(p, Ring::E, r.clone()))?;
            for (k, v) in prod.terms().iter() {
                out.add_term((k.clone(), *z), p.mul(c, v));
            }
        }
        Ok(out)
    }

    /// `P^k_*(r ⊗ z) = Σ P^i_* r ⊗ P^{k-i}_* z`.
    fn steenrod_symbols(&self, k: u32, x: &Symbols) -> Result<Symbols, FreeError> {
        let p = self.p();
        let mut out = Lin::zero(p);
        for ((r, z), c) in x.iter() {
            let re = EElement::monomial(p, Ring::E, r.clone());
            for i in 0..=k {
                let pz = self.pres.steenrod(k - i, *z);
                if pz.is_empty() {
                    continue;
                }
                let pr = self.alg.steenrod(i, &re)?;
                for (a, u) in pr.terms().iter() {
                    for (&b, v) in pz.iter() {
                        out.add_term((a.clone(), b), p.mul(c, p.mul(u, v)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `β(r ⊗ z) = βr ⊗ z + (-1)^{|r|} r ⊗ βz`.
    fn bockstein_symbols(&self, x: &Symbols) -> Result<Symbols, FreeError> {
        let p = self.p();
        let mut out = Lin::zero(p);
        if !p.is_odd() {
            return Ok(out);
        }
        for ((r, z), c) in x.iter() {
            let br = self.alg.bockstein(&EElement::monomial(p, Ring::E, r.clone()))?;
            for (a, u) in br.terms().iter() {
                out.add_term((a.clone(), *z), p.mul(c, u));
            }
            let sign = p.sign_of(r.degree(p) as i64);
            for (&b, v) in self.pres.bockstein(*z).iter() {
                out.add_term((r.clone(), b), p.mul(c, p.mul(sign, v)));
            }
        }
        Ok(out)
    }

    fn chi_symbols(&self, x: &Symbols, k: u32) -> Result<Vec<Symbols>, FreeError> {
        let p = self.p();
        let mut out = vec![x.clone()];
        for n in 1..=k {
            let mut acc = Lin::zero(p);
            for j in 0..n {
                acc.add_scaled(&self.steenrod_symbols(n - j, &out[j as usize])?, p.scalar(-1));
            }
            out.push(acc);
        }
        Ok(out)
    }

    fn generator_symbol(&self, g: &FreeGen) -> Symbols {
        Lin::basis(self.p(), (g.seq.clone(), g.class))
    }

    /// `E^ε_n ∘ x`, split over products by the internal Cartan formula.
    pub fn act(&self, op: Entry, x: &FreeElement) -> Result<FreeElement, FreeError> {
        let mut out = self.zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.act_mono(op, m)?, c);
        }
        Ok(out)
    }

    fn act_mono(&self, op: Entry, m: &Mono<FreeGen>) -> Result<FreeElement, FreeError> {
        let p = self.p();
        if op.bockstein == 1 && op.index == 0 {
            return Ok(self.zero());
        }
        let Some((g, rest)) = m.split_first() else {
            return Ok(if op == Entry::new(0, 0) { self.one() } else { self.zero() });
        };
        let mut out = self.zero();
        for a in 0..=op.index {
            let b = op.index - a;
            let left = self.act_gen(Entry::new(op.bockstein, a), &g)?;
            if !left.is_empty() {
                let right = self.act_mono(Entry::new(0, b), &rest)?;
                out.add_scaled(&poly_mul(&left, &right, p), Scalar::ONE);
            }
            if op.bockstein == 1 {
                let left = self.act_gen(Entry::new(0, a), &g)?;
                if !left.is_empty() {
                    let right = self.act_mono(Entry::new(1, b), &rest)?;
                    out.add_scaled(&poly_mul(&left, &right, p), p.sign(g.is_odd(p)));
                }
            }
        }
        Ok(out)
    }

    fn act_gen(&self, op: Entry, g: &FreeGen) -> Result<FreeElement, FreeError> {
        if op.bockstein == 1 && op.index == 0 {
            return Ok(self.zero());
        }
        let x = self.e_on_symbols(op, &self.generator_symbol(g))?;
        self.to_ring(&x)
    }

    /// `r ∘ x` for `r ∈ 𝓔`, one ∘-factor at a time from the right.
    pub fn act_e(&self, r: &EElement, x: &FreeElement) -> Result<FreeElement, FreeError> {
        let mut out = self.zero();
        let nf = self.alg.normal_form(&r.clone().with_ring(Ring::E))?;
        for (key, c) in nf.terms().iter() {
            let mut y = x.clone();
            for &e in key.entries().iter().rev() {
                y = self.act(e, &y)?;
            }
            out.add_scaled(&y, c);
        }
        Ok(out)
    }

    pub fn steenrod(&self, k: u32, x: &FreeElement) -> Result<FreeElement, FreeError> {
        let mut out = self.zero();
        for (m, c) in x.iter() {
            out.add_scaled(&self.steenrod_mono(k, m)?, c);
        }
        Ok(out)
    }

    fn steenrod_mono(&self, k: u32, m: &Mono<FreeGen>) -> Result<FreeElement, FreeError> {
        let p = self.p();
        let Some((g, rest)) = m.split_first() else {
            return Ok(if k == 0 { self.one() } else { self.zero() });
        };
        let mut out = self.zero();
        for i in 0..=k {
            let head = self.to_ring(&self.steenrod_symbols(i, &self.generator_symbol(&g))?)?;
            if head.is_empty() {
                continue;
            }
            let tail = self.steenrod_mono(k - i, &rest)?;
            out.add_scaled(&poly_mul(&head, &tail, p), Scalar::ONE);
        }
        Ok(out)
    }

    /// The Bockstein on the ε-bookkeeping of odd primes; zero at p = 2, where the
    /// Bockstein is `steenrod(1, _)`.
    pub fn bockstein(&self, x: &FreeElement) -> Result<FreeElement, FreeError> {
        let mut out = self.zero();
        if !self.p().is_odd() {
            return Ok(out);
        }
        for (m, c) in x.iter() {
            out.add_scaled(&self.bockstein_mono(m)?, c);
        }
        Ok(out)
    }

    fn bockstein_mono(&self, m: &Mono<FreeGen>) -> Result<FreeElement, FreeError> {
        let p = self.p();
        let Some((g, rest)) = m.split_first() else {
            return Ok(self.zero());
        };
        let bg = self.to_ring(&self.bockstein_symbols(&self.generator_symbol(&g))?)?;
        let rest_elt = Lin::basis(p, rest.clone());
        let mut out = poly_mul(&bg, &rest_elt, p);
        let g_elt = Lin::basis(p, Mono::generator(g.clone()));
        out.add_scaled(&poly_mul(&g_elt, &self.bockstein_mono(&rest)?, p), p.sign(g.is_odd(p)));
        Ok(out)
    }

    /// `ψ(E_J ∘ z) = Σ (-1)^{|J''||z'|} (E_{J'} ∘ z') ⊗ (E_{J''} ∘ z'')`, extended multiplicatively.
    pub fn coproduct(&self, x: &FreeElement) -> Result<FreeTensor, FreeError> {
        let p = self.p();
        let mut out = Lin::zero(p);
        for (m, c) in x.iter() {
            let mut acc: FreeTensor = Lin::basis(p, (Mono::one(), Mono::one()));
            for (g, e) in m.factors() {
                let t = self.coproduct_gen(g)?;
                for _ in 0..*e {
                    acc = tensor_mul(&acc, &t, p);
                }
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    fn coproduct_gen(&self, g: &FreeGen) -> Result<FreeTensor, FreeError> {
        let p = self.p();
        let psi_r = self.alg.coproduct(&EElement::monomial(p, Ring::E, g.seq.clone()))?;
        let psi_z = self.pres.coproduct(g.class);
        let mut out = Lin::zero(p);
        for ((a, b), u) in psi_r.terms().iter() {
            for (&(z1, z2), v) in psi_z.iter() {
                let sign = p.sign(b.degree(p) % 2 == 1 && self.pres.degree(z1) % 2 == 1);
                let left = self.symbol(a, z1)?;
                let right = self.symbol(b, z2)?;
                out.add_scaled(&tensor_of(&left, &right, p), p.mul(sign, p.mul(u, v)));
            }
        }
        Ok(out)
    }

    pub fn counit(&self, x: &FreeElement) -> Scalar {
        let p = self.p();
        let mut total = Scalar::ZERO;
        for (m, c) in x.iter() {
            let mut v = c;
            for (g, _) in m.factors() {
                v = p.mul(v, p.mul(e_counit(&g.seq), self.pres.counit(g.class)));
            }
            total = p.add(total, v);
        }
        total
    }

    pub fn mul(&self, x: &FreeElement, y: &FreeElement) -> FreeElement {
        poly_mul(x, y, self.p())
    }

    /// The action of the semiring `⊕_k H_*(Σ_k)` on `H_*(C̃Z)`.
    pub fn semiring_act(&self, r: &SemiringElement, x: &FreeElement) -> Result<FreeElement, FreeError> {
        let p = self.p();
        let mut out = self.zero();
        for (m, c) in r.iter() {
            for (xm, d) in x.iter() {
                out.add_scaled(&self.semiring_act_mono(m, xm)?, p.mul(c, d));
            }
        }
        Ok(out)
    }

    fn semiring_act_mono(&self, r: &SemiMono, x: &Mono<FreeGen>) -> Result<FreeElement, FreeError> {
        let p = self.p();
        let xe = Lin::basis(p, x.clone());
        let Some((g, rest)) = r.split_first() else {
            return Ok(self.one().scaled(self.counit(&xe)));
        };
        if !rest.is_one() {
            // (u · v) ∘ x = Σ (-1)^{|v||x'|} (u ∘ x')(v ∘ x'')
            let (u, v) = r.split_factors(r.factor_count() / 2);
            let mut out = self.zero();
            for ((x1, x2), c) in self.coproduct(&xe)?.iter() {
                let left = self.semiring_act_mono(&u, x1)?;
                if left.is_empty() {
                    continue;
                }
                let right = self.semiring_act_mono(&v, x2)?;
                let sign = p.sign(v.is_odd(p) && x1.is_odd(p));
                out.add_scaled(&poly_mul(&left, &right, p), p.mul(c, sign));
            }
            return Ok(out);
        }
        if g.is_bracket() {
            return Ok(xe);
        }
        let e = EElement::monomial(p, Ring::E, g.sequence().clone());
        self.act_e(&e, &xe)
    }
}

/// Counit of `E_J`: one exactly when every factor is `E^0_0`.
fn e_counit(seq: &Sequence) -> Scalar {
    if seq.entries().iter().all(|e| *e == Entry::new(0, 0)) {
        Scalar::ONE
    } else {
        Scalar::ZERO
    }
}

/// Allowable `J` in the `𝓔` basis meeting the generator condition for a class of degree
/// `class_degree`, with `deg J <= budget`.
pub fn generator_sequences(p: Prime, budget: u32, class_degree: u32) -> Vec<Sequence> {
    let mut out = vec![Sequence::empty()];
    // Every entry of a generator has index at least 1, so length is bounded by degree.
    let cheapest = Entry::new(if p.is_odd() { 1 } else { 0 }, 1).degree(p).max(1);
    for len in 1..=(budget / cheapest) as usize {
        for j in enumerate_allowable(p, len, budget, Condition::EBasis) {
            if j.meets_generator_condition(p, class_degree) {
                out.push(j);
            }
        }
    }
    out
}

impl OperationModule for FreeAlgebra {
    type Element = FreeElement;

    fn prime(&self) -> Prime {
        self.p()
    }

    fn e_op(&self, op: Entry, x: &FreeElement) -> Result<FreeElement, DlError> {
        self.act(op, x).map_err(|e| DlError::Module(e.to_string()))
    }

    fn steenrod(&self, k: u32, x: &FreeElement) -> Result<FreeElement, DlError> {
        FreeAlgebra::steenrod(self, k, x).map_err(|e| DlError::Module(e.to_string()))
    }

    fn bockstein(&self, x: &FreeElement) -> Result<FreeElement, DlError> {
        FreeAlgebra::bockstein(self, x).map_err(|e| DlError::Module(e.to_string()))
    }

    fn top_degree(&self, x: &FreeElement) -> Option<u32> {
        x.keys().map(|m| m.degree(self.p())).max()
    }
}

/// Formats an element with class names from the presentation.
pub fn display_element(x: &FreeElement, pres: &Presentation) -> String {
    if x.is_empty() {
        return "0".into();
    }
    let p = pres.p();
    let mut parts = Vec::new();
    let mut terms: Vec<_> = x.iter().collect();
    terms.sort_by_key(|(m, _)| (m.degree(p), (*m).clone()));
    for (m, c) in terms {
        let mono = if m.is_one() {
            "1".to_string()
        } else {
            m.factors()
                .iter()
                .map(|(g, e)| {
                    let base = if g.seq.is_empty() {
                        pres.name(g.class).to_string()
                    } else {
                        format!("({} o {})", g.seq, pres.name(g.class))
                    };
                    if *e > 1 {
                        format!("{base}^{e}")
                    } else {
                        base
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        parts.push(if c == Scalar::ONE { mono } else { format!("{}*{mono}", c.value()) });
    }
    parts.join(" + ")
}
