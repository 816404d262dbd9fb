//! Brute-force coinvariants `H_*(V_n)_{GL_n(F_p)}` of an elementary abelian p-group.
//!
//! Invariants are computed in cohomology as the common kernel of `g^* - 1` over a
//! generating set of `GL_n`; homology coinvariants are their dual, so the class of a
//! homology vector is the list of its pairings with an invariant basis.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::EElement;
use crate::arith::{Prime, Scalar};
use crate::lin::Lin;
use crate::linalg::Matrix;
use crate::sequence::Sequence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("matrix is singular over F_{0}")]
    SingularMatrix(u32),
    #[error("word {word} has length {length} and degree {degree}, expected length {n} and degree {d}")]
    DegreeMismatch { word: String, length: usize, degree: u32, n: usize, d: u32 },
    #[error("matrix has size {0}, expected {1}")]
    Shape(usize, usize),
}

/// A cohomology monomial. At odd p, `exterior` marks the degree-1 classes `x_i` present
/// and `powers` holds the exponents of the degree-2 classes `y_i`; at p = 2 `powers` holds
/// the exponents of the degree-1 classes and `exterior` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyMonomial {
    pub exterior: u32,
    pub powers: Vec<u32>,
}

impl CohomologyMonomial {
    pub fn degree(&self, p: Prime) -> u32 {
        let s: u32 = self.powers.iter().sum();
        if p.is_odd() {
            self.exterior.count_ones() + 2 * s
        } else {
            s
        }
    }
}

/// Monomial basis of `H^d(V_n)`.
pub fn build_cohomology(n: usize, d: u32, p: Prime) -> Vec<CohomologyMonomial> {
    let mut out = Vec::new();
    let masks: Vec<u32> = if p.is_odd() { (0..1u32 << n).collect() } else { vec![0] };
    for mask in masks {
        let odd = mask.count_ones();
        if odd > d {
            continue;
        }
        let rest = d - odd;
        let budget = if p.is_odd() {
            if rest % 2 == 1 {
                continue;
            }
            rest / 2
        } else {
            rest
        };
        let mut powers = vec![0u32; n];
        compositions(budget, 0, &mut powers, &mut |pw| {
            out.push(CohomologyMonomial { exterior: mask, powers: pw.to_vec() })
        });
    }
    out.sort();
    out
}

fn compositions(total: u32, pos: usize, buf: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if pos + 1 == buf.len() {
        buf[pos] = total;
        emit(buf);
        return;
    }
    if buf.is_empty() {
        if total == 0 {
            emit(buf);
        }
        return;
    }
    for k in 0..=total {
        buf[pos] = k;
        compositions(total - k, pos + 1, buf, emit);
    }
}

type Poly = Lin<CohomologyMonomial>;

/// Multiplies on the right by `x_j` (the odd generator at odd p, the only one at p = 2).
fn times_odd(poly: &Poly, j: usize, p: Prime) -> Poly {
    let mut out = Lin::zero(p);
    for (m, c) in poly.iter() {
        let mut m = m.clone();
        if p.is_odd() {
            if m.exterior & (1 << j) != 0 {
                continue;
            }
            let larger = (m.exterior >> (j + 1)).count_ones();
            m.exterior |= 1 << j;
            out.add_term(m, p.mul(c, p.sign(larger % 2 == 1)));
        } else {
            m.powers[j] += 1;
            out.add_term(m, c);
        }
    }
    out
}

fn times_even(poly: &Poly, j: usize, p: Prime) -> Poly {
    let mut out = Lin::zero(p);
    for (m, c) in poly.iter() {
        let mut m = m.clone();
        m.powers[j] += 1;
        out.add_term(m, c);
    }
    out
}

fn times_linear(poly: &Poly, row: &[Scalar], odd: bool, p: Prime) -> Poly {
    let mut out = Lin::zero(p);
    for (j, &c) in row.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = if odd { times_odd(poly, j, p) } else { times_even(poly, j, p) };
        out.add_scaled(&term, c);
    }
    out
}

/// Image of a basis monomial under the substitution `x_i -> Σ_j g_ij x_j`.
fn substitute(m: &CohomologyMonomial, g: &Matrix, p: Prime) -> Poly {
    let n = g.rows();
    let mut poly: Poly = Lin::basis(p, CohomologyMonomial { exterior: 0, powers: vec![0; n] });
    if p.is_odd() {
        for i in (0..n).filter(|i| m.exterior & (1 << i) != 0) {
            poly = times_linear(&poly, g.row(i), true, p);
        }
        for i in 0..n {
            for _ in 0..m.powers[i] {
                poly = times_linear(&poly, g.row(i), false, p);
            }
        }
    } else {
        for i in 0..n {
            for _ in 0..m.powers[i] {
                poly = times_linear(&poly, g.row(i), true, p);
            }
        }
    }
    poly
}

/// The matrix of `g^*` on `H^d(V_n)` in the monomial basis (columns are images). The
/// homology action is its transpose.
pub fn gl_action(g: &Matrix, d: u32, p: Prime) -> Result<Matrix, OracleError> {
    if g.rows() != g.cols() {
        return Err(OracleError::Shape(g.rows(), g.cols()));
    }
    if !g.is_invertible() {
        return Err(OracleError::SingularMatrix(p.value()));
    }
    let basis = build_cohomology(g.rows(), d, p);
    Ok(action_matrix(g, &basis, p))
}

fn action_matrix(g: &Matrix, basis: &[CohomologyMonomial], p: Prime) -> Matrix {
    let index: HashMap<&CohomologyMonomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut a = Matrix::zeros(p, basis.len(), basis.len());
    for (col, m) in basis.iter().enumerate() {
        for (img, c) in substitute(m, g, p).iter() {
            a.set(index[img], col, c);
        }
    }
    a
}

fn primitive_root(p: Prime) -> u32 {
    let q = p.value();
    (1..q).find(|&a| (1..q - 1).all(|e| p.pow(Scalar::from_u32(a), e as u64) != Scalar::ONE)).unwrap_or(1)
}

/// Adjacent transpositions, `T ⊕ I` and `a ⊕ I` for a primitive root `a`.
pub fn gl_generators(n: usize, p: Prime) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut m = Matrix::zeros(p, n, n);
        for k in 0..n {
            let target = if k == i {
                i + 1
            } else if k == i + 1 {
                i
            } else {
                k
            };
            m.set(k, target, Scalar::ONE);
        }
        gens.push(m);
    }
    if n >= 2 {
        let mut t = Matrix::identity(p, n);
        t.set(0, 1, Scalar::ONE);
        gens.push(t);
    }
    let a = primitive_root(p);
    if a != 1 && n >= 1 {
        let mut m = Matrix::identity(p, n);
        m.set(0, 0, Scalar::from_u32(a));
        gens.push(m);
    }
    gens
}

/// `H_d(V_n)` modulo the `GL_n` action, presented through the invariant dual.
#[derive(Debug, Clone)]
pub struct CoinvariantSpace {
    pub n: usize,
    pub d: u32,
    pub p: Prime,
    basis: Vec<CohomologyMonomial>,
    index: HashMap<CohomologyMonomial, usize>,
    invariants: Vec<Vec<Scalar>>,
}

impl CoinvariantSpace {
    pub fn build(n: usize, d: u32, p: Prime) -> Self {
        let basis = build_cohomology(n, d, p);
        let size = basis.len();
        let mut stacked = Matrix::zeros(p, 0, size);
        for g in gl_generators(n, p) {
            let mut a = action_matrix(&g, &basis, p);
            for i in 0..size {
                let v = p.sub(a.get(i, i), Scalar::ONE);
                a.set(i, i, v);
            }
            stacked = stacked.vstack(&a);
        }
        let invariants = if size == 0 { Vec::new() } else { stacked.kernel() };
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        CoinvariantSpace { n, d, p, basis, index, invariants }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.invariants.len()
    }

    /// Class of `e_{d_1} ⊗ ... ⊗ e_{d_n}` as its pairings with the invariant basis.
    pub fn class_of_tensor(&self, degrees: &[u32]) -> Vec<Scalar> {
        let p = self.p;
        let mut mono = CohomologyMonomial { exterior: 0, powers: vec![0; self.n] };
        for (i, &d) in degrees.iter().enumerate() {
            if p.is_odd() {
                if d % 2 == 1 {
                    mono.exterior |= 1 << i;
                }
                mono.powers[i] = d / 2;
            } else {
                mono.powers[i] = d;
            }
        }
        let mut odd_pairs = 0u32;
        for i in 0..degrees.len() {
            for j in i + 1..degrees.len() {
                odd_pairs += degrees[i] * degrees[j] % 2;
            }
        }
        let sign = p.sign(odd_pairs % 2 == 1);
        let Some(&col) = self.index.get(&mono) else {
            return vec![Scalar::ZERO; self.dim()];
        };
        self.invariants.iter().map(|phi| p.mul(sign, phi[col])).collect()
    }

    /// Class of the ∘-word `E^{ε_1}_{a_1} ∘ ... ∘ E^{ε_n}_{a_n}`.
    pub fn class_of_word(&self, word: &Sequence) -> Result<Vec<Scalar>, OracleError> {
        let p = self.p;
        if word.len() != self.n || word.degree(p) != self.d {
            return Err(OracleError::DegreeMismatch {
                word: word.to_string(),
                length: word.len(),
                degree: word.degree(p),
                n: self.n,
                d: self.d,
            });
        }
        let degrees: Vec<u32> = word.entries().iter().map(|e| e.degree(p)).collect();
        Ok(self.class_of_tensor(&degrees))
    }

    /// Class of a linear combination of sorted monomials read as words.
    pub fn class_of_element(&self, x: &EElement) -> Result<Vec<Scalar>, OracleError> {
        let p = self.p;
        let mut acc = vec![Scalar::ZERO; self.dim()];
        for (key, c) in x.terms().iter() {
            for (slot, v) in acc.iter_mut().zip(self.class_of_word(key)?) {
                *slot = p.add(*slot, p.mul(c, v));
            }
        }
        Ok(acc)
    }

    /// Rank of a family of classes.
    pub fn rank_of(&self, classes: &[Vec<Scalar>]) -> usize {
        if classes.is_empty() || self.dim() == 0 {
            return 0;
        }
        Matrix::from_rows(self.p, classes).rank()
    }
}

/// Coinvariant dimensions in degrees `0..=max_degree`, computed on `jobs` threads.
pub fn coinvariant_dims(n: usize, max_degree: u32, p: Prime, jobs: usize) -> Vec<usize> {
    let jobs = jobs.max(1);
    let mut dims = vec![0usize; max_degree as usize + 1];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    (0..=max_degree)
                        .filter(|d| *d as usize % jobs == w)
                        .map(|d| (d, CoinvariantSpace::build(n, d, p).dim()))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (d, dim) in h.join().expect("oracle worker panicked") {
                dims[d as usize] = dim;
            }
        }
    });
    dims
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohomology_bases() {
        let p2 = Prime::TWO;
        let p3 = Prime::THREE;
        assert_eq!(build_cohomology(1, 3, p2), vec![CohomologyMonomial { exterior: 0, powers: vec![3] }]);
        assert_eq!(build_cohomology(1, 3, p3), vec![CohomologyMonomial { exterior: 1, powers: vec![1] }]);
        assert_eq!(build_cohomology(2, 2, p2).len(), 3);
    }

    #[test]
    fn identity_acts_trivially() {
        let p = Prime::THREE;
        let a = gl_action(&Matrix::identity(p, 2), 5, p).unwrap();
        assert_eq!(a, Matrix::identity(p, a.rows()));
    }

    #[test]
    fn scalar_on_degree_two_line() {
        let p = Prime::THREE;
        let g = Matrix::from_rows(p, &[vec![p.scalar(2)]]);
        let a = gl_action(&g, 2, p).unwrap();
        assert_eq!(a.get(0, 0), p.scalar(2));
    }

    #[test]
    fn transvection_on_degree_one() {
        let p = Prime::TWO;
        let t = Matrix::from_rows(p, &[vec![Scalar::ONE, Scalar::ONE], vec![Scalar::ZERO, Scalar::ONE]]);
        let a = gl_action(&t, 1, p).unwrap();
        // Basis is sorted as [x2, x1]; x1 maps to x1 + x2 and x2 is fixed.
        assert_eq!(a.get(0, 1), Scalar::ONE);
        assert_eq!(a.get(1, 1), Scalar::ONE);
        assert_eq!(a.get(1, 0), Scalar::ZERO);
    }

    #[test]
    fn singular_matrix_rejected() {
        let p = Prime::TWO;
        let g = Matrix::zeros(p, 2, 2);
        assert_eq!(gl_action(&g, 1, p), Err(OracleError::SingularMatrix(2)));
    }

    #[test]
    fn rank_one_dimensions() {
        for d in 0..=16 {
            assert_eq!(CoinvariantSpace::build(1, d, Prime::TWO).dim(), 1);
            let expected = usize::from(d % 4 == 0 || d % 4 == 3);
            assert_eq!(CoinvariantSpace::build(1, d, Prime::THREE).dim(), expected, "d={d}");
        }
    }

    #[test]
    fn parallel_dims_match_serial() {
        let p = Prime::THREE;
        let serial: Vec<usize> = (0..=12).map(|d| CoinvariantSpace::build(2, d, p).dim()).collect();
        assert_eq!(coinvariant_dims(2, 12, p, 3), serial);
    }
}
