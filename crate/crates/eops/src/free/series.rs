//! Poincaré series of free graded-commutative algebras.

use serde::Serialize;

use crate::arith::Prime;

/// A generator as seen by dimension counting.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GeneratorShape {
    pub degree: u32,
    pub weight: u64,
}

impl GeneratorShape {
    /// Exterior at odd primes, polynomial otherwise.
    fn is_exterior(self, p: Prime) -> bool {
        p.is_odd() && self.degree % 2 == 1
    }
}

/// Dimensions by degree; `None` marks an infinite-dimensional degree, which happens
/// exactly when a degree-0 polynomial generator is present.
pub fn free_dims(p: Prime, gens: &[GeneratorShape], max_degree: u32) -> Vec<Option<u64>> {
    let has_degree_zero = gens.iter().any(|g| g.degree == 0);
    let top = max_degree as usize;
    let mut dims = vec![0u64; top + 1];
    dims[0] = 1;
    for g in gens.iter().filter(|g| g.degree > 0 && g.degree <= max_degree) {
        multiply_by(&mut dims, g.degree as usize, g.is_exterior(p));
    }
    dims.into_iter().map(|d| if has_degree_zero && d > 0 { None } else { Some(d) }).collect()
}

/// Dimensions by degree and weight: `dims[d][w]`, weights up to `max_weight`. Every
/// generator has positive weight, so each entry is finite.
pub fn free_dims_by_weight(p: Prime, gens: &[GeneratorShape], max_degree: u32, max_weight: u64) -> Vec<Vec<u64>> {
    let (td, tw) = (max_degree as usize, max_weight as usize);
    let mut dims = vec![vec![0u64; tw + 1]; td + 1];
    dims[0][0] = 1;
    for g in gens.iter().filter(|g| g.degree <= max_degree && g.weight <= max_weight) {
        let (gd, gw) = (g.degree as usize, g.weight as usize);
        assert!(gw > 0, "generators carry positive weight");
        if g.is_exterior(p) {
            for d in (gd..=td).rev() {
                for w in (gw..=tw).rev() {
                    dims[d][w] += dims[d - gd][w - gw];
                }
            }
        } else {
            for d in gd..=td {
                for w in gw..=tw {
                    dims[d][w] += dims[d - gd][w - gw];
                }
            }
        }
    }
    dims
}

/// In place: multiply a truncated series by `1/(1 - t^d)` or `(1 + t^d)`.
fn multiply_by(dims: &mut [u64], d: usize, exterior: bool) {
    if exterior {
        for n in (d..dims.len()).rev() {
            dims[n] += dims[n - d];
        }
    } else {
        for n in d..dims.len() {
            dims[n] += dims[n - d];
        }
    }
}
