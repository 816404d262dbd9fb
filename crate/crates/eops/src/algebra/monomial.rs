//! Sorted monomials in the free graded-commutative algebra on the generators `E^ε_n`.
//!
//! A monomial is stored as a [`Sequence`] sorted in [`Entry`] order; allowable sequences
//! are already sorted, so basis elements and their keys coincide.

use crate::arith::{Prime, Scalar};
use crate::sequence::{Entry, Sequence};

fn is_odd(e: Entry, p: Prime) -> bool {
    p.is_odd() && e.bockstein == 1
}

/// Sorts a word into its monomial key, returning the Koszul sign, or `None` when an odd
/// generator repeats (such words vanish).
pub fn sort_word(word: &[Entry], p: Prime) -> Option<(Sequence, Scalar)> {
    let mut v = word.to_vec();
    let mut odd_swaps = 0usize;
    // Insertion sort keeps the inversion count cheap for the short words used here.
    for k in 1..v.len() {
        let mut j = k;
        while j > 0 && v[j - 1] > v[j] {
            if is_odd(v[j - 1], p) && is_odd(v[j], p) {
                odd_swaps += 1;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && is_odd(w[0], p)) {
        return None;
    }
    Some((Sequence(v), p.sign(odd_swaps % 2 == 1)))
}

/// Product of two sorted monomials.
pub fn multiply(a: &Sequence, b: &Sequence, p: Prime) -> Option<(Sequence, Scalar)> {
    if a.is_empty() {
        return Some((b.clone(), Scalar::ONE));
    }
    if b.is_empty() {
        return Some((a.clone(), Scalar::ONE));
    }
    let mut word = a.0.clone();
    word.extend_from_slice(&b.0);
    sort_word(&word, p)
}

/// All sorted monomials of the given length, degree and Bockstein degree.
pub fn monomials(p: Prime, length: usize, degree: u32, bockstein: u32) -> Vec<Sequence> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(length);
    rec(p, length, degree, bockstein, None, &mut stack, &mut out);
    out
}

fn rec(
    p: Prime,
    length: usize,
    degree: u32,
    bockstein: u32,
    last: Option<Entry>,
    stack: &mut Vec<Entry>,
    out: &mut Vec<Sequence>,
) {
    let remaining = length - stack.len();
    if remaining == 0 {
        if degree == 0 && bockstein == 0 {
            out.push(Sequence(stack.clone()));
        }
        return;
    }
    if bockstein as usize > remaining {
        return;
    }
    let start = last.map_or(0, |e| e.index);
    let bits: &[u8] = if p.is_odd() { &[0, 1] } else { &[0] };
    let mut index = start;
    loop {
        let mut fits = false;
        for &eps in bits {
            let e = Entry::new(eps, index);
            if !e.is_legitimate(p) {
                continue;
            }
            let d = e.degree(p);
            if d > degree {
                continue;
            }
            fits = true;
            if (eps as u32) > bockstein {
                continue;
            }
            if let Some(l) = last {
                if e < l || (e == l && is_odd(e, p)) {
                    continue;
                }
            }
            // Later entries sort after e, so each costs at least d - 1.
            if d.saturating_sub(1) as usize * (remaining - 1) > (degree - d) as usize {
                continue;
            }
            stack.push(e);
            rec(p, length, degree - d, bockstein - eps as u32, Some(e), stack, out);
            stack.pop();
        }
        if !fits && index > 0 {
            break;
        }
        index += 1;
    }
}
