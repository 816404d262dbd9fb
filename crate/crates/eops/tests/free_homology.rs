use std::sync::Arc;

use eops::algebra::{Algebra, EElement, Ring};
use eops::dl::{admissible_to_allowable, enumerate_admissible};
use eops::free::{free_dims, free_dims_by_weight, FreeAlgebra, FreeElement, GeneratorShape, Presentation};
use eops::lin::Lin;
use eops::poly::Mono;
use eops::semiring::{Semiring, SemiringElement};
use eops::{enumerate_allowable, Condition, Prime};

fn free(p: Prime, dims: &[u32]) -> FreeAlgebra {
    FreeAlgebra::new(Presentation::wedge_of_spheres(p, dims), Arc::new(Algebra::new(p))).unwrap()
}

/// Generator shapes reached from the Dyer–Lashof side: admissible sequences pushed through
/// the bijection, kept when the image meets the generator condition.
fn shapes_via_admissible(f: &FreeAlgebra, max_degree: u32) -> Vec<GeneratorShape> {
    let p = f.p();
    let pres = f.presentation();
    let mut out = Vec::new();
    for c in 0..pres.class_count() {
        if c == pres.basepoint() || pres.degree(c) > max_degree {
            continue;
        }
        let budget = max_degree - pres.degree(c);
        for len in 0..=budget as usize {
            for word in enumerate_admissible(p, len, budget) {
                let Ok(j) = admissible_to_allowable(p, &word) else { continue };
                if j.meets_generator_condition(p, pres.degree(c)) {
                    out.push(GeneratorShape {
                        degree: j.degree(p) + pres.degree(c),
                        weight: (p.value() as u64).pow(len as u32),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

pub fn generator_counts_agree_with_admissible_side() {
    let spaces: [&[u32]; 4] = [&[0], &[1], &[2], &[1, 2]];
    for pv in [2, 3] {
        let p = Prime::new(pv).unwrap();
        for dims in spaces {
            let f = free(p, dims);
            let mut direct: Vec<GeneratorShape> = f.generators(20).iter().map(|g| g.shape(p)).collect();
            direct.sort();
            let bijected = shapes_via_admissible(&f, 20);
            assert_eq!(direct, bijected, "p={pv} Z={dims:?}");
            assert_eq!(f.poincare_series(20), free_dims(p, &bijected, 20));
            assert_eq!(f.poincare_by_weight(20, 27), free_dims_by_weight(p, &bijected, 20, 27));
        }
    }
}

pub fn circle_series_at_two() {
    let p = Prime::new(2).unwrap();
    let f = free(p, &[1]);
    // Generators through degree 4 are z, E^0_2∘z and E^0_3∘z; degree 4 holds z^4, z·(E^0_2∘z), E^0_3∘z.
    assert_eq!(f.poincare_series(4), vec![Some(1), Some(1), Some(1), Some(2), Some(3)]);
}

pub fn symbols_agree_with_iterated_action() {
    for pv in [2, 3] {
        let p = Prime::new(pv).unwrap();
        for dims in [&[0u32][..], &[1], &[2], &[3]] {
            let f = free(p, dims);
            let z = f.class_element(1);
            for len in 1..=2 {
                for j in enumerate_allowable(p, len, 12, Condition::EBasis) {
                    let r = EElement::monomial(p, Ring::E, j.clone());
                    let direct = f.symbol(&j, 1).unwrap();
                    let iterated = f.act_e(&r, &z).unwrap();
                    assert_eq!(direct, iterated, "p={pv} Z={dims:?} J={j}");
                }
            }
        }
    }
}

pub fn bockstein_squares_to_zero_and_lowers_degree() {
    let p = Prime::new(3).unwrap();
    let f = free(p, &[1, 2]);
    for g in f.generators(16) {
        let x: FreeElement = Lin::basis(p, Mono::generator(g.clone()));
        let bx = f.bockstein(&x).unwrap();
        assert!(f.bockstein(&bx).unwrap().is_empty(), "{g:?}");
        assert!(bx.keys().all(|m| m.degree(p) + 1 == g.shape(p).degree));
    }
}

/// `H_*(C̃S^0)` with `z ↦ [1]` and `E_J ∘ z ↦ E_J` is the semiring.
fn to_semiring(ring: &Semiring, x: &FreeElement) -> SemiringElement {
    let mut out = ring.zero();
    for (m, c) in x.iter() {
        let mut term = ring.one();
        for (g, e) in m.factors() {
            let image =
                if g.sequence().is_empty() { ring.bracket(1).unwrap() } else { ring.generator(g.sequence()).unwrap() };
            for _ in 0..*e {
                term = ring.dot(&term, &image);
            }
        }
        out.add_scaled(&term, c);
    }
    out
}

pub fn two_points_reproduce_the_semiring() {
    for pv in [2, 3] {
        let p = Prime::new(pv).unwrap();
        let alg = Arc::new(Algebra::new(p));
        let f = FreeAlgebra::new(Presentation::wedge_of_spheres(p, &[0]), alg.clone()).unwrap();
        let ring = Semiring::new(alg);
        let z = f.class_element(1);
        for len in 1..=2 {
            for j in enumerate_allowable(p, len, 14, Condition::EBasis) {
                let r = EElement::monomial(p, Ring::E, j.clone());
                let via_free = to_semiring(&ring, &f.act_e(&r, &z).unwrap());
                assert_eq!(via_free, ring.inject_e(&r).unwrap(), "p={pv} J={j}");
            }
        }
    }
}

pub fn qz_series_of_spheres() {
    let p = Prime::new(2).unwrap();
    let f = free(p, &[0]);
    let (units, component) = f.qz_poincare(6);
    assert_eq!(units, 1);
    assert_eq!(component[0], Some(1));
    assert!(component.iter().all(|d| d.is_some()));
    let g = free(p, &[2]);
    let (units, comp) = g.qz_poincare(8);
    assert_eq!(units, 0);
    assert_eq!(comp, g.poincare_series(8));
}

#[cfg(test)]
mod tests {
    #[test]
    fn generator_counts_agree_with_admissible_side() {
        super::generator_counts_agree_with_admissible_side()
    }

    #[test]
    fn circle_series_at_two() {
        super::circle_series_at_two()
    }

    #[test]
    fn symbols_agree_with_iterated_action() {
        super::symbols_agree_with_iterated_action()
    }

    #[test]
    fn bockstein_squares_to_zero_and_lowers_degree() {
        super::bockstein_squares_to_zero_and_lowers_degree()
    }

    #[test]
    fn two_points_reproduce_the_semiring() {
        super::two_points_reproduce_the_semiring()
    }

    #[test]
    fn qz_series_of_spheres() {
        super::qz_series_of_spheres()
    }
}
