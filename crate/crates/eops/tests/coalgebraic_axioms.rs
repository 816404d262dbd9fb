//! Randomized checks of the coalgebraic semiring axioms for `⊕_k H_*(Σ_k)` and of the
//! coalgebraic semimodule axioms for the homology of a free E∞-space over it.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eops::algebra::Algebra;
use eops::free::{FreeAlgebra, FreeElement, Presentation};
use eops::poly::{tensor_of, Mono, Tensor};
use eops::semiring::{mono_weight, SemiMono, Semiring, SemiringElement};
use eops::{enumerate_allowable, Condition, Lin, Prime, Scalar};

const CASES: usize = 500;
const MAX_DEGREE: u32 = 12;

/// Homogeneous sample elements grouped by (degree, weight).
struct Pool<G: Ord> {
    classes: Vec<Vec<Mono<G>>>,
}

impl<G: Ord + Clone> Pool<G> {
    fn new(monos: impl IntoIterator<Item = (u32, u64, Mono<G>)>) -> Self {
        let mut by_key: BTreeMap<(u32, u64), Vec<Mono<G>>> = BTreeMap::new();
        for (d, w, m) in monos {
            let v = by_key.entry((d, w)).or_default();
            if !v.contains(&m) {
                v.push(m);
            }
        }
        Pool { classes: by_key.into_values().collect() }
    }

    /// A random nonzero homogeneous element: one or two monomials of the same bidegree.
    fn sample(&self, p: Prime, rng: &mut ChaCha8Rng) -> Lin<Mono<G>> {
        let class = self.classes.choose(rng).expect("nonempty pool");
        let mut out = Lin::zero(p);
        let c = Scalar::from_u32(rng.gen_range(1..p.value()));
        out.add_term(class.choose(rng).unwrap().clone(), c);
        if rng.gen_bool(0.5) {
            out.add_term(class.choose(rng).unwrap().clone(), Scalar::from_u32(rng.gen_range(1..p.value())));
        }
        if out.is_empty() {
            out.add_term(class[0].clone(), Scalar::ONE);
        }
        out
    }
}

fn degree<G: eops::poly::Generator>(p: Prime, x: &Lin<Mono<G>>) -> u32 {
    x.keys().next().map_or(0, |m| m.degree(p))
}

fn is_odd<G: eops::poly::Generator>(p: Prime, x: &Lin<Mono<G>>) -> bool {
    p.is_odd() && degree(p, x) % 2 == 1
}

fn semiring_pool(ring: &Semiring) -> Pool<eops::semiring::SemiGen> {
    let p = ring.p();
    let mut gens: Vec<SemiringElement> = vec![ring.bracket(1).unwrap()];
    for len in 1..=2 {
        for j in enumerate_allowable(p, len, MAX_DEGREE, Condition::SemiringGenerator) {
            if let Ok(g) = ring.generator(&j) {
                gens.push(g);
            }
        }
    }
    let mut monos = vec![Mono::one()];
    let mut frontier: Vec<SemiMono> = vec![Mono::one()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let prod = ring.dot(&Lin::basis(p, m.clone()), g);
                for k in prod.keys() {
                    if k.degree(p) <= MAX_DEGREE / 2 && mono_weight(k, p).unwrap() <= 2 * (p.value() as u64).pow(2) {
                        next.push(k.clone());
                    }
                }
            }
        }
        monos.extend(next.iter().cloned());
        frontier = next;
    }
    Pool::new(monos.into_iter().map(|m| (m.degree(p), mono_weight(&m, p).unwrap(), m)))
}

fn psi_terms(ring: &Semiring, x: &SemiringElement) -> Vec<(SemiringElement, SemiringElement, Scalar)> {
    let p = ring.p();
    ring.psi(x).unwrap().iter().map(|((a, b), c)| (Lin::basis(p, a.clone()), Lin::basis(p, b.clone()), c)).collect()
}

fn semiring_tensor<G: eops::poly::Generator>(
    p: Prime,
    x: &Lin<(Mono<G>, Mono<G>)>,
    y: &Lin<(Mono<G>, Mono<G>)>,
    mut f: impl FnMut(&Lin<Mono<G>>, &Lin<Mono<G>>) -> Lin<Mono<G>>,
) -> Tensor<G> {
    let mut out = Lin::zero(p);
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let sign = p.sign(a2.is_odd(p) && b1.is_odd(p));
            let l = f(&Lin::basis(p, a1.clone()), &Lin::basis(p, b1.clone()));
            let r = f(&Lin::basis(p, a2.clone()), &Lin::basis(p, b2.clone()));
            out.add_scaled(&tensor_of(&l, &r, p), p.mul(p.mul(ca, cb), sign));
        }
    }
    out
}

fn within_budget<G: eops::poly::Generator>(p: Prime, xs: &[&Lin<Mono<G>>]) -> bool {
    xs.iter().map(|x| degree(p, x)).sum::<u32>() <= MAX_DEGREE
}

pub fn semiring_bialgebra_axioms() {
    for p in [Prime::TWO, Prime::THREE] {
        let ring = Semiring::new(Arc::new(Algebra::new(p)));
        let pool = semiring_pool(&ring);
        let mut rng = ChaCha8Rng::seed_from_u64(11 + p.value() as u64);
        let mut done = 0;
        while done < CASES {
            let (r, s, t) = (pool.sample(p, &mut rng), pool.sample(p, &mut rng), pool.sample(p, &mut rng));
            if !within_budget(p, &[&r, &s, &t]) {
                continue;
            }
            done += 1;
            let sign = p.sign(is_odd(p, &r) && is_odd(p, &s));
            assert_eq!(ring.dot(&r, &s), ring.dot(&s, &r).scaled(sign));
            assert_eq!(ring.dot(&ring.dot(&r, &s), &t), ring.dot(&r, &ring.dot(&s, &t)));
            assert_eq!(ring.dot(&ring.one(), &r), r);
            let rs = ring.circ(&r, &s).unwrap();
            assert_eq!(rs, ring.circ(&s, &r).unwrap().scaled(sign), "{r:?} ∘ {s:?}");
            assert_eq!(ring.circ(&rs, &t).unwrap(), ring.circ(&r, &ring.circ(&s, &t).unwrap()).unwrap());
            assert_eq!(ring.circ(&ring.bracket(1).unwrap(), &r).unwrap(), r);
            let (pr, ps) = (ring.psi(&r).unwrap(), ring.psi(&s).unwrap());
            assert_eq!(ring.psi(&ring.dot(&r, &s)).unwrap(), semiring_tensor(p, &pr, &ps, |a, b| ring.dot(a, b)));
            assert_eq!(ring.psi(&rs).unwrap(), semiring_tensor(p, &pr, &ps, |a, b| ring.circ(a, b).unwrap()));
            assert_eq!(ring.counit(&ring.dot(&r, &s)), p.mul(ring.counit(&r), ring.counit(&s)));
            assert_eq!(ring.counit(&rs), p.mul(ring.counit(&r), ring.counit(&s)));
            let mut left = ring.zero();
            for (a, b, c) in psi_terms(&ring, &r) {
                left.add_scaled(&b, p.mul(c, ring.counit(&a)));
            }
            assert_eq!(left, r);
        }
    }
}

pub fn semiring_distributivity() {
    for p in [Prime::TWO, Prime::THREE] {
        let ring = Semiring::new(Arc::new(Algebra::new(p)));
        let pool = semiring_pool(&ring);
        let mut rng = ChaCha8Rng::seed_from_u64(23 + p.value() as u64);
        let mut done = 0;
        while done < CASES {
            let (r, s, t) = (pool.sample(p, &mut rng), pool.sample(p, &mut rng), pool.sample(p, &mut rng));
            if !within_budget(p, &[&r, &s, &t]) {
                continue;
            }
            done += 1;
            let lhs = ring.circ(&r, &ring.dot(&s, &t)).unwrap();
            let mut rhs = ring.zero();
            for (r1, r2, c) in psi_terms(&ring, &r) {
                let sign = p.sign(is_odd(p, &r2) && is_odd(p, &s));
                let term = ring.dot(&ring.circ(&r1, &s).unwrap(), &ring.circ(&r2, &t).unwrap());
                rhs.add_scaled(&term, p.mul(c, sign));
            }
            assert_eq!(lhs, rhs, "p={p} {r:?} ∘ ({s:?} · {t:?})");
        }
    }
}

pub fn semiring_annihilation_by_one() {
    for p in [Prime::TWO, Prime::THREE] {
        let ring = Semiring::new(Arc::new(Algebra::new(p)));
        let pool = semiring_pool(&ring);
        let mut rng = ChaCha8Rng::seed_from_u64(31 + p.value() as u64);
        for _ in 0..CASES {
            let r = pool.sample(p, &mut rng);
            assert_eq!(ring.circ(&r, &ring.one()).unwrap(), ring.one().scaled(ring.counit(&r)));
        }
    }
}

struct ModuleFixture {
    p: Prime,
    ring: Semiring,
    module: FreeAlgebra,
    r_pool: Pool<eops::semiring::SemiGen>,
    x_pool: Pool<eops::free::FreeGen>,
}

impl ModuleFixture {
    fn new(p: Prime) -> Self {
        let alg = Arc::new(Algebra::new(p));
        let ring = Semiring::new(alg.clone());
        let module = FreeAlgebra::new(Presentation::wedge_of_spheres(p, &[1, 2]), alg).unwrap();
        let r_pool = semiring_pool(&ring);
        let gens: Vec<FreeElement> =
            module.generators(MAX_DEGREE / 2).into_iter().map(|g| Lin::basis(p, Mono::generator(g))).collect();
        let mut monos = vec![Mono::one()];
        for a in &gens {
            for k in a.keys() {
                monos.push(k.clone());
            }
            for b in &gens {
                for k in module.mul(a, b).keys() {
                    if k.degree(p) <= MAX_DEGREE / 2 {
                        monos.push(k.clone());
                    }
                }
            }
        }
        let x_pool = Pool::new(monos.into_iter().map(|m| (m.degree(p), m.factor_count() as u64, m)));
        ModuleFixture { p, ring, module, r_pool, x_pool }
    }

    fn act(&self, r: &SemiringElement, x: &FreeElement) -> FreeElement {
        self.module.semiring_act(r, x).unwrap()
    }

    fn split(&self, x: &FreeElement) -> Vec<(FreeElement, FreeElement, Scalar)> {
        let p = self.p;
        self.module
            .coproduct(x)
            .unwrap()
            .iter()
            .map(|((a, b), c)| (Lin::basis(p, a.clone()), Lin::basis(p, b.clone()), c))
            .collect()
    }

    /// Runs `check` on `CASES` random triples `(r, s, x)` plus a second module element `y`.
    fn run(&self, seed: u64, mut check: impl FnMut(&SemiringElement, &SemiringElement, &FreeElement, &FreeElement)) {
        let p = self.p;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        while done < CASES {
            let (r, s) = (self.r_pool.sample(p, &mut rng), self.r_pool.sample(p, &mut rng));
            let (x, y) = (self.x_pool.sample(p, &mut rng), self.x_pool.sample(p, &mut rng));
            if degree(p, &r) + degree(p, &s) + degree(p, &x) + degree(p, &y) > MAX_DEGREE {
                continue;
            }
            done += 1;
            check(&r, &s, &x, &y);
        }
    }
}

pub fn semimodule_axioms() {
    for p in [Prime::TWO, Prime::THREE] {
        let f = ModuleFixture::new(p);
        let ring = &f.ring;
        let m = &f.module;
        // (i) associativity and (ii) unit
        f.run(41, |r, s, x, _| {
            assert_eq!(f.act(&ring.circ(r, s).unwrap(), x), f.act(r, &f.act(s, x)), "p={p} ({r:?} ∘ {s:?}) ∘ {x:?}");
            assert_eq!(&f.act(&ring.bracket(1).unwrap(), x), x);
        });
        // (iii) distributivity over the product of the module
        f.run(43, |r, _, x, y| {
            let lhs = f.act(r, &m.mul(x, y));
            let mut rhs = m.zero();
            for (r1, r2, c) in psi_terms(ring, r) {
                let sign = p.sign(is_odd(p, &r2) && is_odd(p, x));
                rhs.add_scaled(&m.mul(&f.act(&r1, x), &f.act(&r2, y)), p.mul(c, sign));
            }
            assert_eq!(lhs, rhs, "p={p} {r:?} ∘ ({x:?} {y:?})");
        });
        // (iv) r ∘ 1 = ε(r) 1
        f.run(47, |r, _, _, _| {
            assert_eq!(f.act(r, &m.one()), m.one().scaled(ring.counit(r)));
        });
        // (v) distributivity over the product of the semiring
        f.run(53, |r, s, x, _| {
            let lhs = f.act(&ring.dot(r, s), x);
            let mut rhs = m.zero();
            for (x1, x2, c) in f.split(x) {
                let sign = p.sign(is_odd(p, s) && is_odd(p, &x1));
                rhs.add_scaled(&m.mul(&f.act(r, &x1), &f.act(s, &x2)), p.mul(c, sign));
            }
            assert_eq!(lhs, rhs, "p={p} ({r:?} · {s:?}) ∘ {x:?}");
        });
        // (vi) 1 ∘ x = ε(x) 1
        f.run(59, |_, _, x, _| {
            assert_eq!(f.act(&ring.one(), x), m.one().scaled(m.counit(x)));
        });
        // the action is a map of coalgebras
        f.run(61, |r, _, x, _| {
            let lhs = m.coproduct(&f.act(r, x)).unwrap();
            let mut rhs = Lin::zero(p);
            for (r1, r2, c) in psi_terms(ring, r) {
                for (x1, x2, d) in f.split(x) {
                    let sign = p.sign(is_odd(p, &r2) && is_odd(p, &x1));
                    rhs.add_scaled(&tensor_of(&f.act(&r1, &x1), &f.act(&r2, &x2), p), p.mul(p.mul(c, d), sign));
                }
            }
            assert_eq!(lhs, rhs, "p={p} ψ({r:?} ∘ {x:?})");
        });
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn semiring_bialgebra_axioms() {
        super::semiring_bialgebra_axioms()
    }

    #[test]
    fn semiring_distributivity() {
        super::semiring_distributivity()
    }

    #[test]
    fn semiring_annihilation_by_one() {
        super::semiring_annihilation_by_one()
    }

    #[test]
    fn semimodule_axioms() {
        super::semimodule_axioms()
    }
}
