mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{arrays, bfs_closure, group, random_perm, sandwich, MATRIX};
use pgm::group::{
    enumerate_proper_subgroups, right_cosets, subgroup_closure, GroupTable, SubgroupChain,
};
use pgm::permgroup::{
    brute_force_closure, contains, factorial, find_block_systems, parity, schreier_sims,
    schreier_sims_with_degree, transitivity_degree,
};
use pgm::signatures::{breve_map, canonical_etls, knapsack_compose, knapsack_split, random_etls};
use pgm::transforms::{
    blockwise_perm, choose_subgroups, diagonal_perm, eh_generating_set, pgm_transform,
    regular_perm, EhConfig,
};
use pgm::witnesses::{mover_two_transitive, ProofContext};
use pgm::Permutation;

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn spec_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(MATRIX)
}

fn primary_chain(g: &GroupTable) -> SubgroupChain {
    let (h, _) = choose_subgroups(g, 64).unwrap();
    SubgroupChain::through(g, &[h]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn knapsack_round_trip(radices in prop::collection::vec(1usize..5, 1..4), pick in any::<prop::sample::Index>()) {
        let n: usize = radices.iter().product();
        let x = pick.index(n);
        let d = knapsack_split(x, &radices).unwrap();
        prop_assert!(d.digits.iter().zip(&radices).all(|(a, r)| a < r));
        prop_assert_eq!(knapsack_compose(&d, &radices), x);
    }

    #[test]
    fn parity_is_a_homomorphism(n in 1usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (random_perm(&mut rng, n), random_perm(&mut rng, n));
        prop_assert_eq!(parity(&p.then(&q)), parity(&p) * parity(&q));
    }

    #[test]
    fn blockwise_and_diagonal_are_homomorphisms(
        (lambda, mu, a, b, c, d) in (2usize..6, 2usize..5).prop_flat_map(|(l, m)| {
            (Just(l), Just(m), perm_strategy(l), perm_strategy(l), perm_strategy(m), perm_strategy(m))
        })
    ) {
        let bw = |t: &Permutation| blockwise_perm(t, lambda, mu).unwrap();
        let dg = |t: &Permutation| diagonal_perm(t, lambda, mu).unwrap();
        prop_assert_eq!(bw(&a.then(&b)), bw(&a).then(&bw(&b)));
        prop_assert_eq!(dg(&c.then(&d)), dg(&c).then(&dg(&d)));
        prop_assert_eq!(bw(&a) == bw(&b), a == b);
        prop_assert_eq!(dg(&c) == dg(&d), c == d);
        // Blockwise and diagonal maps commute.
        prop_assert_eq!(bw(&a).then(&dg(&c)), dg(&c).then(&bw(&a)));
    }

    #[test]
    fn regular_is_a_homomorphism_on_one_block(spec in spec_strategy(), seed in any::<u64>()) {
        let g = group(spec);
        let e = random_etls(g.clone(), &primary_chain(&g), seed).unwrap();
        let h = e.subgroup().elements().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (h1, h2) = (h[rng.gen_range(0..h.len())], h[rng.gen_range(0..h.len())]);
        let z0 = rng.gen_range(0..e.lambda());
        let lhs = regular_perm(&e, z0, g.mul(h1, h2)).unwrap();
        prop_assert_eq!(lhs, regular_perm(&e, z0, h1).unwrap().then(&regular_perm(&e, z0, h2).unwrap()));
        prop_assert!(regular_perm(&e, z0, h1).unwrap().support().iter().all(|&x| x % e.lambda() == z0));
    }

    #[test]
    fn breve_is_bijective_on_random_signatures(spec in spec_strategy(), seed in any::<u64>()) {
        let g = group(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random_etls(g.clone(), &primary_chain(&g), seed).unwrap().signature().clone();
        for candidate in [sig.clone(), sandwich(&sig, &mut rng)] {
            let m = breve_map(&candidate);
            prop_assert_eq!(m.forward.iter().collect::<HashSet<_>>().len(), g.order());
            prop_assert!((0..g.order()).all(|x| m.backward[m.forward[x]] == x));
        }
    }

    #[test]
    fn triple_identity(spec in spec_strategy(), seed in any::<u64>()) {
        let g = group(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = primary_chain(&g);
        let base = random_etls(g.clone(), &chain, seed).unwrap().signature().clone();
        let [a, b, c] = [0, 1, 2].map(|_| breve_map(&sandwich(&base, &mut rng)));
        let lhs = pgm_transform(&a, &c).unwrap().inverse().then(&pgm_transform(&a, &b).unwrap());
        prop_assert_eq!(lhs, pgm_transform(&c, &b).unwrap());
        prop_assert!(pgm_transform(&a, &a).unwrap().is_identity());
    }

    #[test]
    fn membership_respects_products_and_inverses(spec in spec_strategy(), seed in any::<u64>()) {
        let g = group(spec);
        let eh = eh_generating_set(&EhConfig::standard(g, false, vec![], 64).unwrap()).unwrap();
        let gens = eh.permutations();
        let bsgs = schreier_sims_with_degree(&gens, eh.degree()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = (0..rng.gen_range(1..12)).fold(Permutation::identity(eh.degree()), |acc, _| {
            acc.then(&gens[rng.gen_range(0..gens.len())])
        });
        prop_assert!(contains(&bsgs, &word).unwrap());
        prop_assert!(contains(&bsgs, &word.inverse()).unwrap());
        prop_assert!(gens.iter().all(|s| contains(&bsgs, s).unwrap()));
        let outsider = random_perm(&mut rng, eh.degree());
        let by_closure = pgm::permgroup::compose(&word, &outsider).unwrap();
        prop_assert_eq!(contains(&bsgs, &by_closure).unwrap(), contains(&bsgs, &outsider).unwrap());
    }

    #[test]
    fn closure_matches_stabilizer_chain(n in 1usize..7, k in 0usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Permutation> = (0..k).map(|_| random_perm(&mut rng, n)).collect();
        let closure = brute_force_closure(&gens, n).unwrap();
        prop_assert_eq!(closure.len(), bfs_closure(&arrays(&gens), n).len());
        let order = schreier_sims_with_degree(&gens, n).unwrap().order().clone();
        prop_assert_eq!(BigUint::from(closure.len()), order.clone());
        prop_assert_eq!(factorial(n) % order, BigUint::from(0u32));
    }

    #[test]
    fn discovered_blocks_are_respected(n in 4usize..9, k in 1usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens: Vec<Permutation> = (0..k).map(|_| random_perm(&mut rng, n)).collect();
        gens.push(Permutation::cycle(n, &(0..n).collect::<Vec<_>>()).unwrap());
        for sys in find_block_systems(&gens, n).unwrap() {
            prop_assert!(gens.iter().all(|g| sys.is_respected_by(g)));
        }
    }

    #[test]
    fn random_movers_land(spec in prop::sample::select(&["cyclic:6", "cyclic:12", "quaternion", "cyclic:3xcyclic:3"][..]),
                          pts in prop::array::uniform4(0usize..12)) {
        let ctx = ProofContext::standard(group(spec), true, vec![], 64).unwrap();
        let n = ctx.degree();
        let [x, x2, y, y2] = pts.map(|p| p % n);
        prop_assume!(x != x2 && y != y2);
        let w = mover_two_transitive(&ctx, x, x2, y, y2).unwrap();
        prop_assert_eq!((w.product.apply(x), w.product.apply(x2)), (y, y2));
        prop_assert_eq!(ctx.evaluate(&w.factors).unwrap(), w.product.clone());
        let letters = ctx.expand(&w).unwrap();
        let folded = letters.iter().fold(Permutation::identity(n), |acc, &l| acc.then(&ctx.letter_perm(l)));
        prop_assert_eq!(folded, w.product);
    }
}

#[test]
fn subgroup_facts_across_matrix() {
    for spec in MATRIX {
        let g = group(spec);
        for h in enumerate_proper_subgroups(&g, 64).unwrap() {
            assert_eq!(g.order() % h.order(), 0, "{spec}: {h}");
            assert_eq!(subgroup_closure(&g, h.elements()), h);
            let dec = right_cosets(&g, &h).unwrap();
            let mut hit = vec![0; g.order()];
            for &r in &dec.reps {
                for &x in h.elements() {
                    hit[g.mul(x, r)] += 1;
                }
            }
            assert!(
                hit.iter().all(|&c| c == 1),
                "{spec}: cosets of {h} do not partition"
            );
        }
    }
}

#[test]
fn canonical_breve_sends_blocks_into_cosets() {
    for spec in MATRIX {
        let g = group(spec);
        let e = canonical_etls(g.clone(), &primary_chain(&g)).unwrap();
        let m = e.breve();
        let h = e.subgroup();
        for z in 0..e.lambda() {
            let rep = e.alpha2()[z];
            for x1 in 0..e.mu() {
                let elt = m.forward[z + e.lambda() * x1];
                assert!(
                    h.contains(g.mul(elt, g.inv(rep))),
                    "{spec}: block {z} leaves coset"
                );
            }
        }
    }
}

#[test]
fn symmetric_implies_two_transitive() {
    for spec in ["cyclic:6", "dihedral:4", "cyclic:2xcyclic:2"] {
        let eh =
            eh_generating_set(&EhConfig::standard(group(spec), true, vec![], 64).unwrap()).unwrap();
        let bsgs = schreier_sims(&eh.permutations()).unwrap();
        assert_eq!(*bsgs.order(), factorial(eh.degree()));
        assert_eq!(transitivity_degree(&eh.permutations(), eh.degree()), 2);
    }
}
