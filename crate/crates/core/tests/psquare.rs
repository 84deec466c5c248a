mod common;

use num_bigint::BigUint;

use common::{arrays, bfs_closure, group};
use pgm::permgroup::{factorial, find_block_systems, schreier_sims, transitivity_degree};
use pgm::transforms::{canonical_blocks, eh_generating_set, EhConfig};
use pgm::witnesses::psquare_extra_generator;

fn no_cross(spec: &str) -> Vec<pgm::Permutation> {
    eh_generating_set(&EhConfig::standard(group(spec), false, vec![], 64).unwrap())
        .unwrap()
        .permutations()
}

#[test]
fn cyclic_nine_order_by_independent_closure() {
    let gens = no_cross("cyclic:9");
    let closure = bfs_closure(&arrays(&gens), 9).len();
    assert_eq!(closure, 324);
    assert_eq!(
        *schreier_sims(&gens).unwrap().order(),
        BigUint::from(324u32)
    );
    // Every element acts on the three blocks with one common sign, so
    // the group is a quarter of the full wreath product of order 1296.
    let wreath = factorial(3).pow(3) * factorial(3);
    assert_eq!(BigUint::from(closure) * BigUint::from(4u32), wreath);
}

#[test]
fn cyclic_nine_is_imprimitive_and_not_two_transitive() {
    let gens = no_cross("cyclic:9");
    assert_eq!(transitivity_degree(&gens, 9), 1);
    assert!(find_block_systems(&gens, 9)
        .unwrap()
        .contains(&canonical_blocks(3, 3).unwrap()));
}

#[test]
fn extra_generator_moves_out_of_block_zero() {
    for p in [2usize, 3, 5] {
        let e = psquare_extra_generator(p, 64).unwrap();
        assert_eq!(e.apply(0), 0);
        assert_eq!(e.apply(p), 1);
        assert_ne!(e.apply(p) % p, 0);
    }
}

#[test]
fn extra_generator_completes_cyclic_nine() {
    let mut gens = no_cross("cyclic:9");
    gens.push(psquare_extra_generator(3, 64).unwrap());
    assert_eq!(*schreier_sims(&gens).unwrap().order(), factorial(9));
    assert!(find_block_systems(&gens, 9).unwrap().is_empty());
}
