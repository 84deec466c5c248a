#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use pgm::group::{make_group, GroupTable, DEFAULT_DEGREE_LIMIT};
use pgm::signatures::{validate_log_signature, LogSignature};
use pgm::Permutation;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every group the suite exercises.
pub const MATRIX: &[&str] = &[
    "cyclic:6",
    "cyclic:8",
    "cyclic:10",
    "cyclic:12",
    "dihedral:3",
    "dihedral:4",
    "quaternion",
    "cyclic:2xcyclic:2",
    "cyclic:3xcyclic:3",
    "cyclic:2xcyclic:4",
    "cyclic:4",
    "cyclic:9",
];

/// Groups that are neither of prime order nor cyclic of prime-square order.
pub fn theorem_groups() -> Vec<&'static str> {
    MATRIX
        .iter()
        .copied()
        .filter(|g| !matches!(*g, "cyclic:4" | "cyclic:9"))
        .collect()
}

pub fn group(spec: &str) -> Arc<GroupTable> {
    Arc::new(make_group(&spec.parse().unwrap(), DEFAULT_DEGREE_LIMIT).unwrap())
}

/// Plain breadth-first closure over image arrays, with no degree cap.
pub fn bfs_closure(gens: &[Vec<usize>], n: usize) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen
}

pub fn arrays(perms: &[Permutation]) -> Vec<Vec<usize>> {
    perms.iter().map(|p| p.images().to_vec()).collect()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

/// Shuffles each block, then replaces the product `b_0 ... b_{s-1}` by
/// `u^-1 b_0 ... b_{s-1} w` for random `u`, `w`. The result is a
/// logarithmic signature that is usually not exact-transversal.
pub fn sandwich(sig: &LogSignature, rng: &mut impl Rng) -> LogSignature {
    let g = sig.group();
    let n = g.order();
    let mut blocks: Vec<Vec<usize>> = sig.blocks().to_vec();
    for b in &mut blocks {
        b.shuffle(rng);
    }
    let (u, w) = (rng.gen_range(0..n), rng.gen_range(0..n));
    let last = blocks.len() - 1;
    for x in &mut blocks[0] {
        *x = g.mul(g.inv(u), *x);
    }
    for x in &mut blocks[last] {
        *x = g.mul(*x, w);
    }
    validate_log_signature(g.clone(), blocks).unwrap()
}
