//! Permutation group algorithms: stabilizer chains, membership, orbits of
//! points and pairs, block systems, and an exhaustive closure used as an
//! independent check on the stabilizer chain.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::transforms::BlockSystem;

/// Largest degree accepted by [`brute_force_closure`].
pub const BRUTE_FORCE_MAX_DEGREE: usize = 8;

fn same_degree(p: &Permutation, q: &Permutation) -> Result<()> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(())
}

fn common_degree(gens: &[Permutation]) -> Result<Option<usize>> {
    let Some(first) = gens.first() else {
        return Ok(None);
    };
    for g in gens {
        same_degree(first, g)?;
    }
    Ok(Some(first.degree()))
}

/// Apply `p`, then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    same_degree(p, q)?;
    Ok(p.then(q))
}

/// `p^-1 s p`.
pub fn conjugate(s: &Permutation, p: &Permutation) -> Result<Permutation> {
    same_degree(s, p)?;
    Ok(p.inverse().then(s).then(p))
}

/// `+1` for even permutations, `-1` for odd ones.
pub fn parity(p: &Permutation) -> i8 {
    let moved: usize = p.cycles().iter().map(|c| c.len() - 1).sum();
    if moved.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// One level of the stabilizer chain: the stabilizer of points `0..k`
/// acting on point `k`.
#[derive(Debug, Clone)]
struct Level {
    /// `transversal[j]` maps `k` to `j` and fixes `0..k`.
    transversal: Vec<Option<Permutation>>,
    generators: Vec<Permutation>,
}

/// Stabilizer chain with base `0, 1, ..., n-1` (levels with trivial
/// orbits are skipped in [`Bsgs::base`]).
#[derive(Debug, Clone)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
    order: BigUint,
}

impl Bsgs {
    fn empty(degree: usize) -> Bsgs {
        let levels = (0..degree)
            .map(|k| {
                let mut transversal = vec![None; degree];
                transversal[k] = Some(Permutation::identity(degree));
                Level {
                    transversal,
                    generators: Vec::new(),
                }
            })
            .collect();
        Bsgs {
            degree,
            levels,
            order: BigUint::one(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Base points whose basic orbit is nontrivial.
    pub fn base(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&k| self.orbit_len(k) > 1)
            .collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.levels
            .iter()
            .flat_map(|l| l.generators.iter().cloned())
            .collect()
    }

    /// Basic orbit of base point `k` with coset representatives.
    pub fn transversal(&self, k: usize) -> Vec<(usize, &Permutation)> {
        self.levels[k]
            .transversal
            .iter()
            .enumerate()
            .filter_map(|(j, t)| t.as_ref().map(|t| (j, t)))
            .collect()
    }

    fn orbit_len(&self, k: usize) -> usize {
        self.levels[k]
            .transversal
            .iter()
            .filter(|t| t.is_some())
            .count()
    }

    /// Strips `g` through levels `k..`; `None` if it sifts to the identity.
    fn sift(&self, mut g: Permutation, from: usize) -> Option<(usize, Permutation)> {
        for k in from..self.degree {
            let j = g.apply(k);
            match &self.levels[k].transversal[j] {
                Some(t) => g = g.then(&t.inverse()),
                None => return Some((k, g)),
            }
        }
        debug_assert!(g.is_identity());
        None
    }

    /// Adds `g` (fixing `0..k`) to the generators of level `k`.
    fn add_generator(&mut self, k: usize, g: Permutation) {
        if k >= self.degree || self.sift(g.clone(), k).is_none() {
            return;
        }
        self.levels[k].generators.push(g.clone());
        let reps: Vec<Permutation> = self.levels[k]
            .transversal
            .iter()
            .flatten()
            .cloned()
            .collect();
        for t in reps {
            self.extend_orbit(k, t.then(&g));
        }
    }

    /// Records the element `t` of level `k`: a new orbit point or a
    /// Schreier generator for level `k + 1`.
    fn extend_orbit(&mut self, k: usize, t: Permutation) {
        let j = t.apply(k);
        match &self.levels[k].transversal[j] {
            Some(rep) => {
                let schreier = t.then(&rep.inverse());
                self.add_generator(k + 1, schreier);
            }
            None => {
                self.levels[k].transversal[j] = Some(t.clone());
                let gens = self.levels[k].generators.clone();
                for g in gens {
                    self.extend_orbit(k, t.then(&g));
                }
            }
        }
    }

    fn recompute_order(&mut self) {
        self.order = (0..self.degree).fold(BigUint::one(), |acc, k| {
            acc * BigUint::from(self.orbit_len(k))
        });
    }
}

/// Stabilizer chain of `<gens>`. An empty list gives the trivial group
/// of degree 0; use [`schreier_sims_with_degree`] to fix the degree.
pub fn schreier_sims(gens: &[Permutation]) -> Result<Bsgs> {
    let degree = common_degree(gens)?.unwrap_or(0);
    schreier_sims_with_degree(gens, degree)
}

pub fn schreier_sims_with_degree(gens: &[Permutation], degree: usize) -> Result<Bsgs> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(g.degree(), degree));
        }
    }
    let mut b = Bsgs::empty(degree);
    for g in gens {
        b.add_generator(0, g.clone());
    }
    b.recompute_order();
    Ok(b)
}

pub fn contains(b: &Bsgs, p: &Permutation) -> Result<bool> {
    if p.degree() != b.degree {
        return Err(Error::DegreeMismatch(p.degree(), b.degree));
    }
    Ok(b.sift(p.clone(), 0).is_none())
}

fn orbit_of_point(gens: &[Permutation], n: usize, start: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// 2 if `<gens>` is 2-transitive, 1 if only transitive, 0 otherwise.
pub fn transitivity_degree(gens: &[Permutation], degree: usize) -> u8 {
    if degree < 2 {
        return 1;
    }
    if !orbit_of_point(gens, degree, 0).iter().all(|&s| s) {
        return 0;
    }
    let mut seen = vec![false; degree * degree];
    seen[1] = true;
    let mut stack = vec![(0usize, 1usize)];
    let mut count = 1;
    while let Some((a, b)) = stack.pop() {
        for g in gens {
            let (c, d) = (g.apply(a), g.apply(b));
            if !seen[c * degree + d] {
                seen[c * degree + d] = true;
                count += 1;
                stack.push((c, d));
            }
        }
    }
    if count == degree * (degree - 1) {
        2
    } else {
        1
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// Finest block system in which `a` and `b` share a cell.
fn minimal_block_system(gens: &[Permutation], n: usize, a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    let mut pending = vec![(a, b)];
    while let Some((x, y)) = pending.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                pending.push((gx, gy));
            }
        }
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let r = uf.find(x);
        cells[r].push(x);
    }
    cells.into_iter().filter(|c| !c.is_empty()).collect()
}

fn refines(fine: &BlockSystem, coarse: &BlockSystem) -> bool {
    let cell = coarse.cell_of();
    fine.blocks()
        .iter()
        .all(|b| b.iter().all(|&x| cell[x] == cell[b[0]]))
}

/// Minimal nontrivial block systems of the transitive group `<gens>`;
/// empty when the group is primitive.
pub fn find_block_systems(gens: &[Permutation], degree: usize) -> Result<Vec<BlockSystem>> {
    if transitivity_degree(gens, degree) == 0 {
        return Err(Error::NotTransitive);
    }
    let mut found = BTreeSet::new();
    for k in 1..degree {
        let cells = minimal_block_system(gens, degree, 0, k);
        if cells.len() > 1 {
            found.insert(BlockSystem::new(cells)?);
        }
    }
    let found: Vec<BlockSystem> = found.into_iter().collect();
    Ok(found
        .iter()
        .filter(|s| !found.iter().any(|t| t != *s && refines(t, s)))
        .cloned()
        .collect())
}

/// Every element of `<gens>` by breadth-first products.
pub fn brute_force_closure(gens: &[Permutation], degree: usize) -> Result<HashSet<Permutation>> {
    if degree > BRUTE_FORCE_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree,
            limit: BRUTE_FORCE_MAX_DEGREE,
        });
    }
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(g.degree(), degree));
        }
    }
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(seen)
}

/// Summary of a permutation group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFacts {
    pub degree: usize,
    pub order: BigUint,
    pub is_symmetric: bool,
    pub is_alternating: bool,
    pub transitivity: u8,
    pub minimal_block_systems: Vec<BlockSystem>,
}

impl GroupFacts {
    /// `key=value` report lines.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "order={}", self.order);
        let _ = writeln!(out, "factorial={}", factorial(self.degree));
        let _ = writeln!(out, "is_symmetric={}", self.is_symmetric);
        let _ = writeln!(out, "is_alternating={}", self.is_alternating);
        let _ = writeln!(out, "transitivity={}", self.transitivity);
        let _ = writeln!(
            out,
            "blocks={}",
            format_block_systems(&self.minimal_block_systems)
        );
        out
    }
}

pub fn format_block_systems(systems: &[BlockSystem]) -> String {
    if systems.is_empty() {
        "none".to_string()
    } else {
        systems
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub fn analyze(gens: &[Permutation], degree: usize) -> Result<GroupFacts> {
    let bsgs = schreier_sims_with_degree(gens, degree)?;
    Ok(analyze_with(&bsgs, gens))
}

/// Like [`analyze`], reusing an existing stabilizer chain for `gens`.
pub fn analyze_with(bsgs: &Bsgs, gens: &[Permutation]) -> GroupFacts {
    let degree = bsgs.degree();
    let full = factorial(degree);
    let order = bsgs.order().clone();
    let transitivity = transitivity_degree(gens, degree);
    let minimal_block_systems = if transitivity >= 1 {
        find_block_systems(gens, degree).unwrap_or_default()
    } else {
        Vec::new()
    };
    GroupFacts {
        degree,
        is_symmetric: order == full,
        is_alternating: order.clone() * 2u32 == full,
        order,
        transitivity,
        minimal_block_systems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    fn sym4() -> Vec<Permutation> {
        vec![Permutation::transposition(4, 0, 1), p(&[1, 2, 3, 0])]
    }

    #[test]
    fn compose_and_conjugate() {
        let s = Permutation::transposition(3, 0, 1);
        let t = Permutation::transposition(3, 1, 2);
        assert_eq!(compose(&s, &t).unwrap(), p(&[2, 0, 1]));
        assert_eq!(compose(&s, &Permutation::identity(3)).unwrap(), s);
        assert!(compose(&s, &s.inverse()).unwrap().is_identity());
        assert_eq!(conjugate(&s, &Permutation::identity(3)).unwrap(), s);
        // (a b)^(a b c) = (b c)
        let abc = Permutation::cycle(3, &[0, 1, 2]).unwrap();
        assert_eq!(conjugate(&s, &abc).unwrap(), t);
        let pi = p(&[4, 2, 0, 1, 3]);
        let ab = Permutation::transposition(5, 1, 3);
        assert_eq!(
            conjugate(&ab, &pi).unwrap(),
            Permutation::transposition(5, pi.apply(1), pi.apply(3))
        );
        assert_eq!(
            compose(&s, &Permutation::identity(4)),
            Err(Error::DegreeMismatch(3, 4))
        );
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&Permutation::identity(5)), 1);
        assert_eq!(parity(&Permutation::transposition(5, 1, 4)), -1);
        assert_eq!(parity(&p(&[1, 2, 0])), 1);
    }

    #[test]
    fn schreier_sims_examples() {
        let b = schreier_sims(&sym4()).unwrap();
        assert_eq!(*b.order(), BigUint::from(24u32));
        assert_eq!(*schreier_sims(&[]).unwrap().order(), BigUint::one());
        assert_eq!(
            *schreier_sims_with_degree(&[], 5).unwrap().order(),
            BigUint::one()
        );
        for g in b.strong_generators() {
            assert!(contains(&b, &g).unwrap());
        }
        let product: BigUint = b
            .base()
            .iter()
            .map(|&k| BigUint::from(b.transversal(k).len()))
            .product();
        assert_eq!(product, *b.order());
    }

    #[test]
    fn large_symmetric_and_alternating() {
        let n = 12;
        let gens = vec![
            Permutation::transposition(n, 0, 1),
            crate::transforms::full_cycle(n),
        ];
        assert_eq!(*schreier_sims(&gens).unwrap().order(), factorial(12));
        // 3-cycles (0 1 2), (0 1 k) generate Alt(n)
        let alt: Vec<Permutation> = (2..n)
            .map(|k| Permutation::cycle(n, &[0, 1, k]).unwrap())
            .collect();
        let facts = analyze(&alt, n).unwrap();
        assert!(facts.is_alternating && !facts.is_symmetric);
        assert_eq!(facts.transitivity, 2);
    }

    #[test]
    fn membership() {
        // dihedral group of the square
        let gens = vec![p(&[1, 2, 3, 0]), p(&[0, 3, 2, 1])];
        let b = schreier_sims(&gens).unwrap();
        assert_eq!(*b.order(), BigUint::from(8u32));
        assert!(contains(&b, &Permutation::identity(4)).unwrap());
        assert!(!contains(&b, &Permutation::transposition(4, 0, 1)).unwrap());
        assert!(contains(&b, &p(&[2, 1, 0, 3])).unwrap());
        assert!(contains(&b, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn transitivity_examples() {
        assert_eq!(transitivity_degree(&sym4(), 4), 2);
        assert_eq!(
            transitivity_degree(&[Permutation::transposition(3, 0, 1)], 3),
            0
        );
        assert_eq!(transitivity_degree(&[p(&[1, 2, 3, 0])], 4), 1);
    }

    #[test]
    fn block_examples() {
        assert!(find_block_systems(&sym4(), 4).unwrap().is_empty());
        let square = vec![p(&[1, 2, 3, 0]), p(&[0, 3, 2, 1])];
        let blocks = find_block_systems(&square, 4).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].to_string(), "{{0,2},{1,3}}");
        // C6 has two minimal systems: pairs and triples are both minimal
        let c6 = vec![crate::transforms::full_cycle(6)];
        let sys: Vec<String> = find_block_systems(&c6, 6)
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(sys, ["{{0,2,4},{1,3,5}}", "{{0,3},{1,4},{2,5}}"]);
        assert_eq!(
            find_block_systems(&[Permutation::transposition(3, 0, 1)], 3),
            Err(Error::NotTransitive)
        );
    }

    #[test]
    fn closure_examples() {
        assert_eq!(brute_force_closure(&[], 4).unwrap().len(), 1);
        assert_eq!(
            brute_force_closure(&[Permutation::transposition(4, 0, 1)], 4)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(brute_force_closure(&sym4(), 4).unwrap().len(), 24);
        assert!(matches!(
            brute_force_closure(&[], 9),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn report_format() {
        let facts = analyze(&sym4(), 4).unwrap();
        assert_eq!(
            facts.to_report(),
            "order=24\nfactorial=24\nis_symmetric=true\nis_alternating=false\ntransitivity=2\nblocks=none\n"
        );
    }
}
