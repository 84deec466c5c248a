//! Finite groups given by explicit multiplication tables over `0..n`.
//!
//! Index 0 is always the identity. Subgroups, subgroup chains and right
//! coset decompositions are all expressed in terms of element indices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default bound on group orders (and permutation degrees).
pub const DEFAULT_DEGREE_LIMIT: usize = 64;

/// A finite group as a multiplication table with the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    /// Original index of the identity when `validate_table` had to relabel.
    relabeled_from: Option<usize>,
}

impl GroupTable {
    /// Builds a table from a closure. The closure must describe a group
    /// whose identity is 0; this is only checked in debug builds.
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> GroupTable {
        let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        let inv = inverses(&mul);
        let g = GroupTable {
            n,
            mul,
            inv,
            relabeled_from: None,
        };
        debug_assert!(g.check_associative().is_ok());
        g
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// If the raw table had its identity somewhere other than index 0,
    /// that index was swapped with 0 and is reported here.
    pub fn relabeled_from(&self) -> Option<usize> {
        self.relabeled_from
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|a| self.element_order(a) == self.n)
    }

    pub fn all_elements(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.n).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul[i][j];
                for k in 0..n {
                    if self.mul[ij][k] != self.mul[i][self.mul[j][k]] {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializes in the group file format: `n=<int>` then the table rows.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for row in &self.mul {
            out.push_str(&join(row));
            out.push('\n');
        }
        out
    }

    /// Parses a group file. Blank trailing lines are allowed, anything
    /// else after the table is rejected.
    pub fn from_text(text: &str) -> Result<GroupTable> {
        let lines: Vec<&str> = text.lines().collect();
        let (g, used) = parse_group_lines(&lines, 0)?;
        if let Some((i, l)) = lines
            .iter()
            .enumerate()
            .skip(used)
            .find(|(_, l)| !l.trim().is_empty())
        {
            return Err(Error::parse(
                i + 1,
                format!("trailing content `{}`", l.trim()),
            ));
        }
        Ok(g)
    }
}

/// Parses a group starting at `start`; returns the table and the index of
/// the first unconsumed line. Shared with the key file reader.
pub(crate) fn parse_group_lines(lines: &[&str], start: usize) -> Result<(GroupTable, usize)> {
    let header = lines
        .get(start)
        .ok_or_else(|| Error::parse(start + 1, "missing `n=` header"))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| {
            Error::parse(
                start + 1,
                format!("expected `n=<int>`, got `{}`", header.trim()),
            )
        })?;
    if n == 0 {
        return Err(Error::parse(start + 1, "group order must be positive"));
    }
    let mut raw = Vec::with_capacity(n);
    for r in 0..n {
        let lineno = start + 2 + r;
        let line = lines
            .get(start + 1 + r)
            .ok_or_else(|| Error::parse(lineno, "missing table row"))?;
        let row = parse_indices(line, lineno)?;
        if row.len() != n {
            return Err(Error::parse(
                lineno,
                format!("expected {n} entries, got {}", row.len()),
            ));
        }
        raw.push(row);
    }
    Ok((validate_table(raw)?, start + 1 + n))
}

pub(crate) fn parse_indices(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad integer `{t}`")))
        })
        .collect()
}

pub(crate) fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn inverses(mul: &[Vec<usize>]) -> Vec<usize> {
    mul.iter()
        .map(|row| {
            row.iter()
                .position(|&x| x == 0)
                .expect("latin square row contains identity")
        })
        .collect()
}

/// Checks a raw table for the group axioms. If the two-sided identity is
/// not at index 0 the labels 0 and `e` are swapped, which is recorded in
/// [`GroupTable::relabeled_from`].
pub fn validate_table(raw: Vec<Vec<usize>>) -> Result<GroupTable> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::NotLatinSquare("empty table".into()));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotLatinSquare(format!(
                "row {i} has length {}",
                row.len()
            )));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(Error::NotLatinSquare(format!(
                "entry {x} out of range in row {i}"
            )));
        }
    }
    for i in 0..n {
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for j in 0..n {
            if std::mem::replace(&mut seen_row[raw[i][j]], true) {
                return Err(Error::NotLatinSquare(format!(
                    "row {i} repeats {}",
                    raw[i][j]
                )));
            }
            if std::mem::replace(&mut seen_col[raw[j][i]], true) {
                return Err(Error::NotLatinSquare(format!(
                    "column {i} repeats {}",
                    raw[j][i]
                )));
            }
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|j| raw[e][j] == j && raw[j][e] == j))
        .ok_or(Error::NoIdentity)?;

    let (mul, relabeled_from) = if e == 0 {
        (raw, None)
    } else {
        let swap = |x: usize| {
            if x == 0 {
                e
            } else if x == e {
                0
            } else {
                x
            }
        };
        let mul = (0..n)
            .map(|i| (0..n).map(|j| swap(raw[swap(i)][swap(j)])).collect())
            .collect();
        (mul, Some(e))
    };
    let inv = inverses(&mul);
    let g = GroupTable {
        n,
        mul,
        inv,
        relabeled_from,
    };
    g.check_associative()?;
    Ok(g)
}

/// Descriptor for the built-in test groups, e.g. `cyclic:6`,
/// `dihedral:4`, `quaternion`, `symmetric:3` or `cyclic:2xcyclic:4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion,
    Symmetric(usize),
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    /// Order of the described group, `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(m) => Some(*m),
            GroupSpec::Dihedral(m) => m.checked_mul(2),
            GroupSpec::Quaternion => Some(8),
            GroupSpec::Symmetric(k) => (1..=*k).try_fold(1usize, |acc, i| acc.checked_mul(i)),
            GroupSpec::Product(fs) => fs
                .iter()
                .try_fold(1usize, |acc, f| acc.checked_mul(f.order()?)),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        let unknown = || Error::UnknownSpec(s.to_string());
        let s = s.trim();
        let parts: Vec<&str> = s.split(['x', '×', '*']).map(str::trim).collect();
        if parts.len() > 1 {
            return parts
                .iter()
                .map(|p| p.parse())
                .collect::<Result<Vec<_>>>()
                .map(GroupSpec::Product);
        }
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg.parse::<usize>().map_err(|_| unknown())?)),
            None => (s, None),
        };
        match (name, arg) {
            ("cyclic", Some(m)) if m >= 1 => Ok(GroupSpec::Cyclic(m)),
            ("dihedral", Some(m)) if m >= 1 => Ok(GroupSpec::Dihedral(m)),
            ("quaternion", None) => Ok(GroupSpec::Quaternion),
            ("symmetric", Some(k)) if (1..=5).contains(&k) => Ok(GroupSpec::Symmetric(k)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "cyclic:{m}"),
            GroupSpec::Dihedral(m) => write!(f, "dihedral:{m}"),
            GroupSpec::Quaternion => write!(f, "quaternion"),
            GroupSpec::Symmetric(k) => write!(f, "symmetric:{k}"),
            GroupSpec::Product(fs) => {
                let names: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", names.join("x"))
            }
        }
    }
}

/// Builds the table for a descriptor, refusing orders above `degree_limit`.
pub fn make_group(spec: &GroupSpec, degree_limit: usize) -> Result<GroupTable> {
    let order = spec.order().ok_or(Error::OrderOverflow {
        order: usize::MAX,
        limit: degree_limit,
    })?;
    if order > degree_limit {
        return Err(Error::OrderOverflow {
            order,
            limit: degree_limit,
        });
    }
    Ok(build(spec))
}

fn build(spec: &GroupSpec) -> GroupTable {
    match *spec {
        GroupSpec::Cyclic(m) => GroupTable::from_fn(m, |i, j| (i + j) % m),
        // r^i s^a stored at i + m*a
        GroupSpec::Dihedral(m) => GroupTable::from_fn(2 * m, |x, y| {
            let (i, a) = (x % m, x / m);
            let (k, b) = (y % m, y / m);
            let rot = if a == 0 { (i + k) % m } else { (i + m - k) % m };
            rot + m * ((a + b) % 2)
        }),
        // sign * unit stored at unit + 4*[negative], units 1, i, j, k
        GroupSpec::Quaternion => {
            const UNIT: [[(usize, bool); 4]; 4] = [
                [(0, false), (1, false), (2, false), (3, false)],
                [(1, false), (0, true), (3, false), (2, true)],
                [(2, false), (3, true), (0, true), (1, false)],
                [(3, false), (2, false), (1, true), (0, true)],
            ];
            GroupTable::from_fn(8, |x, y| {
                let (u, neg) = UNIT[x % 4][y % 4];
                u + 4 * ((x / 4 + y / 4 + neg as usize) % 2)
            })
        }
        GroupSpec::Symmetric(k) => {
            let perms = lex_permutations(k);
            let index: HashMap<&[usize], usize> = perms
                .iter()
                .enumerate()
                .map(|(i, p)| (p.as_slice(), i))
                .collect();
            GroupTable::from_fn(perms.len(), |a, b| {
                // left-to-right composition: apply a, then b
                let prod: Vec<usize> = perms[a].iter().map(|&x| perms[b][x]).collect();
                index[prod.as_slice()]
            })
        }
        GroupSpec::Product(ref fs) => {
            let mut acc = GroupTable::from_fn(1, |_, _| 0);
            for f in fs {
                let rhs = build(f);
                let m = acc.order();
                acc = GroupTable::from_fn(m * rhs.order(), |x, y| {
                    acc.mul(x % m, y % m) + m * rhs.mul(x / m, y / m)
                });
            }
            acc
        }
    }
}

fn lex_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// A subgroup as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Checks closure against `g` and wraps the sorted elements.
    pub fn new(g: &GroupTable, elements: impl IntoIterator<Item = usize>) -> Result<Subgroup> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        let elements: Vec<usize> = set.iter().copied().collect();
        let ok = set.contains(&0)
            && elements.iter().all(|&a| a < g.order())
            && elements.iter().all(|&a| {
                set.contains(&g.inv(a)) && elements.iter().all(|&b| set.contains(&g.mul(a, b)))
            });
        if !ok {
            return Err(Error::NotASubgroup(elements));
        }
        Ok(Subgroup { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&a| other.contains(a))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_closure(g: &GroupTable, gens: &[usize]) -> Subgroup {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    Subgroup {
        elements: (0..g.order()).filter(|&i| seen[i]).collect(),
    }
}

/// All nontrivial proper subgroups generated by at most two elements,
/// sorted by `(order, elements)`.
pub fn enumerate_proper_subgroups(g: &GroupTable, degree_limit: usize) -> Result<Vec<Subgroup>> {
    let n = g.order();
    if n > degree_limit {
        return Err(Error::DegreeTooLarge {
            degree: n,
            limit: degree_limit,
        });
    }
    let mut found = BTreeSet::new();
    for a in 1..n {
        for b in a..n {
            let s = subgroup_closure(g, &[a, b]);
            if s.order() < n {
                found.insert((s.order(), s));
            }
        }
    }
    Ok(found.into_iter().map(|(_, s)| s).collect())
}

/// Right cosets `H*rep` of `h` inside the subgroup `within`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    pub subgroup: Subgroup,
    pub reps: Vec<usize>,
    pub cosets: Vec<Vec<usize>>,
}

impl CosetDecomposition {
    /// The index `[G:H]`.
    pub fn lambda(&self) -> usize {
        self.reps.len()
    }

    /// The subgroup order `|H|`.
    pub fn mu(&self) -> usize {
        self.subgroup.order()
    }

    /// Index of the coset containing `a`.
    pub fn coset_of(&self, a: usize) -> Option<usize> {
        self.cosets.iter().position(|c| c.contains(&a))
    }
}

/// Canonical right cosets of `h` in `g`: each representative is the
/// smallest element index not yet covered.
pub fn right_cosets(g: &GroupTable, h: &Subgroup) -> Result<CosetDecomposition> {
    right_cosets_within(g, h, &g.all_elements())
}

/// Canonical right cosets of `h` in an overgroup `within`.
pub fn right_cosets_within(
    g: &GroupTable,
    h: &Subgroup,
    within: &Subgroup,
) -> Result<CosetDecomposition> {
    Subgroup::new(g, h.elements().iter().copied())?;
    if !h.is_subset_of(within) {
        return Err(Error::NotASubgroup(h.elements().to_vec()));
    }
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    let mut cosets = Vec::new();
    for &x in within.elements() {
        if covered[x] {
            continue;
        }
        let mut coset: Vec<usize> = h.elements().iter().map(|&e| g.mul(e, x)).collect();
        coset.sort_unstable();
        for &c in &coset {
            covered[c] = true;
        }
        reps.push(x);
        cosets.push(coset);
    }
    Ok(CosetDecomposition {
        subgroup: h.clone(),
        reps,
        cosets,
    })
}

/// `{1} = G_0 < G_1 < ... < G_s = G`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupChain {
    levels: Vec<Subgroup>,
}

impl SubgroupChain {
    pub fn new(g: &GroupTable, levels: Vec<Subgroup>) -> Result<SubgroupChain> {
        let first = levels
            .first()
            .ok_or_else(|| Error::BadChain("empty chain".into()))?;
        if first.elements() != [0] {
            return Err(Error::BadChain(
                "chain must start at the trivial subgroup".into(),
            ));
        }
        if levels.last().map(Subgroup::order) != Some(g.order()) {
            return Err(Error::BadChain("chain must end at the whole group".into()));
        }
        for w in levels.windows(2) {
            if !(w[0].is_subset_of(&w[1]) && w[0].order() < w[1].order()) {
                return Err(Error::BadChain(format!(
                    "{} is not properly contained in {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(SubgroupChain { levels })
    }

    /// `{1} < H_1 < ... < H_k < G` from the intermediate subgroups.
    pub fn through(g: &GroupTable, intermediate: &[Subgroup]) -> Result<SubgroupChain> {
        let mut levels = vec![g.trivial_subgroup()];
        levels.extend(intermediate.iter().cloned());
        if g.order() > 1 {
            levels.push(g.all_elements());
        }
        SubgroupChain::new(g, levels)
    }

    pub fn levels(&self) -> &[Subgroup] {
        &self.levels
    }

    /// Number of steps `s`.
    pub fn steps(&self) -> usize {
        self.levels.len() - 1
    }
}
