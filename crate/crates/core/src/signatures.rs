//! Logarithmic signatures, exact-transversal signatures built from subgroup
//! chains, and the induced bijections `0..n -> G`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{
    join, make_group, parse_indices, right_cosets_within, GroupSpec, GroupTable, Subgroup,
    SubgroupChain,
};

/// Mixed-radix digits of an index, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackDigits {
    pub digits: Vec<usize>,
}

/// Splits `x` into digits for `radices`; the last radix is least
/// significant, so for two radices `(mu, lambda)` this is
/// `x = x2 + lambda * x1`.
pub fn knapsack_split(x: usize, radices: &[usize]) -> Result<KnapsackDigits> {
    let bound: usize = radices.iter().product();
    if x >= bound {
        return Err(Error::OutOfRange { value: x, bound });
    }
    let mut digits = vec![0; radices.len()];
    let mut rest = x;
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = rest % r;
        rest /= r;
    }
    Ok(KnapsackDigits { digits })
}

pub fn knapsack_compose(digits: &KnapsackDigits, radices: &[usize]) -> usize {
    digits
        .digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

/// Blocks whose ordered products factor every element of the group
/// exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSignature {
    group: Arc<GroupTable>,
    blocks: Vec<Vec<usize>>,
}

impl LogSignature {
    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn radices(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Product of the block entries selected by `digits`.
    pub fn evaluate(&self, digits: &[usize]) -> usize {
        self.blocks
            .iter()
            .zip(digits)
            .fold(0, |acc, (b, &d)| self.group.mul(acc, b[d]))
    }

    /// Signature file format: `s=`, `radices=`, then one line per block.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "s={}\nradices={}\n",
            self.blocks.len(),
            join(&self.radices())
        );
        for b in &self.blocks {
            out.push_str(&join(b));
            out.push('\n');
        }
        out
    }

    pub fn from_text(group: Arc<GroupTable>, text: &str) -> Result<LogSignature> {
        let lines: Vec<&str> = text.lines().collect();
        let (sig, used) = parse_signature_lines(group, &lines, 0)?;
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
        Ok(sig)
    }
}

pub(crate) fn parse_signature_lines(
    group: Arc<GroupTable>,
    lines: &[&str],
    start: usize,
) -> Result<(LogSignature, usize)> {
    let field = |idx: usize, key: &str| -> Result<&str> {
        lines
            .get(idx)
            .and_then(|l| l.trim().strip_prefix(key))
            .ok_or_else(|| Error::parse(idx + 1, format!("expected `{key}...`")))
    };
    let s: usize = field(start, "s=")?
        .trim()
        .parse()
        .map_err(|_| Error::parse(start + 1, "bad block count"))?;
    let radices = parse_indices(field(start + 1, "radices=")?, start + 2)?;
    if radices.len() != s || s == 0 {
        return Err(Error::parse(start + 2, format!("expected {s} radices")));
    }
    let mut blocks = Vec::with_capacity(s);
    for (i, &r) in radices.iter().enumerate() {
        let lineno = start + 3 + i;
        let line = lines
            .get(start + 2 + i)
            .ok_or_else(|| Error::parse(lineno, "missing block"))?;
        let block = parse_indices(line, lineno)?;
        if block.len() != r {
            return Err(Error::parse(
                lineno,
                format!("block {i} has {} entries, radix says {r}", block.len()),
            ));
        }
        blocks.push(block);
    }
    Ok((validate_log_signature(group, blocks)?, start + 2 + s))
}

/// Accepts `blocks` when every group element arises exactly once as
/// `blocks[0][x_1] * ... * blocks[s-1][x_s]`.
pub fn validate_log_signature(
    group: Arc<GroupTable>,
    blocks: Vec<Vec<usize>>,
) -> Result<LogSignature> {
    let n = group.order();
    if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
        return Err(Error::NotExactCover {
            element: 0,
            count: 0,
        });
    }
    for (i, b) in blocks.iter().enumerate() {
        let mut seen = vec![false; n];
        for &e in b {
            if e >= n {
                return Err(Error::OutOfRange { value: e, bound: n });
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::NotInjectiveBlock {
                    block: i,
                    element: e,
                });
            }
        }
    }
    let sig = LogSignature { group, blocks };
    let radices = sig.radices();
    let total = radices
        .iter()
        .try_fold(1usize, |a, &r| a.checked_mul(r))
        .unwrap_or(usize::MAX);
    let mut counts = vec![0usize; n];
    // Enumerate digit tuples only while the total is plausible; a product
    // larger than n repeats some element anyway.
    let limit = total.min(n + 1);
    let mut digits = vec![0; radices.len()];
    for _ in 0..limit {
        let e = sig.evaluate(&digits);
        counts[e] += 1;
        if counts[e] > 1 {
            return Err(Error::NotExactCover {
                element: e,
                count: counts[e],
            });
        }
        for (d, &r) in digits.iter_mut().zip(&radices).rev() {
            *d += 1;
            if *d < r {
                break;
            }
            *d = 0;
        }
    }
    if let Some(e) = counts.iter().position(|&c| c == 0) {
        return Err(Error::NotExactCover {
            element: e,
            count: 0,
        });
    }
    Ok(sig)
}

/// An exact-transversal signature: block `i` is a complete set of right
/// coset representatives of `levels[i-1]` in `levels[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Etls {
    signature: LogSignature,
    chain: SubgroupChain,
}

impl Etls {
    /// Checks the transversal property block by block.
    pub fn new(
        group: Arc<GroupTable>,
        chain: SubgroupChain,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Etls> {
        if chain.steps() < 2 {
            return Err(Error::ChainTooShort);
        }
        if blocks.len() != chain.steps() {
            return Err(Error::BadChain(format!(
                "{} blocks for a chain of {} steps",
                blocks.len(),
                chain.steps()
            )));
        }
        for (i, block) in blocks.iter().enumerate() {
            let cosets = right_cosets_within(&group, &chain.levels()[i], &chain.levels()[i + 1])?;
            let mut hit = vec![false; cosets.lambda()];
            if block.len() != cosets.lambda() {
                return Err(Error::NotExactCover {
                    element: block.first().copied().unwrap_or(0),
                    count: block.len(),
                });
            }
            for &e in block {
                let c = cosets.coset_of(e).ok_or(Error::NotInSubgroup(e))?;
                if std::mem::replace(&mut hit[c], true) {
                    return Err(Error::NotExactCover {
                        element: e,
                        count: 2,
                    });
                }
            }
        }
        let signature = validate_log_signature(group, blocks)?;
        Ok(Etls { signature, chain })
    }

    pub fn signature(&self) -> &LogSignature {
        &self.signature
    }

    pub fn chain(&self) -> &SubgroupChain {
        &self.chain
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.signature.group
    }

    /// First block; for a two-step chain this enumerates `H`.
    pub fn alpha1(&self) -> &[usize] {
        &self.signature.blocks[0]
    }

    /// Second block; for a two-step chain, the coset representatives of `H`.
    pub fn alpha2(&self) -> &[usize] {
        &self.signature.blocks[1]
    }

    /// `|H|` for a two-step chain.
    pub fn mu(&self) -> usize {
        self.alpha1().len()
    }

    /// `[G:H]` for a two-step chain.
    pub fn lambda(&self) -> usize {
        self.alpha2().len()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.chain.levels()[1]
    }

    /// Same chain, replacement blocks (revalidated).
    pub fn with_blocks(&self, blocks: Vec<Vec<usize>>) -> Result<Etls> {
        Etls::new(self.group().clone(), self.chain.clone(), blocks)
    }

    pub fn breve(&self) -> BreveMap {
        breve_map(&self.signature)
    }
}

/// Deterministic signature: each block lists minimal-index coset
/// representatives in increasing order. Block 1 is the first subgroup in
/// increasing order, so every block starts at the identity.
pub fn canonical_etls(group: Arc<GroupTable>, chain: &SubgroupChain) -> Result<Etls> {
    if chain.steps() < 2 {
        return Err(Error::ChainTooShort);
    }
    let blocks = chain
        .levels()
        .windows(2)
        .map(|w| right_cosets_within(&group, &w[0], &w[1]).map(|c| c.reps))
        .collect::<Result<Vec<_>>>()?;
    Etls::new(group, chain.clone(), blocks)
}

/// Seeded random signature: cosets in random order, each represented by
/// a uniformly chosen member.
pub fn random_etls(group: Arc<GroupTable>, chain: &SubgroupChain, seed: u64) -> Result<Etls> {
    if chain.steps() < 2 {
        return Err(Error::ChainTooShort);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(chain.steps());
    for w in chain.levels().windows(2) {
        let mut cosets = right_cosets_within(&group, &w[0], &w[1])?.cosets;
        cosets.shuffle(&mut rng);
        blocks.push(
            cosets
                .iter()
                .map(|c| c[rng.gen_range(0..c.len())])
                .collect(),
        );
    }
    Etls::new(group, chain.clone(), blocks)
}

/// The bijection `0..n -> G` of a signature, with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreveMap {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

impl BreveMap {
    pub fn degree(&self) -> usize {
        self.forward.len()
    }
}

pub fn breve_map(sig: &LogSignature) -> BreveMap {
    let n = sig.group.order();
    let radices = sig.radices();
    let forward: Vec<usize> = (0..n)
        .map(|x| {
            let d = knapsack_split(x, &radices).expect("radices multiply to n");
            sig.evaluate(&d.digits)
        })
        .collect();
    let mut backward = vec![0; n];
    for (x, &e) in forward.iter().enumerate() {
        backward[e] = x;
    }
    BreveMap { forward, backward }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// The signature `([a^0..a^(p-1)], [a^0, a^p, ..., a^(p(p-1))])` on the
/// cyclic group of order `p^2`; it is not exact-transversal.
pub fn psquare_gamma(p: usize, degree_limit: usize) -> Result<LogSignature> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = p.checked_mul(p).ok_or(Error::OrderOverflow {
        order: usize::MAX,
        limit: degree_limit,
    })?;
    let group = Arc::new(make_group(&GroupSpec::Cyclic(n), degree_limit)?);
    let first = (0..p).collect();
    let second = (0..p).map(|x| p * x).collect();
    validate_log_signature(group, vec![first, second])
}
