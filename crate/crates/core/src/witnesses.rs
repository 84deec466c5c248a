//! Explicit words in the structured generating set that witness
//! 2-transitivity, a 3-cycle, and an odd permutation.
//!
//! A word is a list of named elements ([`Family`]) and their product.
//! Every named element is itself a round function, and
//! [`ProofContext::expand`] rewrites a word into letters that are literal
//! members of the generating set (or their inverses).

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{make_group, GroupSpec, GroupTable, SubgroupChain};
use crate::perm::Permutation;
use crate::permgroup::{contains, parity, schreier_sims_with_degree, Bsgs};
use crate::signatures::{canonical_etls, psquare_gamma};
use crate::transforms::{eh_generating_set, full_cycle, pgm_transform, EhConfig, EhSet, Family};

/// A named element, possibly inverted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub family: Family,
    pub inverse: bool,
}

impl Factor {
    fn new(family: Family) -> Factor {
        Factor {
            family,
            inverse: false,
        }
    }

    fn inverted(family: Family) -> Factor {
        Factor {
            family,
            inverse: true,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            self.family,
            if self.inverse { "^-1" } else { "" }
        )
    }
}

/// A reference to a generator by index, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessWord {
    pub factors: Vec<Factor>,
    pub product: Permutation,
}

impl WitnessWord {
    /// Mirror image: reversed factors, each inverted.
    pub fn inverse(&self) -> WitnessWord {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| Factor {
                family: f.family.clone(),
                inverse: !f.inverse,
            })
            .collect();
        WitnessWord {
            factors,
            product: self.product.inverse(),
        }
    }

    /// One factor per line, then the product.
    pub fn to_text(&self) -> String {
        let mut out: String = self.factors.iter().map(|f| format!("{f}\n")).collect();
        out.push_str(&format!("{}\n", self.product));
        out
    }

    /// Reads a word and checks that its factors multiply to its product.
    pub fn from_text(ctx: &ProofContext, text: &str) -> Result<WitnessWord> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let (last, rest) = lines
            .split_last()
            .ok_or_else(|| Error::parse(1, "empty witness"))?;
        let factors = rest
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let (body, inverse) = match l.strip_suffix("^-1") {
                    Some(b) => (b, true),
                    None => (*l, false),
                };
                body.parse::<Family>()
                    .map(|family| Factor { family, inverse })
                    .map_err(|_| Error::parse(i + 1, format!("bad factor `{l}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let product: Permutation = last
            .parse()
            .map_err(|_| Error::parse(lines.len(), "bad product"))?;
        let word = WitnessWord { factors, product };
        if ctx.evaluate(&word.factors)? != word.product {
            return Err(Error::parse(
                lines.len(),
                "product does not match the factors",
            ));
        }
        Ok(word)
    }
}

/// Everything the constructions need: the generating set, its named
/// generators and the stabilizer chain of the group they generate.
#[derive(Debug, Clone)]
pub struct ProofContext {
    eh: EhSet,
    bsgs: Bsgs,
    index: HashMap<Family, usize>,
}

impl ProofContext {
    pub fn new(cfg: &EhConfig) -> Result<ProofContext> {
        let eh = eh_generating_set(cfg)?;
        let bsgs = schreier_sims_with_degree(&eh.permutations(), eh.degree())?;
        let index = eh
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.family.clone(), i))
            .collect();
        Ok(ProofContext { eh, bsgs, index })
    }

    /// Context with the default subgroup choice.
    pub fn standard(
        group: Arc<GroupTable>,
        include_cross: bool,
        seeds: Vec<u64>,
        degree_limit: usize,
    ) -> Result<ProofContext> {
        ProofContext::new(&EhConfig::standard(
            group,
            include_cross,
            seeds,
            degree_limit,
        )?)
    }

    pub fn eh(&self) -> &EhSet {
        &self.eh
    }

    pub fn bsgs(&self) -> &Bsgs {
        &self.bsgs
    }

    pub fn degree(&self) -> usize {
        self.eh.degree()
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.eh.group()
    }

    pub fn factor_perm(&self, f: &Factor) -> Result<Permutation> {
        let p = self.eh.realize(&f.family)?;
        Ok(if f.inverse { p.inverse() } else { p })
    }

    /// Left-to-right product of the factors.
    pub fn evaluate(&self, factors: &[Factor]) -> Result<Permutation> {
        factors
            .iter()
            .try_fold(Permutation::identity(self.degree()), |acc, f| {
                Ok(acc.then(&self.factor_perm(f)?))
            })
    }

    pub fn letter_perm(&self, l: Letter) -> Permutation {
        let p = &self.eh.generators()[l.generator].perm;
        if l.inverse {
            p.inverse()
        } else {
            p.clone()
        }
    }

    fn generator_index(&self, family: &Family) -> Result<usize> {
        self.index
            .get(family)
            .copied()
            .ok_or_else(|| Error::Construction(format!("{family} is not in the generating set")))
    }

    /// Rewrites `word` into generating-set letters with the same product.
    pub fn expand(&self, word: &WitnessWord) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for f in &word.factors {
            let mut letters = self.expand_family(&f.family)?;
            if f.inverse {
                letters.reverse();
                for l in &mut letters {
                    l.inverse = !l.inverse;
                }
            }
            out.extend(letters);
        }
        Ok(out)
    }

    fn expand_family(&self, family: &Family) -> Result<Vec<Letter>> {
        let sym_letters =
            |tau: &Permutation, make: &dyn Fn(Permutation) -> Family| -> Result<Vec<Letter>> {
                let k = tau.degree();
                let swap = self.generator_index(&make(Permutation::transposition(k, 0, 1)))?;
                let cycle = if k > 2 {
                    self.generator_index(&make(full_cycle(k)))?
                } else {
                    swap
                };
                Ok(sym_word(tau)
                    .into_iter()
                    .map(|(is_cycle, inverse)| Letter {
                        generator: if is_cycle { cycle } else { swap },
                        inverse,
                    })
                    .collect())
            };
        match family {
            Family::Blockwise(tau) => sym_letters(tau, &Family::Blockwise),
            Family::Diagonal(tau) => sym_letters(tau, &Family::Diagonal),
            Family::Regular { block, element } => {
                subgroup_word(self.group(), self.eh.subgroup_gens(), *element)?
                    .into_iter()
                    .map(|g| {
                        self.generator_index(&Family::Regular {
                            block: *block,
                            element: g,
                        })
                        .map(|generator| Letter {
                            generator,
                            inverse: false,
                        })
                    })
                    .collect()
            }
            Family::Cross(_) => Ok(vec![Letter {
                generator: self.generator_index(family)?,
                inverse: false,
            }]),
        }
    }

    fn block(&self, x: usize) -> usize {
        x % self.eh.lambda()
    }

    fn coord(&self, x: usize) -> usize {
        x / self.eh.lambda()
    }

    fn alpha1(&self, c: usize) -> usize {
        self.eh.alpha().alpha1()[c]
    }

    /// Element `h` of `H` with `alpha1(from) * h = alpha1(to)`.
    fn mover_in_subgroup(&self, from: usize, to: usize) -> usize {
        let g = self.group();
        g.mul(g.inv(self.alpha1(from)), self.alpha1(to))
    }

    /// Points in different blocks to points in different blocks: one
    /// blockwise factor, then one regular factor in each target block.
    fn split_to_split(&self, x: usize, x2: usize, y: usize, y2: usize) -> Vec<Factor> {
        let lambda = self.eh.lambda();
        let tau = prescribed(
            lambda,
            &[
                (self.block(x), self.block(y)),
                (self.block(x2), self.block(y2)),
            ],
        );
        vec![
            Factor::new(Family::Blockwise(tau)),
            Factor::new(Family::Regular {
                block: self.block(y),
                element: self.mover_in_subgroup(self.coord(x), self.coord(y)),
            }),
            Factor::new(Family::Regular {
                block: self.block(y2),
                element: self.mover_in_subgroup(self.coord(x2), self.coord(y2)),
            }),
        ]
    }

    /// Points in one block to points in one block: carry the block, then
    /// a diagonal factor.
    fn joint_to_joint(&self, x: usize, x2: usize, y: usize, y2: usize) -> Vec<Factor> {
        let tau = prescribed(self.eh.lambda(), &[(self.block(x), self.block(y))]);
        let sigma = prescribed(
            self.eh.mu(),
            &[
                (self.coord(x), self.coord(y)),
                (self.coord(x2), self.coord(y2)),
            ],
        );
        vec![
            Factor::new(Family::Blockwise(tau)),
            Factor::new(Family::Diagonal(sigma)),
        ]
    }

    /// Points in one block to points in different blocks: bring `x2` to 0
    /// and `x` into `B_0`, separate them with a cross transform that fixes
    /// 0, then finish as in the split case.
    fn joint_to_split(&self, x: usize, x2: usize, y: usize, y2: usize) -> Result<Vec<Factor>> {
        if !self.eh.has_cross() {
            return Err(Error::MissingSecondarySubgroup);
        }
        let (lambda, mu) = (self.eh.lambda(), self.eh.mu());
        let carry = Permutation::transposition(lambda, 0, self.block(x));
        let settle = Permutation::transposition(mu, 0, self.coord(x2));
        let moved = settle.apply(self.coord(x));
        let kind = self.eh.cross_for(self.alpha1(moved))?;
        let mut factors = vec![
            Factor::new(Family::Blockwise(carry)),
            Factor::new(Family::Diagonal(settle)),
            Factor::new(Family::Cross(kind)),
        ];
        let z = self.evaluate(&factors)?.apply(x);
        if self.block(z) == 0 {
            return Err(Error::Construction(format!(
                "cross transform left point {x} in B_0"
            )));
        }
        factors.extend(self.split_to_split(z, 0, y, y2));
        Ok(factors)
    }
}

/// Permutation of `0..k` with the given `(from, to)` pairs, the remaining
/// points mapped in increasing order onto the remaining targets.
fn prescribed(k: usize, pairs: &[(usize, usize)]) -> Permutation {
    let mut images = vec![usize::MAX; k];
    let mut used = vec![false; k];
    for &(a, b) in pairs {
        images[a] = b;
        used[b] = true;
    }
    let mut free = (0..k).filter(|&b| !used[b]);
    for img in images.iter_mut().filter(|i| **i == usize::MAX) {
        *img = free.next().expect("prescribed pairs are injective");
    }
    Permutation::from_images_unchecked(images)
}

/// Word for `tau` in `t = (0 1)` and `c = (i -> i+1)`; entries are
/// `(is_cycle, inverse)`. Built from adjacent transpositions
/// `(i i+1) = c^-i t c^i`.
pub fn sym_word(tau: &Permutation) -> Vec<(bool, bool)> {
    let mut arr = tau.images().to_vec();
    let mut swaps = Vec::new();
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for i in 0..arr.len().saturating_sub(1) {
            if arr[i] > arr[i + 1] {
                arr.swap(i, i + 1);
                swaps.push(i);
                sorted = false;
            }
        }
    }
    let mut word = Vec::new();
    for i in swaps {
        word.extend(std::iter::repeat_n((true, true), i));
        word.push((false, false));
        word.extend(std::iter::repeat_n((true, false), i));
    }
    word
}

/// Shortest word `g_1 g_2 ... = h` over the subgroup generators.
fn subgroup_word(g: &GroupTable, gens: &[usize], h: usize) -> Result<Vec<usize>> {
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        if x == h {
            let mut word = Vec::new();
            let mut cur = h;
            while cur != 0 {
                let (p, s) = prev[&cur];
                word.push(s);
                cur = p;
            }
            word.reverse();
            return Ok(word);
        }
        for &s in gens {
            let y = g.mul(x, s);
            if y != 0 && !prev.contains_key(&y) {
                prev.insert(y, (x, s));
                queue.push_back(y);
            }
        }
    }
    Err(Error::NotInSubgroup(h))
}

fn finish(ctx: &ProofContext, factors: Vec<Factor>) -> Result<WitnessWord> {
    let product = ctx.evaluate(&factors)?;
    Ok(WitnessWord { factors, product })
}

/// A word whose product sends `x -> y` and `x2 -> y2`.
pub fn mover_two_transitive(
    ctx: &ProofContext,
    x: usize,
    x2: usize,
    y: usize,
    y2: usize,
) -> Result<WitnessWord> {
    let n = ctx.degree();
    for v in [x, x2, y, y2] {
        if v >= n {
            return Err(Error::OutOfRange { value: v, bound: n });
        }
    }
    if x == x2 || y == y2 {
        return Err(Error::DegenerateInput(format!(
            "pairs ({x},{x2}) and ({y},{y2}) must have distinct entries"
        )));
    }
    let joint_src = ctx.block(x) == ctx.block(x2);
    let joint_dst = ctx.block(y) == ctx.block(y2);
    let word = match (joint_src, joint_dst) {
        (false, false) => finish(ctx, ctx.split_to_split(x, x2, y, y2))?,
        (true, true) => finish(ctx, ctx.joint_to_joint(x, x2, y, y2))?,
        (true, false) => finish(ctx, ctx.joint_to_split(x, x2, y, y2)?)?,
        (false, true) => finish(ctx, ctx.joint_to_split(y, y2, x, x2)?)?.inverse(),
    };
    if word.product.apply(x) != y || word.product.apply(x2) != y2 {
        return Err(Error::Construction(format!(
            "word for ({x},{x2}) -> ({y},{y2}) misses its endpoints"
        )));
    }
    Ok(word)
}

/// For odd `n`: `pi^-1 sigma pi sigma`, where `sigma` is the diagonal
/// transposition of coordinates `a`, `b` and `pi` a regular permutation
/// of `block` taking `a` to `b`. The product is a 3-cycle on `block`.
pub fn three_cycle_odd(
    ctx: &ProofContext,
    block: usize,
    a: usize,
    b: usize,
) -> Result<WitnessWord> {
    let n = ctx.degree();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDegree(n));
    }
    let (lambda, mu) = (ctx.eh.lambda(), ctx.eh.mu());
    if block >= lambda || a >= mu || b >= mu || a == b {
        return Err(Error::BadBlockCoordinates(format!(
            "block {block} of {lambda}, coordinates {a}, {b} of {mu}"
        )));
    }
    let sigma = Family::Diagonal(Permutation::transposition(mu, a, b));
    let pi = Family::Regular {
        block,
        element: ctx.mover_in_subgroup(a, b),
    };
    let word = finish(
        ctx,
        vec![
            Factor::inverted(pi.clone()),
            Factor::new(sigma.clone()),
            Factor::new(pi),
            Factor::new(sigma),
        ],
    )?;
    let cycles = word.product.cycles();
    if cycles.len() != 1 || cycles[0].len() != 3 || cycles[0].iter().any(|&p| p % lambda != block) {
        return Err(Error::Construction(format!(
            "product {} is not a 3-cycle on block {block}",
            word.product
        )));
    }
    Ok(word)
}

/// An odd element: a regular transposition when `|H| = 2`, a swap of two
/// blocks when `|H|` is odd, otherwise the first odd generator.
pub fn odd_parity_generator(ctx: &ProofContext) -> Result<WitnessWord> {
    let (lambda, mu) = (ctx.eh.lambda(), ctx.eh.mu());
    let family = if mu == 2 {
        Family::Regular {
            block: 0,
            element: ctx.alpha1(1),
        }
    } else if mu % 2 == 1 {
        Family::Blockwise(Permutation::transposition(lambda, 0, 1))
    } else {
        ctx.eh
            .generators()
            .iter()
            .find(|g| parity(&g.perm) == -1)
            .map(|g| g.family.clone())
            .ok_or(Error::NoOddGenerator)?
    };
    let word = finish(ctx, vec![Factor::new(family)])?;
    debug_assert_eq!(parity(&word.product), -1);
    Ok(word)
}

/// `alpha^ o gamma^-1` on the cyclic group of order `p^2`, with `alpha`
/// the canonical signature and `gamma` from [`psquare_gamma`].
pub fn psquare_extra_generator(p: usize, degree_limit: usize) -> Result<Permutation> {
    let gamma = psquare_gamma(p, degree_limit)?;
    let group: Arc<GroupTable> = Arc::new(make_group(&GroupSpec::Cyclic(p * p), degree_limit)?);
    let h = crate::group::subgroup_closure(&group, &[p]);
    let alpha = canonical_etls(group.clone(), &SubgroupChain::through(&group, &[h])?)?;
    pgm_transform(&alpha.breve(), &crate::signatures::breve_map(&gamma))
}

/// Whether the word's product lies in the generated group.
pub fn is_member(ctx: &ProofContext, word: &WitnessWord) -> Result<bool> {
    contains(&ctx.bsgs, &word.product)
}
