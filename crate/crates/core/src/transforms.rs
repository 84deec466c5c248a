//! Round functions `x -> (x alpha^)(beta^)^-1` and the structured families
//! that generate them: blockwise, regular and diagonal permutations with
//! respect to the right cosets of a subgroup `H`, plus transforms through
//! signatures over a second subgroup `K`.
//!
//! Points of `0..n` are written `x = x2 + lambda * x1`; the block `B_z`
//! is the set of points with `x2 = z`, one block per right coset of `H`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    enumerate_proper_subgroups, subgroup_closure, GroupTable, Subgroup, SubgroupChain,
};
use crate::perm::Permutation;
use crate::signatures::{canonical_etls, random_etls, BreveMap, Etls};

/// `x -> b.backward[a.forward[x]]`.
pub fn pgm_transform(a: &BreveMap, b: &BreveMap) -> Result<Permutation> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(Permutation::from_images_unchecked(
        a.forward.iter().map(|&e| b.backward[e]).collect(),
    ))
}

/// `x2 + lambda*x1 -> (x2 tau) + lambda*x1`.
pub fn blockwise_perm(tau: &Permutation, lambda: usize, mu: usize) -> Result<Permutation> {
    if tau.degree() != lambda {
        return Err(Error::DegreeMismatch(tau.degree(), lambda));
    }
    let images = (0..lambda * mu)
        .map(|x| tau.apply(x % lambda) + lambda * (x / lambda))
        .collect();
    Ok(Permutation::from_images_unchecked(images))
}

/// `x2 + lambda*x1 -> x2 + lambda*(x1 tau)`, the same `tau` on every block.
pub fn diagonal_perm(tau: &Permutation, lambda: usize, mu: usize) -> Result<Permutation> {
    if tau.degree() != mu {
        return Err(Error::DegreeMismatch(tau.degree(), mu));
    }
    let images = (0..lambda * mu)
        .map(|x| x % lambda + lambda * tau.apply(x / lambda))
        .collect();
    Ok(Permutation::from_images_unchecked(images))
}

/// Right multiplication by `h` on `H`, pulled back through `alpha1`.
pub fn regular_action(e: &Etls, h: usize) -> Result<Permutation> {
    if e.chain().steps() != 2 {
        return Err(Error::BadConfig(
            "regular permutations need a two-step chain".into(),
        ));
    }
    if !e.subgroup().contains(h) {
        return Err(Error::NotInSubgroup(h));
    }
    let g = e.group();
    let alpha1 = e.alpha1();
    let mut pos = vec![0; g.order()];
    for (i, &a) in alpha1.iter().enumerate() {
        pos[a] = i;
    }
    Ok(Permutation::from_images_unchecked(
        alpha1.iter().map(|&a| pos[g.mul(a, h)]).collect(),
    ))
}

/// Identity off `B_z0`; on `B_z0`, `z0 + lambda*x1 -> z0 + lambda*(x1 tau_h)`.
pub fn regular_perm(e: &Etls, z0: usize, h: usize) -> Result<Permutation> {
    let tau = regular_action(e, h)?;
    let lambda = e.lambda();
    if z0 >= lambda {
        return Err(Error::BadBlockIndex { index: z0, lambda });
    }
    let images = (0..e.group().order())
        .map(|x| {
            if x % lambda == z0 {
                z0 + lambda * tau.apply(x / lambda)
            } else {
                x
            }
        })
        .collect();
    Ok(Permutation::from_images_unchecked(images))
}

/// A partition of `0..n` into `lambda >= 2` cells of equal size `mu >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Sorts the cells (each internally, then by first element).
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<BlockSystem> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let lambda = blocks.len();
        let mu = blocks.first().map_or(0, Vec::len);
        if lambda < 2 || mu < 2 || blocks.iter().any(|b| b.len() != mu) {
            return Err(Error::BadShape { lambda, mu });
        }
        let mut flat: Vec<usize> = blocks.concat();
        flat.sort_unstable();
        if flat.iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::BadShape { lambda, mu });
        }
        Ok(BlockSystem { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn lambda(&self) -> usize {
        self.blocks.len()
    }

    pub fn mu(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn degree(&self) -> usize {
        self.lambda() * self.mu()
    }

    /// Cell index of every point.
    pub fn cell_of(&self) -> Vec<usize> {
        let mut cell = vec![0; self.degree()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                cell[x] = i;
            }
        }
        cell
    }

    /// Whether `p` maps every cell onto a cell.
    pub fn is_respected_by(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree() {
            return false;
        }
        let cell = self.cell_of();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| cell[p.apply(x)] == cell[p.apply(b[0])]))
    }
}

impl fmt::Display for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                format!(
                    "{{{}}}",
                    b.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "{{{}}}", cells.join(","))
    }
}

/// `B_z = {z + lambda*x1}` for `z` in `0..lambda`.
pub fn canonical_blocks(lambda: usize, mu: usize) -> Result<BlockSystem> {
    if lambda < 2 || mu < 2 {
        return Err(Error::BadShape { lambda, mu });
    }
    BlockSystem::new(
        (0..lambda)
            .map(|z| (0..mu).map(|x1| z + lambda * x1).collect())
            .collect(),
    )
}

/// New signature with `beta2(x2) = alpha2(x2 tau)`.
pub fn reorder_cosets(e: &Etls, tau: &Permutation) -> Result<Etls> {
    if tau.degree() != e.lambda() {
        return Err(Error::DegreeMismatch(tau.degree(), e.lambda()));
    }
    let alpha2 = e.alpha2();
    let beta2 = (0..e.lambda()).map(|x2| alpha2[tau.apply(x2)]).collect();
    e.with_blocks(vec![e.alpha1().to_vec(), beta2])
}

/// New signature with `beta1(x1) = alpha1(x1 tau)`.
pub fn reorder_subgroup(e: &Etls, tau: &Permutation) -> Result<Etls> {
    if tau.degree() != e.mu() {
        return Err(Error::DegreeMismatch(tau.degree(), e.mu()));
    }
    let alpha1 = e.alpha1();
    let beta1 = (0..e.mu()).map(|x1| alpha1[tau.apply(x1)]).collect();
    e.with_blocks(vec![beta1, e.alpha2().to_vec()])
}

/// New signature with `beta2(z0) = h * alpha2(z0)`.
pub fn shift_coset_rep(e: &Etls, z0: usize, h: usize) -> Result<Etls> {
    if z0 >= e.lambda() {
        return Err(Error::BadBlockIndex {
            index: z0,
            lambda: e.lambda(),
        });
    }
    if !e.subgroup().contains(h) {
        return Err(Error::NotInSubgroup(h));
    }
    let mut beta2 = e.alpha2().to_vec();
    beta2[z0] = e.group().mul(h, beta2[z0]);
    e.with_blocks(vec![e.alpha1().to_vec(), beta2])
}

/// Picks `H` of smallest order (order 2 when `n` is even) and, when one
/// exists, `K` of the next larger order; otherwise, when every proper
/// subgroup has the same prime order, `K` is the next such subgroup.
pub fn choose_subgroups(
    g: &GroupTable,
    degree_limit: usize,
) -> Result<(Subgroup, Option<Subgroup>)> {
    let subs = enumerate_proper_subgroups(g, degree_limit)?;
    let h = subs.first().cloned().ok_or(Error::ChainTooShort)?;
    let k = subs
        .iter()
        .find(|s| s.order() > h.order())
        .or_else(|| subs.get(1))
        .cloned();
    Ok((h, k))
}

/// Which signature over `K` a cross transform uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CrossKind {
    /// Minimal-index signature over `K`.
    Canonical,
    /// Canonical signature adjusted so the transform fixes 0 and moves
    /// the point of `h` in `B_0` out of `B_0`.
    Adjusted(usize),
    Seeded(u64),
}

/// A named element of the transformation set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Blockwise(Permutation),
    Regular { block: usize, element: usize },
    Diagonal(Permutation),
    Cross(CrossKind),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let csv = |p: &Permutation| {
            p.images()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Family::Blockwise(t) => write!(f, "blockwise({})", csv(t)),
            Family::Regular { block, element } => write!(f, "regular({block},{element})"),
            Family::Diagonal(t) => write!(f, "diagonal({})", csv(t)),
            Family::Cross(CrossKind::Canonical) => write!(f, "cross(canonical)"),
            Family::Cross(CrossKind::Adjusted(h)) => write!(f, "cross(adjusted,{h})"),
            Family::Cross(CrossKind::Seeded(s)) => write!(f, "cross(seeded,{s})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        let bad = || Error::parse(1, format!("bad factor `{s}`"));
        let (name, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let args: Vec<&str> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(str::trim)
            .collect();
        let nums = || {
            args.iter()
                .map(|a| a.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
        };
        match (name, args.as_slice()) {
            ("blockwise", _) => Ok(Family::Blockwise(Permutation::from_images(nums()?)?)),
            ("diagonal", _) => Ok(Family::Diagonal(Permutation::from_images(nums()?)?)),
            ("regular", [b, h]) => Ok(Family::Regular {
                block: b.parse().map_err(|_| bad())?,
                element: h.parse().map_err(|_| bad())?,
            }),
            ("cross", ["canonical"]) => Ok(Family::Cross(CrossKind::Canonical)),
            ("cross", ["adjusted", h]) => Ok(Family::Cross(CrossKind::Adjusted(
                h.parse().map_err(|_| bad())?,
            ))),
            ("cross", ["seeded", v]) => Ok(Family::Cross(CrossKind::Seeded(
                v.parse().map_err(|_| bad())?,
            ))),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub family: Family,
    pub perm: Permutation,
}

/// Inputs for assembling a generating set.
#[derive(Debug, Clone)]
pub struct EhConfig {
    pub group: Arc<GroupTable>,
    pub primary_chain: SubgroupChain,
    pub secondary_chain: Option<SubgroupChain>,
    pub include_cross: bool,
    pub seeds: Vec<u64>,
}

impl EhConfig {
    /// Configuration following [`choose_subgroups`].
    pub fn standard(
        group: Arc<GroupTable>,
        include_cross: bool,
        seeds: Vec<u64>,
        degree_limit: usize,
    ) -> Result<EhConfig> {
        let (h, k) = choose_subgroups(&group, degree_limit)?;
        let primary_chain = SubgroupChain::through(&group, &[h])?;
        let secondary_chain = k
            .map(|k| SubgroupChain::through(&group, &[k]))
            .transpose()?;
        if include_cross && secondary_chain.is_none() {
            return Err(Error::MissingSecondarySubgroup);
        }
        Ok(EhConfig {
            group,
            primary_chain,
            secondary_chain,
            include_cross,
            seeds,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.primary_chain.steps() != 2 {
            return Err(if self.primary_chain.steps() < 2 {
                Error::ChainTooShort
            } else {
                Error::BadConfig("primary chain must have exactly two steps".into())
            });
        }
        if !self.include_cross {
            return Ok(());
        }
        let k_chain = self
            .secondary_chain
            .as_ref()
            .ok_or(Error::MissingSecondarySubgroup)?;
        if k_chain.steps() != 2 {
            return Err(Error::BadConfig(
                "secondary chain must have exactly two steps".into(),
            ));
        }
        let h = &self.primary_chain.levels()[1];
        let k = &k_chain.levels()[1];
        if h == k {
            return Err(Error::BadConfig("K must differ from H".into()));
        }
        let trivial_meet = h.elements().iter().all(|&x| x == 0 || !k.contains(x));
        if k.order() < h.order() || (k.order() == h.order() && !trivial_meet) {
            return Err(Error::BadConfig(
                "need |K| > |H|, or |K| = |H| with trivial intersection".into(),
            ));
        }
        Ok(())
    }
}

/// Data for transforms through signatures over `K`.
#[derive(Debug, Clone)]
struct Secondary {
    chain: SubgroupChain,
    canonical: Etls,
}

/// The structured generating set together with everything needed to
/// realize further named elements.
#[derive(Debug, Clone)]
pub struct EhSet {
    alpha: Etls,
    alpha_breve: BreveMap,
    subgroup_gens: Vec<usize>,
    secondary: Option<Secondary>,
    generators: Vec<Generator>,
}

/// Assembles, in this order: blockwise perms for `(0 1)` and the
/// `lambda`-cycle; regular perms on every block for a generating set of
/// `H`; diagonal perms for `(0 1)` and the `mu`-cycle; and, with cross
/// transforms enabled, the canonical and adjusted transforms over `K`
/// followed by one seeded transform per seed. Each generator is computed
/// as an actual round function against the canonical signature of `H`.
pub fn eh_generating_set(cfg: &EhConfig) -> Result<EhSet> {
    cfg.validate()?;
    let group = cfg.group.clone();
    let alpha = canonical_etls(group.clone(), &cfg.primary_chain)?;
    let alpha_breve = alpha.breve();
    let h = alpha.subgroup().clone();
    let mut subgroup_gens = Vec::new();
    for &x in h.elements() {
        if !subgroup_closure(&group, &subgroup_gens).contains(x) {
            subgroup_gens.push(x);
        }
    }
    let secondary = match (&cfg.secondary_chain, cfg.include_cross) {
        (Some(chain), true) => Some(Secondary {
            chain: chain.clone(),
            canonical: canonical_etls(group.clone(), chain)?,
        }),
        _ => None,
    };
    let mut set = EhSet {
        alpha,
        alpha_breve,
        subgroup_gens,
        secondary,
        generators: Vec::new(),
    };

    let (lambda, mu) = (set.lambda(), set.mu());
    let mut families = Vec::new();
    families.push(Family::Blockwise(Permutation::transposition(lambda, 0, 1)));
    if lambda > 2 {
        families.push(Family::Blockwise(full_cycle(lambda)));
    }
    for block in 0..lambda {
        for &element in &set.subgroup_gens {
            families.push(Family::Regular { block, element });
        }
    }
    families.push(Family::Diagonal(Permutation::transposition(mu, 0, 1)));
    if mu > 2 {
        families.push(Family::Diagonal(full_cycle(mu)));
    }
    if set.secondary.is_some() {
        families.push(Family::Cross(CrossKind::Canonical));
        for &x in h.elements().iter().filter(|&&x| x != 0) {
            if let kind @ CrossKind::Adjusted(_) = set.cross_for(x)? {
                families.push(Family::Cross(kind));
            }
        }
        families.extend(
            cfg.seeds
                .iter()
                .map(|&s| Family::Cross(CrossKind::Seeded(s))),
        );
    }
    for family in families {
        let perm = set.realize(&family)?;
        set.generators.push(Generator { family, perm });
    }
    Ok(set)
}

/// `i -> i + 1 mod k`.
pub fn full_cycle(k: usize) -> Permutation {
    Permutation::from_images_unchecked((0..k).map(|i| (i + 1) % k).collect())
}

impl EhSet {
    pub fn group(&self) -> &Arc<GroupTable> {
        self.alpha.group()
    }

    /// The fixed canonical signature over `H`.
    pub fn alpha(&self) -> &Etls {
        &self.alpha
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.alpha.subgroup()
    }

    pub fn secondary_subgroup(&self) -> Option<&Subgroup> {
        self.secondary.as_ref().map(|s| &s.chain.levels()[1])
    }

    pub fn subgroup_gens(&self) -> &[usize] {
        &self.subgroup_gens
    }

    pub fn lambda(&self) -> usize {
        self.alpha.lambda()
    }

    pub fn mu(&self) -> usize {
        self.alpha.mu()
    }

    pub fn degree(&self) -> usize {
        self.alpha.group().order()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        self.generators.iter().map(|g| g.perm.clone()).collect()
    }

    pub fn has_cross(&self) -> bool {
        self.secondary.is_some()
    }

    /// `alpha^ o beta^-1` for the signature `beta`.
    pub fn transform(&self, beta: &Etls) -> Result<Permutation> {
        pgm_transform(&self.alpha_breve, &beta.breve())
    }

    /// The signature `beta` whose round function is the named element.
    pub fn beta_for(&self, family: &Family) -> Result<Etls> {
        match family {
            Family::Blockwise(tau) => reorder_cosets(&self.alpha, &tau.inverse()),
            Family::Diagonal(tau) => reorder_subgroup(&self.alpha, &tau.inverse()),
            Family::Regular { block, element } => {
                shift_coset_rep(&self.alpha, *block, self.group().inv(*element))
            }
            Family::Cross(kind) => self.cross_beta(*kind),
        }
    }

    /// The permutation of a named element, computed as a round function.
    pub fn realize(&self, family: &Family) -> Result<Permutation> {
        self.transform(&self.beta_for(family)?)
    }

    /// The closed-form permutation of a named element, bypassing signatures.
    pub fn closed_form(&self, family: &Family) -> Result<Permutation> {
        let (lambda, mu) = (self.lambda(), self.mu());
        match family {
            Family::Blockwise(tau) => blockwise_perm(tau, lambda, mu),
            Family::Diagonal(tau) => diagonal_perm(tau, lambda, mu),
            Family::Regular { block, element } => regular_perm(&self.alpha, *block, *element),
            Family::Cross(_) => self.realize(family),
        }
    }

    fn secondary(&self) -> Result<&Secondary> {
        self.secondary
            .as_ref()
            .ok_or(Error::MissingSecondarySubgroup)
    }

    fn cross_beta(&self, kind: CrossKind) -> Result<Etls> {
        let sec = self.secondary()?;
        match kind {
            CrossKind::Canonical => Ok(sec.canonical.clone()),
            CrossKind::Seeded(seed) => random_etls(self.group().clone(), &sec.chain, seed),
            CrossKind::Adjusted(h) => self.adjusted_beta(h),
        }
    }

    /// For `h` in `H \ {1}` (the point `lambda * x1` of `B_0` with
    /// `alpha1(x1) = h`), the cross transform that fixes 0 and sends that
    /// point outside `B_0`.
    pub fn cross_for(&self, h: usize) -> Result<CrossKind> {
        if h == 0 || !self.subgroup().contains(h) {
            return Err(Error::NotInSubgroup(h));
        }
        let sec = self.secondary()?;
        let pos = sec.canonical.breve().backward[h];
        if pos % self.lambda() != 0 {
            return Ok(CrossKind::Canonical);
        }
        if sec.canonical.mu() == self.mu() {
            return Err(Error::Construction(format!(
                "point {pos} of element {h} stays in B_0 although H and K meet trivially"
            )));
        }
        Ok(CrossKind::Adjusted(h))
    }

    fn adjusted_beta(&self, h: usize) -> Result<Etls> {
        if self.cross_for(h)? == CrossKind::Canonical {
            return Ok(self.secondary()?.canonical.clone());
        }
        let g = self.group().clone();
        let beta = &self.secondary()?.canonical;
        let lambda = self.lambda();
        let (lambda_k, mu_k) = (beta.lambda(), beta.mu());
        let pos = beta.breve().backward[h];
        let (coset, coord) = (pos % lambda_k, pos / lambda_k);
        let outside = |c: &usize| !(coset + lambda_k * c).is_multiple_of(lambda);
        let target = (1..mu_k).find(outside).ok_or_else(|| {
            Error::Construction(format!("no coordinate of block {coset} of K leaves B_0"))
        })?;
        if coset == 0 {
            // h in K: swap two nonzero coordinates of beta1
            let tau = Permutation::transposition(mu_k, coord, target);
            reorder_subgroup(beta, &tau)
        } else {
            // h outside K: move the representative of h's coset within Kh
            let beta1 = beta.alpha1();
            let k = g.mul(g.inv(beta1[target]), beta1[coord]);
            let mut beta2 = beta.alpha2().to_vec();
            beta2[coset] = g.mul(k, beta2[coset]);
            beta.with_blocks(vec![beta1.to_vec(), beta2])
        }
    }
}
