//! Single-block PGM encryption: the round function `alpha^ o beta^-1`
//! applied to a message in `0..n`.

use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{parse_group_lines, GroupTable, SubgroupChain};
use crate::perm::Permutation;
use crate::signatures::{breve_map, parse_signature_lines, random_etls, LogSignature};
use crate::transforms::pgm_transform;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmKey {
    group: Arc<GroupTable>,
    alpha: LogSignature,
    beta: LogSignature,
    enc: Permutation,
    dec: Permutation,
    seed: Option<u64>,
}

impl PgmKey {
    /// Key from two signatures of the same group. `beta` need not be
    /// exact-transversal.
    pub fn from_signatures(alpha: LogSignature, beta: LogSignature) -> Result<PgmKey> {
        if alpha.group().table() != beta.group().table() {
            return Err(Error::BadConfig(
                "signatures belong to different groups".into(),
            ));
        }
        let enc = pgm_transform(&breve_map(&alpha), &breve_map(&beta))?;
        let dec = enc.inverse();
        Ok(PgmKey {
            group: alpha.group().clone(),
            alpha,
            beta,
            enc,
            dec,
            seed: None,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn alpha(&self) -> &LogSignature {
        &self.alpha
    }

    pub fn beta(&self) -> &LogSignature {
        &self.beta
    }

    pub fn enc(&self) -> &Permutation {
        &self.enc
    }

    pub fn dec(&self) -> &Permutation {
        &self.dec
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Group file, alpha, beta, then `seed=<int>` or `seed=none`.
    pub fn to_text(&self) -> String {
        let seed = self
            .seed
            .map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "{}{}{}seed={seed}\n",
            self.group.to_text(),
            self.alpha.to_text(),
            self.beta.to_text()
        )
    }

    pub fn from_text(text: &str) -> Result<PgmKey> {
        let lines: Vec<&str> = text.lines().collect();
        let (group, next) = parse_group_lines(&lines, 0)?;
        let group = Arc::new(group);
        let (alpha, next) = parse_signature_lines(group.clone(), &lines, next)?;
        let (beta, next) = parse_signature_lines(group, &lines, next)?;
        let seed_line = lines.get(next).map(|l| l.trim()).unwrap_or("");
        let seed = match seed_line.strip_prefix("seed=") {
            Some("none") => None,
            Some(v) => Some(
                v.parse()
                    .map_err(|_| Error::parse(next + 1, format!("bad seed `{v}`")))?,
            ),
            None => {
                return Err(Error::parse(
                    next + 1,
                    "expected `seed=<int>` or `seed=none`",
                ))
            }
        };
        if let Some((i, l)) = lines
            .iter()
            .enumerate()
            .skip(next + 1)
            .find(|(_, l)| !l.trim().is_empty())
        {
            return Err(Error::parse(
                i + 1,
                format!("trailing content `{}`", l.trim()),
            ));
        }
        let mut key = PgmKey::from_signatures(alpha, beta)?;
        key.seed = seed;
        Ok(key)
    }
}

/// Two independent seeded exact-transversal signatures over `chain`.
pub fn keygen(group: Arc<GroupTable>, chain: &SubgroupChain, seed: u64) -> Result<PgmKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sa, sb) = (rng.next_u64(), rng.next_u64());
    let alpha = random_etls(group.clone(), chain, sa)?.signature().clone();
    let beta = random_etls(group, chain, sb)?.signature().clone();
    let mut key = PgmKey::from_signatures(alpha, beta)?;
    key.seed = Some(seed);
    Ok(key)
}

pub fn encrypt(key: &PgmKey, m: usize) -> Result<usize> {
    let n = key.enc.degree();
    if m >= n {
        return Err(Error::OutOfRange { value: m, bound: n });
    }
    Ok(key.enc.apply(m))
}

pub fn decrypt(key: &PgmKey, c: usize) -> Result<usize> {
    let n = key.dec.degree();
    if c >= n {
        return Err(Error::OutOfRange { value: c, bound: n });
    }
    Ok(key.dec.apply(c))
}
