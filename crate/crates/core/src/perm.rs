use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A bijection of `0..n` stored as its image array.
///
/// Maps compose left-to-right: `p.then(&q)` applies `p` first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation { images })
    }

    /// Callers guarantee `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Permutation {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// The transposition `(a b)` on `n` points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    /// The cycle `points[0] -> points[1] -> ... -> points[0]`.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &p) in points.iter().enumerate() {
            if p >= n {
                return Err(Error::OutOfRange { value: p, bound: n });
            }
            images[p] = points[(i + 1) % points.len()];
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`. Panics on degree mismatch; see
    /// [`crate::permgroup::compose`] for the checked form.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Permutation::identity(self.degree()), |acc, _| {
            acc.then(self)
        })
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.images[x];
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths including fixed points, sorted decreasingly.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.degree())
            .filter(|&x| self.images[x] != x)
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::group::join(&self.images))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Single line of space-separated images.
    fn from_str(s: &str) -> Result<Permutation> {
        let images = crate::group::parse_indices(s, 1)?;
        Permutation::from_images(images)
    }
}

/// Parses a generator-set file: one permutation per line, `#` starts a
/// comment, blank lines are skipped.
pub fn parse_generator_file(text: &str) -> Result<Vec<Permutation>> {
    let mut out: Vec<Permutation> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = Permutation::from_images(crate::group::parse_indices(line, i + 1)?)
            .map_err(|e| Error::parse(i + 1, e.to_string()))?;
        if let Some(first) = out.first() {
            if first.degree() != p.degree() {
                return Err(Error::parse(
                    i + 1,
                    format!("degree {} differs from {}", p.degree(), first.degree()),
                ));
            }
        }
        out.push(p);
    }
    Ok(out)
}

pub fn write_generator_file(gens: &[Permutation]) -> String {
    gens.iter().map(|g| format!("{g}\n")).collect()
}
