//! Permutations of `{1..n}` stored as 1-based image lists.
//!
//! Composition follows `(p ∘ q)(i) = p(q(i))` throughout the crate.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its 1-based image list.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        let mut seen = vec![false; n];
        for &img in &images {
            if img == 0 || img > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(Error::InvalidPermutation(format!("image {img} repeated")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    /// The shift `i ↦ i + 1 (mod n)`, i.e. image list `[2, 3, …, n, 1]`.
    pub fn shift(n: usize) -> Self {
        Self {
            images: (1..=n).map(|i| i % n + 1).collect(),
        }
    }

    /// Builds a permutation of degree `n` from disjoint cycles; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {a} outside 1..={n}"
                    )));
                }
                if std::mem::replace(&mut used[a - 1], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {a} appears in more than one cycle position"
                    )));
                }
                images[a - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Self::new(images)
    }

    /// Parses a whitespace-separated image list such as `"2 3 1"`.
    pub fn parse_images(s: &str) -> Result<Self> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }

    /// Parses cycle notation such as `"(1 2)(3)"`. The degree is the largest
    /// point mentioned unless `degree` is given.
    pub fn parse_cycles(s: &str, degree: Option<usize>) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let cycle = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad cycle entry {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if cycle.is_empty() {
                return Err(Error::Parse("empty cycle".into()));
            }
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        let max = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = degree.unwrap_or(max);
        if n < max {
            return Err(Error::InvalidPermutation(format!(
                "point {max} exceeds degree {n}"
            )));
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        Ok(Self {
            images: other.images.iter().map(|&j| self.images[j - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Self { images }
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that
    /// point. Fixed points are length-1 cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur - 1] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths as a non-increasing partition of `n`.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    pub fn is_single_cycle(&self) -> bool {
        self.cycles().len() == 1
    }

    pub fn is_conjugate(&self, other: &Self) -> Result<bool> {
        self.check_degree(other)?;
        Ok(self.cycle_type() == other.cycle_type())
    }

    /// Returns `g` with `g ∘ self ∘ g⁻¹ = other`, aligning cycles sorted by
    /// length and then smallest point.
    pub fn conjugator(&self, other: &Self) -> Result<Self> {
        if !self.is_conjugate(other)? {
            return Err(Error::NotConjugate);
        }
        let sorted = |p: &Self| {
            let mut c = p.cycles();
            c.sort_by_key(|cyc| (cyc.len(), cyc[0]));
            c
        };
        let mut images = vec![0; self.degree()];
        for (a, b) in sorted(self).iter().zip(sorted(other).iter()) {
            for (&x, &y) in a.iter().zip(b.iter()) {
                images[x - 1] = y;
            }
        }
        let g = Self::new(images)?;
        let check = g.compose(self)?.compose(&g.inverse())?;
        if &check != other {
            return Err(Error::InvariantViolation(
                "conjugator failed verification".into(),
            ));
        }
        Ok(g)
    }

    /// All permutations of degree `n` in lexicographic image order.
    pub fn all(n: usize) -> impl Iterator<Item = Self> {
        (1..=n).permutations(n).map(|images| Self { images })
    }

    /// Canonical representative of a cycle type: consecutive blocks, each a shift.
    pub fn from_cycle_type(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut images = Vec::with_capacity(n);
        let mut offset = 0;
        for &s in parts {
            for t in 0..s {
                images.push(offset + (t + 1) % s + 1);
            }
            offset += s;
        }
        Self { images }
    }

    /// Cycle-notation string, e.g. `(1 2)(3)`.
    pub fn cycle_notation(&self) -> String {
        self.cycles()
            .iter()
            .map(|c| format!("({})", c.iter().join(" ")))
            .collect()
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(" "))
    }
}

/// Integer partitions of `n` as non-increasing part lists, largest first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
