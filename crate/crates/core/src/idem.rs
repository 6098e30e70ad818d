//! Idempotents of permutation isotopes: the closed formula, a brute-force
//! scan, the squaring-chain oracle, regularity and genericity, and the
//! quasigroup induced on nonzero idempotents of a single-cycle isotope.
//!
//! On a cycle `(a_1 … a_s)` with `σ(a_t) = a_{t+1}` the idempotent equation
//! `x_i = x_{σ(i)}^2` forces `x_{a_t} = ζ_s^{2^{s-t} k}` with `ζ_s` of order
//! `2^s - 1`, or the whole block is zero.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{permutation_isotope, Algebra};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{LinearMap, Vector};
use crate::perm::Permutation;

/// Default upper bound on the number of points scanned by brute force.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 20_000_000;

/// Stratum code `alpha` (one bit per cycle, first cycle most significant)
/// and per-cycle residues `k_j ∈ 1..=2^{s_j}-1` (absent on zero blocks).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Label {
    pub alpha: Vec<bool>,
    pub residues: Vec<Option<u64>>,
    pub name: String,
}

impl Label {
    fn new(alpha: Vec<bool>, residues: Vec<Option<u64>>, cycle_lengths: &[usize]) -> Self {
        let name = if alpha.iter().all(|b| !b) {
            "0".to_string()
        } else if alpha.len() == 1 {
            residues[0].expect("nonzero block").to_string()
        } else if cycle_lengths.iter().all(|&s| s == 1) {
            code_of(&alpha).to_string()
        } else {
            let bits: String = alpha.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let ks: Vec<String> = residues
                .iter()
                .map(|r| r.map_or("-".to_string(), |k| k.to_string()))
                .collect();
            format!("{bits}:{}", ks.join(","))
        };
        Self {
            alpha,
            residues,
            name,
        }
    }

    /// `alpha` read as a binary number.
    pub fn code(&self) -> u64 {
        code_of(&self.alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(|b| !b)
    }
}

fn code_of(alpha: &[bool]) -> u64 {
    alpha.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Idempotents of an algebra sorted by label, with their product table.
#[derive(Clone, Debug)]
pub struct IdempotentTable {
    pub algebra: Algebra,
    /// Cycle lengths in label-bit order.
    pub cycle_lengths: Vec<usize>,
    pub idems: Vec<Vector>,
    pub labels: Vec<Label>,
    /// `product_table[i][j]` is the index of `idems[i] ∗ idems[j]`.
    pub product_table: Vec<Vec<usize>>,
    index: HashMap<Vector, usize>,
}

impl IdempotentTable {
    /// Sorts by label, checks idempotency and distinctness, and fills the
    /// product table; fails with `NotClosed` if a product is not listed.
    pub fn new(
        algebra: Algebra,
        cycle_lengths: Vec<usize>,
        entries: Vec<(Label, Vector)>,
    ) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (_, v)) in entries.iter().enumerate() {
            if !algebra.is_idempotent(v) {
                return Err(Error::NotIdempotent);
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvariantViolation("idempotent listed twice".into()));
            }
        }
        let (labels, idems): (Vec<Label>, Vec<Vector>) = entries.into_iter().unzip();
        let mut product_table = vec![vec![0; idems.len()]; idems.len()];
        for i in 0..idems.len() {
            for j in i..idems.len() {
                let prod = algebra.multiply(&idems[i], &idems[j]);
                let &t = index.get(&prod).ok_or(Error::NotClosed)?;
                product_table[i][j] = t;
                product_table[j][i] = t;
            }
        }
        Ok(Self {
            algebra,
            cycle_lengths,
            idems,
            labels,
            product_table,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.idems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idems.is_empty()
    }

    pub fn index_of(&self, v: &[crate::FieldElem]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn position_of_label(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.name == name)
    }

    pub fn vector_set(&self) -> BTreeSet<Vector> {
        self.idems.iter().cloned().collect()
    }

    /// Indices of nonzero idempotents.
    pub fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.labels[i].is_zero())
    }

    /// Product table keyed by label names, in label order.
    pub fn named_product_table(&self) -> Vec<Vec<String>> {
        self.product_table
            .iter()
            .map(|row| row.iter().map(|&t| self.labels[t].name.clone()).collect())
            .collect()
    }
}

/// Per-cycle nonzero idempotent blocks `k ↦ (ζ^{2^{s-1}k}, …, ζ^k)` in cycle order.
fn cycle_blocks(field: PrimeField, s: usize) -> Result<Vec<(u64, Vector)>> {
    let order = (1u64 << s) - 1;
    let zeta = field.primitive_root_of_order(order)?;
    Ok((1..=order)
        .map(|k| {
            let block = (1..=s).map(|t| zeta.pow((1u64 << (s - t)) * k)).collect();
            (k, block)
        })
        .collect())
}

/// All `2^n` idempotents of `(F^n, •_σ)` from the closed formula, including 0.
pub fn idempotents_formula(sigma: &Permutation, field: PrimeField) -> Result<IdempotentTable> {
    let cycle_type = sigma.cycle_type();
    field.check_admissible(&cycle_type)?;
    let n = sigma.degree();
    let cycles = sigma.cycles();
    let lengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
    let per_cycle: Vec<Vec<(u64, Vector)>> = lengths
        .iter()
        .map(|&s| cycle_blocks(field, s))
        .collect::<Result<_>>()?;

    let mut entries = vec![(Vec::new(), Vec::new(), vec![field.zero(); n])];
    for (cycle, blocks) in cycles.iter().zip(&per_cycle) {
        let mut next = Vec::with_capacity(entries.len() * (blocks.len() + 1));
        for (alpha, residues, v) in &entries {
            let mut a: Vec<bool> = alpha.clone();
            a.push(false);
            let mut r: Vec<Option<u64>> = residues.clone();
            r.push(None);
            next.push((a, r, v.clone()));
            for (k, block) in blocks {
                let mut a = alpha.clone();
                a.push(true);
                let mut r = residues.clone();
                r.push(Some(*k));
                let mut w = v.clone();
                for (&point, &x) in cycle.iter().zip(block) {
                    w[point - 1] = x;
                }
                next.push((a, r, w));
            }
        }
        entries = next;
    }
    let labelled = entries
        .into_iter()
        .map(|(a, r, v)| (Label::new(a, r, &lengths), v))
        .collect();
    IdempotentTable::new(permutation_isotope(sigma, field), lengths, labelled)
}

/// Exhaustive scan of `F_p^n` for `c ∗ c = c`.
pub fn idempotents_bruteforce(algebra: &Algebra, cap: u128) -> Result<BTreeSet<Vector>> {
    let p = algebra.field().modulus();
    let n = algebra.dim();
    let needed = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let field = algebra.field();
    let total = needed as u64;
    let found: Vec<Vector> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(field.elem(idx % p));
                idx /= p;
            }
            algebra.is_idempotent(&v).then_some(v)
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// Solutions of `x_{a_t} = x_{a_{t+1}}^2` around one cycle, by choosing the
/// last coordinate freely and squaring backwards.
fn chain_on_cycle(field: PrimeField, cycle: &[usize], n: usize) -> Vec<Vector> {
    let s = cycle.len();
    field
        .elements()
        .filter_map(|t| {
            let mut block = vec![field.zero(); s];
            block[s - 1] = t;
            for i in (0..s - 1).rev() {
                block[i] = block[i + 1] * block[i + 1];
            }
            // wraparound: x_{a_s} = x_{a_1}^2
            (block[0] * block[0] == block[s - 1]).then(|| {
                let mut v = vec![field.zero(); n];
                for (&point, &x) in cycle.iter().zip(&block) {
                    v[point - 1] = x;
                }
                v
            })
        })
        .collect()
}

/// Squaring-chain oracle for a single cycle.
pub fn idempotents_chain(sigma: &Permutation, field: PrimeField) -> Result<BTreeSet<Vector>> {
    if !sigma.is_single_cycle() {
        return Err(Error::NotSingleCycle);
    }
    let cycle = &sigma.cycles()[0];
    Ok(chain_on_cycle(field, cycle, sigma.degree())
        .into_iter()
        .collect())
}

/// Chain oracle run on every cycle separately; solutions are all sums of
/// per-cycle solutions, since the cycles give orthogonal ideals.
pub fn idempotents_chain_blocks(sigma: &Permutation, field: PrimeField) -> BTreeSet<Vector> {
    let n = sigma.degree();
    let mut acc = vec![vec![field.zero(); n]];
    for cycle in sigma.cycles() {
        let sols = chain_on_cycle(field, &cycle, n);
        acc = acc
            .iter()
            .flat_map(|v| {
                sols.iter()
                    .map(move |w| v.iter().zip(w).map(|(&a, &b)| a + b).collect::<Vector>())
            })
            .collect();
    }
    acc.into_iter().collect()
}

/// `det(L(c) - ½ I) ≠ 0`.
pub fn is_regular_idempotent(algebra: &Algebra, c: &[crate::FieldElem]) -> Result<bool> {
    if c.len() != algebra.dim() {
        return Err(Error::DimensionMismatch {
            expected: algebra.dim(),
            got: c.len(),
        });
    }
    if !algebra.is_idempotent(c) {
        return Err(Error::NotIdempotent);
    }
    let shifted = algebra
        .left_mult(c)
        .sub(&LinearMap::scalar(algebra.dim(), algebra.field().half()));
    Ok(!shifted.determinant().is_zero())
}

/// Number of distinct regular idempotents in `idems`.
pub fn count_regular(algebra: &Algebra, idems: &BTreeSet<Vector>) -> Result<usize> {
    let mut count = 0;
    for c in idems {
        if is_regular_idempotent(algebra, c)? {
            count += 1;
        }
    }
    Ok(count)
}

/// True iff the algebra has exactly `2^n` distinct regular idempotents
/// (zero included). The idempotent set comes from brute force under `cap`.
pub fn genericity_check(algebra: &Algebra, cap: u128) -> Result<bool> {
    let idems = idempotents_bruteforce(algebra, cap)?;
    genericity_from_set(algebra, &idems)
}

/// Genericity from an already computed complete idempotent set.
pub fn genericity_from_set(algebra: &Algebra, idems: &BTreeSet<Vector>) -> Result<bool> {
    Ok(count_regular(algebra, idems)? as u128 == 1u128 << algebra.dim())
}

/// Checks that every nonzero idempotent of a single-cycle table has
/// `(2^n - 1)`-fold coordinate-wise power equal to `(1, …, 1)`.
pub fn power_identity_check(table: &IdempotentTable) -> bool {
    let n = table.algebra.dim();
    let e = (1u64 << n) - 1;
    let one = table.algebra.field().one();
    table
        .nonzero()
        .all(|i| table.idems[i].iter().all(|x| x.pow(e) == one))
}

/// `2^{n-1}(i + j) mod (2^n - 1)` on representatives `1..=2^n-1`.
pub fn star(n: usize, i: u64, j: u64) -> u64 {
    let modulus = (1u64 << n) - 1;
    let r = ((1u64 << (n - 1)) % modulus) * ((i + j) % modulus) % modulus;
    if r == 0 {
        modulus
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasigroupTable {
    pub n: usize,
    /// Labels `1..=2^n-1`.
    pub labels: Vec<u64>,
    /// `table[i-1][j-1]` is the label of `c_i ∗ c_j`.
    pub table: Vec<Vec<u64>>,
    pub latin: bool,
    pub idempotent: bool,
    pub commutative: bool,
    pub medial: bool,
    /// First pair violating each axiom, if any.
    pub witnesses: Vec<String>,
}

/// Product table of the nonzero idempotents of a single-cycle isotope with
/// the law `c_i ∗ c_j = c_{i ⊛ j}` checked on every pair.
pub fn quasigroup_table(table: &IdempotentTable) -> Result<QuasigroupTable> {
    if table.cycle_lengths.len() != 1 {
        return Err(Error::NotSingleCycle);
    }
    let n = table.algebra.dim();
    let big_n = (1u64 << n) - 1;
    let label_of = |idx: usize| -> Result<u64> {
        table.labels[idx].residues[0]
            .ok_or_else(|| Error::LawViolation("product of nonzero idempotents is zero".into()))
    };
    let pos: HashMap<u64, usize> = table
        .nonzero()
        .map(|i| Ok((label_of(i)?, i)))
        .collect::<Result<_>>()?;
    let labels: Vec<u64> = (1..=big_n).collect();
    let mut grid = vec![vec![0u64; big_n as usize]; big_n as usize];
    for &i in &labels {
        for &j in &labels {
            let (a, b) = (pos[&i], pos[&j]);
            let got = label_of(table.product_table[a][b])?;
            let want = star(n, i, j);
            if got != want {
                return Err(Error::LawViolation(format!(
                    "c_{i} ∗ c_{j} = c_{got}, expected c_{want}"
                )));
            }
            grid[(i - 1) as usize][(j - 1) as usize] = got;
        }
    }
    let at = |i: u64, j: u64| grid[(i - 1) as usize][(j - 1) as usize];
    let mut witnesses = Vec::new();

    let full: BTreeSet<u64> = labels.iter().copied().collect();
    let bad_row = labels
        .iter()
        .copied()
        .find(|&i| labels.iter().map(|&j| at(i, j)).collect::<BTreeSet<_>>() != full);
    let bad_col = labels
        .iter()
        .copied()
        .find(|&j| labels.iter().map(|&i| at(i, j)).collect::<BTreeSet<_>>() != full);
    if let Some(r) = bad_row {
        witnesses.push(format!("row {r} is not a permutation"));
    }
    if let Some(c) = bad_col {
        witnesses.push(format!("column {c} is not a permutation"));
    }
    let latin = bad_row.is_none() && bad_col.is_none();

    let bad_idem = labels.iter().copied().find(|&i| at(i, i) != i);
    if let Some(i) = bad_idem {
        witnesses.push(format!("{i} ⊛ {i} ≠ {i}"));
    }
    let bad_comm = labels
        .iter()
        .flat_map(|&i| labels.iter().map(move |&j| (i, j)))
        .find(|&(i, j)| at(i, j) != at(j, i));
    if let Some((i, j)) = bad_comm {
        witnesses.push(format!("{i} ⊛ {j} ≠ {j} ⊛ {i}"));
    }
    let mut bad_medial = None;
    'outer: for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    if at(at(a, b), at(c, d)) != at(at(a, c), at(b, d)) {
                        bad_medial = Some((a, b, c, d));
                        break 'outer;
                    }
                }
            }
        }
    }
    if let Some((a, b, c, d)) = bad_medial {
        witnesses.push(format!("mediality fails at ({a}, {b}, {c}, {d})"));
    }
    Ok(QuasigroupTable {
        n,
        labels,
        table: grid,
        latin,
        idempotent: bad_idem.is_none(),
        commutative: bad_comm.is_none(),
        medial: bad_medial.is_none(),
        witnesses,
    })
}

/// Idempotents of `A ⊕ B`: all sums `c_A + c_B`, labels concatenated.
pub fn direct_sum_idempotents(a: &IdempotentTable, b: &IdempotentTable) -> Result<IdempotentTable> {
    let algebra = a.algebra.direct_sum(&b.algebra)?;
    let mut lengths = a.cycle_lengths.clone();
    lengths.extend(&b.cycle_lengths);
    let mut entries = Vec::with_capacity(a.len() * b.len());
    for (la, va) in a.labels.iter().zip(&a.idems) {
        for (lb, vb) in b.labels.iter().zip(&b.idems) {
            let mut alpha = la.alpha.clone();
            alpha.extend(&lb.alpha);
            let mut residues = la.residues.clone();
            residues.extend(&lb.residues);
            let mut v = va.clone();
            v.extend(vb);
            entries.push((Label::new(alpha, residues, &lengths), v));
        }
    }
    IdempotentTable::new(algebra, lengths, entries)
}

/// Number of units of `Z_N`.
pub fn unit_count(modulus: u64) -> u64 {
    (1..modulus).filter(|m| m.gcd(&modulus) == 1).count() as u64
}
