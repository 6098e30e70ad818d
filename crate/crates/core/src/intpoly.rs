//! Integer polynomials with arbitrary-precision coefficients: cyclotomic
//! polynomials, `Λ_n(z) = z + z^2 + z^4 + … + z^{2^{n-1}}`, exact monic
//! division, subresultant resultants, and certification of regular integers.
//!
//! An integer `n ≥ 2` is regular when `Φ_{2^n-1}` divides `Λ_n(z^m) - Λ_n(z)`
//! for no unit `m` of `Z_{2^n-1}` outside `Δ_n = {1, 2, 4, …, 2^{n-1}}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on `n` for regularity certification.
pub const DEFAULT_REGULARITY_BOUND: u32 = 16;

/// Coefficients indexed by exponent, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// `z^d - 1`.
    pub fn binomial(d: usize) -> Self {
        let mut p = Self::monomial(BigInt::one(), d);
        p.coeffs[0] -= 1;
        Self::new(p.coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// `f(z^q)`.
    pub fn compose_power(&self, q: usize) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut out = vec![BigInt::zero(); d * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * q] = c.clone();
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `f = q·g + r` with `deg r < deg g`, for monic `g`.
    pub fn divrem_monic(&self, g: &Self) -> Result<(Self, Self)> {
        let Some(dg) = g.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if !g.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        let mut rem = self.coeffs.clone();
        let Some(df) = self.degree().filter(|&d| d >= dg) else {
            return Ok((Self::zero(), self.clone()));
        };
        let support: Vec<(usize, &BigInt)> = g.coeffs[..dg]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut quot = vec![BigInt::zero(); df - dg + 1];
        for shift in (0..=df - dg).rev() {
            let c = std::mem::take(&mut rem[shift + dg]);
            if c.is_zero() {
                continue;
            }
            for &(i, gi) in &support {
                rem[shift + i] -= &c * gi;
            }
            quot[shift] = c;
        }
        rem.truncate(dg);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient by a monic divisor; errors if the remainder is nonzero.
    pub fn exact_div_monic(&self, g: &Self) -> Result<Self> {
        let (q, r) = self.divrem_monic(g)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "{g} does not divide {self}"
            )));
        }
        Ok(q)
    }

    /// Pseudo-remainder `prem(f, g) = rem(lc(g)^{deg f - deg g + 1} f, g)`.
    fn pseudo_rem(&self, g: &Self) -> Self {
        let dg = g.degree().expect("nonzero divisor");
        let lc = g.leading().expect("nonzero divisor").clone();
        let Some(df) = self.degree() else {
            return Self::zero();
        };
        if df < dg {
            return self.clone();
        }
        let mut r = self.clone();
        let mut steps = 0u32;
        while let Some(dr) = r.degree().filter(|&d| d >= dg) {
            let lr = r.leading().expect("nonzero").clone();
            let shifted = Self::monomial(lr, dr - dg).mul(g);
            r = r.scale(&lc).sub(&shifted);
            steps += 1;
        }
        let missing = (df - dg + 1) as u32 - steps;
        r.scale(&lc.pow(missing))
    }

    fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    fn div_scalar(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "z")?,
                1 => write!(f, "{abs}z")?,
                _ if unit => write!(f, "z^{i}")?,
                _ => write!(f, "{abs}z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        v.serialize(s)
    }
}

fn distinct_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The `N`-th cyclotomic polynomial.
///
/// Built from `Φ_1 = z - 1` by exact divisions `Φ_{mq}(z) = Φ_m(z^q) / Φ_m(z)`
/// for primes `q ∤ m`, then `Φ_N(z) = Φ_{rad N}(z^{N / rad N})`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let primes = distinct_primes(n);
    let mut phi = IntPoly::from_i64(&[-1, 1]);
    let mut radical = 1u64;
    for &q in &primes {
        phi = phi
            .compose_power(q as usize)
            .exact_div_monic(&phi)
            .expect("cyclotomic division is exact");
        radical *= q;
    }
    phi.compose_power((n / radical) as usize)
}

pub fn euler_phi(n: u64) -> u64 {
    distinct_primes(n)
        .into_iter()
        .fold(n, |acc, q| acc / q * (q - 1))
}

/// `Λ_n(z) = Σ_{i<n} z^{2^i}`.
pub fn lambda_poly(n: u32) -> IntPoly {
    assert!((2..63).contains(&n), "Λ_n needs 2 <= n < 63");
    let mut coeffs = vec![BigInt::zero(); (1usize << (n - 1)) + 1];
    for i in 0..n {
        coeffs[1usize << i] = BigInt::one();
    }
    IntPoly::new(coeffs)
}

/// Exponents `m·2^i mod N` of `Λ_n(z^m)` with residue `0` written as `N`.
fn reduced_lambda_exponents(n: u32, m: u64) -> Vec<u64> {
    let modulus = (1u64 << n) - 1;
    let mut e: Vec<u64> = (0..n)
        .map(|i| {
            let r = (m % modulus) * ((1u64 << i) % modulus) % modulus;
            if r == 0 {
                modulus
            } else {
                r
            }
        })
        .collect();
    e.sort_unstable();
    e
}

/// `Λ_n(z^m) - Λ_n(z)` with exponents of the first term reduced modulo `2^n - 1`.
pub fn lambda_difference_reduced(n: u32, m: u64) -> IntPoly {
    let exps = reduced_lambda_exponents(n, m);
    let top = *exps.last().expect("n >= 1") as usize;
    let mut coeffs = vec![BigInt::zero(); top.max(1 << (n - 1)) + 1];
    for e in exps {
        coeffs[e as usize] += 1;
    }
    for i in 0..n {
        coeffs[1usize << i] -= 1;
    }
    IntPoly::new(coeffs)
}

/// `(Λ_n(z^q) - Λ_n(z)) / (z(z - 1))` without exponent reduction.
pub fn lambda_quotient(n: u32, q: u64) -> Result<IntPoly> {
    let lam = lambda_poly(n);
    let diff = lam.compose_power(q as usize).sub(&lam);
    diff.exact_div_monic(&IntPoly::from_i64(&[0, -1, 1]))
}

/// Resultant with the Sylvester-determinant sign convention, computed by the
/// subresultant polynomial remainder sequence.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    if df == 0 {
        return Ok(f.coeffs[0].pow(dg as u32));
    }
    if dg == 0 {
        return Ok(g.coeffs[0].pow(df as u32));
    }
    let (ca, cb) = (f.content(), g.content());
    let t = ca.pow(dg as u32) * cb.pow(df as u32);
    let mut a = f.div_scalar(&ca);
    let mut b = g.div_scalar(&cb);
    let mut s = BigInt::one();
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            s = -s;
        }
    }
    let mut gcoef = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().expect("nonzero");
        let db = b.degree().expect("nonzero");
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &gcoef * h.pow(delta);
        b = r.div_scalar(&divisor);
        gcoef = a.leading().expect("nonzero").clone();
        // h ← g^δ / h^{δ-1}
        h = if delta == 0 {
            h
        } else {
            gcoef.pow(delta) / h.pow(delta - 1)
        };
        match b.degree() {
            None => return Ok(BigInt::zero()),
            Some(0) => {
                let da = a.degree().expect("nonzero") as u32;
                let lb = b.leading().expect("nonzero");
                let hh = if da == 0 {
                    h
                } else {
                    lb.pow(da) / h.pow(da - 1)
                };
                return Ok(s * t * hh);
            }
            Some(_) => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierTest {
    pub m: u64,
    /// Whether `Φ_{2^n-1}` divides `Λ_n(z^m) - Λ_n(z)` after exponent reduction.
    pub divides: bool,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_opt_bigint"
    )]
    pub resultant: Option<BigInt>,
}

fn ser_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_str(&b.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityCertificate {
    pub n: u32,
    pub status: bool,
    pub delta_set: Vec<u64>,
    /// Every unit outside `Δ_n`.
    pub tested_m: Vec<MultiplierTest>,
    /// Units inside `Δ_n`; each must divide.
    pub fixed_point_checks: Vec<MultiplierTest>,
    pub fixed_points_ok: bool,
}

impl RegularityCertificate {
    /// Multipliers outside `Δ_n` for which divisibility holds.
    pub fn witnesses(&self) -> Vec<u64> {
        self.tested_m
            .iter()
            .filter(|t| t.divides)
            .map(|t| t.m)
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RegularityOptions {
    pub bound: u32,
    pub resultants: bool,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_REGULARITY_BOUND,
            resultants: false,
        }
    }
}

/// `Δ_n = {2^i mod (2^n - 1)}`.
pub fn delta_set(n: u32) -> Vec<u64> {
    let modulus = (1u64 << n) - 1;
    let mut d: Vec<u64> = (0..n).map(|i| (1u64 << i) % modulus).collect();
    d.sort_unstable();
    d.dedup();
    d
}

pub fn is_regular(n: u32) -> Result<RegularityCertificate> {
    is_regular_with(n, RegularityOptions::default())
}

pub fn is_regular_with(n: u32, opts: RegularityOptions) -> Result<RegularityCertificate> {
    if n < 2 {
        return Err(Error::Parse(format!("regularity needs n >= 2, got {n}")));
    }
    if n > opts.bound || n >= 63 {
        return Err(Error::BoundExceeded(format!(
            "n = {n} exceeds regularity bound {}",
            opts.bound
        )));
    }
    let modulus = (1u64 << n) - 1;
    let phi = cyclotomic(modulus);
    let delta: BTreeSet<u64> = delta_set(n).into_iter().collect();
    let units: Vec<u64> = (1..modulus).filter(|m| m.gcd(&modulus) == 1).collect();

    // equal exponent multisets give identical polynomials
    let mut by_exponents: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    for &m in &units {
        by_exponents
            .entry(reduced_lambda_exponents(n, m))
            .or_default()
            .push(m);
    }
    let verdicts: BTreeMap<u64, bool> = by_exponents
        .par_iter()
        .map(|(_, ms)| {
            let diff = lambda_difference_reduced(n, ms[0]);
            let (_, rem) = diff.divrem_monic(&phi).expect("Φ_N is monic");
            (ms.clone(), rem.is_zero())
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flat_map(|(ms, d)| ms.into_iter().map(move |m| (m, d)))
        .collect();

    let tested_m = units
        .iter()
        .filter(|m| !delta.contains(m))
        .map(|&m| {
            let resultant = if opts.resultants {
                Some(resultant(&lambda_quotient(n, m)?, &phi)?)
            } else {
                None
            };
            Ok(MultiplierTest {
                m,
                divides: verdicts[&m],
                resultant,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fixed_point_checks: Vec<MultiplierTest> = delta
        .iter()
        .map(|&m| MultiplierTest {
            m,
            divides: verdicts[&m],
            resultant: None,
        })
        .collect();
    let fixed_points_ok = fixed_point_checks.iter().all(|t| t.divides);
    Ok(RegularityCertificate {
        n,
        status: tested_m.iter().all(|t| !t.divides),
        delta_set: delta.into_iter().collect(),
        tested_m,
        fixed_point_checks,
        fixed_points_ok,
    })
}
