//! Prime fields `F_p` and selection of admissible primes.
//!
//! A prime is admissible for a cycle type `(s_1, …, s_r)` when `z^t - 1`
//! splits into distinct linear factors for every `t` in
//! `S = {s_i} ∪ {2^{s_i} - 1}`, which over `F_p` means `t | p - 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Upper limit on the admissible-prime search.
pub const PRIME_SEARCH_CAP: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    field: PrimeField,
    residue: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

impl PrimeField {
    /// Accepts odd primes `p >= 5`.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p < 5 {
            return Err(Error::InvalidField(format!(
                "characteristic {p} is excluded (need p >= 5)"
            )));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is too large")));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> FieldElem {
        FieldElem {
            field: *self,
            residue: v % self.p,
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        self.elem(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// `2⁻¹`, defined since `p` is odd.
    pub fn half(&self) -> FieldElem {
        self.elem(self.p.div_ceil(2))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.p).map(|v| self.elem(v))
    }

    /// Smallest generator of `F_p^×`.
    pub fn multiplicative_generator(&self) -> FieldElem {
        let order = self.p - 1;
        let factors = prime_factors(order);
        (2..self.p)
            .map(|g| self.elem(g))
            .find(|g| factors.iter().all(|q| g.pow(order / q) != self.one()))
            .expect("F_p^× is cyclic")
    }

    /// `g^{(p-1)/d}` for the smallest generator `g`; has order exactly `d`.
    pub fn primitive_root_of_order(&self, d: u64) -> Result<FieldElem> {
        if d == 0 || !(self.p - 1).is_multiple_of(d) {
            return Err(Error::OrderNotDividing { d, p: self.p });
        }
        let x = self.multiplicative_generator().pow((self.p - 1) / d);
        debug_assert_eq!(x.multiplicative_order(), Some(d));
        Ok(x)
    }

    /// Checks that every `t` in the admissibility set of `cycle_type` divides `p - 1`
    /// and that `p` exceeds the dimension.
    pub fn check_admissible(&self, cycle_type: &[usize]) -> Result<()> {
        let n: usize = cycle_type.iter().sum();
        if self.p as u128 <= n as u128 {
            return Err(Error::InadmissibleField {
                p: self.p,
                reason: format!("p must exceed the dimension {n}"),
            });
        }
        for t in admissibility_set(cycle_type)? {
            if !(self.p - 1).is_multiple_of(t) {
                return Err(Error::InadmissibleField {
                    p: self.p,
                    reason: format!("z^{t} - 1 does not split ({t} does not divide p - 1)"),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// `S = {s_1, …, s_r, 2^{s_1} - 1, …, 2^{s_r} - 1}`, sorted and deduplicated.
pub fn admissibility_set(cycle_type: &[usize]) -> Result<Vec<u64>> {
    let mut set = Vec::new();
    for &s in cycle_type {
        if s == 0 {
            return Err(Error::InvalidPermutation("zero-length cycle".into()));
        }
        if s >= 32 {
            return Err(Error::BoundExceeded(format!("cycle length {s} too large")));
        }
        set.push(s as u64);
        set.push((1u64 << s) - 1);
    }
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

pub fn admissibility_lcm(cycle_type: &[usize]) -> Result<u64> {
    Ok(admissibility_set(cycle_type)?
        .into_iter()
        .fold(1u64, |acc, t| acc.lcm(&t)))
}

/// Smallest prime `p ≡ 1 (mod lcm S)` with `p > n` and `p >= 5`.
pub fn admissible_prime(cycle_type: &[usize]) -> Result<PrimeField> {
    let n: u64 = cycle_type.iter().map(|&s| s as u64).sum();
    let l = admissibility_lcm(cycle_type)?;
    let mut p = l + 1;
    while p < PRIME_SEARCH_CAP {
        if p > n && p >= 5 && is_prime(p) {
            return PrimeField::new(p);
        }
        p += l;
    }
    Err(Error::BoundExceeded(format!(
        "no admissible prime below {PRIME_SEARCH_CAP} for lcm {l}"
    )))
}

impl FieldElem {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// `x^e` for a possibly negative exponent; `x` must be nonzero when `e < 0`.
    pub fn powi(self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv()
                .expect("negative power of zero")
                .pow(e.unsigned_abs())
        }
    }

    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(self.field.p - 2))
    }

    pub fn multiplicative_order(self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut order = self.field.p - 1;
        for q in prime_factors(order) {
            while order.is_multiple_of(q) && self.pow(order / q) == self.field.one() {
                order /= q;
            }
        }
        Some(order)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.field, other.field, "{}", Error::FieldMismatch);
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.residue)
    }
}

impl Add for FieldElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        let s = self.residue + rhs.residue;
        let p = self.field.p;
        FieldElem {
            field: self.field,
            residue: if s >= p { s - p } else { s },
        }
    }
}

impl Sub for FieldElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.field.p;
        FieldElem {
            field: self.field,
            residue: (p - self.residue) % p,
        }
    }
}

impl Mul for FieldElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        FieldElem {
            field: self.field,
            residue: self.residue * rhs.residue % self.field.p,
        }
    }
}

impl Div for FieldElem {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl AddAssign for FieldElem {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElem {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElem {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
