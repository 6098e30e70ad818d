//! Dense univariate polynomials over `F_p`.

use std::fmt;

use serde::Serialize;

use crate::field::{FieldElem, PrimeField};

/// Coefficients low-to-high, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FpPoly {
    #[serde(skip)]
    field: PrimeField,
    coeffs: Vec<FieldElem>,
}

impl FpPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: PrimeField) -> Self {
        Self::new(field, vec![field.one()])
    }

    /// `x^d - a`.
    pub fn binomial(field: PrimeField, d: usize, a: FieldElem) -> Self {
        let mut c = vec![field.zero(); d + 1];
        c[d] = field.one();
        c[0] -= a;
        Self::new(field, c)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == self.field.one())
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.field, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let out = (0..len)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(z) + other.coeffs.get(i).copied().unwrap_or(z)
            })
            .collect();
        Self::new(self.field, out)
    }

    pub fn scale(&self, s: FieldElem) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Roots found by scanning all of `F_p`, with multiplicities.
    pub fn roots(&self) -> Vec<(FieldElem, usize)> {
        let mut out = Vec::new();
        let mut rem = self.clone();
        for x in self.field.elements() {
            let mut mult = 0;
            while rem.degree().is_some_and(|d| d > 0) && rem.eval(x).is_zero() {
                rem = rem.div_linear(x);
                mult += 1;
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
        out
    }

    /// Quotient by `(x - a)`, assuming `a` is a root.
    fn div_linear(&self, a: FieldElem) -> Self {
        let d = self.coeffs.len() - 1;
        let mut q = vec![self.field.zero(); d];
        let mut carry = self.field.zero();
        for i in (0..d).rev() {
            carry = self.coeffs[i + 1] + carry * a;
            q[i] = carry;
        }
        Self::new(self.field, q)
    }

    /// Newton interpolation through distinct nodes.
    pub fn interpolate(field: PrimeField, points: &[(FieldElem, FieldElem)]) -> Self {
        let mut result = Self::zero(field);
        let mut basis = Self::one(field);
        for (k, &(xk, yk)) in points.iter().enumerate() {
            let denom = basis.eval(xk);
            let coeff = (yk - result.eval(xk)) / denom;
            result = result.add(&basis.scale(coeff));
            if k + 1 < points.len() {
                basis = basis.mul(&Self::binomial(field, 1, xk));
            }
        }
        result
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let one = *c == self.field.one();
            match (i, one) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "λ")?,
                (1, false) => write!(f, "{c}λ")?,
                (_, true) => write!(f, "λ^{i}")?,
                (_, false) => write!(f, "{c}λ^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = PrimeField::new(43).unwrap();
        let poly = FpPoly::from_i64(f, &[-1, 0, 0, 1]);
        let pts: Vec<_> = (0..4).map(|x| (f.elem(x), poly.eval(f.elem(x)))).collect();
        assert_eq!(FpPoly::interpolate(f, &pts), poly);
    }

    #[test]
    fn roots_with_multiplicity() {
        let f = PrimeField::new(7).unwrap();
        // (x-1)^2 x
        let poly = FpPoly::from_i64(f, &[0, 1, -2, 1]);
        assert_eq!(poly.roots(), vec![(f.zero(), 1), (f.one(), 2)]);
        assert_eq!(poly.to_string(), "λ^3 + 5λ^2 + λ");
    }
}
