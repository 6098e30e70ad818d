//! Square matrices over `F_p` acting on column vectors.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::fpoly::FpPoly;

pub type Vector = Vec<FieldElem>;

/// An `n × n` matrix, row-major, acting as `M·x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    n: usize,
    field: PrimeField,
    data: Vec<FieldElem>,
}

impl Serialize for LinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl LinearMap {
    pub fn zero(n: usize, field: PrimeField) -> Self {
        Self {
            n,
            field,
            data: vec![field.zero(); n * n],
        }
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        Self::scalar(n, field.one())
    }

    pub fn scalar(n: usize, s: FieldElem) -> Self {
        let mut m = Self::zero(n, s.field());
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    pub fn diagonal(diag: &[FieldElem], field: PrimeField) -> Self {
        let mut m = Self::zero(diag.len(), field);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vector]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
            });
        }
        Ok(Self {
            n,
            field,
            data: rows.concat(),
        })
    }

    pub fn from_columns(field: PrimeField, cols: &[Vector]) -> Result<Self> {
        Ok(Self::from_rows(field, cols)?.transpose())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vector> {
        self.data
            .chunks(self.n.max(1))
            .map(<[_]>::to_vec)
            .take(self.n)
            .collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n, self.field);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn apply(&self, x: &[FieldElem]) -> Vector {
        (0..self.n)
            .map(|i| (0..self.n).fold(self.field.zero(), |acc, j| acc + self.get(i, j) * x[j]))
            .collect()
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.field);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            field: self.field,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            field: self.field,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: FieldElem) -> Self {
        Self {
            n: self.n,
            field: self.field,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n, self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.field)
    }

    pub fn determinant(&self) -> FieldElem {
        let mut rows = self.rows();
        let n = self.n;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return self.field.zero();
            };
            if pivot != col {
                rows.swap(pivot, col);
                det = -det;
            }
            let pv = rows[col][col];
            det *= pv;
            let inv = pv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let factor = rows[r][col] * inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = rows[col][c];
                    rows[r][c] -= factor * v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut aug: Vec<Vector> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| {
                    if i == j {
                        self.field.one()
                    } else {
                        self.field.zero()
                    }
                }));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(pivot, col);
            let inv = aug[col][col].inv()?;
            for v in aug[col].iter_mut() {
                *v *= inv;
            }
            for r in 0..n {
                if r == col || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col];
                for c in 0..2 * n {
                    let v = aug[col][c];
                    aug[r][c] -= factor * v;
                }
            }
        }
        let rows: Vec<Vector> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Self::from_rows(self.field, &rows).expect("square"))
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vector> {
        kernel_of_rows(self.field, self.rows(), self.n)
    }

    pub fn rank(&self) -> usize {
        rank_of(self.field, self.rows())
    }

    /// `det(xI - M)`, interpolated from evaluations at `x = 0..=n`.
    pub fn char_poly(&self) -> Result<FpPoly> {
        let n = self.n;
        if self.field.modulus() as u128 <= n as u128 {
            return Err(Error::FieldTooSmall {
                p: self.field.modulus(),
                n,
            });
        }
        let points: Vec<_> = (0..=n as u64)
            .map(|x| {
                let x = self.field.elem(x);
                (x, Self::scalar(n, x).sub(self).determinant())
            })
            .collect();
        let poly = FpPoly::interpolate(self.field, &points);
        debug_assert!(poly.is_monic() && poly.degree() == Some(n));
        Ok(poly)
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col];
            for c in 0..ncols {
                let v = rows[r][c];
                rows[i][c] -= factor * v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank_of(field: PrimeField, mut rows: Vec<Vector>) -> usize {
    let _ = field;
    let ncols = rows.first().map_or(0, Vec::len);
    rref(&mut rows, ncols).len()
}

/// Null space of the matrix with the given rows and `ncols` columns.
pub fn kernel_of_rows(field: PrimeField, mut rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f];
            }
            v
        })
        .collect()
}

/// Solves `A x = b` for a rectangular system; `None` if inconsistent.
pub fn solve(field: PrimeField, rows: &[Vector], rhs: &[FieldElem]) -> Option<Vector> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut r = r.clone();
            r.push(b);
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols];
    }
    Some(x)
}

/// Indices of the first maximal linearly independent prefix-greedy subset.
pub fn greedy_independent(field: PrimeField, vectors: &[Vector], want: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vector> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if chosen.len() == want {
            break;
        }
        rows.push(v.clone());
        if rank_of(field, rows.clone()) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(43).unwrap()
    }

    fn m(rows: &[&[i64]]) -> LinearMap {
        let f = f();
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
            .collect();
        LinearMap::from_rows(f, &rows).unwrap()
    }

    /// Cofactor expansion of `det(xI - M)` with polynomial entries.
    fn char_poly_cofactor(mat: &LinearMap) -> FpPoly {
        fn det(entries: &[Vec<FpPoly>]) -> FpPoly {
            let n = entries.len();
            if n == 1 {
                return entries[0][0].clone();
            }
            let field = entries[0][0].field();
            let mut acc = FpPoly::zero(field);
            for j in 0..n {
                let minor: Vec<Vec<FpPoly>> = entries[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 {
                    field.one()
                } else {
                    -field.one()
                };
                acc = acc.add(&entries[0][j].mul(&det(&minor)).scale(sign));
            }
            acc
        }
        let field = mat.field();
        let n = mat.dim();
        let entries: Vec<Vec<FpPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = -mat.get(i, j);
                        if i == j {
                            FpPoly::new(field, vec![c, field.one()])
                        } else {
                            FpPoly::new(field, vec![c])
                        }
                    })
                    .collect()
            })
            .collect();
        det(&entries)
    }

    #[test]
    fn char_poly_examples() {
        let f = f();
        assert_eq!(
            LinearMap::zero(3, f).char_poly().unwrap(),
            FpPoly::from_i64(f, &[0, 0, 0, 1])
        );
        assert_eq!(
            LinearMap::identity(3, f).char_poly().unwrap(),
            FpPoly::from_i64(f, &[-1, 3, -3, 1])
        );
        let small = PrimeField::new(5).unwrap();
        assert_eq!(
            LinearMap::identity(5, small).char_poly(),
            Err(Error::FieldTooSmall { p: 5, n: 5 })
        );
    }

    #[test]
    fn char_poly_matches_cofactor_expansion() {
        let samples = [
            m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]),
            m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
            m(&[&[5, -1, 0, 2], &[3, 3, 3, 3], &[0, 0, 7, 1], &[9, 1, 2, 0]]),
        ];
        for s in samples {
            assert_eq!(s.char_poly().unwrap(), char_poly_cofactor(&s));
        }
    }

    #[test]
    fn inverse_kernel_rank() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let inv = a.inverse().unwrap();
        assert!(a.compose(&inv).is_identity());
        let sing = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.rank(), 2);
        let ker = sing.kernel();
        assert_eq!(ker.len(), 1);
        assert!(sing.apply(&ker[0]).iter().all(FieldElem::is_zero));
        assert!(sing.determinant().is_zero());
    }

    #[test]
    fn solve_rectangular() {
        let f = f();
        let rows = vec![
            vec![f.elem(1), f.elem(0)],
            vec![f.elem(0), f.elem(1)],
            vec![f.elem(1), f.elem(1)],
        ];
        let x = solve(f, &rows, &[f.elem(2), f.elem(3), f.elem(5)]).unwrap();
        assert_eq!(x, vec![f.elem(2), f.elem(3)]);
        assert!(solve(f, &rows, &[f.elem(2), f.elem(3), f.elem(6)]).is_none());
    }
}
