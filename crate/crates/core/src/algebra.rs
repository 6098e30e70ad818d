//! Finite-dimensional commutative algebras given by structure constants.
//!
//! `e_i ∗ e_j = Σ_k a_{ijk} e_k`. Besides the coordinate-wise product
//! algebra this module builds inner isotopes `x ∗ y = h(x • y)`, direct sums,
//! the cycle decomposition of a permutation isotope and the power-basis
//! model `K[z]/(z^n - 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::linalg::{solve, LinearMap, Vector};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Product,
    Isotope(Option<Permutation>),
    DirectSum,
    PolyModel,
    Custom,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    n: usize,
    field: PrimeField,
    sc: Vec<FieldElem>,
    terms: Vec<(usize, usize, usize, FieldElem)>,
    provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub commutative: bool,
    pub associative: bool,
    pub medial: bool,
    pub unital: bool,
    /// 1-based basis indices `(i, j)` with `e_i e_j ≠ e_j e_i`.
    pub commutative_witness: Option<[usize; 2]>,
    /// 1-based `(i, j, k)` with `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    pub associative_witness: Option<[usize; 3]>,
    /// 1-based `(i, j, k, l)` with `(e_i e_j)(e_k e_l) ≠ (e_i e_k)(e_j e_l)`.
    pub medial_witness: Option<[usize; 4]>,
    pub unit: Option<Vector>,
}

impl Algebra {
    /// Builds an algebra from `a_{ijk}` indexed as `sc[(i * n + j) * n + k]`,
    /// rejecting non-commutative data.
    pub fn from_structure_constants(
        field: PrimeField,
        n: usize,
        sc: Vec<FieldElem>,
        provenance: Provenance,
    ) -> Result<Self> {
        if sc.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                got: sc.len(),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if sc[(i * n + j) * n + k] != sc[(j * n + i) * n + k] {
                        return Err(Error::NotCommutative {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        let terms = sc
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(idx, &a)| (idx / (n * n), (idx / n) % n, idx % n, a))
            .collect();
        Ok(Self {
            n,
            field,
            sc,
            terms,
            provenance,
        })
    }

    /// Builds an algebra from the products of basis pairs.
    pub fn from_basis_products(
        field: PrimeField,
        n: usize,
        provenance: Provenance,
        product: impl Fn(usize, usize) -> Vector,
    ) -> Result<Self> {
        let mut sc = vec![field.zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j);
                sc[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
            }
        }
        Self::from_structure_constants(field, n, sc, provenance)
    }

    /// The 0-dimensional algebra.
    pub fn trivial(field: PrimeField) -> Self {
        Self::from_structure_constants(field, 0, Vec::new(), Provenance::Custom)
            .expect("empty algebra")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> FieldElem {
        self.sc[(i * self.n + j) * self.n + k]
    }

    /// Structure constants as a nested `n × n × n` array of residues.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        (0..self.n)
                            .map(|k| self.structure_constant(i, j, k).residue())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Equality of dimension, field and structure constants.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.sc == other.sc
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.n]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = self.zero_vector();
        v[i] = self.field.one();
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let start = (i * self.n + j) * self.n;
        self.sc[start..start + self.n].to_vec()
    }

    pub fn multiply(&self, x: &[FieldElem], y: &[FieldElem]) -> Vector {
        let mut out = self.zero_vector();
        for &(i, j, k, a) in &self.terms {
            let xy = x[i] * y[j];
            if !xy.is_zero() {
                out[k] += a * xy;
            }
        }
        out
    }

    pub fn square(&self, x: &[FieldElem]) -> Vector {
        self.multiply(x, x)
    }

    pub fn is_idempotent(&self, x: &[FieldElem]) -> bool {
        self.square(x) == x
    }

    /// Matrix of `x ↦ a ∗ x`.
    pub fn left_mult(&self, a: &[FieldElem]) -> LinearMap {
        let cols: Vec<Vector> = (0..self.n)
            .map(|j| self.multiply(a, &self.basis_vector(j)))
            .collect();
        LinearMap::from_columns(self.field, &cols).expect("square")
    }

    /// True iff `m` is invertible and multiplicative on basis pairs.
    pub fn is_automorphism(&self, m: &LinearMap) -> bool {
        if m.dim() != self.n || m.field() != self.field || m.determinant().is_zero() {
            return false;
        }
        let images: Vec<Vector> = (0..self.n).map(|i| m.column(i)).collect();
        (0..self.n).all(|i| {
            (i..self.n).all(|j| {
                m.apply(&self.basis_product(i, j)) == self.multiply(&images[i], &images[j])
            })
        })
    }

    /// `x ∗ y = h(x • y)` for an automorphism `h`.
    pub fn inner_isotope(&self, h: &LinearMap) -> Result<Self> {
        if h.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: h.dim(),
            });
        }
        if !self.is_automorphism(h) {
            return Err(Error::NotAutomorphism);
        }
        Self::from_basis_products(self.field, self.n, Provenance::Isotope(None), |i, j| {
            h.apply(&self.basis_product(i, j))
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Block-diagonal sum; cross products vanish.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let (a, b) = (self.n, other.n);
        let n = a + b;
        Self::from_basis_products(self.field, n, Provenance::DirectSum, |i, j| {
            let mut v = vec![self.field.zero(); n];
            if i < a && j < a {
                v[..a].copy_from_slice(&self.basis_product(i, j));
            } else if i >= a && j >= a {
                v[a..].copy_from_slice(&other.basis_product(i - a, j - a));
            }
            v
        })
    }

    /// The algebra in the basis `e'_i = e_{π(i)}`.
    pub fn permute_basis(&self, pi: &Permutation) -> Result<Self> {
        if pi.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: pi.degree(),
            });
        }
        let idx = |i: usize| pi.apply(i + 1) - 1;
        Self::from_basis_products(self.field, self.n, self.provenance.clone(), |i, j| {
            let orig = self.basis_product(idx(i), idx(j));
            (0..self.n).map(|k| orig[idx(k)]).collect()
        })
    }

    /// Checks the commutative, associative and medial laws on basis tuples
    /// (enough by multilinearity) and searches for a unit.
    pub fn check_identities(&self) -> IdentityReport {
        let n = self.n;
        let e: Vec<Vector> = (0..n).map(|i| self.basis_vector(i)).collect();
        let prod: Vec<Vec<Vector>> = (0..n)
            .map(|i| (0..n).map(|j| self.basis_product(i, j)).collect())
            .collect();

        let commutative_witness = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| prod[i][j] != prod[j][i])
            .map(|(i, j)| [i + 1, j + 1]);

        let mut associative_witness = None;
        'assoc: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.multiply(&prod[i][j], &e[k]);
                    let right = self.multiply(&e[i], &prod[j][k]);
                    if left != right {
                        associative_witness = Some([i + 1, j + 1, k + 1]);
                        break 'assoc;
                    }
                }
            }
        }

        let mut medial_witness = None;
        'medial: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let left = self.multiply(&prod[i][j], &prod[k][l]);
                        let right = self.multiply(&prod[i][k], &prod[j][l]);
                        if left != right {
                            medial_witness = Some([i + 1, j + 1, k + 1, l + 1]);
                            break 'medial;
                        }
                    }
                }
            }
        }

        let unit = self.find_unit();
        IdentityReport {
            commutative: commutative_witness.is_none(),
            associative: associative_witness.is_none(),
            medial: medial_witness.is_none(),
            unital: unit.is_some(),
            commutative_witness,
            associative_witness,
            medial_witness,
            unit,
        }
    }

    /// Solves `L(u) = I` for `u`: `Σ_k u_k a_{kij} = δ_ij` over all `(i, j)`.
    pub fn find_unit(&self) -> Option<Vector> {
        let n = self.n;
        let mut rows = Vec::with_capacity(n * n);
        let mut rhs = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                // (u ∗ e_j)_i = Σ_k u_k a_{kji}
                rows.push((0..n).map(|k| self.structure_constant(k, j, i)).collect());
                rhs.push(if i == j {
                    self.field.one()
                } else {
                    self.field.zero()
                });
            }
        }
        let u = solve(self.field, &rows, &rhs)?;
        self.left_mult(&u).is_identity().then_some(u)
    }
}

/// The coordinate-wise product algebra `(K^n, •)`.
pub fn product_algebra(n: usize, field: PrimeField) -> Algebra {
    Algebra::from_basis_products(field, n, Provenance::Product, |i, j| {
        let mut v = vec![field.zero(); n];
        if i == j {
            v[i] = field.one();
        }
        v
    })
    .expect("diagonal constants are commutative")
}

/// `ψ_σ(x)_i = x_{σ(i)}`.
pub fn perm_map(sigma: &Permutation, field: PrimeField) -> LinearMap {
    let n = sigma.degree();
    let mut m = LinearMap::zero(n, field);
    for i in 1..=n {
        m.set(i - 1, sigma.apply(i) - 1, field.one());
    }
    m
}

/// The isotope `(K^n, •_σ)` of the product algebra.
pub fn permutation_isotope(sigma: &Permutation, field: PrimeField) -> Algebra {
    product_algebra(sigma.degree(), field)
        .inner_isotope(&perm_map(sigma, field))
        .expect("permutation maps are automorphisms of K^n")
        .with_provenance(Provenance::Isotope(Some(sigma.clone())))
}

#[derive(Clone, Debug)]
pub struct CycleDecomposition {
    /// Each cycle (in cycle order) with its single-cycle isotope on those coordinates.
    pub blocks: Vec<(Vec<usize>, Algebra)>,
    /// `relabel(i)` is the original coordinate placed at position `i` of the direct sum.
    pub relabel: Permutation,
    pub direct_sum: Algebra,
}

/// Splits `(K^n, •_σ)` into one single-cycle isotope per cycle of `σ` and
/// verifies that their direct sum is the isotope after relabeling.
pub fn decompose_by_cycles(sigma: &Permutation, field: PrimeField) -> Result<CycleDecomposition> {
    field.check_admissible(&sigma.cycle_type())?;
    let cycles = sigma.cycles();
    let blocks: Vec<(Vec<usize>, Algebra)> = cycles
        .iter()
        .map(|c| {
            (
                c.clone(),
                permutation_isotope(&Permutation::shift(c.len()), field),
            )
        })
        .collect();
    let relabel = Permutation::new(cycles.concat())?;
    let mut sum = Algebra::trivial(field);
    for (_, block) in &blocks {
        sum = sum.direct_sum(block)?;
    }
    let expected = permutation_isotope(sigma, field).permute_basis(&relabel)?;
    if !sum.same_structure(&expected) {
        return Err(Error::InvariantViolation(
            "direct sum of cycle blocks differs from the isotope".into(),
        ));
    }
    Ok(CycleDecomposition {
        blocks,
        relabel,
        direct_sum: sum,
    })
}

/// `K[z]/(z^n - 1)` in the power basis with its substitution automorphism
/// `z ↦ εz` and the evaluation isomorphism onto `(K^n, •)`.
#[derive(Clone, Debug)]
pub struct PolyModel {
    pub algebra: Algebra,
    pub epsilon: FieldElem,
    /// `p(z) ↦ p(εz)`, diagonal `diag(ε^j)`.
    pub substitution: LinearMap,
    /// `p ↦ (p(1), p(ε), …, p(ε^{n-1}))`.
    pub evaluation: LinearMap,
}

impl PolyModel {
    /// `x ∗ y = S(x · y)` with `S` the substitution map.
    pub fn isotope(&self) -> Algebra {
        self.algebra
            .inner_isotope(&self.substitution)
            .expect("substitution is an automorphism")
            .with_provenance(Provenance::PolyModel)
    }

    /// The substitution map transported to the diagonal model.
    pub fn transported_substitution(&self) -> LinearMap {
        let inv = self
            .evaluation
            .inverse()
            .expect("Vandermonde is invertible");
        self.evaluation.compose(&self.substitution).compose(&inv)
    }
}

pub fn poly_model(n: usize, field: PrimeField) -> Result<PolyModel> {
    let eps = field
        .primitive_root_of_order(n as u64)
        .map_err(|_| Error::InadmissibleField {
            p: field.modulus(),
            reason: format!("no primitive root of unity of order {n}"),
        })?;
    let algebra = Algebra::from_basis_products(field, n, Provenance::PolyModel, |i, j| {
        let mut v = vec![field.zero(); n];
        v[(i + j) % n] = field.one();
        v
    })?;
    let substitution = LinearMap::diagonal(
        &(0..n).map(|j| eps.pow(j as u64)).collect::<Vec<_>>(),
        field,
    );
    let mut evaluation = LinearMap::zero(n, field);
    for j in 0..n {
        for i in 0..n {
            evaluation.set(j, i, eps.pow((i * j) as u64));
        }
    }
    if !algebra.is_automorphism(&substitution) {
        return Err(Error::InvariantViolation(
            "substitution is not an automorphism".into(),
        ));
    }
    let product = product_algebra(n, field);
    let multiplicative = (0..n).all(|i| {
        (0..n).all(|j| {
            evaluation.apply(&algebra.basis_product(i, j))
                == product.multiply(&evaluation.column(i), &evaluation.column(j))
        })
    });
    if !multiplicative || evaluation.determinant().is_zero() {
        return Err(Error::InvariantViolation(
            "evaluation map is not an algebra isomorphism".into(),
        ));
    }
    Ok(PolyModel {
        algebra,
        epsilon: eps,
        substitution,
        evaluation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn f43() -> PrimeField {
        PrimeField::new(43).unwrap()
    }

    fn p(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    #[test]
    fn product_algebra_examples() {
        let f = f43();
        let one = product_algebra(1, f);
        assert_eq!(one.multiply(&[f.elem(5)], &[f.elem(7)]), vec![f.elem(35)]);
        let a = product_algebra(3, f);
        assert_eq!(a.basis_product(0, 0), a.basis_vector(0));
        assert_eq!(a.basis_product(0, 1), a.zero_vector());
        assert_eq!(a.find_unit(), Some(vec![f.one(); 3]));
    }

    #[test]
    fn perm_map_examples() {
        let f = f43();
        assert!(perm_map(&Permutation::identity(3), f).is_identity());
        let tau = Permutation::shift(3);
        let psi = perm_map(&tau, f);
        let a = product_algebra(3, f);
        assert_eq!(psi.apply(&a.basis_vector(0)), a.basis_vector(2));
        assert!(psi.compose(&perm_map(&tau.inverse(), f)).is_identity());
    }

    #[test]
    fn inner_isotope_examples() {
        let f = f43();
        let a = product_algebra(3, f);
        let same = a.inner_isotope(&LinearMap::identity(3, f)).unwrap();
        assert!(same.same_structure(&a));
        let iso = permutation_isotope(&p(&[2, 3, 1]), f);
        assert_eq!(iso.basis_product(0, 0), iso.basis_vector(2));
        let mut bad = LinearMap::identity(3, f);
        bad.set(0, 1, f.one());
        assert_eq!(a.inner_isotope(&bad).unwrap_err(), Error::NotAutomorphism);
    }

    #[test]
    fn direct_sum_examples() {
        let f = PrimeField::new(7).unwrap();
        let a = permutation_isotope(&Permutation::shift(2), f);
        assert!(a
            .direct_sum(&Algebra::trivial(f))
            .unwrap()
            .same_structure(&a));
        let sum = a.direct_sum(&product_algebra(1, f)).unwrap();
        assert_eq!(sum.dim(), 3);
        let expected = permutation_isotope(&p(&[2, 1, 3]), f);
        assert!(sum.same_structure(&expected));
        assert!(sum
            .multiply(&sum.basis_vector(0), &sum.basis_vector(2))
            .iter()
            .all(FieldElem::is_zero));
        let other = product_algebra(1, f43());
        assert_eq!(a.direct_sum(&other).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn decomposition_examples() {
        let f = PrimeField::new(7).unwrap();
        let d =
            decompose_by_cycles(&Permutation::identity(3), PrimeField::new(5).unwrap()).unwrap();
        assert_eq!(d.blocks.len(), 3);
        assert!(d.blocks.iter().all(|(_, b)| b.dim() == 1));
        let d = decompose_by_cycles(&p(&[2, 1, 3]), f).unwrap();
        assert_eq!(
            d.blocks.iter().map(|(_, b)| b.dim()).collect::<Vec<_>>(),
            vec![2, 1]
        );
        let d = decompose_by_cycles(&p(&[2, 3, 1]), f43()).unwrap();
        assert_eq!(d.blocks.len(), 1);
        // non-contiguous cycles need the relabeling
        let s = p(&[3, 4, 1, 2]);
        let d = decompose_by_cycles(&s, f).unwrap();
        assert_eq!(d.relabel.images(), &[1, 3, 2, 4]);
        assert!(decompose_by_cycles(&p(&[2, 3, 1]), f).is_err());
    }

    #[test]
    fn left_mult_examples() {
        let f = f43();
        let a = product_algebra(3, f);
        assert!(a.left_mult(&a.zero_vector()).is_zero());
        assert!(a.left_mult(&[f.one(); 3]).is_identity());
        let tau = Permutation::shift(3);
        let iso = permutation_isotope(&tau, f);
        assert_eq!(iso.left_mult(&[f.one(); 3]), perm_map(&tau, f));
    }

    #[test]
    fn identity_checks() {
        let f = f43();
        let r = product_algebra(3, f).check_identities();
        assert!(r.commutative && r.associative && r.medial && r.unital);
        let r = permutation_isotope(&Permutation::shift(3), f).check_identities();
        assert!(r.commutative && r.medial);
        assert!(!r.associative && !r.unital);
        let [i, j, k] = r.associative_witness.unwrap();
        let iso = permutation_isotope(&Permutation::shift(3), f);
        let (ei, ej, ek) = (
            iso.basis_vector(i - 1),
            iso.basis_vector(j - 1),
            iso.basis_vector(k - 1),
        );
        assert_ne!(
            iso.multiply(&iso.multiply(&ei, &ej), &ek),
            iso.multiply(&ei, &iso.multiply(&ej, &ek))
        );
        let sum = permutation_isotope(&Permutation::shift(3), f)
            .direct_sum(&permutation_isotope(&Permutation::shift(2), f))
            .unwrap();
        assert!(sum.check_identities().medial);
    }

    #[test]
    fn non_medial_algebra_reports_witness() {
        let f = PrimeField::new(7).unwrap();
        // e1 e1 = e2, e2 e2 = e1 + e2, other products zero
        let a = Algebra::from_basis_products(f, 2, Provenance::Custom, |i, j| match (i, j) {
            (0, 0) => vec![f.zero(), f.one()],
            (1, 1) => vec![f.one(), f.one()],
            _ => vec![f.zero(), f.zero()],
        })
        .unwrap();
        let r = a.check_identities();
        assert!(!r.medial && r.medial_witness.is_some());
        let mut sc = vec![f.zero(); 8];
        sc[2] = f.one();
        assert!(matches!(
            Algebra::from_structure_constants(f, 2, sc, Provenance::Custom),
            Err(Error::NotCommutative { .. })
        ));
    }

    #[test]
    fn automorphism_examples() {
        let f = f43();
        let a = product_algebra(3, f);
        assert!(a.is_automorphism(&LinearMap::identity(3, f)));
        for s in Permutation::all(3) {
            assert!(a.is_automorphism(&perm_map(&s, f)));
        }
        let d = LinearMap::diagonal(&[f.one(), f.one(), f.elem(2)], f);
        assert!(!a.is_automorphism(&d));
    }

    #[test]
    fn poly_model_examples() {
        let f = f43();
        let pm = poly_model(3, f).unwrap();
        let one = pm.algebra.basis_vector(0);
        assert_eq!(pm.evaluation.apply(&one), vec![f.one(); 3]);
        let z = pm.algebra.basis_vector(1);
        let z2 = pm.algebra.basis_vector(2);
        assert_eq!(pm.algebra.multiply(&z, &z2), one);
        assert_eq!(pm.substitution.pow(3), LinearMap::identity(3, f));
        assert!(!pm.substitution.is_identity());
        assert!(pm.algebra.is_automorphism(&pm.substitution));
        assert_eq!(
            pm.transported_substitution(),
            perm_map(&Permutation::shift(3), f)
        );
        assert!(poly_model(4, f).is_err());
    }

    #[test]
    fn structure_constants_export() {
        let f = PrimeField::new(7).unwrap();
        let iso = permutation_isotope(&Permutation::shift(2), f);
        assert_eq!(
            iso.structure_constants(),
            vec![vec![vec![0, 1], vec![0, 0]], vec![vec![0, 0], vec![1, 0]]]
        );
    }
}
