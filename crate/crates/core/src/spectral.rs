//! Peirce decompositions of idempotents, closed-form eigenvectors for single
//! cycles, fusion tables, operator identities and the cubic norm of the
//! three-dimensional polynomial model.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{poly_model, Algebra};
use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::fpoly::FpPoly;
use crate::idem::{idempotents_formula, IdempotentTable};
use crate::linalg::{rank_of, solve, LinearMap, Vector};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigenspace {
    pub eigenvalue: FieldElem,
    /// Root multiplicity in the characteristic polynomial.
    pub multiplicity: usize,
    pub basis: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeirceDecomposition {
    pub idempotent: Vector,
    pub char_poly: FpPoly,
    /// Eigenspaces ordered by eigenvalue residue.
    pub eigenspaces: Vec<Eigenspace>,
}

impl PeirceDecomposition {
    pub fn eigenvalues(&self) -> Vec<FieldElem> {
        self.eigenspaces.iter().map(|e| e.eigenvalue).collect()
    }

    pub fn space(&self, lambda: FieldElem) -> Option<&Eigenspace> {
        self.eigenspaces.iter().find(|e| e.eigenvalue == lambda)
    }

    /// Geometric and algebraic multiplicities agree for every eigenvalue.
    pub fn dims_match_multiplicities(&self) -> bool {
        self.eigenspaces
            .iter()
            .all(|e| e.basis.len() == e.multiplicity)
    }
}

/// Eigenspaces of `L(c)` over `F_p`; `NonSemisimple` when they do not span.
pub fn peirce(algebra: &Algebra, c: &[FieldElem]) -> Result<PeirceDecomposition> {
    if !algebra.is_idempotent(c) {
        return Err(Error::NotIdempotent);
    }
    let n = algebra.dim();
    let lc = algebra.left_mult(c);
    let char_poly = lc.char_poly()?;
    let mut eigenspaces = Vec::new();
    for (lambda, multiplicity) in char_poly.roots() {
        let shifted = lc.sub(&LinearMap::scalar(n, lambda));
        let basis = shifted.kernel();
        for v in &basis {
            if lc.apply(v) != v.iter().map(|&x| x * lambda).collect::<Vector>() {
                return Err(Error::InvariantViolation(format!(
                    "kernel vector is not a {lambda}-eigenvector"
                )));
            }
        }
        eigenspaces.push(Eigenspace {
            eigenvalue: lambda,
            multiplicity,
            basis,
        });
    }
    let found: usize = eigenspaces.iter().map(|e| e.basis.len()).sum();
    if found < n {
        return Err(Error::NonSemisimple { found, n });
    }
    Ok(PeirceDecomposition {
        idempotent: c.to_vec(),
        char_poly,
        eigenspaces,
    })
}

/// `η_{k,p}` with `η_i = ε^{(i-1)p} ζ^{-e_i k}`, `e_i = Σ_{j=2}^{i} 2^{n-j}`,
/// verified to satisfy `L(c_k) η = ε^p η` before it is returned.
pub fn eigvec_formula(k: u64, p: u64, n: usize, field: PrimeField) -> Result<Vector> {
    let sigma = Permutation::shift(n);
    let table = idempotents_formula(&sigma, field)?;
    let big_n = (1u64 << n) - 1;
    let k = match k % big_n {
        0 => big_n,
        r => r,
    };
    let c = &table.idems[table
        .position_of_label(&k.to_string())
        .ok_or_else(|| Error::InvariantViolation(format!("no idempotent labelled {k}")))?];
    let zeta = field.primitive_root_of_order(big_n)?;
    let eps = field.primitive_root_of_order(n as u64)?;
    let eta: Vector = (1..=n)
        .map(|i| {
            let e_i: u64 = (2..=i).map(|j| 1u64 << (n - j)).sum();
            let zeta_exp = (big_n - (e_i * k) % big_n) % big_n;
            eps.pow((i as u64 - 1) * p) * zeta.pow(zeta_exp)
        })
        .collect();
    let lambda = eps.pow(p);
    let image = table.algebra.left_mult(c).apply(&eta);
    let expected: Vector = eta.iter().map(|&x| x * lambda).collect();
    if image != expected {
        return Err(Error::FormulaMismatch(format!(
            "η_{{{k},{p}}} is not an ε^{p}-eigenvector of L(c_{k})"
        )));
    }
    Ok(eta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionEntry {
    pub lambda: FieldElem,
    pub mu: FieldElem,
    /// Dimension of the span of all products `A_λ ∗ A_μ`.
    pub rank: usize,
    /// Smallest set of eigenvalues whose eigenspaces sum to a space containing the products.
    pub contained_in: Vec<FieldElem>,
    /// `Some(ν)` when the products span exactly `A_ν`.
    pub equals: Option<FieldElem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionTable {
    pub eigenvalues: Vec<FieldElem>,
    pub dims: Vec<usize>,
    pub entries: Vec<FusionEntry>,
}

impl FusionTable {
    pub fn entry(&self, lambda: FieldElem, mu: FieldElem) -> Option<&FusionEntry> {
        self.entries
            .iter()
            .find(|e| e.lambda == lambda && e.mu == mu)
    }

    fn dim_of(&self, lambda: FieldElem) -> Option<usize> {
        self.eigenvalues
            .iter()
            .position(|&l| l == lambda)
            .map(|i| self.dims[i])
    }

    /// `A_λ ∗ A_μ = A_{λμ}` for every pair; the first failure is returned.
    pub fn cyclic_law(&self) -> std::result::Result<(), String> {
        for e in &self.entries {
            let target = e.lambda * e.mu;
            let ok = e.equals == Some(target) && self.dim_of(target).is_some();
            if !ok {
                return Err(format!(
                    "A_{} ∗ A_{} spans {:?} (rank {}), expected A_{}",
                    e.lambda,
                    e.mu,
                    e.contained_in
                        .iter()
                        .map(|x| x.residue())
                        .collect::<Vec<_>>(),
                    e.rank,
                    target
                ));
            }
        }
        Ok(())
    }

    /// Associative Peirce law: `A_1A_1 ⊆ A_1`, `A_0A_0 ⊆ A_0`, `A_1A_0 = 0`.
    pub fn peirce_law(&self) -> std::result::Result<(), String> {
        for e in &self.entries {
            let (l, m) = (e.lambda.residue(), e.mu.residue());
            if l > 1 || m > 1 {
                return Err(format!("eigenvalue outside {{0, 1}}: ({l}, {m})"));
            }
            let allowed: &[u64] = match (l, m) {
                (1, 1) => &[1],
                (0, 0) => &[0],
                _ => &[],
            };
            if e.contained_in
                .iter()
                .any(|x| !allowed.contains(&x.residue()))
            {
                return Err(format!(
                    "A_{l} ∗ A_{m} lies in {:?}",
                    e.contained_in
                        .iter()
                        .map(|x| x.residue())
                        .collect::<Vec<_>>()
                ));
            }
        }
        Ok(())
    }
}

/// Products of eigenspace bases for every eigenvalue pair, located in the
/// eigenbasis coordinates.
pub fn fusion_table(algebra: &Algebra, pd: &PeirceDecomposition) -> Result<FusionTable> {
    let field = algebra.field();
    let n = algebra.dim();
    let mut columns = Vec::with_capacity(n);
    let mut owner = Vec::with_capacity(n);
    for (idx, space) in pd.eigenspaces.iter().enumerate() {
        for v in &space.basis {
            columns.push(v.clone());
            owner.push(idx);
        }
    }
    let change = LinearMap::from_columns(field, &columns)?;
    let rows = change.rows();
    let mut entries = Vec::new();
    for a in &pd.eigenspaces {
        for b in &pd.eigenspaces {
            let products: Vec<Vector> = a
                .basis
                .iter()
                .flat_map(|x| b.basis.iter().map(move |y| algebra.multiply(x, y)))
                .collect();
            let rank = if products.is_empty() {
                0
            } else {
                rank_of(field, products.clone())
            };
            let mut hit = vec![false; pd.eigenspaces.len()];
            for v in &products {
                let coords = solve(field, &rows, v)
                    .ok_or_else(|| Error::InvariantViolation("eigenvectors do not span".into()))?;
                for (i, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        hit[owner[i]] = true;
                    }
                }
            }
            let contained_in: Vec<FieldElem> = hit
                .iter()
                .enumerate()
                .filter(|(_, &h)| h)
                .map(|(i, _)| pd.eigenspaces[i].eigenvalue)
                .collect();
            let equals = match contained_in.as_slice() {
                [nu] if pd.space(*nu).is_some_and(|s| s.basis.len() == rank) => Some(*nu),
                _ => None,
            };
            entries.push(FusionEntry {
                lambda: a.eigenvalue,
                mu: b.eigenvalue,
                rank,
                contained_in,
                equals,
            });
        }
    }
    Ok(FusionTable {
        eigenvalues: pd.eigenvalues(),
        dims: pd.eigenspaces.iter().map(|e| e.basis.len()).collect(),
        entries,
    })
}

/// `Σ L(c)^s` over the nonzero idempotents of the table.
pub fn power_sum(table: &IdempotentTable, s: u64) -> LinearMap {
    let alg = &table.algebra;
    table
        .nonzero()
        .fold(LinearMap::zero(alg.dim(), alg.field()), |acc, i| {
            acc.add(&alg.left_mult(&table.idems[i]).pow(s))
        })
}

/// Rank of the idempotent vectors.
pub fn span_rank(table: &IdempotentTable) -> usize {
    if table.is_empty() {
        return 0;
    }
    rank_of(table.algebra.field(), table.idems.clone())
}

/// Smallest `m ≥ 1` with `L(c)^m = I`. Orders in `GL(n, p)` never exceed
/// `p^n - 1`, which bounds the search.
pub fn operator_order(algebra: &Algebra, c: &[FieldElem]) -> Result<u64> {
    let lc = algebra.left_mult(c);
    if lc.determinant().is_zero() {
        return Err(Error::NotInvertible);
    }
    let bound = (algebra.field().modulus() as u128)
        .checked_pow(algebra.dim() as u32)
        .map_or(u64::MAX, |b| (b - 1).min(u64::MAX as u128) as u64);
    let mut power = lc.clone();
    let mut m = 1u64;
    while !power.is_identity() {
        if m >= bound {
            return Err(Error::BoundExceeded(format!(
                "operator order exceeds {bound}"
            )));
        }
        power = power.compose(&lc);
        m += 1;
    }
    Ok(m)
}

/// `∏_i (λ^{s_i} - α_i)` for cycle lengths `s_i` and stratum bits `α_i`.
pub fn stratum_char_poly(field: PrimeField, cycle_lengths: &[usize], alpha: &[bool]) -> FpPoly {
    cycle_lengths
        .iter()
        .zip(alpha)
        .fold(FpPoly::one(field), |acc, (&s, &a)| {
            let c = if a { field.one() } else { field.zero() };
            acc.mul(&FpPoly::binomial(field, s, c))
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumSpectrum {
    /// Stratum bits as a string, first cycle first.
    pub alpha: String,
    pub members: Vec<String>,
    pub char_poly: FpPoly,
    pub expected: FpPoly,
    /// All members share `char_poly` and it equals `expected`.
    pub consistent: bool,
}

/// Characteristic polynomials of all idempotents grouped by stratum.
pub fn stratified_spectra(table: &IdempotentTable) -> Result<Vec<StratumSpectrum>> {
    let field = table.algebra.field();
    let mut groups: BTreeMap<Vec<bool>, Vec<(String, FpPoly)>> = BTreeMap::new();
    for (label, c) in table.labels.iter().zip(&table.idems) {
        let chi = table.algebra.left_mult(c).char_poly()?;
        groups
            .entry(label.alpha.clone())
            .or_default()
            .push((label.name.clone(), chi));
    }
    Ok(groups
        .into_iter()
        .map(|(alpha, members)| {
            let expected = stratum_char_poly(field, &table.cycle_lengths, &alpha);
            let first = members[0].1.clone();
            let consistent = members.iter().all(|(_, chi)| *chi == expected);
            StratumSpectrum {
                alpha: alpha.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                members: members.into_iter().map(|(name, _)| name).collect(),
                char_poly: first,
                expected,
                consistent,
            }
        })
        .collect())
}

/// `L(c_2) L(c_1) = L(c_1 ∗ c_2) L(c_2)` for all idempotent pairs; returns
/// the first failing label pair.
pub fn composition_rule_check(table: &IdempotentTable) -> Option<(String, String)> {
    let alg = &table.algebra;
    let ops: Vec<LinearMap> = table.idems.iter().map(|c| alg.left_mult(c)).collect();
    for i in 0..table.len() {
        for j in 0..table.len() {
            let prod = table.product_table[i][j];
            if ops[j].compose(&ops[i]) != ops[prod].compose(&ops[j]) {
                return Some((table.labels[i].name.clone(), table.labels[j].name.clone()));
            }
        }
    }
    None
}

/// Circulant determinant `Δ(a_0 + a_1 z + a_2 z^2)` with rows
/// `(a_0, a_2, a_1)`, `(a_1, a_0, a_2)`, `(a_2, a_1, a_0)`.
pub fn circulant_delta(a: &[FieldElem]) -> Result<FieldElem> {
    if a.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: a.len(),
        });
    }
    let field = a[0].field();
    let rows = vec![
        vec![a[0], a[2], a[1]],
        vec![a[1], a[0], a[2]],
        vec![a[2], a[1], a[0]],
    ];
    Ok(LinearMap::from_rows(field, &rows)?.determinant())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CirculantReport {
    pub samples: usize,
    /// `x ∗ (x ∗ (x ∗ y)) = Δ(x) y` on every sample.
    pub cube_identity: bool,
    /// `Δ(x ∗ y) = Δ(x) Δ(y)` on every sample.
    pub multiplicative: bool,
    pub witness: Option<(Vec<u64>, Vec<u64>)>,
}

/// Samples random pairs in the three-dimensional polynomial model with the
/// substitution isotope and checks the cubic norm identities.
pub fn circulant_identity_check(
    field: PrimeField,
    samples: usize,
    seed: u64,
) -> Result<CirculantReport> {
    let model = poly_model(3, field)?;
    let iso = model.isotope();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.modulus();
    let draw = |rng: &mut ChaCha8Rng| -> Vector {
        (0..3).map(|_| field.elem(rng.gen_range(0..p))).collect()
    };
    let residues = |v: &Vector| v.iter().map(|x| x.residue()).collect::<Vec<_>>();
    let mut cube_identity = true;
    let mut multiplicative = true;
    let mut witness = None;
    for _ in 0..samples {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let d = circulant_delta(&x)?;
        let lhs = iso.multiply(&x, &iso.multiply(&x, &iso.multiply(&x, &y)));
        let rhs: Vector = y.iter().map(|&v| v * d).collect();
        let cube_ok = lhs == rhs;
        let mult_ok = circulant_delta(&iso.multiply(&x, &y))? == d * circulant_delta(&y)?;
        if !(cube_ok && mult_ok) && witness.is_none() {
            witness = Some((residues(&x), residues(&y)));
        }
        cube_identity &= cube_ok;
        multiplicative &= mult_ok;
    }
    Ok(CirculantReport {
        samples,
        cube_identity,
        multiplicative,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{permutation_isotope, product_algebra};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn single_cycle_peirce() {
        let field = f(43);
        let t = idempotents_formula(&Permutation::shift(3), field).unwrap();
        let eps = field.primitive_root_of_order(3).unwrap();
        for i in t.nonzero() {
            let pd = peirce(&t.algebra, &t.idems[i]).unwrap();
            let mut eig: Vec<u64> = pd.eigenvalues().iter().map(|x| x.residue()).collect();
            let mut want: Vec<u64> = (0..3).map(|p| eps.pow(p).residue()).collect();
            eig.sort();
            want.sort();
            assert_eq!(eig, want);
            assert!(pd.eigenspaces.iter().all(|e| e.basis.len() == 1));
            assert!(pd.dims_match_multiplicities());
        }
    }

    #[test]
    fn product_algebra_peirce() {
        let field = f(5);
        let alg = product_algebra(3, field);
        let ones = vec![field.one(); 3];
        let pd = peirce(&alg, &ones).unwrap();
        assert_eq!(pd.eigenvalues(), vec![field.one()]);
        assert_eq!(pd.eigenspaces[0].basis.len(), 3);
        let e1 = alg.basis_vector(0);
        let pd = peirce(&alg, &e1).unwrap();
        assert_eq!(pd.char_poly, FpPoly::from_i64(field, &[0, 0, -1, 1]));
        assert_eq!(pd.space(field.zero()).unwrap().basis.len(), 2);
        assert_eq!(pd.space(field.one()).unwrap().basis.len(), 1);
    }

    #[test]
    fn eigenvectors_from_formula() {
        let field = f(43);
        let t = idempotents_formula(&Permutation::shift(3), field).unwrap();
        for k in 1..=7u64 {
            let etas: Vec<Vector> = (0..3)
                .map(|p| eigvec_formula(k, p, 3, field).unwrap())
                .collect();
            assert_eq!(rank_of(field, etas.clone()), 3);
            // p = 0 is proportional to c_k
            let c = &t.idems[t.position_of_label(&k.to_string()).unwrap()];
            assert_eq!(rank_of(field, vec![etas[0].clone(), c.clone()]), 1);
        }
        let field = f(61);
        for k in 1..=15u64 {
            for p in 0..4 {
                eigvec_formula(k, p, 4, field).unwrap();
            }
        }
    }

    #[test]
    fn fusion_laws() {
        let field = f(43);
        let t = idempotents_formula(&Permutation::shift(3), field).unwrap();
        for i in t.nonzero() {
            let pd = peirce(&t.algebra, &t.idems[i]).unwrap();
            let ft = fusion_table(&t.algebra, &pd).unwrap();
            ft.cyclic_law().unwrap();
            assert_eq!(ft.entries.len(), 9);
        }
        let field = f(5);
        let alg = product_algebra(3, field);
        let pd = peirce(&alg, &alg.basis_vector(0)).unwrap();
        let ft = fusion_table(&alg, &pd).unwrap();
        ft.peirce_law().unwrap();
        let e10 = ft.entry(field.one(), field.zero()).unwrap();
        assert_eq!(e10.rank, 0);
        assert!(e10.contained_in.is_empty());
    }

    #[test]
    fn power_sums_and_orders() {
        let field = f(43);
        let t = idempotents_formula(&Permutation::shift(3), field).unwrap();
        assert!(power_sum(&t, 1).is_zero());
        assert!(power_sum(&t, 2).is_zero());
        assert_eq!(power_sum(&t, 3), LinearMap::scalar(3, field.elem(7)));
        assert_eq!(span_rank(&t), 3);
        for i in t.nonzero() {
            assert_eq!(operator_order(&t.algebra, &t.idems[i]).unwrap(), 3);
        }
        assert_eq!(
            operator_order(&t.algebra, &t.idems[0]),
            Err(Error::NotInvertible)
        );
        let prod = product_algebra(3, f(5));
        assert_eq!(operator_order(&prod, &[f(5).one(); 3]).unwrap(), 1);
        let sigma = Permutation::new(vec![2, 1, 3]).unwrap();
        let alg = permutation_isotope(&sigma, f(7));
        assert_eq!(operator_order(&alg, &[f(7).one(); 3]).unwrap(), 2);
    }

    #[test]
    fn stratified_spectra_match_product_formula() {
        for (parts, p) in [
            (vec![2, 2], 7),
            (vec![3, 1], 43),
            (vec![2, 1], 7),
            (vec![1, 1, 1], 5),
        ] {
            let sigma = Permutation::from_cycle_type(&parts);
            let t = idempotents_formula(&sigma, f(p)).unwrap();
            let strata = stratified_spectra(&t).unwrap();
            assert_eq!(strata.len(), 1 << parts.len());
            assert!(strata.iter().all(|s| s.consistent), "{parts:?}");
            assert!(composition_rule_check(&t).is_none());
        }
    }

    #[test]
    fn circulant_examples() {
        let field = f(43);
        let e = |v: [u64; 3]| v.iter().map(|&x| field.elem(x)).collect::<Vector>();
        assert_eq!(circulant_delta(&e([1, 0, 0])).unwrap(), field.one());
        assert_eq!(circulant_delta(&e([0, 1, 0])).unwrap(), field.one());
        assert!(circulant_delta(&[field.one()]).is_err());
        let report = circulant_identity_check(field, 100, 7).unwrap();
        assert!(report.cube_identity && report.multiplicative);
    }
}
