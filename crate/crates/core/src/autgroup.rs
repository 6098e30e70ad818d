//! Automorphisms of the idempotent quasigroup (affine maps of `Z_N`,
//! `N = 2^n - 1`) and of the algebra, group-structure verification, and
//! isomorphism testing between permutation isotopes.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{perm_map, permutation_isotope, Algebra};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fpoly::FpPoly;
use crate::idem::{idempotents_formula, star, IdempotentTable, QuasigroupTable};
use crate::linalg::{greedy_independent, LinearMap, Vector};
use crate::perm::Permutation;
use crate::spectral::span_rank;

/// Default cap on `N!` for the quasigroup brute force (`N ≤ 8`).
pub const DEFAULT_QUASIGROUP_CAP: u128 = 40_320;

/// `i ↦ m·i + k (mod N)` on representatives `1..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineMap {
    pub modulus: u64,
    pub m: u64,
    pub k: u64,
}

impl AffineMap {
    pub fn new(modulus: u64, m: u64, k: u64) -> Result<Self> {
        if modulus < 2 || m.gcd(&modulus) != 1 {
            return Err(Error::InvariantViolation(format!(
                "{m} is not a unit modulo {modulus}"
            )));
        }
        Ok(Self {
            modulus,
            m: m % modulus,
            k: k % modulus,
        })
    }

    pub fn identity(modulus: u64) -> Self {
        Self {
            modulus,
            m: 1,
            k: 0,
        }
    }

    pub fn apply(&self, i: u64) -> u64 {
        match (self.m * (i % self.modulus) + self.k) % self.modulus {
            0 => self.modulus,
            r => r,
        }
    }

    /// `self ∘ other = ψ_{mm', mk' + k}`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.modulus;
        Self {
            modulus: n,
            m: self.m * other.m % n,
            k: (self.m * other.k + self.k) % n,
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.modulus;
        let m_inv = (1..n).find(|x| x * self.m % n == 1).expect("unit");
        Self {
            modulus: n,
            m: m_inv,
            k: (n - m_inv * self.k % n) % n,
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        (0..e).fold(Self::identity(self.modulus), |acc, _| acc.compose(self))
    }

    /// Images of `1..=N` in order.
    pub fn images(&self) -> Vec<u64> {
        (1..=self.modulus).map(|i| self.apply(i)).collect()
    }
}

/// All `N·φ(N)` affine maps of `Z_N`, each checked against the ⊛ law.
pub fn affine_autos(n: usize) -> Result<Vec<AffineMap>> {
    let big_n = (1u64 << n) - 1;
    let mut out = Vec::new();
    for m in (1..big_n.max(2)).filter(|m| m.gcd(&big_n) == 1) {
        for k in 0..big_n {
            let g = AffineMap::new(big_n, m, k)?;
            let preserves = (1..=big_n).all(|i| {
                (1..=big_n).all(|j| g.apply(star(n, i, j)) == star(n, g.apply(i), g.apply(j)))
            });
            if !preserves {
                return Err(Error::LawViolation(format!(
                    "ψ_{{{m},{k}}} does not preserve ⊛"
                )));
            }
            out.push(g);
        }
    }
    out.sort();
    Ok(out)
}

/// Every bijection of the labels preserving the quasigroup table.
pub fn quasigroup_autos_bruteforce(q: &QuasigroupTable, cap: u128) -> Result<BTreeSet<Vec<u64>>> {
    let big_n = q.labels.len();
    let needed = (1..=big_n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x));
    let needed = needed.unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let at = |i: u64, j: u64| q.table[(i - 1) as usize][(j - 1) as usize];
    let labels = &q.labels;
    Ok(Permutation::all(big_n)
        .map(|g| g.images().iter().map(|&x| x as u64).collect::<Vec<u64>>())
        .filter(|g| {
            let img = |i: u64| g[(i - 1) as usize];
            labels
                .iter()
                .all(|&i| labels.iter().all(|&j| img(at(i, j)) == at(img(i), img(j))))
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftedAutomorphism {
    pub affine: AffineMap,
    pub matrix: LinearMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraAutos {
    /// Number of candidate maps examined.
    pub candidates: usize,
    pub accepted: Vec<LiftedAutomorphism>,
}

fn single_cycle_n(table: &IdempotentTable) -> Result<usize> {
    if table.cycle_lengths.len() != 1 {
        return Err(Error::NotSingleCycle);
    }
    Ok(table.algebra.dim())
}

/// Greedy basis of nonzero idempotents in label order.
fn idempotent_basis(table: &IdempotentTable) -> Result<Vec<usize>> {
    let n = table.algebra.dim();
    let rank = span_rank(table);
    if rank < n {
        return Err(Error::RankDeficient { rank, n });
    }
    let nonzero: Vec<usize> = table.nonzero().collect();
    let vecs: Vec<Vector> = nonzero.iter().map(|&i| table.idems[i].clone()).collect();
    Ok(greedy_independent(table.algebra.field(), &vecs, n)
        .into_iter()
        .map(|i| nonzero[i])
        .collect())
}

/// Linear map sending each basis idempotent to its target, if the targets
/// are independent.
fn lift(table: &IdempotentTable, basis: &[usize], targets: &[usize]) -> Option<LinearMap> {
    let field = table.algebra.field();
    let src: Vec<Vector> = basis.iter().map(|&i| table.idems[i].clone()).collect();
    let dst: Vec<Vector> = targets.iter().map(|&i| table.idems[i].clone()).collect();
    let b = LinearMap::from_columns(field, &src).ok()?;
    let b2 = LinearMap::from_columns(field, &dst).ok()?;
    Some(b2.compose(&b.inverse()?))
}

/// Algebra automorphisms of a single-cycle isotope found by lifting every
/// affine map of the idempotent labels.
pub fn algebra_autos(table: &IdempotentTable) -> Result<AlgebraAutos> {
    let n = single_cycle_n(table)?;
    let basis = idempotent_basis(table)?;
    let label_pos: BTreeMap<u64, usize> = table
        .nonzero()
        .map(|i| (table.labels[i].residues[0].expect("nonzero"), i))
        .collect();
    let label_of = |i: usize| table.labels[i].residues[0].expect("nonzero");
    let candidates = affine_autos(n)?;
    let mut accepted = Vec::new();
    for g in &candidates {
        let targets: Vec<usize> = basis
            .iter()
            .map(|&i| label_pos[&g.apply(label_of(i))])
            .collect();
        let Some(m) = lift(table, &basis, &targets) else {
            continue;
        };
        let maps_all = table
            .nonzero()
            .all(|i| m.apply(&table.idems[i]) == table.idems[label_pos[&g.apply(label_of(i))]]);
        if maps_all && table.algebra.is_automorphism(&m) {
            accepted.push(LiftedAutomorphism {
                affine: *g,
                matrix: m,
            });
        }
    }
    Ok(AlgebraAutos {
        candidates: candidates.len(),
        accepted,
    })
}

/// Algebra automorphisms of any isotope with a complete idempotent table:
/// every assignment of basis idempotents to nonzero idempotents with the
/// same characteristic polynomial is lifted and tested. `cap` bounds the
/// number of assignments.
pub fn algebra_autos_search(table: &IdempotentTable, cap: u128) -> Result<Vec<LinearMap>> {
    let n = table.algebra.dim();
    let basis = idempotent_basis(table)?;
    let nonzero: Vec<usize> = table.nonzero().collect();
    let chi: Vec<FpPoly> = table
        .idems
        .iter()
        .map(|c| table.algebra.left_mult(c).char_poly())
        .collect::<Result<_>>()?;
    let options: Vec<Vec<usize>> = basis
        .iter()
        .map(|&b| {
            nonzero
                .iter()
                .copied()
                .filter(|&j| chi[j] == chi[b])
                .collect()
        })
        .collect();
    let needed = options
        .iter()
        .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
        .unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let targets: Vec<usize> = (0..n).map(|t| options[t][choice[t]]).collect();
        let distinct = targets.iter().collect::<BTreeSet<_>>().len() == n;
        if distinct {
            if let Some(m) = lift(table, &basis, &targets) {
                let permutes = table
                    .idems
                    .iter()
                    .all(|c| table.index_of(&m.apply(c)).is_some());
                if permutes && table.algebra.is_automorphism(&m) {
                    let key: Vec<u64> = m.rows().concat().iter().map(|x| x.residue()).collect();
                    if found.insert(key) {
                        out.push(m);
                    }
                }
            }
        }
        // odometer over the option lists
        let mut t = 0;
        loop {
            if t == n {
                return Ok(out);
            }
            choice[t] += 1;
            if choice[t] < options[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub order: usize,
    pub abelian: bool,
    /// `α = ψ_{2,0}` satisfies `α^n = id`.
    pub alpha_order_ok: bool,
    /// `β = ψ_{1,1}` satisfies `β^N = id`.
    pub beta_order_ok: bool,
    /// `α β α⁻¹ = β²`.
    pub conjugation_ok: bool,
    pub relations_ok: bool,
    /// Order `n·N` together with the relations identifies `Z_N ⋊ Z_n`.
    pub semidirect: bool,
}

/// Verifies closure and the presentation of `⟨α, β⟩` inside a set of affine maps.
pub fn group_structure(n: usize, maps: &[AffineMap]) -> Result<GroupStructure> {
    let big_n = (1u64 << n) - 1;
    let set: BTreeSet<AffineMap> = maps.iter().copied().collect();
    for a in &set {
        if !set.contains(&a.inverse()) {
            return Err(Error::NotClosed);
        }
        for b in &set {
            if !set.contains(&a.compose(b)) {
                return Err(Error::NotClosed);
            }
        }
    }
    let abelian = set
        .iter()
        .all(|a| set.iter().all(|b| a.compose(b) == b.compose(a)));
    let id = AffineMap::identity(big_n);
    let alpha = AffineMap::new(big_n, 2 % big_n, 0)?;
    let beta = AffineMap::new(big_n, 1, 1)?;
    let present = set.contains(&alpha) && set.contains(&beta);
    let alpha_order_ok = present && alpha.pow(n as u64) == id;
    let beta_order_ok = present && beta.pow(big_n) == id;
    let conjugation_ok = present && alpha.compose(&beta).compose(&alpha.inverse()) == beta.pow(2);
    let relations_ok = alpha_order_ok && beta_order_ok && conjugation_ok;
    Ok(GroupStructure {
        order: set.len(),
        abelian,
        alpha_order_ok,
        beta_order_ok,
        conjugation_ok,
        relations_ok,
        semidirect: relations_ok && set.len() as u64 == n as u64 * big_n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixGroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub closed: bool,
}

/// Order, commutativity and closure of a finite set of matrices.
pub fn matrix_group_summary(maps: &[LinearMap]) -> MatrixGroupSummary {
    let key =
        |m: &LinearMap| -> Vec<u64> { m.rows().concat().iter().map(|x| x.residue()).collect() };
    let keys: BTreeSet<Vec<u64>> = maps.iter().map(key).collect();
    let closed = maps
        .iter()
        .all(|a| maps.iter().all(|b| keys.contains(&key(&a.compose(b)))));
    let abelian = maps
        .iter()
        .all(|a| maps.iter().all(|b| a.compose(b) == b.compose(a)));
    MatrixGroupSummary {
        order: keys.len(),
        abelian,
        closed,
    }
}

/// `f` is invertible and `f(e_i ∗ e_j) = f(e_i) ∗' f(e_j)` for all basis pairs.
pub fn is_isomorphism(source: &Algebra, target: &Algebra, f: &LinearMap) -> bool {
    let n = source.dim();
    if target.dim() != n || f.dim() != n || f.determinant().is_zero() {
        return false;
    }
    let images: Vec<Vector> = (0..n).map(|i| f.column(i)).collect();
    (0..n).all(|i| {
        (i..n).all(|j| {
            f.apply(&source.basis_product(i, j)) == target.multiply(&images[i], &images[j])
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub enum IsotopeIsomorphism {
    /// `ψ_{g⁻¹}` for the conjugator `g` with `g σ g⁻¹ = τ`.
    Isomorphic {
        conjugator: Permutation,
        map: LinearMap,
    },
    /// Differing multisets of idempotent characteristic polynomials.
    NotIsomorphic {
        source_spectra: Vec<(String, usize)>,
        target_spectra: Vec<(String, usize)>,
    },
}

impl IsotopeIsomorphism {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Self::Isomorphic { .. })
    }
}

fn spectrum_multiset(sigma: &Permutation, field: PrimeField) -> Result<BTreeMap<FpPoly, usize>> {
    let table = idempotents_formula(sigma, field)?;
    let mut out = BTreeMap::new();
    for c in &table.idems {
        *out.entry(table.algebra.left_mult(c).char_poly()?)
            .or_insert(0) += 1;
    }
    Ok(out)
}

/// Decides whether `(F^n, •_σ)` and `(F^n, •_τ)` are isomorphic, with a
/// verified map or a spectral certificate.
pub fn isotope_isomorphism(
    sigma: &Permutation,
    tau: &Permutation,
    field: PrimeField,
) -> Result<IsotopeIsomorphism> {
    if sigma.degree() != tau.degree() {
        return Err(Error::DegreeMismatch {
            left: sigma.degree(),
            right: tau.degree(),
        });
    }
    field.check_admissible(&sigma.cycle_type())?;
    field.check_admissible(&tau.cycle_type())?;
    if sigma.is_conjugate(tau)? {
        let g = sigma.conjugator(tau)?;
        let map = perm_map(&g.inverse(), field);
        let a = permutation_isotope(sigma, field);
        let b = permutation_isotope(tau, field);
        if !is_isomorphism(&a, &b, &map) {
            return Err(Error::InvariantViolation(
                "conjugator does not induce an isomorphism".into(),
            ));
        }
        return Ok(IsotopeIsomorphism::Isomorphic { conjugator: g, map });
    }
    let s = spectrum_multiset(sigma, field)?;
    let t = spectrum_multiset(tau, field)?;
    if s == t {
        return Err(Error::InvariantViolation(
            "non-conjugate permutations with equal idempotent spectra".into(),
        ));
    }
    let render =
        |m: BTreeMap<FpPoly, usize>| m.into_iter().map(|(p, c)| (p.to_string(), c)).collect();
    Ok(IsotopeIsomorphism::NotIsomorphic {
        source_spectra: render(s),
        target_spectra: render(t),
    })
}

/// Whether `ψ_τ ψ_σ⁻¹` is an automorphism of `(F^n, •_σ)`.
pub fn commuting_isotopy_check(
    sigma: &Permutation,
    tau: &Permutation,
    field: PrimeField,
) -> Result<bool> {
    if sigma.degree() != tau.degree() {
        return Err(Error::DegreeMismatch {
            left: sigma.degree(),
            right: tau.degree(),
        });
    }
    let ps = perm_map(sigma, field);
    let g = perm_map(tau, field).compose(&ps.inverse().expect("permutation matrix"));
    Ok(permutation_isotope(sigma, field).is_automorphism(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idem::quasigroup_table;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    #[test]
    fn affine_counts() {
        assert_eq!(affine_autos(2).unwrap().len(), 6);
        assert_eq!(affine_autos(3).unwrap().len(), 42);
        assert!(affine_autos(3).unwrap().contains(&AffineMap::identity(7)));
    }

    #[test]
    fn affine_composition_law() {
        let maps = affine_autos(3).unwrap();
        for a in &maps {
            assert_eq!(a.compose(&a.inverse()), AffineMap::identity(7));
            for b in &maps {
                let c = a.compose(b);
                for i in 1..=7 {
                    assert_eq!(c.apply(i), a.apply(b.apply(i)));
                }
            }
            // fixes the all-ones label iff k = 0
            assert_eq!(a.apply(7) == 7, a.k == 0);
        }
    }

    #[test]
    fn quasigroup_bruteforce_n2() {
        let t = idempotents_formula(&Permutation::shift(2), f(7)).unwrap();
        let q = quasigroup_table(&t).unwrap();
        let brute = quasigroup_autos_bruteforce(&q, DEFAULT_QUASIGROUP_CAP).unwrap();
        let affine: BTreeSet<Vec<u64>> = affine_autos(2)
            .unwrap()
            .iter()
            .map(AffineMap::images)
            .collect();
        assert_eq!(brute, affine);
        assert!(brute.contains(&vec![1, 2, 3]));
        assert!(matches!(
            quasigroup_autos_bruteforce(&q, 5),
            Err(Error::CapExceeded { needed: 6, cap: 5 })
        ));
    }

    #[test]
    fn algebra_autos_small() {
        let t2 = idempotents_formula(&Permutation::shift(2), f(7)).unwrap();
        let a2 = algebra_autos(&t2).unwrap();
        assert_eq!(a2.accepted.len(), 6);
        let g2 =
            group_structure(2, &a2.accepted.iter().map(|l| l.affine).collect::<Vec<_>>()).unwrap();
        assert!(!g2.abelian && g2.relations_ok && g2.semidirect);

        let t3 = idempotents_formula(&Permutation::shift(3), f(43)).unwrap();
        let a3 = algebra_autos(&t3).unwrap();
        assert_eq!(a3.candidates, 42);
        assert_eq!(a3.accepted.len(), 21);
        let affs: Vec<AffineMap> = a3.accepted.iter().map(|l| l.affine).collect();
        assert!(affs.contains(&AffineMap::new(7, 2, 0).unwrap()));
        assert!(affs.contains(&AffineMap::new(7, 1, 1).unwrap()));
        let g3 = group_structure(3, &affs).unwrap();
        assert_eq!(g3.order, 21);
        assert!(!g3.abelian && g3.relations_ok && g3.semidirect);

        // the unrestricted search agrees with the affine lifts
        let searched = algebra_autos_search(&t3, 1_000_000).unwrap();
        assert_eq!(searched.len(), 21);
    }

    #[test]
    fn non_cycle_autos() {
        let t = idempotents_formula(&Permutation::identity(3), f(5)).unwrap();
        let autos = algebra_autos_search(&t, 1_000_000).unwrap();
        assert_eq!(autos.len(), 6);
        let s = matrix_group_summary(&autos);
        assert!(s.closed && !s.abelian);
        let t = idempotents_formula(&perm(&[2, 1, 3]), f(7)).unwrap();
        assert_eq!(algebra_autos_search(&t, 1_000_000).unwrap().len(), 6);
        assert_eq!(algebra_autos(&t).unwrap_err(), Error::NotSingleCycle);
    }

    #[test]
    fn not_closed_detected() {
        let maps = vec![AffineMap::new(7, 1, 1).unwrap()];
        assert_eq!(group_structure(3, &maps), Err(Error::NotClosed));
    }

    #[test]
    fn isomorphism_examples() {
        let field = f(43);
        let s = perm(&[2, 3, 1]);
        match isotope_isomorphism(&s, &s, field).unwrap() {
            IsotopeIsomorphism::Isomorphic { conjugator, map } => {
                assert!(conjugator.is_identity());
                assert!(map.is_identity());
            }
            other => panic!("{other:?}"),
        }
        assert!(isotope_isomorphism(&s, &perm(&[3, 1, 2]), field)
            .unwrap()
            .is_isomorphic());
        match isotope_isomorphism(&s, &Permutation::identity(3), field).unwrap() {
            IsotopeIsomorphism::NotIsomorphic {
                source_spectra,
                target_spectra,
            } => {
                assert_eq!(
                    source_spectra,
                    vec![("λ^3".to_string(), 1), ("λ^3 + 42".to_string(), 7)]
                );
                assert_eq!(target_spectra.len(), 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn commuting_isotopy_matches_commutation() {
        let field = f(43);
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                assert_eq!(
                    commuting_isotopy_check(&s, &t, field).unwrap(),
                    s.commutes_with(&t).unwrap(),
                    "{s} {t}"
                );
            }
        }
        assert!(!commuting_isotopy_check(&perm(&[2, 3, 1]), &perm(&[2, 1, 3]), field).unwrap());
    }
}
