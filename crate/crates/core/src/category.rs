//! Calibrated algebras and the mutually inverse constructions between them.
//!
//! An associative calibration `(A, ◇, e, h)` is a commutative associative
//! algebra with unit `e` and an automorphism `h`; `Φ` sends it to the medial
//! algebra `x ∗ y = h(x ◇ y)` with axis `e`. A medial calibration `(A, ∗, c)`
//! has an idempotent axis with invertible `L(c)`; `Ψ` sends it to
//! `x ◇ y = L(c)⁻¹(x ∗ y)` with unit `c` and automorphism `L(c)`.

use serde::Serialize;

use crate::algebra::{perm_map, product_algebra, Algebra, Provenance};
use crate::error::{Error, Result};
use crate::linalg::{LinearMap, Vector};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct CalibratedAssociative {
    pub algebra: Algebra,
    pub unit: Vector,
    pub auto: LinearMap,
}

#[derive(Clone, Debug)]
pub struct CalibratedMedial {
    pub algebra: Algebra,
    pub axis: Vector,
}

impl CalibratedAssociative {
    pub fn new(algebra: Algebra, unit: Vector, auto: LinearMap) -> Result<Self> {
        let ca = Self {
            algebra,
            unit,
            auto,
        };
        ca.validate()?;
        Ok(ca)
    }

    fn validate(&self) -> Result<()> {
        let ids = self.algebra.check_identities();
        if !(ids.commutative && ids.associative) {
            return Err(Error::InvariantViolation(
                "algebra is not commutative associative".into(),
            ));
        }
        if !self.algebra.left_mult(&self.unit).is_identity() {
            return Err(Error::InvariantViolation(
                "unit does not act as identity".into(),
            ));
        }
        if !self.algebra.is_automorphism(&self.auto) {
            return Err(Error::NotAutomorphism);
        }
        if self.auto.apply(&self.unit) != self.unit {
            return Err(Error::InvariantViolation(
                "automorphism moves the unit".into(),
            ));
        }
        Ok(())
    }
}

impl CalibratedMedial {
    pub fn new(algebra: Algebra, axis: Vector) -> Result<Self> {
        if !algebra.is_idempotent(&axis) {
            return Err(Error::NotIdempotent);
        }
        if algebra.left_mult(&axis).determinant().is_zero() {
            return Err(Error::AxisNotInvertible);
        }
        if !algebra.check_identities().medial {
            return Err(Error::InvariantViolation("algebra is not medial".into()));
        }
        Ok(Self { algebra, axis })
    }
}

/// `Φ(A, ◇, e, h) = (A, ∗, e)` with `x ∗ y = h(x ◇ y)`.
pub fn phi(ca: &CalibratedAssociative) -> Result<CalibratedMedial> {
    ca.validate()
        .map_err(|e| Error::InvariantViolation(format!("input calibration: {e}")))?;
    let algebra = ca
        .algebra
        .inner_isotope(&ca.auto)
        .map_err(|e| Error::InvariantViolation(e.to_string()))?;
    if algebra.left_mult(&ca.unit) != ca.auto {
        return Err(Error::InvariantViolation("L(e) differs from h".into()));
    }
    CalibratedMedial::new(algebra, ca.unit.clone())
        .map_err(|e| Error::InvariantViolation(format!("image calibration: {e}")))
}

/// `Ψ(A, ∗, c) = (A, ◇, c, L(c))` with `x ◇ y = L(c)⁻¹(x ∗ y)`.
pub fn psi(cm: &CalibratedMedial) -> Result<CalibratedAssociative> {
    let lc = cm.algebra.left_mult(&cm.axis);
    let inv = lc
        .inverse()
        .ok_or_else(|| Error::InvariantViolation("axis has non-invertible L(c)".into()))?;
    if !cm.algebra.is_idempotent(&cm.axis) {
        return Err(Error::InvariantViolation("axis is not idempotent".into()));
    }
    let n = cm.algebra.dim();
    let algebra =
        Algebra::from_basis_products(cm.algebra.field(), n, Provenance::Custom, |i, j| {
            inv.apply(&cm.algebra.basis_product(i, j))
        })?;
    CalibratedAssociative::new(algebra, cm.axis.clone(), lc)
        .map_err(|e| Error::InvariantViolation(format!("image calibration: {e}")))
}

/// `Ψ(Φ(CA)) = CA` on structure constants, unit and automorphism.
pub fn roundtrip_check(ca: &CalibratedAssociative) -> Result<bool> {
    let back = psi(&phi(ca)?)?;
    Ok(back.algebra.same_structure(&ca.algebra) && back.unit == ca.unit && back.auto == ca.auto)
}

/// `Φ(Ψ(CM)) = CM` on structure constants and axis.
pub fn inverse_roundtrip_check(cm: &CalibratedMedial) -> Result<bool> {
    let back = phi(&psi(cm)?)?;
    Ok(back.algebra.same_structure(&cm.algebra) && back.axis == cm.axis)
}

/// `f = L(c_1)⁻¹ L(c_2)`, verified to be an automorphism with `f(c_1) = c_2`.
pub fn calibration_independence(
    algebra: &Algebra,
    c1: &[crate::FieldElem],
    c2: &[crate::FieldElem],
) -> Result<LinearMap> {
    for c in [c1, c2] {
        if !algebra.is_idempotent(c) {
            return Err(Error::NotIdempotent);
        }
    }
    let l1_inv = algebra
        .left_mult(c1)
        .inverse()
        .ok_or(Error::AxisNotInvertible)?;
    let l2 = algebra.left_mult(c2);
    if l2.determinant().is_zero() {
        return Err(Error::AxisNotInvertible);
    }
    let f = l1_inv.compose(&l2);
    if f.apply(c1) != c2 {
        return Err(Error::InvariantViolation("f(c1) ≠ c2".into()));
    }
    if !algebra.is_automorphism(&f) {
        return Err(Error::InvariantViolation("f is not an automorphism".into()));
    }
    Ok(f)
}

/// Recovers `π` from a permutation matrix `ψ_π`.
fn permutation_of(m: &LinearMap) -> Option<Permutation> {
    let n = m.dim();
    let field = m.field();
    let mut images = Vec::with_capacity(n);
    for row in m.rows() {
        let ones: Vec<usize> = (0..n).filter(|&j| row[j] == field.one()).collect();
        let zeros = row.iter().filter(|x| x.is_zero()).count();
        if ones.len() != 1 || zeros != n - 1 {
            return None;
        }
        images.push(ones[0] + 1);
    }
    Permutation::new(images).ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyCheck {
    pub conjugate: bool,
    pub cycle_types: (Vec<usize>, Vec<usize>),
    /// Result of searching all permutation automorphisms (only for `n ≤ 6`).
    pub exhaustive: Option<bool>,
}

/// For the product algebra: `h_1` and `h_2` are conjugate in the automorphism
/// group iff their permutations share a cycle type. An explicit conjugating
/// automorphism is verified, and for `n ≤ 6` all of `S_n` is searched.
pub fn conjugacy_calibration_check(
    algebra: &Algebra,
    h1: &LinearMap,
    h2: &LinearMap,
) -> Result<ConjugacyCheck> {
    let n = algebra.dim();
    if !algebra.same_structure(&product_algebra(n, algebra.field())) {
        return Err(Error::InvariantViolation(
            "conjugacy calibration is implemented for the product algebra".into(),
        ));
    }
    if !algebra.is_automorphism(h1) || !algebra.is_automorphism(h2) {
        return Err(Error::NotAutomorphism);
    }
    let p1 = permutation_of(h1).ok_or(Error::NotAutomorphism)?;
    let p2 = permutation_of(h2).ok_or(Error::NotAutomorphism)?;
    let field = algebra.field();
    let conjugate = p1.cycle_type() == p2.cycle_type();
    if conjugate {
        let g = p1.conjugator(&p2)?;
        let f = perm_map(&g.inverse(), field);
        let finv = f.inverse().expect("permutation matrix");
        if f.compose(h1).compose(&finv) != *h2 {
            return Err(Error::InvariantViolation(
                "conjugator does not conjugate the automorphisms".into(),
            ));
        }
    }
    let exhaustive = (n <= 6).then(|| {
        Permutation::all(n).any(|g| {
            let f = perm_map(&g, field);
            let finv = f.inverse().expect("permutation matrix");
            f.compose(h1).compose(&finv) == *h2
        })
    });
    if exhaustive.is_some_and(|e| e != conjugate) {
        return Err(Error::InvariantViolation(
            "exhaustive conjugacy search disagrees with cycle types".into(),
        ));
    }
    Ok(ConjugacyCheck {
        conjugate,
        cycle_types: (p1.cycle_type(), p2.cycle_type()),
        exhaustive,
    })
}

/// `(K^n, •, (1, …, 1), ψ_σ)`.
pub fn product_calibration(
    sigma: &Permutation,
    field: crate::PrimeField,
) -> Result<CalibratedAssociative> {
    let n = sigma.degree();
    CalibratedAssociative::new(
        product_algebra(n, field),
        vec![field.one(); n],
        perm_map(sigma, field),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::permutation_isotope;
    use crate::field::PrimeField;
    use crate::idem::idempotents_formula;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn phi_examples() {
        let field = f(43);
        let id = product_calibration(&Permutation::identity(3), field).unwrap();
        let m = phi(&id).unwrap();
        assert!(m.algebra.same_structure(&id.algebra));
        assert_eq!(m.axis, id.unit);

        let tau = Permutation::shift(3);
        let ca = product_calibration(&tau, field).unwrap();
        let m = phi(&ca).unwrap();
        assert!(m.algebra.same_structure(&permutation_isotope(&tau, field)));
        assert_eq!(m.algebra.left_mult(&m.axis), ca.auto);
    }

    #[test]
    fn psi_examples() {
        let field = f(43);
        let tau = Permutation::shift(3);
        let cm =
            CalibratedMedial::new(permutation_isotope(&tau, field), vec![field.one(); 3]).unwrap();
        let ca = psi(&cm).unwrap();
        assert!(ca.algebra.same_structure(&product_algebra(3, field)));
        assert_eq!(ca.auto, perm_map(&tau, field));
        let ids = ca.algebra.check_identities();
        assert!(ids.associative && ids.unital);

        let bad = CalibratedMedial {
            algebra: permutation_isotope(&tau, field),
            axis: vec![field.zero(); 3],
        };
        assert!(matches!(psi(&bad), Err(Error::InvariantViolation(_))));
        assert!(matches!(
            CalibratedMedial::new(permutation_isotope(&tau, field), vec![field.zero(); 3]),
            Err(Error::AxisNotInvertible)
        ));
    }

    #[test]
    fn roundtrips_over_s4() {
        let field = f(43);
        for sigma in Permutation::all(4) {
            let ca = product_calibration(&sigma, field).unwrap();
            assert!(roundtrip_check(&ca).unwrap(), "{sigma}");
            assert!(inverse_roundtrip_check(&phi(&ca).unwrap()).unwrap());
        }
    }

    #[test]
    fn calibration_independence_on_single_cycle() {
        let field = f(43);
        let t = idempotents_formula(&Permutation::shift(3), field).unwrap();
        let c1 = &t.idems[t.position_of_label("1").unwrap()];
        let c2 = &t.idems[t.position_of_label("2").unwrap()];
        let fmap = calibration_independence(&t.algebra, c1, c2).unwrap();
        assert_eq!(&fmap.apply(c1), c2);
        let same = calibration_independence(&t.algebra, c1, c1).unwrap();
        assert_eq!(&same.apply(c1), c1);
        assert_eq!(
            calibration_independence(&t.algebra, &t.idems[0], c1).unwrap_err(),
            Error::AxisNotInvertible
        );
    }

    #[test]
    fn conjugacy_examples() {
        let field = f(43);
        let alg = product_algebra(3, field);
        let h = |images: &[usize]| perm_map(&Permutation::new(images.to_vec()).unwrap(), field);
        assert!(
            conjugacy_calibration_check(&alg, &h(&[2, 3, 1]), &h(&[2, 3, 1]))
                .unwrap()
                .conjugate
        );
        assert!(
            conjugacy_calibration_check(&alg, &h(&[2, 3, 1]), &h(&[3, 1, 2]))
                .unwrap()
                .conjugate
        );
        assert!(
            !conjugacy_calibration_check(&alg, &h(&[2, 3, 1]), &h(&[1, 2, 3]))
                .unwrap()
                .conjugate
        );
        let not_auto = LinearMap::scalar(3, field.elem(2));
        assert_eq!(
            conjugacy_calibration_check(&alg, &not_auto, &h(&[1, 2, 3])).unwrap_err(),
            Error::NotAutomorphism
        );
    }
}
