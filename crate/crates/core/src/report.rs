//! Deterministic reports and a registry of named, individually rerunnable
//! checks over one permutation isotope.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{decompose_by_cycles, perm_map, product_algebra};
use crate::autgroup::{
    affine_autos, algebra_autos, algebra_autos_search, group_structure, isotope_isomorphism,
    matrix_group_summary, quasigroup_autos_bruteforce, AffineMap, DEFAULT_QUASIGROUP_CAP,
};
use crate::category::{
    calibration_independence, conjugacy_calibration_check, inverse_roundtrip_check, phi,
    product_calibration, roundtrip_check,
};
use crate::error::{Error, Result};
use crate::field::{admissibility_set, admissible_prime, PrimeField};
use crate::idem::{
    genericity_from_set, idempotents_bruteforce, idempotents_chain_blocks, idempotents_formula,
    is_regular_idempotent, power_identity_check, quasigroup_table, IdempotentTable,
    QuasigroupTable,
};
use crate::intpoly::is_regular;
use crate::linalg::LinearMap;
use crate::perm::{partitions, Permutation};
use crate::spectral::{
    circulant_identity_check, composition_rule_check, fusion_table, operator_order, peirce,
    power_sum, span_rank, stratified_spectra, FusionTable,
};

pub const SCHEMA_VERSION: &str = "1";

/// Largest `n` accepted by [`verify_all`].
pub const VERIFY_BOUND: usize = 5;

/// Prime choice: the smallest admissible prime or an explicit one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeChoice {
    Auto,
    Explicit(u64),
}

pub fn select_prime(sigma: &Permutation, choice: PrimeChoice) -> Result<PrimeField> {
    let cycle_type = sigma.cycle_type();
    match choice {
        PrimeChoice::Auto => admissible_prime(&cycle_type),
        PrimeChoice::Explicit(p) => {
            let field = PrimeField::new(p)?;
            field.check_admissible(&cycle_type)?;
            Ok(field)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str, pass: bool, witness: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            witness: if pass { None } else { witness },
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Shared data for the checks on one isotope.
pub struct Context {
    pub sigma: Permutation,
    pub field: PrimeField,
    pub cap: u128,
    pub table: IdempotentTable,
}

impl Context {
    pub fn new(sigma: &Permutation, field: PrimeField, cap: u128) -> Result<Self> {
        Ok(Self {
            sigma: sigma.clone(),
            field,
            cap,
            table: idempotents_formula(sigma, field)?,
        })
    }

    fn n(&self) -> usize {
        self.sigma.degree()
    }

    fn single(&self) -> bool {
        self.sigma.is_single_cycle() && self.n() >= 2
    }
}

type CheckFn = fn(&Context) -> Result<Option<CheckOutcome>>;

/// Every named check, in report order. A check returns `None` when it does
/// not apply to the given permutation.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("idempotents.count", check_count),
    ("idempotents.oracles_agree", check_oracles),
    ("idempotents.regular", check_regular),
    ("idempotents.generic", check_generic),
    ("idempotents.power_identity", check_power_identity),
    ("decomposition.cycles", check_decomposition),
    ("identities.commutative_medial", check_medial),
    ("identities.associative_iff_identity", check_associative),
    ("quasigroup.law", check_quasigroup),
    ("spectra.stratified", check_strata),
    ("spectra.peirce_semisimple", check_peirce),
    ("spectra.composition_rule", check_composition),
    ("fusion.law", check_fusion),
    ("operator.power_sums", check_power_sums),
    ("operator.order", check_operator_order),
    ("span.rank", check_span),
    ("automorphisms.quasigroup", check_quasigroup_autos),
    ("automorphisms.algebra", check_algebra_autos),
    ("regularity", check_regularity),
    ("category.roundtrip", check_roundtrip),
    ("category.calibration_independence", check_calibration),
    (
        "category.conjugacy_calibration",
        check_conjugacy_calibration,
    ),
    ("isomorphism.classification", check_isomorphism),
    ("circulant.identity", check_circulant),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

fn check_count(cx: &Context) -> Result<Option<CheckOutcome>> {
    let want = 1usize << cx.n();
    let got = cx.table.len();
    Ok(Some(CheckOutcome::new(
        "idempotents.count",
        got == want,
        Some(format!("{got} idempotents, expected {want}")),
    )))
}

fn check_oracles(cx: &Context) -> Result<Option<CheckOutcome>> {
    let formula = cx.table.vector_set();
    let chain = idempotents_chain_blocks(&cx.sigma, cx.field);
    let mut pass = formula == chain;
    let mut witness = Some("formula and chain oracle differ".to_string());
    let note = match idempotents_bruteforce(&cx.table.algebra, cx.cap) {
        Ok(brute) => {
            if brute != formula {
                pass = false;
                witness = Some("formula and brute force differ".into());
            }
            "formula, chain oracle and brute force".to_string()
        }
        Err(Error::CapExceeded { needed, cap }) => {
            format!("brute force skipped: {needed} points exceed cap {cap}; formula and chain oracle only")
        }
        Err(e) => return Err(e),
    };
    Ok(Some(
        CheckOutcome::new("idempotents.oracles_agree", pass, witness).with_note(note),
    ))
}

fn check_regular(cx: &Context) -> Result<Option<CheckOutcome>> {
    for (label, c) in cx.table.labels.iter().zip(&cx.table.idems) {
        if !is_regular_idempotent(&cx.table.algebra, c)? {
            return Ok(Some(CheckOutcome::new(
                "idempotents.regular",
                false,
                Some(format!("c_{label} is not regular")),
            )));
        }
    }
    Ok(Some(CheckOutcome::new("idempotents.regular", true, None)))
}

fn check_generic(cx: &Context) -> Result<Option<CheckOutcome>> {
    // complete by the oracle agreement check
    let set = cx.table.vector_set();
    let pass = genericity_from_set(&cx.table.algebra, &set)?;
    Ok(Some(CheckOutcome::new(
        "idempotents.generic",
        pass,
        Some("regular idempotent count differs from 2^n".into()),
    )))
}

fn check_power_identity(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !cx.single() {
        return Ok(None);
    }
    Ok(Some(CheckOutcome::new(
        "idempotents.power_identity",
        power_identity_check(&cx.table),
        Some("a (2^n-1)-fold power differs from (1, …, 1)".into()),
    )))
}

fn check_decomposition(cx: &Context) -> Result<Option<CheckOutcome>> {
    let outcome = match decompose_by_cycles(&cx.sigma, cx.field) {
        Ok(d) => CheckOutcome::new("decomposition.cycles", true, None).with_note(format!(
            "{} blocks, relabeling {}",
            d.blocks.len(),
            d.relabel
        )),
        Err(Error::InvariantViolation(w)) => {
            CheckOutcome::new("decomposition.cycles", false, Some(w))
        }
        Err(e) => return Err(e),
    };
    Ok(Some(outcome))
}

fn check_medial(cx: &Context) -> Result<Option<CheckOutcome>> {
    let ids = cx.table.algebra.check_identities();
    let witness = ids
        .commutative_witness
        .map(|w| format!("commutativity fails at {w:?}"))
        .or_else(|| {
            ids.medial_witness
                .map(|w| format!("mediality fails at {w:?}"))
        });
    Ok(Some(CheckOutcome::new(
        "identities.commutative_medial",
        ids.commutative && ids.medial,
        witness,
    )))
}

fn check_associative(cx: &Context) -> Result<Option<CheckOutcome>> {
    let ids = cx.table.algebra.check_identities();
    let expected = cx.sigma.is_identity();
    let outcome = CheckOutcome::new(
        "identities.associative_iff_identity",
        ids.associative == expected && ids.unital == expected,
        Some(format!(
            "associative = {}, unital = {}, identity permutation = {expected}",
            ids.associative, ids.unital
        )),
    );
    Ok(Some(match ids.associative_witness {
        Some(w) => outcome.with_note(format!("associativity fails at basis triple {w:?}")),
        None => outcome,
    }))
}

fn check_quasigroup(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !cx.single() {
        return Ok(None);
    }
    Ok(Some(match quasigroup_table(&cx.table) {
        Ok(q) => CheckOutcome::new(
            "quasigroup.law",
            q.latin && q.idempotent && q.commutative && q.medial,
            Some(q.witnesses.join("; ")),
        ),
        Err(Error::LawViolation(w)) => CheckOutcome::new("quasigroup.law", false, Some(w)),
        Err(e) => return Err(e),
    }))
}

fn check_strata(cx: &Context) -> Result<Option<CheckOutcome>> {
    let strata = stratified_spectra(&cx.table)?;
    let bad = strata.iter().find(|s| !s.consistent);
    Ok(Some(CheckOutcome::new(
        "spectra.stratified",
        bad.is_none(),
        bad.map(|s| {
            format!(
                "stratum {} has char poly {}, expected {}",
                s.alpha, s.char_poly, s.expected
            )
        }),
    )))
}

fn check_peirce(cx: &Context) -> Result<Option<CheckOutcome>> {
    for (label, c) in cx.table.labels.iter().zip(&cx.table.idems) {
        match peirce(&cx.table.algebra, c) {
            Ok(pd) if pd.dims_match_multiplicities() => {}
            Ok(_) => {
                return Ok(Some(CheckOutcome::new(
                    "spectra.peirce_semisimple",
                    false,
                    Some(format!(
                        "c_{label}: eigenspace dimension below multiplicity"
                    )),
                )))
            }
            Err(Error::NonSemisimple { found, n }) => {
                return Ok(Some(CheckOutcome::new(
                    "spectra.peirce_semisimple",
                    false,
                    Some(format!("c_{label}: eigenspaces span {found} < {n}")),
                )))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Some(CheckOutcome::new(
        "spectra.peirce_semisimple",
        true,
        None,
    )))
}

fn check_composition(cx: &Context) -> Result<Option<CheckOutcome>> {
    let bad = composition_rule_check(&cx.table);
    Ok(Some(CheckOutcome::new(
        "spectra.composition_rule",
        bad.is_none(),
        bad.map(|(a, b)| format!("L(c_{b})L(c_{a}) ≠ L(c_{a} ∗ c_{b})L(c_{b})")),
    )))
}

/// Which fusion law a permutation's isotope is expected to satisfy.
fn fusion_law_name(sigma: &Permutation) -> Option<&'static str> {
    if sigma.is_identity() {
        Some("peirce")
    } else if sigma.is_single_cycle() {
        Some("cyclic")
    } else {
        None
    }
}

fn check_fusion(cx: &Context) -> Result<Option<CheckOutcome>> {
    let Some(law) = fusion_law_name(&cx.sigma) else {
        return Ok(None);
    };
    let axes: Vec<usize> = if law == "cyclic" {
        cx.table.nonzero().collect()
    } else {
        (0..cx.table.len()).collect()
    };
    for i in axes {
        let pd = peirce(&cx.table.algebra, &cx.table.idems[i])?;
        let ft = fusion_table(&cx.table.algebra, &pd)?;
        let verdict = if law == "cyclic" {
            ft.cyclic_law()
        } else {
            ft.peirce_law()
        };
        if let Err(w) = verdict {
            return Ok(Some(CheckOutcome::new(
                "fusion.law",
                false,
                Some(format!("axis c_{}: {w}", cx.table.labels[i])),
            )));
        }
    }
    Ok(Some(
        CheckOutcome::new("fusion.law", true, None).with_note(format!("{law} law")),
    ))
}

fn check_power_sums(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !cx.single() {
        return Ok(None);
    }
    let n = cx.n();
    for s in 1..n as u64 {
        if !power_sum(&cx.table, s).is_zero() {
            return Ok(Some(CheckOutcome::new(
                "operator.power_sums",
                false,
                Some(format!("Σ L(c_k)^{s} ≠ 0")),
            )));
        }
    }
    let big_n = cx.field.elem((1u64 << n) - 1);
    let top = power_sum(&cx.table, n as u64) == LinearMap::scalar(n, big_n);
    Ok(Some(CheckOutcome::new(
        "operator.power_sums",
        top,
        Some(format!("Σ L(c_k)^{n} ≠ (2^n - 1) I")),
    )))
}

fn check_operator_order(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !cx.single() {
        return Ok(None);
    }
    let n = cx.n() as u64;
    for i in cx.table.nonzero() {
        let order = operator_order(&cx.table.algebra, &cx.table.idems[i])?;
        if order != n {
            return Ok(Some(CheckOutcome::new(
                "operator.order",
                false,
                Some(format!("L(c_{}) has order {order}", cx.table.labels[i])),
            )));
        }
    }
    Ok(Some(CheckOutcome::new("operator.order", true, None)))
}

fn check_span(cx: &Context) -> Result<Option<CheckOutcome>> {
    let rank = span_rank(&cx.table);
    Ok(Some(CheckOutcome::new(
        "span.rank",
        rank == cx.n(),
        Some(format!("idempotents span rank {rank}")),
    )))
}

fn check_quasigroup_autos(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !cx.single() {
        return Ok(None);
    }
    let q = quasigroup_table(&cx.table)?;
    let affine: BTreeSet<Vec<u64>> = affine_autos(cx.n())?
        .iter()
        .map(AffineMap::images)
        .collect();
    Ok(Some(
        match quasigroup_autos_bruteforce(&q, DEFAULT_QUASIGROUP_CAP) {
            Ok(brute) => CheckOutcome::new(
                "automorphisms.quasigroup",
                brute == affine,
                Some(format!(
                    "{} bijections preserve ⊛, {} affine maps",
                    brute.len(),
                    affine.len()
                )),
            )
            .with_note("exhaustive over all label bijections"),
            Err(Error::CapExceeded { needed, cap }) => {
                CheckOutcome::new("automorphisms.quasigroup", true, None).with_note(format!(
                    "bijection scan skipped: {needed} exceeds cap {cap}; {} affine maps verified",
                    affine.len()
                ))
            }
            Err(e) => return Err(e),
        },
    ))
}

fn check_algebra_autos(cx: &Context) -> Result<Option<CheckOutcome>> {
    if cx.n() < 2 {
        return Ok(None);
    }
    if cx.single() {
        let autos = algebra_autos(&cx.table)?;
        let maps: Vec<AffineMap> = autos.accepted.iter().map(|a| a.affine).collect();
        let gs = group_structure(cx.n(), &maps)?;
        let want = cx.n() * ((1usize << cx.n()) - 1);
        return Ok(Some(CheckOutcome::new(
            "automorphisms.algebra",
            gs.order == want && gs.semidirect,
            Some(format!(
                "order {} (expected {want}), relations {}",
                gs.order, gs.relations_ok
            )),
        )));
    }
    let autos = match algebra_autos_search(&cx.table, cx.cap) {
        Ok(a) => a,
        Err(Error::CapExceeded { needed, cap }) => {
            return Ok(Some(
                CheckOutcome::new("automorphisms.algebra", true, None).with_note(format!(
                    "search skipped: {needed} assignments exceed cap {cap}"
                )),
            ))
        }
        Err(e) => return Err(e),
    };
    let summary = matrix_group_summary(&autos);
    Ok(Some(
        CheckOutcome::new(
            "automorphisms.algebra",
            summary.closed,
            Some("automorphism set is not closed".into()),
        )
        .with_note(format!("order {}", summary.order)),
    ))
}

fn check_regularity(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !cx.single() {
        return Ok(None);
    }
    let cert = is_regular(cx.n() as u32)?;
    Ok(Some(CheckOutcome::new(
        "regularity",
        cert.status && cert.fixed_points_ok,
        Some(format!("witnesses {:?}", cert.witnesses())),
    )))
}

fn check_roundtrip(cx: &Context) -> Result<Option<CheckOutcome>> {
    let ca = product_calibration(&cx.sigma, cx.field)?;
    let forward = roundtrip_check(&ca)?;
    let backward = inverse_roundtrip_check(&phi(&ca)?)?;
    let ids = crate::category::psi(&phi(&ca)?)?.algebra.check_identities();
    Ok(Some(CheckOutcome::new(
        "category.roundtrip",
        forward && backward && ids.associative && ids.unital,
        Some(format!(
            "Ψ∘Φ = id: {forward}, Φ∘Ψ = id: {backward}, associative: {}, unital: {}",
            ids.associative, ids.unital
        )),
    )))
}

fn check_calibration(cx: &Context) -> Result<Option<CheckOutcome>> {
    let alg = &cx.table.algebra;
    let axes: Vec<usize> = (0..cx.table.len())
        .filter(|&i| !alg.left_mult(&cx.table.idems[i]).determinant().is_zero())
        .collect();
    for &i in &axes {
        for &j in &axes {
            match calibration_independence(alg, &cx.table.idems[i], &cx.table.idems[j]) {
                Ok(_) => {}
                Err(Error::InvariantViolation(w)) => {
                    return Ok(Some(CheckOutcome::new(
                        "category.calibration_independence",
                        false,
                        Some(format!(
                            "axes c_{}, c_{}: {w}",
                            cx.table.labels[i], cx.table.labels[j]
                        )),
                    )))
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Some(
        CheckOutcome::new("category.calibration_independence", true, None)
            .with_note(format!("{} invertible axes", axes.len())),
    ))
}

fn check_conjugacy_calibration(cx: &Context) -> Result<Option<CheckOutcome>> {
    let n = cx.n();
    let alg = product_algebra(n, cx.field);
    let h = perm_map(&cx.sigma, cx.field);
    let shift = Permutation::shift(n);
    let conj = shift.compose(&cx.sigma)?.compose(&shift.inverse())?;
    let same = conjugacy_calibration_check(&alg, &h, &perm_map(&conj, cx.field))?;
    let other = conjugacy_calibration_check(&alg, &h, &LinearMap::identity(n, cx.field))?;
    let pass = same.conjugate && other.conjugate == cx.sigma.is_identity();
    Ok(Some(CheckOutcome::new(
        "category.conjugacy_calibration",
        pass,
        Some(format!(
            "conjugate to its shift-conjugate: {}, to the identity: {}",
            same.conjugate, other.conjugate
        )),
    )))
}

fn check_isomorphism(cx: &Context) -> Result<Option<CheckOutcome>> {
    let n = cx.n();
    let shift = Permutation::shift(n);
    let conj = shift.compose(&cx.sigma)?.compose(&shift.inverse())?;
    let iso = isotope_isomorphism(&cx.sigma, &conj, cx.field)?.is_isomorphic();
    let vs_identity =
        isotope_isomorphism(&cx.sigma, &Permutation::identity(n), cx.field)?.is_isomorphic();
    Ok(Some(CheckOutcome::new(
        "isomorphism.classification",
        iso && vs_identity == cx.sigma.is_identity(),
        Some(format!(
            "isomorphic to conjugate: {iso}, to identity isotope: {vs_identity}"
        )),
    )))
}

fn check_circulant(cx: &Context) -> Result<Option<CheckOutcome>> {
    if !(cx.single() && cx.n() == 3) {
        return Ok(None);
    }
    let r = circulant_identity_check(cx.field, 100, 0x5eed)?;
    Ok(Some(CheckOutcome::new(
        "circulant.identity",
        r.cube_identity && r.multiplicative,
        r.witness.map(|(x, y)| format!("x = {x:?}, y = {y:?}")),
    )))
}

/// Runs every applicable check.
pub fn run_checks(cx: &Context) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (_, f) in CHECKS {
        if let Some(o) = f(cx)? {
            out.push(o);
        }
    }
    Ok(out)
}

/// Runs a single named check; `None` if it does not apply.
pub fn run_named_check(name: &str, cx: &Context) -> Result<Option<CheckOutcome>> {
    let (_, f) = CHECKS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("unknown check {name:?}")))?;
    f(cx)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentEntry {
    pub label: String,
    pub alpha: String,
    pub vector: Vec<u64>,
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumEntry {
    pub alpha: String,
    pub members: Vec<String>,
    pub char_poly: String,
    /// Coefficients low to high.
    pub coefficients: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionEntrySummary {
    pub axis: String,
    pub table: FusionTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionSummary {
    /// `None` when no law is asserted for this permutation.
    pub verified: Option<bool>,
    pub law: Option<String>,
    /// One table per stratum representative.
    pub tables: Vec<FusionEntrySummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismSummary {
    pub quasigroup_order: Option<usize>,
    pub algebra_order: Option<usize>,
    pub abelian: Option<bool>,
    pub relations_ok: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularitySummary {
    pub n: u32,
    pub status: bool,
    pub witnesses: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub n: usize,
    pub sigma: Vec<usize>,
    pub cycle_notation: String,
    pub cycle_type: Vec<usize>,
    pub prime: u64,
    /// Root of unity used for each order in the admissibility set.
    pub roots: BTreeMap<u64, u64>,
    pub idempotents: Vec<IdempotentEntry>,
    pub product_table: Vec<Vec<String>>,
    pub quasigroup_table: Option<QuasigroupTable>,
    pub strata: Vec<StratumEntry>,
    pub fusion: FusionSummary,
    pub automorphisms: AutomorphismSummary,
    pub regularity: Option<RegularitySummary>,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        render_markdown(self)
    }
}

fn bits(alpha: &[bool]) -> String {
    alpha.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Builds the full report for `σ`.
pub fn run_report(sigma: &Permutation, prime: PrimeChoice, cap: u128) -> Result<Report> {
    let field = select_prime(sigma, prime)?;
    let cx = Context::new(sigma, field, cap)?;
    let table = &cx.table;
    let alg = &table.algebra;

    let mut roots = BTreeMap::new();
    for d in admissibility_set(&sigma.cycle_type())? {
        roots.insert(d, field.primitive_root_of_order(d)?.residue());
    }

    let idempotents = table
        .labels
        .iter()
        .zip(&table.idems)
        .map(|(l, c)| {
            Ok(IdempotentEntry {
                label: l.name.clone(),
                alpha: bits(&l.alpha),
                vector: c.iter().map(|x| x.residue()).collect(),
                regular: is_regular_idempotent(alg, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let strata = stratified_spectra(table)?
        .into_iter()
        .map(|s| StratumEntry {
            alpha: s.alpha,
            members: s.members,
            coefficients: s.char_poly.coeffs().iter().map(|c| c.residue()).collect(),
            char_poly: s.char_poly.to_string(),
        })
        .collect();

    let single = cx.single();
    let quasigroup = if single {
        Some(quasigroup_table(table)?)
    } else {
        None
    };

    let law = fusion_law_name(sigma).map(str::to_string);
    let mut seen = BTreeSet::new();
    let mut tables = Vec::new();
    for (l, c) in table.labels.iter().zip(&table.idems) {
        if seen.insert(l.alpha.clone()) {
            let pd = peirce(alg, c)?;
            tables.push(FusionEntrySummary {
                axis: l.name.clone(),
                table: fusion_table(alg, &pd)?,
            });
        }
    }

    let checks = run_checks(&cx)?;
    let passed = |name: &str| checks.iter().find(|c| c.name == name).map(|c| c.pass);
    let fusion = FusionSummary {
        verified: passed("fusion.law"),
        law,
        tables,
    };

    let automorphisms = if sigma.degree() < 2 {
        AutomorphismSummary {
            quasigroup_order: None,
            algebra_order: None,
            abelian: None,
            relations_ok: None,
        }
    } else if single {
        let autos = algebra_autos(table)?;
        let maps: Vec<AffineMap> = autos.accepted.iter().map(|a| a.affine).collect();
        let gs = group_structure(sigma.degree(), &maps)?;
        AutomorphismSummary {
            quasigroup_order: Some(affine_autos(sigma.degree())?.len()),
            algebra_order: Some(gs.order),
            abelian: Some(gs.abelian),
            relations_ok: Some(gs.relations_ok),
        }
    } else {
        match algebra_autos_search(table, cap) {
            Ok(autos) => {
                let s = matrix_group_summary(&autos);
                AutomorphismSummary {
                    quasigroup_order: None,
                    algebra_order: Some(s.order),
                    abelian: Some(s.abelian),
                    relations_ok: None,
                }
            }
            Err(Error::CapExceeded { .. }) => AutomorphismSummary {
                quasigroup_order: None,
                algebra_order: None,
                abelian: None,
                relations_ok: None,
            },
            Err(e) => return Err(e),
        }
    };

    let regularity = if single {
        let cert = is_regular(sigma.degree() as u32)?;
        Some(RegularitySummary {
            n: cert.n,
            status: cert.status,
            witnesses: cert.witnesses(),
        })
    } else {
        None
    };

    Ok(Report {
        schema_version: SCHEMA_VERSION.to_string(),
        n: sigma.degree(),
        sigma: sigma.images().to_vec(),
        cycle_notation: sigma.cycle_notation(),
        cycle_type: sigma.cycle_type(),
        prime: field.modulus(),
        roots,
        idempotents,
        product_table: table.named_product_table(),
        quasigroup_table: quasigroup,
        strata,
        fusion,
        automorphisms,
        regularity,
        checks,
    })
}

fn md_table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out.push('\n');
}

fn render_markdown(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Isotope report for σ = {}\n", r.cycle_notation);
    let _ = writeln!(
        out,
        "- schema version: {}\n- n = {}, cycle type {:?}\n- field: F_{}\n",
        r.schema_version, r.n, r.cycle_type, r.prime
    );

    out.push_str("## Idempotents\n\n");
    let rows: Vec<Vec<String>> = r
        .idempotents
        .iter()
        .map(|e| {
            vec![
                e.label.clone(),
                e.alpha.clone(),
                format!("{:?}", e.vector),
                e.regular.to_string(),
            ]
        })
        .collect();
    md_table(
        &mut out,
        &[
            "label".into(),
            "α".into(),
            "vector".into(),
            "regular".into(),
        ],
        &rows,
    );

    out.push_str("## Idempotent product table\n\n");
    let labels: Vec<String> = r.idempotents.iter().map(|e| e.label.clone()).collect();
    let mut header = vec!["∗".to_string()];
    header.extend(labels.iter().cloned());
    let rows: Vec<Vec<String>> = labels
        .iter()
        .zip(&r.product_table)
        .map(|(l, row)| {
            std::iter::once(l.clone())
                .chain(row.iter().cloned())
                .collect()
        })
        .collect();
    md_table(&mut out, &header, &rows);

    if let Some(q) = &r.quasigroup_table {
        out.push_str("## Quasigroup of nonzero idempotents\n\n");
        let mut header = vec!["⊛".to_string()];
        header.extend(q.labels.iter().map(u64::to_string));
        let rows: Vec<Vec<String>> = q
            .labels
            .iter()
            .zip(&q.table)
            .map(|(l, row)| {
                std::iter::once(l.to_string())
                    .chain(row.iter().map(u64::to_string))
                    .collect()
            })
            .collect();
        md_table(&mut out, &header, &rows);
        let _ = writeln!(
            out,
            "Latin: {}, idempotent: {}, commutative: {}, medial: {}\n",
            q.latin, q.idempotent, q.commutative, q.medial
        );
    }

    out.push_str("## Spectra by stratum\n\n");
    let rows: Vec<Vec<String>> = r
        .strata
        .iter()
        .map(|s| vec![s.alpha.clone(), s.members.join(", "), s.char_poly.clone()])
        .collect();
    md_table(
        &mut out,
        &["α".into(), "members".into(), "char poly".into()],
        &rows,
    );

    out.push_str("## Fusion tables\n\n");
    if let Some(law) = &r.fusion.law {
        let _ = writeln!(
            out,
            "Expected law: {law}; verified: {:?}\n",
            r.fusion.verified
        );
    }
    for t in &r.fusion.tables {
        let _ = writeln!(out, "Axis c_{}:\n", t.axis);
        let ev: Vec<String> = t
            .table
            .eigenvalues
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut header = vec!["".to_string()];
        header.extend(ev.iter().map(|e| format!("A_{e}")));
        let rows: Vec<Vec<String>> = t
            .table
            .eigenvalues
            .iter()
            .map(|&l| {
                let mut row = vec![format!("A_{l}")];
                for &m in &t.table.eigenvalues {
                    let e = t.table.entry(l, m).expect("all pairs present");
                    row.push(match (e.equals, e.contained_in.as_slice()) {
                        (Some(nu), _) => format!("A_{nu}"),
                        (None, []) => "0".into(),
                        (None, set) => {
                            let s: Vec<String> = set.iter().map(|x| format!("A_{x}")).collect();
                            format!("⊆ {}", s.join(" + "))
                        }
                    });
                }
                row
            })
            .collect();
        md_table(&mut out, &header, &rows);
    }

    out.push_str("## Automorphisms\n\n");
    let a = &r.automorphisms;
    let _ = writeln!(
        out,
        "- quasigroup order: {:?}\n- algebra order: {:?}\n- abelian: {:?}\n- relations: {:?}\n",
        a.quasigroup_order, a.algebra_order, a.abelian, a.relations_ok
    );
    if let Some(reg) = &r.regularity {
        let _ = writeln!(
            out,
            "## Regularity\n\nn = {} regular: {} (witnesses {:?})\n",
            reg.n, reg.status, reg.witnesses
        );
    }

    out.push_str("## Checks\n\n");
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.pass { "pass" } else { "FAIL" }.into(),
                c.witness
                    .clone()
                    .or_else(|| c.note.clone())
                    .unwrap_or_default(),
            ]
        })
        .collect();
    md_table(
        &mut out,
        &["check".into(), "result".into(), "detail".into()],
        &rows,
    );
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyEntry {
    pub sigma: Vec<usize>,
    pub cycle_type: Vec<usize>,
    pub prime: u64,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub schema_version: String,
    pub n_max: usize,
    pub pass: bool,
    pub entries: Vec<VerifyEntry>,
}

/// Runs every check for one representative of each cycle type with
/// `1 ≤ n ≤ n_max`.
pub fn verify_all(n_max: usize, cap: u128) -> Result<VerifySummary> {
    if n_max == 0 || n_max > VERIFY_BOUND {
        return Err(Error::BoundExceeded(format!(
            "n_max = {n_max} outside 1..={VERIFY_BOUND}"
        )));
    }
    let mut entries = Vec::new();
    for n in 1..=n_max {
        for parts in partitions(n) {
            let sigma = Permutation::from_cycle_type(&parts);
            let field = admissible_prime(&parts)?;
            let cx = Context::new(&sigma, field, cap)?;
            entries.push(VerifyEntry {
                sigma: sigma.images().to_vec(),
                cycle_type: parts,
                prime: field.modulus(),
                checks: run_checks(&cx)?,
            });
        }
    }
    let pass = entries.iter().all(|e| e.checks.iter().all(|c| c.pass));
    Ok(VerifySummary {
        schema_version: SCHEMA_VERSION.to_string(),
        n_max,
        pass,
        entries,
    })
}
