use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isotopes::algebra::{permutation_isotope, Algebra};
use isotopes::autgroup::{
    affine_autos, algebra_autos, algebra_autos_search, group_structure, matrix_group_summary,
    quasigroup_autos_bruteforce, AffineMap, DEFAULT_QUASIGROUP_CAP,
};
use isotopes::category::{
    calibration_independence, inverse_roundtrip_check, phi, product_calibration, psi,
    roundtrip_check,
};
use isotopes::field::{admissibility_lcm, admissibility_set};
use isotopes::idem::{
    idempotents_bruteforce, idempotents_chain_blocks, idempotents_formula, is_regular_idempotent,
    quasigroup_table, IdempotentTable, DEFAULT_BRUTE_FORCE_CAP,
};
use isotopes::intpoly::{is_regular_with, RegularityOptions};
use isotopes::report::{
    check_names, run_named_check, run_report, select_prime, verify_all, Context, PrimeChoice,
};
use isotopes::spectral::{fusion_table, peirce};
use isotopes::{Error, Permutation, PrimeField, Vector};

#[derive(Parser)]
#[command(
    name = "isotopes",
    version,
    about = "Exact computations with permutation isotopes of K^n"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Permutation as a whitespace-separated image list, e.g. "2 3 1".
    #[arg(long, global = true, conflicts_with = "perm_cycles")]
    perm: Option<String>,
    /// Permutation in cycle notation, e.g. "(1 2 3)"; omitted points are fixed.
    #[arg(long, global = true)]
    perm_cycles: Option<String>,
    /// Degree for --perm-cycles when trailing fixed points are omitted.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// "auto" for the smallest admissible prime, or an explicit prime.
    #[arg(long, global = true, default_value = "auto")]
    prime: String,
    /// Cap on brute-force search sizes.
    #[arg(long, global = true)]
    cap: Option<u128>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Sc,
    Identities,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Formula,
    Chain,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest admissible prime with its admissibility set and roots of unity.
    AdmissiblePrime,
    /// Structure constants or identity checks of the isotope.
    Algebra {
        #[arg(long, value_enum, default_value = "identities")]
        show: Show,
    },
    /// All idempotents with labels.
    Idempotents {
        #[arg(long, value_enum, default_value = "formula")]
        oracle: Oracle,
    },
    /// Characteristic polynomials and Peirce eigenspaces of every idempotent.
    Spectra,
    /// Fusion table of every nonzero idempotent.
    Fusion,
    /// Product table of the nonzero idempotents of a single cycle.
    Quasigroup,
    /// Automorphisms of the idempotent quasigroup and of the algebra.
    Automorphisms {
        /// Also scan all bijections of the quasigroup labels.
        #[arg(long)]
        quasigroup_bruteforce: bool,
    },
    /// Regularity certificate for an integer n.
    Regular {
        #[arg(long)]
        n: u32,
        /// Attach cyclotomic resultants to each tested multiplier.
        #[arg(long)]
        resultants: bool,
    },
    /// Runs the calibrated functors and their roundtrips.
    CategoryCheck,
    /// Full deterministic report.
    Report,
    /// Runs the check suite on one representative per cycle type.
    Verify {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Run only this named check against --perm.
        #[arg(long)]
        check: Option<String>,
        /// List the named checks.
        #[arg(long)]
        list: bool,
    },
}

/// Rendered output and whether every asserted property held.
struct Output {
    body: String,
    pass: bool,
}

impl Global {
    fn sigma(&self) -> anyhow::Result<Permutation> {
        match (&self.perm, &self.perm_cycles) {
            (Some(s), _) => Ok(Permutation::parse_images(s)?),
            (None, Some(s)) => Ok(Permutation::parse_cycles(s, self.degree)?),
            (None, None) => Err(Error::InvalidPermutation(
                "one of --perm or --perm-cycles is required".into(),
            )
            .into()),
        }
    }

    fn prime_choice(&self) -> anyhow::Result<PrimeChoice> {
        if self.prime == "auto" {
            return Ok(PrimeChoice::Auto);
        }
        let p = self.prime.parse::<u64>().map_err(|_| {
            Error::Parse(format!(
                "--prime expects \"auto\" or an integer, got {:?}",
                self.prime
            ))
        })?;
        Ok(PrimeChoice::Explicit(p))
    }

    fn cap(&self) -> u128 {
        self.cap.unwrap_or(DEFAULT_BRUTE_FORCE_CAP)
    }

    fn setup(&self) -> anyhow::Result<(Permutation, PrimeField)> {
        let sigma = self.sigma()?;
        let field = select_prime(&sigma, self.prime_choice()?)?;
        Ok((sigma, field))
    }

    fn render(&self, value: &Value, pass: bool) -> Output {
        let text = serde_json::to_string_pretty(value).expect("values serialize");
        let body = match self.format {
            Format::Json => text,
            Format::Md => format!("```json\n{text}\n```"),
        };
        Output { body, pass }
    }
}

fn residues(v: &Vector) -> Vec<u64> {
    v.iter().map(|x| x.residue()).collect()
}

fn table_json(table: &IdempotentTable) -> anyhow::Result<Value> {
    let mut rows = Vec::new();
    for (l, c) in table.labels.iter().zip(&table.idems) {
        rows.push(json!({
            "label": l.name,
            "alpha": l.alpha.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
            "vector": residues(c),
            "regular": is_regular_idempotent(&table.algebra, c)?,
        }));
    }
    Ok(Value::Array(rows))
}

fn admissible_prime_cmd(g: &Global) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let cycle_type = sigma.cycle_type();
    let mut cycles = Vec::new();
    for c in sigma.cycles() {
        let s = c.len() as u64;
        cycles.push(json!({
            "cycle": c,
            "epsilon": field.primitive_root_of_order(s)?.residue(),
            "zeta": field.primitive_root_of_order((1u64 << s) - 1)?.residue(),
        }));
    }
    let value = json!({
        "prime": field.modulus(),
        "cycle_type": cycle_type,
        "admissibility_set": admissibility_set(&cycle_type)?,
        "lcm": admissibility_lcm(&cycle_type)?,
        "roots": cycles,
    });
    Ok(g.render(&value, true))
}

fn algebra_cmd(g: &Global, show: Show) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let alg: Algebra = permutation_isotope(&sigma, field);
    let value = match show {
        Show::Sc => json!({
            "prime": field.modulus(),
            "sigma": sigma.images(),
            "structure_constants": alg.structure_constants(),
        }),
        Show::Identities => json!({
            "prime": field.modulus(),
            "sigma": sigma.images(),
            "identities": alg.check_identities(),
        }),
    };
    Ok(g.render(&value, true))
}

fn idempotents_cmd(g: &Global, oracle: Oracle) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let table = idempotents_formula(&sigma, field)?;
    let (name, agrees) = match oracle {
        Oracle::Formula => ("formula", true),
        Oracle::Chain => (
            "chain",
            idempotents_chain_blocks(&sigma, field) == table.vector_set(),
        ),
        Oracle::Brute => (
            "brute",
            idempotents_bruteforce(&table.algebra, g.cap())? == table.vector_set(),
        ),
    };
    let value = json!({
        "prime": field.modulus(),
        "sigma": sigma.images(),
        "oracle": name,
        "agrees_with_formula": agrees,
        "count": table.len(),
        "idempotents": table_json(&table)?,
        "product_table": table.named_product_table(),
    });
    Ok(g.render(&value, agrees))
}

fn spectra_cmd(g: &Global, fusion_only: bool) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let table = idempotents_formula(&sigma, field)?;
    let mut entries = Vec::new();
    let mut pass = true;
    for (l, c) in table.labels.iter().zip(&table.idems) {
        if fusion_only && l.is_zero() {
            continue;
        }
        let pd = peirce(&table.algebra, c)?;
        let ft = fusion_table(&table.algebra, &pd)?;
        let law = if sigma.is_identity() {
            Some(ft.peirce_law())
        } else if sigma.is_single_cycle() {
            Some(ft.cyclic_law())
        } else {
            None
        };
        if let Some(Err(_)) = &law {
            pass = false;
        }
        let mut entry = json!({
            "idempotent_label": l.name,
            "char_poly": pd.char_poly.to_string(),
            "char_poly_coefficients": pd.char_poly.coeffs(),
            "eigenvalues": pd.eigenvalues(),
            "dims": pd.eigenspaces.iter().map(|e| e.basis.len()).collect::<Vec<_>>(),
        });
        if fusion_only {
            entry["fusion_table"] = serde_json::to_value(&ft)?;
            entry["law_verified"] = match law {
                Some(Ok(())) => json!(true),
                Some(Err(w)) => json!({ "failed": w }),
                None => Value::Null,
            };
        }
        entries.push(entry);
    }
    let value = json!({
        "prime": field.modulus(),
        "sigma": sigma.images(),
        "entries": entries,
    });
    Ok(g.render(&value, pass))
}

fn quasigroup_md(q: &isotopes::idem::QuasigroupTable) -> String {
    let mut out = String::from("| ⊛ |");
    for l in &q.labels {
        out.push_str(&format!(" {l} |"));
    }
    out.push('\n');
    out.push_str(&"|---".repeat(q.labels.len() + 1));
    out.push_str("|\n");
    for (l, row) in q.labels.iter().zip(&q.table) {
        out.push_str(&format!("| {l} |"));
        for x in row {
            out.push_str(&format!(" {x} |"));
        }
        out.push('\n');
    }
    out
}

fn quasigroup_cmd(g: &Global) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let table = idempotents_formula(&sigma, field)?;
    let q = quasigroup_table(&table)?;
    let pass = q.latin && q.idempotent && q.commutative && q.medial;
    if g.format == Format::Md {
        return Ok(Output {
            body: quasigroup_md(&q),
            pass,
        });
    }
    Ok(g.render(&serde_json::to_value(&q)?, pass))
}

fn automorphisms_cmd(g: &Global, bruteforce: bool) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let table = idempotents_formula(&sigma, field)?;
    if sigma.is_single_cycle() && sigma.degree() >= 2 {
        let n = sigma.degree();
        let autos = algebra_autos(&table)?;
        let maps: Vec<AffineMap> = autos.accepted.iter().map(|a| a.affine).collect();
        let gs = group_structure(n, &maps)?;
        let accepted: Vec<Value> = autos
            .accepted
            .iter()
            .map(|a| json!({ "m": a.affine.m, "k": a.affine.k, "matrix": a.matrix }))
            .collect();
        let mut value = json!({
            "prime": field.modulus(),
            "sigma": sigma.images(),
            "quasigroup_order": affine_autos(n)?.len(),
            "candidates": autos.candidates,
            "accepted": accepted,
            "order": gs.order,
            "abelian": gs.abelian,
            "relations": gs,
        });
        let mut pass = gs.relations_ok;
        if bruteforce {
            let q = quasigroup_table(&table)?;
            let cap = g.cap.unwrap_or(DEFAULT_QUASIGROUP_CAP);
            let brute = quasigroup_autos_bruteforce(&q, cap)?;
            let affine: std::collections::BTreeSet<Vec<u64>> =
                affine_autos(n)?.iter().map(AffineMap::images).collect();
            pass &= brute == affine;
            value["quasigroup_bruteforce"] = json!({
                "order": brute.len(),
                "equals_affine": brute == affine,
            });
        }
        return Ok(g.render(&value, pass));
    }
    if bruteforce {
        bail!(Error::NotSingleCycle);
    }
    let maps = algebra_autos_search(&table, g.cap())?;
    let summary = matrix_group_summary(&maps);
    let value = json!({
        "prime": field.modulus(),
        "sigma": sigma.images(),
        "accepted": maps,
        "order": summary.order,
        "abelian": summary.abelian,
        "closed": summary.closed,
    });
    Ok(g.render(&value, summary.closed))
}

fn regular_cmd(g: &Global, n: u32, resultants: bool) -> anyhow::Result<Output> {
    let cert = is_regular_with(
        n,
        RegularityOptions {
            resultants,
            ..RegularityOptions::default()
        },
    )?;
    let pass = cert.fixed_points_ok;
    Ok(g.render(&serde_json::to_value(&cert)?, pass))
}

fn category_cmd(g: &Global) -> anyhow::Result<Output> {
    let (sigma, field) = g.setup()?;
    let ca = product_calibration(&sigma, field)?;
    let cm = phi(&ca)?;
    let medial = cm.algebra.check_identities();
    let back = psi(&cm)?;
    let assoc = back.algebra.check_identities();
    let mut checks = vec![
        ("phi_medial", medial.medial && medial.commutative),
        (
            "psi_associative_unital",
            assoc.associative && assoc.unital && assoc.commutative,
        ),
        ("psi_phi_roundtrip", roundtrip_check(&ca)?),
        ("phi_psi_roundtrip", inverse_roundtrip_check(&cm)?),
    ];
    let table = idempotents_formula(&sigma, field)?;
    let axes: Vec<&Vector> = table
        .idems
        .iter()
        .filter(|c| !table.algebra.left_mult(c).determinant().is_zero())
        .collect();
    let mut independent = true;
    for a in &axes {
        for b in &axes {
            independent &= calibration_independence(&table.algebra, a, b).is_ok();
        }
    }
    checks.push(("calibration_independence", independent));
    let pass = checks.iter().all(|(_, ok)| *ok);
    let value = json!({
        "prime": field.modulus(),
        "sigma": sigma.images(),
        "checks": checks.iter().map(|(n, ok)| json!({ "name": n, "pass": ok })).collect::<Vec<_>>(),
    });
    if g.format == Format::Md {
        let body = checks
            .iter()
            .map(|(n, ok)| format!("- {n}: {}", if *ok { "pass" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("\n");
        return Ok(Output { body, pass });
    }
    Ok(g.render(&value, pass))
}

fn report_cmd(g: &Global) -> anyhow::Result<Output> {
    let sigma = g.sigma()?;
    let report = run_report(&sigma, g.prime_choice()?, g.cap())?;
    let body = match g.format {
        Format::Json => report.to_json(),
        Format::Md => report.to_markdown(),
    };
    Ok(Output {
        body,
        pass: report.all_pass(),
    })
}

fn verify_cmd(
    g: &Global,
    n_max: usize,
    check: Option<String>,
    list: bool,
) -> anyhow::Result<Output> {
    if list {
        return Ok(Output {
            body: check_names().join("\n"),
            pass: true,
        });
    }
    if let Some(name) = check {
        let (sigma, field) = g.setup()?;
        let cx = Context::new(&sigma, field, g.cap())?;
        return match run_named_check(&name, &cx)? {
            Some(outcome) => {
                let pass = outcome.pass;
                Ok(g.render(&serde_json::to_value(outcome)?, pass))
            }
            None => Ok(g.render(&json!({ "name": name, "applicable": false }), true)),
        };
    }
    let summary = verify_all(n_max, g.cap())?;
    if g.format == Format::Md {
        let mut body = String::new();
        for e in &summary.entries {
            body.push_str(&format!("## σ = {:?} over F_{}\n\n", e.sigma, e.prime));
            for c in &e.checks {
                let detail = c.witness.as_deref().or(c.note.as_deref()).unwrap_or("");
                body.push_str(&format!(
                    "- {} {}{}\n",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                    if detail.is_empty() {
                        String::new()
                    } else {
                        format!(": {detail}")
                    }
                ));
            }
            body.push('\n');
        }
        return Ok(Output {
            body,
            pass: summary.pass,
        });
    }
    Ok(g.render(&serde_json::to_value(&summary)?, summary.pass))
}

fn run(cli: Cli) -> anyhow::Result<Output> {
    let g = &cli.global;
    match cli.command {
        Command::AdmissiblePrime => admissible_prime_cmd(g),
        Command::Algebra { show } => algebra_cmd(g, show),
        Command::Idempotents { oracle } => idempotents_cmd(g, oracle),
        Command::Spectra => spectra_cmd(g, false),
        Command::Fusion => spectra_cmd(g, true),
        Command::Quasigroup => quasigroup_cmd(g),
        Command::Automorphisms {
            quasigroup_bruteforce,
        } => automorphisms_cmd(g, quasigroup_bruteforce),
        Command::Regular { n, resultants } => regular_cmd(g, n, resultants),
        Command::CategoryCheck => category_cmd(g),
        Command::Report => report_cmd(g),
        Command::Verify { n_max, check, list } => verify_cmd(g, n_max, check, list),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) => err.exit_code() as u8,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    let result = run(cli).and_then(|output| {
        let mut body = output.body;
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &out {
            Some(path) => {
                fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?
            }
            None => print!("{body}"),
        }
        Ok(output.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: property violation (see output)");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
