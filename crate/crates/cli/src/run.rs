use std::path::Path;

use rayon::prelude::*;
use rootcomp::certifier::{certify_disjoint, Verdict};
use rootcomp::error::Error;
use rootcomp::grassmannian::{coset_equal, verify_convolution_triple, ConvolutionTriple};
use rootcomp::lr::{character_decompose, root_component_multiplicity};
use rootcomp::orbitdim::{
    case_orbit_dimension, case_valuation_table, closed_form_orbit_dim, family_transversality, PointKind,
};
use rootcomp::points::{
    build_counterexample_xi, build_x, build_x_tilde, build_xi, build_xi_tilde, two_rho_vee_rank2,
    verify_counterexample_witness, verify_torus_identity,
};
use rootcomp::series::Rational;
use rootcomp::type_a::{check_root_component_conditions, rho_pairing, Coweight, PositiveRoot};
use serde_json::Value;
use thiserror::Error as ThisError;

use crate::args::{CaseArgs, Cli, Command, ExpectedVerdict};
use crate::report::{Item, Report, CLOSED_FORM, CROSS_CHECK, REFERENCE, REQUESTED};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::UnstableTruncation { .. }) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A resolved case: either root-component data or a member of the rank-two
/// family.
#[derive(Clone, Debug)]
pub enum Case {
    Root { n: usize, lam: Coweight, mu: Coweight, b: PositiveRoot, big_n: i64 },
    Family { a: Rational },
}

impl Case {
    pub fn key(&self) -> String {
        match self {
            Case::Root { n, lam, mu, b, big_n } => format!("n={n} lambda={lam} mu={mu} beta={b} N={big_n}"),
            Case::Family { a } => format!("n=2 lambda={0} mu={0} a={a}", two_rho_vee_rank2()),
        }
    }
}

pub fn resolve(args: &CaseArgs) -> CliResult<Case> {
    if let Some(a) = &args.a {
        let l = two_rho_vee_rank2();
        let mismatch = args.n.is_some_and(|n| n != 2)
            || args.lambda.as_ref().is_some_and(|x| *x != l)
            || args.mu.as_ref().is_some_and(|x| *x != l)
            || args.beta.is_some()
            || args.big_n.is_some();
        if mismatch {
            return Err(CliError::Usage("--a selects the rank-two family; only --n 2 and lambda = mu = v:4,2,0 are allowed".into()));
        }
        return Ok(Case::Family { a: a.clone() });
    }
    let missing = |f: &str| CliError::Usage(format!("missing --{f}"));
    let lam = args.lambda.clone().ok_or_else(|| missing("lambda"))?;
    let mu = args.mu.clone().ok_or_else(|| missing("mu"))?;
    let b = args.beta.ok_or_else(|| missing("beta"))?;
    let big_n = args.big_n.ok_or_else(|| missing("N"))?;
    let n = args.n.unwrap_or(lam.rank());
    if n == 0 {
        return Err(CliError::Usage("rank must be positive".into()));
    }
    for (name, w) in [("lambda", &lam), ("mu", &mu)] {
        if w.rank() != n {
            return Err(CliError::Usage(format!("--{name} {w} has rank {}, expected {n}", w.rank())));
        }
        if !w.is_dominant() {
            return Err(CliError::Usage(format!("--{name} {w} is not dominant")));
        }
    }
    if !b.fits_rank(n) {
        return Err(CliError::Usage(format!("root {b} does not exist in rank {n}")));
    }
    if big_n < 1 {
        return Err(CliError::Usage("--N must be positive".into()));
    }
    Ok(Case::Root { n, lam, mu, b, big_n })
}

/// Runs one non-battery command.
pub fn run_command(cmd: &Command) -> CliResult<Report> {
    let args = cmd.case_args().ok_or_else(|| CliError::Usage("battery files cannot nest".into()))?;
    let case = resolve(args)?;
    let items = match cmd {
        Command::Check(_) => check(&case)?,
        Command::Verify(_) => verify(&case)?,
        Command::Orbitdim(_) => orbitdim(&case, args)?,
        Command::Disjoint(_) => disjoint(&case, args)?,
        Command::Mult(_) => mult(&case, args)?,
        Command::Battery { .. } => unreachable!("handled above"),
    };
    Ok(Report::new(cmd.name(), case.key(), items))
}

fn root_case(case: &Case, what: &str) -> CliResult<(usize, Coweight, Coweight, PositiveRoot, i64)> {
    match case {
        Case::Root { n, lam, mu, b, big_n } => Ok((*n, lam.clone(), mu.clone(), *b, *big_n)),
        Case::Family { .. } => Err(CliError::Usage(format!("{what} needs --lambda, --mu, --beta and --N"))),
    }
}

fn strings<T: ToString>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn check(case: &Case) -> CliResult<Vec<Item>> {
    let (_, lam, mu, b, big_n) = root_case(case, "check")?;
    let rep = check_root_component_conditions(&lam, &mu, &b, big_n)?;
    Ok(vec![
        Item::info("nu", rep.nu_star.to_string()),
        Item::check("cond1", rep.cond1, true, REFERENCE),
        Item::check("cond2", rep.cond2, true, REFERENCE),
        Item::info("witnesses", rep.witnesses.clone()),
    ])
}

fn membership(prefix: &str, tr: &ConvolutionTriple) -> CliResult<Vec<Item>> {
    let rep = verify_convolution_triple(tr)?;
    Ok(vec![
        Item::check(format!("{prefix}.member"), rep.ok, true, REFERENCE),
        Item::info(format!("{prefix}.distances"), strings(&rep.distances)),
    ])
}

fn verify(case: &Case) -> CliResult<Vec<Item>> {
    match case {
        Case::Family { a } => {
            let tr = build_counterexample_xi(a)?;
            let mut items = membership("xi(a)", &tr)?;
            items.push(Item::check("witness_identity", verify_counterexample_witness(a)?, true, REFERENCE));
            Ok(items)
        }
        Case::Root { n, lam, mu, b, big_n } => {
            let xi = build_xi(lam, mu, b, *big_n)?;
            let mut items = membership("xi", &xi)?;
            if b.is_simple() {
                let same = build_x(lam, b, *big_n)? == build_x_tilde(lam, b, *big_n)?;
                items.push(Item::check("single_point", same, true, CROSS_CHECK));
            } else {
                let xt = build_xi_tilde(lam, mu, b, *big_n)?;
                items.extend(membership("xi_tilde", &xt)?);
                items.push(Item::check("distinct_points", !coset_equal(&xi.l2, &xt.l2)?, true, CROSS_CHECK));
            }
            items.push(Item::check("torus_identity", verify_torus_identity(b, *big_n, *n)?, true, REFERENCE));
            Ok(items)
        }
    }
}

fn orbitdim(case: &Case, args: &CaseArgs) -> CliResult<Vec<Item>> {
    let trunc = args.truncation_override;
    let mut items = Vec::new();
    match case {
        Case::Family { a } => {
            let rep = family_transversality(a, trunc)?;
            let family_dim = rep.orbit_dim + usize::from(!rep.derivative_tangent);
            let top = rho_pairing(&two_rho_vee_rank2().scale(3));
            items.push(Item::check("xi(a).dim", rep.orbit_dim, 11, REFERENCE));
            items.push(Item::check("derivative_tangent", rep.derivative_tangent, false, REFERENCE));
            items.push(Item::check("family_dim", family_dim, 12, REFERENCE));
            items.push(Item::check("max_dim", top.to_integer(), 12, REFERENCE));
            items.push(Item::info("truncation", rep.truncation));
            if let Some(d) = args.expect_dim {
                items.push(Item::check("xi(a).dim.requested", rep.orbit_dim as i64, d, REQUESTED));
            }
        }
        Case::Root { lam, mu, b, big_n, .. } => {
            let closed = closed_form_orbit_dim(lam, mu, b, *big_n)?;
            items.push(Item::info("closed_form.dim", closed.orbit_dim));
            items.push(Item::info("closed_form.g_mod_v", closed.g_mod_v));
            items.push(Item::info("closed_form.v_mod_w", closed.v_mod_w));
            let kinds: &[(PointKind, &str)] =
                if b.is_simple() { &[(PointKind::Xi, "xi")] } else { &[(PointKind::Xi, "xi"), (PointKind::XiTilde, "xi_tilde")] };
            let mut first = None;
            for &(kind, name) in kinds {
                let rep = case_orbit_dimension(kind, lam, mu, b, *big_n, trunc)?;
                first.get_or_insert(rep.dim_linear_algebra);
                items.push(Item::check(format!("{name}.dim"), rep.dim_linear_algebra as i64, closed.orbit_dim, CLOSED_FORM));
                items.push(Item::check(format!("{name}.g_mod_v"), rep.dim_g_mod_v as i64, closed.g_mod_v, CLOSED_FORM));
                items.push(Item::check(format!("{name}.v_mod_w"), rep.dim_v_mod_w as i64, closed.v_mod_w, CLOSED_FORM));
                items.push(Item::info(format!("{name}.truncation"), rep.truncation));
                items.push(Item::check(format!("{name}.stable"), rep.stable, true, CROSS_CHECK));
            }
            let table = case_valuation_table(lam, mu, b, *big_n)?;
            items.push(Item::check("case_table.v_mod_w", table.dim_v_mod_w, closed.v_mod_w, CLOSED_FORM));
            if !b.is_simple() {
                let naive = case_orbit_dimension(PointKind::Naive, lam, mu, b, *big_n, trunc)?;
                let d = naive.dim_linear_algebra as i64;
                items.push(Item::judged("naive.dim", d, format!("< {}", closed.orbit_dim), CROSS_CHECK, d < closed.orbit_dim));
            }
            if let (Some(d), Some(f)) = (args.expect_dim, first) {
                items.push(Item::check("xi.dim.requested", f as i64, d, REQUESTED));
            }
        }
    }
    Ok(items)
}

fn disjoint(case: &Case, args: &CaseArgs) -> CliResult<Vec<Item>> {
    let (_, lam, mu, b, big_n) = root_case(case, "disjoint")?;
    let xi = build_xi(&lam, &mu, &b, big_n)?;
    let xt = build_xi_tilde(&lam, &mu, &b, big_n)?;
    let verdict = certify_disjoint(&xi, &xt)?;
    let name = |v: &Verdict| if v.is_disjoint() { "disjoint" } else { "unknown" };
    let expected = match args.expect_verdict {
        Some(ExpectedVerdict::Disjoint) => ("disjoint", REQUESTED),
        Some(ExpectedVerdict::Unknown) => ("unknown", REQUESTED),
        None if b.is_simple() => ("unknown", CROSS_CHECK),
        None => ("disjoint", REFERENCE),
    };
    let trace = verdict.trace();
    let assignment: Vec<usize> = trace.assignment.iter().map(|c| c + 1).collect();
    Ok(vec![
        Item::check("verdict", name(&verdict), expected.0, expected.1),
        Item::info("det_bound", trace.det_bound),
        Item::info("refinements", strings(trace.propagated.steps())),
        Item::info("assignment", assignment),
        Item::info("assumption", trace.assumption),
    ])
}

fn mult(case: &Case, args: &CaseArgs) -> CliResult<Vec<Item>> {
    let (n, lam, mu, b, big_n) = root_case(case, "mult")?;
    let rep = root_component_multiplicity(&lam, &mu, &b, big_n)?;
    let mut items = vec![
        Item::info("nu", rep.nu.to_string()),
        Item::info("conditions_hold", rep.conditions_hold),
        Item::info("multiplicity", rep.multiplicity),
    ];
    let character = if rep.nu.is_dominant() {
        let d = character_decompose(&lam, &mu, n)?;
        d.iter().find(|(c, _)| *c == rep.nu).map_or(0, |(_, k)| *k)
    } else {
        0
    };
    items.push(Item::check("character_multiplicity", character, rep.multiplicity, CROSS_CHECK));
    if rep.conditions_hold {
        let bound: u64 = if b.is_simple() { 1 } else { 2 };
        items.push(Item::judged("lower_bound", rep.multiplicity, format!(">= {bound}"), REFERENCE, rep.multiplicity >= bound));
    }
    if let Some(m) = args.expect_mult {
        items.push(Item::check("multiplicity.requested", rep.multiplicity, m, REQUESTED));
    }
    if let Some(m) = args.expect_mult_min {
        items.push(Item::judged("multiplicity.requested_min", rep.multiplicity, format!(">= {m}"), REQUESTED, rep.multiplicity >= m));
    }
    Ok(items)
}

/// Parses every line of a battery file; blank lines and `#` comments are
/// skipped.
pub fn parse_battery(path: &Path) -> CliResult<Vec<Command>> {
    use clap::Parser;
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words = std::iter::once("rootcomp").chain(line.split_whitespace());
        let cli = Cli::try_parse_from(words)
            .map_err(|e| CliError::Usage(format!("line {}: {}", lineno + 1, e.render().to_string().trim())))?;
        if matches!(cli.command, Command::Battery { .. }) {
            return Err(CliError::Usage(format!("line {}: battery files cannot nest", lineno + 1)));
        }
        resolve(cli.command.case_args().expect("not a battery")).map_err(|e| CliError::Usage(format!("line {}: {e}", lineno + 1)))?;
        out.push(cli.command);
    }
    Ok(out)
}

/// Runs all cases concurrently; reports come back sorted by case key, then
/// command, then position in the file.
pub fn run_battery(cmds: &[Command]) -> Vec<Report> {
    let mut reports: Vec<(usize, Report)> = cmds
        .par_iter()
        .enumerate()
        .map(|(idx, cmd)| {
            let report = run_command(cmd).unwrap_or_else(|e| {
                let key = cmd.case_args().and_then(|a| resolve(a).ok()).map(|c| c.key()).unwrap_or_default();
                Report::failed(cmd.name(), key, e.to_string())
            });
            (idx, report)
        })
        .collect();
    reports.sort_by(|(ia, a), (ib, b)| a.case.cmp(&b.case).then(a.command.cmp(b.command)).then(ia.cmp(ib)));
    reports.into_iter().map(|(_, r)| r).collect()
}
