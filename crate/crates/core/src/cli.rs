//! The `dicbic` command line: formula evaluation, mechanism export and
//! audits, LP certification, `b` sweeps and continuous probes.
//!
//! [`run`] takes the argument list and two writers so it can be driven
//! in-process by tests; it returns the process exit code.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::audit::{
    bayesian_witness_key, check_bic, check_bir, check_dic, check_ir, expected_revenue, AuditReport, OthersLabel,
};
use crate::closed_form::{certification_grid, r_b, r_d, revenue_report, sweep_b, b_interval, SweepRow};
use crate::continuous::{lp_over_grid, ContinuousSpec, DISCRETIZATION};
use crate::error::Error;
use crate::lp::{
    build_lp, certify_with, Certification, IncentiveModel, LpOptions, PivotRule, SolverOptions, DEFAULT_LP_CAP,
};
use crate::mechanism::{try_build_m_b, try_build_m_d, Mechanism};
use crate::model::{AuctionSpec, BuyerType, TypeProfile, DEFAULT_ENUMERATION_CAP};
use crate::rational::{parse_rational, to_decimal, to_ratio_string, Exact, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_AUDIT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "dicbic", version, about = "Exact optimal-revenue tools for two-item auctions with two-point values")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format (default depends on the subcommand).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Accept terminating decimals such as 0.25 as exact input.
    #[arg(long, global = true)]
    allow_decimal: bool,
    /// Maximum number of type profiles enumerated exhaustively.
    #[arg(long, global = true, env = "AUCTION_ENUM_CAP")]
    cap: Option<u128>,
    /// Maximum number of allocation cells (buyers x profiles) in an LP.
    #[arg(long, global = true)]
    lp_cap: Option<u128>,
    /// Simplex pivot rule.
    #[arg(long, value_enum, global = true, default_value = "lex")]
    rule: Rule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rule {
    Bland,
    Lex,
    Dantzig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Impl {
    Dic,
    Bic,
    Both,
}

#[derive(Args, Debug)]
struct Instance {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
}

#[derive(Args, Debug)]
struct OptionalInstance {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form revenues, indicator flags and breakpoints.
    Formulas {
        #[command(flatten)]
        instance: Instance,
    },
    /// Export an optimal mechanism, optionally auditing it.
    Mechanism {
        #[command(flatten)]
        instance: Instance,
        #[arg(long = "impl", value_enum)]
        implementation: Impl,
        /// Run the matching incentive audits and the revenue check.
        #[arg(long)]
        check: bool,
    },
    /// Solve both LPs and compare their optima with the formulas.
    Certify {
        #[command(flatten)]
        instance: OptionalInstance,
        /// Certify the built-in grid instead of a single instance.
        #[arg(long)]
        grid: bool,
        /// Buyer counts for `--grid`.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        ns: Vec<usize>,
        /// Solve over orbits of the buyer/item symmetries.
        #[arg(long)]
        symmetrize: bool,
        /// Write the two programs as `dic.lp` and `bic.lp` into this directory.
        #[arg(long)]
        lp_export: Option<PathBuf>,
    },
    /// Revenue curves as functions of `b`.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b_min: String,
        #[arg(long)]
        b_max: String,
        /// Number of equal sub-intervals of `[b_min, b_max]`.
        #[arg(long, default_value_t = 60)]
        steps: usize,
    },
    /// LP optima over midpoint grids of the continuous family.
    Continuous {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        a_values: Vec<String>,
        #[arg(long, default_value = "2")]
        lambda: String,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        grid_m: Vec<usize>,
        #[arg(long = "impl", value_enum, default_value = "both")]
        implementation: Impl,
        /// Solve the full program instead of the symmetry-reduced one.
        #[arg(long)]
        no_symmetrize: bool,
    },
}

/// Parsed command outcome: rendered output plus an exit code.
struct Outcome {
    body: String,
    code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, code: EXIT_OK }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } | Error::LpTooLarge { .. } => EXIT_CAP,
        Error::Lp(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, outcome.body.as_bytes()),
        None => out.write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    outcome.code
}

fn dispatch(cli: &Cli) -> crate::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Formulas { instance } => formulas(g, &instance_spec(g, instance)?),
        Command::Mechanism { instance, implementation, check } => {
            mechanism(g, &instance_spec(g, instance)?, *implementation, *check)
        }
        Command::Certify { instance, grid, ns, symmetrize, lp_export } => {
            certify(g, instance, *grid, ns, *symmetrize, lp_export.as_ref())
        }
        Command::Sweep { n, p, a, b_min, b_max, steps } => {
            let r = |s: &str| rational(g, s);
            let rows = sweep_b(*n, &r(p)?, &r(a)?, &r(b_min)?, &r(b_max)?, *steps)?;
            sweep(g, &rows)
        }
        Command::Continuous { n, a_values, lambda, grid_m, implementation, no_symmetrize } => {
            let a_values = a_values.iter().map(|a| rational(g, a)).collect::<crate::Result<Vec<_>>>()?;
            continuous(g, *n, &a_values, &rational(g, lambda)?, grid_m, *implementation, !*no_symmetrize)
        }
    }
}

fn rational(g: &Global, text: &str) -> crate::Result<Rational> {
    Ok(parse_rational(text, g.allow_decimal)?)
}

fn instance_spec(g: &Global, i: &Instance) -> crate::Result<AuctionSpec> {
    AuctionSpec::new(i.n, rational(g, &i.p)?, rational(g, &i.a)?, rational(g, &i.b)?)
}

fn enumeration_cap(g: &Global) -> u128 {
    g.cap.unwrap_or(DEFAULT_ENUMERATION_CAP)
}

fn lp_options(g: &Global, symmetrize: bool) -> LpOptions {
    let rule = match g.rule {
        Rule::Bland => PivotRule::Bland,
        Rule::Lex => PivotRule::Lexicographic,
        Rule::Dantzig => PivotRule::Dantzig { degenerate_limit: 50 },
    };
    LpOptions { symmetrize, solver: SolverOptions { rule, verify: true }, cap: g.lp_cap.unwrap_or(DEFAULT_LP_CAP) }
}

fn json_body<T: Serialize>(value: &T) -> crate::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_body<F>(header: &[&str], fill: F) -> crate::Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> crate::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `num`, `den` and decimal columns for one rational.
fn exact_columns(value: &Rational) -> [String; 3] {
    [value.numer().to_string(), value.denom().to_string(), to_decimal(value)]
}

fn bit(flag: bool) -> &'static str {
    if flag {
        "1"
    } else {
        "0"
    }
}

fn formulas(g: &Global, spec: &AuctionSpec) -> crate::Result<Outcome> {
    let report = revenue_report(spec);
    let gap = (&report.r_b - &report.r_d) / &report.r_d;
    let interval = b_interval(spec);
    let body = match g.format.unwrap_or(Format::Text) {
        Format::Json => json_body(&json!({
            "spec": spec,
            "report": report,
            "relative_gap": to_ratio_string(&gap),
            "interval": format!("{interval:?}"),
        }))?,
        Format::Csv => csv_body(&["quantity", "num", "den", "decimal"], |w| {
            let bp = &report.breakpoints;
            for (name, value) in [
                ("r_D", &report.r_d),
                ("r_B", &report.r_b),
                ("SREV", &report.srev),
                ("s_b", &report.s_b),
                ("bundle", &report.bundle_rev),
                ("relative_gap", &gap),
                ("v1", &bp.v1),
                ("v2", &bp.v2),
                ("v3", &bp.v3),
            ] {
                let [n, d, x] = exact_columns(value);
                w.write_record([name, &n, &d, &x])?;
            }
            Ok(())
        })?,
        Format::Text => {
            let mut s = String::new();
            let bp = &report.breakpoints;
            let f = &report.flags;
            writeln!(s, "instance {spec}").unwrap();
            writeln!(s, "r_D     {}", Exact(&report.r_d)).unwrap();
            writeln!(s, "r_B     {}", Exact(&report.r_b)).unwrap();
            writeln!(s, "SREV    {}", Exact(&report.srev)).unwrap();
            writeln!(s, "s_b     {}", Exact(&report.s_b)).unwrap();
            writeln!(s, "bundle  {}", Exact(&report.bundle_rev)).unwrap();
            writeln!(s, "gap     {}", Exact(&gap)).unwrap();
            writeln!(s, "flags   alpha={} beta={} gamma={}", bit(f.alpha), bit(f.beta), bit(f.gamma)).unwrap();
            writeln!(s, "v1      {}", Exact(&bp.v1)).unwrap();
            writeln!(s, "v2      {}", Exact(&bp.v2)).unwrap();
            writeln!(s, "v3      {}", Exact(&bp.v3)).unwrap();
            writeln!(s, "interval {interval:?}").unwrap();
            s
        }
    };
    Ok(Outcome::ok(body))
}

fn pair(code: &str) -> String {
    let mut chars = code.chars();
    format!("({},{})", chars.next().unwrap_or('?'), chars.next().unwrap_or('?'))
}

fn others_text(others: &OthersLabel) -> String {
    match others {
        OthersLabel::Profile(types) => types.iter().map(|t| pair(t)).collect::<Vec<_>>().join(","),
        OthersLabel::Averaged(_) => "averaged".into(),
    }
}

fn violation_lines(report: &AuditReport, s: &mut String) {
    for v in report.violations.iter().take(20) {
        writeln!(
            s,
            "  buyer {} true {} reports {} others [{}]: {} < {}",
            v.buyer + 1,
            pair(&v.true_type),
            pair(&v.reported_type),
            others_text(&v.others),
            v.lhs,
            v.rhs
        )
        .unwrap();
    }
    if report.violations.len() > 20 {
        writeln!(s, "  ... {} more", report.violations.len() - 20).unwrap();
    }
}

fn mechanism(g: &Global, spec: &AuctionSpec, implementation: Impl, check: bool) -> crate::Result<Outcome> {
    let cap = enumeration_cap(g);
    let (mech, formula, formula_name): (Mechanism, Rational, &str) = match implementation {
        Impl::Dic => (try_build_m_d(spec, cap)?, r_d(spec), "r_D"),
        Impl::Bic => (try_build_m_b(spec, cap)?, r_b(spec), "r_B"),
        Impl::Both => return Err(Error::InvalidSpec("--impl must be dic or bic".into())),
    };
    let revenue = expected_revenue(&mech);
    let audits: Vec<AuditReport> = if !check {
        Vec::new()
    } else if implementation == Impl::Dic {
        vec![check_ir(&mech), check_dic(&mech)]
    } else {
        vec![check_ir(&mech), check_bic(&mech), check_bir(&mech)]
    };
    let revenue_ok = revenue == formula;
    let failed = check && (!revenue_ok || audits.iter().any(|r| !r.passed));
    // informational: the Bayesian mechanism is generally not dominant-strategy IC
    let dic_probe = (check && implementation == Impl::Bic).then(|| check_dic(&mech));

    let body = match g.format.unwrap_or(Format::Json) {
        Format::Json if check => json_body(&json!({
            "table": mech.to_table(),
            "audit": {
                "reports": audits,
                "revenue": to_ratio_string(&revenue),
                "formula": to_ratio_string(&formula),
                "revenue_matches": revenue_ok,
            },
        }))?,
        Format::Json => json_body(&mech.to_table())?,
        Format::Csv => {
            let header = ["profile", "probability", "buyer", "q1", "q2", "utility", "payment"];
            csv_body(&header, |w| {
                for row in mech.to_table().profiles {
                    let profile = row.profile.join(" ");
                    for (i, buyer) in row.buyers.iter().enumerate() {
                        w.write_record([
                            profile.clone(),
                            to_ratio_string(&row.probability),
                            (i + 1).to_string(),
                            to_ratio_string(&buyer.allocation[0]),
                            to_ratio_string(&buyer.allocation[1]),
                            to_ratio_string(&buyer.utility),
                            to_ratio_string(&buyer.payment),
                        ])?;
                    }
                }
                Ok(())
            })?
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "mechanism {:?} at {spec}", mech.label()).unwrap();
            writeln!(s, "revenue {}", Exact(&revenue)).unwrap();
            for report in &audits {
                if report.passed {
                    writeln!(s, "{:?} ok ({} constraints)", report.condition, report.checked).unwrap();
                } else {
                    writeln!(s, "{:?} FAILED ({} of {} violated)", report.condition, report.violations.len(), report.checked)
                        .unwrap();
                    violation_lines(report, &mut s);
                }
            }
            if check {
                let verdict = if revenue_ok { "ok" } else { "MISMATCH" };
                let relation = if revenue_ok { "=" } else { "!=" };
                writeln!(s, "revenue {revenue} {relation} {formula_name} {verdict}").unwrap();
            }
            if let Some(dic) = &dic_probe {
                let key = bayesian_witness_key(spec.n());
                if dic.contains(key.buyer, key.true_type, key.reported_type, key.others) {
                    let others = TypeProfile::from_index(spec.n() - 1, key.others.expect("profile witness"));
                    let others: Vec<String> = others.types().iter().map(|t| pair(t.code())).collect();
                    writeln!(
                        s,
                        "DIC violated at witness u_1({},{}) vs report {}",
                        pair(BuyerType::BB.code()),
                        others.join(","),
                        pair(BuyerType::AB.code())
                    )
                    .unwrap();
                } else if dic.passed {
                    writeln!(s, "DIC ok (informational)").unwrap();
                } else {
                    writeln!(s, "DIC violated at {} constraints (informational)", dic.violations.len()).unwrap();
                }
            }
            s
        }
    };
    Ok(Outcome { body, code: if failed { EXIT_AUDIT } else { EXIT_OK } })
}

fn certify(
    g: &Global,
    instance: &OptionalInstance,
    grid: bool,
    ns: &[usize],
    symmetrize: bool,
    lp_export: Option<&PathBuf>,
) -> crate::Result<Outcome> {
    let specs = if grid {
        if lp_export.is_some() {
            return Err(Error::InvalidSpec("--lp-export needs a single instance, not --grid".into()));
        }
        if ns.is_empty() || ns.iter().any(|&n| n < 2) {
            return Err(Error::InvalidSpec("--ns entries must be at least 2".into()));
        }
        certification_grid(ns)
    } else {
        let missing = || Error::InvalidSpec("certify needs --n, --p, --a and --b, or --grid".into());
        let field = |v: &Option<String>| v.as_deref().ok_or_else(missing).and_then(|t| rational(g, t));
        vec![AuctionSpec::new(
            instance.n.ok_or_else(missing)?,
            field(&instance.p)?,
            field(&instance.a)?,
            field(&instance.b)?,
        )?]
    };
    let options = lp_options(g, symmetrize);
    let cap = enumeration_cap(g);
    for spec in &specs {
        spec.type_space().check_cap(cap)?;
    }
    if let Some(dir) = lp_export {
        std::fs::create_dir_all(dir)?;
        for model in [IncentiveModel::Dominant, IncentiveModel::Bayesian] {
            let built = build_lp(&specs[0], model, &options)?;
            std::fs::write(dir.join(format!("{}.lp", model.code())), built.program.to_lp_format())?;
        }
    }
    let results = specs.iter().map(|spec| certify_with(spec, &options)).collect::<crate::Result<Vec<Certification>>>()?;
    let passed = results.iter().filter(|c| c.passed()).count();
    let body = match g.format.unwrap_or(Format::Text) {
        Format::Json => json_body(&json!({
            "certifications": results,
            "passed": passed,
            "total": results.len(),
        }))?,
        Format::Csv => {
            let header = ["n", "p", "a", "b", "lp_d", "r_d", "equal_d", "lp_b", "r_b", "equal_b"];
            csv_body(&header, |w| {
                for c in &results {
                    let s = &c.spec;
                    w.write_record([
                        s.n().to_string(),
                        to_ratio_string(s.p()),
                        to_ratio_string(s.a()),
                        to_ratio_string(s.b()),
                        to_ratio_string(&c.lp_d),
                        to_ratio_string(&c.r_d),
                        c.equal_d.to_string(),
                        to_ratio_string(&c.lp_b),
                        to_ratio_string(&c.r_b),
                        c.equal_b.to_string(),
                    ])?;
                }
                Ok(())
            })?
        }
        Format::Text => {
            let mut s = String::new();
            let verdict = |ok: bool| if ok { "equal" } else { "DIFFER" };
            for c in &results {
                writeln!(
                    s,
                    "{}  lp_D={} r_D={} {}  lp_B={} r_B={} {}",
                    c.spec,
                    c.lp_d,
                    c.r_d,
                    verdict(c.equal_d),
                    c.lp_b,
                    c.r_b,
                    verdict(c.equal_b)
                )
                .unwrap();
            }
            writeln!(s, "certified {passed}/{}", results.len()).unwrap();
            s
        }
    };
    let code = if passed == results.len() { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { body, code })
}

const SWEEP_HEADER: [&str; 16] = [
    "b_num", "b_den", "b_dec", "rD_num", "rD_den", "rD_dec", "rB_num", "rB_den", "rB_dec", "srev_num", "srev_den",
    "srev_dec", "alpha", "beta", "gamma", "breakpoint",
];

fn sweep(g: &Global, rows: &[SweepRow]) -> crate::Result<Outcome> {
    let body = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_body(&SWEEP_HEADER, |w| {
            for row in rows {
                let mut record: Vec<String> = Vec::with_capacity(SWEEP_HEADER.len());
                for value in [&row.b, &row.r_d, &row.r_b, &row.srev] {
                    record.extend(exact_columns(value));
                }
                let f = row.flags;
                record.extend([bit(f.alpha), bit(f.beta), bit(f.gamma), bit(row.breakpoint)].map(String::from));
                w.write_record(&record)?;
            }
            Ok(())
        })?,
        Format::Json => json_body(&rows)?,
        Format::Text => {
            let mut s = String::new();
            for row in rows {
                let mark = if row.breakpoint { "  *" } else { "" };
                writeln!(
                    s,
                    "b={}  r_D={}  r_B={}  SREV={}{mark}",
                    Exact(&row.b),
                    Exact(&row.r_d),
                    Exact(&row.r_b),
                    Exact(&row.srev)
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

#[derive(Serialize)]
struct ContinuousRow {
    #[serde(with = "crate::rational::ratio_str")]
    a: Rational,
    grid_m: usize,
    #[serde(rename = "impl")]
    implementation: &'static str,
    #[serde(with = "crate::rational::ratio_str")]
    optimum: Rational,
    #[serde(with = "crate::rational::ratio_str")]
    ratio_to_a: Rational,
    /// `(lp_B - lp_D) / lp_D`, on Bayesian rows when both optima were computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_gap: Option<String>,
    /// Whether the optimum sits in the indicative band around `a` times the
    /// reference formula (`n = 2`, `λ = 2` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    within_band: Option<bool>,
    /// For one-point grids: equality with the collapsed two-point formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_collapsed: Option<bool>,
}

fn continuous(
    g: &Global,
    n: usize,
    a_values: &[Rational],
    lambda: &Rational,
    grid_ms: &[usize],
    implementation: Impl,
    symmetrize: bool,
) -> crate::Result<Outcome> {
    let options = lp_options(g, symmetrize);
    let models: &[IncentiveModel] = match implementation {
        Impl::Dic => &[IncentiveModel::Dominant],
        Impl::Bic => &[IncentiveModel::Bayesian],
        Impl::Both => &[IncentiveModel::Dominant, IncentiveModel::Bayesian],
    };
    let mut cells: Vec<(Rational, usize)> =
        a_values.iter().flat_map(|a| grid_ms.iter().map(move |&m| (a.clone(), m))).collect();
    // rows come out ordered by (a, grid_m), dic before bic
    cells.sort();
    cells.dedup();
    let specs = cells
        .iter()
        .map(|(a, m)| ContinuousSpec::new(n, a.clone(), lambda.clone(), *m))
        .collect::<crate::Result<Vec<_>>>()?;
    let reference = specs.first().map(|s| s.reference_spec());
    let banded = n == 2 && *lambda == crate::rational::int(2);
    let mut rows = Vec::new();
    for spec in &specs {
        let mut dominant: Option<Rational> = None;
        for &model in models {
            let optimum = lp_over_grid(spec, model, &options)?;
            let reference = spec.reference_spec();
            let (formula, width) = match model {
                IncentiveModel::Dominant => (r_d(&reference), crate::rational::rat(5, 4)),
                IncentiveModel::Bayesian => (r_b(&reference), crate::rational::rat(3, 2)),
            };
            let low = formula * spec.a();
            let within_band = banded.then(|| optimum >= low && optimum <= &low + width);
            let matches_collapsed = (spec.grid_m() == 1).then(|| {
                let collapsed = spec.collapsed_spec();
                let formula = match model {
                    IncentiveModel::Dominant => r_d(&collapsed),
                    IncentiveModel::Bayesian => r_b(&collapsed),
                };
                formula == optimum
            });
            let relative_gap = match (model, &dominant) {
                (IncentiveModel::Bayesian, Some(d)) => Some(to_ratio_string(&((&optimum - d) / d))),
                _ => None,
            };
            if model == IncentiveModel::Dominant {
                dominant = Some(optimum.clone());
            }
            rows.push(ContinuousRow {
                a: spec.a().clone(),
                grid_m: spec.grid_m(),
                implementation: model.code(),
                ratio_to_a: &optimum / spec.a(),
                optimum,
                relative_gap,
                within_band,
                matches_collapsed,
            });
        }
    }

    let body = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let header = [
                "a",
                "grid_m",
                "impl",
                "optimum_num",
                "optimum_den",
                "optimum_decimal",
                "ratio_to_a",
                "relative_gap",
            ];
            csv_body(&header, |w| {
                for row in &rows {
                    let [num, den, dec] = exact_columns(&row.optimum);
                    let gap = row
                        .relative_gap
                        .as_deref()
                        .map(|g| to_decimal(&parse_rational(g, false).expect("rendered rational")))
                        .unwrap_or_default();
                    w.write_record([
                        to_ratio_string(&row.a),
                        row.grid_m.to_string(),
                        row.implementation.to_string(),
                        num,
                        den,
                        dec,
                        to_decimal(&row.ratio_to_a),
                        gap,
                    ])?;
                }
                Ok(())
            })?
        }
        Format::Json => json_body(&json!({
            "discretization": DISCRETIZATION,
            "n": n,
            "lambda": to_ratio_string(lambda),
            "symmetrized": symmetrize,
            "rows": rows,
        }))?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "discretization: {DISCRETIZATION}").unwrap();
            if let Some(reference) = &reference {
                writeln!(s, "reference {reference}: r_D={} r_B={}", Exact(&r_d(reference)), Exact(&r_b(reference)))
                    .unwrap();
            }
            for row in &rows {
                write!(s, "a={} grid_m={} {} lp={} lp/a={}", row.a, row.grid_m, row.implementation, Exact(&row.optimum), to_decimal(&row.ratio_to_a))
                    .unwrap();
                if let Some(gap) = &row.relative_gap {
                    let gap = parse_rational(gap, false).expect("rendered rational");
                    write!(s, " gap={}", Exact(&gap)).unwrap();
                }
                if let Some(band) = row.within_band {
                    write!(s, " band={}", if band { "inside" } else { "outside" }).unwrap();
                }
                if let Some(collapsed) = row.matches_collapsed {
                    write!(s, " collapsed={}", if collapsed { "equal" } else { "DIFFER" }).unwrap();
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("dicbic").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::InvalidSpec("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Lp("x".into())), EXIT_MISMATCH);
        assert_eq!(exit_code(&Error::CapExceeded { profiles: 1, cap: 0 }), EXIT_CAP);
        assert_eq!(exit_code(&Error::LpTooLarge { cells: 1, cap: 0 }), EXIT_CAP);
    }

    #[test]
    fn help_and_bad_flags() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("formulas") && out.contains("continuous"));
        let (code, _, err) = call(&["formulas", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn pair_rendering() {
        assert_eq!(pair("bb"), "(b,b)");
        assert_eq!(others_text(&OthersLabel::Profile(vec!["ab".into(), "aa".into()])), "(a,b),(a,a)");
    }
}
