//! Batch interface to the `su21` kernels: verification suites, reproduced
//! tables, pointwise evaluation and coset export.
//!
//! | command    | output                                                        |
//! |------------|---------------------------------------------------------------|
//! | `verify`   | one JSON document with every suite report (CSV with `--csv`)  |
//! | `table`    | Wronskian-order table as CSV, or the class catalog as JSON    |
//! | `eval`     | JSON lines, one per sample                                    |
//! | `catalog`  | JSON lines, one per isomorphism-class representative         |
//! | `cosets`   | JSON lines, one per coset representative                      |
//!
//! Every output starts with the run configuration: a `{"config": …}` line for
//! JSON, a `# config {…}` comment line for CSV.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use su21::fourier_basis::{casimir_apply, mu_1d, omega_1d, upsilon_1d, FourierError, FourierTermFunction};
use su21::group_core::{mk_a, mk_k, mk_n, GroupElement};
use su21::heisenberg::HalfInt;
use su21::ktype_poly::{KIndex, KPoint};
use su21::lattice_series::{
    coset_sum, default_generators, eisenstein_by_length, enumerate_cosets, poincare_germ, CosetTable, LatticeError, DEFAULT_CAP,
    DEFAULT_LENGTH,
};
use su21::maass_selberg::{table2_cells, wronskian_order_detail, MaassSelbergError};
use su21::numeric_core::{cis, set_precision};
use su21::spectral::{catalog_representatives, FourierTermOrder, NonAbelianOrder, SpectralError};
use su21::verify::{casimir_families, run_suite, Status, SuiteReport, VerifyConfig, VerifyError, SUITES};
use su21::{Complex, GaussInt, Precision};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass = 0,
    Failures = 1,
    Escalation = 2,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Parse(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    MaassSelberg(#[from] MaassSelbergError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Machine-readable code: the name of the innermost error variant.
    pub fn code(&self) -> String {
        let debug = match self {
            CliError::Parse(_) => return "InvalidArgument".into(),
            CliError::Verify(e) => innermost_debug(e),
            CliError::Lattice(e) => innermost_debug(e),
            CliError::Fourier(e) => innermost_debug(e),
            CliError::Spectral(e) => innermost_debug(e),
            CliError::MaassSelberg(e) => innermost_debug(e),
            CliError::Io(_) => return "Io".into(),
            CliError::Json(_) => return "Json".into(),
            CliError::Csv(_) => return "Csv".into(),
        };
        debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Unknown").to_string()
    }

    /// Structural failures exit with status 2.
    pub fn outcome(&self) -> Outcome {
        match self.code().as_str() {
            "Unclassifiable" | "InvariantIncomplete" => Outcome::Escalation,
            _ => Outcome::Failures,
        }
    }
}

/// Debug text of the deepest variant, skipping transparent wrappers.
fn innermost_debug<E: std::fmt::Debug>(e: &E) -> String {
    const WRAPPERS: [&str; 9] = ["Fourier", "Group", "Heisenberg", "SpecFun", "Spectral", "MaassSelberg", "Lattice", "KType", "Numeric"];
    let mut text = format!("{e:?}");
    while let Some(open) = text.find('(') {
        if !(WRAPPERS.contains(&&text[..open]) && text.ends_with(')')) {
            break;
        }
        text = text[open + 1..text.len() - 1].to_string();
    }
    text
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Debug, Parser)]
#[command(name = "su21", version, about = "Fourier terms, Wronskians and Poincaré series on SU(2,1)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Scalar precision for series and quadrature.
    #[arg(long, value_enum, default_value = "double", global = true)]
    pub precision: PrecisionArg,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 7, global = true)]
    pub seed: u64,
    /// Force JSON output.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Force CSV output.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Multiplies every verification tolerance.
    #[arg(long, default_value_t = 1.0, global = true)]
    pub tol_scale: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Word-length bound for the coset checks.
        #[arg(long, default_value_t = DEFAULT_LENGTH)]
        length: usize,
    },
    /// Emit a reproduced table.
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Evaluate basis functions or truncated series.
    Eval(EvalArgs),
    /// Isomorphism-class catalog with minimal K-types and Whittaker indices.
    Catalog,
    /// Enumerate coset representatives of `Γ_N\Γ` up to a word length.
    Cosets {
        #[arg(long, default_value_t = 4)]
        length: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    WronskianOrders,
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalKind {
    Omega,
    Mu,
    Upsilon,
    Eisenstein,
    Poincare,
    CasimirResidual,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub kind: EvalKind,
    /// `abelian:RE,IM` or `na:ELL,C,D` (`ELL` may be a half-integer such as `3/2`).
    #[arg(long, default_value = "abelian:1,0")]
    pub order: String,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub j: i64,
    /// Spectral parameter, e.g. `0.5`, `3`, `0.3+0.8i`.
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub nu: String,
    /// Heights `t`, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<f64>,
    /// Real part of the `N` coordinate `b`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub bx: f64,
    /// Imaginary part of the `N` coordinate `b`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub by: f64,
    /// Central `N` coordinate.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub r: f64,
    /// Word-length bound for series.
    #[arg(long, default_value_t = 6)]
    pub length: usize,
}

/// Parses an order argument.
pub fn parse_order(s: &str) -> Result<FourierTermOrder> {
    let bad = || CliError::Parse(format!("order `{s}`: expected `abelian:RE,IM` or `na:ELL,C,D`"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    match (kind, parts.as_slice()) {
        ("abelian", [re, im]) => Ok(FourierTermOrder::abelian(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?)),
        ("na", [ell, c, d]) => {
            let twice = match ell.split_once('/') {
                Some((num, "2")) => num.parse::<i64>().map_err(|_| bad())?,
                Some(_) => return Err(bad()),
                None => 2 * ell.parse::<i64>().map_err(|_| bad())?,
            };
            let o = NonAbelianOrder::new(HalfInt::from_twice(twice), c.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)?;
            Ok(FourierTermOrder::NonAbelian(o))
        }
        _ => Err(bad()),
    }
}

/// Human-readable order label used in output rows.
pub fn order_label(o: &FourierTermOrder) -> String {
    match o {
        FourierTermOrder::Abelian { beta } => format!("abelian:{}", beta_label(beta)),
        FourierTermOrder::NonAbelian(n) => format!("na:{},{},{}", n.ell, n.c, n.d),
    }
}

fn beta_label(b: &GaussInt) -> String {
    format!("{},{}", b.re, b.im)
}

/// Parses a complex number such as `0.5`, `-1.2i` or `0.3+0.8i`.
pub fn parse_complex(s: &str) -> Result<Complex> {
    s.replace(' ', "").parse::<Complex>().map_err(|_| CliError::Parse(format!("complex number `{s}`")))
}

#[derive(Debug, Clone, Serialize)]
struct ConfigHeader<'a> {
    command: &'a str,
    precision: PrecisionArg,
    seed: u64,
    tol_scale: f64,
    length: Option<usize>,
    grids: serde_json::Value,
}

fn header(global: &GlobalOpts, command: &str, length: Option<usize>) -> serde_json::Value {
    let cfg = ConfigHeader {
        command,
        precision: global.precision,
        seed: global.seed,
        tol_scale: global.tol_scale,
        length,
        grids: json!({
            "n_grid_xy": 64 * Precision::from(global.precision).grid_factor(),
            "n_grid_r": 16 * Precision::from(global.precision).grid_factor(),
            "series_eps": Precision::from(global.precision).series_eps(),
        }),
    };
    json!({ "config": cfg })
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_header(out: &mut dyn Write, h: &serde_json::Value) -> Result<()> {
    writeln!(out, "# {}", serde_json::to_string(h)?)?;
    Ok(())
}

/// Runs one command, writing to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    set_precision(cli.global.precision.into());
    let g = &cli.global;
    match &cli.command {
        Command::Verify { suite, length } => cmd_verify(g, suite, *length, out),
        Command::Table { which: TableKind::WronskianOrders } => cmd_wronskian_table(g, out),
        Command::Table { which: TableKind::Catalog } | Command::Catalog => cmd_catalog(g, out),
        Command::Eval(args) => cmd_eval(g, args, out),
        Command::Cosets { length, cap } => cmd_cosets(g, *length, *cap, out),
    }
}

fn outcome_of(reports: &[SuiteReport]) -> Outcome {
    if reports.iter().any(SuiteReport::escalated) {
        Outcome::Escalation
    } else if reports.iter().all(SuiteReport::all_passed) {
        Outcome::Pass
    } else {
        Outcome::Failures
    }
}

fn cmd_verify(g: &GlobalOpts, suite: &str, length: usize, out: &mut dyn Write) -> Result<Outcome> {
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(CliError::Parse(format!("unknown suite `{suite}`; expected one of {} or all", SUITES.join(", "))));
    }
    let cfg = VerifyConfig {
        seed: g.seed,
        tol_scale: g.tol_scale,
        length,
    };
    let reports = run_suite(suite, &cfg)?;
    let h = header(g, "verify", Some(length));
    if g.csv {
        csv_header(out, &h)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["suite", "id", "status", "measured", "tolerance", "note"])?;
        for r in &reports {
            for c in &r.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Escalated => "escalated",
                };
                w.write_record([r.suite.as_str(), &c.id, status, &format!("{:e}", c.measured), &format!("{:e}", c.tolerance), &c.note])?;
            }
        }
        w.flush()?;
    } else {
        let doc = json!({ "config": h["config"], "reports": reports });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
    }
    Ok(outcome_of(&reports))
}

/// One row of the reproduced Wronskian-order table.
#[derive(Debug, Clone, Serialize)]
pub struct WronskianRow {
    pub order_kind: String,
    pub class: String,
    pub order: String,
    pub computed_order: Option<u8>,
    pub expected_order: u8,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// The reproduced Wronskian-order table; `Err` only for escalations.
pub fn wronskian_rows() -> Result<Vec<WronskianRow>> {
    table2_cells()
        .into_iter()
        .map(|cell| {
            let computed = match wronskian_order_detail(&cell.class, &cell.order) {
                Ok(cert) => Some(cert.order),
                Err(MaassSelbergError::Unclassifiable(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(WronskianRow {
                order_kind: cell.row.into(),
                class: cell.column.into(),
                order: order_label(&cell.order),
                computed_order: computed,
                expected_order: cell.expected,
                matches: computed == Some(cell.expected),
            })
        })
        .collect()
}

fn cmd_wronskian_table(g: &GlobalOpts, out: &mut dyn Write) -> Result<Outcome> {
    let rows = wronskian_rows()?;
    let h = header(g, "table wronskian-orders", None);
    if g.json {
        json_line(out, &h)?;
        for r in &rows {
            json_line(out, r)?;
        }
    } else {
        csv_header(out, &h)?;
        let mut w = csv::Writer::from_writer(out);
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(if rows.iter().any(|r| r.computed_order.is_none()) {
        Outcome::Escalation
    } else if rows.iter().all(|r| r.matches) {
        Outcome::Pass
    } else {
        Outcome::Failures
    })
}

fn cmd_catalog(g: &GlobalOpts, out: &mut dyn Write) -> Result<Outcome> {
    json_line(out, &header(g, "catalog", None))?;
    for rec in catalog_representatives() {
        json_line(out, &rec)?;
    }
    Ok(Outcome::Pass)
}

fn cmd_cosets(g: &GlobalOpts, length: usize, cap: usize, out: &mut dyn Write) -> Result<Outcome> {
    let table = enumerate_cosets(&default_generators()?, length, cap)?;
    json_line(out, &header(g, "cosets", Some(length)))?;
    json_line(
        out,
        &json!({
            "generators": table.generator_names,
            "cosets": table.len(),
            "collisions_checked": table.collisions_checked,
        }),
    )?;
    for e in &table.entries {
        json_line(out, &table.record(e)?)?;
    }
    Ok(Outcome::Pass)
}

/// One evaluated sample.
#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub order: String,
    pub kind: EvalKind,
    pub j: i64,
    pub nu: [f64; 2],
    pub t: f64,
    pub value_re: f64,
    pub value_im: f64,
    /// Modulus of the last length increment of a truncated series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
}

fn basis_function(kind: EvalKind, order: &FourierTermOrder, j: i64, nu: Complex) -> Result<FourierTermFunction> {
    Ok(match kind {
        EvalKind::Omega => omega_1d(order, j, nu)?,
        EvalKind::Mu => mu_1d(order, j, nu)?,
        EvalKind::Upsilon => upsilon_1d(order, j, nu)?,
        _ => unreachable!("not a basis family"),
    })
}

fn cmd_eval(g: &GlobalOpts, args: &EvalArgs, out: &mut dyn Write) -> Result<Outcome> {
    if args.kind == EvalKind::CasimirResidual {
        return cmd_casimir_residual(g, out);
    }
    let order = parse_order(&args.order)?;
    let nu = parse_complex(&args.nu)?;
    let series = matches!(args.kind, EvalKind::Eisenstein | EvalKind::Poincare);
    json_line(out, &header(g, "eval", series.then_some(args.length)))?;
    let n = mk_n(Complex::new(args.bx, args.by), args.r);
    let table: Option<CosetTable> = if series { Some(enumerate_cosets(&default_generators()?, args.length, DEFAULT_CAP)?) } else { None };
    for &t in &args.t {
        if t <= 0.0 {
            return Err(CliError::Parse(format!("height t = {t} must be positive")));
        }
        let x = n * mk_a(t);
        let (value, tail) = match (args.kind, &table) {
            (EvalKind::Eisenstein, Some(table)) => {
                let idx = KIndex::new(2 * args.j, 0, 0, 0).map_err(|e| CliError::Parse(e.to_string()))?;
                let sums = eisenstein_by_length(args.j, nu, idx, &x, table)?;
                let last = sums[sums.len() - 1];
                let tail = if sums.len() > 1 { Some((last - sums[sums.len() - 2]).norm()) } else { None };
                (last, tail)
            }
            (EvalKind::Poincare, Some(table)) => {
                let f = poincare_germ(&order, args.j, nu)?;
                if nu.re <= 2.0 {
                    return Err(LatticeError::OutsideConvergence { re_nu: nu.re }.into());
                }
                let term = |y: &GroupElement| Ok(f.eval(y)?);
                let last = coset_sum(table, table.max_length, &x, &term)?;
                let tail = if table.max_length > 0 {
                    Some((last - coset_sum(table, table.max_length - 1, &x, &term)?).norm())
                } else {
                    None
                };
                (last, tail)
            }
            _ => (basis_function(args.kind, &order, args.j, nu)?.eval(&x)?, None),
        };
        json_line(
            out,
            &EvalRow {
                order: order_label(&order),
                kind: args.kind,
                j: args.j,
                nu: [nu.re, nu.im],
                t,
                value_re: value.re,
                value_im: value.im,
                tail_estimate: tail,
                length: series.then_some(args.length),
            },
        )?;
    }
    Ok(Outcome::Pass)
}

fn cmd_casimir_residual(g: &GlobalOpts, out: &mut dyn Write) -> Result<Outcome> {
    json_line(out, &header(g, "eval casimir-residual", None))?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut worst = 0.0f64;
    let tol = su21::verify::CASIMIR_TOL * g.tol_scale;
    for (name, f) in casimir_families().map_err(CliError::Verify)? {
        let mut fam = 0.0f64;
        for _ in 0..4 {
            let k = KPoint::from_hopf(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3), cis(rng.gen_range(0.0..6.3)));
            let km = mk_k([[k.a, k.b], [k.c, k.d]], k.delta).map_err(|e| CliError::Parse(e.to_string()))?;
            let x = mk_n(Complex::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)), rng.gen_range(-0.5..0.5)) * mk_a(rng.gen_range(0.7..1.3)) * km;
            let v = f.eval(&x)?;
            let r = (casimir_apply(&f, &x)? - f.eigenvalue() * v).norm() / (1.0 + v.norm());
            fam = fam.max(r);
        }
        worst = worst.max(fam);
        json_line(out, &json!({ "family": name, "max_residual": fam, "eigenvalue": [f.eigenvalue().re, f.eigenvalue().im] }))?;
    }
    json_line(out, &json!({ "max_residual": worst, "tolerance": tol }))?;
    Ok(if worst <= tol { Outcome::Pass } else { Outcome::Failures })
}
