//! Batch command-line surface over the exact intersection-number and
//! volume library.
//!
//! Every subcommand prints a deterministic payload to stdout — identical
//! inputs produce byte-identical output — in one of three formats (plain
//! text, JSON, CSV); stderr carries diagnostics only.  Exact values are
//! always serialized as rational strings `p/q`; floats appear only in the
//! `constants` and `asymptotics` payloads (and under `--physical`), always
//! as decimal strings accompanied by a digit count.
//!
//! Exit codes: 0 success; 1 computation failure or a failed identity
//! check (including a `volume --route both` mismatch); 2 usage error,
//! including requests beyond the documented budgets.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wpvol_core::asympt::bigfloat::decimal_string;
use wpvol_core::asympt::{asymptotic_diagnostics, constants, AsymptError};
use wpvol_core::fps::rational::{format_rational, Rational};
use wpvol_core::genexp::{
    bessel_x_of_y, phi_series, verify_basis_decomposition, verify_class_substitution,
    volumes_fast, y_of_x, GenexpError,
};
use wpvol_core::kappa::{
    kappa_bracket, physical_scale, verify_schur_substitution, wp_volume, KappaError, MultiIndex,
    SubstitutionReport,
};
use wpvol_core::tau::{tau2_power_from_b, TauTable};

// Budgets: requests beyond these bounds are rejected with a clean usage
// error instead of running away with memory or time.
const MAX_TAU_GENUS: u32 = 10;
const MAX_TAU_INSERTIONS: usize = 24;
const MAX_TAU_INDEX: u32 = 60;
const MAX_GENUS: u32 = 6;
const MAX_KAPPA_N: u32 = 16;
const MAX_KAPPA_WEIGHT: u64 = 16;
const MAX_EXACT_DIM: u32 = 16;
const MAX_VOLUME_N: u32 = 1024;
const MAX_SERIES_ORDER: usize = 1200;
const MAX_PHI_ORDER: usize = 600;
const MAX_DIGITS: u32 = 120;
const MAX_CONST_G: u32 = 8;
const MAX_SCHUR_WEIGHT: u32 = 10;
const MAX_CLASS_WEIGHT: u32 = 8;
const MAX_BASIS_DIM: u32 = 8;
const MAX_PAINLEVE_G: u32 = 5;

#[derive(Parser)]
#[command(
    name = "wpvol",
    version,
    about = "Exact intersection numbers and Weil-Petersson volumes of moduli spaces, \
             with certified growth-law numerics",
    propagate_version = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact intersection number of cotangent-line classes
    Tau(TauArgs),
    /// Exact kappa-class intersection number on the n-pointed space
    Kappa(KappaArgs),
    /// Weil-Petersson volume, by either exact pipeline
    Volume(VolumeArgs),
    /// Coefficients of the generating series behind the fast pipeline
    Series(SeriesArgs),
    /// Certified numerical constants of the large-n volume growth law
    Constants(ConstantsArgs),
    /// Exact coefficients with scaled ratios and an extrapolated growth fit
    Asymptotics(AsymptoticsArgs),
    /// Exact identity checks; exits 0 only if every check holds
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TauArgs {
    /// Genus (budget: at most 10).
    #[arg(short, long)]
    genus: u32,
    /// Comma-separated descendant indices d1,d2,... (budget: at most 24
    /// entries, each at most 60).
    #[arg(short, long, value_delimiter = ',', num_args = 1..)]
    descendants: Vec<u32>,
}

#[derive(Args)]
struct KappaArgs {
    /// Genus (budget: at most 6).
    #[arg(short, long)]
    genus: u32,
    /// Number of marked points (budget: at most 16).
    #[arg(short)]
    n: u32,
    /// Comma-separated exponents m1,m2,... of the kappa classes; omit for
    /// no kappa insertions (budget: total weight at most 16).
    #[arg(short, long, value_delimiter = ',', num_args = 1..)]
    multi_index: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Exact transform to descendant brackets.
    Kappa,
    /// Exact series pipeline through the genus expansion.
    Genexp,
    /// Run both pipelines and compare; exits nonzero on any mismatch.
    Both,
}

#[derive(Args)]
struct VolumeArgs {
    /// Genus (budget: at most 6).
    #[arg(short, long)]
    genus: u32,
    /// Single number of marked points.
    #[arg(short, conflicts_with = "n_max")]
    n: Option<u32>,
    /// Emit a table for every stable n up to this bound (budget: at most
    /// 1024 on the series route; dimension 3g-3+n at most 16 on the
    /// transform route).
    #[arg(long)]
    n_max: Option<u32>,
    /// Which exact pipeline computes the value.
    #[arg(long, value_enum, default_value_t = Route::Kappa)]
    route: Route,
    /// Also print the volume in the symplectic normalization
    /// (2 pi^2)^d V/d! as a float.
    #[arg(long)]
    physical: bool,
    /// Decimal digits for --physical (budget: at most 120).
    #[arg(long, default_value_t = 30)]
    digits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    /// The Bessel-type series x(y) whose inverse drives genus 0.
    XOfY,
    /// Its compositional inverse y(x); all coefficients are positive.
    YOfX,
    /// The genus-g volume potential (coefficient of x^n is the volume
    /// divided by n!(n+3g-3)!); requires --genus.
    Phi,
}

#[derive(Args)]
struct SeriesArgs {
    /// Which series to expand.
    #[arg(long, value_enum)]
    what: SeriesKind,
    /// Truncation order (budget: at most 1200; at most 600 for phi).
    #[arg(long)]
    order: usize,
    /// Genus for --what phi (budget: at most 6).
    #[arg(short, long)]
    genus: Option<u32>,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Certified significant decimal digits (budget: at most 120).
    #[arg(long, default_value_t = 30)]
    digits: u32,
    /// Largest genus for the growth constants B_g (budget: at most 8).
    #[arg(long, default_value_t = 4)]
    g_max: u32,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Genus (budget: at most 6).
    #[arg(short, long)]
    genus: u32,
    /// Largest coefficient index; the fit window is the last 51 points
    /// (budget: at most 1024; the top of the budget can take minutes).
    #[arg(long)]
    n_max: u32,
    /// First reported index (default: the smallest stable n).
    #[arg(long)]
    n_min: Option<u32>,
    /// Decimal digits of the reported floats (budget: at most 120).
    #[arg(long, default_value_t = 30)]
    digits: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    check: Check,
}

#[derive(Subcommand)]
enum Check {
    /// Volume series equals the free energy under the Schur-polynomial
    /// substitution
    Schur {
        /// Genus (budget: at most 4).
        #[arg(short, long)]
        genus: u32,
        /// Kappa-weight bound (budget: at most 10).
        #[arg(long, default_value_t = 6)]
        max_weight: u32,
    },
    /// Volume series equals the moduli-class series under the second
    /// Schur-polynomial substitution
    Classes {
        /// Genus (budget: at most 3).
        #[arg(short, long)]
        genus: u32,
        /// Kappa-weight bound (budget: at most 8).
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
    },
    /// Moduli class decomposes over products of genus-0 classes with the
    /// derivative-expansion coefficients
    Basis {
        /// Genus.
        #[arg(short, long)]
        genus: u32,
        /// Marked points (budget: dimension 3g-3+n at most 8).
        #[arg(short)]
        n: u32,
    },
    /// The two volume pipelines agree exactly
    Volumes {
        /// Genus (budget: at most 6).
        #[arg(short, long)]
        genus: u32,
        /// Largest n (budget: dimension 3g-3+n at most 16).
        #[arg(long)]
        n_max: u32,
    },
    /// Top-power descendant towers match the Painleve-I recursion
    Painleve {
        /// Largest genus checked, from 2 (budget: at most 5).
        #[arg(long, default_value_t = 3)]
        g_max: u32,
    },
    /// The default battery of all checks at modest sizes
    All,
}

enum CliError {
    Usage(String),
    Computation(String),
}

enum Outcome {
    Success,
    IdentityFailed,
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::IdentityFailed) => ExitCode::from(1),
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Tau(args) => run_tau(args, format),
        Command::Kappa(args) => run_kappa(args, format),
        Command::Volume(args) => run_volume(args, format),
        Command::Series(args) => run_series(args, format),
        Command::Constants(args) => run_constants(args, format),
        Command::Asymptotics(args) => run_asymptotics(args, format),
        Command::Verify(args) => run_verify(args, format),
    }
}

/// Minimal CSV quoting: wrap a field in quotes when it contains a comma,
/// quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn stable(genus: u32, n: u32) -> bool {
    2 * genus as i64 - 2 + n as i64 > 0
}

fn stable_n_min(genus: u32) -> u32 {
    match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    }
}

fn dimension(genus: u32, n: u32) -> u32 {
    (3 * genus as i64 - 3 + n as i64) as u32
}

fn run_tau(args: TauArgs, format: Format) -> Result<Outcome, CliError> {
    if args.genus > MAX_TAU_GENUS {
        return Err(usage(format!(
            "genus {} exceeds the budget (at most {MAX_TAU_GENUS})",
            args.genus
        )));
    }
    if args.descendants.len() > MAX_TAU_INSERTIONS {
        return Err(usage(format!(
            "{} insertions exceed the budget (at most {MAX_TAU_INSERTIONS})",
            args.descendants.len()
        )));
    }
    if let Some(&d) = args.descendants.iter().max() {
        if d > MAX_TAU_INDEX {
            return Err(usage(format!(
                "descendant index {d} exceeds the budget (at most {MAX_TAU_INDEX})"
            )));
        }
    }
    let table = TauTable::new();
    let value = table.bracket(args.genus, &args.descendants);
    let rendered = format_rational(&value);
    match format {
        Format::Plain => println!("{rendered}"),
        Format::Json => println!(
            "{}",
            json!({
                "genus": args.genus,
                "descendants": args.descendants,
                "value": rendered,
            })
        ),
        Format::Csv => {
            println!("genus,descendants,value");
            let ds: Vec<String> = args.descendants.iter().map(|d| d.to_string()).collect();
            println!("{},{},{}", args.genus, ds.join(" "), rendered);
        }
    }
    Ok(Outcome::Success)
}

fn run_kappa(args: KappaArgs, format: Format) -> Result<Outcome, CliError> {
    if args.genus > MAX_GENUS {
        return Err(usage(format!(
            "genus {} exceeds the budget (at most {MAX_GENUS})",
            args.genus
        )));
    }
    if args.n > MAX_KAPPA_N {
        return Err(usage(format!(
            "n = {} exceeds the budget (at most {MAX_KAPPA_N})",
            args.n
        )));
    }
    let exponents = args.multi_index.unwrap_or_default();
    let m = MultiIndex::new(exponents.clone());
    if m.weight() > MAX_KAPPA_WEIGHT {
        return Err(usage(format!(
            "kappa weight {} exceeds the budget (at most {MAX_KAPPA_WEIGHT})",
            m.weight()
        )));
    }
    let table = TauTable::new();
    let value = kappa_bracket(&table, args.genus, args.n, &m);
    let rendered = format_rational(&value);
    match format {
        Format::Plain => println!("{rendered}"),
        Format::Json => println!(
            "{}",
            json!({
                "genus": args.genus,
                "n": args.n,
                "multi_index": exponents,
                "value": rendered,
            })
        ),
        Format::Csv => {
            println!("genus,n,multi_index,value");
            let ms: Vec<String> = exponents.iter().map(|e| e.to_string()).collect();
            println!("{},{},{},{}", args.genus, args.n, ms.join(" "), rendered);
        }
    }
    Ok(Outcome::Success)
}

struct VolumeRow {
    n: u32,
    kappa: Option<Rational>,
    genexp: Option<Rational>,
    physical: Option<String>,
}

impl VolumeRow {
    fn matches(&self) -> bool {
        match (&self.kappa, &self.genexp) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    fn value(&self) -> &Rational {
        self.kappa.as_ref().or(self.genexp.as_ref()).unwrap()
    }
}

fn run_volume(args: VolumeArgs, format: Format) -> Result<Outcome, CliError> {
    if args.genus > MAX_GENUS {
        return Err(usage(format!(
            "genus {} exceeds the budget (at most {MAX_GENUS})",
            args.genus
        )));
    }
    if args.physical && args.digits > MAX_DIGITS {
        return Err(usage(format!(
            "{} digits exceed the budget (at most {MAX_DIGITS})",
            args.digits
        )));
    }
    let n_min = stable_n_min(args.genus);
    let ns: Vec<u32> = match (args.n, args.n_max) {
        (Some(n), None) => {
            if !stable(args.genus, n) {
                return Err(usage(format!(
                    "({},{}) is unstable: 2g-2+n must be positive",
                    args.genus, n
                )));
            }
            vec![n]
        }
        (None, Some(n_max)) => {
            if n_max < n_min {
                return Err(usage(format!(
                    "no stable n at genus {} is <= {n_max} (smallest is {n_min})",
                    args.genus
                )));
            }
            (n_min..=n_max).collect()
        }
        (None, None) => {
            return Err(usage("one of -n or --n-max is required".to_string()));
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let n_top = *ns.last().unwrap();
    let use_kappa = matches!(args.route, Route::Kappa | Route::Both);
    let use_genexp = matches!(args.route, Route::Genexp | Route::Both);
    if use_kappa && dimension(args.genus, n_top) > MAX_EXACT_DIM {
        return Err(usage(format!(
            "dimension 3g-3+n = {} exceeds the transform-route budget (at most {MAX_EXACT_DIM}); \
             use --route genexp for large n",
            dimension(args.genus, n_top)
        )));
    }
    if use_genexp && n_top > MAX_VOLUME_N {
        return Err(usage(format!(
            "n = {n_top} exceeds the budget (at most {MAX_VOLUME_N})"
        )));
    }

    let table = TauTable::new();
    let fast = if use_genexp {
        Some(volumes_fast(&table, args.genus, n_top))
    } else {
        None
    };
    let mut rows = Vec::with_capacity(ns.len());
    let mut all_match = true;
    for &n in &ns {
        let kappa_value = use_kappa.then(|| wp_volume(&table, args.genus, n));
        let genexp_value = fast
            .as_ref()
            .map(|t| t.value(args.genus, n).cloned().expect("stable n in range"));
        let mut row = VolumeRow {
            n,
            kappa: kappa_value,
            genexp: genexp_value,
            physical: None,
        };
        if !row.matches() {
            all_match = false;
        } else if args.physical {
            let d = dimension(args.genus, n);
            row.physical = Some(physical_scale(row.value(), d, args.digits).to_decimal(args.digits));
        }
        rows.push(row);
    }

    let provenance = match args.route {
        Route::Kappa => "kappa-transform",
        Route::Genexp => "genus-expansion",
        Route::Both => "both",
    };
    match format {
        Format::Plain => {
            for row in &rows {
                let mut line = if args.route == Route::Both {
                    format!(
                        "V[{},{}] kappa={} genexp={} match={}",
                        args.genus,
                        row.n,
                        format_rational(row.kappa.as_ref().unwrap()),
                        format_rational(row.genexp.as_ref().unwrap()),
                        if row.matches() { "yes" } else { "no" }
                    )
                } else if args.n.is_some() {
                    format_rational(row.value())
                } else {
                    format!("V[{},{}] = {}", args.genus, row.n, format_rational(row.value()))
                };
                if let Some(p) = &row.physical {
                    line.push_str(&format!(" physical={p}"));
                }
                println!("{line}");
            }
        }
        Format::Json => {
            let json_row = |row: &VolumeRow| {
                let mut obj = serde_json::Map::new();
                obj.insert("n".to_string(), json!(row.n));
                if let Some(v) = &row.kappa {
                    let key = if args.route == Route::Both { "kappa" } else { "value" };
                    obj.insert(key.to_string(), json!(format_rational(v)));
                }
                if let Some(v) = &row.genexp {
                    let key = if args.route == Route::Both { "genexp" } else { "value" };
                    obj.insert(key.to_string(), json!(format_rational(v)));
                }
                if args.route == Route::Both {
                    obj.insert("match".to_string(), json!(row.matches()));
                }
                if let Some(p) = &row.physical {
                    obj.insert("physical".to_string(), json!(p));
                    obj.insert("digits".to_string(), json!(args.digits));
                }
                serde_json::Value::Object(obj)
            };
            if args.n.is_some() {
                let mut obj = match json_row(&rows[0]) {
                    serde_json::Value::Object(o) => o,
                    _ => unreachable!(),
                };
                obj.insert("g".to_string(), json!(args.genus));
                obj.insert("provenance".to_string(), json!(provenance));
                println!("{}", serde_json::Value::Object(obj));
            } else {
                let rendered: Vec<serde_json::Value> = rows.iter().map(json_row).collect();
                println!(
                    "{}",
                    json!({
                        "genus": args.genus,
                        "provenance": provenance,
                        "rows": rendered,
                    })
                );
            }
        }
        Format::Csv => {
            let mut header = if args.route == Route::Both {
                "g,n,kappa,genexp,match".to_string()
            } else {
                "g,n,value,provenance".to_string()
            };
            if args.physical {
                header.push_str(",physical");
            }
            println!("{header}");
            for row in &rows {
                let mut line = if args.route == Route::Both {
                    format!(
                        "{},{},{},{},{}",
                        args.genus,
                        row.n,
                        format_rational(row.kappa.as_ref().unwrap()),
                        format_rational(row.genexp.as_ref().unwrap()),
                        if row.matches() { "yes" } else { "no" }
                    )
                } else {
                    format!(
                        "{},{},{},{}",
                        args.genus,
                        row.n,
                        format_rational(row.value()),
                        provenance
                    )
                };
                if args.physical {
                    line.push(',');
                    if let Some(p) = &row.physical {
                        line.push_str(p);
                    }
                }
                println!("{line}");
            }
        }
    }
    if all_match {
        Ok(Outcome::Success)
    } else {
        eprintln!("error: the two pipelines disagree (see the match column)");
        Ok(Outcome::IdentityFailed)
    }
}

fn run_series(args: SeriesArgs, format: Format) -> Result<Outcome, CliError> {
    if args.order == 0 {
        return Err(usage("--order must be at least 1".to_string()));
    }
    let series = match args.what {
        SeriesKind::XOfY | SeriesKind::YOfX => {
            if args.genus.is_some() {
                return Err(usage("--genus applies only to --what phi".to_string()));
            }
            if args.order > MAX_SERIES_ORDER {
                return Err(usage(format!(
                    "order {} exceeds the budget (at most {MAX_SERIES_ORDER})",
                    args.order
                )));
            }
            if args.what == SeriesKind::XOfY {
                bessel_x_of_y(args.order)
            } else {
                y_of_x(args.order)
            }
        }
        SeriesKind::Phi => {
            let genus = args
                .genus
                .ok_or_else(|| usage("--what phi requires --genus".to_string()))?;
            if genus > MAX_GENUS {
                return Err(usage(format!(
                    "genus {genus} exceeds the budget (at most {MAX_GENUS})"
                )));
            }
            if args.order > MAX_PHI_ORDER {
                return Err(usage(format!(
                    "order {} exceeds the phi budget (at most {MAX_PHI_ORDER})",
                    args.order
                )));
            }
            let table = TauTable::new();
            phi_series(&table, genus, args.order)
        }
    };
    let what = match args.what {
        SeriesKind::XOfY => "x-of-y",
        SeriesKind::YOfX => "y-of-x",
        SeriesKind::Phi => "phi",
    };
    let rendered: Vec<String> = (0..=args.order)
        .map(|k| format_rational(&series.coeff(k)))
        .collect();
    match format {
        Format::Plain => {
            for (k, value) in rendered.iter().enumerate() {
                println!("{k} {value}");
            }
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("what".to_string(), json!(what));
            obj.insert("order".to_string(), json!(args.order));
            if let Some(genus) = args.genus {
                obj.insert("genus".to_string(), json!(genus));
            }
            obj.insert("coefficients".to_string(), json!(rendered));
            println!("{}", serde_json::Value::Object(obj));
        }
        Format::Csv => {
            println!("k,coefficient");
            for (k, value) in rendered.iter().enumerate() {
                println!("{k},{value}");
            }
        }
    }
    Ok(Outcome::Success)
}

fn map_asympt_error(e: AsymptError) -> CliError {
    match e {
        AsymptError::BracketFailure { .. } => CliError::Computation(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn run_constants(args: ConstantsArgs, format: Format) -> Result<Outcome, CliError> {
    if args.digits == 0 || args.digits > MAX_DIGITS {
        return Err(usage(format!(
            "--digits must be between 1 and {MAX_DIGITS}"
        )));
    }
    if !(2..=MAX_CONST_G).contains(&args.g_max) {
        return Err(usage(format!(
            "--g-max must be between 2 and {MAX_CONST_G}"
        )));
    }
    let c = constants(args.digits, args.g_max).map_err(map_asympt_error)?;
    let mut entries: Vec<(String, String)> = vec![
        ("j0".to_string(), c.j0.to_decimal(args.digits)),
        (
            "j0_bracket_width".to_string(),
            decimal_string(&c.j0_bracket_width, 3),
        ),
        ("x0".to_string(), c.x0.to_decimal(args.digits)),
        ("y0".to_string(), c.y0.to_decimal(args.digits)),
        ("a".to_string(), c.a.to_decimal(args.digits)),
        ("b0_derived".to_string(), c.b0_derived.to_decimal(args.digits)),
        ("b0_printed".to_string(), c.b0_printed.to_decimal(args.digits)),
        ("b1".to_string(), format_rational(&c.b1)),
    ];
    for (g, b) in &c.b_g {
        entries.push((format!("b{g}"), b.to_decimal(args.digits)));
    }
    match format {
        Format::Plain => {
            for (name, value) in &entries {
                println!("{name} {value}");
            }
        }
        Format::Json => {
            let mut values = serde_json::Map::new();
            for (name, value) in &entries {
                values.insert(name.clone(), json!(value));
            }
            println!(
                "{}",
                json!({
                    "digits": args.digits,
                    "g_max": args.g_max,
                    "values": values,
                })
            );
        }
        Format::Csv => {
            println!("name,value");
            for (name, value) in &entries {
                println!("{name},{value}");
            }
        }
    }
    Ok(Outcome::Success)
}

fn run_asymptotics(args: AsymptoticsArgs, format: Format) -> Result<Outcome, CliError> {
    if args.genus > MAX_GENUS {
        return Err(usage(format!(
            "genus {} exceeds the budget (at most {MAX_GENUS})",
            args.genus
        )));
    }
    if args.n_max > MAX_VOLUME_N {
        return Err(usage(format!(
            "--n-max {} exceeds the budget (at most {MAX_VOLUME_N})",
            args.n_max
        )));
    }
    if args.digits == 0 || args.digits > MAX_DIGITS {
        return Err(usage(format!(
            "--digits must be between 1 and {MAX_DIGITS}"
        )));
    }
    let n_min = args.n_min.unwrap_or_else(|| stable_n_min(args.genus));
    let table = TauTable::new();
    let c = constants(args.digits, args.genus.max(2)).map_err(map_asympt_error)?;
    let phi = phi_series(&table, args.genus, args.n_max as usize);
    let (rows, fit) = asymptotic_diagnostics(args.genus, n_min, args.n_max, &phi, &c)
        .map_err(map_asympt_error)?;
    let (ref_name, ref_value) = match args.genus {
        0 => ("b0_derived".to_string(), c.b0_derived.to_decimal(args.digits)),
        1 => ("b1".to_string(), decimal_string(&c.b1, args.digits)),
        g => (format!("b{g}"), c.b_g[&g].to_decimal(args.digits)),
    };
    let fit_line = format!(
        "fit b={} c={} residual={} window={}..{} reference={}:{}",
        fit.b.to_decimal(args.digits),
        fit.c.to_decimal(args.digits),
        fit.residual.to_decimal(6),
        fit.fit_n_min,
        fit.fit_n_max,
        ref_name,
        ref_value
    );
    match format {
        Format::Plain => {
            for row in &rows {
                println!(
                    "{} {} {}",
                    row.n,
                    format_rational(&row.lhs),
                    row.ratio.to_decimal(args.digits)
                );
            }
            println!("{fit_line}");
        }
        Format::Json => {
            let rendered: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n,
                        "lhs": format_rational(&row.lhs),
                        "ratio": row.ratio.to_decimal(args.digits),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "genus": args.genus,
                    "digits": args.digits,
                    "rows": rendered,
                    "fit": {
                        "b": fit.b.to_decimal(args.digits),
                        "c": fit.c.to_decimal(args.digits),
                        "residual": fit.residual.to_decimal(6),
                        "n_min": fit.fit_n_min,
                        "n_max": fit.fit_n_max,
                    },
                    "reference": { "name": ref_name, "value": ref_value },
                })
            );
        }
        Format::Csv => {
            println!("n,lhs,ratio");
            for row in &rows {
                println!(
                    "{},{},{}",
                    row.n,
                    format_rational(&row.lhs),
                    row.ratio.to_decimal(args.digits)
                );
            }
            println!("# {fit_line}");
        }
    }
    Ok(Outcome::Success)
}

struct CheckResult {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn substitution_detail(report: &SubstitutionReport) -> String {
    let mut detail = format!(
        "genus={} kappa-weight<={} compared {} monomials",
        report.genus, report.max_weight, report.checked_monomials
    );
    if let Some(d) = &report.discrepancy {
        detail.push_str(&format!(
            " first mismatch at {}: lhs={} rhs={}",
            d.monomial,
            format_rational(&d.lhs),
            format_rational(&d.rhs)
        ));
    }
    detail
}

fn check_schur(table: &TauTable, genus: u32, max_weight: u32) -> Result<CheckResult, CliError> {
    if genus > 4 {
        return Err(usage(format!(
            "genus {genus} exceeds the check budget (at most 4)"
        )));
    }
    if max_weight > MAX_SCHUR_WEIGHT {
        return Err(usage(format!(
            "--max-weight {max_weight} exceeds the budget (at most {MAX_SCHUR_WEIGHT})"
        )));
    }
    let report = verify_schur_substitution(table, genus, max_weight).map_err(|e| match e {
        KappaError::WindowTooSmall { .. } => CliError::Usage(e.to_string()),
        other => CliError::Computation(other.to_string()),
    })?;
    Ok(CheckResult {
        name: "schur-substitution",
        pass: report.pass,
        detail: substitution_detail(&report),
    })
}

fn check_classes(table: &TauTable, genus: u32, max_weight: u32) -> Result<CheckResult, CliError> {
    if genus > 3 {
        return Err(usage(format!(
            "genus {genus} exceeds the check budget (at most 3)"
        )));
    }
    if max_weight > MAX_CLASS_WEIGHT {
        return Err(usage(format!(
            "--max-weight {max_weight} exceeds the budget (at most {MAX_CLASS_WEIGHT})"
        )));
    }
    let report =
        verify_class_substitution(table, genus, max_weight).map_err(|e| CliError::Computation(e.to_string()))?;
    Ok(CheckResult {
        name: "class-substitution",
        pass: report.pass,
        detail: substitution_detail(&report),
    })
}

fn check_basis(table: &TauTable, genus: u32, n: u32) -> Result<CheckResult, CliError> {
    if !stable(genus, n) {
        return Err(usage(format!(
            "({genus},{n}) is unstable: 2g-2+n must be positive"
        )));
    }
    if dimension(genus, n) > MAX_BASIS_DIM {
        return Err(usage(format!(
            "dimension 3g-3+n = {} exceeds the budget (at most {MAX_BASIS_DIM})",
            dimension(genus, n)
        )));
    }
    match verify_basis_decomposition(table, genus, n) {
        Ok(report) => {
            let mut detail = format!(
                "genus={} n={} coefficients={} reading: {}",
                report.genus,
                report.n,
                report.expected.len(),
                report.reading
            );
            if let Some(d) = &report.discrepancy {
                detail.push_str(&format!(
                    " first mismatch at {}: solved={} expected={}",
                    d.monomial,
                    format_rational(&d.lhs),
                    format_rational(&d.rhs)
                ));
            }
            Ok(CheckResult {
                name: "basis-decomposition",
                pass: report.pass,
                detail,
            })
        }
        Err(GenexpError::SingularBasis { genus, n, weight }) => Ok(CheckResult {
            name: "basis-decomposition",
            pass: false,
            detail: format!(
                "genus={genus} n={n} the genus-0 products do not span weight {weight}"
            ),
        }),
        Err(e) => Err(CliError::Computation(e.to_string())),
    }
}

fn check_volumes(table: &TauTable, genus: u32, n_max: u32) -> Result<CheckResult, CliError> {
    if genus > MAX_GENUS {
        return Err(usage(format!(
            "genus {genus} exceeds the budget (at most {MAX_GENUS})"
        )));
    }
    if dimension(genus, n_max) > MAX_EXACT_DIM {
        return Err(usage(format!(
            "dimension 3g-3+n = {} exceeds the budget (at most {MAX_EXACT_DIM})",
            dimension(genus, n_max)
        )));
    }
    let n_min = stable_n_min(genus);
    if n_max < n_min {
        return Err(usage(format!(
            "no stable n at genus {genus} is <= {n_max} (smallest is {n_min})"
        )));
    }
    let fast = volumes_fast(table, genus, n_max);
    let mut count = 0usize;
    for n in n_min..=n_max {
        let transform = wp_volume(table, genus, n);
        let series = fast.value(genus, n).expect("stable n in range");
        if &transform != series {
            return Ok(CheckResult {
                name: "pipeline-equivalence",
                pass: false,
                detail: format!(
                    "genus={genus} mismatch at n={n}: kappa={} genexp={}",
                    format_rational(&transform),
                    format_rational(series)
                ),
            });
        }
        count += 1;
    }
    Ok(CheckResult {
        name: "pipeline-equivalence",
        pass: true,
        detail: format!("genus={genus} stable n<={n_max}: {count} values agree exactly"),
    })
}

fn check_painleve(table: &TauTable, g_max: u32) -> Result<CheckResult, CliError> {
    if !(2..=MAX_PAINLEVE_G).contains(&g_max) {
        return Err(usage(format!(
            "--g-max must be between 2 and {MAX_PAINLEVE_G}"
        )));
    }
    for g in 2..=g_max {
        let from_recursion = tau2_power_from_b(g);
        let direct = table.bracket(g, &vec![2; (3 * g - 3) as usize]);
        if from_recursion != direct {
            return Ok(CheckResult {
                name: "painleve-tower",
                pass: false,
                detail: format!(
                    "genus={g} mismatch: recursion={} bracket={}",
                    format_rational(&from_recursion),
                    format_rational(&direct)
                ),
            });
        }
    }
    Ok(CheckResult {
        name: "painleve-tower",
        pass: true,
        detail: format!("towers for genus 2..={g_max} match the recursion"),
    })
}

fn run_verify(args: VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    let table = TauTable::new();
    let results: Vec<CheckResult> = match args.check {
        Check::Schur { genus, max_weight } => vec![check_schur(&table, genus, max_weight)?],
        Check::Classes { genus, max_weight } => vec![check_classes(&table, genus, max_weight)?],
        Check::Basis { genus, n } => vec![check_basis(&table, genus, n)?],
        Check::Volumes { genus, n_max } => vec![check_volumes(&table, genus, n_max)?],
        Check::Painleve { g_max } => vec![check_painleve(&table, g_max)?],
        Check::All => {
            let mut out = Vec::new();
            out.push(check_volumes(&table, 0, 8)?);
            out.push(check_volumes(&table, 1, 6)?);
            out.push(check_volumes(&table, 2, 3)?);
            out.push(check_schur(&table, 0, 6)?);
            out.push(check_schur(&table, 1, 4)?);
            out.push(check_schur(&table, 2, 4)?);
            out.push(check_classes(&table, 0, 3)?);
            out.push(check_classes(&table, 1, 2)?);
            out.push(check_basis(&table, 1, 1)?);
            out.push(check_basis(&table, 1, 2)?);
            out.push(check_basis(&table, 2, 0)?);
            out.push(check_painleve(&table, 3)?);
            out
        }
    };
    let passed = results.iter().filter(|r| r.pass).count();
    match format {
        Format::Plain => {
            for r in &results {
                println!("{} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            println!("passed {passed}/{} checks", results.len());
        }
        Format::Json => {
            let rendered: Vec<serde_json::Value> = results
                .iter()
                .map(|r| json!({ "name": r.name, "pass": r.pass, "detail": r.detail }))
                .collect();
            println!(
                "{}",
                json!({ "pass": passed == results.len(), "checks": rendered })
            );
        }
        Format::Csv => {
            println!("check,pass,detail");
            for r in &results {
                println!(
                    "{},{},{}",
                    r.name,
                    if r.pass { "yes" } else { "no" },
                    csv_field(&r.detail)
                );
            }
        }
    }
    if passed == results.len() {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::IdentityFailed)
    }
}
