//! The `rankmetric` command line.
//!
//! Exit codes: 0 on success, 2 for bad input (unparsable files, invalid
//! parameters), 3 when a computation exceeds the enumeration budget, 1 when
//! verification finds a counterexample or an internal check fails.

pub mod verify;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use rankmetric::code::io::{parse_code, write_code};
use rankmetric::constructions::{build_column_anticode, build_mrd_with_tower, build_row_anticode};
use rankmetric::covering::{covering_report, CoveringReport};
use rankmetric::density::{density_report, DensityReport, Enclosure, CENSUS_BUDGET};
use rankmetric::macwilliams::transform;
use rankmetric::field::ExtensionTower;
use rankmetric::{Budget, Elem, Error, Field, RankDistribution, RankMetricCode, Subspace};

#[derive(Parser, Debug)]
#[command(name = "rankmetric", version, about = "Exact analysis of linear rank-metric codes")]
pub struct Cli {
    /// Machine-readable output; every number is a decimal string.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest number of matrices a single enumeration may visit (default
    /// 2^24), and of subspaces a density census may visit (default 10^6).
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Worker threads for enumeration. Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parameters, distributions, defects and covering bounds of a code file.
    Analyze { file: PathBuf },
    /// Write an MRD code built from linearized polynomials.
    MrdGen {
        q: u64,
        n: usize,
        m: usize,
        d: usize,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the optimal anticode of matrices with column (or row) space in U.
    AnticodeGen {
        q: u64,
        n: usize,
        m: usize,
        /// A spanning vector of U as comma-separated field elements; repeatable.
        #[arg(long = "vector")]
        vectors: Vec<String>,
        /// Use row spaces instead of column spaces (needs n = m).
        #[arg(long)]
        rows: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact covering radius (when enumerable) and its bounds.
    Covrad { file: PathBuf },
    /// MacWilliams transform of a rank distribution W_0 .. W_n.
    Macwilliams {
        q: u64,
        n: usize,
        m: usize,
        #[arg(required = true)]
        counts: Vec<String>,
    },
    /// Density of MRD codes: bounds, limits and, with --exact, a census.
    Density {
        q: u64,
        n: usize,
        m: usize,
        d: usize,
        #[arg(long)]
        exact: bool,
        /// Factors kept from each infinite product.
        #[arg(long, default_value_t = 30)]
        truncation: usize,
    },
    /// Cross-check closed forms against brute force.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Level::Desk)]
        level: verify::Level,
        /// Where counterexample code files are written.
        #[arg(long, default_value = "rankmetric-counterexamples")]
        dump_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::CensusTooLarge { .. } => 3,
            Error::Invariant(_) => 1,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn opt_num(x: Option<impl ToString>) -> Value {
    x.map_or(Value::Null, num)
}

fn dist_json(w: &RankDistribution) -> Value {
    Value::Array(w.counts().iter().map(num).collect())
}

fn read_code(path: &Path) -> CliResult<RankMetricCode> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_code(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn covering_json(r: &CoveringReport) -> Value {
    json!({
        "exact": opt_num(r.exact),
        "lower_bound": num(r.lower_bound),
        "dual_distance_bound": opt_num(r.dual_distance_bound),
        "external_distance_bound": num(r.external_distance_bound),
        "initial_set_bound": opt_num(r.initial_set_bound),
    })
}

fn subspace_rows(field: &Field, s: &Subspace) -> Vec<Vec<String>> {
    s.basis()
        .iter()
        .map(|v| v.iter().map(|&x| rankmetric::Matrix::format_entry(field, x)).collect())
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(code: &RankMetricCode, budget: Budget, json_out: bool, out: &mut dyn Write) -> CliResult<()> {
    let field = code.field();
    let q = u64::from(field.order());
    let (n, m) = (code.n(), code.m());
    let w = code.rank_distribution(budget)?;
    let wd = transform(&w, n, m, q)?;
    let d = w.minimum_distance();
    let maxrk = w.maximum_rank();
    let singleton = code.singleton_defect(budget)?;
    let anticode = code.anticode_defect(budget)?;
    let witness = code.optimal_anticode_witness(budget)?;
    let initial = if code.is_zero() { None } else { Some(code.initial_set()?) };
    let cov = covering_report(code, budget)?;
    if json_out {
        let v = json!({
            "field": field.spec().to_string(),
            "q": num(q),
            "n": num(n),
            "m": num(m),
            "dimension": num(code.dim()),
            "minimum_distance": num(d),
            "maximum_rank": num(maxrk),
            "rank_distribution": dist_json(&w),
            "dual_rank_distribution": dist_json(&wd),
            "singleton_defect": num(singleton),
            "anticode_defect": num(anticode),
            "mrd": singleton == 0,
            "optimal_anticode": anticode == 0,
            "anticode_witness": witness.as_ref().map(|w| json!({
                "side": w.side.to_string(),
                "basis": subspace_rows(field, &w.space),
            })),
            "initial_set": initial.as_ref().map(|s| s.iter().map(|(i, j)| vec![num(i + 1), num(j + 1)]).collect::<Vec<_>>()),
            "covering": covering_json(&cov),
        });
        return emit_json(out, &v);
    }
    let mut s = String::new();
    let _ = writeln!(s, "field              {}", field.spec());
    let _ = writeln!(s, "shape              {n} x {m}");
    let _ = writeln!(s, "dimension          {}", code.dim());
    let _ = writeln!(s, "minimum distance   {d}");
    let _ = writeln!(s, "maximum rank       {maxrk}");
    let _ = writeln!(s, "W(C)               {w}");
    let _ = writeln!(s, "W(C⊥)              {wd}");
    let _ = writeln!(s, "Singleton defect   {singleton}");
    let _ = writeln!(s, "anticode defect    {anticode}");
    let _ = writeln!(s, "MRD: {}, d = {d}", yes_no(singleton == 0));
    match &witness {
        Some(w) => {
            let _ = writeln!(s, "optimal anticode: yes, {} space {:?}", w.side, subspace_rows(field, &w.space));
        }
        None => {
            let _ = writeln!(s, "optimal anticode: no");
        }
    }
    let _ = writeln!(s, "in(C)              {}", initial.map_or_else(|| "-".to_string(), |i| i.to_string()));
    let _ = writeln!(s, "{cov}");
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn write_or_print(text: &str, output: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn parse_vector(field: &Field, s: &str, len: usize) -> CliResult<Vec<Elem>> {
    let v = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .ok()
                .and_then(|x| field.try_elem(x))
                .ok_or_else(|| CliError::input(format!("`{t}` is not an element of {field}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if v.len() != len {
        return Err(CliError::input(format!("vector `{s}` has {} entries, expected {len}", v.len())));
    }
    Ok(v)
}

fn enclosure_json(e: &Enclosure) -> Value {
    json!({ "lo": num(&e.lo), "hi": num(&e.hi) })
}

fn density_json(r: &DensityReport) -> Value {
    let a = &r.asymptotic_q;
    json!({
        "q": num(r.q),
        "n": num(r.n),
        "m": num(r.m),
        "d": num(r.d),
        "k": num(r.k),
        "exact": opt_num(r.exact.as_ref()),
        "census": r.census.as_ref().map(|c| json!({
            "total": num(c.total),
            "exact_distance": num(c.exact_distance),
            "ball_avoiding": num(c.ball_avoiding),
            "deeper": num(c.deeper),
            "common_complements": num(c.common_complements),
        })),
        "bound_cc": num(&r.bound_cc),
        "bound_ball": num(&r.bound_ball),
        "asymptotic_q": {
            "kind": a.kind.to_string(),
            "limit": num(&a.limit),
            "decay_exponent": num(a.decay_exponent),
            "spectrum_free_bound": num(&a.spectrum_free_bound),
            "partition_balanced_bound": opt_num(a.partition_balanced_bound.as_ref()),
        },
        "asymptotic_m": r.asymptotic_m.as_ref().map(|b| json!({
            "truncation": num(b.truncation),
            "spectrum_free": enclosure_json(&b.spectrum_free),
            "common_complement": enclosure_json(&b.common_complement),
            "partition_balanced": num(&b.partition_balanced),
        })),
    })
}

/// Runs one parsed command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let budget = Budget::new(cli.budget.unwrap_or(Budget::DEFAULT));
    match cli.command {
        Command::Analyze { file } => analyze(&read_code(&file)?, budget, cli.json, out),
        Command::MrdGen { q, n, m, d, output } => {
            let field = Field::with_order(q)?;
            let tower = ExtensionTower::new(&field, m)?;
            let code = build_mrd_with_tower(&tower, n, d)?;
            let enc = |xs: &[Elem]| xs.iter().map(|x| x.index().to_string()).collect::<Vec<_>>().join(" ");
            let header = [
                format!("MRD code, q = {q}, n = {n}, m = {m}, d = {d}"),
                format!("tower {}", tower.top()),
                format!("basis {}", enc(tower.basis())),
                format!("dual basis {}", enc(tower.dual_basis())),
                "tower elements are written as the integer c_0 + c_1 p + ... of their residue c_0 + c_1 x + ...".to_string(),
            ];
            let text = write_code(&code, &header);
            write_or_print(&text, output.as_deref(), out)
        }
        Command::AnticodeGen {
            q,
            n,
            m,
            vectors,
            rows,
            output,
        } => {
            let field = Field::with_order(q)?;
            let len = if rows { m } else { n };
            let vs = vectors.iter().map(|s| parse_vector(&field, s, len)).collect::<CliResult<Vec<_>>>()?;
            let u = Subspace::from_spanning(&field, len, &vs);
            let (code, side) = if rows {
                if n != m {
                    return Err(Error::RequiresSquare.into());
                }
                (build_row_anticode(&u, n)?, "row")
            } else {
                (build_column_anticode(&u, m)?, "column")
            };
            let text = write_code(&code, &[format!("optimal anticode, {side} spaces in a {}-dimensional U", u.dim())]);
            write_or_print(&text, output.as_deref(), out)
        }
        Command::Covrad { file } => {
            let code = read_code(&file)?;
            let r = covering_report(&code, budget)?;
            if cli.json {
                emit_json(out, &covering_json(&r))
            } else {
                Ok(writeln!(out, "{r}")?)
            }
        }
        Command::Macwilliams { q, n, m, counts } => {
            let counts = counts
                .iter()
                .map(|c| c.parse::<BigUint>().map_err(|_| CliError::input(format!("`{c}` is not a count"))))
                .collect::<CliResult<Vec<_>>>()?;
            let wd = transform(&RankDistribution::new(counts), n, m, q)?;
            if cli.json {
                emit_json(out, &json!({ "dual_rank_distribution": dist_json(&wd) }))
            } else {
                Ok(writeln!(out, "{wd}")?)
            }
        }
        Command::Density {
            q,
            n,
            m,
            d,
            exact,
            truncation,
        } => {
            let census_budget = exact.then_some(cli.budget.unwrap_or(CENSUS_BUDGET));
            let r = density_report(q, n, m, d, census_budget, truncation)?;
            if cli.json {
                emit_json(out, &density_json(&r))
            } else {
                Ok(writeln!(out, "{r}")?)
            }
        }
        Command::Verify { level, dump_dir, seed } => {
            let opts = verify::Options {
                level,
                seed,
                dump_dir,
                budget,
                transform,
            };
            let report = verify::run(&opts);
            if cli.json {
                emit_json(out, &report)?;
            } else {
                write!(out, "{report}")?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError {
                    code: 1,
                    message: format!("verification failed: {} counterexample(s)", report.failure_count()),
                })
            }
        }
    }
}
