//! Batch front-end: every experiment as a subcommand with config files,
//! deterministic seeds, and CSV/JSON emission.
//!
//! Exit codes: 0 success, 2 validation, 3 numerical guard (bandwidth or
//! rejection envelope), 4 I/O.

mod weights;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::json;

use weyl_lab::clt::{
    complex_moments_for, half_gaussian_moment, simulate_family, FamilyConfig, SamplingMode,
    TestFunction,
};
use weyl_lab::dims::{g2_leading_term, siegel_leading_term};
use weyl_lab::measures::{character_moments, gram_matrix};
use weyl_lab::root_systems::build_root_system;
use weyl_lab::sympow::{h_polynomial, sympow_clt};
use weyl_lab::{CharExpansion, GroupType, MeasureDensity, RootSystem, TorusQuadrature, Weight};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "weyl-lab", version, about = "Character-theory experiments on compact tori")]
struct Cli {
    /// TOML config file with one table per subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (written atomically); stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Cap the worker-thread count; never changes the results.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gram matrix of irreducible characters under the Sato-Tate measure.
    Gram {
        #[arg(long)]
        group: Option<String>,
        /// Comma-separated highest weights, e.g. "e1,e1+e2,2e1,0".
        #[arg(long)]
        weights: Option<String>,
    },
    /// Tabulate a normalized measure density on a torus grid.
    Density {
        #[arg(long)]
        group: Option<String>,
        /// "st" (Sato-Tate) or "plancherel".
        #[arg(long)]
        measure: Option<String>,
        /// Prime p for the Plancherel measure.
        #[arg(long)]
        p: Option<u64>,
        /// Odd number of grid nodes per dimension.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Exact Sato-Tate moments of one irreducible character.
    Moments {
        #[arg(long)]
        group: Option<String>,
        /// Highest weight, e.g. "e1" or "short-fund".
        #[arg(long)]
        weight: Option<String>,
    },
    /// Monte Carlo CLT experiment for normalized Hecke-sum statistics.
    Clt {
        #[arg(long)]
        group: Option<String>,
        /// Test-function weights; m weights get coefficients 1/sqrt(m).
        #[arg(long)]
        hp: Option<String>,
        /// Prime cutoff.
        #[arg(long)]
        x: Option<u64>,
        /// Family size.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// "sato-tate" or "plancherel".
        #[arg(long)]
        sampling: Option<String>,
    },
    /// Complex-moment experiment for non-self-dual test functions.
    ComplexMoments {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        hp: Option<String>,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated moment orders, default "1,2,3,4".
        #[arg(long)]
        orders: Option<String>,
    },
    /// Symmetric-power toolkit: CLT for H_u statistics or an H-table.
    Sympow {
        /// Symmetric-power degree u for the CLT run.
        #[arg(long)]
        u: Option<u32>,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the integer coefficients of H_0..H_U instead of a CLT run.
        #[arg(long, value_name = "U")]
        h_table: Option<u32>,
    },
    /// Exact leading-term dimension tables.
    Dims {
        /// "spN" (N even, Siegel genus N/2) or "g2".
        #[arg(long)]
        group: Option<String>,
        /// Inclusive weight range "A..B".
        #[arg(long)]
        k_range: Option<String>,
        /// Level for the Siegel table (must be > 2).
        #[arg(long)]
        level: Option<u64>,
        /// Index ratio "num/den" for the G2 table (default 1).
        #[arg(long)]
        index_ratio: Option<String>,
    },
    /// Dump the exact root-system data as JSON.
    Roots {
        #[arg(long)]
        group: Option<String>,
    },
}

/// Process outcome carrying the exit code.
struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure {
        code,
        msg: msg.into(),
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    fail(2, msg)
}

fn core_err(e: weyl_lab::Error) -> Failure {
    use weyl_lab::Error::*;
    let code = match e {
        Bandwidth { .. } | EnvelopeViolation { .. } => 3,
        _ => 2,
    };
    fail(code, e.to_string())
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(cli) {
        eprintln!("error: {}", f.msg);
        std::process::exit(f.code);
    }
}

/// One table of the config file, already narrowed to the subcommand.
#[derive(Default)]
struct Section(toml::Table);

impl Section {
    fn load(path: &Option<PathBuf>, name: &str) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| fail(4, format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| invalid(format!("config {}: {e}", path.display())))?;
        match table.get(name) {
            None => Ok(Self::default()),
            Some(toml::Value::Table(t)) => Ok(Section(t.clone())),
            Some(_) => Err(invalid(format!("config key '{name}' must be a table"))),
        }
    }

    fn str_or(&self, flag: Option<String>, key: &str) -> Result<Option<String>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(invalid(format!("config '{key}' must be a string, got {v}"))),
        }
    }

    fn u64_or(&self, flag: Option<u64>, key: &str) -> Result<Option<u64>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(v) => Err(invalid(format!(
                "config '{key}' must be a nonnegative integer, got {v}"
            ))),
        }
    }
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, Failure> {
    v.ok_or_else(|| invalid(format!("missing required parameter '{what}'")))
}

fn parse_group(name: &str) -> Result<RootSystem, Failure> {
    let t = GroupType::parse(name).map_err(core_err)?;
    build_root_system(t).map_err(core_err)
}

fn resolve_format(requested: &Option<String>, default: &str) -> Result<String, Failure> {
    let f = requested.clone().unwrap_or_else(|| default.to_string());
    match f.as_str() {
        "csv" | "json" => Ok(f),
        other => Err(invalid(format!("unknown format '{other}' (csv or json)"))),
    }
}

/// Canonical reproduction line: the resolved invocation, minus `--output`
/// and `--threads` so that regenerated artifacts are byte-identical.
fn repro_line(cmd: &str, args: &[(&str, String)], format: &str) -> String {
    let mut s = format!("weyl-lab {cmd}");
    for (k, v) in args {
        let _ = write!(s, " --{k} {v}");
    }
    let _ = write!(s, " --format {format} | version {VERSION}");
    s
}

/// Atomic write: temp file in the target directory, then rename.
fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match output {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
            let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
                .map_err(|e| fail(4, format!("cannot create temp file: {e}")))?;
            tmp.write_all(content.as_bytes())
                .map_err(|e| fail(4, format!("write failed: {e}")))?;
            tmp.persist(path)
                .map_err(|e| fail(4, format!("cannot persist {}: {e}", path.display())))?;
            Ok(())
        }
    }
}

fn csv_header(repro: &str, extra: &[String]) -> String {
    let mut s = format!("# {repro}\n");
    for line in extra {
        let _ = writeln!(s, "# {line}");
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(invalid("--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| fail(2, format!("cannot configure thread pool: {e}")))?;
    }
    let Cli {
        config,
        output,
        format,
        cmd,
        ..
    } = cli;
    match cmd {
        Cmd::Gram { group, weights } => {
            let sec = Section::load(&config, "gram")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            let weights = require(sec.str_or(weights, "weights")?, "weights")?;
            cmd_gram(&group, &weights, &output, &format)
        }
        Cmd::Density {
            group,
            measure,
            p,
            grid,
        } => {
            let sec = Section::load(&config, "density")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            let measure = sec.str_or(measure, "measure")?.unwrap_or_else(|| "st".into());
            let p = sec.u64_or(p, "p")?;
            let grid = sec
                .u64_or(grid.map(|g| g as u64), "grid")?
                .unwrap_or(101) as usize;
            cmd_density(&group, &measure, p, grid, &output, &format)
        }
        Cmd::Moments { group, weight } => {
            let sec = Section::load(&config, "moments")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            let weight = require(sec.str_or(weight, "weight")?, "weight")?;
            cmd_moments(&group, &weight, &output, &format)
        }
        Cmd::Clt {
            group,
            hp,
            x,
            n,
            seed,
            sampling,
        } => {
            let sec = Section::load(&config, "clt")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            let hp = require(sec.str_or(hp, "hp")?, "hp")?;
            let x = require(sec.u64_or(x, "x")?, "x")?;
            let n = require(sec.u64_or(n.map(|v| v as u64), "n")?, "n")? as usize;
            let seed = sec.u64_or(seed, "seed")?.unwrap_or(0);
            let sampling = sec
                .str_or(sampling, "sampling")?
                .unwrap_or_else(|| "sato-tate".into());
            cmd_clt(&group, &hp, x, n, seed, &sampling, &output, &format)
        }
        Cmd::ComplexMoments {
            group,
            hp,
            x,
            n,
            seed,
            orders,
        } => {
            let sec = Section::load(&config, "complex-moments")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            let hp = require(sec.str_or(hp, "hp")?, "hp")?;
            let x = require(sec.u64_or(x, "x")?, "x")?;
            let n = require(sec.u64_or(n.map(|v| v as u64), "n")?, "n")? as usize;
            let seed = sec.u64_or(seed, "seed")?.unwrap_or(0);
            let orders = sec
                .str_or(orders, "orders")?
                .unwrap_or_else(|| "1,2,3,4".into());
            cmd_complex_moments(&group, &hp, x, n, seed, &orders, &output, &format)
        }
        Cmd::Sympow {
            u,
            x,
            n,
            seed,
            h_table,
        } => {
            let sec = Section::load(&config, "sympow")?;
            let h_table = sec.u64_or(h_table.map(u64::from), "h-table")?;
            if let Some(umax) = h_table {
                return cmd_h_table(umax as u32, &output, &format);
            }
            let u = require(sec.u64_or(u.map(u64::from), "u")?, "u")? as u32;
            let x = require(sec.u64_or(x, "x")?, "x")?;
            let n = require(sec.u64_or(n.map(|v| v as u64), "n")?, "n")? as usize;
            let seed = sec.u64_or(seed, "seed")?.unwrap_or(0);
            cmd_sympow(u, x, n, seed, &output, &format)
        }
        Cmd::Dims {
            group,
            k_range,
            level,
            index_ratio,
        } => {
            let sec = Section::load(&config, "dims")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            let k_range = require(sec.str_or(k_range, "k-range")?, "k-range")?;
            let level = sec.u64_or(level, "level")?;
            let index_ratio = sec
                .str_or(index_ratio, "index-ratio")?
                .unwrap_or_else(|| "1".into());
            cmd_dims(&group, &k_range, level, &index_ratio, &output, &format)
        }
        Cmd::Roots { group } => {
            let sec = Section::load(&config, "roots")?;
            let group = require(sec.str_or(group, "group")?, "group")?;
            cmd_roots(&group, &output, &format)
        }
    }
}

fn weight_label(w: &Weight) -> String {
    let c2: Vec<String> = w.coords2().iter().map(|c| c.to_string()).collect();
    format!("[{}]/2", c2.join(" "))
}

fn cmd_gram(
    group: &str,
    weights: &str,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let rs = parse_group(group)?;
    let lams = weights::parse_weight_list(&rs, weights).map_err(|e| invalid(e.to_string()))?;
    let m = gram_matrix::<f64>(&rs, &lams).map_err(core_err)?;
    let fmt = resolve_format(format, "csv")?;
    let repro = repro_line(
        "gram",
        &[("group", group.into()), ("weights", weights.into())],
        &fmt,
    );
    let content = if fmt == "json" {
        let matrix: Vec<Vec<[f64; 2]>> = m
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        to_json_string(&json!({
            "repro": repro,
            "group": group,
            "weights": lams.iter().map(weight_label).collect::<Vec<_>>(),
            "matrix": matrix,
        }))
    } else {
        let meta: Vec<String> = lams
            .iter()
            .enumerate()
            .map(|(i, w)| format!("weight {i}: {}", weight_label(w)))
            .collect();
        let mut s = csv_header(&repro, &meta);
        s.push_str("row,col,re,im\n");
        for (i, row) in m.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let _ = writeln!(s, "{i},{j},{},{}", z.re, z.im);
            }
        }
        s
    };
    emit(output, &content)
}

fn cmd_density(
    group: &str,
    measure: &str,
    p: Option<u64>,
    grid: usize,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let rs = parse_group(group)?;
    let (density, mut args) = match measure {
        "st" => (
            MeasureDensity::sato_tate(&rs).map_err(core_err)?,
            vec![("group", group.to_string()), ("measure", "st".into())],
        ),
        "plancherel" => {
            let p = require(p, "p")?;
            (
                MeasureDensity::plancherel(&rs, p).map_err(core_err)?,
                vec![
                    ("group", group.to_string()),
                    ("measure", "plancherel".into()),
                    ("p", p.to_string()),
                ],
            )
        }
        other => return Err(invalid(format!("unknown measure '{other}' (st or plancherel)"))),
    };
    let q = TorusQuadrature::new(rs.rank(), grid).map_err(core_err)?;
    if q.node_count() > 2_000_000 {
        return Err(invalid(format!(
            "grid {grid}^{} is too large to tabulate",
            rs.rank()
        )));
    }
    args.push(("grid", grid.to_string()));
    let fmt = resolve_format(format, "csv")?;
    let repro = repro_line("density", &args, &fmt);
    let content = if fmt == "json" {
        let rows: Vec<Vec<f64>> = q
            .nodes()
            .map(|t| {
                let mut row: Vec<f64> = t.thetas().to_vec();
                row.push(density.density(&rs, &t));
                row
            })
            .collect();
        to_json_string(&json!({
            "repro": repro,
            "columns": theta_columns(rs.rank()),
            "rows": rows,
        }))
    } else {
        let mut s = csv_header(&repro, &[]);
        s.push_str(&theta_columns(rs.rank()).join(","));
        s.push('\n');
        for t in q.nodes() {
            for th in t.thetas() {
                let _ = write!(s, "{th},");
            }
            let _ = writeln!(s, "{}", density.density(&rs, &t));
        }
        s
    };
    emit(output, &content)
}

fn theta_columns(rank: usize) -> Vec<String> {
    let mut cols: Vec<String> = (1..=rank).map(|i| format!("theta_{i}")).collect();
    cols.push("density".into());
    cols
}

fn cmd_moments(
    group: &str,
    weight: &str,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let rs = parse_group(group)?;
    let lam = weights::parse_weight(&rs, weight).map_err(|e| invalid(e.to_string()))?;
    let e = CharExpansion::single(&rs, lam).map_err(core_err)?;
    let m = character_moments(&rs, &e).map_err(core_err)?;
    let fmt = resolve_format(format, "json")?;
    let repro = repro_line(
        "moments",
        &[("group", group.into()), ("weight", weight.into())],
        &fmt,
    );
    let pairs = [
        ("first_re", m.first.re),
        ("first_im", m.first.im),
        ("second", m.second),
        ("re_sq", m.re_sq),
        ("im_sq", m.im_sq),
        ("square_no_conj_re", m.square_no_conj.re),
        ("square_no_conj_im", m.square_no_conj.im),
    ];
    let content = if fmt == "json" {
        let mut obj = serde_json::Map::new();
        obj.insert("repro".into(), repro.into());
        for (k, v) in pairs {
            obj.insert(k.into(), json!(v));
        }
        to_json_string(&serde_json::Value::Object(obj))
    } else {
        let mut s = csv_header(&repro, &[]);
        s.push_str("quantity,value\n");
        for (k, v) in pairs {
            let _ = writeln!(s, "{k},{v}");
        }
        s
    };
    emit(output, &content)
}

/// Equal-weight unit-variance test function over a comma-separated weight
/// list: m weights get coefficients 1/sqrt(m).
fn build_test_fn(
    rs: &RootSystem,
    hp: &str,
    self_dual: bool,
) -> Result<TestFunction, Failure> {
    let lams = weights::parse_weight_list(rs, hp).map_err(|e| invalid(e.to_string()))?;
    let c = 1.0 / (lams.len() as f64).sqrt();
    let expansion =
        CharExpansion::new(rs, lams.into_iter().map(|l| (l, c))).map_err(core_err)?;
    if self_dual {
        TestFunction::self_dual(rs, expansion).map_err(core_err)
    } else {
        TestFunction::complex(rs, expansion).map_err(core_err)
    }
}

fn parse_sampling(s: &str) -> Result<SamplingMode, Failure> {
    match s {
        "sato-tate" => Ok(SamplingMode::SatoTateOnly),
        "plancherel" => Ok(SamplingMode::PlancherelPerPrime),
        other => Err(invalid(format!(
            "unknown sampling mode '{other}' (sato-tate or plancherel)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_clt(
    group: &str,
    hp: &str,
    x: u64,
    n: usize,
    seed: u64,
    sampling: &str,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let rs = parse_group(group)?;
    let cfg = FamilyConfig {
        group: rs.group_type(),
        test_fn: build_test_fn(&rs, hp, true)?,
        x,
        family_size: n,
        sampling: parse_sampling(sampling)?,
        seed,
    };
    let report = simulate_family(&rs, &cfg).map_err(core_err)?;
    let fmt = resolve_format(format, "json")?;
    let repro = repro_line(
        "clt",
        &[
            ("group", group.into()),
            ("hp", hp.into()),
            ("x", x.to_string()),
            ("n", n.to_string()),
            ("seed", seed.to_string()),
            ("sampling", sampling.into()),
        ],
        &fmt,
    );
    emit_report(&report, &repro, &fmt, output)
}

fn emit_report(
    report: &weyl_lab::clt::CLTReport,
    repro: &str,
    fmt: &str,
    output: &Option<PathBuf>,
) -> Result<(), Failure> {
    let content = if fmt == "json" {
        to_json_string(&json!({ "repro": repro, "report": report }))
    } else {
        let mut s = csv_header(repro, &[]);
        s.push_str("key,value\n");
        let scalars = [
            ("mean", report.mean),
            ("variance", report.variance),
            ("skewness", report.skewness),
            ("excess_kurtosis", report.excess_kurtosis),
            ("ks", report.ks),
        ];
        for (k, v) in scalars {
            let _ = writeln!(s, "{k},{v}");
        }
        for (i, v) in report.standardized_moments.iter().enumerate() {
            let _ = writeln!(s, "standardized_moment_{},{v}", i + 1);
        }
        for (i, v) in report.raw_moments.iter().enumerate() {
            let _ = writeln!(s, "raw_moment_{},{v}", i + 1);
        }
        let _ = writeln!(s, "prime_count,{}", report.prime_count);
        let _ = writeln!(s, "family_size,{}", report.family_size);
        let _ = writeln!(s, "seed,{}", report.seed);
        for (i, e) in report.histogram.edges.iter().enumerate() {
            let _ = writeln!(s, "hist_edge_{i},{e}");
        }
        for (i, c) in report.histogram.counts.iter().enumerate() {
            let _ = writeln!(s, "hist_count_{i},{c}");
        }
        s
    };
    emit(output, &content)
}

#[allow(clippy::too_many_arguments)]
fn cmd_complex_moments(
    group: &str,
    hp: &str,
    x: u64,
    n: usize,
    seed: u64,
    orders: &str,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let rs = parse_group(group)?;
    let order_list: Vec<u32> = orders
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| invalid(format!("bad moment order '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    let cfg = FamilyConfig {
        group: rs.group_type(),
        test_fn: build_test_fn(&rs, hp, false)?,
        x,
        family_size: n,
        sampling: SamplingMode::SatoTateOnly,
        seed,
    };
    let moments = complex_moments_for(&rs, &cfg, &order_list).map_err(core_err)?;
    let fmt = resolve_format(format, "json")?;
    let repro = repro_line(
        "complex-moments",
        &[
            ("group", group.into()),
            ("hp", hp.into()),
            ("x", x.to_string()),
            ("n", n.to_string()),
            ("seed", seed.to_string()),
            ("orders", orders.into()),
        ],
        &fmt,
    );
    let content = if fmt == "json" {
        let entries: Vec<serde_json::Value> = moments
            .iter()
            .map(|m| {
                json!({
                    "order": m.order,
                    "raw_re": m.raw_re,
                    "raw_im": m.raw_im,
                    "re_moment": m.re_moment,
                    "im_moment": m.im_moment,
                    "gaussian_marginal": half_gaussian_moment(m.order),
                })
            })
            .collect();
        to_json_string(&json!({ "repro": repro, "moments": entries }))
    } else {
        let mut s = csv_header(&repro, &[]);
        s.push_str(
            "order,raw_re,raw_re_se,raw_im,raw_im_se,re_moment,re_moment_se,\
             im_moment,im_moment_se,gaussian_marginal\n",
        );
        for m in &moments {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                m.order,
                m.raw_re.value,
                m.raw_re.std_error,
                m.raw_im.value,
                m.raw_im.std_error,
                m.re_moment.value,
                m.re_moment.std_error,
                m.im_moment.value,
                m.im_moment.std_error,
                half_gaussian_moment(m.order),
            );
        }
        s
    };
    emit(output, &content)
}

fn cmd_sympow(
    u: u32,
    x: u64,
    n: usize,
    seed: u64,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let report = sympow_clt(u, x, n, seed).map_err(core_err)?;
    let fmt = resolve_format(format, "json")?;
    let repro = repro_line(
        "sympow",
        &[
            ("u", u.to_string()),
            ("x", x.to_string()),
            ("n", n.to_string()),
            ("seed", seed.to_string()),
        ],
        &fmt,
    );
    emit_report(&report, &repro, &fmt, output)
}

fn cmd_h_table(
    umax: u32,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let fmt = resolve_format(format, "csv")?;
    let repro = repro_line("sympow", &[("h-table", umax.to_string())], &fmt);
    let polys: Vec<_> = (0..=umax)
        .map(|u| h_polynomial(u).map_err(core_err))
        .collect::<Result<_, _>>()?;
    let content = if fmt == "json" {
        let rows: Vec<serde_json::Value> = polys
            .iter()
            .enumerate()
            .map(|(u, p)| {
                json!({
                    "u": u,
                    "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        to_json_string(&json!({ "repro": repro, "polynomials": rows }))
    } else {
        let mut s = csv_header(&repro, &["coefficient of x^k in H_u".into()]);
        s.push_str("u,k,coefficient\n");
        for (u, p) in polys.iter().enumerate() {
            for (k, c) in p.coeffs().iter().enumerate() {
                let _ = writeln!(s, "{u},{k},{c}");
            }
        }
        s
    };
    emit(output, &content)
}

fn parse_k_range(s: &str) -> Result<(u32, u32), Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| invalid(format!("bad k-range '{s}' (expected A..B)")))?;
    let lo: u32 = a
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad k-range start '{a}'")))?;
    let hi: u32 = b
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad k-range end '{b}'")))?;
    if lo > hi {
        return Err(invalid(format!("empty k-range '{s}'")));
    }
    Ok((lo, hi))
}

fn parse_ratio(s: &str) -> Result<BigRational, Failure> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| invalid(format!("bad ratio numerator '{num}'")))?;
    let d: i64 = den
        .parse()
        .map_err(|_| invalid(format!("bad ratio denominator '{den}'")))?;
    if d == 0 || n <= 0 || d < 0 {
        return Err(invalid(format!("index ratio '{s}' must be positive")));
    }
    Ok(BigRational::new(n.into(), d.into()))
}

fn cmd_dims(
    group: &str,
    k_range: &str,
    level: Option<u64>,
    index_ratio: &str,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let (lo, hi) = parse_k_range(k_range)?;
    let lower = group.to_ascii_lowercase();
    let mut args = vec![("group", group.to_string()), ("k-range", k_range.to_string())];
    let rows: Vec<(u32, BigRational)> = if lower == "g2" {
        let ratio = parse_ratio(index_ratio)?;
        args.push(("index-ratio", index_ratio.to_string()));
        (lo..=hi)
            .map(|k| g2_leading_term(k, &ratio).map(|v| (k, v)))
            .collect::<weyl_lab::Result<_>>()
            .map_err(core_err)?
    } else if let Some(nn) = lower.strip_prefix("sp") {
        let nn: u32 = nn
            .parse()
            .map_err(|_| invalid(format!("bad symplectic group '{group}'")))?;
        if nn == 0 || nn % 2 != 0 {
            return Err(invalid(format!(
                "symplectic group '{group}' must be sp2n with n >= 1"
            )));
        }
        let genus = nn / 2;
        let level = require(level, "level")?;
        args.push(("level", level.to_string()));
        (lo..=hi)
            .map(|k| siegel_leading_term(genus, k, level).map(|v| (k, v)))
            .collect::<weyl_lab::Result<_>>()
            .map_err(core_err)?
    } else {
        return Err(invalid(format!(
            "dims supports 'spN' (N even) or 'g2', got '{group}'"
        )));
    };
    let fmt = resolve_format(format, "csv")?;
    let repro = repro_line("dims", &args, &fmt);
    let content = if fmt == "json" {
        let entries: Vec<serde_json::Value> = rows
            .iter()
            .map(|(k, v)| {
                json!({
                    "k": k,
                    "numerator": v.numer().to_string(),
                    "denominator": v.denom().to_string(),
                    "value": ratio_to_f64(v),
                })
            })
            .collect();
        to_json_string(&json!({ "repro": repro, "rows": entries }))
    } else {
        let mut s = csv_header(&repro, &[]);
        s.push_str("k,numerator,denominator,value\n");
        for (k, v) in &rows {
            let _ = writeln!(s, "{k},{},{},{}", v.numer(), v.denom(), ratio_to_f64(v));
        }
        s
    };
    emit(output, &content)
}

fn ratio_to_f64(v: &BigRational) -> f64 {
    let num = v.numer().to_f64().unwrap_or(f64::INFINITY * sign_of(v));
    let den = v.denom().to_f64().unwrap_or(f64::INFINITY);
    num / den
}

fn sign_of(v: &BigRational) -> f64 {
    if v.is_negative() {
        -1.0
    } else {
        1.0
    }
}

fn cmd_roots(
    group: &str,
    output: &Option<PathBuf>,
    format: &Option<String>,
) -> Result<(), Failure> {
    let rs = parse_group(group)?;
    let fmt = resolve_format(format, "json")?;
    if fmt != "json" {
        return Err(invalid("roots supports only --format json"));
    }
    let repro = repro_line("roots", &[("group", group.into())], &fmt);
    let content = to_json_string(&json!({ "repro": repro, "root_system": rs.to_json() }));
    emit(output, &content)
}

/// Pretty JSON with a trailing newline; key order is the serializer's
/// stable (sorted) map order.
fn to_json_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}
