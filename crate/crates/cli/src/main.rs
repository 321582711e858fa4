//! `hecke`: build Coxeter systems, run verification campaigns and report.
//!
//! Settings resolve as command-line flag, then `HECKE_*` environment
//! variable, then built-in default.

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hecke_core::endo::{expand_to_covering, factorize_double_coset, zb_product, ZBElement};
use hecke_core::hecke::KLCache;
use hecke_core::verify::{self, Check, Options, FAMILIES};
use hecke_core::{
    CoxeterSystem, EndoAlgebra, Exec, GroupElement, HasseQuiver, HeckeAlgebra, Subset,
};

const DEFAULT_MAX_ORDER: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Hecke endomorphism algebra verifier")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Config {
    /// Coxeter type such as A3, B2 or I2(7).
    #[arg(long = "type", global = true, env = "HECKE_TYPE", conflicts_with = "matrix")]
    ty: Option<String>,
    /// File holding a Coxeter matrix, as JSON rows or whitespace separated rows.
    #[arg(long, global = true, env = "HECKE_MATRIX")]
    matrix: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "HECKE_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "HECKE_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// KL polynomial cache file, read if present and written back afterwards.
    #[arg(long, global = true, env = "HECKE_CACHE")]
    cache: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially, 0 uses all cores.
    #[arg(long, global = true, env = "HECKE_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Abort group enumeration past this many elements.
    #[arg(long, global = true, env = "HECKE_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Print passing checks in text output too.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, longest elements, finitary subsets and double coset census.
    Group,
    /// Kazhdan-Lusztig polynomials, optionally for one `y` or `w` given as words.
    Kl {
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        w: Option<String>,
    },
    /// Run verification families, comma separated; `all` runs everything applicable.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "all")]
        families: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        fuzz: usize,
        #[arg(long, default_value_t = 500)]
        paths: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Factorize double cosets `W_I d W_J` into quiver generators.
    Factorize {
        /// Subset label such as `13`, or `0` for the empty set.
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        /// A word for an element of the double coset; all cosets when absent.
        #[arg(long)]
        d: Option<String>,
    },
    /// Standard paths per vertex pair with the rank and determinant report.
    StandardPaths,
}

#[derive(Serialize)]
struct Output {
    command: &'static str,
    system: String,
    passed: bool,
    info: Value,
    checks: Vec<Check>,
}

fn load_matrix(path: &FsPath) -> Result<Vec<Vec<u32>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).context("parsing JSON matrix");
    }
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|x| x.parse::<u32>().with_context(|| format!("bad entry {x:?}")))
                .collect()
        })
        .collect()
}

fn build_system(cfg: &Config) -> Result<CoxeterSystem> {
    Ok(match (&cfg.ty, &cfg.matrix) {
        (Some(t), _) => CoxeterSystem::from_type_with_cap(t, cfg.max_order)?,
        (None, Some(p)) => CoxeterSystem::from_matrix_with_cap(load_matrix(p)?, cfg.max_order)?,
        (None, None) => bail!("one of --type or --matrix is required"),
    })
}

/// Parses `s1s2`, `1 2`, `12` or `e` into 0-based generators.
fn parse_word(sys: &CoxeterSystem, text: &str) -> Result<GroupElement> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(GroupElement::IDENTITY);
    }
    let digits: Vec<usize> = if t.contains('s') || t.contains(' ') || t.contains(',') {
        t.split(['s', ' ', ','])
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>().map_err(|_| anyhow!("bad word {text:?}")))
            .collect::<Result<_>>()?
    } else {
        t.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| anyhow!("bad word {text:?}")))
            .collect::<Result<_>>()?
    };
    if let Some(bad) = digits.iter().find(|&&d| d == 0 || d > sys.rank()) {
        bail!("generator {bad} out of range 1..={}", sys.rank());
    }
    let word: Vec<usize> = digits.iter().map(|d| d - 1).collect();
    Ok(sys.from_word(&word))
}

fn parse_subset(sys: &CoxeterSystem, label: &str) -> Result<Subset> {
    let s = Subset::parse_label(label).ok_or_else(|| anyhow!("bad subset label {label:?}"))?;
    if !s.is_subset(sys.full_set()) {
        bail!("subset {label} is not contained in S");
    }
    Ok(s)
}

fn hecke_algebra(cfg: &Config, sys: Arc<CoxeterSystem>) -> Result<HeckeAlgebra> {
    Ok(match &cfg.cache {
        Some(p) => {
            let cache = KLCache::load_or_new(&sys, p)?;
            HeckeAlgebra::with_cache(sys, cache)
        }
        None => HeckeAlgebra::new(sys),
    })
}

fn cmd_group(sys: &CoxeterSystem) -> Output {
    let lambda = sys.lambda();
    let subsets: Vec<Value> = lambda
        .iter()
        .map(|&i| {
            json!({
                "subset": i.label(),
                "order": sys.parabolic(i).len(),
                "longest": sys.word_string(sys.longest_element(i)),
            })
        })
        .collect();
    let mut census = Vec::new();
    for &i in &lambda {
        for &j in &lambda {
            census.push(json!({
                "i": i.label(),
                "j": j.label(),
                "double_cosets": sys.double_coset_reps(i, j).len(),
            }));
        }
    }
    Output {
        command: "group",
        system: sys.name().to_string(),
        passed: true,
        info: json!({
            "rank": sys.rank(),
            "order": sys.order(),
            "coxeter_matrix": sys.coxeter_matrix(),
            "longest_element": sys.word_string(sys.longest_element(sys.full_set())),
            "lambda": subsets,
            "double_coset_census": census,
        }),
        checks: Vec::new(),
    }
}

fn cmd_kl(h: &HeckeAlgebra, exec: Exec, y: Option<GroupElement>, w: Option<GroupElement>) -> Output {
    let sys = h.system();
    h.fill_cache(exec);
    let mut rows = Vec::new();
    for wv in sys.elements().filter(|&x| w.is_none_or(|w| w == x)) {
        for yv in sys.elements().filter(|&x| y.is_none_or(|y| y == x)) {
            if sys.bruhat_leq(yv, wv) {
                rows.push(json!({
                    "y": sys.word_string(yv),
                    "w": sys.word_string(wv),
                    "p": h.kl_poly(yv, wv).to_string(),
                    "mu": h.mu(yv, wv).to_string(),
                }));
            }
        }
    }
    let checks = verify::kl_properties(h, exec);
    Output {
        command: "kl",
        system: sys.name().to_string(),
        passed: checks.iter().all(|c| c.passed),
        info: json!({ "polynomials": rows }),
        checks,
    }
}

/// Families that apply to `q` when `all` is requested.
fn applicable(q: &HasseQuiver) -> Vec<&'static str> {
    use hecke_core::quiver::TorsionKind;
    let kind = q.kind();
    FAMILIES
        .iter()
        .copied()
        .filter(|f| match *f {
            "t1" | "t2" | "t3" | "t4" => kind == TorsionKind::A3,
            "refined-braid" | "dihedral-hook" | "remark74" => matches!(kind, TorsionKind::Dihedral(_)),
            "prop71" | "spanning" | "rewrite" | "tau" => kind != TorsionKind::Unsupported,
            _ => true,
        })
        .collect()
}

fn cmd_verify(q: &HasseQuiver, families: &[String], opts: &Options) -> Result<Output> {
    let names: Vec<String> = if families.iter().any(|f| f.eq_ignore_ascii_case("all")) {
        applicable(q).into_iter().map(String::from).collect()
    } else {
        families.iter().map(|f| f.trim().to_ascii_lowercase()).collect()
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let report = verify::run(q, &refs, opts)?;
    Ok(Output {
        command: "verify",
        system: report.system.clone(),
        passed: report.passed(),
        info: json!({ "families": names, "summary": report.summary() }),
        checks: report.checks,
    })
}

fn cmd_factorize(sys: &CoxeterSystem, i: Subset, j: Subset, d: Option<GroupElement>) -> Result<Output> {
    let reps: Vec<GroupElement> = match d {
        Some(d) => vec![sys.double_coset_max(i, d, j)],
        None => sys.double_coset_reps_longest(i, j),
    };
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for d in reps {
        let labels = factorize_double_coset(sys, i, d, j)?;
        let covering = expand_to_covering(&labels);
        let target = ZBElement::basis(i, d, j);
        let ok = zb_product(sys, i, &labels) == target && zb_product(sys, i, &covering) == target;
        let show = |ls: &[(Subset, Subset)]| {
            ls.iter()
                .map(|(a, b)| format!("({},{})", a.label(), b.label()))
                .collect::<Vec<_>>()
                .join(" ")
        };
        rows.push(json!({
            "d": sys.word_string(d),
            "labels": show(&labels),
            "covering": show(&covering),
        }));
        checks.push(Check {
            family: "factorize".into(),
            instance: format!("I={} d={} J={}", i.label(), sys.word_string(d), j.label()),
            passed: ok,
            detail: Some(show(&labels)),
        });
    }
    Ok(Output {
        command: "factorize",
        system: sys.name().to_string(),
        passed: checks.iter().all(|c| c.passed),
        info: json!({ "factorizations": rows }),
        checks,
    })
}

fn cmd_standard_paths(q: &HasseQuiver, exec: Exec) -> Result<Output> {
    let std = hecke_core::quiver::StandardPaths::new(q)?;
    let paths: Vec<Value> = std
        .pairs()
        .map(|((j, i), ps)| {
            json!({
                "target": j.label(),
                "source": i.label(),
                "paths": ps.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    let checks = verify::spanning(q, exec)?;
    Ok(Output {
        command: "standard-paths",
        system: q.system().name().to_string(),
        passed: checks.iter().all(|c| c.passed),
        info: json!({ "total": std.total(), "standard_paths": paths }),
        checks,
    })
}

fn render_text(out: &Output, verbose: bool) -> String {
    let mut s = format!("{} on {}\n", out.command, out.system);
    if out.checks.is_empty() || verbose {
        s.push_str(&serde_json::to_string_pretty(&out.info).unwrap_or_default());
        s.push('\n');
    }
    let mut by_family: Vec<(&str, usize, usize)> = Vec::new();
    for c in &out.checks {
        match by_family.last_mut() {
            Some((f, p, n)) if *f == c.family => {
                *p += usize::from(c.passed);
                *n += 1;
            }
            _ => by_family.push((&c.family, usize::from(c.passed), 1)),
        }
        if verbose || !c.passed {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} [{}] {}", c.family, c.instance));
            if let Some(d) = &c.detail {
                s.push_str(&format!("  ({d})"));
            }
            s.push('\n');
        }
    }
    for (f, p, n) in by_family {
        s.push_str(&format!("{f}: {p}/{n} passed\n"));
    }
    if !out.checks.is_empty() {
        s.push_str(if out.passed { "ALL PASS\n" } else { "FAILURES\n" });
    }
    s
}

fn render_csv(out: &Output) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["system", "family", "instance", "passed", "detail"])?;
    for c in &out.checks {
        let passed = c.passed.to_string();
        w.write_record([
            out.system.as_str(),
            &c.family,
            &c.instance,
            &passed,
            c.detail.as_deref().unwrap_or(""),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = &cli.config;
    let sys = Arc::new(build_system(cfg)?);
    let exec = if cfg.jobs == 1 { Exec::Sequential } else { Exec::Parallel };
    if cfg.jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let needs_hecke = !matches!(cli.command, Command::Group | Command::Factorize { .. });
    let quiver = if needs_hecke {
        Some(HasseQuiver::new(EndoAlgebra::new(hecke_algebra(cfg, sys.clone())?)))
    } else {
        None
    };
    let output = match &cli.command {
        Command::Group => cmd_group(&sys),
        Command::Kl { y, w } => {
            let y = y.as_deref().map(|t| parse_word(&sys, t)).transpose()?;
            let w = w.as_deref().map(|t| parse_word(&sys, t)).transpose()?;
            cmd_kl(quiver.as_ref().unwrap().hecke(), exec, y, w)
        }
        Command::Verify { families, fuzz, paths, max_len, seed } => {
            let opts = Options {
                fuzz_triples: *fuzz,
                random_paths: *paths,
                max_path_len: *max_len,
                seed: *seed,
                exec,
            };
            cmd_verify(quiver.as_ref().unwrap(), families, &opts)?
        }
        Command::Factorize { i, j, d } => {
            let i = parse_subset(&sys, i)?;
            let j = parse_subset(&sys, j)?;
            let d = d.as_deref().map(|t| parse_word(&sys, t)).transpose()?;
            cmd_factorize(&sys, i, j, d)?
        }
        Command::StandardPaths => cmd_standard_paths(quiver.as_ref().unwrap(), exec)?,
    };
    if let (Some(path), Some(q)) = (&cfg.cache, &quiver) {
        q.hecke().cache().save(&sys, path)?;
    }
    let text = match cfg.format {
        Format::Text => render_text(&output, cfg.verbose),
        Format::Json => serde_json::to_string_pretty(&output)? + "\n",
        Format::Csv => render_csv(&output)?,
    };
    match &cfg.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(output.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let chain: Vec<String> = e.chain().skip(1).map(ToString::to_string).collect();
            let body = json!({ "error": { "message": e.to_string(), "causes": chain } });
            eprintln!("{body}");
            ExitCode::from(2)
        }
    }
}
