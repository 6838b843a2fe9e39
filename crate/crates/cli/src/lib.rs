//! The `charrig` command line: load a complex, run one family of checks and
//! print a report. [`run`] does everything except touching the process, so
//! tests can drive it directly.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use charrig_core::cochains::{cohomology, homology, integral_form_generators, Ring};
use charrig_core::complex::{load_chain, load_complex};
use charrig_core::diagram::{verify_diagram, SIGN_CONVENTION};
use charrig_core::equivalence::verify_equivalence;
use charrig_core::geometry::{verify_cycle, verify_geometry, SubdivisionTower, DEFAULT_MAX_SUBDIV};
use charrig_core::product::verify_ring_axioms;
use charrig_core::{corpus, Check, Complex, Report, Status};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "charrig", version, about = "Exact checks of differential characters and cocycles on simplicial complexes")]
pub struct Cli {
    /// Seed for sampled classes and cochains.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Canonical)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Compact JSON with sorted keys and no timings; byte-identical across runs.
    Canonical,
    /// Human-readable summary with timings and the canonical hash.
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cohomology groups in every degree and ring, and integral-form generators.
    Inspect { complex: String },
    /// Commutativity and exactness of the character diagram.
    Diagram {
        complex: String,
        /// Degree k; all of 1..=dim+1 when omitted.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Differential classes against characters.
    Phi {
        complex: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_SUBDIV as u8, value_parser = clap::value_parser!(u8).range(0..=2))]
        max_subdiv: u8,
    },
    /// Ring axioms for the product of differential classes.
    Ring {
        complex: String,
        /// Degrees `k,l` of the factors.
        #[arg(long, default_value = "1,1", value_parser = parse_degrees)]
        degrees: (usize, usize),
    },
    /// Normalize a cycle to a pseudomanifold and bound it when trivial.
    Pseudo {
        complex: String,
        /// Chain file `{"degree": j, "chain": {"v0,v1": n}}`; every sample
        /// cycle below the dimension when omitted.
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_SUBDIV as u8, value_parser = clap::value_parser!(u8).range(0..=2))]
        max_subdiv: u8,
    },
}

fn parse_degrees(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [k, l] => Ok((k.parse().map_err(|_| format!("bad degree {k:?}"))?, l.parse().map_err(|_| format!("bad degree {l:?}"))?)),
        _ => Err(format!("expected k,l, got {s:?}")),
    }
}

/// What a run produced: the exit code and the text for stdout and stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn input_error(msg: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {}\n", msg.into()), report: None }
    }
}

/// Parse arguments (the first is the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { code, stdout, stderr, report: None };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let code = if report.all_passed() { EXIT_PASS } else { EXIT_FAIL };
            let stdout = match cli.format {
                Format::Canonical => format!("{}\n", report.canonical_json()),
                Format::Pretty => pretty(&report),
            };
            Outcome { code, stdout, stderr: String::new(), report: Some(report) }
        }
        Err(msg) => Outcome::input_error(msg),
    }
}

/// Find a complex: an existing path, the path with `.json` appended, or a
/// corpus name (the last path component). Corpus names are looked up in
/// `$CHARRIG_CORPUS` when set and in the built-in corpus otherwise.
pub fn resolve_complex(arg: &str) -> Result<Arc<Complex>, String> {
    let direct = Path::new(arg);
    let with_ext = PathBuf::from(format!("{arg}.json"));
    for p in [direct, with_ext.as_path()] {
        if p.is_file() {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            return load_complex(&text).map(Arc::new).map_err(|e| format!("{}: {e}", p.display()));
        }
    }
    let stem = direct.file_name().and_then(|s| s.to_str()).unwrap_or(arg);
    let stem = stem.strip_suffix(".json").unwrap_or(stem);
    if let Some(dir) = std::env::var_os("CHARRIG_CORPUS") {
        let p = Path::new(&dir).join(format!("{stem}.json"));
        let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
        return load_complex(&text).map(Arc::new).map_err(|e| format!("{}: {e}", p.display()));
    }
    match corpus::document(stem) {
        Some(doc) => load_complex(doc).map(Arc::new).map_err(|e| e.to_string()),
        None => Err(format!("no complex file {arg:?} and no corpus complex named {stem:?} (known: {})", corpus::NAMES.join(", "))),
    }
}

fn degrees_or_all(x: &Complex, degree: Option<usize>) -> Result<Vec<usize>, String> {
    match degree {
        Some(0) => Err("differential classes start in degree 1".into()),
        Some(k) => Ok(vec![k]),
        None => Ok((1..=x.dim() + 1).collect()),
    }
}

fn timed<T>(report: &mut Report, label: String, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    report.timings_ms.insert(label, t.elapsed().as_millis() as u64);
    out
}

/// Run a parsed command. `Err` is an input error.
pub fn execute(cli: &Cli) -> Result<Report, String> {
    let seed = cli.seed;
    match &cli.command {
        Command::Inspect { complex } => {
            let x = resolve_complex(complex)?;
            let mut r = Report::new("inspect", x.name(), (0..=x.dim() + 1).collect(), seed);
            timed(&mut r, "inspect".into(), || inspect(&x)).into_iter().for_each(|(k, v)| {
                r.data.insert(k, v);
            });
            let euler: i64 = (0..=x.dim()).map(|j| if j % 2 == 0 { 1 } else { -1 } * cohomology(&x, j, Ring::Q).rank as i64).sum();
            r.checks.push(Check::new(
                "euler_characteristic_matches_rational_betti_numbers",
                euler == x.euler_characteristic(),
                json!({ "from_simplices": x.euler_characteristic(), "from_betti_numbers": euler }),
            ));
            let fails: Vec<usize> = (0..=x.dim() + 1)
                .filter(|&j| cohomology(&x, j, Ring::Q).rank != cohomology(&x, j, Ring::Z).rank)
                .collect();
            r.checks.push(Check::new("rational_rank_matches_integral_rank", fails.is_empty(), json!({ "failed_degrees": fails })));
            Ok(r)
        }
        Command::Diagram { complex, degree } => {
            let x = resolve_complex(complex)?;
            let ks = degrees_or_all(&x, *degree)?;
            let mut r = Report::new("diagram", x.name(), ks.clone(), seed);
            r.notes.push(SIGN_CONVENTION.into());
            for k in ks {
                let cs = timed(&mut r, format!("k{k}"), || verify_diagram(&x, k, seed));
                r.checks.extend(cs.into_iter().map(|c| c.prefixed(&format!("k{k}."))));
            }
            Ok(r)
        }
        Command::Phi { complex, degree, max_subdiv } => {
            let x = resolve_complex(complex)?;
            let ks = degrees_or_all(&x, *degree)?;
            let mut r = Report::new("phi", x.name(), ks.clone(), seed);
            r.data.insert("max_subdiv".into(), json!(max_subdiv));
            for k in ks {
                let cs = timed(&mut r, format!("k{k}"), || verify_equivalence(&x, k, seed, *max_subdiv as usize));
                r.checks.extend(cs.into_iter().map(|c| c.prefixed(&format!("k{k}."))));
            }
            Ok(r)
        }
        Command::Ring { complex, degrees: (k, l) } => {
            let x = resolve_complex(complex)?;
            if *k == 0 || *l == 0 {
                return Err("differential classes start in degree 1".into());
            }
            let mut r = Report::new("ring", x.name(), vec![*k, *l], seed);
            r.notes.push("the wedge of curvatures is the Alexander-Whitney cup product of rational cochains".into());
            let cs = timed(&mut r, format!("k{k}_l{l}"), || verify_ring_axioms(&x, *k, *l, seed));
            r.checks.extend(cs);
            Ok(r)
        }
        Command::Pseudo { complex, cycle, max_subdiv } => {
            let x = resolve_complex(complex)?;
            let tower = SubdivisionTower::new(x.clone());
            let m = *max_subdiv as usize;
            let (checks, data, degrees) = match cycle {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                    let (j, z) = load_chain(&x, &text).map_err(|e| format!("{}: {e}", path.display()))?;
                    let t = Instant::now();
                    let (cs, d) = verify_cycle(&tower, j, &z, m).map_err(|e| format!("{}: {e}", path.display()))?;
                    (cs, (d, t.elapsed()), vec![j])
                }
                None => {
                    let t = Instant::now();
                    let (cs, d) = verify_geometry(&tower, m).map_err(|e| e.to_string())?;
                    (cs, (d, t.elapsed()), (0..x.dim()).collect())
                }
            };
            let mut r = Report::new("pseudo", x.name(), degrees, seed);
            r.timings_ms.insert("pseudo".into(), data.1.as_millis() as u64);
            r.data.insert("cycles".into(), data.0);
            r.data.insert("max_subdiv".into(), json!(m));
            r.notes.push("bounding neighborhoods are taken around the support of the bounding chain, which contains the cycle".into());
            r.checks = checks;
            Ok(r)
        }
    }
}

fn inspect(x: &Complex) -> Vec<(String, serde_json::Value)> {
    let degrees = 0..=x.dim() + 1;
    let groups: serde_json::Map<String, serde_json::Value> = degrees
        .clone()
        .map(|j| {
            let v = json!({
                "H^j(Z)": cohomology(x, j, Ring::Z).describe(),
                "H^j(Q)": cohomology(x, j, Ring::Q).describe_over("Q"),
                "H^j(Q/Z)": cohomology(x, j, Ring::QmodZ).describe_over("Q/Z"),
                "H_j(Z)": homology(x, j).describe(),
            });
            (j.to_string(), v)
        })
        .collect();
    let forms: serde_json::Map<String, serde_json::Value> = (1..=x.dim())
        .map(|k| {
            let gens: Vec<_> = integral_form_generators(x, k).iter().map(|w| w.to_json(x)).collect();
            (k.to_string(), json!(gens))
        })
        .collect();
    vec![
        ("counts".into(), json!(x.counts())),
        ("cohomology".into(), serde_json::Value::Object(groups)),
        ("integral_form_generators".into(), serde_json::Value::Object(forms)),
    ]
}

/// A human-readable rendering: one line per check, a summary, the canonical
/// hash and timings.
pub fn pretty(r: &Report) -> String {
    let mut out = format!(
        "{} {}  {}  complex {}  degrees {:?}  seed {}\n",
        r.tool, r.version, r.command, r.complex, r.degrees, r.seed
    );
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        out.push_str(&format!("  {tag}  {}\n", c.name));
        if c.status == Status::Fail {
            let w = serde_json::to_string(&c.witnesses).unwrap_or_default();
            let w: String = w.chars().take(400).collect();
            out.push_str(&format!("        {w}\n"));
        }
    }
    let count = |s: Status| r.checks.iter().filter(|c| c.status == s).count();
    out.push_str(&format!(
        "{} passed, {} failed, {} skipped\n",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped)
    ));
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    if !r.timings_ms.is_empty() {
        let t: Vec<String> = r.timings_ms.iter().map(|(k, v)| format!("{k} {v}ms")).collect();
        out.push_str(&format!("timings: {}\n", t.join(", ")));
    }
    out.push_str(&format!("canonical sha256 {}\n", r.canonical_hash()));
    out
}
