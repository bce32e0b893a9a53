//! `ospkit`: verification suites and computations for orthosymplectic
//! invariant theory, with JSON reports.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ospkit_core::brauercat::brauer_algebra;
use ospkit_core::invariantsolver::{
    critical_degree, pfaffian_gap, transfer_op_check, verify_fft, verify_gl_sw, verify_swb, SolverConfig,
    DEFAULT_SIZE_BOUND,
};
use ospkit_core::ospgeom::{generated_seeds, gram_schmidt_report, super_gram_schmidt, FormSpec};
use ospkit_core::scalar::{fmt_rational, parse_rational};
use ospkit_core::superpoly::{pfaffian_report, verify_poly_fft};
use ospkit_core::tensorfunctor::check_relations;
use ospkit_core::Error;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest super Pfaffian degree computed without --slow.
const FAST_PFAFFIAN_DEGREE: usize = 3;

#[derive(Parser)]
#[command(name = "ospkit", version, about = "Exact checks of orthosymplectic invariant theory")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "OSPKIT_THREADS", default_value_t = 0)]
    threads: usize,

    /// Write the JSON report to PATH, or to stdout when PATH is omitted or "-".
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,

    /// Include wall-clock timings in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timings: bool,

    /// Upper bound on the entry count of any linear solve.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_BOUND)]
    size_bound: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Run a computation.
    Compute {
        #[command(subcommand)]
        what: Computation,
    },
    #[command(flatten)]
    Direct(Computation),
}

#[derive(Args, Clone, Copy)]
struct Form {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

impl Form {
    fn spec(self) -> FormSpec {
        FormSpec::new(self.m, self.n)
    }

    fn params(self) -> Value {
        json!({"m": self.m, "n": self.n})
    }
}

#[derive(Subcommand)]
enum Suite {
    /// Relations among the signed swap, cup and cap, and their equivariance.
    Relations {
        #[command(flatten)]
        form: Form,
    },
    /// Invariant functionals on V^{⊗2d} against pairings, d = 1..dmax.
    Fft {
        #[command(flatten)]
        form: Form,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// End_G(V^{⊗r}) against Brauer diagram images, r = 1..rmax.
    Swb {
        #[command(flatten)]
        form: Form,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
    },
    /// End_gl(V^{⊗r}) against signed permutations, r = 1..rmax.
    Glsw {
        #[command(flatten)]
        form: Form,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
    },
    /// Cup/cap transfer isomorphisms for all p + q + r ≤ total.
    Transfer {
        #[command(flatten)]
        form: Form,
        #[arg(long, default_value_t = 5)]
        total: usize,
    },
    /// Lie versus group invariants of End(V^{⊗r}), r = 1..rmax.
    Gap {
        #[command(flatten)]
        form: Form,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
    },
}

#[derive(Subcommand)]
enum Computation {
    /// The super Pfaffian and its defining properties.
    Pfaffian {
        #[command(flatten)]
        form: Form,
        /// Allow degrees above 3, e.g. (m, n) = (2, 1).
        #[arg(long)]
        slow: bool,
    },
    /// Super Gram–Schmidt on seeds drawn from random OSp points.
    GramSchmidt {
        #[command(flatten)]
        form: Form,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of Grassmann generators N of Λ(N).
        #[arg(long, default_value_t = 6)]
        grassmann_degree: u32,
        /// Number of random group elements.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Basis and multiplication table of the Brauer algebra B_r(δ).
    Brauer {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        table: bool,
    },
    /// Invariant polynomials on p even and q odd vector arguments.
    Polyfft {
        #[command(flatten)]
        form: Form,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, default_value_t = 4)]
        degmax: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
}

struct Report {
    command: String,
    params: Value,
    results: Vec<Value>,
    verdict: bool,
    text: Vec<String>,
}

impl Report {
    fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.into(),
            params,
            results: Vec::new(),
            verdict: true,
            text: Vec::new(),
        }
    }

    fn push(&mut self, result: Value, passed: bool, line: String) {
        self.results.push(result);
        self.verdict &= passed;
        self.text.push(format!("{} {line}", if passed { "ok  " } else { "FAIL" }));
    }

    /// Solves that exceed the size bound are recorded but do not fail the run.
    fn push_error(&mut self, what: String, err: Error) {
        let skipped = matches!(err, Error::TooLarge { .. });
        self.results.push(json!({"entry": what, "error": err.to_string(), "skipped": skipped}));
        self.verdict &= skipped;
        self.text.push(format!("{} {what}: {err}", if skipped { "skip" } else { "FAIL" }));
    }
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("millis");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run_suite(suite: &Suite, cfg: &SolverConfig) -> Report {
    match suite {
        Suite::Relations { form } => {
            let mut rep = Report::new("verify relations", form.params());
            for check in check_relations(&form.spec()) {
                rep.push(to_value(&check), check.holds, check.name.clone());
            }
            rep
        }
        Suite::Fft { form, dmax } => {
            let mut params = form.params();
            params["dmax"] = json!(dmax);
            invariant_suite("verify fft", params, verify_fft(&form.spec(), *dmax, cfg))
        }
        Suite::Swb { form, rmax } => {
            let mut params = form.params();
            params["rmax"] = json!(rmax);
            invariant_suite("verify swb", params, verify_swb(&form.spec(), *rmax, cfg))
        }
        Suite::Glsw { form, rmax } => {
            let mut params = form.params();
            params["rmax"] = json!(rmax);
            invariant_suite("verify glsw", params, verify_gl_sw(&form.spec(), *rmax, cfg))
        }
        Suite::Transfer { form, total } => {
            let mut params = form.params();
            params["total"] = json!(total);
            let mut rep = Report::new("verify transfer", params);
            let spec = form.spec();
            for p in 0..=*total {
                for q in 0..=total - p {
                    for r in 0..=total - p - q {
                        let what = format!("p={p} q={q} r={r}");
                        match transfer_op_check(p, q, r, &spec, cfg) {
                            Ok(holds) => rep.push(json!({"p": p, "q": q, "r": r, "holds": holds}), holds, what),
                            Err(e) => rep.push_error(what, e),
                        }
                    }
                }
            }
            rep
        }
        Suite::Gap { form, rmax } => {
            let mut params = form.params();
            params["rmax"] = json!(rmax);
            let spec = form.spec();
            let rc = critical_degree(&spec);
            params["critical_degree"] = json!(rc);
            let reports = (1..=*rmax)
                .map(|r| pfaffian_gap(&spec, r, rc.is_some_and(|c| r >= c), cfg))
                .collect::<Vec<_>>();
            let mut rep = Report::new("verify gap", params);
            for (r, res) in (1..=*rmax).zip(reports) {
                match res {
                    Ok(x) => {
                        let line = format!(
                            "r={r}: lie {} group {} diagrams {}",
                            x.dim_lie_invariants.unwrap_or(0),
                            x.dim_group_invariants.unwrap_or(0),
                            x.diagram_image_rank.unwrap_or(0)
                        );
                        rep.push(to_value(&x), x.verdict, line);
                    }
                    Err(e) => rep.push_error(format!("r={r}"), e),
                }
            }
            rep
        }
    }
}

fn invariant_suite(
    command: &str,
    params: Value,
    reports: ospkit_core::Result<Vec<ospkit_core::invariantsolver::InvariantReport>>,
) -> Report {
    let mut rep = Report::new(command, params);
    match reports {
        Ok(xs) => {
            for x in xs {
                let invariants = x.dim_group_invariants.or(x.dim_lie_invariants).unwrap_or(0);
                let images = x.diagram_image_rank.or(x.perm_image_rank).unwrap_or(0);
                let line = format!("({}, {}): invariants {invariants}, images {images}", x.k, x.l);
                rep.push(to_value(&x), x.verdict, line);
            }
        }
        Err(e) => rep.push_error(command.to_string(), e),
    }
    rep
}

fn run_computation(what: &Computation, cfg: &SolverConfig) -> Result<Report, String> {
    Ok(match what {
        Computation::Pfaffian { form, slow } => {
            let degree = form.m * (2 * form.n + 1);
            if degree > FAST_PFAFFIAN_DEGREE && !slow {
                return Err(format!("degree {degree} super Pfaffian needs --slow"));
            }
            let mut rep = Report::new("pfaffian", form.params());
            match pfaffian_report(&form.spec(), cfg) {
                Ok(x) => {
                    let line = format!("degree {} slice {}: {}", x.degree, x.slice_dim, x.omega);
                    rep.push(to_value(&x), x.verdict, line);
                }
                Err(e) => rep.push_error("pfaffian".into(), e),
            }
            rep
        }
        Computation::GramSchmidt {
            form,
            seed,
            grassmann_degree,
            count,
        } => {
            let mut params = form.params();
            params["seed"] = json!(seed);
            params["grassmann_degree"] = json!(grassmann_degree);
            params["count"] = json!(count);
            let mut rep = Report::new("gram-schmidt", params);
            let spec = form.spec();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for i in 0..*count {
                for (j, s) in generated_seeds(&spec, *grassmann_degree, &mut rng).iter().enumerate() {
                    let what = format!("sample {i}.{j}");
                    match super_gram_schmidt(s, &spec).and_then(|b| gram_schmidt_report(&b, &spec)) {
                        Ok(x) => {
                            let ok = x.gram_is_eta && x.is_group_element;
                            rep.push(to_value(&x), ok, format!("{what}: gram = eta {}", x.gram_is_eta));
                        }
                        Err(e) => rep.push_error(what, e),
                    }
                }
            }
            rep
        }
        Computation::Brauer { r, delta, table } => {
            let d = parse_rational(delta).map_err(|e| e.to_string())?;
            let mut rep = Report::new("brauer", json!({"r": r, "delta": fmt_rational(&d)}));
            let alg = brauer_algebra(*r, d);
            let mut v = to_value(&alg);
            if !table {
                v.as_object_mut().unwrap().remove("table");
            }
            v["dim"] = json!(alg.dim());
            let mut line = format!("dim B_{r}({}) = {}", fmt_rational(&alg.delta), alg.dim());
            if *table {
                for (i, row) in alg.table.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(|(k, l)| format!("{k}:{l}")).collect();
                    line.push_str(&format!("\n     {i:>3} {}  {}", alg.basis[i], cells.join(" ")));
                }
            }
            rep.push(v, true, line);
            rep
        }
        Computation::Polyfft { form, p, q, degmax } => {
            let mut params = form.params();
            params["p"] = json!(p);
            params["q"] = json!(q);
            params["degmax"] = json!(degmax);
            let mut rep = Report::new("polyfft", params);
            match verify_poly_fft(&form.spec(), *p, *q, *degmax, cfg) {
                Ok(xs) => {
                    for x in xs {
                        let line = format!(
                            "degree {}: invariants {}, quadratic products {}",
                            x.degree, x.dim_invariants, x.quadratic_rank
                        );
                        rep.push(to_value(&x), x.verdict, line);
                    }
                }
                Err(e) => rep.push_error("polyfft".into(), e),
            }
            rep
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("ospkit: thread pool: {e}");
        return ExitCode::from(2);
    }
    let cfg = SolverConfig {
        size_bound: cli.size_bound,
    };
    let report = match &cli.command {
        Command::Verify { suite } => Ok(run_suite(suite, &cfg)),
        Command::Compute { what } | Command::Direct(what) => run_computation(what, &cfg),
    };
    let report = match report {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("ospkit: {msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = if report.verdict { Outcome::Pass } else { Outcome::Fail };
    let mut doc = json!({
        "tool_version": TOOL_VERSION,
        "command": report.command,
        "params": report.params,
        "results": report.results,
        "verdict": if outcome == Outcome::Pass { "pass" } else { "fail" },
    });
    if !cli.timings {
        strip_timings(&mut doc);
    }
    let rendered = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    match cli.json.as_deref() {
        Some("-") => print!("{rendered}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("ospkit: cannot write {path}: {e}");
                return ExitCode::from(2);
            }
            print_text(&report, outcome);
        }
        None => print_text(&report, outcome),
    }
    match outcome {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::Fail => ExitCode::from(1),
    }
}

fn print_text(report: &Report, outcome: Outcome) {
    println!("{}", report.command);
    for line in &report.text {
        println!("  {line}");
    }
    println!("verdict: {}", if outcome == Outcome::Pass { "pass" } else { "fail" });
}
