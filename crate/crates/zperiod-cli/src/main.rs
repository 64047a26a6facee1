use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zperiod::ade::{is_admissible, AdmissibilityReport};
use zperiod::assign::parse_assignment;
use zperiod::birational::{random_lambda, t_system_run};
use zperiod::duality::{check_certificate, dual_labels, dualize, reduction_certificates, ReductionCertificate, Sqrt2Label, SymmetricBigraph};
use zperiod::equilibrium::{common_eigenvector, find_fixed_point, lp_subadditive, period_sum_labeling, DEFAULT_TOL};
use zperiod::graph::{parse_graph_json, Bigraph, BipartiteQuiver};
use zperiod::spec::{parse_spec, GraphSpec};
use zperiod::tropical::{delta, render_frames, returns_after, trajectory, trajectory_tsv, Trajectory};
use zperiod::verify::{verify_all, Verdict, VerifyConfig};

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout().lock(), $($t)*)?;
    }};
}

macro_rules! outn {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        write!(std::io::stdout().lock(), $($t)*)?;
    }};
}

#[derive(Parser)]
#[command(name = "zperiod", version, about = "T-system periodicity toolkit for bipartite recurrent quivers")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GraphArg {
    /// JSON file (bigraph or quiver) or a spec such as `tensor(A3,A2)`, `twist(D5)`, `exc:D6*D6`
    #[arg(long)]
    graph: String,
}

#[derive(Args)]
struct Initial {
    /// Initial values, e.g. `r1c1:3,r2c1:-2,r3c1:7` (unlisted vertices are 0)
    #[arg(long, conflicts_with_all = ["source", "random"])]
    lambda: Option<String>,
    /// Start from the indicator of this vertex
    #[arg(long, conflicts_with = "random")]
    source: Option<String>,
    /// Start from seeded random rationals
    #[arg(long)]
    random: bool,
    /// First time slice (at most 1)
    #[arg(long, default_value_t = 0)]
    t_min: i64,
    /// Last time slice (default: one full period past the start)
    #[arg(long)]
    t_max: Option<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Eigen,
    Lp,
    PeriodSum,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the bigraph (or quiver) JSON of a spec
    Gen {
        #[command(flatten)]
        g: GraphArg,
    },
    /// ADE classification report
    Classify {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Tropical T-system trajectory
    Tropical {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        init: Initial,
        /// Also report whether the initial data returns after 2N steps
        #[arg(long)]
        period: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Symbolic T-system, one Laurent polynomial per line
    Birational {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        t_max: Option<i64>,
        #[arg(long, default_value_t = 20_000)]
        budget_terms: usize,
    },
    /// Fixed point of the T-system with all values above 1
    FixedPoint {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Strictly subadditive labeling
    Labeling {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, value_enum, default_value_t = Method::Eigen)]
        method: Method,
        /// Half-period for the period-sum method (default h+h')
        #[arg(long)]
        period: Option<usize>,
    },
    /// Dual of a symmetric bigraph JSON file
    Dualize {
        #[arg(long)]
        graph: PathBuf,
        /// Symmetric rational labels to carry over to the dual
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Standard involutions of a folded family and their isomorphism certificates
    Reduce {
        #[command(flatten)]
        g: GraphArg,
        /// Write one certificate file per involution into this directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replay a certificate file instead of searching
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// ASCII frames of a tropical trajectory
    Propagate {
        #[command(flatten)]
        g: GraphArg,
        #[command(flatten)]
        init: Initial,
    },
    /// All five equivalent conditions, with exit code 0, 1 or 3
    VerifyAll {
        #[command(flatten)]
        g: GraphArg,
        /// Largest half-period searched when no Coxeter pair exists
        #[arg(long, default_value_t = 64)]
        period: usize,
        #[arg(long, default_value_t = 20_000)]
        budget_terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn load_spec(text: &str) -> Result<GraphSpec> {
    parse_spec(text).with_context(|| format!("`{text}` is neither a readable file nor a valid spec"))
}

fn load_graph(arg: &str) -> Result<BipartiteQuiver> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        return Ok(parse_graph_json(&text)?);
    }
    Ok(load_spec(arg)?.build()?)
}

fn default_horizon(g: &BipartiteQuiver) -> i64 {
    match is_admissible(g).coxeter_pair() {
        Some((h, hp)) => 2 * (h + hp) as i64 + 1,
        None => 21,
    }
}

fn initial_data(g: &BipartiteQuiver, init: &Initial, seed: u64) -> Result<Vec<BigRational>> {
    if let Some(text) = &init.lambda {
        return Ok(parse_assignment(text, g.ids())?);
    }
    if let Some(id) = &init.source {
        let u = g.index_of(id).ok_or_else(|| anyhow!("unknown vertex `{id}`"))?;
        return Ok(delta::<BigInt>(g.len(), u).into_iter().map(BigRational::from_integer).collect());
    }
    if init.random {
        return Ok(random_lambda(g.len(), &mut ChaCha8Rng::seed_from_u64(seed)));
    }
    bail!("give one of --lambda, --source or --random")
}

fn run_trajectory(g: &BipartiteQuiver, init: &Initial, seed: u64) -> Result<(Vec<BigRational>, Trajectory<BigRational>)> {
    let lambda = initial_data(g, init, seed)?;
    let t_max = init.t_max.unwrap_or_else(|| default_horizon(g));
    let traj = trajectory(g, &lambda, init.t_min, t_max)?;
    Ok((lambda, traj))
}

fn labels_json<T: ToString>(ids: &[String], values: &[T]) -> String {
    let map: BTreeMap<&str, serde_json::Value> = ids
        .iter()
        .zip(values)
        .map(|(id, x)| {
            let s = x.to_string();
            let v = serde_json::from_str::<serde_json::Number>(&s).map(serde_json::Value::Number).unwrap_or(serde_json::Value::String(s));
            (id.as_str(), v)
        })
        .collect();
    serde_json::to_string_pretty(&map).expect("labels serialize")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { g } => {
            let q = load_graph(&g.graph)?;
            match Bigraph::try_from(q.clone()) {
                Ok(b) => out!("{}", b.to_json_pretty()),
                Err(_) => out!("{}", q.to_quiver_json()),
            }
        }
        Cmd::Classify { g } => {
            let report = if Path::new(&g.graph).is_file() {
                let text = std::fs::read_to_string(&g.graph)?;
                match parse_graph_json(&text) {
                    Ok(q) => is_admissible(&q),
                    Err(e) => AdmissibilityReport::from_graph_error(&e).ok_or(e)?,
                }
            } else {
                is_admissible(&load_spec(&g.graph)?.build()?)
            };
            out!("{}", serde_json::to_string_pretty(&report)?);
            return Ok(ExitCode::from(if report.verdict { 0 } else { 1 }));
        }
        Cmd::Tropical { g, init, period, format } => {
            let q = load_graph(&g.graph)?;
            let (lambda, traj) = run_trajectory(&q, &init, cli.seed)?;
            match format {
                Format::Tsv => outn!("{}", trajectory_tsv(&q, &traj, traj.t_min())),
                Format::Ascii => outn!("{}", render_frames(&q, &traj, traj.t_min())),
                Format::Json => {
                    let rows: Vec<serde_json::Value> = traj
                        .states()
                        .into_iter()
                        .map(|s| serde_json::json!({ "t": s.time, "values": serde_json::from_str::<serde_json::Value>(&labels_json(q.ids(), &s.values)).expect("valid json") }))
                        .collect();
                    out!("{}", serde_json::to_string_pretty(&rows)?);
                }
            }
            if let Some(n) = period {
                eprintln!("returns after {} steps: {}", 2 * n, returns_after(&q, &lambda, n)?);
            }
        }
        Cmd::Birational { g, t_max, budget_terms } => {
            let q = load_graph(&g.graph)?;
            let ts = t_system_run(&q, t_max.unwrap_or_else(|| default_horizon(&q)), budget_terms)?;
            outn!("{}", ts.dump());
            eprintln!("{} terms", ts.term_count());
        }
        Cmd::FixedPoint { g, tol } => {
            let q = load_graph(&g.graph)?;
            let fp = find_fixed_point(&q, tol)?;
            out!("{}", fp.labeling.to_json(q.ids()));
            eprintln!("relative residual {:.3e}, {} iterations, sandwich {}", fp.residual, fp.iterations, fp.sandwich);
        }
        Cmd::Labeling { g, method, period } => {
            let q = load_graph(&g.graph)?;
            match method {
                Method::Eigen => {
                    let e = common_eigenvector(&q, 1e-12)?;
                    out!("{}", e.labeling.to_json(q.ids()));
                    eprintln!("eigenvalues {:.15} (Γ), {:.15} (Δ), residual {:.3e}", e.lambda_gamma, e.lambda_delta, e.residual);
                }
                Method::Lp => {
                    let l = lp_subadditive(&q).ok_or_else(|| anyhow!("no strictly subadditive labeling exists"))?;
                    out!("{}", l.to_json(q.ids()));
                }
                Method::PeriodSum => {
                    let n = match period {
                        Some(n) => n,
                        None => is_admissible(&q).coxeter_pair().map(|(h, hp)| (h + hp) as usize).ok_or_else(|| anyhow!("not admissible; pass --period"))?,
                    };
                    out!("{}", labels_json(q.ids(), &period_sum_labeling(&q, n)?));
                }
            }
        }
        Cmd::Dualize { graph, lambda } => {
            let sb = SymmetricBigraph::from_json(&std::fs::read_to_string(&graph).with_context(|| format!("reading {}", graph.display()))?)?;
            let dual = dualize(&sb)?;
            out!("{}", dual.sb.to_json());
            if let Some(text) = lambda {
                let rho: Vec<Sqrt2Label> = parse_assignment(&text, sb.graph().ids())?.into_iter().map(Sqrt2Label::rational).collect();
                let star = dual_labels(&sb, &dual, &rho)?;
                out!("{}", labels_json(dual.sb.graph().ids(), &star));
            }
        }
        Cmd::Reduce { g, out, check } => {
            let spec = match load_spec(&g.graph)? {
                GraphSpec::Family(f) => f,
                other => bail!("{other} is not a folded family"),
            };
            if let Some(path) = check {
                let certs: Vec<ReductionCertificate> = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
                let mut ok = true;
                for c in &certs {
                    let pass = check_certificate(&spec, c)?;
                    out!("{}\t{}\t{}\t{}", c.family, c.involution, c.target, if pass { "ok" } else { "FAILED" });
                    ok &= pass;
                }
                return Ok(ExitCode::from(if ok { 0 } else { 1 }));
            }
            let certs = reduction_certificates(&spec)?;
            let found: Vec<ReductionCertificate> = certs.iter().flatten().cloned().collect();
            let text = serde_json::to_string_pretty(&found)?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    let path = dir.join(format!("{}.json", spec.to_string().replace(['(', ')'], "").replace(',', "-")));
                    std::fs::write(&path, text + "\n")?;
                    eprintln!("wrote {}", path.display());
                }
                None => out!("{text}"),
            }
            if found.len() != certs.len() {
                eprintln!("some dual is not isomorphic to its predicted tensor product");
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Propagate { g, init } => {
            let q = load_graph(&g.graph)?;
            let (_, traj) = run_trajectory(&q, &init, cli.seed)?;
            outn!("{}", render_frames(&q, &traj, traj.t_min()));
        }
        Cmd::VerifyAll { g, period, budget_terms, format } => {
            let q = load_graph(&g.graph)?;
            let config = VerifyConfig { budget_terms, period_cap: period, ..VerifyConfig::default() };
            let report = verify_all(&q, &config)?;
            match format {
                Format::Json => out!("{}", report.to_json()),
                Format::Tsv | Format::Ascii => {
                    out!("condition\tverdict\tmillis\tdetail");
                    for c in &report.conditions {
                        let v = match c.verdict {
                            Verdict::True => "true",
                            Verdict::False => "false",
                            Verdict::Skipped => "skipped",
                        };
                        out!("{}\t{v}\t{:.1}\t{}", c.name, c.millis, c.detail);
                    }
                }
            }
            if !report.consistent() {
                eprintln!("inconsistent verdicts");
            }
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
