use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use bitrade::construct::{
    base_bitrade, lift_to_perfect, tensor_combine, tensor_power, Base, MdsVariant,
};
use bitrade::hamming::code_distance;
use bitrade::io::{self, Format};
use bitrade::search::{find_spherical, min_perfect_volume, SearchConfig, SearchMode};
use bitrade::verify::{self, Criterion, VerificationReport, DEFAULT_FACE_BUDGET};
use bitrade::{Bitrade, BitradeKind, Error};

/// Construct, verify and search for perfect and spherical bitrades in H(n,q).
#[derive(Parser)]
#[command(name = "bitrade", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a bitrade from one of the algebraic constructions.
    Construct(ConstructArgs),
    /// Check a stored bitrade.
    Verify(VerifyArgs),
    /// Search for a small bitrade.
    Search(SearchArgs),
    /// Print parameters, volume and distances of a stored bitrade.
    Info {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Alt,
    Mds,
    Tensor,
    Lift,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Swap,
    Coset,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Alt,
    Mds,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    construction: Construction,
    #[arg(long)]
    q: Option<usize>,
    /// Number of tensor factors (default 1, or 2 for `tensor`).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value = "swap")]
    variant: Variant,
    /// Coset shift as comma-separated symbols; defaults to (1,-1,0,...,0).
    #[arg(long, value_delimiter = ',')]
    shift: Option<Vec<u16>>,
    /// Base bitrade of `tensor` and `lift`.
    #[arg(long, value_enum, default_value = "alt")]
    base: BaseArg,
    /// `tensor`: combine two stored spherical bitrades instead.
    #[arg(long, requires = "right")]
    left: Option<PathBuf>,
    #[arg(long, requires = "left")]
    right: Option<PathBuf>,
    /// `lift`: lift a stored spherical bitrade instead.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Skip the check of stored inputs to `tensor` and `lift`.
    #[arg(long)]
    no_verify_inputs: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated: definition, eigen, dist2, delsarte, mindist, all.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    /// Faces sampled by the face check when exhaustive enumeration is too large.
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    face_budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also count every vertex of the graph instead of only the support's neighbourhood.
    #[arg(long)]
    full: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Local,
    Dive,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Perfect,
    Spherical,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Defaults to spherical when q divides n and perfect otherwise.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    upper_bound: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds (local and dive modes default to 60).
    #[arg(long)]
    budget: Option<f64>,
    /// Local mode: moves per restart. Dive mode: base node limit.
    #[arg(long)]
    steps: Option<u64>,
    /// Local mode: independent restarts. Dive mode: restarts per round.
    #[arg(long)]
    restarts: Option<usize>,
    /// Local mode: start from a stored bitrade.
    #[arg(long)]
    init: Option<PathBuf>,
    /// Exhaustive mode: do not fix the first words up to automorphism.
    #[arg(long)]
    no_symmetry: bool,
    /// Exhaustive and dive modes: print node counts to stderr.
    #[arg(long)]
    progress: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

/// Failure of a requested check (exit 1) or of the invocation itself (exit 2).
enum Failure {
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = bitrade::thread_limit() {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let outcome = match cli.command {
        Command::Construct(args) => construct(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Search(args) => search(args),
        Command::Info { input } => info(input),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn load_checked(path: &PathBuf, check: bool) -> std::result::Result<Bitrade, Failure> {
    let mut b = io::load(path)?;
    if check {
        let report = verify::verify_definition(&b);
        if !report.passed {
            return usage(format!(
                "{} is not a valid bitrade:\n{report}",
                path.display()
            ));
        }
        b.set_unverified(false);
    }
    Ok(b)
}

fn construct(args: ConstructArgs) -> Outcome {
    let variant = match args.variant {
        Variant::Swap => MdsVariant::Swap,
        Variant::Coset => MdsVariant::Coset(None),
    };
    let q = || {
        args.q
            .ok_or_else(|| Failure::Usage("--q is required".into()))
    };
    let mds_variant = |q: usize| -> std::result::Result<MdsVariant, Failure> {
        match (&variant, &args.shift) {
            (MdsVariant::Coset(_), Some(s)) => {
                let params = bitrade::HammingParams::new(q, q)?;
                Ok(MdsVariant::Coset(Some(params.word(s.clone())?)))
            }
            (MdsVariant::Swap, Some(_)) => usage("--shift only applies to --variant coset"),
            _ => Ok(variant.clone()),
        }
    };
    let base = |q: usize| -> std::result::Result<Base, Failure> {
        Ok(match args.base {
            BaseArg::Alt => Base::Alt,
            BaseArg::Mds => Base::Mds(mds_variant(q)?),
        })
    };
    let check_inputs = !args.no_verify_inputs;
    let b = match args.construction {
        Construction::Alt => {
            let q = q()?;
            tensor_power(&base_bitrade(q, &Base::Alt)?, args.r.unwrap_or(1))?
        }
        Construction::Mds => {
            let q = q()?;
            tensor_power(
                &base_bitrade(q, &Base::Mds(mds_variant(q)?))?,
                args.r.unwrap_or(1),
            )?
        }
        Construction::Tensor => match (&args.left, &args.right) {
            (Some(l), Some(r)) => tensor_combine(
                &load_checked(l, check_inputs)?,
                &load_checked(r, check_inputs)?,
            )?,
            _ => {
                let q = q()?;
                tensor_power(&base_bitrade(q, &base(q)?)?, args.r.unwrap_or(2))?
            }
        },
        Construction::Lift => match &args.input {
            Some(path) => lift_to_perfect(&load_checked(path, check_inputs)?)?,
            None => {
                let q = q()?;
                lift_to_perfect(&tensor_power(
                    &base_bitrade(q, &base(q)?)?,
                    args.r.unwrap_or(1),
                )?)?
            }
        },
    };
    let text = io::render(&b, args.format.into());
    let summary = format!(
        "{} bitrade in {}, volume {}",
        b.kind(),
        b.params(),
        b.volume()
    );
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).map_err(Error::from)?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn parse_checks(names: &[String]) -> std::result::Result<Vec<Criterion>, Failure> {
    let mut out = Vec::new();
    for name in names {
        let list: &[Criterion] = match name.trim() {
            "all" => &[
                Criterion::Definition,
                Criterion::MinDist,
                Criterion::Eigen,
                Criterion::Dist2Count,
                Criterion::Delsarte,
            ],
            "definition" => &[Criterion::Definition],
            "eigen" => &[Criterion::Eigen],
            "dist2" => &[Criterion::Dist2Count],
            "delsarte" => &[Criterion::Delsarte],
            "mindist" => &[Criterion::MinDist],
            other => return usage(format!("unknown check '{other}'")),
        };
        for c in list {
            if !out.contains(c) {
                out.push(*c);
            }
        }
    }
    Ok(out)
}

fn verify_cmd(args: VerifyArgs) -> Outcome {
    let checks = parse_checks(&args.checks)?;
    let b = io::load(&args.input)?;
    println!(
        "{} bitrade in {}, volume {}",
        b.kind(),
        b.params(),
        b.volume()
    );
    let mut reports: Vec<VerificationReport> = Vec::new();
    for c in checks {
        match c {
            Criterion::Definition => {
                reports.push(verify::verify_definition(&b));
                if args.full {
                    reports.push(match b.kind() {
                        BitradeKind::Spherical => verify::verify_spherical_full(&b)?,
                        BitradeKind::Perfect => verify::verify_perfect_full(&b)?,
                    });
                }
            }
            Criterion::Eigen => {
                println!("eigenvalue λ={}", b.kind().eigenvalue());
                reports.push(verify::eigen_bitrade_check(&b));
            }
            Criterion::Dist2Count => {
                if b.kind() == BitradeKind::Spherical {
                    reports.push(verify::dist2_count_check(&b));
                } else {
                    println!("skip dist2 (applies to spherical bitrades only)");
                }
            }
            Criterion::Delsarte => reports.push(verify::delsarte_bitrade_check(
                &b,
                args.face_budget,
                args.seed,
            )),
            Criterion::MinDist => reports.push(verify::mindist_check(&b)),
        }
    }
    for r in &reports {
        println!("{r}");
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn search(args: SearchArgs) -> Outcome {
    let params = bitrade::HammingParams::new(args.n, args.q)?;
    let kind = match args.kind {
        Some(KindArg::Perfect) => BitradeKind::Perfect,
        Some(KindArg::Spherical) => BitradeKind::Spherical,
        None if args.n.is_multiple_of(args.q.max(1)) => BitradeKind::Spherical,
        None => BitradeKind::Perfect,
    };
    let mut cfg = match args.mode {
        ModeArg::Exhaustive => SearchConfig::exhaustive(params),
        ModeArg::Local => SearchConfig::local(params, args.seed),
        ModeArg::Dive => SearchConfig::dive(params, args.seed),
    };
    cfg.seed = args.seed;
    cfg.volume_upper_bound = args.upper_bound;
    cfg.symmetry_breaking = !args.no_symmetry;
    cfg.progress = args.progress;
    if let Some(secs) = args.budget {
        if !(secs.is_finite() && secs > 0.0) {
            return usage("--budget must be a positive number of seconds");
        }
        cfg.time_budget = Some(Duration::from_secs_f64(secs));
    }
    if let Some(s) = args.steps {
        cfg.max_steps = s;
    }
    if let Some(r) = args.restarts {
        cfg.restarts = r;
    }
    if let Some(path) = &args.init {
        if cfg.mode != SearchMode::Local {
            return usage("--init only applies to --mode local");
        }
        cfg.initial = Some(io::load(path)?);
    }
    let result = match kind {
        BitradeKind::Perfect => min_perfect_volume(&cfg)?,
        BitradeKind::Spherical => find_spherical(&cfg)?,
    };
    println!("{kind} bitrades in {params}, seed {}", args.seed);
    match (&result.best, result.proven_minimum) {
        (Some(b), true) => println!("minimum volume {} (proven)", b.volume()),
        (Some(b), false) => println!("best volume {} (not proven minimal)", b.volume()),
        (None, true) => match args.upper_bound {
            Some(ub) => println!("no bitrade of volume <= {ub} (proven)"),
            None => println!("no bitrade exists (proven)"),
        },
        (None, false) => println!("no bitrade found"),
    }
    if result.budget_exhausted {
        println!("time budget exhausted");
    }
    println!(
        "nodes {}, time {:.3}s",
        result.nodes_explored,
        result.wall_time.as_secs_f64()
    );
    if let Some(b) = &result.best {
        println!("{}", verify::verify_definition(b));
        if let Some(path) = &args.out {
            io::save(path, b, args.format.into())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn info(path: PathBuf) -> Outcome {
    let b = io::load(&path)?;
    let p = b.params();
    let d0 = b.t0().min_distance();
    let d1 = b.t1().min_distance();
    let cross = code_distance(b.t0(), b.t1())?;
    println!("n {}", p.n());
    println!("q {}", p.q());
    println!("kind {}", b.kind());
    println!("volume {}", b.volume());
    println!("d(T0) {d0}");
    println!("d(T1) {d1}");
    println!("d {d0}/{d1}");
    println!("cross-distance {cross}");
    Ok(())
}
