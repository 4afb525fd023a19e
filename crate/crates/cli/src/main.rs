use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eisrank::hecke::{compute_point, HeckeConfig};
use eisrank::invariants::{check_setup, lecouturier_invariant, merel_invariant, predict, wake_unit, ParameterPoint};
use eisrank::linalg::Matrix;
use eisrank::modsym::{dim_cusp_forms, ManinSymbolSpace, OperatorName, SubspaceTag, DEFAULT_RESOURCE_BOUND};
use eisrank::{LocalRing, PadicTruncation, Rationals};
use eisrank_cli::sweep::{self, SweepConfig};
use eisrank_cli::{Cache, Engine};
use serde_json::json;

#[derive(Parser)]
#[command(name = "eisrank", version, about = "Ranks of Eisenstein-local Hecke algebras at prime level")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sub {
    Full,
    Cuspidal,
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Residue criteria and hypothesis flags at one point.
    Invariants {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        json: bool,
    },
    /// Build a space of modular symbols and print an operator or the dimensions.
    Modsym {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        k: u32,
        /// T<q>, w, star or dims.
        #[arg(long)]
        op: String,
        /// Work in ℤ/p^N instead of ℚ.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value = "full")]
        subspace: Sub,
        /// Write the matrix as JSON instead of printing it.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_RESOURCE_BOUND)]
        resource_bound: u64,
    },
    /// Rank, index, generator count and tangent dimension at one point.
    Rank {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        json: bool,
        /// Also compute from the full and cuspidal spaces and compare.
        #[arg(long)]
        cross_checks: bool,
        #[arg(long, default_value_t = DEFAULT_RESOURCE_BOUND)]
        resource_bound: u64,
    },
    /// Sweep points and compare predictions with computations.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        ell_max: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        k: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, env = "EISRANK_CACHE_DIR")]
        cache: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
        /// Reports go to <PATH>.csv and <PATH>.json; without it the CSV is printed.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_RESOURCE_BOUND)]
        resource_bound: u64,
        #[arg(long)]
        weight_stab: bool,
        #[arg(long)]
        cross_checks: bool,
    },
}

enum Failure {
    Usage(String),
    Checks(String),
    Internal(String),
}

impl From<eisrank::Error> for Failure {
    fn from(e: eisrank::Error) -> Self {
        match e {
            eisrank::Error::Parameter(_) | eisrank::Error::ResourceBound { .. } | eisrank::Error::InvalidRing(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?);
    Ok(())
}

fn invariants(p: u64, ell: u64, k: u32, as_json: bool) -> Result<(), Failure> {
    let pt = ParameterPoint::new(p, ell, k)?;
    let h = check_setup(&pt);
    if !h.p_divides_ell_minus_1 {
        return Err(Failure::Usage(format!("{p} does not divide {ell} - 1")));
    }
    let (m, w, l) = (merel_invariant(&pt)?, wake_unit(&pt)?, lecouturier_invariant(&pt)?);
    let pred = predict(&pt).ok();
    if as_json {
        return print_json(&json!({
            "point": pt, "hypotheses": h,
            "merel": m, "wake": w, "lecouturier": l, "prediction": pred,
        }));
    }
    println!("p={p} ell={ell} k={k} nu={} v_p(k)={}", pt.nu, pt.vpk);
    println!("hypotheses: {}", if h.all_ok { "ok".to_string() } else { h.failures().join(", ") });
    for (name, v) in [("merel", m), ("wake", w), ("lecouturier", l)] {
        println!("{name:<12} {:>6}  p-th power: {}", v.value.value, v.is_pth_power);
    }
    match pred {
        Some(pr) => println!(
            "predicted: rank > 1: {}, Eisenstein ideal principal: {}",
            pr.rank_gt_1_predicted, pr.eis_principal_predicted
        ),
        None => println!("predicted: none (hypotheses fail)"),
    }
    Ok(())
}

fn show_operator<R: LocalRing>(
    space: &ManinSymbolSpace<R>,
    op: &str,
    sub: Sub,
    dump: Option<PathBuf>,
) -> Result<(), Failure> {
    if op == "dims" {
        let (l, k) = (space.level(), space.weight());
        println!("modular symbols: {}", space.dim());
        println!("cuspidal: {}", space.cuspidal_dim());
        println!("cuspidal plus: {}", space.plus_dim());
        println!("cusp forms: {}", dim_cusp_forms(l, k));
        println!("Manin generators: {}", space.num_generators());
        return Ok(());
    }
    let name: OperatorName = op.parse()?;
    let tag = match sub {
        Sub::Full => SubspaceTag::Full,
        Sub::Cuspidal => SubspaceTag::Cuspidal,
        Sub::Plus => SubspaceTag::CuspidalPlus,
        Sub::Minus => SubspaceTag::CuspidalMinus,
    };
    let m: Matrix<R> = match name {
        OperatorName::Hecke(q) => space.hecke_operator(q, tag)?.matrix,
        OperatorName::AtkinLehner => space.atkin_lehner(tag)?.matrix,
        OperatorName::Star => space.star_involution(tag)?.matrix,
    };
    match dump {
        Some(path) => {
            let text = serde_json::to_string_pretty(&m.to_dump()).map_err(|e| Failure::Internal(e.to_string()))?;
            std::fs::write(path, text)?;
        }
        None => {
            let r = m.ring();
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(|x| r.to_decimal(x)).collect();
                println!("{}", row.join(" "));
            }
        }
    }
    Ok(())
}

fn rank(p: u64, ell: u64, k: u32, as_json: bool, cross: bool, bound: u64) -> Result<(), Failure> {
    let cfg = HeckeConfig { full_space_check: cross, cuspidal_check: cross, resource_bound: bound, ..Default::default() };
    let (_, alg, report) = compute_point(p, ell, k, &cfg)?;
    if as_json {
        return print_json(&report);
    }
    println!("p={p} ell={ell} k={k} Sturm bound {} with {} generators", alg.sturm_bound, alg.generators.len());
    println!("dim S_k: {}", report.algebra_dim);
    println!("rank of the Eisenstein-local algebra: {}", report.rank);
    println!("index valuation: {}", report.index_valuation);
    println!("generators of the Eisenstein ideal: {}", report.min_gens);
    match report.tangent_dim_t {
        Some(t) => println!("tangent dimension: {t}"),
        None => println!("tangent dimension: n/a"),
    }
    if let Some(t) = report.full_space_tangent {
        println!("tangent dimension from the full space: {t}");
    }
    if let Some(a) = report.cuspidal_aligned {
        println!("cuspidal and plus algebras aligned: {a}");
    }
    Ok(())
}

fn verify(cfg: SweepConfig) -> Result<(), Failure> {
    cfg.validate().map_err(Failure::Usage)?;
    let engine = Engine::new(cfg.hecke_config(), cfg.cache_dir.as_ref().map(Cache::new).transpose()?);
    let out = sweep::sweep_with(&cfg, &engine)?;
    if cfg.report_path.is_none() {
        print!("{}", sweep::csv_report(&out.records));
    }
    let s = &out.summary;
    eprintln!(
        "{} points, {} skipped, {} errors, {} modular symbol builds",
        s.points, s.skipped, s.errors, out.modsym_builds
    );
    for (name, c) in &s.checks {
        eprintln!("  {name:<26} pass {:>4}  fail {:>4}  n/a {:>4}", c.pass, c.fail, c.not_applicable);
    }
    for r in out.records.iter().filter(|r| r.error.is_some()) {
        eprintln!("error at p={} ell={} k={}: {}", r.point.p, r.point.ell, r.point.k, r.error.as_ref().unwrap());
    }
    if s.errors > 0 {
        return Err(Failure::Internal(format!("{} points failed to compute", s.errors)));
    }
    if cfg.strict && s.failures() > 0 {
        return Err(Failure::Checks(format!("{} check failures", s.failures())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Invariants { p, ell, k, json } => invariants(p, ell, k, json),
        Command::Modsym { ell, k, op, p, subspace, dump, resource_bound } => match p {
            Some(p) => {
                let ring = PadicTruncation::new(p, PadicTruncation::max_precision(p))?;
                show_operator(&ManinSymbolSpace::build(ring, ell, k, resource_bound)?, &op, subspace, dump)
            }
            None => show_operator(&ManinSymbolSpace::build(Rationals, ell, k, resource_bound)?, &op, subspace, dump),
        },
        Command::Rank { p, ell, k, json, cross_checks, resource_bound } => {
            rank(p, ell, k, json, cross_checks, resource_bound)
        }
        Command::Verify {
            p,
            ell_max,
            k,
            jobs,
            cache,
            no_cache,
            report,
            strict,
            resource_bound,
            weight_stab,
            cross_checks,
        } => verify(SweepConfig {
            primes_p: p,
            ell_max,
            weights_k: k,
            resource_bound,
            jobs,
            cache_dir: if no_cache { None } else { cache },
            report_path: report,
            strict,
            weight_stab,
            cross_checks,
        }),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Checks(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
