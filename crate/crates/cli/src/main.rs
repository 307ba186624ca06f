//! Command-line lab: length spectra of cocompact Fuchsian groups, zeta
//! log-derivative series, spectral-side evaluations, trace-formula
//! identity verification, Monte Carlo Benjamini-Schramm statistics, and
//! the exactly-computable graph (Ihara zeta) analogue.
//!
//! Exit codes: 0 success, 1 validation failure, 2 budget/acceptance
//! failure, 3 resource budget exceeded. `BSZETA_THREADS` caps parallelism.

mod config;
mod experiment;

use bszeta::fuchsian::{self, EnumOptions, FuchsError, GroupPresentation};
use bszeta::graphzeta::{self, Graph, GraphError};
use bszeta::bsstats::{BsError, QuotientGeometry};
use bszeta::spectral::{self, SpectralError};
use bszeta::zetageom::{self, ZetaError};
use bszeta::files::{self, FilesError};
use bszeta::Real;
use clap::{Parser, Subcommand};
use config::Config;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::path::PathBuf;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError { code: 1, msg: msg.into() }
    }
    pub fn budget(msg: impl Into<String>) -> Self {
        CliError { code: 2, msg: msg.into() }
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        CliError { code: 3, msg: msg.into() }
    }
}

impl From<FilesError> for CliError {
    fn from(e: FilesError) -> Self {
        CliError::validation(e.to_string())
    }
}
impl From<FuchsError> for CliError {
    fn from(e: FuchsError) -> Self {
        match e {
            FuchsError::BudgetExceeded(_) => CliError::resource(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}
impl From<BsError> for CliError {
    fn from(e: BsError) -> Self {
        match e {
            BsError::RejectionBudget(_) => CliError::resource(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}
impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        CliError::validation(e.to_string())
    }
}
impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::validation(e.to_string())
    }
}
impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::BudgetExceeded(_) | GraphError::GenerationFailed(_) => {
                CliError::resource(e.to_string())
            }
            _ => CliError::validation(e.to_string()),
        }
    }
}
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::validation(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "bszeta", version, about)]
struct Cli {
    /// JSON config file; flags override config, config overrides defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group presentation operations
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Length spectrum operations
    Spectrum {
        #[command(subcommand)]
        cmd: SpectrumCmd,
    },
    /// Geometric-side zeta series
    Zeta {
        #[command(subcommand)]
        cmd: ZetaCmd,
    },
    /// Spectral-side evaluations from eigenvalue data
    Spectral {
        #[command(subcommand)]
        cmd: SpectralCmd,
    },
    /// Trace-formula identity
    Identity {
        #[command(subcommand)]
        cmd: IdentityCmd,
    },
    /// Benjamini-Schramm statistics
    Bs {
        #[command(subcommand)]
        cmd: BsCmd,
    },
    /// Graph (Ihara zeta) analogue
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Full convergence experiment
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate a group file: hyperbolic generators, relator, covolume
    Validate {
        #[arg(long)]
        group: PathBuf,
    },
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Enumerate the length spectrum up to a cutoff
    Compute {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        cutoff: Option<f64>,
        /// optional cover file: spectrum of the corresponding cover
        #[arg(long)]
        cover: Option<PathBuf>,
        /// output CSV (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Evaluate the series and derivatives over an s-grid
    Eval {
        #[arg(long)]
        spectrum: PathBuf,
        /// s values, e.g. "2" or "1.5+1i" (comma-separated)
        #[arg(long, value_delimiter = ',')]
        s: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SpectralCmd {
    /// Evaluate the spectral-side formulas at real s values
    Eval {
        #[arg(long)]
        eigen: PathBuf,
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        #[arg(long)]
        hkp_c: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum IdentityCmd {
    /// Verify the two-point identity between a spectrum and eigenvalue data
    Verify {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        eigen: PathBuf,
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BsCmd {
    /// Monte Carlo estimates of P(InjRad <= R) and the orbit-count statistic
    Estimate {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        /// thresholds R for P(InjRad <= R)
        #[arg(long, value_delimiter = ',')]
        r: Vec<f64>,
        /// displacement radii c for the orbit-count statistic
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Exact Ihara zeta values and the walk series
    Zeta {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// generate instead: "n,d,seed" pairing-model regular graph
        #[arg(long)]
        random: Option<String>,
        /// series point as a fraction, e.g. "1/4"
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        m_max: Option<usize>,
        /// write the (possibly generated) graph as an edge list
        #[arg(long)]
        out_graph: Option<PathBuf>,
    },
    /// Tree-ball (local convergence) statistic
    Bs {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        random: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run the full convergence experiment from a config
    Run {
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn parse_s_value(s: &str) -> Result<Complex64, CliError> {
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    // forms like "1.5+1i" / "1.5-0.5i"
    if let Some(body) = s.strip_suffix('i') {
        // split at the last +/- that is not an exponent sign or leading
        let chars: Vec<char> = body.chars().collect();
        for k in (1..chars.len()).rev() {
            let c = chars[k];
            if (c == '+' || c == '-') && chars[k - 1] != 'e' && chars[k - 1] != 'E' {
                let (re_s, im_s) = body.split_at(k);
                let re = re_s.parse::<f64>();
                let im = if im_s == "+" {
                    Ok(1.0)
                } else if im_s == "-" {
                    Ok(-1.0)
                } else {
                    im_s.parse::<f64>()
                };
                if let (Ok(re), Ok(im)) = (re, im) {
                    return Ok(Complex64::new(re, im));
                }
            }
        }
    }
    Err(CliError::validation(format!("cannot parse s value '{s}'")))
}

fn parse_fraction(s: &str) -> Result<BigRational, CliError> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| CliError::validation(format!("fraction '{s}' must be N/D")))?;
    let n: i64 = n.trim().parse().map_err(|_| CliError::validation(format!("bad numerator '{n}'")))?;
    let d: i64 = d.trim().parse().map_err(|_| CliError::validation(format!("bad denominator '{d}'")))?;
    if d == 0 {
        return Err(CliError::validation("zero denominator"));
    }
    Ok(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            if let Some(parent) = p.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Loads a graph from a file or generates one from "n,d,seed".
fn load_graph(graph: &Option<PathBuf>, random: &Option<String>) -> Result<Graph, CliError> {
    match (graph, random) {
        (Some(p), None) => Ok(files::read_graph(p)?),
        (None, Some(spec)) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::validation("--random expects n,d,seed"));
            }
            let n: usize = parts[0].trim().parse().map_err(|_| CliError::validation("bad n"))?;
            let d: usize = parts[1].trim().parse().map_err(|_| CliError::validation("bad d"))?;
            let seed: u64 = parts[2].trim().parse().map_err(|_| CliError::validation("bad seed"))?;
            Ok(graphzeta::random_regular(n, d, seed)?)
        }
        _ => Err(CliError::validation("provide exactly one of --graph / --random")),
    }
}

fn run_generic<T: Real>(cfg: &Config, cmd: Cmd) -> Result<(), CliError> {
    let opts = EnumOptions { dedup_tol: cfg.dedup_tol, ..EnumOptions::default() };
    match cmd {
        Cmd::Group { cmd: GroupCmd::Validate { group } } => {
            let pres: GroupPresentation<T> = files::read_group(&group)?;
            let covolume = fuchsian::validate_group(&pres)?;
            println!("group: ok");
            println!("genus = {}", pres.genus);
            println!("generators = {}", pres.n_generators());
            println!("covolume = {covolume}");
            Ok(())
        }
        Cmd::Spectrum { cmd: SpectrumCmd::Compute { group, cutoff, cover, out } } => {
            let pres: GroupPresentation<T> = files::read_group(&group)?;
            let cutoff = cutoff.unwrap_or(cfg.cutoff);
            let spec = match cover {
                Some(cp) => {
                    let cov = files::read_cover(&cp)?;
                    fuchsian::cover_length_spectrum(&pres, &cov, cutoff, &opts)?
                }
                None => fuchsian::length_spectrum(&pres, cutoff, &opts)?,
            };
            emit(&out, &files::write_spectrum_string(&spec))
        }
        Cmd::Zeta { cmd: ZetaCmd::Eval { spectrum, s, out } } => {
            let spec = files::read_spectrum(&spectrum)?;
            let points: Vec<Complex64> = if s.is_empty() {
                default_s_points(cfg)
            } else {
                s.iter().map(|x| parse_s_value(x)).collect::<Result<_, _>>()?
            };
            let mut text = String::from(
                "s_re,s_im,log_deriv_re,log_deriv_im,normalized_re,normalized_im,ds_re,ds_im,ds2_re,ds2_im,tail_bound\n",
            );
            for sp in points {
                let l = zetageom::log_deriv(&spec, sp)?;
                let nl = zetageom::normalized_log_deriv(&spec, sp)?;
                let d1 = zetageom::ds_log_deriv(&spec, sp)?;
                let d2 = zetageom::ds2_log_deriv(&spec, sp)?;
                let tail = zetageom::tail_bound(&spec, sp)
                    .map(|t| t.to_string())
                    .unwrap_or_else(|_| "unfit".into());
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    sp.re, sp.im, l.re, l.im, nl.re, nl.im, d1.re, d1.im, d2.re, d2.im, tail
                ));
            }
            emit(&out, &text)
        }
        Cmd::Spectral { cmd: SpectralCmd::Eval { eigen, s, hkp_c, out } } => {
            let data = files::read_eigen(&eigen)?;
            let points = if s.is_empty() { cfg.s_grid.clone() } else { s };
            let mut text = String::from("s,ds,ds_weyl_tail,ds2,ds2_weyl_tail\n");
            for sv in points {
                let d1 = spectral::spectral_ds(&data, sv)?;
                let d2 = spectral::spectral_ds2(&data, sv)?;
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    sv, d1.value, d1.weyl_tail, d2.value, d2.weyl_tail
                ));
            }
            let c = hkp_c.unwrap_or(cfg.hkp_c);
            let (ok, worst) = spectral::hkp_bound_check(&data, c);
            text.push_str(&format!("# hkp_bound C = {c}: ok = {ok}, worst_T = {worst}\n"));
            emit(&out, &text)?;
            if !ok {
                return Err(CliError::budget(format!(
                    "counting bound N(T) <= C vol T violated at T = {worst}"
                )));
            }
            Ok(())
        }
        Cmd::Identity { cmd: IdentityCmd::Verify { spectrum, eigen, s, b, out } } => {
            let spec = files::read_spectrum(&spectrum)?;
            let data = files::read_eigen(&eigen)?;
            if (spec.covolume - data.vol).abs() > 1e-6 * data.vol {
                return Err(CliError::validation(format!(
                    "covolume mismatch: spectrum {} vs eigenvalue data {}",
                    spec.covolume, data.vol
                )));
            }
            let b = b.unwrap_or(cfg.b_point);
            let points = if s.is_empty() { vec![1.0, 1.5, 2.0] } else { s };
            let mut text = String::from("s,b,residual,budget,within\n");
            let mut all_ok = true;
            for sv in points {
                let res = spectral::identity_residual(&spec, &data, sv, b)?;
                let budget = spectral::identity_budget(&spec, &data, sv, b)?;
                let ok = res.abs() <= budget;
                all_ok &= ok;
                text.push_str(&format!("{sv},{b},{res},{budget},{ok}\n"));
            }
            emit(&out, &text)?;
            if !all_ok {
                return Err(CliError::budget("identity residual exceeds budget"));
            }
            Ok(())
        }
        Cmd::Bs { cmd: BsCmd::Estimate { group, cover, r, c, samples, seed, out } } => {
            let pres: GroupPresentation<T> = files::read_group(&group)?;
            let cov = cover.map(|p| files::read_cover(&p)).transpose()?;
            if let Some(cv) = &cov {
                cv.validate(&pres.relator, pres.n_generators())?;
            }
            let r_grid = if r.is_empty() { cfg.r_grid.clone() } else { r };
            let c_grid = if c.is_empty() { cfg.c_grid.clone() } else { c };
            let samples = samples.unwrap_or(cfg.samples);
            let seed = seed.unwrap_or(cfg.seed);
            let need = r_grid
                .iter()
                .map(|x| 2.0 * x)
                .chain(c_grid.iter().copied())
                .fold(0.0f64, f64::max);
            let tb = 2.0 * ((need + 0.05) / 2.0).cosh();
            let ball = fuchsian::enumerate_ball(&pres, tb, &opts)?;
            let geom = QuotientGeometry::new(&pres, &ball, cov.as_ref())?;
            let degree = cov.as_ref().map_or(1, |c| c.degree);
            let mut text = String::from("cover_degree,kind,R_or_c,estimate,ci95,n_samples,seed\n");
            for rv in &r_grid {
                let (p, ci) = geom.bs_probability(*rv, samples, seed)?;
                text.push_str(&format!("{degree},inj_rad_prob,{rv},{p},{ci},{samples},{seed}\n"));
            }
            for cv in &c_grid {
                let st = geom.orbit_count_statistic(*cv, samples, seed)?;
                text.push_str(&format!("{degree},orbit_count,{cv},{st},,{samples},{seed}\n"));
            }
            emit(&out, &text)
        }
        Cmd::Graph { cmd: GraphCmd::Zeta { graph, random, u, m_max, out_graph } } => {
            let g = load_graph(&graph, &random)?;
            if let Some(p) = &out_graph {
                files::write_graph(p, &g)?;
            }
            let u = match u {
                Some(s) => parse_fraction(&s)?,
                None => BigRational::new(BigInt::from(cfg.graph_u[0]), BigInt::from(cfg.graph_u[1])),
            };
            let m_max = m_max.unwrap_or(cfg.graph_m_max);
            let ld = graphzeta::log_deriv_ihara(&g, &u, m_max)?;
            println!("n = {}, m = {}", g.n(), g.m());
            // exact rational determinants are cubic with fraction growth;
            // only feasible on small graphs
            if g.n() <= 256 {
                let inv = graphzeta::ihara_inv_bass(&g, &u)?;
                println!("zeta_inv({u}) = {inv}");
            } else {
                println!("zeta_inv({u}) = (skipped: exact determinant limited to n <= 256)");
            }
            println!(
                "log_deriv_partial({u}, m <= {m_max}) = {} ~ {}",
                ld.partial,
                ld.partial.to_f64().unwrap_or(f64::NAN)
            );
            println!("log_deriv_tail_bound = {}", ld.tail_bound);
            println!(
                "per_vertex_log_deriv = {}",
                ld.partial.to_f64().unwrap_or(f64::NAN) / g.n() as f64
            );
            Ok(())
        }
        Cmd::Graph { cmd: GraphCmd::Bs { graph, random, radius } } => {
            let g = load_graph(&graph, &random)?;
            let r = radius.unwrap_or(cfg.graph_radius);
            println!("tree_ball_fraction(R = {r}) = {}", graphzeta::tree_ball_fraction(&g, r));
            Ok(())
        }
        Cmd::Experiment { cmd: ExperimentCmd::Run { out_dir } } => {
            let mut cfg = cfg.clone();
            if let Some(d) = out_dir {
                cfg.out_dir = d.to_string_lossy().into_owned();
            }
            experiment::run::<T>(&cfg)
        }
    }
}

fn default_s_points(cfg: &Config) -> Vec<Complex64> {
    cfg.s_grid
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(cfg.s_complex.iter().map(|&[re, im]| Complex64::new(re, im)))
        .collect()
}

fn main() {
    if let Ok(threads) = std::env::var("BSZETA_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {}", e.msg);
                std::process::exit(e.code);
            }
        },
        None => Config::default(),
    };
    let result = if cfg.precision_bits < 64 {
        run_generic::<f64>(&cfg, cli.cmd)
    } else {
        run_generic::<bszeta::DoubleDouble>(&cfg, cli.cmd)
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.msg);
        std::process::exit(e.code);
    }
}
