use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use orlicz_core::functional::{el_residual, ProblemSpec};
use orlicz_core::gfunction::{conjugate_numeric, simonenko_indices, ConjugateOpts};
use orlicz_core::hypothesis::check_problem;
use orlicz_core::mountain_pass::{certify, geometry, solve};
use orlicz_core::orlicz_space::{luxemburg_norm, modular, space_report, PeriodicGridFunction};
use orlicz_core::report::trajectory_csv;
use orlicz_core::{GFunctionSpec, Report, RunConfig, SamplingPlan, ToReport};

/// Orlicz-Sobolev periodic problems: G-function invariants, norms,
/// hypothesis checks and mountain-pass solutions.
#[derive(Parser, Debug)]
#[command(name = "orlicz", version)]
struct Cli {
    /// Directory for reports and CSV artifacts.
    #[arg(long, global = true, env = "ORLICZ_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Simonenko indices p_G, q_G and q_G^inf.
    Indices {
        #[command(flatten)]
        g: GArgs,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Fenchel conjugate G*(y).
    Conjugate {
        #[command(flatten)]
        g: GArgs,
        /// Comma-separated point, e.g. `1,0.5`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
    },
    /// Luxemburg norm of a constant or CSV-loaded periodic function.
    Norm {
        #[command(flatten)]
        g: GArgs,
        /// Constant value per component.
        #[arg(long = "const", value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "csv")]
        constant: Option<Vec<f64>>,
        /// Grid function CSV (`t,u1,...`); prints the full space report.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Half period.
        #[arg(long = "T", default_value_t = 1.0)]
        half_period: f64,
        #[arg(long, default_value_t = 256)]
        m: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
    },
    /// Check the standing assumptions and theorem inequalities.
    Check {
        #[command(flatten)]
        run: RunArgs,
        /// Only evaluate the Euler-Lagrange residual of this solution CSV.
        #[arg(long)]
        residual: Option<PathBuf>,
    },
    /// Tent endpoint and sampled action on the rim.
    Rim {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Mountain-pass solve.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Also run the L-infinity refinement certificate.
        #[arg(long)]
        certify: bool,
    },
}

#[derive(Args, Debug)]
struct GArgs {
    /// `name[:p1,p2]`, e.g. `power:2`, `double_power:2,4`, `example1`.
    #[arg(long)]
    g: String,
    /// Dimension N (default 2 for example1, else 1).
    #[arg(long)]
    dim: Option<usize>,
}

impl GArgs {
    fn build(&self) -> Result<GFunctionSpec> {
        let dim = self.dim.unwrap_or(if self.g.trim().starts_with("example1") { 2 } else { 1 });
        Ok(GFunctionSpec::parse(&self.g, dim)?)
    }
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    directions: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Problem file (TOML).
    #[arg(long)]
    problem: PathBuf,
    /// Overrides `grid.m`.
    #[arg(long)]
    m: Option<usize>,
    /// Overrides `solver.seed` and `check.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `solver.grad_tol`.
    #[arg(long)]
    grad_tol: Option<f64>,
    /// Overrides `check.tol`.
    #[arg(long)]
    tol: Option<f64>,
}

impl RunArgs {
    fn load(&self) -> Result<(RunConfig, ProblemSpec)> {
        if !self.problem.is_file() {
            bail!("problem file {} does not exist", self.problem.display());
        }
        let mut cfg = RunConfig::load(&self.problem).with_context(|| format!("loading {}", self.problem.display()))?;
        if let Some(m) = self.m {
            cfg.grid.m = Some(m);
        }
        if let Some(s) = self.seed {
            cfg.solver.seed = s;
            cfg.check.seed = Some(s);
        }
        if let Some(t) = self.grad_tol {
            cfg.solver.grad_tol = t;
        }
        if let Some(t) = self.tol {
            cfg.check.tol = Some(t);
        }
        cfg.validate()?;
        let prob = cfg.build_problem()?;
        Ok((cfg, prob))
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

/// Prints `report` and saves it as `name` when an output directory is set.
fn emit(out: Option<&Path>, name: &str, report: &Report) -> Result<()> {
    print!("{report}");
    if let Some(dir) = out {
        write(dir, name, &report.to_string())?;
    }
    Ok(())
}

fn short(v: f64) -> String {
    let s = format!("{v:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Indices { g, plan } => {
            let g = g.build()?;
            let mut p = SamplingPlan::default();
            p.r_min = plan.r_min.unwrap_or(p.r_min);
            p.r_max = plan.r_max.unwrap_or(p.r_max);
            p.directions = plan.directions.unwrap_or(p.directions);
            p.seed = plan.seed.unwrap_or(p.seed);
            let idx = simonenko_indices(&g, &p)?;
            println!("p_G={}, q_G={}, q_G_inf={}", short(idx.p_g), short(idx.q_g), short(idx.q_g_inf));
            let mut r = Report::new();
            r.text("g", g.label());
            r.nest("indices", idx.to_report());
            emit(out, "indices.txt", &r)?;
        }
        Cmd::Conjugate { g, y } => {
            let g = g.build()?;
            if y.len() != g.dim() {
                bail!("--y has {} component(s), {} has dimension {}", y.len(), g.label(), g.dim());
            }
            let opts = ConjugateOpts::default();
            let mut r = Report::new();
            r.text("g", g.label()).nums("y", &y);
            match g.analytic_conjugate(&y) {
                Some(v) => {
                    r.num("value", v).text("method", "analytic");
                }
                None => {
                    let c = conjugate_numeric(&g, &y, &opts)?;
                    r.num("value", c.value).text("method", "numeric").nums("argmax", &c.argmax).num("gap", c.gap);
                }
            }
            emit(out, "conjugate.txt", &r)?;
        }
        Cmd::Norm { g, constant, csv, half_period, m, tol, rho0 } => {
            let g = g.build()?;
            let u = match (constant, csv) {
                (Some(c), None) => {
                    if c.len() != g.dim() {
                        bail!("--const has {} component(s), {} has dimension {}", c.len(), g.label(), g.dim());
                    }
                    PeriodicGridFunction::constant(half_period, m, &c)?
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    PeriodicGridFunction::from_csv(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                _ => bail!("give exactly one of --const or --csv"),
            };
            let norm = luxemburg_norm(&g, &u, tol)?;
            let mut r = Report::new();
            r.text("g", g.label()).num("norm", norm).num("modular", modular(&g, &u));
            r.nest("space", space_report(&g, &u, rho0, tol)?.to_report());
            emit(out, "norm.txt", &r)?;
        }
        Cmd::Check { run, residual } => {
            let (cfg, prob) = run.load()?;
            if let Some(path) = residual {
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let u = PeriodicGridFunction::from_csv(&text).with_context(|| format!("parsing {}", path.display()))?;
                let mut r = Report::new();
                r.text("problem", &prob.name).num("el_residual", el_residual(&prob, &u)?);
                emit(out, "residual.txt", &r)?;
                return Ok(ExitCode::SUCCESS);
            }
            let rep = check_problem(&prob, &cfg.hypothesis_opts())?;
            emit(out, "check.txt", &rep.to_report())?;
            if !rep.theorem_holds() || !rep.all_assumptions_pass() {
                eprintln!("hypotheses not satisfied for {}", prob.name);
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::Rim { run } => {
            let (cfg, prob) = run.load()?;
            let geo = geometry(&prob, &cfg.solver_config(), None)?;
            let mut r = Report::new();
            r.text("problem", &prob.name)
                .num("rho", geo.rho)
                .num("endpoint_xi", geo.xi)
                .num("alpha", geo.rim.alpha)
                .text("analytic_bound", geo.rim.analytic_bound.map_or("none".into(), |b| format!("{b:?}")))
                .text("samples", geo.rim.samples)
                .text("skipped", geo.rim.skipped);
            for w in &geo.rim.warnings {
                r.text("warning", w);
            }
            emit(out, "rim.txt", &r)?;
            write(out.unwrap_or(Path::new(".")), "endpoint.csv", &geo.endpoint.to_csv())?;
        }
        Cmd::Solve { run, certify: cert } => {
            let (cfg, prob) = run.load()?;
            let rep = solve(&prob, &cfg.solver_config())?;
            let dir = out.unwrap_or(Path::new("."));
            let mut r = rep.to_report();
            if cert {
                r.nest("cert", certify(&prob, &rep.u_star)?.to_report());
            }
            print!("{r}");
            write(dir, "solve_report.txt", &r.to_string())?;
            write(dir, "u_star.csv", &rep.u_star.to_csv())?;
            write(dir, "trajectory.csv", &trajectory_csv(&rep.u_star))?;
            write(dir, "trace.csv", &rep.trace_csv())?;
            if !rep.converged {
                bail!("solver did not converge (grad_norm {:e}, el_residual {:e})", rep.grad_norm, rep.el_residual);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
