//! Command-line front end for graph K-theory, the rewriting engine and the
//! representation checks.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qcstar::claims::{self, ClaimConfig};
use qcstar::ktheory::k_groups;
use qcstar::ncalgebra::parse_rational;
use qcstar::representations::{
    independence_check, BasisMonomial, SpectrumModel, DEFAULT_DIM, DEFAULT_Q, RESIDUAL_TOLERANCE,
};
use qcstar::{GeneratorMap, Graph, Presentation, Representation};

use report::{print_json, Format};

#[derive(Parser)]
#[command(name = "qcstar", version, about = "Graph C*-algebra K-theory and quantum-space checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for every randomized check.
    #[arg(long, global = true, env = "QCSTAR_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and inspect graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// K_0 and K_1 of a graph C*-algebra.
    Ktheory(GraphSource),
    /// Normal forms and algebra maps.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Truncated representations.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Run every claim check and print a summary table.
    ReproducePaper {
        #[arg(long, default_value_t = DEFAULT_Q)]
        q: f64,
        #[arg(long, default_value_t = DEFAULT_DIM)]
        dim: usize,
    },
}

#[derive(Args)]
struct GraphSource {
    /// Graph file in the vertex/edge text format.
    file: Option<PathBuf>,
    /// One of G1, G2, G3.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Check that a graph file parses.
    Validate(GraphSource),
    /// List the hereditary saturated vertex sets.
    Ideals(GraphSource),
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Normal form of an expression.
    Nf {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        expr: String,
        /// Sphere parameter, a rational in [0, 1].
        #[arg(long)]
        s: Option<String>,
    },
    /// Push every relation of the source through a built-in map.
    VerifyMorphism {
        #[arg(long)]
        name: String,
    },
    /// Whether an element of the sphere is fixed by r1 or r2.
    Fixed {
        #[arg(long)]
        map: String,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Args)]
struct RepParams {
    #[arg(long, default_value_t = DEFAULT_Q)]
    q: f64,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    dim: usize,
    /// Phase of rho_theta.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
}

#[derive(Subcommand)]
enum RepCommand {
    /// Largest entry of every relation on the compressed block.
    Residuals {
        #[arg(long)]
        rep: String,
        /// Expected algebra of the representation.
        #[arg(long)]
        algebra: Option<String>,
        #[command(flatten)]
        params: RepParams,
        #[arg(long, default_value_t = RESIDUAL_TOLERANCE)]
        tol: f64,
    },
    /// Compare the diagonal of a generator with its predicted eigenvalues.
    Spectrum {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        generator: String,
        #[command(flatten)]
        params: RepParams,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Rank and coefficient recovery for the basis monomials of rp2.
    Independence {
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = 3)]
        lmax: u32,
        #[arg(long, default_value_t = DEFAULT_Q)]
        q: f64,
        #[arg(long, default_value_t = 40)]
        nmax: usize,
        #[arg(long, default_value_t = claims::RECOVERY_TRIALS)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a check ran and failed.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Graph(GraphCommand::Validate(src)) => {
            let g = load_graph(src)?;
            #[derive(Serialize)]
            struct Summary<'a> {
                valid: bool,
                vertices: &'a [String],
                edges: usize,
                emitters: Vec<&'a str>,
            }
            let s = Summary {
                valid: true,
                vertices: g.vertices(),
                edges: g.edges().len(),
                emitters: g.emitters().names(&g),
            };
            emit(cli, &s, "graph", || {
                format!("ok: {} vertices, {} edges", s.vertices.len(), s.edges)
            })?;
            Ok(true)
        }
        Command::Graph(GraphCommand::Ideals(src)) => {
            let g = load_graph(src)?;
            let ideals: Vec<Vec<&str>> = g
                .hereditary_saturated_sets()
                .iter()
                .map(|s| s.names(&g))
                .collect();
            emit(cli, &ideals, "ideals", || {
                ideals
                    .iter()
                    .map(|s| format!("{{{}}}", s.join(", ")))
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
            Ok(true)
        }
        Command::Ktheory(src) => {
            let g = load_graph(src)?;
            let k = k_groups(&g);
            emit(cli, &k, "k", || format!("K0 = {}\nK1 = {}", k.k0, k.k1))?;
            Ok(true)
        }
        Command::Algebra(cmd) => run_algebra(cli, cmd),
        Command::Rep(cmd) => run_rep(cli, cmd),
        Command::ReproducePaper { q, dim } => {
            let cfg = ClaimConfig {
                q: *q,
                dim: *dim,
                seed: cli.seed,
            };
            let outcomes = claims::run_all(&cfg);
            let passed = outcomes.iter().all(|o| o.passed());
            #[derive(Serialize)]
            struct Summary<'a> {
                config: ClaimConfig,
                claims: &'a [claims::ClaimOutcome],
                passed: bool,
            }
            let s = Summary {
                config: cfg,
                claims: &outcomes,
                passed,
            };
            emit(cli, &s, "claims", || {
                let mut lines: Vec<String> = outcomes
                    .iter()
                    .map(|o| {
                        let status = if o.passed() { "PASS" } else { "FAIL" };
                        format!("{:<3} {status}  {}\n      {}", o.id, o.claim, o.detail)
                    })
                    .collect();
                let n = outcomes.iter().filter(|o| o.passed()).count();
                lines.push(format!("{n}/{} claims pass", outcomes.len()));
                lines.join("\n")
            })?;
            Ok(passed)
        }
    }
}

fn run_algebra(cli: &Cli, cmd: &AlgebraCommand) -> Result<bool> {
    match cmd {
        AlgebraCommand::Nf { algebra, expr, s } => {
            let s = s.as_deref().map(parse_rational).transpose()?;
            let p = Presentation::builtin(algebra, s.as_ref())?;
            let x = p.parse(expr)?;
            let nf = p.normal_form(&x)?;
            #[derive(Serialize)]
            struct Nf {
                algebra: String,
                input: String,
                normal_form: String,
                terms: usize,
            }
            let out = Nf {
                algebra: p.name().to_string(),
                input: expr.clone(),
                normal_form: p.render(&nf),
                terms: nf.len(),
            };
            emit(cli, &out, "nf", || out.normal_form.clone())?;
            Ok(true)
        }
        AlgebraCommand::VerifyMorphism { name } => {
            let report = GeneratorMap::builtin(name)?.verify()?;
            emit(cli, &report, "report", || {
                let mut lines: Vec<String> = report
                    .relations
                    .iter()
                    .map(|r| format!("{}: {}", r.relation, r.residue))
                    .collect();
                let verdict = if report.valid { "valid" } else { "INVALID" };
                lines.push(format!("{} {} -> {}: {verdict}", report.morphism, report.source, report.target));
                lines.join("\n")
            })?;
            Ok(report.valid)
        }
        AlgebraCommand::Fixed { map, expr } => {
            let m = GeneratorMap::builtin(map)?;
            let p = m.source().clone();
            let x = p.parse(expr)?;
            let fixed = m.is_fixed(&x)?;
            #[derive(Serialize)]
            struct Fixed {
                map: String,
                input: String,
                normal_form: String,
                fixed: bool,
            }
            let out = Fixed {
                map: map.clone(),
                input: expr.clone(),
                normal_form: p.render(&p.normal_form(&x)?),
                fixed,
            };
            emit(cli, &out, "fixed", || format!("{fixed}"))?;
            Ok(true)
        }
    }
}

fn run_rep(cli: &Cli, cmd: &RepCommand) -> Result<bool> {
    match cmd {
        RepCommand::Residuals {
            rep,
            algebra,
            params,
            tol,
        } => {
            let r = Representation::build(rep, params.q, params.theta, params.dim)?;
            if let Some(a) = algebra {
                let actual = r.presentation().name();
                let base = actual.split('(').next().unwrap_or(actual);
                if a != base {
                    bail!("`{rep}` is a representation of {actual}, not {a}");
                }
            }
            let report = r.relation_residuals()?;
            let ok = report.passes(*tol);
            emit(cli, &report, "report", || {
                let mut lines: Vec<String> = report
                    .relations
                    .iter()
                    .map(|x| format!("{:<40} {:.3e}  (block {})", x.relation, x.residual, x.block))
                    .collect();
                lines.push(format!("max {:.3e}, tolerance {tol:e}", report.max_residual));
                lines.join("\n")
            })?;
            Ok(ok)
        }
        RepCommand::Spectrum {
            rep,
            generator,
            params,
            tol,
        } => {
            let r = Representation::build(rep, params.q, params.theta, params.dim)?;
            let model = SpectrumModel::for_generator(rep, generator).with_context(|| {
                format!("no spectrum model for generator `{generator}` of `{rep}`")
            })?;
            let report = r.spectrum_check(generator, &model)?;
            let ok = report.max_deviation <= *tol;
            emit(cli, &report, "report", || {
                format!(
                    "{generator}: max deviation {:.3e}, |values| in [{:.3e}, {:.3e}]",
                    report.max_deviation, report.min_abs, report.max_abs
                )
            })?;
            Ok(ok)
        }
        RepCommand::Independence {
            kmax,
            lmax,
            q,
            nmax,
            trials,
        } => {
            let monomials = BasisMonomial::all(*kmax, *lmax);
            let vectors = claims::coefficient_trials(cli.seed, *trials, monomials.len());
            let report = independence_check(&monomials, *q, *nmax, &vectors)?;
            emit(cli, &report, "report", || {
                format!(
                    "rank {}/{} (sigma in [{:.3e}, {:.3e}]), {} recoveries, max error {:.3e}",
                    report.rank,
                    report.monomials,
                    report.sigma_min,
                    report.sigma_max,
                    report.trials,
                    report.max_recovery_error
                )
            })?;
            Ok(report.passes())
        }
    }
}

fn load_graph(src: &GraphSource) -> Result<Graph> {
    match (&src.file, &src.builtin) {
        (_, Some(name)) => Ok(Graph::builtin(name)?),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Graph::parse(&text).with_context(|| format!("in {}", path.display()))
        }
        (None, None) => bail!("give a graph file or --builtin G1|G2|G3"),
    }
}

fn emit<T: Serialize>(cli: &Cli, body: &T, key: &str, plain: impl FnOnce() -> String) -> Result<()> {
    match cli.format {
        Format::Json => print_json(body, key),
        Format::Plain => {
            println!("{}", plain());
            Ok(())
        }
    }
}
