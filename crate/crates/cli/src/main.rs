use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rmoduli_core::decorated_trees::{parse_sigma, InvolutionSpec};
use rmoduli_core::enumeration::{self, enumerate_classes, StrataPoset};
use rmoduli_core::graph_complex::{Coeff, ComplexError, GradedComplex};
use rmoduli_core::homology::{self, HomologyError};
use rmoduli_core::pi1;

#[derive(Parser, Debug)]
#[command(name = "rmoduli", version, about = "Strata, graph complex homology and wall-crossing pi_1 for sigma-invariant real genus-zero curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Class counts per dimension; writes the poset cache.
    Enumerate(#[command(flatten)] Opts),
    /// Mod-2 Betti numbers of the quotient graph complex.
    Homology(#[command(flatten)] Opts),
    /// Wall-crossing presentation and its abelianization.
    Pi1(#[command(flatten)] Opts),
    /// Covering poset as DOT.
    Poset(#[command(flatten)] Opts),
}

#[derive(clap::Args, Debug, Clone)]
struct Opts {
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=9))]
    n: u8,
    #[arg(long, default_value = "id")]
    sigma: String,
    #[arg(long, value_enum, default_value_t = CoeffArg::Z2)]
    coeff: CoeffArg,
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
    #[arg(long, env = "RMODULI_CACHE")]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Force the boundary-squared and relation-closure checks.
    #[arg(long)]
    verify: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CoeffArg {
    Z2,
    ZExperimental,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OutputArg {
    Text,
    Json,
    Dot,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
struct RunConfig {
    sigma: InvolutionSpec,
    coeff: Coeff,
    output: OutputArg,
    cache_dir: Option<PathBuf>,
    verify: bool,
}

enum Failure {
    Validation(String),
    Consistency(String),
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::IntegerQuotientUnsupported | ComplexError::DegreeOutOfRange(_) => Failure::Validation(e.to_string()),
            _ => Failure::Consistency(e.to_string()),
        }
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Complex(c) => c.into(),
            other => Failure::Consistency(other.to_string()),
        }
    }
}

fn config(command: &Command) -> Result<RunConfig, Failure> {
    let (Command::Enumerate(o) | Command::Homology(o) | Command::Pi1(o) | Command::Poset(o)) = command;
    let sigma = parse_sigma(&o.sigma, o.n as usize).map_err(|e| Failure::Validation(format!("sigma: {e}")))?;
    let allowed = match command {
        Command::Poset(_) => [OutputArg::Dot, OutputArg::Text, OutputArg::Json].as_slice(),
        _ => [OutputArg::Text, OutputArg::Json].as_slice(),
    };
    if !allowed.contains(&o.output) {
        return Err(Failure::Validation(format!("--output {:?} is not available for this command", o.output).to_lowercase()));
    }
    if o.coeff == CoeffArg::ZExperimental && !matches!(command, Command::Homology(_)) {
        return Err(Failure::Validation("--coeff only applies to homology".into()));
    }
    let cache_dir = if o.no_cache { None } else { o.cache_dir.clone() };
    let coeff = match o.coeff {
        CoeffArg::Z2 => Coeff::Z2,
        CoeffArg::ZExperimental => Coeff::ZExperimental,
    };
    Ok(RunConfig { sigma, coeff, output: o.output, cache_dir, verify: o.verify })
}

fn poset(cfg: &RunConfig) -> Result<StrataPoset, Failure> {
    if let Some(dir) = &cfg.cache_dir {
        match enumeration::load_cache(dir, &cfg.sigma) {
            Ok(Some(p)) => return Ok(p),
            Ok(None) => {}
            Err(e) => eprintln!("rmoduli: ignoring cache: {e}"),
        }
    }
    let p = enumerate_classes(&cfg.sigma);
    if let Some(dir) = &cfg.cache_dir {
        if let Err(e) = enumeration::save_cache(&p, dir) {
            eprintln!("rmoduli: could not write cache: {e}");
        }
    }
    Ok(p)
}

fn header(cfg: &RunConfig) -> serde_json::Value {
    json!({"n": cfg.sigma.n(), "sigma": cfg.sigma.notation()})
}

fn with_header(cfg: &RunConfig, body: serde_json::Value) -> String {
    let mut v = header(cfg);
    if let (Some(o), serde_json::Value::Object(b)) = (v.as_object_mut(), body) {
        o.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn run(command: &Command, cfg: &RunConfig) -> Result<String, Failure> {
    match command {
        Command::Enumerate(_) => {
            let p = poset(cfg)?;
            let counts = p.counts();
            let chi = enumeration::euler_characteristic(&p);
            Ok(match cfg.output {
                OutputArg::Json => with_header(cfg, json!({"counts": counts, "total": p.total(), "euler": chi})),
                _ => {
                    let mut s = format!("n={} sigma={}\ndim  classes\n", cfg.sigma.n(), cfg.sigma.notation());
                    for (d, c) in counts.iter().enumerate() {
                        let _ = writeln!(s, "{d:>3}  {c:>7}");
                    }
                    let _ = writeln!(s, "total {}  alternating sum {}", p.total(), chi);
                    s
                }
            })
        }
        Command::Homology(_) => {
            let p = poset(cfg)?;
            let c = GradedComplex::build(&p, cfg.coeff);
            c.check_d_squared()?;
            if cfg.verify {
                c.check_relations_closed()?;
            }
            let q = c.quotient()?;
            let summary = match cfg.coeff {
                Coeff::Z2 => homology::betti_mod2(&q)?,
                Coeff::ZExperimental => homology::integer_homology(&q)?,
            };
            Ok(match cfg.output {
                OutputArg::Json => with_header(cfg, summary.to_json()),
                _ => format!("n={} sigma={}\n{}", cfg.sigma.n(), cfg.sigma.notation(), summary.to_text()),
            })
        }
        Command::Pi1(_) => {
            let p = poset(cfg)?;
            if cfg.verify {
                GradedComplex::build(&p, Coeff::Z2).check_d_squared()?;
            }
            let w = pi1::wall_crossing_presentation(&p).map_err(|e| Failure::Consistency(e.to_string()))?;
            let g = pi1::collapse_to_group(&w).map_err(|e| Failure::Consistency(e.to_string()))?;
            let ab = pi1::abelianization(&g);
            Ok(match cfg.output {
                OutputArg::Json => with_header(
                    cfg,
                    json!({
                        "objects": w.objects.len(),
                        "crossings": w.crossings.len(),
                        "presentation": g.to_json(),
                        "abelianization": {"free_rank": ab.free_rank, "torsion": ab.torsion},
                    }),
                ),
                _ => format!(
                    "n={} sigma={}\nobjects {}  crossings {}\n{}abelianization {}\nfree rank {}\n",
                    cfg.sigma.n(),
                    cfg.sigma.notation(),
                    w.objects.len(),
                    w.crossings.len(),
                    g.to_gap(),
                    ab.notation(),
                    ab.free_rank
                ),
            })
        }
        Command::Poset(_) => {
            let p = poset(cfg)?;
            Ok(match cfg.output {
                OutputArg::Json => {
                    let classes: Vec<_> = p.ids().map(|id| json!({"dim": id.dim, "encoding": p.class(id).hex()})).collect();
                    let coverings: Vec<_> = p
                        .coverings
                        .iter()
                        .map(|c| json!({"upper": p.class(c.upper).hex(), "lower": p.class(c.lower).hex(), "mult": c.mult}))
                        .collect();
                    with_header(cfg, json!({"classes": classes, "coverings": coverings}))
                }
                _ => enumeration::to_dot(&p),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(&cli.command).and_then(|cfg| run(&cli.command, &cfg));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("rmoduli: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Consistency(msg)) => {
            eprintln!("rmoduli: consistency failure: {msg}");
            ExitCode::from(3)
        }
    }
}
