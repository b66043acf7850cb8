//! Command-line front end: expression parser, example registry, argument
//! handling and report emission.

pub mod parse;
pub mod registry;
pub mod run;

pub use run::{run, CliError, Command, DerivationSource, JobSpec, Report};

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Exact analysis of polynomial derivations over the rationals.
#[derive(Parser, Debug)]
#[command(name = "simplederiv", version, about)]
pub struct Cli {
    /// Ordered variable names, comma separated (e.g. `u,v,x1`).
    #[arg(long, global = true, value_delimiter = ',')]
    pub ring: Option<Vec<String>>,
    /// Derivation coefficients, one per variable in ring order, separated by `;`.
    #[arg(long, global = true)]
    pub coeffs: Option<String>,
    /// Load the derivation from the built-in registry.
    #[arg(long, global = true)]
    pub example: Option<String>,
    /// Parameter of the registry example.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Forward images of the variables, separated by `;`.
    #[arg(long)]
    pub map: String,
    /// Inverse images; may be omitted for triangular maps.
    #[arg(long)]
    pub inverse: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Apply the derivation to a polynomial.
    Apply {
        #[arg(long)]
        poly: String,
    },
    /// Lie bracket with a second derivation given by its coefficients.
    Bracket {
        #[arg(long)]
        other: String,
    },
    /// Exponential automorphism exp(tD) of a locally nilpotent derivation.
    Exp {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 64)]
        iter: usize,
    },
    /// Certify local nilpotency on generators within an iteration bound.
    LndCheck {
        #[arg(long, default_value_t = 64)]
        iter: usize,
    },
    /// Test whether a polynomial is Darboux.
    DarbouxCheck {
        #[arg(long)]
        poly: String,
    },
    /// Basis of {f : D(f) = lambda f} up to a degree (lambda = 0 gives the kernel).
    Kernel {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        deg: u32,
    },
    /// Intersect a span of polynomials with the image of D.
    ImageIntersect {
        #[arg(long)]
        span: String,
        #[arg(long)]
        deg: u32,
    },
    /// Plinth space of a locally nilpotent derivation.
    Plinth {
        #[arg(long)]
        deg: u32,
        #[arg(long, default_value_t = 64)]
        iter: usize,
    },
    /// Shamsuddin extension certificate: no h with D(h) = a h + b.
    Shamsuddin {
        /// Multiplier `a`; omit with `--b` to use the registry entry's instance.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        deg_h: u32,
        /// Name of the adjoined variable (default `t`).
        #[arg(long)]
        new_var: Option<String>,
    },
    /// Extend the derivation by new variables with prescribed images.
    BuildTower {
        #[arg(long)]
        images: String,
        #[arg(long, value_delimiter = ',')]
        new_vars: Vec<String>,
        #[arg(long)]
        deg: u32,
    },
    /// Bounded-degree centralizer and its locally nilpotent part.
    Centralizer {
        #[arg(long)]
        deg: u32,
        #[arg(long, default_value_t = 64)]
        iter: usize,
    },
    /// Test whether an automorphism commutes with D.
    IsotropyCheck(MapArgs),
    /// Conjugate D by an automorphism.
    Conjugate(MapArgs),
    /// Heuristic probe of degree growth under iteration.
    DegreeGrowth {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 10)]
        max_power: usize,
        #[arg(long, default_value_t = 1000)]
        cap: i64,
    },
    /// Rational fixed points of a triangular automorphism.
    FixedPoints(MapArgs),
    /// Translations commuting with D.
    Translations,
    /// Necessary-condition screen for simplicity.
    Screen {
        #[arg(long)]
        deg: u32,
    },
    /// Load and print a registry entry (`example NAME` or `--example NAME example`).
    Example { name: Option<String> },
}

fn split(src: &str) -> Vec<String> {
    src.split(';').map(|s| s.trim().to_string()).collect()
}

impl Cli {
    /// Converts parsed arguments into a job.
    pub fn job(&self) -> Result<JobSpec, CliError> {
        let example = match &self.command {
            Sub::Example { name: Some(n) } => Some(n.clone()),
            _ => self.example.clone(),
        };
        let source = match (&example, &self.ring, &self.coeffs) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::Usage(
                    "--example cannot be combined with --ring/--coeffs".into(),
                ))
            }
            (Some(name), None, None) => DerivationSource::Example {
                name: name.clone(),
                n: self.n,
            },
            (None, Some(ring), Some(coeffs)) => DerivationSource::Explicit {
                ring: ring.clone(),
                coeffs: split(coeffs),
            },
            (None, Some(ring), None) => DerivationSource::RingOnly { ring: ring.clone() },
            (None, None, _) => return Err(CliError::Usage("one of --example or --ring is required".into())),
        };
        let map = |m: &MapArgs| (split(&m.map), m.inverse.as_deref().map(split));
        let command = match &self.command {
            Sub::Apply { poly } => Command::Apply { poly: poly.clone() },
            Sub::Bracket { other } => Command::Bracket { other: split(other) },
            Sub::Exp { t, iter } => Command::Exp {
                t: t.clone(),
                iter: *iter,
            },
            Sub::LndCheck { iter } => Command::LndCheck { iter: *iter },
            Sub::DarbouxCheck { poly } => Command::DarbouxCheck { poly: poly.clone() },
            Sub::Kernel { lambda, deg } => Command::Kernel {
                lambda: lambda.clone(),
                deg: *deg,
            },
            Sub::ImageIntersect { span, deg } => Command::ImageIntersect {
                span: split(span),
                deg: *deg,
            },
            Sub::Plinth { deg, iter } => Command::Plinth { deg: *deg, iter: *iter },
            Sub::Shamsuddin { a, b, deg_h, new_var } => Command::Shamsuddin {
                a: a.clone(),
                b: b.clone(),
                deg_h: *deg_h,
                new_var: new_var.clone(),
            },
            Sub::BuildTower { images, new_vars, deg } => Command::BuildTower {
                images: split(images),
                new_vars: new_vars.clone(),
                deg: *deg,
            },
            Sub::Centralizer { deg, iter } => Command::Centralizer { deg: *deg, iter: *iter },
            Sub::IsotropyCheck(m) => {
                let (map, inverse) = map(m);
                Command::IsotropyCheck { map, inverse }
            }
            Sub::Conjugate(m) => {
                let (map, inverse) = map(m);
                Command::Conjugate { map, inverse }
            }
            Sub::DegreeGrowth { map: m, max_power, cap } => {
                let (map, inverse) = map(m);
                Command::DegreeGrowth {
                    map,
                    inverse,
                    max_power: *max_power,
                    cap: *cap,
                }
            }
            Sub::FixedPoints(m) => {
                let (map, inverse) = map(m);
                Command::FixedPoints { map, inverse }
            }
            Sub::Translations => Command::Translations,
            Sub::Screen { deg } => Command::Screen { deg: *deg },
            Sub::Example { .. } => Command::Example,
        };
        Ok(JobSpec { source, command })
    }
}
