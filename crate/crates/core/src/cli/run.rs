//! Job dispatch and report assembly.

use super::parse::{parse_poly, ParseError};
use super::registry::{self, RegistryError};
use crate::automorphism::{
    conjugate_derivation, degree_growth_probe, fixed_points_triangular, in_isotropy, translation_commuters,
    Automorphism, AutomorphismError, FixedPoints, GrowthVerdict,
};
use crate::derivation::{self, darboux_check, lnd_check, Derivation, DerivationError, LndWitness};
use crate::linalg::ExactScalar;
use crate::poly::{Poly, PolyError, VarContext};
use crate::simplicity::{
    build_tower, centralizer, image_intersection_check, linear_coordinate_screen, necessary_screen, shamsuddin_certify,
    ExtensionSpec, ScreenFailure, ScreenVerdict, ShamsuddinInstance, ShamsuddinVerdict, SimplicityError,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("parse error in `{src}`: {err}")]
    Parse { src: String, err: ParseError },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Automorphism(#[from] AutomorphismError),
    #[error(transparent)]
    Simplicity(#[from] SimplicityError),
    #[error("{0}")]
    Usage(String),
}

/// Where the derivation of a job comes from.
#[derive(Clone, Debug)]
pub enum DerivationSource {
    /// Explicit ring and one coefficient expression per variable.
    Explicit { ring: Vec<String>, coeffs: Vec<String> },
    /// A registry entry.
    Example { name: String, n: Option<usize> },
    /// Ring only; for commands that do not need a derivation.
    RingOnly { ring: Vec<String> },
}

#[derive(Clone, Debug)]
pub enum Command {
    Apply {
        poly: String,
    },
    Bracket {
        other: Vec<String>,
    },
    Exp {
        t: String,
        iter: usize,
    },
    LndCheck {
        iter: usize,
    },
    DarbouxCheck {
        poly: String,
    },
    Kernel {
        lambda: String,
        deg: u32,
    },
    ImageIntersect {
        span: Vec<String>,
        deg: u32,
    },
    Plinth {
        deg: u32,
        iter: usize,
    },
    /// With `a`, `b` omitted, uses the instance attached to the registry entry.
    Shamsuddin {
        a: Option<String>,
        b: Option<String>,
        deg_h: u32,
        new_var: Option<String>,
    },
    BuildTower {
        images: Vec<String>,
        new_vars: Vec<String>,
        deg: u32,
    },
    Centralizer {
        deg: u32,
        iter: usize,
    },
    IsotropyCheck {
        map: Vec<String>,
        inverse: Option<Vec<String>>,
    },
    Conjugate {
        map: Vec<String>,
        inverse: Option<Vec<String>>,
    },
    DegreeGrowth {
        map: Vec<String>,
        inverse: Option<Vec<String>>,
        max_power: usize,
        cap: i64,
    },
    FixedPoints {
        map: Vec<String>,
        inverse: Option<Vec<String>>,
    },
    Translations,
    Screen {
        deg: u32,
    },
    Example,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Apply { .. } => "apply",
            Command::Bracket { .. } => "bracket",
            Command::Exp { .. } => "exp",
            Command::LndCheck { .. } => "lnd-check",
            Command::DarbouxCheck { .. } => "darboux-check",
            Command::Kernel { .. } => "kernel",
            Command::ImageIntersect { .. } => "image-intersect",
            Command::Plinth { .. } => "plinth",
            Command::Shamsuddin { .. } => "shamsuddin",
            Command::BuildTower { .. } => "build-tower",
            Command::Centralizer { .. } => "centralizer",
            Command::IsotropyCheck { .. } => "isotropy-check",
            Command::Conjugate { .. } => "conjugate",
            Command::DegreeGrowth { .. } => "degree-growth",
            Command::FixedPoints { .. } => "fixed-points",
            Command::Translations => "translations",
            Command::Screen { .. } => "screen",
            Command::Example => "example",
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub source: DerivationSource,
    pub command: Command,
}

/// A degree-stamped claim with its outcome.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Certificate {
    pub claim: String,
    pub degree_bound: Option<u32>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

struct Builder {
    text: String,
    result: serde_json::Map<String, Value>,
    certificates: Vec<Certificate>,
}

impl Builder {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn set(&mut self, key: &str, v: Value) {
        self.result.insert(key.to_string(), v);
    }

    fn certify(&mut self, claim: impl Into<String>, degree_bound: Option<u32>, verdict: &str, witness: Option<Value>) {
        let c = Certificate {
            claim: claim.into(),
            degree_bound,
            verdict: verdict.to_string(),
            witness,
        };
        let stamp = match degree_bound {
            Some(d) => format!(" (up to degree {d})"),
            None => String::new(),
        };
        let _ = write!(self.text, "certificate: {}{} -> {}", c.claim, stamp, c.verdict);
        if let Some(w) = &c.witness {
            let _ = write!(self.text, " [witness: {w}]");
        }
        self.text.push('\n');
        self.certificates.push(c);
    }
}

fn poly_in(src: &str, ctx: &Arc<VarContext>) -> Result<Poly, CliError> {
    parse_poly(src, ctx).map_err(|err| CliError::Parse {
        src: src.to_string(),
        err,
    })
}

fn polys_in(srcs: &[String], ctx: &Arc<VarContext>) -> Result<Vec<Poly>, CliError> {
    srcs.iter().map(|s| poly_in(s, ctx)).collect()
}

fn scalar_of(src: &str) -> Result<ExactScalar, CliError> {
    let ctx = VarContext::new::<&str>(&[])?;
    let p = poly_in(src, &ctx)?;
    Ok(p.constant_term())
}

fn render(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(Poly::to_string).collect()
}

fn render_derivation(d: &Derivation) -> Value {
    json!({
        "text": d.to_string(),
        "coeffs": render(d.coeffs()),
    })
}

fn render_scalars(v: &[ExactScalar]) -> Vec<String> {
    v.iter().map(ExactScalar::to_string).collect()
}

fn lnd_json(w: &LndWitness) -> Value {
    json!({
        "status": if w.is_certified() { "locally-nilpotent" } else { "not-within-bound" },
        "nilpotency_bound": w.nilpotency_bound,
    })
}

fn load_map(ctx: &Arc<VarContext>, map: &[String], inverse: &Option<Vec<String>>) -> Result<Automorphism, CliError> {
    let forward = polys_in(map, ctx)?;
    if forward.len() != ctx.len() {
        return Err(CliError::Usage(format!(
            "--map needs {} components, got {}",
            ctx.len(),
            forward.len()
        )));
    }
    match inverse {
        Some(inv) => Ok(Automorphism::from_tuples(forward, polys_in(inv, ctx)?)?),
        None => Automorphism::from_triangular(forward).map_err(|_| {
            CliError::Usage("map is not triangular with invertible diagonal; supply --inverse".to_string())
        }),
    }
}

/// A loaded job source.
pub struct Loaded {
    pub ctx: Arc<VarContext>,
    pub derivation: Option<Derivation>,
    pub description: Option<String>,
    pub shamsuddin: Option<ShamsuddinInstance>,
}

/// Loads the job's ring and derivation.
pub fn load_source(source: &DerivationSource) -> Result<Loaded, CliError> {
    let plain = |ctx, derivation| Loaded {
        ctx,
        derivation,
        description: None,
        shamsuddin: None,
    };
    match source {
        DerivationSource::Explicit { ring, coeffs } => {
            let ctx = VarContext::new(ring)?;
            if coeffs.len() != ctx.len() {
                return Err(CliError::Usage(format!(
                    "--coeffs needs {} expressions (one per variable), got {}",
                    ctx.len(),
                    coeffs.len()
                )));
            }
            let d = Derivation::new(&ctx, polys_in(coeffs, &ctx)?)?;
            Ok(plain(ctx, Some(d)))
        }
        DerivationSource::Example { name, n } => {
            let entry = registry::lookup(name, *n)?;
            Ok(Loaded {
                ctx: entry.derivation.context().clone(),
                derivation: Some(entry.derivation),
                description: Some(entry.description),
                shamsuddin: entry.shamsuddin,
            })
        }
        DerivationSource::RingOnly { ring } => Ok(plain(VarContext::new(ring)?, None)),
    }
}

/// Runs one analysis. An `Err` means the tool failed; a negative
/// mathematical verdict is still `Ok`.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let Loaded {
        ctx,
        derivation,
        description,
        shamsuddin,
    } = load_source(&job.source)?;
    let need = || {
        derivation.clone().ok_or_else(|| {
            CliError::Usage(format!(
                "`{}` needs a derivation (--coeffs or --example)",
                job.command.name()
            ))
        })
    };
    let mut b = Builder {
        text: String::new(),
        result: serde_json::Map::new(),
        certificates: Vec::new(),
    };
    b.line(format!("command: {}", job.command.name()));
    b.line(format!("ring: Q[{}]", ctx.names().join(", ")));
    if let Some(d) = &derivation {
        b.line(format!("derivation: {d}"));
    }
    if let Some(desc) = &description {
        b.line(format!("example: {desc}"));
    }

    match &job.command {
        Command::Example => {}
        Command::Apply { poly } => {
            let d = need()?;
            let p = poly_in(poly, &ctx)?;
            let image = d.apply(&p)?;
            b.line(format!("D({p}) = {image}"));
            b.set("image", json!(image.to_string()));
        }
        Command::Bracket { other } => {
            let d = need()?;
            let e = Derivation::new(&ctx, polys_in(other, &ctx)?)?;
            let br = d.bracket(&e)?;
            b.line(format!("[D, E] = {br}"));
            b.set("bracket", render_derivation(&br));
            b.set("commutes", json!(br.is_zero()));
        }
        Command::Exp { t, iter } => {
            let d = need()?;
            let t = scalar_of(t)?;
            let w = lnd_check(&d, *iter);
            b.set("lnd", lnd_json(&w));
            if !w.is_certified() {
                return Err(CliError::Usage(format!(
                    "derivation not certified locally nilpotent within {iter} iterations"
                )));
            }
            let e = w.exponential(&t)?;
            b.line(format!("exp(t D) at t = {t}: ({})", render(e.forward()).join(", ")));
            b.set("forward", json!(render(e.forward())));
            b.set("inverse", json!(render(e.inverse())));
        }
        Command::LndCheck { iter } => {
            let d = need()?;
            let w = lnd_check(&d, *iter);
            let verdict = if w.is_certified() {
                "locally-nilpotent"
            } else {
                "not-within-bound"
            };
            b.certify(
                format!("every generator is killed within {iter} applications"),
                None,
                verdict,
                w.is_certified()
                    .then(|| json!({ "nilpotency_bound": w.nilpotency_bound })),
            );
            b.set("lnd", lnd_json(&w));
        }
        Command::DarbouxCheck { poly } => {
            let d = need()?;
            let f = poly_in(poly, &ctx)?;
            match darboux_check(&d, &f)? {
                Some(lambda) => {
                    b.certify(
                        format!("{f} is a Darboux polynomial"),
                        None,
                        "darboux",
                        Some(json!({ "lambda": lambda.to_string() })),
                    );
                    b.set("lambda", json!(lambda.to_string()));
                }
                None => {
                    b.certify(format!("{f} is a Darboux polynomial"), None, "not-darboux", None);
                    b.set("lambda", Value::Null);
                }
            }
        }
        Command::Kernel { lambda, deg } => {
            let d = need()?;
            let lambda = poly_in(lambda, &ctx)?;
            let basis = derivation::darboux_search_fixed_lambda(&d, &lambda, *deg)?;
            let nonconstant: Vec<&Poly> = basis.iter().filter(|p| !p.is_constant()).collect();
            b.line(format!(
                "basis of {{f : D(f) = ({lambda}) f}}: [{}]",
                render(&basis).join(", ")
            ));
            b.set("basis", json!(render(&basis)));
            b.certify(
                format!("eigenspace for lambda = {lambda} contains only constants"),
                Some(*deg),
                if nonconstant.is_empty() { "holds" } else { "fails" },
                nonconstant.first().map(|p| json!(p.to_string())),
            );
        }
        Command::ImageIntersect { span, deg } => {
            let d = need()?;
            let gens = polys_in(span, &ctx)?;
            let inter = image_intersection_check(&d, &gens, *deg)?;
            b.set("intersection", json!(render(&inter)));
            b.set("dimension", json!(inter.len()));
            b.certify(
                format!("span{{{}}} ∩ Im(D) = {{0}}", render(&gens).join(", ")),
                Some(*deg),
                if inter.is_empty() { "holds" } else { "fails" },
                inter.first().map(|p| json!(p.to_string())),
            );
        }
        Command::Plinth { deg, iter } => {
            let d = need()?;
            let w = lnd_check(&d, *iter);
            let report = derivation::plinth_basis(&w, *deg)?;
            b.set("basis", json!(render(&report.basis)));
            b.set("contains_constant", json!(report.contains_constant));
            b.certify(
                "plinth space contains a nonzero constant (plinth ideal is the whole ring)",
                Some(*deg),
                if report.contains_constant { "holds" } else { "not-found" },
                None,
            );
        }
        Command::Shamsuddin {
            a,
            b: bb,
            deg_h,
            new_var,
        } => {
            let inst = match (a, bb, shamsuddin) {
                (None, None, Some(mut inst)) => {
                    if let Some(v) = new_var {
                        inst.new_var = v.clone();
                    }
                    b.line(format!(
                        "base: {} on Q[{}]",
                        inst.delta,
                        inst.delta.context().names().join(", ")
                    ));
                    inst
                }
                (Some(a), Some(bb), _) => {
                    let d = need()?;
                    let nv = new_var.as_deref().unwrap_or("t");
                    ShamsuddinInstance::new(d, poly_in(a, &ctx)?, poly_in(bb, &ctx)?, nv)?
                }
                _ => return Err(CliError::Usage("shamsuddin needs both --a and --b".into())),
            };
            let extended = inst.extended()?;
            b.line(format!("extension: {extended}"));
            b.set("extension", render_derivation(&extended));
            let claim = format!("no h with D(h) = ({}) h + ({})", inst.a, inst.b);
            match shamsuddin_certify(&inst, *deg_h) {
                ShamsuddinVerdict::NoWitnessUpToDegree { degree_bound } => {
                    b.certify(claim, Some(degree_bound), "no-witness-up-to-degree", None);
                }
                ShamsuddinVerdict::Witness { h, degenerate } => {
                    b.certify(
                        claim,
                        Some(*deg_h),
                        "witness",
                        Some(json!({ "h": h.to_string(), "degenerate": degenerate })),
                    );
                }
            }
        }
        Command::BuildTower { images, new_vars, deg } => {
            let d = need()?;
            let spec = ExtensionSpec {
                base: d,
                images: polys_in(images, &ctx)?,
                new_vars: new_vars.clone(),
            };
            let tower = build_tower(&spec, *deg)?;
            b.line(format!("tower: {}", tower.derivation));
            b.set("ring", json!(tower.derivation.context().names()));
            b.set("derivation", render_derivation(&tower.derivation));
            for step in &tower.steps {
                let claim = format!(
                    "{} = {} is not in the image of the previous level",
                    step.new_var, step.image
                );
                match &step.verdict {
                    ShamsuddinVerdict::NoWitnessUpToDegree { degree_bound } => {
                        b.certify(claim, Some(*degree_bound), "no-witness-up-to-degree", None)
                    }
                    ShamsuddinVerdict::Witness { h, .. } => {
                        b.certify(claim, Some(*deg), "witness", Some(json!(h.to_string())))
                    }
                }
            }
            b.certify(
                "span(I) ∩ Im(base) = {0}",
                Some(*deg),
                if tower.hypothesis_holds() { "holds" } else { "fails" },
                tower.hypothesis_intersection.first().map(|p| json!(p.to_string())),
            );
        }
        Command::Centralizer { deg, iter } => {
            let d = need()?;
            let r = centralizer(&d, *deg, *iter)?;
            b.line(format!("centralizer basis ({} elements):", r.basis.len()));
            for (e, w) in r.basis.iter().zip(&r.lnd_flags) {
                b.line(format!("  {e}{}", if w.is_certified() { "   [LND]" } else { "" }));
            }
            b.line(format!("lnd_span_dimension: {}", r.lnd_span_dimension));
            b.set("degree_bound", json!(r.degree_bound));
            b.set(
                "basis",
                json!(r.basis.iter().map(render_derivation).collect::<Vec<_>>()),
            );
            b.set("lnd_flags", json!(r.lnd_flags.iter().map(lnd_json).collect::<Vec<_>>()));
            b.set("lnd_span_dimension", json!(r.lnd_span_dimension));
            b.set(
                "lnd_span_basis",
                json!(r.lnd_span_basis.iter().map(render_derivation).collect::<Vec<_>>()),
            );
            b.set("lnd_discrepancy", json!(r.lnd_discrepancy));
            b.set("contains_input", json!(r.contains_input));
            b.certify(
                "dimension of the span of commuting LNDs",
                Some(*deg),
                &r.lnd_span_dimension.to_string(),
                Some(json!(r
                    .lnd_span_basis
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>())),
            );
        }
        Command::IsotropyCheck { map, inverse } => {
            let d = need()?;
            let f = load_map(&ctx, map, inverse)?;
            let check = in_isotropy(&f, &d)?;
            b.set("holds", json!(check.holds));
            b.certify(
                format!("({}) commutes with D", render(f.forward()).join(", ")),
                None,
                if check.holds { "holds" } else { "fails" },
                check.failing_coordinate.map(|i| json!({ "coordinate": ctx.name(i) })),
            );
        }
        Command::Conjugate { map, inverse } => {
            let d = need()?;
            let f = load_map(&ctx, map, inverse)?;
            let c = conjugate_derivation(&f, &d)?;
            b.line(format!("phi D phi^-1 = {c}"));
            b.set("conjugate", render_derivation(&c));
        }
        Command::DegreeGrowth {
            map,
            inverse,
            max_power,
            cap,
        } => {
            let f = load_map(&ctx, map, inverse)?;
            let claim = format!("deg(phi^l) stays bounded for l <= {max_power} (heuristic)");
            match degree_growth_probe(&f, *max_power, *cap) {
                GrowthVerdict::Bounded { max_degree } => {
                    b.set("verdict", json!({ "bounded": max_degree }));
                    b.certify(claim, None, "bounded", Some(json!({ "max_degree": max_degree })));
                }
                GrowthVerdict::ExceededCap { power, degree } => {
                    b.set("verdict", json!({ "exceeded_cap_at_power": power, "degree": degree }));
                    b.certify(
                        claim,
                        None,
                        "exceeded-cap",
                        Some(json!({ "power": power, "degree": degree })),
                    );
                }
            }
        }
        Command::FixedPoints { map, inverse } => {
            let f = load_map(&ctx, map, inverse)?;
            let claim = "phi has no rational fixed point";
            match fixed_points_triangular(&f) {
                FixedPoints::None {
                    exhaustive_over_q,
                    holds_over_extensions,
                } => {
                    b.set(
                        "verdict",
                        json!({ "none": { "exhaustive_over_q": exhaustive_over_q, "holds_over_extensions": holds_over_extensions } }),
                    );
                    b.certify(claim, None, if exhaustive_over_q { "none" } else { "none-found" }, None);
                }
                FixedPoints::Witness(p) => {
                    b.set("verdict", json!({ "witness": render_scalars(&p) }));
                    b.certify(claim, None, "fixed-point", Some(json!(render_scalars(&p))));
                }
                FixedPoints::NotTriangular => {
                    b.set("verdict", json!("not-triangular"));
                    b.certify(claim, None, "not-triangular", None);
                }
            }
        }
        Command::Translations => {
            let d = need()?;
            let tc = translation_commuters(&d)?;
            let dirs: Vec<&str> = tc.coordinate_directions.iter().map(|&j| ctx.name(j)).collect();
            b.line(format!("coordinate directions: [{}]", dirs.join(", ")));
            b.set("coordinate_directions", json!(dirs));
            b.set(
                "subspace",
                json!(tc.subspace.iter().map(|c| render_scalars(c)).collect::<Vec<_>>()),
            );
            b.set("verified", json!(tc.verified));
            b.certify(
                "dimension of commuting translations",
                None,
                &tc.subspace.len().to_string(),
                None,
            );
        }
        Command::Screen { deg } => {
            let d = need()?;
            let lin = linear_coordinate_screen(&d);
            b.set(
                "linear_coordinates",
                json!(lin.iter().map(|&i| ctx.name(i)).collect::<Vec<_>>()),
            );
            let claim = "no common zero of the coefficients and no nonconstant kernel element";
            match necessary_screen(&d, *deg)? {
                ScreenVerdict::Passes { degree_bound } => b.certify(claim, Some(degree_bound), "passes", None),
                ScreenVerdict::Fails(ScreenFailure::CommonZero(p)) => b.certify(
                    claim,
                    Some(*deg),
                    "fails",
                    Some(json!({ "common_zero": render_scalars(&p) })),
                ),
                ScreenVerdict::Fails(ScreenFailure::KernelElement(f)) => b.certify(
                    claim,
                    Some(*deg),
                    "fails",
                    Some(json!({ "kernel_element": f.to_string() })),
                ),
            }
        }
    }

    let json = json!({
        "schema": SCHEMA_VERSION,
        "command": job.command.name(),
        "ring": ctx.names(),
        "derivation": derivation.as_ref().map(render_derivation),
        "result": Value::Object(b.result),
        "certificates": b.certificates,
    });
    Ok(Report { text: b.text, json })
}
