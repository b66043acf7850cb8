//! Built-in example derivations.

use crate::derivation::Derivation;
use crate::linalg::{self, ExactScalar};
use crate::poly::{Poly, VarContext};
use crate::simplicity::ShamsuddinInstance;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown example `{0}`; known: {known}", known = NAMES.join(", "))]
    UnknownName(String),
    #[error("invalid parameter for `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
}

pub const NAMES: &[&str] = &["exa-maximal", "shamsuddin-uv", "jordan", "tower", "nonsimple"];

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub name: String,
    pub description: String,
    pub derivation: Derivation,
    /// Base data `(delta, a, b)` whose extension is `derivation`, when the
    /// entry arises that way.
    pub shamsuddin: Option<ShamsuddinInstance>,
}

/// `d/du + (1 + uv) d/dv` on `Q[u, v]`.
pub fn exa_maximal() -> Derivation {
    let c = VarContext::new(&["u", "v"]).expect("valid names");
    let uv = &Poly::var(&c, 0) * &Poly::var(&c, 1);
    Derivation::new(&c, vec![Poly::one(&c), &Poly::one(&c) + &uv]).expect("two coefficients")
}

/// `d/du` on `Q[u]` with `a = u`, `b = 1`; its extension is [`exa_maximal`]
/// with `v` as the new variable.
pub fn shamsuddin_uv() -> ShamsuddinInstance {
    let c = VarContext::new(&["u"]).expect("valid names");
    let delta = Derivation::partial(&c, 0);
    ShamsuddinInstance::new(delta, Poly::var(&c, 0), Poly::one(&c), "v").expect("same context")
}

/// `(1 - x1 x2) d/dx1 + x1^3 d/dx2 + sum_{i>=3} x_{i-1} d/dx_i` on `Q[x1..xn]`, `n >= 2`.
pub fn jordan(n: usize) -> Result<Derivation, RegistryError> {
    if n < 2 {
        return Err(RegistryError::InvalidParameter {
            name: "jordan".into(),
            reason: "n must be at least 2".into(),
        });
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let c = VarContext::new(&names).expect("valid names");
    let x: Vec<Poly> = (0..n).map(|i| Poly::var(&c, i)).collect();
    let mut coeffs = vec![&Poly::one(&c) - &(&x[0] * &x[1]), x[0].pow(3)];
    coeffs.extend((2..n).map(|i| x[i - 1].clone()));
    Ok(Derivation::new(&c, coeffs).expect("n coefficients"))
}

/// `d/du + (1 + uv) d/dv + sum_{j=1}^n v^j d/dx_j` on `Q[u, v, x1..xn]`.
pub fn tower(n: usize) -> Derivation {
    let mut names = vec!["u".to_string(), "v".to_string()];
    names.extend((1..=n).map(|i| format!("x{i}")));
    let c = VarContext::new(&names).expect("valid names");
    let v = Poly::var(&c, 1);
    let base = exa_maximal().extend_to(&c).expect("u, v present");
    let mut coeffs = base.coeffs().to_vec();
    for j in 1..=n {
        coeffs[1 + j] = v.pow(j as u32);
    }
    Derivation::new(&c, coeffs).expect("n + 2 coefficients")
}

/// `alpha d/du + c'(u) d/dv` with `c = u^deg`; not simple since
/// `delta(c / alpha) = c'(u) = delta(v)`.
pub fn nonsimple(alpha: ExactScalar, deg: u32) -> Result<Derivation, RegistryError> {
    if alpha == ExactScalar::from_integer(0.into()) {
        return Err(RegistryError::InvalidParameter {
            name: "nonsimple".into(),
            reason: "alpha must be nonzero".into(),
        });
    }
    let c = VarContext::new(&["u", "v"]).expect("valid names");
    let cu = Poly::var(&c, 0).pow(deg);
    Derivation::new(&c, vec![Poly::constant(&c, alpha), cu.partial(0)]).map_err(|e| RegistryError::InvalidParameter {
        name: "nonsimple".into(),
        reason: e.to_string(),
    })
}

/// Looks up a named example. `n` parameterises `jordan` (default 3), `tower`
/// (default 2) and `nonsimple` (degree of `c`, default 3, with `alpha = 2`).
pub fn lookup(name: &str, n: Option<usize>) -> Result<RegistryEntry, RegistryError> {
    let shamsuddin = (name == "exa-maximal" || name == "shamsuddin-uv").then(shamsuddin_uv);
    let (derivation, description) = match name {
        "exa-maximal" | "shamsuddin-uv" => (
            exa_maximal(),
            "simple derivation d/du + (1+uv) d/dv of Q[u,v]".to_string(),
        ),
        "jordan" => {
            let n = n.unwrap_or(3);
            (
                jordan(n)?,
                format!("Jordan's simple derivation D_{n} without linear coordinates"),
            )
        }
        "tower" => {
            let n = n.unwrap_or(2);
            (
                tower(n),
                format!("tower extension of d/du + (1+uv) d/dv by x_j' = v^j, j = 1..{n}"),
            )
        }
        "nonsimple" => {
            let deg = n.unwrap_or(3);
            let deg = u32::try_from(deg).map_err(|_| RegistryError::InvalidParameter {
                name: name.into(),
                reason: "degree too large".into(),
            })?;
            (
                nonsimple(linalg::scalar(2), deg)?,
                format!("non-simple 2 d/du + c'(u) d/dv with c = u^{deg}"),
            )
        }
        other => return Err(RegistryError::UnknownName(other.to_string())),
    };
    Ok(RegistryEntry {
        name: name.to_string(),
        description,
        derivation,
        shamsuddin,
    })
}
