//! Derivations `D = sum a_i d/dx_i` of a polynomial ring.

use crate::automorphism::Automorphism;
use crate::linalg::{self, ExactScalar, QMatrix};
use crate::poly::{self, monomial_basis, Coordinates, Poly, PolyError, VarContext};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("expected {expected} coefficients, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("derivation was not certified locally nilpotent")]
    NotCertified,
    #[error("the zero polynomial is not a valid Darboux candidate")]
    ZeroCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    ctx: Arc<VarContext>,
    coeffs: Vec<Poly>,
}

impl Derivation {
    pub fn new(ctx: &Arc<VarContext>, coeffs: Vec<Poly>) -> Result<Self, DerivationError> {
        if coeffs.len() != ctx.len() {
            return Err(DerivationError::ArityMismatch {
                expected: ctx.len(),
                found: coeffs.len(),
            });
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| {
                if c.context() == ctx {
                    Ok(c)
                } else {
                    Err(PolyError::ContextMismatch)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Derivation {
            ctx: ctx.clone(),
            coeffs: vec![Poly::zero(ctx); ctx.len()],
        }
    }

    /// `d/dx_var`.
    pub fn partial(ctx: &Arc<VarContext>, var: usize) -> Self {
        let mut d = Derivation::zero(ctx);
        d.coeffs[var] = Poly::one(ctx);
        d
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.len()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Largest total degree among the coefficients (`-1` for the zero derivation).
    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(Poly::total_degree).max().unwrap_or(-1)
    }

    fn check(&self, other: &Derivation) -> Result<(), DerivationError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch.into())
        }
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly, DerivationError> {
        if p.context() != &self.ctx {
            return Err(PolyError::ContextMismatch.into());
        }
        let mut out = Poly::zero(&self.ctx);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || !p.involves(i) {
                continue;
            }
            out = &out + &(a * &p.partial(i));
        }
        Ok(out)
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation, DerivationError> {
        self.check(other)?;
        Ok(Derivation {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &ExactScalar) -> Derivation {
        Derivation {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scalar_mul(c)).collect(),
        }
    }

    /// `f * D`.
    pub fn mul_poly(&self, f: &Poly) -> Result<Derivation, DerivationError> {
        Ok(Derivation {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| a.checked_mul(f)).collect::<Result<_, _>>()?,
        })
    }

    /// Lie bracket `[self, other]`, coefficient `i` being
    /// `self(other(x_i)) - other(self(x_i))`.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation, DerivationError> {
        self.check(other)?;
        let coeffs = (0..self.nvars())
            .map(|i| Ok(&self.apply(&other.coeffs[i])? - &other.apply(&self.coeffs[i])?))
            .collect::<Result<Vec<_>, DerivationError>>()?;
        Ok(Derivation {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    /// Restriction to `k[x_{tail_vars}, ..., x_{n-1}]` (zero-based), provided
    /// the coefficients of those variables only involve them.
    pub fn restrict(&self, tail_vars: usize) -> Option<Derivation> {
        let keep: Vec<usize> = (tail_vars.min(self.nvars())..self.nvars()).collect();
        self.restrict_to(&keep)
    }

    /// Restriction to the subring generated by the variables in `keep`.
    pub fn restrict_to(&self, keep: &[usize]) -> Option<Derivation> {
        let names: Vec<&str> = keep.iter().map(|&i| self.ctx.name(i)).collect();
        let sub = VarContext::new(&names).ok()?;
        let coeffs = keep
            .iter()
            .map(|&i| self.coeffs[i].rename_into(&sub).ok())
            .collect::<Option<Vec<_>>>()?;
        Some(Derivation { ctx: sub, coeffs })
    }

    /// Re-expresses the derivation in a larger ring, matching variables by
    /// name. New variables get the zero coefficient.
    pub fn extend_to(&self, target: &Arc<VarContext>) -> Result<Derivation, DerivationError> {
        let mut coeffs = vec![Poly::zero(target); target.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            let j = target
                .index_of(self.ctx.name(i))
                .ok_or_else(|| PolyError::MissingVariable(self.ctx.name(i).to_string()))?;
            coeffs[j] = a.rename_into(target)?;
        }
        Ok(Derivation {
            ctx: target.clone(),
            coeffs,
        })
    }
}

/// Human-readable form, e.g. `(-x1*x2 + 1)*d/dx1 + x1^3*d/dx2`.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = self.ctx.name(i);
            if a == &Poly::one(&self.ctx) {
                write!(f, "d/d{name}")?;
            } else if a.num_terms() == 1 && !a.to_string().starts_with('-') {
                write!(f, "{a}*d/d{name}")?;
            } else {
                write!(f, "({a})*d/d{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LndStatus {
    LocallyNilpotent,
    NotWithinBound,
}

/// Outcome of [`lnd_check`].
///
/// When `status` is [`LndStatus::LocallyNilpotent`], applying the derivation
/// `nilpotency_bound` times kills every generator.
#[derive(Clone, Debug)]
pub struct LndWitness {
    pub derivation: Derivation,
    pub nilpotency_bound: usize,
    pub status: LndStatus,
    /// Per generator, the number of applications needed to reach zero (when reached).
    pub orders: Vec<Option<usize>>,
}

impl LndWitness {
    pub fn is_certified(&self) -> bool {
        self.status == LndStatus::LocallyNilpotent
    }

    /// The flow `e^{tD}`: `x_i -> sum_k t^k D^k(x_i) / k!`, a finite sum.
    /// The inverse is the flow at `-t`.
    pub fn exponential(&self, t: &ExactScalar) -> Result<Automorphism, DerivationError> {
        if !self.is_certified() {
            return Err(DerivationError::NotCertified);
        }
        let forward = self.flow_images(t)?;
        let inverse = self.flow_images(&-t)?;
        Ok(Automorphism::from_trusted_tuples(
            self.derivation.context(),
            forward,
            inverse,
        ))
    }

    fn flow_images(&self, t: &ExactScalar) -> Result<Vec<Poly>, DerivationError> {
        let d = &self.derivation;
        let ctx = d.context();
        (0..d.nvars())
            .map(|i| {
                let mut term = Poly::var(ctx, i);
                let mut acc = Poly::zero(ctx);
                let mut weight = ExactScalar::one();
                let mut k = 0u64;
                while !term.is_zero() {
                    acc = &acc + &term.scalar_mul(&weight);
                    term = d.apply(&term)?;
                    k += 1;
                    weight = weight * t / ExactScalar::from_integer(BigInt::from(k));
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Iterates `d` on each generator and certifies local nilpotency when every
/// generator dies within `max_iter` applications.
pub fn lnd_check(d: &Derivation, max_iter: usize) -> LndWitness {
    let ctx = d.context();
    let mut orders = Vec::with_capacity(d.nvars());
    for i in 0..d.nvars() {
        let mut p = Poly::var(ctx, i);
        let mut order = None;
        for k in 1..=max_iter {
            p = d.apply(&p).expect("shared context");
            if p.is_zero() {
                order = Some(k);
                break;
            }
        }
        orders.push(order);
    }
    let certified = orders.iter().all(Option::is_some);
    LndWitness {
        derivation: d.clone(),
        nilpotency_bound: orders.iter().map(|o| o.unwrap_or(0)).max().unwrap_or(0),
        status: if certified {
            LndStatus::LocallyNilpotent
        } else {
            LndStatus::NotWithinBound
        },
        orders,
    }
}

/// The eigenvalue `lambda` with `d(f) = lambda * f`, when it exists.
pub fn darboux_check(d: &Derivation, f: &Poly) -> Result<Option<Poly>, DerivationError> {
    if f.is_zero() {
        return Err(DerivationError::ZeroCandidate);
    }
    Ok(d.apply(f)?.exact_divide(f)?)
}

/// Basis of `{ f : deg f <= deg_f, d(f) = lambda * f }`, one kernel solve.
pub fn darboux_search_fixed_lambda(d: &Derivation, lambda: &Poly, deg_f: u32) -> Result<Vec<Poly>, DerivationError> {
    let ctx = d.context();
    if lambda.context() != ctx {
        return Err(PolyError::ContextMismatch.into());
    }
    let basis = monomial_basis(ctx, deg_f);
    let columns = basis
        .iter()
        .map(|m| {
            let mono = Poly::term(ctx, m.clone(), ExactScalar::one());
            Ok(&d.apply(&mono)? - &(lambda * &mono))
        })
        .collect::<Result<Vec<_>, DerivationError>>()?;
    Ok(solve_kernel(ctx, &basis, &columns))
}

/// Kernel of the linear map sending `basis[j]` to `images[j]`, as polynomials.
fn solve_kernel(ctx: &Arc<VarContext>, basis: &[poly::Monomial], images: &[Poly]) -> Vec<Poly> {
    let coords = Coordinates::new(images);
    let columns: Vec<_> = images.iter().map(|p| coords.vector(p)).collect();
    let m = QMatrix::from_columns(coords.dim(), &columns);
    linalg::kernel_basis(&m)
        .into_iter()
        .map(|k| {
            Poly::from_terms(
                ctx,
                basis
                    .iter()
                    .zip(k)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.clone(), c)),
            )
        })
        .collect()
}

/// Basis of `d({ f : deg f <= deg_src })`.
pub fn image_basis(d: &Derivation, deg_src: u32) -> Vec<Poly> {
    let ctx = d.context();
    let images: Vec<Poly> = monomial_basis(ctx, deg_src)
        .into_iter()
        .map(|m| {
            d.apply(&Poly::term(ctx, m, ExactScalar::one()))
                .expect("shared context")
        })
        .collect();
    poly::span_basis(ctx, &images)
}

#[derive(Clone, Debug)]
pub struct PlinthReport {
    pub degree_bound: u32,
    pub basis: Vec<Poly>,
    /// `1` lies in the computed plinth space; sufficient for the plinth ideal
    /// to be the whole ring.
    pub contains_constant: bool,
}

/// Bounded-degree plinth space `ker(D)_{<=deg} ∩ D(k[x]_{<=deg})`.
pub fn plinth_basis(w: &LndWitness, deg: u32) -> Result<PlinthReport, DerivationError> {
    if !w.is_certified() {
        return Err(DerivationError::NotCertified);
    }
    let d = &w.derivation;
    let ctx = d.context();
    let kernel = darboux_search_fixed_lambda(d, &Poly::zero(ctx), deg)?;
    let image = image_basis(d, deg);
    let basis = poly::span_intersection(ctx, &kernel, &image);
    let contains_constant = poly::span_coefficients(&basis, &Poly::one(ctx)).is_some();
    Ok(PlinthReport {
        degree_bound: deg,
        basis,
        contains_constant,
    })
}

/// Indexing of derivation coefficient slots `(variable, monomial)`, used to
/// treat spaces of derivations as vector spaces.
pub(crate) struct DerivationCoordinates {
    slots: Vec<Coordinates>,
    offsets: Vec<usize>,
    dim: usize,
}

impl DerivationCoordinates {
    pub(crate) fn new(ds: &[&Derivation], nvars: usize) -> Self {
        let slots: Vec<Coordinates> = (0..nvars)
            .map(|i| Coordinates::new(ds.iter().map(|d| &d.coeffs[i])))
            .collect();
        let mut offsets = Vec::with_capacity(nvars);
        let mut dim = 0;
        for s in &slots {
            offsets.push(dim);
            dim += s.dim();
        }
        DerivationCoordinates { slots, offsets, dim }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn vector(&self, d: &Derivation) -> Vec<ExactScalar> {
        let mut v = vec![ExactScalar::zero(); self.dim];
        for (i, slot) in self.slots.iter().enumerate() {
            for (k, c) in slot.vector(&d.coeffs[i]).into_iter().enumerate() {
                v[self.offsets[i] + k] = c;
            }
        }
        v
    }

    pub(crate) fn derivation(&self, ctx: &Arc<VarContext>, v: &[ExactScalar]) -> Derivation {
        let coeffs = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, slot)| slot.poly(ctx, &v[self.offsets[i]..self.offsets[i] + slot.dim()]))
            .collect();
        Derivation {
            ctx: ctx.clone(),
            coeffs,
        }
    }
}

/// Echelon basis of the span of a family of derivations.
pub fn derivation_span_basis(ctx: &Arc<VarContext>, ds: &[Derivation]) -> Vec<Derivation> {
    let refs: Vec<&Derivation> = ds.iter().collect();
    let coords = DerivationCoordinates::new(&refs, ctx.len());
    let vectors: Vec<_> = ds.iter().map(|d| coords.vector(d)).collect();
    linalg::span_basis(&vectors, coords.dim())
        .iter()
        .map(|v| coords.derivation(ctx, v))
        .collect()
}

/// Coefficients writing `d` as a combination of `generators`, if possible.
pub fn derivation_span_coefficients(generators: &[Derivation], d: &Derivation) -> Option<Vec<ExactScalar>> {
    let mut refs: Vec<&Derivation> = generators.iter().collect();
    refs.push(d);
    let coords = DerivationCoordinates::new(&refs, d.nvars());
    let gens: Vec<_> = generators.iter().map(|g| coords.vector(g)).collect();
    linalg::span_coefficients(&gens, &coords.vector(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, scalar};

    fn ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::new(names).unwrap()
    }

    fn delta_uv() -> Derivation {
        let c = ctx(&["u", "v"]);
        let u = Poly::var(&c, 0);
        let v = Poly::var(&c, 1);
        Derivation::new(&c, vec![Poly::one(&c), &Poly::one(&c) + &(&u * &v)]).unwrap()
    }

    fn jordan3() -> Derivation {
        let c = ctx(&["x1", "x2", "x3"]);
        let x: Vec<Poly> = (0..3).map(|i| Poly::var(&c, i)).collect();
        Derivation::new(&c, vec![&Poly::one(&c) - &(&x[0] * &x[1]), x[0].pow(3), x[1].clone()]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let d = delta_uv();
        let c = d.context().clone();
        assert_eq!(d.apply(&Poly::var(&c, 1)).unwrap().to_string(), "u*v + 1");
        assert!(d.apply(&Poly::from_i64(&c, 7)).unwrap().is_zero());
        let j = jordan3();
        assert_eq!(j.apply(&Poly::var(j.context(), 2)).unwrap(), Poly::var(j.context(), 1));
    }

    #[test]
    fn bracket_examples() {
        let c = ctx(&["x"]);
        let dx = Derivation::partial(&c, 0);
        let euler = Derivation::new(&c, vec![Poly::var(&c, 0)]).unwrap();
        assert_eq!(dx.bracket(&euler).unwrap(), dx);
        assert!(euler.bracket(&euler).unwrap().is_zero());
    }

    #[test]
    fn restriction_examples() {
        let j = jordan3();
        let r = j.restrict_to(&[0, 1]).unwrap();
        assert_eq!(r.to_string(), "(-x1*x2 + 1)*d/dx1 + x1^3*d/dx2");
        assert!(j.restrict(2).is_none());
        assert!(delta_uv().restrict(1).is_none());
        assert_eq!(delta_uv().restrict(0).unwrap(), delta_uv());
    }

    #[test]
    fn lnd_examples() {
        let c = ctx(&["x"]);
        let w = lnd_check(&Derivation::partial(&c, 0), 5);
        assert_eq!(w.status, LndStatus::LocallyNilpotent);
        assert_eq!(w.nilpotency_bound, 2);
        let euler = Derivation::new(&c, vec![Poly::var(&c, 0)]).unwrap();
        assert_eq!(lnd_check(&euler, 10).status, LndStatus::NotWithinBound);

        let c2 = ctx(&["x1", "x2"]);
        let d = Derivation::new(&c2, vec![Poly::one(&c2), Poly::var(&c2, 0)]).unwrap();
        let w = lnd_check(&d, 10);
        assert!(w.is_certified());
        assert_eq!(w.orders, vec![Some(2), Some(3)]);
        assert_eq!(w.nilpotency_bound, 3);
    }

    #[test]
    fn exponential_examples() {
        let c = ctx(&["x"]);
        let w = lnd_check(&Derivation::partial(&c, 0), 5);
        let e = w.exponential(&scalar(1)).unwrap();
        assert_eq!(e.forward()[0].to_string(), "x + 1");

        let c2 = ctx(&["x1", "x2"]);
        let d = Derivation::new(&c2, vec![Poly::one(&c2), Poly::var(&c2, 0)]).unwrap();
        let w = lnd_check(&d, 10);
        let e = w.exponential(&scalar(1)).unwrap();
        assert_eq!(e.forward()[0].to_string(), "x1 + 1");
        assert_eq!(e.forward()[1].to_string(), "x1 + x2 + 1/2");
        assert!(w.exponential(&scalar(0)).unwrap().is_identity());

        let euler = Derivation::new(&c, vec![Poly::var(&c, 0)]).unwrap();
        assert!(matches!(
            lnd_check(&euler, 3).exponential(&scalar(1)),
            Err(DerivationError::NotCertified)
        ));
    }

    #[test]
    fn darboux_examples() {
        let c = ctx(&["x"]);
        let x = Poly::var(&c, 0);
        let euler = Derivation::new(&c, vec![x.clone()]).unwrap();
        assert_eq!(darboux_check(&euler, &x).unwrap(), Some(Poly::one(&c)));
        let d = delta_uv();
        assert_eq!(darboux_check(&d, &Poly::var(d.context(), 1)).unwrap(), None);
        assert_eq!(
            darboux_check(&d, &Poly::one(d.context())).unwrap(),
            Some(Poly::zero(d.context()))
        );
        assert!(darboux_check(&d, &Poly::zero(d.context())).is_err());
    }

    #[test]
    fn darboux_search_examples() {
        let d = delta_uv();
        let c = d.context().clone();
        let k = darboux_search_fixed_lambda(&d, &Poly::zero(&c), 6).unwrap();
        assert_eq!(k, vec![Poly::one(&c)]);

        let cx = ctx(&["x"]);
        let x = Poly::var(&cx, 0);
        let euler = Derivation::new(&cx, vec![x.clone()]).unwrap();
        let k = darboux_search_fixed_lambda(&euler, &Poly::from_i64(&cx, 2), 3).unwrap();
        assert_eq!(k, vec![x.pow(2)]);

        let dx = Derivation::partial(&cx, 0);
        for deg in 0..6 {
            assert!(darboux_search_fixed_lambda(&dx, &Poly::one(&cx), deg)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn image_examples() {
        let cx = ctx(&["x"]);
        let x = Poly::var(&cx, 0);
        let img = image_basis(&Derivation::partial(&cx, 0), 3);
        assert_eq!(img.len(), 3);
        for p in [Poly::one(&cx), x.clone(), x.pow(2)] {
            assert!(poly::span_coefficients(&img, &p).is_some());
        }
        assert!(poly::span_coefficients(&img, &x.pow(3)).is_none());

        let j = jordan3();
        let img = image_basis(&j, 4);
        assert!(poly::span_coefficients(&img, &Poly::one(j.context())).is_none());
    }

    #[test]
    fn plinth_examples() {
        let c = ctx(&["x", "y"]);
        let w = lnd_check(&Derivation::partial(&c, 0), 5);
        assert!(plinth_basis(&w, 3).unwrap().contains_constant);

        let c2 = ctx(&["x1", "x2"]);
        let d = Derivation::new(&c2, vec![Poly::one(&c2), Poly::var(&c2, 0)]).unwrap();
        assert!(plinth_basis(&lnd_check(&d, 10), 3).unwrap().contains_constant);

        let x = Poly::var(&c, 0);
        let d = Derivation::new(&c, vec![Poly::zero(&c), x.clone()]).unwrap();
        let p = plinth_basis(&lnd_check(&d, 10), 3).unwrap();
        assert!(!p.contains_constant);
        let expected = [x.clone(), x.pow(2), x.pow(3)];
        assert_eq!(p.basis.len(), 3);
        for e in &expected {
            assert!(poly::span_coefficients(&p.basis, e).is_some());
        }

        let euler = Derivation::new(&ctx(&["x"]), vec![Poly::var(&ctx(&["x"]), 0)]).unwrap();
        assert!(plinth_basis(&lnd_check(&euler, 3), 2).is_err());
    }

    #[test]
    fn display_uses_partials() {
        assert_eq!(delta_uv().to_string(), "d/du + (u*v + 1)*d/dv");
        let c = ctx(&["x"]);
        let half = Derivation::partial(&c, 0).scale(&ratio(1, 2));
        assert_eq!(half.to_string(), "1/2*d/dx");
    }
}
