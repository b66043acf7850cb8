//! Polynomial automorphisms stored as words of tame generators.
//!
//! An [`Automorphism`] acts on the ring: `phi(p) = p(phi(x_1), ..., phi(x_n))`.
//! Composition is composition of ring maps, `(f ∘ g)(p) = f(g(p))`, so that
//! conjugation of derivations is a left action:
//! `conjugate(f, conjugate(g, D)) = conjugate(f ∘ g, D)`.

use crate::derivation::{Derivation, DerivationError};
use crate::linalg::{self, ExactScalar, QMatrix};
use crate::poly::{Coordinates, Poly, PolyError, VarContext};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AutomorphismError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("affine part is singular")]
    Singular,
    #[error("expected dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("elementary shift of x{0} must not involve x{0}")]
    ShiftInvolvesTarget(usize),
    #[error("supplied inverse does not invert the map")]
    NotInverse,
}

/// One letter of an automorphism word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryGen {
    /// `x -> A x + c`.
    Affine { matrix: QMatrix, shift: Vec<ExactScalar> },
    /// `x_target -> x_target + shift`, all other variables fixed.
    Elementary { target: usize, shift: Poly },
    /// An explicit map together with its verified inverse.
    Tuple { forward: Vec<Poly>, inverse: Vec<Poly> },
}

impl ElementaryGen {
    fn images(&self, ctx: &Arc<VarContext>) -> Vec<Poly> {
        match self {
            ElementaryGen::Affine { matrix, shift } => affine_images(ctx, matrix, shift),
            ElementaryGen::Elementary { target, shift } => {
                let mut out: Vec<Poly> = (0..ctx.len()).map(|i| Poly::var(ctx, i)).collect();
                out[*target] = &out[*target] + shift;
                out
            }
            ElementaryGen::Tuple { forward, .. } => forward.clone(),
        }
    }

    fn inverted(&self) -> ElementaryGen {
        match self {
            ElementaryGen::Affine { matrix, shift } => {
                let inv = matrix.inverse().expect("affine generators are invertible");
                let shift = inv.mul_vec(shift).into_iter().map(|v| -v).collect();
                ElementaryGen::Affine { matrix: inv, shift }
            }
            ElementaryGen::Elementary { target, shift } => ElementaryGen::Elementary {
                target: *target,
                shift: -shift,
            },
            ElementaryGen::Tuple { forward, inverse } => ElementaryGen::Tuple {
                forward: inverse.clone(),
                inverse: forward.clone(),
            },
        }
    }
}

fn affine_images(ctx: &Arc<VarContext>, matrix: &QMatrix, shift: &[ExactScalar]) -> Vec<Poly> {
    (0..ctx.len())
        .map(|i| {
            let mut p = Poly::constant(ctx, shift[i].clone());
            for j in 0..ctx.len() {
                let a = matrix.get(i, j);
                if !a.is_zero() {
                    p = &p + &Poly::var(ctx, j).scalar_mul(a);
                }
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Automorphism {
    ctx: Arc<VarContext>,
    word: Vec<ElementaryGen>,
    forward: Vec<Poly>,
    inverse: Vec<Poly>,
}

impl PartialEq for Automorphism {
    /// Equality of the maps, not of the words.
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.forward == other.forward
    }
}

fn substitute_all(polys: &[Poly], images: &[Poly]) -> Vec<Poly> {
    polys
        .iter()
        .map(|p| p.substitute(images).expect("images share the automorphism context"))
        .collect()
}

fn identity_tuple(ctx: &Arc<VarContext>) -> Vec<Poly> {
    (0..ctx.len()).map(|i| Poly::var(ctx, i)).collect()
}

impl Automorphism {
    pub fn identity(ctx: &Arc<VarContext>) -> Self {
        Automorphism {
            ctx: ctx.clone(),
            word: Vec::new(),
            forward: identity_tuple(ctx),
            inverse: identity_tuple(ctx),
        }
    }

    fn from_generator(ctx: &Arc<VarContext>, g: ElementaryGen) -> Self {
        let forward = g.images(ctx);
        let inverse = g.inverted().images(ctx);
        Automorphism {
            ctx: ctx.clone(),
            word: vec![g],
            forward,
            inverse,
        }
    }

    /// The product `w_1 ∘ w_2 ∘ ... ∘ w_k` of the given generators.
    pub fn from_word(ctx: &Arc<VarContext>, word: Vec<ElementaryGen>) -> Result<Self, AutomorphismError> {
        let mut out = Automorphism::identity(ctx);
        for g in word {
            let gen = match g {
                ElementaryGen::Affine { matrix, shift } => Automorphism::affine(ctx, matrix, shift)?,
                ElementaryGen::Elementary { target, shift } => Automorphism::elementary(ctx, target, shift)?,
                ElementaryGen::Tuple { forward, inverse } => Automorphism::from_tuples(forward, inverse)?,
            };
            out = out.compose(&gen)?;
        }
        Ok(out)
    }

    pub fn affine(ctx: &Arc<VarContext>, matrix: QMatrix, shift: Vec<ExactScalar>) -> Result<Self, AutomorphismError> {
        let n = ctx.len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(AutomorphismError::DimensionMismatch {
                expected: n,
                found: matrix.rows(),
            });
        }
        if shift.len() != n {
            return Err(AutomorphismError::DimensionMismatch {
                expected: n,
                found: shift.len(),
            });
        }
        if matrix.rank() < n {
            return Err(AutomorphismError::Singular);
        }
        Ok(Automorphism::from_generator(
            ctx,
            ElementaryGen::Affine { matrix, shift },
        ))
    }

    /// `x -> x + c`.
    pub fn translation(ctx: &Arc<VarContext>, c: Vec<ExactScalar>) -> Result<Self, AutomorphismError> {
        Automorphism::affine(ctx, QMatrix::identity(ctx.len()), c)
    }

    pub fn elementary(ctx: &Arc<VarContext>, target: usize, shift: Poly) -> Result<Self, AutomorphismError> {
        if target >= ctx.len() {
            return Err(AutomorphismError::DimensionMismatch {
                expected: ctx.len(),
                found: target,
            });
        }
        if shift.context() != ctx {
            return Err(PolyError::ContextMismatch.into());
        }
        if shift.involves(target) {
            return Err(AutomorphismError::ShiftInvolvesTarget(target));
        }
        Ok(Automorphism::from_generator(
            ctx,
            ElementaryGen::Elementary { target, shift },
        ))
    }

    /// Imports an explicit map. The caller supplies the inverse, which is
    /// verified in both directions by substitution.
    pub fn from_tuples(forward: Vec<Poly>, inverse: Vec<Poly>) -> Result<Self, AutomorphismError> {
        let ctx = forward
            .first()
            .map(|p| p.context().clone())
            .ok_or(AutomorphismError::DimensionMismatch { expected: 1, found: 0 })?;
        for tuple in [&forward, &inverse] {
            if tuple.len() != ctx.len() {
                return Err(AutomorphismError::DimensionMismatch {
                    expected: ctx.len(),
                    found: tuple.len(),
                });
            }
            if tuple.iter().any(|p| p.context() != &ctx) {
                return Err(PolyError::ContextMismatch.into());
            }
        }
        let id = identity_tuple(&ctx);
        if substitute_all(&forward, &inverse) != id || substitute_all(&inverse, &forward) != id {
            return Err(AutomorphismError::NotInverse);
        }
        Ok(Automorphism::from_generator(
            &ctx,
            ElementaryGen::Tuple { forward, inverse },
        ))
    }

    /// Imports a triangular map whose component `i` is `c_i x_i + p_i` with a
    /// nonzero scalar `c_i` and `p_i` free of `x_i` and of every later (or,
    /// for the descending shape, earlier) variable. The inverse is computed by
    /// back-substitution.
    pub fn from_triangular(forward: Vec<Poly>) -> Result<Self, AutomorphismError> {
        let ctx = forward
            .first()
            .map(|p| p.context().clone())
            .ok_or(AutomorphismError::DimensionMismatch { expected: 1, found: 0 })?;
        let n = ctx.len();
        if forward.len() != n {
            return Err(AutomorphismError::DimensionMismatch {
                expected: n,
                found: forward.len(),
            });
        }
        let order = triangular_order(&forward).ok_or(AutomorphismError::NotInverse)?;
        let mut inverse: Vec<Option<Poly>> = vec![None; n];
        for &i in &order {
            let xi = Poly::var(&ctx, i);
            let lead = forward[i].coeff(&xi.multidegree_lex()?);
            let rest = &forward[i] - &xi.scalar_mul(&lead);
            if lead.is_zero() || rest.involves(i) || forward[i].terms().any(|(m, _)| m.exponents()[i] > 1) {
                return Err(AutomorphismError::NotInverse);
            }
            // x_i = (y_i - rest(x)) / lead, with rest depending on already inverted variables.
            let images: Vec<Poly> = (0..n)
                .map(|j| inverse[j].clone().unwrap_or_else(|| Poly::var(&ctx, j)))
                .collect();
            let rest_inv = rest.substitute(&images)?;
            inverse[i] = Some((&xi - &rest_inv).scalar_mul(&lead.recip()));
        }
        let inverse: Vec<Poly> = inverse
            .into_iter()
            .map(|p| p.expect("every variable processed"))
            .collect();
        Automorphism::from_tuples(forward, inverse)
    }

    /// Builds an automorphism from tuples known to be mutually inverse.
    pub(crate) fn from_trusted_tuples(ctx: &Arc<VarContext>, forward: Vec<Poly>, inverse: Vec<Poly>) -> Self {
        Automorphism {
            ctx: ctx.clone(),
            word: vec![ElementaryGen::Tuple {
                forward: forward.clone(),
                inverse: inverse.clone(),
            }],
            forward,
            inverse,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn word(&self) -> &[ElementaryGen] {
        &self.word
    }

    /// `(phi(x_1), ..., phi(x_n))`.
    pub fn forward(&self) -> &[Poly] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Poly] {
        &self.inverse
    }

    /// Maximum total degree of the forward components.
    pub fn degree(&self) -> i64 {
        self.forward.iter().map(Poly::total_degree).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.forward == identity_tuple(&self.ctx)
    }

    /// `phi(p)`.
    pub fn apply(&self, p: &Poly) -> Result<Poly, PolyError> {
        if p.context() != &self.ctx {
            return Err(PolyError::ContextMismatch);
        }
        p.substitute(&self.forward)
    }

    /// `self ∘ other` as ring maps.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, AutomorphismError> {
        if self.ctx != other.ctx {
            return Err(PolyError::ContextMismatch.into());
        }
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Ok(Automorphism {
            ctx: self.ctx.clone(),
            word,
            forward: substitute_all(&other.forward, &self.forward),
            inverse: substitute_all(&self.inverse, &other.inverse),
        })
    }

    pub fn invert(&self) -> Automorphism {
        Automorphism {
            ctx: self.ctx.clone(),
            word: self.word.iter().rev().map(ElementaryGen::inverted).collect(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

/// `phi D phi^{-1}`, coefficient `i` being `phi(D(phi^{-1}(x_i)))`.
pub fn conjugate_derivation(f: &Automorphism, d: &Derivation) -> Result<Derivation, AutomorphismError> {
    if f.context() != d.context() {
        return Err(PolyError::ContextMismatch.into());
    }
    let coeffs = f
        .inverse()
        .iter()
        .map(|g| Ok(d.apply(g)?.substitute(f.forward())?))
        .collect::<Result<Vec<_>, AutomorphismError>>()?;
    Ok(Derivation::new(f.context(), coeffs)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyCheck {
    pub holds: bool,
    /// First coordinate (zero-based) where `D(phi(x_i)) != phi(D(x_i))`.
    pub failing_coordinate: Option<usize>,
}

/// Tests `D(phi(x_i)) = phi(D(x_i))` for every coordinate.
pub fn in_isotropy(f: &Automorphism, d: &Derivation) -> Result<IsotropyCheck, AutomorphismError> {
    if f.context() != d.context() {
        return Err(PolyError::ContextMismatch.into());
    }
    for (i, fi) in f.forward().iter().enumerate() {
        let lhs = d.apply(fi)?;
        let rhs = d.coeff(i).substitute(f.forward())?;
        if lhs != rhs {
            return Ok(IsotropyCheck {
                holds: false,
                failing_coordinate: Some(i),
            });
        }
    }
    Ok(IsotropyCheck {
        holds: true,
        failing_coordinate: None,
    })
}

#[derive(Clone, Debug)]
pub struct TranslationCommuters {
    /// Variables `x_j` that no coefficient involves; `e_j` always commutes.
    pub coordinate_directions: Vec<usize>,
    /// Basis of all `c` with `a_i(x + c) = a_i(x)` for every `i`.
    pub subspace: Vec<Vec<ExactScalar>>,
    /// Each basis translation passed [`in_isotropy`].
    pub verified: bool,
}

/// The translations `x -> x + c` commuting with `d`.
///
/// `a(x + c) = a(x)` for all multiples of `c` exactly when the directional
/// derivative `sum_j c_j da/dx_j` vanishes, so the set is the kernel of a
/// linear system in `c`.
pub fn translation_commuters(d: &Derivation) -> Result<TranslationCommuters, AutomorphismError> {
    let n = d.nvars();
    let ctx = d.context();
    let coordinate_directions: Vec<usize> = (0..n).filter(|&j| d.coeffs().iter().all(|a| !a.involves(j))).collect();

    let partials: Vec<Vec<Poly>> = (0..n)
        .map(|j| d.coeffs().iter().map(|a| a.partial(j)).collect())
        .collect();
    let mut columns: Vec<Vec<ExactScalar>> = vec![Vec::new(); n];
    for i in 0..n {
        let coords = Coordinates::new(partials.iter().map(|col| &col[i]));
        for (j, col) in partials.iter().enumerate() {
            columns[j].extend(coords.vector(&col[i]));
        }
    }
    let rows = columns.first().map_or(0, Vec::len);
    let subspace = linalg::kernel_basis(&QMatrix::from_columns(rows, &columns));
    let mut verified = true;
    for c in &subspace {
        let t = Automorphism::translation(ctx, c.clone())?;
        verified &= in_isotropy(&t, d)?.holds;
    }
    Ok(TranslationCommuters {
        coordinate_directions,
        subspace,
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    /// `deg(phi^l) <= max_degree` for every probed power.
    Bounded { max_degree: i64 },
    /// `deg(phi^power) = degree` exceeded the cap.
    ExceededCap { power: usize, degree: i64 },
}

/// Tracks `deg(phi^l)` for `l = 1..=max_power`. Heuristic: bounded output is
/// evidence for algebraicity, never a proof.
pub fn degree_growth_probe(f: &Automorphism, max_power: usize, degree_cap: i64) -> GrowthVerdict {
    let mut current = f.forward().to_vec();
    let mut max_degree = 0;
    for power in 1..=max_power.max(1) {
        if power > 1 {
            // phi^l = phi^{l-1} ∘ phi: substitute phi^{l-1} into phi's components.
            current = substitute_all(f.forward(), &current);
        }
        let degree = current.iter().map(Poly::total_degree).max().unwrap_or(0);
        if degree > degree_cap {
            return GrowthVerdict::ExceededCap { power, degree };
        }
        max_degree = max_degree.max(degree);
    }
    GrowthVerdict::Bounded { max_degree }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    /// No rational fixed point was found.
    None {
        /// Every branch was closed exactly: there is no fixed point over Q.
        exhaustive_over_q: bool,
        /// Additionally every step was linear, so no fixed point exists over
        /// any extension field either.
        holds_over_extensions: bool,
    },
    Witness(Vec<ExactScalar>),
    NotTriangular,
}

/// Variable processing order for a triangular tuple: ascending when component
/// `i` only involves `x_1..x_i`, descending when it only involves `x_i..x_n`.
fn triangular_order(forward: &[Poly]) -> Option<Vec<usize>> {
    let n = forward.len();
    if forward
        .iter()
        .enumerate()
        .all(|(i, p)| p.variables().iter().all(|&j| j <= i))
    {
        return Some((0..n).collect());
    }
    if forward
        .iter()
        .enumerate()
        .all(|(i, p)| p.variables().iter().all(|&j| j >= i))
    {
        return Some((0..n).rev().collect());
    }
    None
}

/// Rational fixed points of a triangular map, by back-substitution.
pub fn fixed_points_triangular(f: &Automorphism) -> FixedPoints {
    let Some(order) = triangular_order(f.forward()) else {
        return FixedPoints::NotTriangular;
    };
    let mut search = FixedPointSearch {
        f,
        order,
        exhaustive: true,
        linear: true,
    };
    let assigned = vec![None; f.context().len()];
    match search.run(0, assigned) {
        Some(point) => FixedPoints::Witness(point),
        None => FixedPoints::None {
            exhaustive_over_q: search.exhaustive,
            holds_over_extensions: search.exhaustive && search.linear,
        },
    }
}

struct FixedPointSearch<'a> {
    f: &'a Automorphism,
    order: Vec<usize>,
    exhaustive: bool,
    linear: bool,
}

impl FixedPointSearch<'_> {
    /// `assigned[j]` is `Some` once `x_j` is pinned; processed variables that
    /// are still `None` are free.
    fn run(&mut self, step: usize, mut assigned: Vec<Option<ExactScalar>>) -> Option<Vec<ExactScalar>> {
        let ctx = self.f.context().clone();
        if step == self.order.len() {
            let point: Vec<ExactScalar> = assigned
                .into_iter()
                .map(|v| v.unwrap_or_else(ExactScalar::zero))
                .collect();
            let image: Vec<ExactScalar> = self.f.forward().iter().map(|p| p.eval(&point)).collect();
            return (image == point).then_some(point);
        }
        let i = self.order[step];
        let processed = &self.order[..step];
        let equation = &self.f.forward()[i] - &Poly::var(&ctx, i);
        let mut g = specialize(&equation, &assigned);
        let free: Vec<usize> = processed.iter().copied().filter(|&j| g.involves(j)).collect();

        if !free.is_empty() {
            if free.len() == 1 && !g.involves(i) {
                let z = free[0];
                let mut found = None;
                for root in self.roots_in(&g, z) {
                    let mut next = assigned.clone();
                    next[z] = Some(root);
                    if let Some(p) = self.run(step + 1, next) {
                        found = Some(p);
                        break;
                    }
                }
                return found;
            }
            // Several free parameters interact; pin them to zero.
            self.exhaustive = false;
            for &j in &free {
                assigned[j] = Some(ExactScalar::zero());
            }
            g = specialize(&equation, &assigned);
        }

        if g.is_zero() {
            return self.run(step + 1, assigned);
        }
        for root in self.roots_in(&g, i) {
            let mut next = assigned.clone();
            next[i] = Some(root);
            if let Some(p) = self.run(step + 1, next) {
                return Some(p);
            }
        }
        None
    }

    /// Rational roots of `g` viewed as a univariate polynomial in `x_var`.
    fn roots_in(&mut self, g: &Poly, var: usize) -> Vec<ExactScalar> {
        let degree = g.terms().map(|(m, _)| m.exponents()[var]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![ExactScalar::zero(); degree + 1];
        for (m, c) in g.terms() {
            coeffs[m.exponents()[var] as usize] += c;
        }
        if degree > 1 {
            self.linear = false;
        }
        let (roots, complete) = rational_roots(&coeffs);
        let distinct_bound = degree;
        if degree > 1 && (!complete || roots.len() < distinct_bound) {
            // Some roots may be irrational; absence over Q says nothing beyond Q.
            self.linear = false;
        }
        if !complete {
            self.exhaustive = false;
        }
        roots
    }
}

fn specialize(p: &Poly, assigned: &[Option<ExactScalar>]) -> Poly {
    let ctx = p.context();
    let images: Vec<Poly> = assigned
        .iter()
        .enumerate()
        .map(|(j, v)| match v {
            Some(c) => Poly::constant(ctx, c.clone()),
            None => Poly::var(ctx, j),
        })
        .collect();
    p.substitute(&images).expect("same context")
}

const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

/// Rational roots of `sum coeffs[k] t^k`, via the rational root theorem.
/// The flag is false when a coefficient was too large to enumerate divisors.
pub fn rational_roots(coeffs: &[ExactScalar]) -> (Vec<ExactScalar>, bool) {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let Some(top) = ints.iter().rposition(|c| !c.is_zero()) else {
        return (Vec::new(), true);
    };
    let low = ints
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero coefficient exists");
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(ExactScalar::zero());
    }
    if top == low {
        return (roots, true);
    }
    let (Some(ps), Some(qs)) = (divisors(&ints[low]), divisors(&ints[top])) else {
        return (roots, false);
    };
    let reduced = &ints[low..=top];
    let mut candidates: Vec<ExactScalar> = Vec::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let r = ExactScalar::new(BigInt::from(sign) * p, q.clone());
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
    }
    candidates.sort();
    for r in candidates {
        let value = reduced.iter().rev().fold(ExactScalar::zero(), |acc, c| {
            acc * &r + ExactScalar::from_integer(c.clone())
        });
        if value.is_zero() {
            roots.push(r);
        }
    }
    (roots, true)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&v| v <= DIVISOR_SEARCH_LIMIT)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}
