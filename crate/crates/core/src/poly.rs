//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a canonical map from [`Monomial`] to nonzero coefficient,
//! tied to a shared [`VarContext`]. Monomials compare lexicographically on
//! their exponent vectors, so the first variable of the context has the
//! highest precedence. Changing the variable order of the context is how a
//! caller picks a different lex convention.

use crate::linalg::{self, ExactScalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live in different variable contexts")]
    ContextMismatch,
    #[error("expected {expected} images, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("invalid variable context: {0}")]
    InvalidContext(String),
    #[error("variable `{0}` is not in the target context")]
    MissingVariable(String),
}

/// Ordered list of distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarContext>, PolyError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(PolyError::InvalidContext("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::InvalidContext(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(VarContext { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector. The derived ordering is lex with variable 0 first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { exps })
    }
}

/// All monomials of total degree at most `max_total_degree`, in ascending lex
/// order. There are `C(n + d, n)` of them.
pub fn monomial_basis(ctx: &VarContext, max_total_degree: u32) -> Vec<Monomial> {
    let n = ctx.len();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fill_basis(&mut out, &mut exps, 0, max_total_degree);
    out.sort();
    out
}

fn fill_basis(out: &mut Vec<Monomial>, exps: &mut Vec<u32>, var: usize, budget: u32) {
    if var == exps.len() {
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for e in 0..=budget {
        exps[var] = e;
        fill_basis(out, exps, var + 1, budget - e);
    }
    exps[var] = 0;
}

/// Sparse polynomial in canonical form: no stored coefficient is zero.
#[derive(Clone, Debug)]
pub struct Poly {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Poly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Poly::constant(ctx, ExactScalar::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: ExactScalar) -> Self {
        Poly::term(ctx, Monomial::one(ctx.len()), c)
    }

    pub fn from_i64(ctx: &Arc<VarContext>, c: i64) -> Self {
        Poly::constant(ctx, linalg::scalar(c))
    }

    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        assert!(i < ctx.len(), "variable index out of range");
        Poly::term(ctx, Monomial::var(ctx.len(), i), ExactScalar::one())
    }

    /// The variable with the given name; panics when it is not in the context.
    pub fn named(ctx: &Arc<VarContext>, name: &str) -> Self {
        let i = ctx
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        Poly::var(ctx, i)
    }

    pub fn term(ctx: &Arc<VarContext>, m: Monomial, c: ExactScalar) -> Self {
        assert_eq!(m.exps.len(), ctx.len(), "monomial arity mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, ExactScalar)>,
    {
        let mut p = Poly::zero(ctx);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), ctx.len(), "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exps[var] > 0)
    }

    /// Indices of the variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.involves(i)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = Poly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &ExactScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.nvars(), "variable index out of range");
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] -= 1;
            out.terms
                .insert(Monomial { exps }, c * ExactScalar::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Replaces variable `i` by `images[i]`. The result lives in the images'
    /// context.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars(),
                found: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let target = first.ctx.clone();
        if images.iter().any(|p| !same_context(&p.ctx, &target)) {
            return Err(PolyError::ContextMismatch);
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&target), p.clone()]).collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
            }
            for (k, v) in t.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        assert_eq!(point.len(), self.nvars(), "point arity mismatch");
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// The lex-greatest monomial of the support.
    pub fn multidegree_lex(&self) -> Result<Monomial, PolyError> {
        self.terms.keys().next_back().cloned().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    /// Maximum total degree of the support; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.total_degree() as i64).max().unwrap_or(-1)
    }

    /// `self / q` when `q` divides `self` exactly, `None` otherwise.
    pub fn exact_divide(&self, q: &Poly) -> Result<Option<Poly>, PolyError> {
        self.check(q)?;
        let Some((lm, lc)) = q.leading_term() else {
            return Err(PolyError::DivisionByZero);
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ctx);
        while let Some((rm, rc)) = rem.leading_term() {
            let Some(m) = rm.div(lm) else {
                return Ok(None);
            };
            let c = rc / lc;
            let step = q.mul_monomial(&m).scalar_mul(&c);
            rem = &rem - &step;
            quot.add_term(m, c);
        }
        Ok(Some(quot))
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    /// Fails if a variable that actually occurs is missing from `target`.
    pub fn rename_into(&self, target: &Arc<VarContext>) -> Result<Poly, PolyError> {
        if same_context(&self.ctx, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.ctx.names.iter().map(|n| target.index_of(n)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| PolyError::MissingVariable(self.ctx.names[i].clone()))?;
                exps[j] = e;
            }
            out.add_term(Monomial { exps }, c.clone());
        }
        Ok(out)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial context mismatch")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Dense coordinates of a family of polynomials over the union of their supports.
///
/// Used to turn polynomial subspace questions into [`crate::linalg`] calls.
pub struct Coordinates {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Coordinates {
    pub fn new<'a, I: IntoIterator<Item = &'a Poly>>(polys: I) -> Self {
        let mut set = std::collections::BTreeSet::new();
        for p in polys {
            set.extend(p.terms.keys().cloned());
        }
        let monomials: Vec<Monomial> = set.into_iter().collect();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Coordinates { monomials, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinate vector; panics if `p` has a monomial outside the index.
    pub fn vector(&self, p: &Poly) -> Vec<ExactScalar> {
        let mut v = vec![ExactScalar::zero(); self.dim()];
        for (m, c) in &p.terms {
            v[self.index[m]] = c.clone();
        }
        v
    }

    pub fn poly(&self, ctx: &Arc<VarContext>, v: &[ExactScalar]) -> Poly {
        Poly::from_terms(
            ctx,
            self.monomials
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

/// Echelon basis of the span of `polys`.
pub fn span_basis(ctx: &Arc<VarContext>, polys: &[Poly]) -> Vec<Poly> {
    let coords = Coordinates::new(polys);
    let vectors: Vec<_> = polys.iter().map(|p| coords.vector(p)).collect();
    // Reverse the coordinate order so pivots land on lex-greatest monomials.
    let reversed: Vec<Vec<ExactScalar>> = vectors.iter().map(|v| v.iter().rev().cloned().collect()).collect();
    linalg::span_basis(&reversed, coords.dim())
        .into_iter()
        .map(|v| {
            let v: Vec<ExactScalar> = v.into_iter().rev().collect();
            coords.poly(ctx, &v)
        })
        .collect()
}

/// Basis of `span(a) ∩ span(b)`.
pub fn span_intersection(ctx: &Arc<VarContext>, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let coords = Coordinates::new(a.iter().chain(b));
    let va: Vec<_> = a.iter().map(|p| coords.vector(p)).collect();
    let vb: Vec<_> = b.iter().map(|p| coords.vector(p)).collect();
    let inter = linalg::subspace_intersection(&va, &vb);
    let polys: Vec<Poly> = inter.iter().map(|v| coords.poly(ctx, v)).collect();
    span_basis(ctx, &polys)
}

/// Coefficients writing `p` as a combination of `generators`, if possible.
pub fn span_coefficients(generators: &[Poly], p: &Poly) -> Option<Vec<ExactScalar>> {
    let coords = Coordinates::new(generators.iter().chain(std::iter::once(p)));
    let gens: Vec<_> = generators.iter().map(|g| coords.vector(g)).collect();
    linalg::span_coefficients(&gens, &coords.vector(p))
}

fn write_scalar(f: &mut fmt::Formatter<'_>, c: &ExactScalar) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Monomial {
    /// Renders without variable names (`x0^e0*...`); see [`Poly`] for named output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// Canonical text: terms in descending lex order, `a/b` coefficients, `^`
/// exponents, `*` between factors. This is the format the parser reads back.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ctx.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ctx.names[i], e)),
                }
            }
            if factors.is_empty() {
                write_scalar(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_scalar(f, &abs)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, scalar};

    fn ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::new(names).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx(&["u", "v"]);
        let u = Poly::var(&c, 0);
        let v = Poly::var(&c, 1);
        let p = &(&u + &v) * &(&u - &v);
        assert_eq!(p, &u.pow(2) - &v.pow(2));
        assert_eq!(&p + &Poly::zero(&c), p);
    }

    #[test]
    fn square_of_one_plus_uv() {
        let c = ctx(&["u", "v"]);
        let uv = &Poly::var(&c, 0) * &Poly::var(&c, 1);
        let p = (&Poly::one(&c) + &uv).pow(2);
        let expected = Poly::one(&c) + uv.scalar_mul(&scalar(2)) + uv.pow(2);
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "u^2*v^2 + 2*u*v + 1");
    }

    #[test]
    fn partial_derivatives() {
        let c = ctx(&["u", "v"]);
        let u = Poly::var(&c, 0);
        let v = Poly::var(&c, 1);
        assert_eq!((&u.pow(2) * &v).partial(0), (&u * &v).scalar_mul(&scalar(2)));
        assert!(u.pow(2).partial(1).is_zero());
        assert_eq!((&Poly::one(&c) + &(&u * &v)).partial(1), u);
    }

    #[test]
    fn substitution_examples() {
        let c = ctx(&["u", "v"]);
        let u = Poly::var(&c, 0);
        let v = Poly::var(&c, 1);
        let one = Poly::one(&c);
        let shifted = u.pow(2).substitute(&[&u + &one, v.clone()]).unwrap();
        assert_eq!(shifted.to_string(), "u^2 + 2*u + 1");
        let p = &u.pow(3) - &(&u * &v);
        assert_eq!(p.substitute(&[u.clone(), v.clone()]).unwrap(), p);

        let c3 = ctx(&["x1", "x2", "x3"]);
        let x: Vec<Poly> = (0..3).map(|i| Poly::var(&c3, i)).collect();
        let one = Poly::one(&c3);
        let a1 = &one - &(&x[0] * &x[1]);
        let img = a1.substitute(&[&x[0] + &one, x[1].clone(), x[2].clone()]).unwrap();
        assert_eq!(img, &(&one - &(&x[0] * &x[1])) - &x[1]);
        assert!(matches!(
            a1.substitute(&x[..2]),
            Err(PolyError::ArityMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn lex_multidegree() {
        let c = ctx(&["x1", "x2"]);
        let x1 = Poly::var(&c, 0);
        let x2 = Poly::var(&c, 1);
        let p = &(&x1.pow(2) * &x2) + &x2.pow(5);
        assert_eq!(p.multidegree_lex().unwrap(), Monomial::new(vec![2, 1]));
        assert_eq!(Poly::from_i64(&c, 5).multidegree_lex().unwrap(), Monomial::one(2));
        assert_eq!(Poly::zero(&c).multidegree_lex(), Err(PolyError::ZeroPolynomial));

        // v >= u: the context order carries the convention.
        let vu = ctx(&["v", "u"]);
        let u = Poly::named(&vu, "u");
        let v = Poly::named(&vu, "v");
        let f = &u + &(&u * &v);
        assert_eq!(f.multidegree_lex().unwrap(), Monomial::new(vec![1, 1]));
    }

    #[test]
    fn total_degree_sentinel() {
        let c = ctx(&["u", "v"]);
        let uv = &Poly::var(&c, 0) * &Poly::var(&c, 1);
        assert_eq!((&Poly::one(&c) + &uv).total_degree(), 2);
        assert_eq!(Poly::zero(&c).total_degree(), -1);
        let c3 = ctx(&["x1", "x2", "x3"]);
        let a1 = &Poly::one(&c3) - &(&Poly::var(&c3, 0) * &Poly::var(&c3, 1));
        assert_eq!(a1.total_degree(), 2);
    }

    #[test]
    fn exact_division() {
        let c = ctx(&["u", "v"]);
        let u = Poly::var(&c, 0);
        let v = Poly::var(&c, 1);
        let uv = &u * &v;
        let p = &(&u.pow(2) * &v) + &(&u * &v.pow(2));
        assert_eq!(p.exact_divide(&uv).unwrap(), Some(&u + &v));
        assert_eq!((&Poly::one(&c) + &uv).exact_divide(&v).unwrap(), None);
        assert_eq!(Poly::zero(&c).exact_divide(&v).unwrap(), Some(Poly::zero(&c)));
        assert_eq!(u.exact_divide(&Poly::zero(&c)), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn monomial_basis_sizes() {
        assert_eq!(monomial_basis(&ctx(&["u", "v"]), 1).len(), 3);
        assert_eq!(monomial_basis(&ctx(&["x"]), 4).len(), 5);
        assert_eq!(monomial_basis(&ctx(&["a", "b", "c", "d"]), 3).len(), 35);
        let b = monomial_basis(&ctx(&["u", "v"]), 1);
        assert_eq!(
            b,
            vec![
                Monomial::new(vec![0, 0]),
                Monomial::new(vec![0, 1]),
                Monomial::new(vec![1, 0])
            ]
        );
    }

    #[test]
    fn rendering() {
        let c = ctx(&["x1", "x2"]);
        let x1 = Poly::var(&c, 0);
        let p = &Poly::one(&c) - &(&x1 * &Poly::var(&c, 1));
        assert_eq!(p.to_string(), "-x1*x2 + 1");
        assert_eq!(Poly::constant(&c, ratio(-3, 4)).to_string(), "-3/4");
        assert_eq!(x1.scalar_mul(&ratio(1, 2)).to_string(), "1/2*x1");
        assert_eq!(Poly::zero(&c).to_string(), "0");
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = Poly::var(&ctx(&["u"]), 0);
        let b = Poly::var(&ctx(&["v"]), 0);
        assert_eq!(a.checked_add(&b), Err(PolyError::ContextMismatch));
        assert!(VarContext::new(&["u", "u"]).is_err());
    }

    #[test]
    fn rename_between_contexts() {
        let small = ctx(&["u", "v"]);
        let big = ctx(&["u", "v", "x1"]);
        let p = &Poly::var(&small, 1).pow(2) + &Poly::var(&small, 0);
        let q = p.rename_into(&big).unwrap();
        assert_eq!(q.to_string(), "u + v^2");
        assert!(Poly::var(&big, 2).rename_into(&small).is_err());
    }
}
