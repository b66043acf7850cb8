//! Degree-stamped simplicity certificates, tower extensions and
//! bounded-degree centralizers.
//!
//! Nothing here decides simplicity. Every verdict records the degree bound
//! under which it was obtained.

use crate::derivation::{
    darboux_search_fixed_lambda, derivation_span_basis, derivation_span_coefficients, image_basis, lnd_check,
    Derivation, DerivationCoordinates, DerivationError, LndWitness,
};
use crate::linalg::{self, ExactScalar, QMatrix};
use crate::poly::{self, monomial_basis, Coordinates, Poly, PolyError, VarContext};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SimplicityError {
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("extension images are linearly dependent")]
    DependentImages,
    #[error("expected {expected} new variable names, got {found}")]
    NameCount { expected: usize, found: usize },
}

/// `D(y) = a y + b` extending `delta` on `A` to `A[y]`.
#[derive(Clone, Debug)]
pub struct ShamsuddinInstance {
    pub delta: Derivation,
    pub a: Poly,
    pub b: Poly,
    pub new_var: String,
}

impl ShamsuddinInstance {
    pub fn new(delta: Derivation, a: Poly, b: Poly, new_var: &str) -> Result<Self, SimplicityError> {
        if a.context() != delta.context() || b.context() != delta.context() {
            return Err(PolyError::ContextMismatch.into());
        }
        Ok(ShamsuddinInstance {
            delta,
            a,
            b,
            new_var: new_var.to_string(),
        })
    }

    /// The extended derivation on `A[y]`.
    pub fn extended(&self) -> Result<Derivation, SimplicityError> {
        let mut names: Vec<String> = self.delta.context().names().to_vec();
        names.push(self.new_var.clone());
        let ctx = VarContext::new(&names)?;
        let y = Poly::var(&ctx, names.len() - 1);
        let mut coeffs: Vec<Poly> = self.delta.extend_to(&ctx)?.coeffs().to_vec();
        let last = coeffs.len() - 1;
        coeffs[last] = &(&self.a.rename_into(&ctx)? * &y) + &self.b.rename_into(&ctx)?;
        Ok(Derivation::new(&ctx, coeffs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShamsuddinVerdict {
    /// `delta(h) = a h + b` has no solution with `deg h <= degree_bound`.
    NoWitnessUpToDegree { degree_bound: u32 },
    /// A solution: the extension is not simple. `degenerate` marks `b = 0`,
    /// where `h = 0` always works.
    Witness { h: Poly, degenerate: bool },
}

/// Solves `delta(h) - a h = b` over polynomials of degree at most `deg_h`.
pub fn shamsuddin_certify(inst: &ShamsuddinInstance, deg_h: u32) -> ShamsuddinVerdict {
    let ctx = inst.delta.context();
    let basis = monomial_basis(ctx, deg_h);
    let columns: Vec<Poly> = basis
        .iter()
        .map(|m| {
            let mono = Poly::term(ctx, m.clone(), ExactScalar::one());
            &inst.delta.apply(&mono).expect("shared context") - &(&inst.a * &mono)
        })
        .collect();
    let coords = Coordinates::new(columns.iter().chain(std::iter::once(&inst.b)));
    let vectors: Vec<_> = columns.iter().map(|p| coords.vector(p)).collect();
    let m = QMatrix::from_columns(coords.dim(), &vectors);
    match linalg::solve_linear(&m, &coords.vector(&inst.b)) {
        None => ShamsuddinVerdict::NoWitnessUpToDegree { degree_bound: deg_h },
        Some(sol) => {
            let h = Poly::from_terms(
                ctx,
                basis
                    .iter()
                    .zip(sol)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.clone(), c)),
            );
            ShamsuddinVerdict::Witness {
                h,
                degenerate: inst.b.is_zero(),
            }
        }
    }
}

/// Basis of `span(span_gens) ∩ d(k[x]_{<= deg_src})`. Empty means no nonzero
/// element of the span is an image of a polynomial of degree at most `deg_src`.
pub fn image_intersection_check(
    d: &Derivation,
    span_gens: &[Poly],
    deg_src: u32,
) -> Result<Vec<Poly>, SimplicityError> {
    if span_gens.iter().any(|p| p.context() != d.context()) {
        return Err(PolyError::ContextMismatch.into());
    }
    let image = image_basis(d, deg_src);
    Ok(poly::span_intersection(d.context(), &image, span_gens))
}

/// Data for extending `delta` on `k[u, v]` by `D(x_j) = a_j`.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub base: Derivation,
    pub images: Vec<Poly>,
    pub new_vars: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TowerStep {
    pub new_var: String,
    pub image: Poly,
    /// Shamsuddin check with `a = 0`, `b = a_j` over the ring built so far.
    pub verdict: ShamsuddinVerdict,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub derivation: Derivation,
    pub check_degree: u32,
    pub steps: Vec<TowerStep>,
    /// `span(I) ∩ Im(delta)` at the check degree.
    pub hypothesis_intersection: Vec<Poly>,
}

impl Tower {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis_intersection.is_empty()
    }

    pub fn all_steps_pass(&self) -> bool {
        self.steps
            .iter()
            .all(|s| matches!(s.verdict, ShamsuddinVerdict::NoWitnessUpToDegree { .. }))
    }
}

/// Builds `delta + sum a_j d/dx_j` and logs the bounded checks for every step.
/// A failed check is recorded, not raised: the degree bound may be too low.
pub fn build_tower(spec: &ExtensionSpec, check_deg: u32) -> Result<Tower, SimplicityError> {
    let base_ctx = spec.base.context();
    if spec.new_vars.len() != spec.images.len() {
        return Err(SimplicityError::NameCount {
            expected: spec.images.len(),
            found: spec.new_vars.len(),
        });
    }
    if spec.images.iter().any(|p| p.context() != base_ctx) {
        return Err(PolyError::ContextMismatch.into());
    }
    if poly::span_basis(base_ctx, &spec.images).len() != spec.images.len() {
        return Err(SimplicityError::DependentImages);
    }
    let mut names: Vec<String> = base_ctx.names().to_vec();
    names.extend(spec.new_vars.iter().cloned());
    let ctx = VarContext::new(&names)?;
    let mut coeffs = spec.base.extend_to(&ctx)?.coeffs().to_vec();
    let offset = base_ctx.len();
    for (j, a) in spec.images.iter().enumerate() {
        coeffs[offset + j] = a.rename_into(&ctx)?;
    }
    let derivation = Derivation::new(&ctx, coeffs)?;

    let mut steps = Vec::with_capacity(spec.images.len());
    for (j, a) in spec.images.iter().enumerate() {
        let keep: Vec<usize> = (0..offset + j).collect();
        let lower = derivation
            .restrict_to(&keep)
            .expect("tower coefficients only involve earlier variables");
        let b = a.rename_into(lower.context())?;
        let inst = ShamsuddinInstance::new(lower.clone(), Poly::zero(lower.context()), b, &spec.new_vars[j])?;
        steps.push(TowerStep {
            new_var: spec.new_vars[j].clone(),
            image: a.clone(),
            verdict: shamsuddin_certify(&inst, check_deg),
        });
    }
    let hypothesis_intersection = image_intersection_check(&spec.base, &spec.images, check_deg)?;
    Ok(Tower {
        derivation,
        check_degree: check_deg,
        steps,
        hypothesis_intersection,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScreenFailure {
    /// Every coefficient vanishes at this rational point.
    CommonZero(Vec<ExactScalar>),
    /// A nonconstant polynomial in the kernel.
    KernelElement(Poly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScreenVerdict {
    /// No obstruction found. Says nothing about simplicity.
    Passes { degree_bound: u32 },
    /// Disproves simplicity, with the certificate.
    Fails(ScreenFailure),
}

const SCREEN_GRID: [i64; 5] = [0, 1, -1, 2, -2];
const SCREEN_GRID_MAX_VARS: u32 = 6;

/// Cheap necessary conditions for simplicity: the coefficients must not share
/// a zero (searched on a small integer grid), and the kernel up to
/// `screen_deg` must consist of constants.
pub fn necessary_screen(d: &Derivation, screen_deg: u32) -> Result<ScreenVerdict, SimplicityError> {
    let n = d.nvars();
    let has_unit = d.coeffs().iter().any(|a| a.is_constant() && !a.is_zero());
    if !has_unit && n as u32 <= SCREEN_GRID_MAX_VARS {
        let total = SCREEN_GRID.len().pow(n as u32);
        for idx in 0..total {
            let mut k = idx;
            let point: Vec<ExactScalar> = (0..n)
                .map(|_| {
                    let v = SCREEN_GRID[k % SCREEN_GRID.len()];
                    k /= SCREEN_GRID.len();
                    linalg::scalar(v)
                })
                .collect();
            if d.coeffs().iter().all(|a| a.eval(&point).is_zero()) {
                return Ok(ScreenVerdict::Fails(ScreenFailure::CommonZero(point)));
            }
        }
    }
    let kernel = darboux_search_fixed_lambda(d, &Poly::zero(d.context()), screen_deg)?;
    if let Some(f) = kernel.into_iter().find(|f| !f.is_constant()) {
        return Ok(ScreenVerdict::Fails(ScreenFailure::KernelElement(f)));
    }
    Ok(ScreenVerdict::Passes {
        degree_bound: screen_deg,
    })
}

/// Indices `i` with `d(x_i) = 1`.
pub fn linear_coordinate_screen(d: &Derivation) -> Vec<usize> {
    let one = Poly::one(d.context());
    (0..d.nvars()).filter(|&i| d.coeff(i) == &one).collect()
}

#[derive(Clone, Debug)]
pub struct CentralizerReport {
    pub degree_bound: u32,
    pub basis: Vec<Derivation>,
    pub lnd_flags: Vec<LndWitness>,
    /// Dimension of the span of the basis elements certified locally nilpotent.
    pub lnd_span_dimension: usize,
    /// Echelon basis of that span, each element re-certified in `lnd_span_recertified`.
    pub lnd_span_basis: Vec<Derivation>,
    pub lnd_span_recertified: Vec<LndWitness>,
    /// Some element of `lnd_span_basis` failed re-certification.
    pub lnd_discrepancy: bool,
    pub contains_input: bool,
}

/// Solves `[d, Delta] = 0` over derivations whose coefficients have degree at
/// most `coeff_deg`.
pub fn centralizer(d: &Derivation, coeff_deg: u32, lnd_iter: usize) -> Result<CentralizerReport, SimplicityError> {
    let ctx = d.context();
    let n = d.nvars();
    let monos = monomial_basis(ctx, coeff_deg);
    let partials: Vec<Vec<Poly>> = (0..n)
        .map(|j| d.coeffs().iter().map(|a| a.partial(j)).collect())
        .collect();

    // Unknown (j, m) is the derivation m * d/dx_j; its bracket with d has
    // coefficient i equal to [i == j] d(m) - m * da_i/dx_j.
    let mut unknowns = Vec::with_capacity(n * monos.len());
    let mut columns = Vec::with_capacity(n * monos.len());
    for (j, da_dxj) in partials.iter().enumerate() {
        for m in &monos {
            let mono = Poly::term(ctx, m.clone(), ExactScalar::one());
            let dm = d.apply(&mono)?;
            let coeffs: Vec<Poly> = (0..n)
                .map(|i| {
                    let cross = da_dxj[i].mul_monomial(m);
                    if i == j {
                        &dm - &cross
                    } else {
                        -cross
                    }
                })
                .collect();
            columns.push(Derivation::new(ctx, coeffs)?);
            unknowns.push((j, m.clone()));
        }
    }
    let refs: Vec<&Derivation> = columns.iter().collect();
    let coords = DerivationCoordinates::new(&refs, n);
    let vectors: Vec<_> = columns.iter().map(|c| coords.vector(c)).collect();
    let matrix = QMatrix::from_columns(coords.dim(), &vectors);

    let basis: Vec<Derivation> = linalg::kernel_basis(&matrix)
        .into_iter()
        .map(|k| {
            let mut coeffs = vec![Poly::zero(ctx); n];
            for ((j, m), c) in unknowns.iter().zip(k) {
                if !c.is_zero() {
                    coeffs[*j] = &coeffs[*j] + &Poly::term(ctx, m.clone(), c);
                }
            }
            Derivation::new(ctx, coeffs).expect("coefficients built in context")
        })
        .collect();
    debug_assert!(basis.iter().all(|b| d.bracket(b).map(|c| c.is_zero()).unwrap_or(false)));

    let lnd_flags: Vec<LndWitness> = basis.iter().map(|b| lnd_check(b, lnd_iter)).collect();
    let certified: Vec<Derivation> = lnd_flags
        .iter()
        .filter(|w| w.is_certified())
        .map(|w| w.derivation.clone())
        .collect();
    let lnd_span_basis = derivation_span_basis(ctx, &certified);
    let lnd_span_recertified: Vec<LndWitness> = lnd_span_basis.iter().map(|b| lnd_check(b, lnd_iter)).collect();
    let lnd_discrepancy = lnd_span_recertified.iter().any(|w| !w.is_certified());
    let contains_input = derivation_span_coefficients(&basis, d).is_some();

    Ok(CentralizerReport {
        degree_bound: coeff_deg,
        lnd_span_dimension: lnd_span_basis.len(),
        basis,
        lnd_flags,
        lnd_span_basis,
        lnd_span_recertified,
        lnd_discrepancy,
        contains_input,
    })
}

/// True when `candidate` lies in the span of the report's basis.
pub fn centralizer_contains(report: &CentralizerReport, candidate: &Derivation) -> bool {
    derivation_span_coefficients(&report.basis, candidate).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, scalar};
    use std::sync::Arc;

    fn ring(names: &[&str]) -> Arc<VarContext> {
        VarContext::new(names).unwrap()
    }

    fn delta_uv() -> Derivation {
        let c = ring(&["u", "v"]);
        let uv = &Poly::var(&c, 0) * &Poly::var(&c, 1);
        Derivation::new(&c, vec![Poly::one(&c), &Poly::one(&c) + &uv]).unwrap()
    }

    fn jordan3() -> Derivation {
        let c = ring(&["x1", "x2", "x3"]);
        let x: Vec<Poly> = (0..3).map(|i| Poly::var(&c, i)).collect();
        Derivation::new(&c, vec![&Poly::one(&c) - &(&x[0] * &x[1]), x[0].pow(3), x[1].clone()]).unwrap()
    }

    fn du() -> Derivation {
        Derivation::partial(&ring(&["u"]), 0)
    }

    #[test]
    fn shamsuddin_examples() {
        let d = du();
        let c = d.context().clone();
        let inst = ShamsuddinInstance::new(d.clone(), Poly::var(&c, 0), Poly::one(&c), "v").unwrap();
        assert_eq!(
            shamsuddin_certify(&inst, 10),
            ShamsuddinVerdict::NoWitnessUpToDegree { degree_bound: 10 }
        );
        assert_eq!(inst.extended().unwrap().to_string(), "d/du + (u*v + 1)*d/dv");

        let inst = ShamsuddinInstance::new(d.clone(), Poly::zero(&c), Poly::one(&c), "v").unwrap();
        assert_eq!(
            shamsuddin_certify(&inst, 10),
            ShamsuddinVerdict::Witness {
                h: Poly::var(&c, 0),
                degenerate: false
            }
        );
        let inst = ShamsuddinInstance::new(d, Poly::zero(&c), Poly::zero(&c), "v").unwrap();
        assert_eq!(
            shamsuddin_certify(&inst, 3),
            ShamsuddinVerdict::Witness {
                h: Poly::zero(&c),
                degenerate: true
            }
        );
    }

    #[test]
    fn intersection_examples() {
        let d = delta_uv();
        let c = d.context().clone();
        let v = Poly::var(&c, 1);
        let powers: Vec<Poly> = (1..=5).map(|k| v.pow(k)).collect();
        assert!(image_intersection_check(&d, &powers, 6).unwrap().is_empty());
        assert_eq!(image_intersection_check(&d, &[Poly::one(&c)], 1).unwrap().len(), 1);
        let j = jordan3();
        assert!(image_intersection_check(&j, &[Poly::one(j.context())], 4)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn tower_examples() {
        let d = delta_uv();
        let c = d.context().clone();
        let v = Poly::var(&c, 1);
        let spec = ExtensionSpec {
            base: d.clone(),
            images: vec![v.clone(), v.pow(2), v.pow(3)],
            new_vars: vec!["x1".into(), "x2".into(), "x3".into()],
        };
        let t = build_tower(&spec, 4).unwrap();
        assert!(t.hypothesis_holds());
        assert!(t.all_steps_pass());
        assert_eq!(
            t.derivation.to_string(),
            "d/du + (u*v + 1)*d/dv + v*d/dx1 + v^2*d/dx2 + v^3*d/dx3"
        );

        let spec = ExtensionSpec {
            base: d.clone(),
            images: vec![Poly::one(&c)],
            new_vars: vec!["x1".into()],
        };
        let t = build_tower(&spec, 3).unwrap();
        assert!(!t.hypothesis_holds());
        assert!(!t.all_steps_pass());

        let t = build_tower(
            &ExtensionSpec {
                base: d.clone(),
                images: vec![],
                new_vars: vec![],
            },
            3,
        )
        .unwrap();
        assert_eq!(t.derivation, d);

        let dep = ExtensionSpec {
            base: d,
            images: vec![v.clone(), v.scalar_mul(&scalar(2))],
            new_vars: vec!["x1".into(), "x2".into()],
        };
        assert_eq!(build_tower(&dep, 2).unwrap_err(), SimplicityError::DependentImages);
    }

    #[test]
    fn screen_examples() {
        let cx = ring(&["x"]);
        let euler = Derivation::new(&cx, vec![Poly::var(&cx, 0)]).unwrap();
        assert_eq!(
            necessary_screen(&euler, 3).unwrap(),
            ScreenVerdict::Fails(ScreenFailure::CommonZero(vec![scalar(0)]))
        );
        assert_eq!(
            necessary_screen(&delta_uv(), 6).unwrap(),
            ScreenVerdict::Passes { degree_bound: 6 }
        );

        let c = ring(&["u", "v"]);
        let u = Poly::var(&c, 0);
        let v = Poly::var(&c, 1);
        let d = Derivation::new(&c, vec![Poly::from_i64(&c, 2), u.pow(2).scalar_mul(&scalar(3))]).unwrap();
        match necessary_screen(&d, 3).unwrap() {
            ScreenVerdict::Fails(ScreenFailure::KernelElement(f)) => {
                let expected = &v - &u.pow(3).scalar_mul(&ratio(1, 2));
                assert!(poly::span_coefficients(&[expected], &f).is_some());
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn linear_coordinate_examples() {
        assert_eq!(linear_coordinate_screen(&delta_uv()), vec![0]);
        assert!(linear_coordinate_screen(&jordan3()).is_empty());
        assert_eq!(
            linear_coordinate_screen(&Derivation::partial(&ring(&["x1", "x2"]), 0)),
            vec![0]
        );
    }

    #[test]
    fn centralizer_of_single_partial() {
        let c = ring(&["x"]);
        let dx = Derivation::partial(&c, 0);
        let r = centralizer(&dx, 0, 5).unwrap();
        assert_eq!(r.basis, vec![dx.clone()]);
        assert_eq!(r.lnd_span_dimension, 1);
        assert!(r.contains_input);
    }

    #[test]
    fn centralizer_of_jordan3() {
        let d = jordan3();
        let r = centralizer(&d, 2, 10).unwrap();
        assert_eq!(r.lnd_span_dimension, 1);
        assert_eq!(r.lnd_span_basis, vec![Derivation::partial(d.context(), 2)]);
        for b in &r.basis {
            assert!(d.bracket(b).unwrap().is_zero());
        }
    }
}
