//! Shared helpers for integration tests: seeded random generators and a
//! deliberately naive rational Gaussian elimination used as an oracle.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use simplederiv::{Automorphism, Derivation, Monomial, Poly, VarContext};
use std::collections::BTreeMap;
use std::sync::Arc;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn ring(names: &[&str]) -> Arc<VarContext> {
    VarContext::new(names).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank by textbook Gaussian elimination with division.
pub fn naive_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficient vectors of `polys` over the union of their supports.
pub fn coordinate_rows(polys: &[Poly]) -> Vec<Vec<Q>> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    polys
        .iter()
        .map(|p| {
            let mut row = vec![Q::zero(); index.len()];
            for (m, c) in p.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect()
}

pub fn poly_rank(polys: &[Poly]) -> usize {
    if polys.is_empty() {
        return 0;
    }
    naive_rank(&coordinate_rows(polys))
}

/// `dim(span A ∩ span B)` via `rank A + rank B - rank(A ∪ B)`.
pub fn intersection_dim(a: &[Poly], b: &[Poly]) -> usize {
    let both: Vec<Poly> = a.iter().chain(b).cloned().collect();
    poly_rank(a) + poly_rank(b) - poly_rank(&both)
}

/// All exponent vectors in `n` variables with total degree at most `d`.
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in exponent_vectors(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

pub fn monomial(ctx: &Arc<VarContext>, exps: &[u32]) -> Poly {
    Poly::term(ctx, Monomial::new(exps.to_vec()), Q::one())
}

pub fn random_rational(r: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    qr(r.gen_range(-num..=num), r.gen_range(1..=den))
}

pub fn random_nonzero_rational(r: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    loop {
        let x = random_rational(r, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random polynomial in the variables `vars`, at most `terms` terms, each of
/// total degree at most `deg`.
pub fn random_poly_in(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, vars: &[usize], terms: usize, deg: u32) -> Poly {
    let mut p = Poly::zero(ctx);
    for _ in 0..r.gen_range(0..=terms) {
        let mut exps = vec![0u32; ctx.len()];
        let mut budget = r.gen_range(0..=deg);
        while budget > 0 && !vars.is_empty() {
            exps[vars[r.gen_range(0..vars.len())]] += 1;
            budget -= 1;
        }
        p = &p + &Poly::term(ctx, Monomial::new(exps), random_rational(r, 5, 3));
    }
    p
}

pub fn random_poly(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, terms: usize, deg: u32) -> Poly {
    let vars: Vec<usize> = (0..ctx.len()).collect();
    random_poly_in(r, ctx, &vars, terms, deg)
}

pub fn random_derivation(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, terms: usize, deg: u32) -> Derivation {
    let coeffs = (0..ctx.len()).map(|_| random_poly(r, ctx, terms, deg)).collect();
    Derivation::new(ctx, coeffs).unwrap()
}

/// `x_i -> c_i x_i + p_i(x_{i+1}, ..)` with `c_i` a nonzero rational.
pub fn random_triangular(
    r: &mut ChaCha8Rng,
    ctx: &Arc<VarContext>,
    terms: usize,
    deg: u32,
    scale: bool,
) -> Automorphism {
    let n = ctx.len();
    let forward = (0..n)
        .map(|i| {
            let tail: Vec<usize> = (i + 1..n).collect();
            let c = if scale {
                random_nonzero_rational(r, 3, 2)
            } else {
                Q::one()
            };
            &Poly::var(ctx, i).scalar_mul(&c) + &random_poly_in(r, ctx, &tail, terms, deg)
        })
        .collect();
    Automorphism::from_triangular(forward).unwrap()
}
