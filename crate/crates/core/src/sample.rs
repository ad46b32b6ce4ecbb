//! Random instances for the verification suites.
//!
//! `t` is uniform on `[-2, 2]ᵐ`, complex coordinates are standard complex
//! Gaussians (`E|z|² = 1`), and central coordinates are uniform on `[-π, π]`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};

use nalgebra::DMatrix;

use crate::algebra::{Mono, MultiIndex, Poly, Vars};
use crate::cplx::{c, r, C64};
use crate::gaussian::{gaussian_integral, GaussianIntegralSpec, GaussianKernelOp};
use crate::group::{Covector, GroupElement, LieElement, WeightSystem};

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid");
    c(normal.sample(rng), normal.sample(rng))
}

pub fn complex_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    Uniform::new(lo, hi).expect("valid range").sample(rng)
}

pub fn t_vec<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| uniform(rng, -2.0, 2.0)).collect()
}

/// Draws `t` until `accept(angles)` holds.
pub fn t_vec_where<R: Rng + ?Sized>(
    rng: &mut R,
    ws: &WeightSystem,
    accept: impl Fn(&[f64]) -> bool,
) -> Vec<f64> {
    loop {
        let t = t_vec(rng, ws.m);
        if accept(&ws.angles(&t)) {
            return t;
        }
    }
}

pub fn group_element<R: Rng + ?Sized>(rng: &mut R, ws: &WeightSystem) -> GroupElement {
    GroupElement::new(t_vec(rng, ws.m), complex_vec(rng, ws.n), uniform(rng, -PI, PI))
}

/// A group element whose angles satisfy `accept`.
pub fn group_element_where<R: Rng + ?Sized>(
    rng: &mut R,
    ws: &WeightSystem,
    accept: impl Fn(&[f64]) -> bool,
) -> GroupElement {
    let t = t_vec_where(rng, ws, accept);
    GroupElement::new(t, complex_vec(rng, ws.n), uniform(rng, -PI, PI))
}

pub fn lie_element<R: Rng + ?Sized>(rng: &mut R, ws: &WeightSystem) -> LieElement {
    LieElement::new(t_vec(rng, ws.m), complex_vec(rng, ws.n), uniform(rng, -PI, PI))
}

pub fn covector<R: Rng + ?Sized>(rng: &mut R, ws: &WeightSystem) -> Covector {
    let normal = Normal::new(0.0, 1.0).expect("valid");
    Covector {
        s: (0..ws.m).map(|_| normal.sample(rng)).collect(),
        v: complex_vec(rng, ws.n),
        d: uniform(rng, 0.2, 3.0),
    }
}

/// Random weight matrix with entries uniform on `[-1, 1]`.
pub fn weights<R: Rng + ?Sized>(rng: &mut R, lambda: f64, m: usize, n: usize, beta: Vec<f64>) -> WeightSystem {
    let alpha = (0..m)
        .map(|_| (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect())
        .collect();
    WeightSystem::new(lambda, alpha, beta).expect("valid weights")
}

/// Distance from `a` to the set `offset + period·ℤ`.
pub fn dist_to_lattice(a: f64, offset: f64, period: f64) -> f64 {
    let x = (a - offset).rem_euclid(period);
    x.min(period - x)
}

/// Trace-class Gaussian kernel `c·exp(aᵀz + bᵀw̄ + zᵀQw̄)` with `|Q| ≲ 0.15λ`.
pub fn gaussian_kernel<R: Rng + ?Sized>(rng: &mut R, n: usize, lambda: f64) -> GaussianKernelOp {
    let q = DMatrix::from_fn(n, n, |_, _| complex_normal(rng) * (0.15 * lambda));
    GaussianKernelOp::new(complex_normal(rng), complex_vec(rng, n), complex_vec(rng, n), q, lambda)
        .expect("consistent dimensions")
}

/// Gaussian kernel with `|a_k|, |b_k| ≤ 0.5√λ` and `‖Q‖ ≤ 0.1λ`, so truncated
/// Fock matrices converge quickly.
pub fn tame_gaussian_kernel<R: Rng + ?Sized>(rng: &mut R, n: usize, lambda: f64) -> GaussianKernelOp {
    let disk = |rng: &mut R, radius: f64| {
        let (rho, theta) = (radius * uniform(rng, 0.0, 1.0).sqrt(), uniform(rng, 0.0, std::f64::consts::TAU));
        C64::from_polar(rho, theta)
    };
    let q = DMatrix::from_fn(n, n, |_, _| disk(rng, 0.1 * lambda / n as f64));
    let a = (0..n).map(|_| disk(rng, 0.5 * lambda.sqrt())).collect();
    let b = (0..n).map(|_| disk(rng, 0.5 * lambda.sqrt())).collect();
    GaussianKernelOp::new(complex_normal(rng), a, b, q, lambda).expect("consistent dimensions")
}

/// Integrable lemma input: `B` close to the identity, `A`, `D` small complex
/// symmetric, imaginary parts moderate enough for a real-fitted grid.
pub fn integrable_spec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GaussianIntegralSpec {
    loop {
        let small = |rng: &mut R, s: f64| {
            let m = DMatrix::from_fn(n, n, |_, _| complex_normal(rng) * s);
            (&m + m.transpose()) * r(0.5)
        };
        let a = small(rng, 0.2);
        let d = small(rng, 0.2);
        let b = DMatrix::from_fn(n, n, |i, j| {
            let base = if i == j { uniform(rng, 0.6, 1.4) } else { 0.0 };
            complex_normal(rng) * 0.15 + base
        });
        let spec = GaussianIntegralSpec {
            a,
            b,
            d,
            u: complex_vec(rng, n),
            v: complex_vec(rng, n),
        };
        if gaussian_integral(&spec).is_ok() {
            return spec;
        }
    }
}

/// Random polynomial with `terms` monomials of total degree at most `degree`
/// and standard complex Gaussian coefficients.
pub fn poly<V: Vars, R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32, terms: usize) -> Poly<V> {
    let monos: Vec<Mono> = MultiIndex::all_up_to(2 * n, degree)
        .into_iter()
        .map(|e| Mono::new(MultiIndex::new(e.entries()[..n].to_vec()), MultiIndex::new(e.entries()[n..].to_vec())))
        .collect();
    let picked = (0..terms).map(|_| {
        let k = rng.random_range(0..monos.len());
        (monos[k].clone(), complex_normal(rng))
    });
    Poly::from_terms(n, picked).expect("consistent dimensions")
}
