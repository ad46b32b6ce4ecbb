//! The generic representation `π = ρ_λ ⋊ σ` on Fock space and its
//! Schrödinger model, as Gaussian kernels.
//!
//! `π(t, z0, c0) = ρ_λ(z0, c0) σ(t)`, with
//! `(ρ_λ(z0,c0) f)(z) = exp(iλc0 + (λ/2)z̄0 z − (λ/4)|z0|²) f(z − z0)` and
//! `(σ(t) f)(z) = χ(t) f(t⁻¹·z)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{DiffOp, MultiIndex};
use crate::cplx::{conj, diag, dot, norm_sqr, r, scaled_diff, serde_c64, serde_cmat, serde_cvec, to_dvec, C64, I};
use crate::fock::{hermite_polypart, integrate_cn_gaussian, integrate_cn_gaussian_contour, integrate_rn_gaussian, integrate_rn_gaussian_contour};
use crate::gaussian::{real_gaussian_prepare, sqrt_det, GaussianKernelOp};
use crate::group::{GroupElement, LieElement, WeightSystem};
use crate::{Error, Result};

/// Distance to the forbidden angle sets below which inputs are rejected.
pub const DOMAIN_EPS: f64 = 1e-8;

/// Kernel of `ρ_λ(z0, c0)`.
pub fn rho_kernel(z0: &[C64], c0: f64, lambda: f64) -> GaussianKernelOp {
    let n = z0.len();
    GaussianKernelOp {
        c: (I * (lambda * c0) - r(lambda * norm_sqr(z0) / 4.0)).exp(),
        a: z0.iter().map(|z| z.conj() * (lambda / 2.0)).collect(),
        b: z0.iter().map(|z| -z * (lambda / 2.0)).collect(),
        q: DMatrix::identity(n, n) * r(lambda / 2.0),
        lambda,
    }
}

/// Kernel of `σ(t)`: `χ(t) exp((λ/2) zᵀA(−t)w̄)`.
pub fn sigma_kernel(t: &[f64], ws: &WeightSystem) -> GaussianKernelOp {
    let n = ws.n;
    let back: Vec<C64> = ws.torus(t).iter().map(|u| u.conj()).collect();
    GaussianKernelOp {
        c: ws.chi(t),
        a: vec![r(0.0); n],
        b: vec![r(0.0); n],
        q: diag(&back) * r(ws.lambda / 2.0),
        lambda: ws.lambda,
    }
}

/// Kernel of `π(g)`, written out directly.
pub fn pi_kernel(g: &GroupElement, ws: &WeightSystem) -> GaussianKernelOp {
    let lambda = ws.lambda;
    let back: Vec<C64> = ws.torus(&g.t).iter().map(|u| u.conj()).collect();
    let rotated: Vec<C64> = back.iter().zip(&g.z0).map(|(u, z)| u * z).collect();
    GaussianKernelOp {
        c: ws.chi(&g.t) * (I * (lambda * g.c0) - r(lambda * norm_sqr(&g.z0) / 4.0)).exp(),
        a: g.z0.iter().map(|z| z.conj() * (lambda / 2.0)).collect(),
        b: rotated.iter().map(|z| -z * (lambda / 2.0)).collect(),
        q: diag(&back) * r(lambda / 2.0),
        lambda,
    }
}

/// `π(g)` assembled as the composition `ρ_λ(z0,c0) ∘ σ(t)`.
pub fn pi_kernel_composed(g: &GroupElement, ws: &WeightSystem) -> Result<GaussianKernelOp> {
    rho_kernel(&g.z0, g.c0, ws.lambda).compose(&sigma_kernel(&g.t, ws))
}

/// `dπ(X) = i⟨β,t⟩ + iλc + (λ/2)Σ ū_k z_k − Σ (u_k + iα_k(t) z_k) ∂_k`.
pub fn dpi_symbolic(x: &LieElement, ws: &WeightSystem) -> DiffOp {
    let n = ws.n;
    let alpha = ws.angles(&x.t);
    let zero = MultiIndex::zero(n);
    let constant = I * (ws.beta_dot(&x.t) + ws.lambda * x.c);
    let mut terms = vec![(crate::algebra::Mono::new(zero.clone(), zero.clone()), constant)];
    for k in 0..n {
        let e = MultiIndex::unit(n, k);
        terms.push((crate::algebra::Mono::new(e.clone(), zero.clone()), x.u[k].conj() * (ws.lambda / 2.0)));
        terms.push((crate::algebra::Mono::new(zero.clone(), e.clone()), -x.u[k]));
        terms.push((crate::algebra::Mono::new(e.clone(), e), -I * alpha[k]));
    }
    DiffOp::from_terms(n, terms).expect("terms have dimension n")
}

/// Kernel of the quantizer `Ω₀(z0) = 2ⁿ ρ_λ(z0) R₀ ρ_λ(z0)⁻¹`, `R₀f(z) = f(−z)`.
pub fn omega0_kernel(z0: &[C64], lambda: f64) -> GaussianKernelOp {
    let n = z0.len();
    GaussianKernelOp {
        c: r(2f64.powi(n as i32) * (-lambda * norm_sqr(z0)).exp()),
        a: z0.iter().map(|z| z.conj() * lambda).collect(),
        b: z0.iter().map(|z| z * lambda).collect(),
        q: DMatrix::identity(n, n) * r(-lambda / 2.0),
        lambda,
    }
}

/// `log B(z, x)` for `B(z,x) = (λ/π)^{n/4} exp(−(λ/4)z² + λzx − (λ/2)x²)`.
pub fn bargmann_log_kernel(z: &[C64], x: &[C64], lambda: f64) -> C64 {
    let n = z.len() as f64;
    r(n / 4.0 * (lambda / PI).ln()) - dot(z, z) * (lambda / 4.0) + dot(z, x) * lambda
        - dot(x, x) * (lambda / 2.0)
}

pub fn bargmann_kernel(z: &[C64], x: &[f64], lambda: f64) -> C64 {
    let xc: Vec<C64> = x.iter().map(|&v| r(v)).collect();
    bargmann_log_kernel(z, &xc, lambda).exp()
}

/// `(ℬφ)(z) = ∫ B(z,x) φ(x) dx` by quadrature. The grid is fitted to
/// `B(z,·) e^{−λ|x|²/2}`, so `φ` should be of the form (moderate) × `e^{−λ|x|²/2}`.
pub fn bargmann_apply<F>(phi: F, z: &[C64], lambda: f64, order: usize) -> Result<C64>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    let n = z.len();
    integrate_rn_gaussian(
        order,
        n,
        |x| {
            let xc: Vec<C64> = x.iter().map(|&v| r(v)).collect();
            bargmann_log_kernel(z, &xc, lambda) - r(lambda * x.iter().map(|v| v * v).sum::<f64>() / 2.0)
        },
        |x| phi(x) * (lambda * x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp(),
    )
}

/// `(ℬ⁻¹f)(x) = ∫ conj(B(z,x)) f(z) e^{−λ|z|²/2} dμ_λ(z)` by quadrature, for `f`
/// of moderate growth.
pub fn bargmann_inverse<F>(f: F, x: &[f64], lambda: f64, order: usize) -> Result<C64>
where
    F: Fn(&[C64]) -> C64 + Sync,
{
    let n = x.len();
    let xc: Vec<C64> = x.iter().map(|&v| r(v)).collect();
    let measure = (n as f64) * (lambda / (2.0 * PI)).ln();
    integrate_cn_gaussian(
        order,
        n,
        |z| bargmann_log_kernel(&conj(z), &xc, lambda) - r(lambda * norm_sqr(z) / 2.0 + 0.0) + r(measure),
        |z| f(z),
    )
}

/// `(ρ'_λ(h)φ)(x) = e^{iλ(c − b·x + a·b/2)} φ(x − a)` for `h = (a + ib, c)`.
pub fn rho_prime_apply<F>(z0: &[C64], c0: f64, phi: F, x: &[f64], lambda: f64) -> C64
where
    F: Fn(&[f64]) -> C64,
{
    let bx: f64 = z0.iter().zip(x).map(|(z, x)| z.im * x).sum();
    let ab: f64 = z0.iter().map(|z| z.re * z.im).sum();
    let shifted: Vec<f64> = z0.iter().zip(x).map(|(z, x)| x - z.re).collect();
    (I * (lambda * (c0 - bx + ab / 2.0))).exp() * phi(&shifted)
}

/// `(Ω₁(a,b)φ)(x) = 2ⁿ exp(2iλ b·(a − x)) φ(2a − x)` for `z0 = a + ib`.
pub fn omega1_apply<F>(z0: &[C64], phi: F, x: &[f64], lambda: f64) -> C64
where
    F: Fn(&[f64]) -> C64,
{
    let n = z0.len();
    let phase: f64 = z0.iter().zip(x).map(|(z, x)| z.im * (z.re - x)).sum();
    let reflected: Vec<f64> = z0.iter().zip(x).map(|(z, x)| 2.0 * z.re - x).collect();
    (I * (2.0 * lambda * phase)).exp() * 2f64.powi(n as i32) * phi(&reflected)
}

/// Kernel of `ℬ⁻¹Aℬ` at `(x, y)` by contour-fitted quadrature over `ℂⁿ`:
/// `∫ conj(B(z,x)) (A B(·,y))(z) e^{−λ|z|²/2} dμ_λ(z)`.
///
/// Requires the integrand to decay, which fails for operators whose
/// Schrödinger kernel is singular (pure translations, `α_k(t) ∈ πℤ`).
/// Kernels with diagonal `Q` are integrated one coordinate at a time.
pub fn conjugated_kernel_quadrature(k: &GaussianKernelOp, x: &[f64], y: &[f64], order: usize) -> Result<C64> {
    let n = k.dim();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || k.q[(i, j)] == r(0.0)));
    if diagonal && n > 1 {
        let mut total = k.c;
        for i in 0..n {
            let ki = GaussianKernelOp {
                c: r(1.0),
                a: vec![k.a[i]],
                b: vec![k.b[i]],
                q: DMatrix::from_element(1, 1, k.q[(i, i)]),
                lambda: k.lambda,
            };
            total *= conjugated_kernel_quadrature(&ki, &x[i..=i], &y[i..=i], order)?;
        }
        return Ok(total);
    }
    let lambda = k.lambda;
    let xc: Vec<C64> = x.iter().map(|&v| r(v)).collect();
    let yc: Vec<C64> = y.iter().map(|&v| r(v)).collect();
    let measure = (n as f64) * (lambda / (2.0 * PI)).ln();
    let log_c = k.c.ln();
    integrate_cn_gaussian_contour(
        order,
        n,
        |z, zb| {
            let zeta = k.substitution(z);
            bargmann_log_kernel(zb, &xc, lambda)
                + log_c
                + dot(&k.a, z)
                + bargmann_log_kernel(&zeta, &yc, lambda)
                - dot(z, zb) * (lambda / 2.0)
                + r(measure)
        },
        |_, _| r(1.0),
    )
}

/// Integral operator on `L²(ℝⁿ)` with kernel
/// `K(x,y) = c·exp(xᵀPx + yᵀRy + xᵀSy + ℓ_xᵀx + ℓ_yᵀy)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerGaussianKernel {
    #[serde(with = "serde_c64")]
    pub c: C64,
    #[serde(rename = "P", with = "serde_cmat")]
    pub p: DMatrix<C64>,
    #[serde(rename = "R", with = "serde_cmat")]
    pub r: DMatrix<C64>,
    #[serde(rename = "S", with = "serde_cmat")]
    pub s: DMatrix<C64>,
    #[serde(with = "serde_cvec")]
    pub lx: Vec<C64>,
    #[serde(with = "serde_cvec")]
    pub ly: Vec<C64>,
}

impl SchrodingerGaussianKernel {
    pub fn dim(&self) -> usize {
        self.lx.len()
    }

    pub fn log_evaluate(&self, x: &[f64], y: &[f64]) -> C64 {
        let cx: Vec<C64> = x.iter().map(|&v| r(v)).collect();
        let cy: Vec<C64> = y.iter().map(|&v| r(v)).collect();
        self.log_evaluate_complex(&cx, &cy)
    }

    /// `log K` continued analytically to complex arguments.
    pub fn log_evaluate_complex(&self, x: &[C64], y: &[C64]) -> C64 {
        let xv = to_dvec(x);
        let yv = to_dvec(y);
        self.c.ln()
            + (xv.transpose() * &self.p * &xv)[0]
            + (yv.transpose() * &self.r * &yv)[0]
            + (xv.transpose() * &self.s * &yv)[0]
            + (to_dvec(&self.lx).transpose() * &xv)[0]
            + (to_dvec(&self.ly).transpose() * &yv)[0]
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> C64 {
        self.log_evaluate(x, y).exp()
    }

    /// Kernel of `self ∘ other`: `∫ K₁(x,u) K₂(u,y) du`, oscillatory limits included.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "Schrödinger kernels of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let h = -(&self.r + &other.p);
        let (prefactor, hinv) = real_gaussian_prepare(&h)?;
        let s1 = &self.s;
        let s2 = &other.s;
        // J = S₁ᵀx + S₂y + m, m = ℓ_y¹ + ℓ_x².
        let m = to_dvec(&self.ly) + to_dvec(&other.lx);
        let p = &self.p + s1 * &hinv * s1.transpose() * r(0.25);
        let rr = &other.r + s2.transpose() * &hinv * s2 * r(0.25);
        let s = s1 * &hinv * s2 * r(0.5);
        let lx = to_dvec(&self.lx) + s1 * &hinv * &m * r(0.5);
        let ly = to_dvec(&other.ly) + s2.transpose() * &hinv * &m * r(0.5);
        let cnst = (m.transpose() * &hinv * &m)[0] * 0.25;
        Ok(SchrodingerGaussianKernel {
            c: self.c * other.c * prefactor * cnst.exp(),
            p: symmetrize(&p),
            r: symmetrize(&rr),
            s,
            lx: lx.iter().copied().collect(),
            ly: ly.iter().copied().collect(),
        })
    }

    /// `K*(x,y) = conj(K(y,x))`.
    pub fn adjoint(&self) -> Self {
        SchrodingerGaussianKernel {
            c: self.c.conj(),
            p: self.r.map(|v| v.conj()),
            r: self.p.map(|v| v.conj()),
            s: self.s.adjoint(),
            lx: conj(&self.ly),
            ly: conj(&self.lx),
        }
    }

    /// `∫ K(x,y) h_p(y) dy` by quadrature, `h_p` the Hermite function matched to `λ`.
    pub fn apply_hermite(&self, p: &MultiIndex, lambda: f64, x: &[f64], order: usize) -> Result<C64> {
        let cx: Vec<C64> = x.iter().map(|&v| r(v)).collect();
        integrate_rn_gaussian_contour(
            order,
            self.dim(),
            |y| self.log_evaluate_complex(&cx, y) - dot(y, y) * (lambda / 2.0),
            |y| hermite_polypart(p, lambda, y),
        )
    }

    /// Largest scaled parameter difference.
    pub fn param_distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let mut d = scaled_diff(self.c, other.c);
        let mats = [(&self.p, &other.p), (&self.r, &other.r), (&self.s, &other.s)];
        for (a, b) in mats {
            for (x, y) in a.iter().zip(b.iter()) {
                d = d.max(scaled_diff(*x, *y));
            }
        }
        for (x, y) in self.lx.iter().zip(&other.lx).chain(self.ly.iter().zip(&other.ly)) {
            d = d.max(scaled_diff(*x, *y));
        }
        d
    }
}

fn symmetrize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.transpose()) * r(0.5)
}

/// Rejects `t` with some `α_k(t)` within [`DOMAIN_EPS`] of `offset + period·ℤ`.
pub fn check_angles(ws: &WeightSystem, t: &[f64], offset: f64, period: f64, label: &str) -> Result<()> {
    for (k, a) in ws.angles(t).into_iter().enumerate() {
        let d = crate::sample::dist_to_lattice(a, offset, period);
        if d <= DOMAIN_EPS {
            return Err(Error::Domain(format!(
                "alpha_{}(t) = {a} is within {d:e} of {label}",
                k + 1
            )));
        }
    }
    Ok(())
}

/// Kernel `b_t` of `σ'(t) = ℬ⁻¹σ(t)ℬ`, determinant form:
/// `(λ/π)^{n/2} χ(t) Det(I − A²)^{−1/2} e^{(λ/2)(x²+y²)} exp(λ(yMy − 2xAMy + xMx))`,
/// `A = A(−t)`, `M = (A² − I)⁻¹`. The square root is the principal root of the full determinant.
pub fn mehler_kernel(t: &[f64], ws: &WeightSystem) -> Result<SchrodingerGaussianKernel> {
    check_angles(ws, t, 0.0, PI, "pi Z")?;
    let n = ws.n;
    let lambda = ws.lambda;
    let a: Vec<C64> = ws.torus(t).iter().map(|u| u.conj()).collect();
    let amat = diag(&a);
    let id = DMatrix::<C64>::identity(n, n);
    let a2 = &amat * &amat;
    let m = (&a2 - &id).try_inverse().ok_or(Error::Domain("A(-t)^2 - I is singular".into()))?;
    let quad = &id * r(lambda / 2.0) + &m * r(lambda);
    let root = (&id - &a2).determinant().sqrt();
    Ok(SchrodingerGaussianKernel {
        c: r((lambda / PI).powf(n as f64 / 2.0)) * ws.chi(t) / root,
        p: quad.clone(),
        r: quad,
        s: &amat * &m * r(-2.0 * lambda),
        lx: vec![r(0.0); n],
        ly: vec![r(0.0); n],
    })
}

/// Factored form `(λ/π)^{n/2} χ Π(1 − e^{−2iα_k})^{−1/2}
/// exp((iλ/2)Σ cot α_k (x_k² + y_k²) − iλ Σ x_k y_k / sin α_k)`, one principal root per factor.
pub fn mehler_factored(t: &[f64], x: &[f64], y: &[f64], ws: &WeightSystem) -> Result<C64> {
    check_angles(ws, t, 0.0, PI, "pi Z")?;
    let lambda = ws.lambda;
    let mut v = r((lambda / PI).powf(ws.n as f64 / 2.0)) * ws.chi(t);
    for (k, alpha) in ws.angles(t).into_iter().enumerate() {
        let root = (r(1.0) - (-I * (2.0 * alpha)).exp()).sqrt();
        let phase = I * (lambda / 2.0 * (x[k] * x[k] + y[k] * y[k]) / alpha.tan() - lambda * x[k] * y[k] / alpha.sin());
        v *= phase.exp() / root;
    }
    Ok(v)
}

/// Both square roots of `Det(I − A(−t)²)`: full-determinant principal root and product
/// of per-factor principal roots. They can differ by a sign.
pub fn mehler_roots(t: &[f64], ws: &WeightSystem) -> (C64, C64) {
    let a: Vec<C64> = ws.torus(t).iter().map(|u| u.conj()).collect();
    let full = a.iter().map(|u| r(1.0) - u * u).product::<C64>().sqrt();
    let factored = a.iter().map(|u| (r(1.0) - u * u).sqrt()).product();
    (full, factored)
}

/// Kernel of `π'(g) = ℬ⁻¹π(g)ℬ`: `e^{iλ(c − b·x + a·b/2)} b_t(x − a, y)` for `g = (t, a + ib, c)`.
pub fn pi_prime_kernel(g: &GroupElement, ws: &WeightSystem) -> Result<SchrodingerGaussianKernel> {
    let base = mehler_kernel(&g.t, ws)?;
    let lambda = ws.lambda;
    let av = DVector::from_iterator(ws.n, g.z0.iter().map(|z| r(z.re)));
    let ab: f64 = g.z0.iter().map(|z| z.re * z.im).sum();
    let shift = (av.transpose() * &base.p * &av)[0];
    let lx = &base.p * &av * r(-2.0) - DVector::from_iterator(ws.n, g.z0.iter().map(|z| I * (lambda * z.im)));
    let ly = -(base.s.transpose() * &av);
    Ok(SchrodingerGaussianKernel {
        c: base.c * shift.exp() * (I * (lambda * (g.c0 + ab / 2.0))).exp(),
        lx: lx.iter().copied().collect(),
        ly: ly.iter().copied().collect(),
        ..base
    })
}

/// Canonical and principal roots used by a Fock-side lemma, exposed for reports.
pub fn det_roots(m: &DMatrix<C64>) -> (C64, C64) {
    sqrt_det(m)
}
