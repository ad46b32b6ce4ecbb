//! Closed-form Gaussian integrals and the algebra of Gaussian-kernel operators.
//!
//! The integral engine evaluates
//!
//! ```text
//! ∫_{ℂⁿ} exp(−(wᵀAw + w̄ᵀDw̄ + 2w̄ᵀBw)) exp(uᵀw + vᵀw̄) dm(w)
//!     = πⁿ (det N)^{-1/2} exp(¼ (u;v)ᵀ M⁻¹ (u;v)),
//! ```
//!
//! with `M = [[A, Bᵀ], [B, D]]`, `N = UᵀMU`, `U = [[I, iI], [I, −iI]]`.
//! `(det N)^{1/2}` is taken as the product of principal square roots of the
//! eigenvalues of `N`. Those eigenvalues lie in the open right half-plane
//! whenever `Re N` is positive definite, so this is the analytic continuation
//! from the real positive-definite case. The principal root of the full
//! determinant is also computed and any disagreement is reported.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::cplx::{r, scaled_diff, serde_c64, serde_cmat, serde_cvec, to_dvec, C64, I};
use crate::{Error, Result};

/// Smallest admissible eigenvalue of `Re N`.
pub const PD_THRESHOLD: f64 = 1e-12;
/// Largest admissible condition estimate of `M`.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianIntegralSpec {
    #[serde(rename = "A", with = "serde_cmat")]
    pub a: DMatrix<C64>,
    #[serde(rename = "B", with = "serde_cmat")]
    pub b: DMatrix<C64>,
    #[serde(rename = "D", with = "serde_cmat")]
    pub d: DMatrix<C64>,
    #[serde(with = "serde_cvec")]
    pub u: Vec<C64>,
    #[serde(with = "serde_cvec")]
    pub v: Vec<C64>,
}

impl GaussianIntegralSpec {
    pub fn dim(&self) -> usize {
        self.b.nrows()
    }

    /// The integrand `exp(−(wᵀAw + w̄ᵀDw̄ + 2w̄ᵀBw) + uᵀw + vᵀw̄)`.
    pub fn integrand(&self, w: &[C64]) -> C64 {
        self.exponent(w).exp()
    }

    /// Logarithm of [`Self::integrand`].
    pub fn exponent(&self, w: &[C64]) -> C64 {
        let n = self.dim();
        let mut e = r(0.0);
        for i in 0..n {
            let wbi = w[i].conj();
            e += self.u[i] * w[i] + self.v[i] * wbi;
            for j in 0..n {
                let wbj = w[j].conj();
                e -= self.a[(i, j)] * w[i] * w[j] + self.d[(i, j)] * wbi * wbj + self.b[(i, j)] * wbi * w[j] * 2.0;
            }
        }
        e
    }

    /// `M = [[A, Bᵀ], [B, D]]`.
    pub fn m_matrix(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a);
        m.view_mut((0, n), (n, n)).copy_from(&self.b.transpose());
        m.view_mut((n, 0), (n, n)).copy_from(&self.b);
        m.view_mut((n, n), (n, n)).copy_from(&self.d);
        m
    }

    /// `N = UᵀMU`, the matrix of the exponent in real coordinates `(x; y)`.
    pub fn n_matrix(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut u = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            u[(k, k)] = r(1.0);
            u[(k, n + k)] = I;
            u[(n + k, k)] = r(1.0);
            u[(n + k, n + k)] = -I;
        }
        u.transpose() * self.m_matrix() * u
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let square = |m: &DMatrix<C64>| m.nrows() == n && m.ncols() == n;
        if !(square(&self.a) && square(&self.b) && square(&self.d)) || self.u.len() != n || self.v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "Gaussian integral blocks must all have dimension {n}"
            )));
        }
        let sym = |m: &DMatrix<C64>| (m - m.transpose()).iter().all(|x| x.norm() <= 1e-14 * (1.0 + m.norm()));
        if !sym(&self.a) || !sym(&self.d) {
            return Err(Error::DimensionMismatch("A and D must be symmetric".into()));
        }
        Ok(())
    }
}

/// Full output of the integral engine.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaValue {
    #[serde(with = "serde_c64")]
    pub value: C64,
    /// Canonical `(det N)^{1/2}` (eigenvalue product).
    #[serde(with = "serde_c64")]
    pub sqrt_det: C64,
    /// Principal root of the full determinant.
    #[serde(with = "serde_c64")]
    pub principal_sqrt_det: C64,
    pub min_re_eigenvalue: f64,
}

impl LemmaValue {
    /// Whether the principal root of `det N` agrees with the canonical root.
    pub fn branch_agrees(&self) -> bool {
        scaled_diff(self.sqrt_det, self.principal_sqrt_det) < 1e-8
    }
}

/// Smallest eigenvalue of the real symmetric part of a complex symmetric matrix.
pub(crate) fn min_eig_real_part(n: &DMatrix<C64>) -> f64 {
    let re = n.map(|x| x.re);
    let sym = (&re + re.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

/// Canonical and principal square roots of `det N`.
pub(crate) fn sqrt_det(n: &DMatrix<C64>) -> (C64, C64) {
    let eig = n
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let canonical = eig.iter().map(|e| e.sqrt()).product();
    let principal = n.determinant().sqrt();
    (canonical, principal)
}

pub(crate) fn condition_estimate(m: &DMatrix<C64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Prepared quadratic part of the lemma: everything that does not depend on `u, v`.
pub(crate) struct PreparedLemma {
    pub minv: DMatrix<C64>,
    pub sqrt_det: C64,
    pub principal_sqrt_det: C64,
    pub min_re_eigenvalue: f64,
    n: usize,
}

impl PreparedLemma {
    pub fn new(spec_quadratic: &GaussianIntegralSpec) -> Result<Self> {
        let nmat = spec_quadratic.n_matrix();
        let min_re = min_eig_real_part(&nmat);
        if min_re <= PD_THRESHOLD {
            return Err(Error::NotIntegrable { min_eigenvalue: min_re });
        }
        let m = spec_quadratic.m_matrix();
        let condition = condition_estimate(&m);
        if condition > CONDITION_LIMIT {
            return Err(Error::SingularM { condition });
        }
        let minv = m.try_inverse().ok_or(Error::SingularM {
            condition: f64::INFINITY,
        })?;
        let (sqrt_det, principal_sqrt_det) = sqrt_det(&nmat);
        Ok(PreparedLemma {
            minv,
            sqrt_det,
            principal_sqrt_det,
            min_re_eigenvalue: min_re,
            n: spec_quadratic.dim(),
        })
    }

    /// `πⁿ (det N)^{-1/2}`.
    pub fn prefactor(&self) -> C64 {
        r(std::f64::consts::PI.powi(self.n as i32)) / self.sqrt_det
    }

    /// `¼ (u;v)ᵀ M⁻¹ (u;v)`.
    pub fn exponent(&self, u: &[C64], v: &[C64]) -> C64 {
        let uv = DVector::from_iterator(2 * self.n, u.iter().chain(v).copied());
        (uv.transpose() * &self.minv * &uv)[0] * 0.25
    }

    /// Top-right block of `M⁻¹`, equal to `B⁻¹` when `A = D = 0`.
    pub fn minv_uv_block(&self) -> DMatrix<C64> {
        self.minv.view((0, self.n), (self.n, self.n)).into_owned()
    }
}

/// Closed-form value of the Gaussian integral.
pub fn gaussian_integral(spec: &GaussianIntegralSpec) -> Result<C64> {
    gaussian_integral_detailed(spec).map(|v| v.value)
}

pub fn gaussian_integral_detailed(spec: &GaussianIntegralSpec) -> Result<LemmaValue> {
    spec.validate()?;
    let prep = PreparedLemma::new(spec)?;
    let value = prep.prefactor() * prep.exponent(&spec.u, &spec.v).exp();
    Ok(LemmaValue {
        value,
        sqrt_det: prep.sqrt_det,
        principal_sqrt_det: prep.principal_sqrt_det,
        min_re_eigenvalue: prep.min_re_eigenvalue,
    })
}

/// `∫_{ℝⁿ} exp(−xᵀHx + Jᵀx) dx = π^{n/2} (det H)^{-1/2} exp(¼ JᵀH⁻¹J)` for
/// complex symmetric `H`.
///
/// `Re H` must be positive semidefinite and `H` invertible; when `Re H` is
/// singular the integral is an oscillatory (Fresnel-type) limit and the value
/// is its analytic continuation.
pub fn real_gaussian_integral(h: &DMatrix<C64>, j: &[C64]) -> Result<C64> {
    let (prefactor, hinv) = real_gaussian_prepare(h)?;
    let jv = to_dvec(j);
    Ok(prefactor * ((jv.transpose() * hinv * &jv)[0] * 0.25).exp())
}

/// Returns `π^{n/2} (det H)^{-1/2}` and `H⁻¹`.
pub(crate) fn real_gaussian_prepare(h: &DMatrix<C64>) -> Result<(C64, DMatrix<C64>)> {
    let n = h.nrows();
    let min_re = min_eig_real_part(h);
    if min_re < -PD_THRESHOLD {
        return Err(Error::NotIntegrable { min_eigenvalue: min_re });
    }
    let condition = condition_estimate(h);
    if condition > CONDITION_LIMIT {
        return Err(Error::SingularM { condition });
    }
    let hinv = h.clone().try_inverse().ok_or(Error::SingularM {
        condition: f64::INFINITY,
    })?;
    let (root, _) = sqrt_det(h);
    Ok((r(std::f64::consts::PI.powf(n as f64 / 2.0)) / root, hinv))
}

/// Integral operator on Fock space with kernel `k(z,w) = c·exp(aᵀz + bᵀw̄ + zᵀQw̄)`:
/// `(Af)(z) = ∫ k(z,w) f(w) e^{−λ|w|²/2} dμ_λ(w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernelOp {
    #[serde(with = "serde_c64")]
    pub c: C64,
    #[serde(with = "serde_cvec")]
    pub a: Vec<C64>,
    #[serde(with = "serde_cvec")]
    pub b: Vec<C64>,
    #[serde(rename = "Q", with = "serde_cmat")]
    pub q: DMatrix<C64>,
    pub lambda: f64,
}

impl GaussianKernelOp {
    pub fn new(c: C64, a: Vec<C64>, b: Vec<C64>, q: DMatrix<C64>, lambda: f64) -> Result<Self> {
        let n = a.len();
        if b.len() != n || q.nrows() != n || q.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "kernel parameters: |a| = {n}, |b| = {}, Q is {}x{}",
                b.len(),
                q.nrows(),
                q.ncols()
            )));
        }
        if !(lambda > 0.0) {
            return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
        }
        Ok(GaussianKernelOp { c, a, b, q, lambda })
    }

    pub fn identity(n: usize, lambda: f64) -> Self {
        GaussianKernelOp {
            c: r(1.0),
            a: vec![r(0.0); n],
            b: vec![r(0.0); n],
            q: DMatrix::identity(n, n) * r(lambda / 2.0),
            lambda,
        }
    }

    /// Rank-one projector onto the normalised coherent state at `z0`.
    pub fn coherent_projector(z0: &[C64], lambda: f64) -> Self {
        let n = z0.len();
        let norm2: f64 = z0.iter().map(|z| z.norm_sqr()).sum();
        GaussianKernelOp {
            c: r((-lambda * norm2 / 2.0).exp()),
            a: z0.iter().map(|z| z.conj() * (lambda / 2.0)).collect(),
            b: z0.iter().map(|z| z * (lambda / 2.0)).collect(),
            q: DMatrix::zeros(n, n),
            lambda,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn scaled(&self, s: C64) -> Self {
        GaussianKernelOp {
            c: self.c * s,
            ..self.clone()
        }
    }

    /// `k(z, w)`.
    pub fn evaluate(&self, z: &[C64], w: &[C64]) -> C64 {
        let zv = to_dvec(z);
        let wb = to_dvec(w).map(|x| x.conj());
        let e = (to_dvec(&self.a).transpose() * &zv)[0]
            + (to_dvec(&self.b).transpose() * &wb)[0]
            + (zv.transpose() * &self.q * &wb)[0];
        self.c * e.exp()
    }

    /// `k` continued analytically: `c·exp(aᵀz + bᵀwb + zᵀQ wb)`, with `wb` standing for `w̄`.
    pub fn evaluate_split(&self, z: &[C64], wb: &[C64]) -> C64 {
        self.c * self.exponent_split(z, wb).exp()
    }

    /// The exponent `aᵀz + bᵀwb + zᵀQ wb` of [`Self::evaluate_split`], without `c`.
    pub fn exponent_split(&self, z: &[C64], wb: &[C64]) -> C64 {
        let zv = to_dvec(z);
        let wv = to_dvec(wb);
        (to_dvec(&self.a).transpose() * &zv)[0]
            + (to_dvec(&self.b).transpose() * &wv)[0]
            + (zv.transpose() * &self.q * &wv)[0]
    }

    /// Action on holomorphic functions: `(Af)(z) = c e^{aᵀz} f((2/λ)(Qᵀz + b))`.
    pub fn apply_fn(&self, f: impl Fn(&[C64]) -> C64, z: &[C64]) -> C64 {
        let zeta: Vec<C64> = self
            .substitution(z)
            .into_iter()
            .collect();
        let lin: C64 = self.a.iter().zip(z).map(|(a, x)| a * x).sum();
        self.c * lin.exp() * f(&zeta)
    }

    /// `(2/λ)(Qᵀz + b)`, the point at which `A` evaluates its argument.
    pub fn substitution(&self, z: &[C64]) -> Vec<C64> {
        let s = 2.0 / self.lambda;
        let qz = self.q.transpose() * to_dvec(z);
        qz.iter().zip(&self.b).map(|(x, b)| (x + b) * s).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "kernels of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if (self.lambda - other.lambda).abs() > 1e-15 * self.lambda {
            return Err(Error::DimensionMismatch(format!(
                "kernels with lambda {} and {}",
                self.lambda, other.lambda
            )));
        }
        Ok(())
    }

    /// Kernel of `self ∘ other`, from `k₁₂(z,w) = ∫ k₁(z,u) k₂(u,w) e^{−λ|u|²/2} dμ_λ(u)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.dim();
        let lambda = self.lambda;
        // Integrand in u: exp(−(λ/2)ūᵀu + (a₂ + Q₂w̄)ᵀu + (b₁ + Q₁ᵀz)ᵀū).
        let spec = GaussianIntegralSpec {
            a: DMatrix::zeros(n, n),
            b: DMatrix::identity(n, n) * r(lambda / 4.0),
            d: DMatrix::zeros(n, n),
            u: self.b.clone(),
            v: other.a.clone(),
        };
        let prep = PreparedLemma::new(&spec)?;
        let y = prep.minv_uv_block();
        let a2 = to_dvec(&other.a);
        let b1 = to_dvec(&self.b);
        let measure = r((lambda / (2.0 * std::f64::consts::PI)).powi(n as i32));
        let cnst = (a2.transpose() * &y * &b1)[0] * 0.5;
        let a = to_dvec(&self.a) + &self.q * y.transpose() * &a2 * r(0.5);
        let b = to_dvec(&other.b) + other.q.transpose() * &y * &b1 * r(0.5);
        let q = &self.q * y.transpose() * &other.q * r(0.5);
        Ok(GaussianKernelOp {
            c: self.c * other.c * measure * prep.prefactor() * cnst.exp(),
            a: a.iter().copied().collect(),
            b: b.iter().copied().collect(),
            q,
            lambda,
        })
    }

    /// `Tr A = ∫ k(z,z) e^{−λ|z|²/2} dμ_λ(z)`.
    pub fn trace(&self) -> Result<C64> {
        let n = self.dim();
        let lambda = self.lambda;
        let g = DMatrix::identity(n, n) * r(lambda / 2.0) - self.q.transpose();
        let spec = GaussianIntegralSpec {
            a: DMatrix::zeros(n, n),
            b: g * r(0.5),
            d: DMatrix::zeros(n, n),
            u: self.a.clone(),
            v: self.b.clone(),
        };
        let prep = PreparedLemma::new(&spec).map_err(|e| match e {
            Error::NotIntegrable { min_eigenvalue } => Error::NotTraceClass(format!(
                "diagonal integral diverges (smallest eigenvalue of Re N is {min_eigenvalue:e})"
            )),
            Error::SingularM { condition } => {
                Error::NotTraceClass(format!("diagonal form is singular (condition {condition:e})"))
            }
            other => other,
        })?;
        let measure = r((lambda / (2.0 * std::f64::consts::PI)).powi(n as i32));
        Ok(self.c * measure * prep.prefactor() * prep.exponent(&self.a, &self.b).exp())
    }

    /// Kernel of the adjoint: `k*(z,w) = conj(k(w,z))`.
    pub fn adjoint(&self) -> Self {
        GaussianKernelOp {
            c: self.c.conj(),
            a: self.b.iter().map(|x| x.conj()).collect(),
            b: self.a.iter().map(|x| x.conj()).collect(),
            q: self.q.adjoint(),
            lambda: self.lambda,
        }
    }

    /// Hilbert–Schmidt pairing `⟨A, B⟩ = Tr(A B*)`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.compose(&other.adjoint())?.trace()
    }

    /// Largest scaled parameter difference `|x − y| / max(1, |x|)` over `c, a, b, Q`.
    pub fn param_distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let mut d = scaled_diff(self.c, other.c);
        for (x, y) in self.a.iter().zip(&other.a).chain(self.b.iter().zip(&other.b)) {
            d = d.max(scaled_diff(*x, *y));
        }
        for (x, y) in self.q.iter().zip(other.q.iter()) {
            d = d.max(scaled_diff(*x, *y));
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::c;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bilinear_spec(n: usize, bdiag: f64, u: Vec<C64>, v: Vec<C64>) -> GaussianIntegralSpec {
        GaussianIntegralSpec {
            a: DMatrix::zeros(n, n),
            b: DMatrix::identity(n, n) * r(bdiag),
            d: DMatrix::zeros(n, n),
            u,
            v,
        }
    }

    #[test]
    fn lemma_reference_values() {
        let pi = std::f64::consts::PI;
        for &lambda in &[0.7, 1.0, 2.0] {
            for n in 1..=2 {
                let spec = bilinear_spec(n, lambda / 4.0, vec![r(0.0); n], vec![r(0.0); n]);
                let v = gaussian_integral(&spec).unwrap();
                let expected = (2.0 * pi / lambda).powi(n as i32);
                assert!((v - expected).norm() < 1e-12 * expected);
            }
            let u = vec![c(0.3, -0.4), c(1.0, 0.2)];
            let v = vec![c(-0.7, 0.1), c(0.5, 0.5)];
            let spec = bilinear_spec(2, lambda / 4.0, u.clone(), v.clone());
            let uv: C64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            let expected = (uv * (2.0 / lambda)).exp() * (2.0 * pi / lambda).powi(2);
            let got = gaussian_integral(&spec).unwrap();
            assert!((got - expected).norm() < 1e-12 * expected.norm());
        }
    }

    #[test]
    fn lemma_rejects_divergent_and_singular() {
        let spec = bilinear_spec(1, -0.5, vec![r(0.0)], vec![r(0.0)]);
        assert!(matches!(gaussian_integral(&spec), Err(Error::NotIntegrable { .. })));
        let spec = bilinear_spec(1, 0.0, vec![r(0.0)], vec![r(0.0)]);
        assert!(matches!(gaussian_integral(&spec), Err(Error::NotIntegrable { .. })));
    }

    #[test]
    fn general_lemma_against_one_dimensional_real_integral() {
        // n = 1, A = D = a (real), B = b: exponent −(a(w² + w̄²) + 2b|w|²)
        // = −((2a + 2b)x² + (2b − 2a)y²).
        let (a, b) = (0.2, 0.5);
        let spec = GaussianIntegralSpec {
            a: DMatrix::from_element(1, 1, r(a)),
            b: DMatrix::from_element(1, 1, r(b)),
            d: DMatrix::from_element(1, 1, r(a)),
            u: vec![r(0.0)],
            v: vec![r(0.0)],
        };
        let pi = std::f64::consts::PI;
        let expected = pi / ((2.0 * a + 2.0 * b) * (2.0 * b - 2.0 * a)).sqrt();
        assert!((gaussian_integral(&spec).unwrap() - expected).norm() < 1e-12);
    }

    fn random_kernel(rng: &mut ChaCha8Rng, n: usize, lambda: f64, qscale: f64) -> GaussianKernelOp {
        let q = DMatrix::from_fn(n, n, |_, _| sample::complex_normal(rng) * qscale);
        GaussianKernelOp::new(
            sample::complex_normal(rng),
            sample::complex_vec(rng, n),
            sample::complex_vec(rng, n),
            q,
            lambda,
        )
        .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=2 {
            let id = GaussianKernelOp::identity(n, 1.4);
            let k = random_kernel(&mut rng, n, 1.4, 0.5);
            assert!(k.compose(&id).unwrap().param_distance(&k) < 1e-13);
            assert!(id.compose(&k).unwrap().param_distance(&k) < 1e-13);
            assert!(id.adjoint().param_distance(&id) == 0.0);
            assert!(k.adjoint().adjoint().param_distance(&k) == 0.0);
            let z = sample::complex_vec(&mut rng, n);
            let w = sample::complex_vec(&mut rng, n);
            let zw: C64 = z.iter().zip(&w).map(|(a, b)| a * b.conj()).sum();
            assert!((id.evaluate(&z, &w) - (zw * 0.7).exp()).norm() < 1e-13);
        }
    }

    #[test]
    fn trace_examples() {
        let lambda = 0.9;
        assert!(matches!(
            GaussianKernelOp::identity(2, lambda).trace(),
            Err(Error::NotTraceClass(_))
        ));
        let p0 = GaussianKernelOp::coherent_projector(&[r(0.0), r(0.0)], lambda);
        assert!((p0.trace().unwrap() - 1.0).norm() < 1e-14);
        assert!((p0.hs_inner(&p0).unwrap() - 1.0).norm() < 1e-14);
        let pz = GaussianKernelOp::coherent_projector(&[c(0.4, -1.1)], lambda);
        assert!((pz.trace().unwrap() - 1.0).norm() < 1e-13);
        assert!((pz.compose(&pz).unwrap().param_distance(&pz)) < 1e-13);
    }

    #[test]
    fn compose_adjoint_and_cyclicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=2 {
            let k1 = random_kernel(&mut rng, n, 1.0, 0.2);
            let k2 = random_kernel(&mut rng, n, 1.0, 0.2);
            let k3 = random_kernel(&mut rng, n, 1.0, 0.2);
            let lhs = k1.compose(&k2).unwrap().compose(&k3).unwrap();
            let rhs = k1.compose(&k2.compose(&k3).unwrap()).unwrap();
            assert!(lhs.param_distance(&rhs) < 1e-10);
            let adj = k1.compose(&k2).unwrap().adjoint();
            let adj2 = k2.adjoint().compose(&k1.adjoint()).unwrap();
            assert!(adj.param_distance(&adj2) < 1e-12);
            let t12 = k1.compose(&k2).unwrap().trace().unwrap();
            let t21 = k2.compose(&k1).unwrap().trace().unwrap();
            assert!((t12 - t21).norm() < 1e-10 * t12.norm().max(1.0));
            let hs = k1.hs_inner(&k1).unwrap();
            assert!(hs.re > 0.0 && hs.im.abs() < 1e-12 * hs.re);
        }
    }

    #[test]
    fn apply_matches_kernel_on_coherent_states() {
        // A e_w evaluated at z must equal k(z, w).
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let lambda = 1.7;
        let k = random_kernel(&mut rng, 2, lambda, 0.4);
        let z = sample::complex_vec(&mut rng, 2);
        let w = sample::complex_vec(&mut rng, 2);
        let ew = |x: &[C64]| -> C64 {
            let s: C64 = w.iter().zip(x).map(|(a, b)| a.conj() * b).sum();
            (s * (lambda / 2.0)).exp()
        };
        let got = k.apply_fn(ew, &z);
        assert!((got - k.evaluate(&z, &w)).norm() < 1e-12 * got.norm().max(1.0));
    }

    #[test]
    fn real_integral_oscillatory_limit() {
        // ∫ exp(−i a x²) dx = sqrt(π/(i a)).
        let a = 0.8;
        let h = DMatrix::from_element(1, 1, c(0.0, a));
        let v = real_gaussian_integral(&h, &[r(0.0)]).unwrap();
        let expected = (r(std::f64::consts::PI) / c(0.0, a)).sqrt();
        assert!((v - expected).norm() < 1e-14);
        let h = DMatrix::from_element(1, 1, r(-1.0));
        assert!(real_gaussian_integral(&h, &[r(0.0)]).is_err());
    }

    #[test]
    fn json_shape() {
        let k = GaussianKernelOp::identity(1, 1.0);
        let v: serde_json::Value = serde_json::to_value(&k).unwrap();
        assert_eq!(v["Q"][0][0][0], 0.5);
        assert_eq!(v["lambda"], 1.0);
        let back: GaussianKernelOp = serde_json::from_value(v).unwrap();
        assert_eq!(back, k);
    }
}
