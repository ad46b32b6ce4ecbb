//! Independent numerical oracle: Gauss–Hermite quadrature on `ℝᵈ` and `ℂⁿ`,
//! truncated Fock bases and matrices, and Hermite functions on `ℝⁿ`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::MultiIndex;
use crate::cplx::{r, serde_cmat, C64, I};
use crate::gaussian::GaussianKernelOp;
use crate::{Error, Result};

/// Gauss–Hermite rule for the weight `e^{−x²}` on `ℝ`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Nodes and weights by Newton iteration on the orthonormal Hermite
/// recurrence, started from the usual asymptotic guesses.
pub fn gauss_hermite(order: usize) -> GaussHermite {
    assert!(order >= 1, "quadrature order must be positive");
    let n = order;
    let nf = n as f64;
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for iter in 0..200 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) && iter > 0 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let mut pairs: Vec<(f64, f64)> = x.into_iter().zip(w).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    GaussHermite {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Tensor Gauss–Hermite grid on `ℝᵈ` adapted to a Gaussian
/// `exp(−(x − m)ᵀP(x − m))`: nodes `x = m + Cξ` with `CᵀPC = I`.
#[derive(Clone, Debug)]
pub struct RealGrid {
    dim: usize,
    rule: GaussHermite,
    center: Vec<f64>,
    transform: DMatrix<f64>,
    jacobian: f64,
}

impl RealGrid {
    /// Grid for the weight `e^{−|x|²}` itself.
    pub fn standard(dim: usize, order: usize) -> Self {
        RealGrid {
            dim,
            rule: gauss_hermite(order),
            center: vec![0.0; dim],
            transform: DMatrix::identity(dim, dim),
            jacobian: 1.0,
        }
    }

    /// Grid adapted to `exp(−(x − center)ᵀ P (x − center))`, `P` symmetric positive definite.
    pub fn adapted(order: usize, center: &[f64], precision: &DMatrix<f64>) -> Result<Self> {
        let dim = center.len();
        if precision.nrows() != dim || precision.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "precision matrix must be {dim}x{dim}"
            )));
        }
        let chol = precision.clone().cholesky().ok_or(Error::NotIntegrable {
            min_eigenvalue: precision.clone().symmetric_eigenvalues().min(),
        })?;
        // P = LLᵀ, C = L^{-T}.
        let linv = chol.l().try_inverse().expect("Cholesky factor is invertible");
        let transform = linv.transpose();
        let jacobian = transform.determinant().abs();
        Ok(RealGrid {
            dim,
            rule: gauss_hermite(order),
            center: center.to_vec(),
            transform,
            jacobian,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.rule.nodes.len()
    }

    pub fn len(&self) -> usize {
        self.order().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `∫ f(x) exp(−(x − m)ᵀP(x − m)) dx`.
    pub fn integrate_weighted<F>(&self, f: F) -> C64
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        self.sum(&f, false)
    }

    /// `∫ f(x) dx`, with the Gaussian weight divided out at the nodes.
    pub fn integrate<F>(&self, f: F) -> C64
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        self.sum(&f, true)
    }

    fn sum<F>(&self, f: &F, unweighted: bool) -> C64
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        let q = self.order();
        let d = self.dim;
        if d == 0 {
            return f(&[]);
        }
        let inner = q.pow(d as u32 - 1);
        // One chunk per outer node; partial sums are added in a fixed order.
        let partials: Vec<C64> = (0..q)
            .into_par_iter()
            .map(|i0| {
                let mut xi = vec![0.0; d];
                let mut x = vec![0.0; d];
                let mut acc = r(0.0);
                for rest in 0..inner {
                    let mut idx = rest;
                    let mut w = self.rule.weights[i0];
                    xi[0] = self.rule.nodes[i0];
                    for k in 1..d {
                        let ik = idx % q;
                        idx /= q;
                        xi[k] = self.rule.nodes[ik];
                        w *= self.rule.weights[ik];
                    }
                    if unweighted {
                        w *= xi.iter().map(|v| v * v).sum::<f64>().exp();
                    }
                    for (row, xr) in x.iter_mut().enumerate() {
                        *xr = self.center[row]
                            + (0..d).map(|col| self.transform[(row, col)] * xi[col]).sum::<f64>();
                    }
                    acc += f(&x) * w;
                }
                acc
            })
            .collect();
        partials.into_iter().sum::<C64>() * self.jacobian
    }
}

/// Quadrature for `∫_{ℂⁿ} f(w) e^{−λ|w|²/2} dμ_λ(w)` with `dμ_λ = (λ/2π)ⁿ dm`.
#[derive(Clone, Debug)]
pub struct FockGrid {
    pub n: usize,
    pub lambda: f64,
    grid: RealGrid,
}

impl FockGrid {
    /// Grid matched to the Fock weight itself; exact for polynomial `f` of
    /// degree `< 2·order` per real axis.
    pub fn new(n: usize, lambda: f64, order: usize) -> Self {
        let p = DMatrix::identity(2 * n, 2 * n) * (lambda / 2.0);
        FockGrid {
            n,
            lambda,
            grid: RealGrid::adapted(order, &vec![0.0; 2 * n], &p).expect("positive definite"),
        }
    }

    pub fn order(&self) -> usize {
        self.grid.order()
    }

    pub fn integrate<F>(&self, f: F) -> C64
    where
        F: Fn(&[C64]) -> C64 + Sync,
    {
        let n = self.n;
        let scale = (self.lambda / (2.0 * std::f64::consts::PI)).powi(n as i32);
        self.grid.integrate_weighted(|x| {
            let w: Vec<C64> = (0..n).map(|k| C64::new(x[k], x[n + k])).collect();
            f(&w)
        }) * scale
    }
}

/// `∫_{ℂⁿ} f(w) dm(w)` on a grid adapted to the Gaussian `exp(−ξᵀPξ)` in the
/// real coordinates `ξ = (Re w − Re m, Im w − Im m)`.
pub fn integrate_cn_adapted<F>(order: usize, center: &[C64], precision: &DMatrix<f64>, f: F) -> Result<C64>
where
    F: Fn(&[C64]) -> C64 + Sync,
{
    let n = center.len();
    let m: Vec<f64> = center.iter().map(|z| z.re).chain(center.iter().map(|z| z.im)).collect();
    let grid = RealGrid::adapted(order, &m, precision)?;
    Ok(grid.integrate(|x| {
        let w: Vec<C64> = (0..n).map(|k| C64::new(x[k], x[n + k])).collect();
        f(&w)
    }))
}

/// Real quadratic model `Re E(ξ) = −ξᵀHξ + Jᵀξ + κ` of a function known to be
/// a quadratic polynomial in real coordinates, recovered by exact polarisation.
fn real_quadratic_model(dim: usize, re_e: impl Fn(&[f64]) -> f64) -> (DMatrix<f64>, DVector<f64>, f64) {
    let zero = vec![0.0; dim];
    let kappa = re_e(&zero);
    let at = |i: usize, si: f64, j: Option<(usize, f64)>| {
        let mut x = zero.clone();
        x[i] += si;
        if let Some((j, sj)) = j {
            x[j] += sj;
        }
        re_e(&x)
    };
    let mut h = DMatrix::zeros(dim, dim);
    let mut jv = DVector::zeros(dim);
    for i in 0..dim {
        let (fp, fm) = (at(i, 1.0, None), at(i, -1.0, None));
        jv[i] = (fp - fm) / 2.0;
        h[(i, i)] = -((fp + fm) / 2.0 - kappa);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let fpp = at(i, 1.0, Some((j, 1.0)));
            let fmm = at(i, -1.0, Some((j, -1.0)));
            // f(e_i+e_j) + f(−e_i−e_j) = 2κ − 2(H_ii + H_jj + 2H_ij)
            let hij = -((fpp + fmm) / 2.0 - kappa) - h[(i, i)] - h[(j, j)];
            h[(i, j)] = hij / 2.0;
            h[(j, i)] = hij / 2.0;
        }
    }
    (h, jv, kappa)
}

/// `∫_{ℝⁿ} g(x) e^{E(x)} dx` for a quadratic exponent `E` with negative definite
/// real part and a smooth, moderately growing `g`. The grid is fitted to `Re E`,
/// leaving only `g` and the imaginary phase of `E` to the quadrature.
pub fn integrate_rn_gaussian<E, G>(order: usize, n: usize, exponent: E, g: G) -> Result<C64>
where
    E: Fn(&[f64]) -> C64 + Sync,
    G: Fn(&[f64]) -> C64 + Sync,
{
    let (h, j, _) = real_quadratic_model(n, |x| exponent(x).re);
    let center = h
        .clone()
        .try_inverse()
        .ok_or(Error::NotIntegrable { min_eigenvalue: 0.0 })?
        * &j
        * 0.5;
    let grid = RealGrid::adapted(order, center.as_slice(), &h)?;
    let peak = exponent(center.as_slice()).re;
    Ok(grid.integrate_weighted(|x| {
        let e = exponent(x);
        g(x) * C64::new(peak, e.im).exp()
    }))
}

/// `∫_{ℂⁿ} g(z) e^{E(z)} dm(z)` (Lebesgue measure) for an exponent `E` that is a
/// quadratic polynomial in `z, z̄` with negative definite real part.
pub fn integrate_cn_gaussian<E, G>(order: usize, n: usize, exponent: E, g: G) -> Result<C64>
where
    E: Fn(&[C64]) -> C64 + Sync,
    G: Fn(&[C64]) -> C64 + Sync,
{
    let split = |x: &[f64]| -> Vec<C64> { (0..n).map(|k| C64::new(x[k], x[n + k])).collect() };
    integrate_rn_gaussian(order, 2 * n, |x| exponent(&split(x)), |x| g(&split(x)))
}

/// Complex quadratic model `E(ξ) = −ξᵀHξ + Jᵀξ + κ`, recovered by polarisation.
fn complex_quadratic_model(dim: usize, e: impl Fn(&[C64]) -> C64) -> (DMatrix<C64>, DVector<C64>) {
    let zero = vec![r(0.0); dim];
    let kappa = e(&zero);
    let at = |i: usize, si: f64, j: Option<(usize, f64)>| {
        let mut x = zero.clone();
        x[i] += si;
        if let Some((j, sj)) = j {
            x[j] += sj;
        }
        e(&x)
    };
    let mut h = DMatrix::zeros(dim, dim);
    let mut jv = DVector::zeros(dim);
    for i in 0..dim {
        let (fp, fm) = (at(i, 1.0, None), at(i, -1.0, None));
        jv[i] = (fp - fm) / 2.0;
        h[(i, i)] = -((fp + fm) / 2.0 - kappa);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let fpp = at(i, 1.0, Some((j, 1.0)));
            let fmm = at(i, -1.0, Some((j, -1.0)));
            let hij = -((fpp + fmm) / 2.0 - kappa) - h[(i, i)] - h[(j, j)];
            h[(i, j)] = hij / 2.0;
            h[(j, i)] = hij / 2.0;
        }
    }
    (h, jv)
}

/// `∫_{ℝᵈ} g(x) e^{E(x)} dx` for an entire integrand whose exponent `E` is a
/// complex quadratic with `Re E` negative definite.
///
/// The nodes are moved onto the steepest-descent contour `x = m + C ξ`:
/// `m` is the complex critical point and `C = C_r (I + iK)^{−1/2}`, where `C_r`
/// whitens `Re H` and `K = C_rᵀ Im H C_r`. Principal roots of `1 + iκ` fix the
/// orientation, which is the one reached by deforming the real contour. `E` and
/// `g` are evaluated at complex points and must be written analytically
/// (no complex conjugation of the coordinates).
pub fn integrate_rn_gaussian_contour<E, G>(order: usize, dim: usize, exponent: E, g: G) -> Result<C64>
where
    E: Fn(&[C64]) -> C64 + Sync,
    G: Fn(&[C64]) -> C64 + Sync,
{
    let (h, j) = complex_quadratic_model(dim, &exponent);
    let h_re = h.map(|v| v.re);
    let h_im = h.map(|v| v.im);
    let chol = h_re.clone().cholesky().ok_or(Error::NotIntegrable {
        min_eigenvalue: h_re.clone().symmetric_eigenvalues().min(),
    })?;
    let cr = chol.l().try_inverse().expect("Cholesky factor is invertible").transpose();
    let k = cr.transpose() * &h_im * &cr;
    let eig = nalgebra::SymmetricEigen::new((&k + k.transpose()) * 0.5);
    let roots: Vec<C64> = eig.eigenvalues.iter().map(|&kappa| C64::new(1.0, kappa).sqrt().inv()).collect();
    let o = eig.eigenvectors.map(r);
    let u = &o * DMatrix::from_diagonal(&DVector::from_column_slice(&roots)) * o.transpose();
    let c = cr.map(r) * u;
    let det_c = cr.determinant() * roots.iter().product::<C64>();
    let hinv = h.clone().try_inverse().ok_or(Error::SingularM {
        condition: f64::INFINITY,
    })?;
    let m = hinv * j * r(0.5);
    let grid = RealGrid::standard(dim, order);
    let total = grid.integrate_weighted(|xi| {
        let xiv = DVector::from_iterator(dim, xi.iter().map(|&v| r(v)));
        let x = &m + &c * &xiv;
        let xs = x.as_slice();
        let s: f64 = xi.iter().map(|v| v * v).sum();
        g(xs) * (exponent(xs) + s).exp()
    });
    Ok(total * det_c)
}

/// Contour version of [`integrate_cn_gaussian`]. `exponent(z, zb)` and `g(z, zb)`
/// receive `z = u + iv` and `zb = u − iv` separately, so that they continue
/// analytically in the real coordinates `(u, v)`.
pub fn integrate_cn_gaussian_contour<E, G>(order: usize, n: usize, exponent: E, g: G) -> Result<C64>
where
    E: Fn(&[C64], &[C64]) -> C64 + Sync,
    G: Fn(&[C64], &[C64]) -> C64 + Sync,
{
    let split = |x: &[C64]| -> (Vec<C64>, Vec<C64>) {
        (
            (0..n).map(|k| x[k] + I * x[n + k]).collect(),
            (0..n).map(|k| x[k] - I * x[n + k]).collect(),
        )
    };
    integrate_rn_gaussian_contour(
        order,
        2 * n,
        |x| {
            let (z, zb) = split(x);
            exponent(&z, &zb)
        },
        |x| {
            let (z, zb) = split(x);
            g(&z, &zb)
        },
    )
}

/// Truncated Fock basis `φ_p = z^p/‖z^p‖`, `|p| ≤ degree`, in graded order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockBasisSpec {
    pub n: usize,
    pub lambda: f64,
    pub degree: u32,
}

impl FockBasisSpec {
    pub fn new(n: usize, lambda: f64, degree: u32) -> Self {
        FockBasisSpec { n, lambda, degree }
    }

    pub fn basis(&self) -> Vec<MultiIndex> {
        MultiIndex::all_up_to(self.n, self.degree)
    }

    /// `‖z^p‖ = ((2/λ)^{|p|} p!)^{1/2}`.
    pub fn monomial_norm(&self, p: &MultiIndex) -> f64 {
        ((2.0 / self.lambda).powi(p.degree() as i32) * p.factorial()).sqrt()
    }

    /// `φ_p(z)`.
    pub fn basis_value(&self, p: &MultiIndex, z: &[C64]) -> C64 {
        crate::algebra::poly_monomial(p, z) / self.monomial_norm(p)
    }
}

/// Coefficients `⟨e_z, φ_p⟩ = z̄^p/‖z^p‖` of the coherent state `e_z`.
pub fn coherent_coeffs(z: &[C64], spec: &FockBasisSpec) -> Vec<C64> {
    let zb: Vec<C64> = z.iter().map(|w| w.conj()).collect();
    spec.basis()
        .iter()
        .map(|p| spec.basis_value(p, &zb))
        .collect()
}

/// Compression `⟨Aφ_q, φ_p⟩` of an operator to a truncated basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockMatrix {
    pub spec: FockBasisSpec,
    /// Basis ordering (graded lexicographic), row and column labels.
    pub basis: Vec<MultiIndex>,
    #[serde(with = "serde_cmat")]
    pub entries: DMatrix<C64>,
}

impl FockMatrix {
    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }
}

/// Dense truncated power series in `n` variables, indexed like the basis.
struct Truncated<'a> {
    index: &'a std::collections::HashMap<MultiIndex, usize>,
    basis: &'a [MultiIndex],
    coef: Vec<C64>,
}

impl<'a> Truncated<'a> {
    fn mul(&self, other: &Truncated<'a>, degree: u32) -> Truncated<'a> {
        let mut coef = vec![r(0.0); self.basis.len()];
        for (i, pi) in self.basis.iter().enumerate() {
            if self.coef[i] == r(0.0) {
                continue;
            }
            for (j, pj) in self.basis.iter().enumerate() {
                if pi.degree() + pj.degree() > degree || other.coef[j] == r(0.0) {
                    continue;
                }
                coef[self.index[&pi.add(pj)]] += self.coef[i] * other.coef[j];
            }
        }
        Truncated {
            index: self.index,
            basis: self.basis,
            coef,
        }
    }
}

/// Exact compression of a Gaussian kernel operator by Taylor extraction of
/// `(Aφ_q)(z) = c e^{aᵀz} φ_q(Lz + ℓ)` with `L = (2/λ)Qᵀ`, `ℓ = (2/λ)b`.
pub fn kernel_to_matrix(k: &GaussianKernelOp, spec: &FockBasisSpec) -> Result<FockMatrix> {
    if k.dim() != spec.n || (k.lambda - spec.lambda).abs() > 1e-15 * spec.lambda {
        return Err(Error::DimensionMismatch("kernel and basis disagree on n or lambda".into()));
    }
    let n = spec.n;
    let degree = spec.degree;
    let basis = spec.basis();
    let index: std::collections::HashMap<MultiIndex, usize> =
        basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let zero = |_: ()| Truncated {
        index: &index,
        basis: &basis,
        coef: vec![r(0.0); basis.len()],
    };
    let s = 2.0 / spec.lambda;
    // Linear forms (Lz + ℓ)_j = ℓ_j + Σ_i (2/λ) Q_ij z_i.
    let lin: Vec<Truncated> = (0..n)
        .map(|j| {
            let mut t = zero(());
            t.coef[0] = k.b[j] * s;
            for i in 0..n {
                t.coef[index[&MultiIndex::unit(n, i)]] = k.q[(i, j)] * s;
            }
            t
        })
        .collect();
    // e^{aᵀz} = Π_i Σ_m a_i^m z_i^m / m!.
    let mut expo = zero(());
    for (idx, p) in basis.iter().enumerate() {
        let mut v = r(1.0);
        for (i, &e) in p.entries().iter().enumerate() {
            v *= k.a[i].powu(e) / crate::algebra::factorial_f64(e);
        }
        expo.coef[idx] = v;
    }
    // Powers of each linear form, cached.
    let mut powers: Vec<Vec<Truncated>> = Vec::with_capacity(n);
    for form in &lin {
        let mut list = Vec::with_capacity(degree as usize + 1);
        let mut one = zero(());
        one.coef[0] = r(1.0);
        list.push(one);
        for e in 1..=degree as usize {
            let next = list[e - 1].mul(form, degree);
            list.push(next);
        }
        powers.push(list);
    }
    let norms: Vec<f64> = basis.iter().map(|p| spec.monomial_norm(p)).collect();
    let mut entries = DMatrix::zeros(basis.len(), basis.len());
    for (col, q) in basis.iter().enumerate() {
        let mut prod = expo.mul(&powers[0][q.entries()[0] as usize], degree);
        for j in 1..n {
            prod = prod.mul(&powers[j][q.entries()[j] as usize], degree);
        }
        for row in 0..basis.len() {
            entries[(row, col)] = k.c * prod.coef[row] * norms[row] / norms[col];
        }
    }
    Ok(FockMatrix {
        spec: spec.clone(),
        basis,
        entries,
    })
}

/// Same compression by nested quadrature: `⟨Aφ_q, φ_p⟩ = ∫∫ k(z,w) φ_q(w) conj(φ_p(z)) dν(w) dν(z)`
/// with `dν = e^{−λ|·|²/2} dμ_λ`. Costly; meant for small bases.
pub fn kernel_to_matrix_quadrature(
    k: &GaussianKernelOp,
    spec: &FockBasisSpec,
    order: usize,
) -> Result<FockMatrix> {
    let basis = spec.basis();
    let grid = FockGrid::new(spec.n, spec.lambda, order);
    let mut entries = DMatrix::zeros(basis.len(), basis.len());
    for (col, q) in basis.iter().enumerate() {
        for (row, p) in basis.iter().enumerate() {
            entries[(row, col)] = grid.integrate(|z| {
                let inner = grid.integrate(|w| k.evaluate(z, w) * spec.basis_value(q, w));
                inner * spec.basis_value(p, z).conj()
            });
        }
    }
    Ok(FockMatrix {
        spec: spec.clone(),
        basis,
        entries,
    })
}

/// Orthonormal Hermite functions `h_0..h_degree` on `ℝ` matched to `λ`
/// (ground state `(λ/π)^{1/4} e^{−λx²/2}`), evaluated at `x`.
pub fn hermite_1d(lambda: f64, degree: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    let s = lambda.sqrt() * x;
    out.push((lambda / std::f64::consts::PI).powf(0.25) * (-s * s / 2.0).exp());
    if degree >= 1 {
        out.push(std::f64::consts::SQRT_2 * s * out[0]);
    }
    for j in 1..degree {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * s * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// `h_p(x) = Π_k h_{p_k}(x_k)`. The Bargmann transform maps `h_p` to `φ_p`.
pub fn hermite_function(p: &MultiIndex, lambda: f64, x: &[f64]) -> f64 {
    p.entries()
        .iter()
        .zip(x)
        .map(|(&e, &xk)| hermite_1d(lambda, e as usize, xk)[e as usize])
        .product()
}

/// Table of `h_p` at a list of points, rows = points, columns = basis order.
pub fn hermite_functions(lambda: f64, n: usize, degree: u32, points: &[Vec<f64>]) -> (Vec<MultiIndex>, DMatrix<f64>) {
    let basis = MultiIndex::all_up_to(n, degree);
    let table = DMatrix::from_fn(points.len(), basis.len(), |i, j| {
        hermite_function(&basis[j], lambda, &points[i])
    });
    (basis, table)
}

/// Polynomial part `h_0..h_degree` times `e^{λx²/2}`, free of the Gaussian factor.
pub fn hermite_1d_polypart<T>(lambda: f64, degree: usize, x: T) -> Vec<T>
where
    T: Copy + From<f64> + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    let mut out = Vec::with_capacity(degree + 1);
    let s = T::from(lambda.sqrt()) * x;
    out.push(T::from((lambda / std::f64::consts::PI).powf(0.25)));
    if degree >= 1 {
        out.push(T::from(std::f64::consts::SQRT_2) * s * out[0]);
    }
    for j in 1..degree {
        let jf = j as f64;
        let next = T::from((2.0 / (jf + 1.0)).sqrt()) * s * out[j] - T::from((jf / (jf + 1.0)).sqrt()) * out[j - 1];
        out.push(next);
    }
    out
}

/// `h_p(x) e^{λ|x|²/2}`, continued to complex `x`.
pub fn hermite_polypart<T>(p: &MultiIndex, lambda: f64, x: &[T]) -> T
where
    T: Copy + From<f64> + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    p.entries()
        .iter()
        .zip(x)
        .fold(T::from(1.0), |acc, (&e, &xk)| acc * hermite_1d_polypart(lambda, e as usize, xk)[e as usize])
}

/// Applies a matrix to a coefficient vector in the truncated basis.
pub fn apply_matrix(m: &FockMatrix, v: &[C64]) -> Vec<C64> {
    (&m.entries * DVector::from_column_slice(v)).iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::c;

    #[test]
    fn hermite_rule_is_exact_on_moments() {
        let rule = gauss_hermite(20);
        let moment = |k: i32| -> f64 { rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(k)).sum() };
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((moment(0) - sqrt_pi).abs() < 1e-14);
        assert!((moment(2) - sqrt_pi / 2.0).abs() < 1e-14);
        assert!((moment(10) - sqrt_pi * 945.0 / 32.0).abs() < 1e-10);
        assert!(moment(7).abs() < 1e-12);
        let big = gauss_hermite(60);
        let total: f64 = big.weights.iter().sum();
        assert!((total - sqrt_pi).abs() < 1e-14);
    }

    #[test]
    fn fock_grid_monomial_orthogonality() {
        let lambda = 0.7;
        let grid = FockGrid::new(1, lambda, 12);
        assert!((grid.integrate(|_| r(1.0)) - 1.0).norm() < 1e-14);
        for p in 0..4u32 {
            for q in 0..4u32 {
                let v = grid.integrate(|w| w[0].powu(p) * w[0].conj().powu(q));
                let expected = if p == q {
                    (2.0 / lambda).powi(p as i32) * crate::algebra::factorial_f64(p)
                } else {
                    0.0
                };
                assert!((v - expected).norm() < 1e-12, "{p} {q} {v}");
            }
        }
    }

    #[test]
    fn adapted_grid_matches_closed_form() {
        let p = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let grid = RealGrid::adapted(20, &[0.3, -0.2], &p).unwrap();
        let v = grid.integrate(|x| {
            let d = [x[0] - 0.3, x[1] + 0.2];
            r((-(2.0 * d[0] * d[0] + d[0] * d[1] + d[1] * d[1])).exp())
        });
        let expected = std::f64::consts::PI / p.determinant().sqrt();
        assert!((v - expected).norm() < 1e-13);
    }

    #[test]
    fn gaussian_fitted_integrals() {
        // ∫ e^{−(1−2i)x² + (0.5+i)x} dx
        let a = c(1.0, -2.0);
        let j = c(0.5, 1.0);
        let v = integrate_rn_gaussian(110, 1, |x| -a * x[0] * x[0] + j * x[0], |_| r(1.0)).unwrap();
        let expected = (r(std::f64::consts::PI) / a).sqrt() * (j * j / (a * 4.0)).exp();
        assert!((v - expected).norm() < 1e-12 * expected.norm(), "{v} {expected}");
        // holomorphic moments vanish, so ∫_ℂ e^{−|z|² + 0.3 z²} dm = π
        let v = integrate_cn_gaussian(40, 1, |z| -z[0].norm_sqr() + 0.3 * z[0] * z[0], |_| r(1.0)).unwrap();
        let expected = std::f64::consts::PI;
        assert!((v - expected).norm() < 1e-12);
    }

    #[test]
    fn contour_integrals_handle_strong_phases() {
        let a = c(1.0, -6.0);
        let j = c(0.5, 1.0);
        let v = integrate_rn_gaussian_contour(8, 1, |x| -a * x[0] * x[0] + j * x[0], |_| r(1.0)).unwrap();
        let expected = (r(std::f64::consts::PI) / a).sqrt() * (j * j / (a * 4.0)).exp();
        assert!((v - expected).norm() < 1e-13 * expected.norm());
        let v = integrate_rn_gaussian_contour(8, 1, |x| -a * x[0] * x[0], |x| x[0] * x[0]).unwrap();
        let expected = (r(std::f64::consts::PI) / a).sqrt() / (a * 2.0);
        assert!((v - expected).norm() < 1e-13 * expected.norm());
        let v = integrate_cn_gaussian_contour(10, 1, |z, zb| -z[0] * zb[0] + z[0] * z[0] * c(0.3, 0.6), |_, _| r(1.0)).unwrap();
        assert!((v - std::f64::consts::PI).norm() < 1e-13);
    }

    #[test]
    fn coherent_coefficients() {
        let spec = FockBasisSpec::new(1, 1.5, 60);
        let c0 = coherent_coeffs(&[r(0.0)], &spec);
        assert_eq!(c0[0], r(1.0));
        assert!(c0[1..].iter().all(|x| *x == r(0.0)));
        let z = [c(1.2, -0.9)];
        let coeffs = coherent_coeffs(&z, &spec);
        let total: f64 = coeffs.iter().map(|x| x.norm_sqr()).sum();
        let expected = (1.5 * z[0].norm_sqr() / 2.0).exp();
        assert!((total - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn identity_and_sigma_matrices() {
        let spec = FockBasisSpec::new(2, 1.3, 5);
        let id = kernel_to_matrix(&GaussianKernelOp::identity(2, 1.3), &spec).unwrap();
        assert!((id.entries.clone() - DMatrix::identity(21, 21)).norm() < 1e-13);
    }

    #[test]
    fn taylor_and_quadrature_compressions_agree() {
        let k = GaussianKernelOp::new(
            c(0.8, 0.3),
            vec![c(0.2, -0.1)],
            vec![c(-0.3, 0.25)],
            DMatrix::from_element(1, 1, c(0.15, 0.1)),
            1.0,
        )
        .unwrap();
        let spec = FockBasisSpec::new(1, 1.0, 3);
        let exact = kernel_to_matrix(&k, &spec).unwrap();
        let quad = kernel_to_matrix_quadrature(&k, &spec, 30).unwrap();
        assert!((exact.entries - quad.entries).norm() < 1e-10);
        let adj = kernel_to_matrix(&k.adjoint(), &spec).unwrap();
        let exact = kernel_to_matrix(&k, &spec).unwrap();
        assert!((adj.entries - exact.entries.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn compressions_converge() {
        let k1 = GaussianKernelOp::new(
            c(0.8, 0.3),
            vec![c(0.4, -0.1)],
            vec![c(-0.3, 0.5)],
            DMatrix::from_element(1, 1, c(0.15, 0.1)),
            1.0,
        )
        .unwrap();
        let k2 = GaussianKernelOp::new(
            c(-0.2, 1.1),
            vec![c(-0.6, 0.2)],
            vec![c(0.1, 0.3)],
            DMatrix::from_element(1, 1, c(-0.1, 0.2)),
            1.0,
        )
        .unwrap();
        let spec = FockBasisSpec::new(1, 1.0, 24);
        let prod = kernel_to_matrix(&k1.compose(&k2).unwrap(), &spec).unwrap();
        let m1 = kernel_to_matrix(&k1, &spec).unwrap();
        let m2 = kernel_to_matrix(&k2, &spec).unwrap();
        let rel = (&prod.entries - &m1.entries * &m2.entries).norm() / prod.entries.norm();
        assert!(rel < 1e-6, "{rel}");
        let spec = FockBasisSpec::new(1, 1.0, 30);
        let tr = kernel_to_matrix(&k1, &spec).unwrap().trace();
        let exact = k1.trace().unwrap();
        assert!((tr - exact).norm() < 1e-8 * exact.norm());
    }

    #[test]
    fn hermite_functions_are_orthonormal_and_have_parity() {
        let lambda = 1.7;
        let p = DMatrix::from_element(1, 1, lambda);
        let grid = RealGrid::adapted(40, &[0.0], &p).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let v = grid.integrate(|x| r(hermite_1d(lambda, 6, x[0])[i] * hermite_1d(lambda, 6, x[0])[j]));
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((v - expected).norm() < 1e-10);
            }
        }
        let h = hermite_1d(lambda, 7, 0.37);
        let hm = hermite_1d(lambda, 7, -0.37);
        for j in 0..=7 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(h[j], sign * hm[j]);
        }
    }
}
