//! The generalized diamond group `G = ℝᵐ ⋉ Hₙ`, its Lie algebra and dual.
//!
//! Group law: `(t,z,c)·(t',z',c') = (t+t', z + t·z', c + c' + ½ω(z, t·z'))`
//! with `t·z = A(t)z`, `A(t) = diag(e^{iα_k(t)})`, and
//! `ω(z, w) = ω((z,z̄),(w,w̄)) = -Im Σ z_k w̄_k`.

use serde::{Deserialize, Serialize};

use crate::cplx::{c, dot, r, serde_cvec, C64, I};
use crate::{Error, Result};

/// Model parameters: dimensions, the weights `α_k`, the character direction
/// `β` and the central parameter `λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSystem {
    pub n: usize,
    pub m: usize,
    /// `m × n`; `α_k(t) = Σ_j alpha[j][k] t_j`.
    pub alpha: Vec<Vec<f64>>,
    /// `χ(t) = exp(i⟨β, t⟩)`.
    pub beta: Vec<f64>,
    pub lambda: f64,
}

impl WeightSystem {
    pub fn new(lambda: f64, alpha: Vec<Vec<f64>>, beta: Vec<f64>) -> Result<Self> {
        let m = alpha.len();
        let n = alpha.first().map_or(0, Vec::len);
        let ws = WeightSystem {
            n,
            m,
            alpha,
            beta,
            lambda,
        };
        ws.validate()?;
        Ok(ws)
    }

    /// `n = m = 1`, `α(t) = t`, `β = 0`.
    pub fn simple(lambda: f64) -> Self {
        WeightSystem::new(lambda, vec![vec![1.0]], vec![0.0]).expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.n == 0 || self.m == 0 {
            return Err(Error::Config("n and m must be at least 1".into()));
        }
        if self.alpha.len() != self.m || self.alpha.iter().any(|row| row.len() != self.n) {
            return Err(Error::Config(format!("alpha must be an {} x {} matrix", self.m, self.n)));
        }
        if self.beta.len() != self.m {
            return Err(Error::Config(format!("beta must have length {}", self.m)));
        }
        if self.alpha.iter().flatten().chain(&self.beta).any(|v| !v.is_finite()) {
            return Err(Error::Config("alpha and beta must be finite".into()));
        }
        Ok(())
    }

    /// `(α_1(t), ..., α_n(t))`.
    pub fn angles(&self, t: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|k| (0..self.m).map(|j| self.alpha[j][k] * t[j]).sum())
            .collect()
    }

    /// Diagonal of `A(t)`.
    pub fn torus(&self, t: &[f64]) -> Vec<C64> {
        self.angles(t).into_iter().map(|a| C64::from_polar(1.0, a)).collect()
    }

    pub fn beta_dot(&self, t: &[f64]) -> f64 {
        self.beta.iter().zip(t).map(|(b, x)| b * x).sum()
    }

    pub fn chi(&self, t: &[f64]) -> C64 {
        C64::from_polar(1.0, self.beta_dot(t))
    }

    /// `t·z = A(t) z`.
    pub fn rotate(&self, t: &[f64], z: &[C64]) -> Vec<C64> {
        self.torus(t).iter().zip(z).map(|(a, w)| a * w).collect()
    }

    fn check_g(&self, g: &GroupElement) -> Result<()> {
        if g.t.len() != self.m || g.z0.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "group element with dim(t) = {}, dim(z0) = {} for m = {}, n = {}",
                g.t.len(),
                g.z0.len(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }

    pub fn check_group_element(&self, g: &GroupElement) -> Result<()> {
        self.check_g(g)
    }

    pub fn check_lie_element(&self, x: &LieElement) -> Result<()> {
        if x.t.len() != self.m || x.u.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "Lie element with dim(t) = {}, dim(u) = {} for m = {}, n = {}",
                x.t.len(),
                x.u.len(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }

    pub fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of dimension {} for n = {}",
                z.len(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.m, self.n)
    }

    pub fn multiply(&self, g1: &GroupElement, g2: &GroupElement) -> GroupElement {
        let tz2 = self.rotate(&g1.t, &g2.z0);
        GroupElement {
            t: g1.t.iter().zip(&g2.t).map(|(a, b)| a + b).collect(),
            z0: g1.z0.iter().zip(&tz2).map(|(a, b)| a + b).collect(),
            c0: g1.c0 + g2.c0 + 0.5 * omega(&g1.z0, &tz2),
        }
    }

    /// `(t, z, c)⁻¹ = (-t, -A(-t) z, -c)`.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let neg_t: Vec<f64> = g.t.iter().map(|x| -x).collect();
        GroupElement {
            z0: self.rotate(&neg_t, &g.z0).into_iter().map(|w| -w).collect(),
            t: neg_t,
            c0: -g.c0,
        }
    }

    /// Affine action `g·z = t·z + z0`.
    pub fn act(&self, g: &GroupElement, z: &[C64]) -> Vec<C64> {
        self.rotate(&g.t, z)
            .into_iter()
            .zip(&g.z0)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `α(t)u = (α_1(t) u_1, ..., α_n(t) u_n)`.
    fn alpha_mul(&self, t: &[f64], u: &[C64]) -> Vec<C64> {
        self.angles(t).iter().zip(u).map(|(a, w)| w * *a).collect()
    }

    /// `[(t,u,c),(t',u',c')] = (0, i(α(t)u' − α(t')u), ω(u,u'))`.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let a = self.alpha_mul(&x.t, &y.u);
        let b = self.alpha_mul(&y.t, &x.u);
        LieElement {
            t: vec![0.0; self.m],
            u: a.iter().zip(&b).map(|(p, q)| I * (p - q)).collect(),
            c: omega(&x.u, &y.u),
        }
    }

    /// `exp(sX)`, using series for the removable singularities at `α_k(t)s = 0`.
    pub fn exp(&self, x: &LieElement, s: f64) -> GroupElement {
        let angles = self.angles(&x.t);
        let mut z0 = Vec::with_capacity(self.n);
        let mut c0 = s * x.c;
        for (k, &a) in angles.iter().enumerate() {
            let theta = a * s;
            z0.push(x.u[k] * s * expm1_over(theta));
            c0 += 0.5 * x.u[k].norm_sqr() * s * s * theta_minus_sin_over_sq(theta);
        }
        GroupElement {
            t: x.t.iter().map(|v| v * s).collect(),
            z0,
            c0,
        }
    }

    /// `Ad(g)X = d/ds g·exp(sX)·g⁻¹ |_{s=0}`, in closed form:
    /// `(t, A(t0)u − iα(t)z0, c + ω(z0, A(t0)u) − ½Σ α_k(t)|z0_k|²)`.
    pub fn adjoint(&self, g: &GroupElement, x: &LieElement) -> LieElement {
        let au = self.rotate(&g.t, &x.u);
        let az = self.alpha_mul(&x.t, &g.z0);
        let angles = self.angles(&x.t);
        let central: f64 = angles
            .iter()
            .zip(&g.z0)
            .map(|(a, z)| a * z.norm_sqr())
            .sum();
        LieElement {
            t: x.t.clone(),
            u: au.iter().zip(&az).map(|(p, q)| p - I * q).collect(),
            c: x.c + omega(&g.z0, &au) - 0.5 * central,
        }
    }

    /// `Ad*(g)ξ`, defined by `⟨Ad*(g)ξ, X⟩ = ⟨ξ, Ad(g⁻¹)X⟩`.
    pub fn coadjoint(&self, g: &GroupElement, xi: &Covector) -> Covector {
        let vv = self.rotate(&g.t, &xi.v);
        let d = xi.d;
        let weights: Vec<f64> = vv
            .iter()
            .zip(&g.z0)
            .map(|(v, z)| (v * z.conj()).re - 0.5 * d * z.norm_sqr())
            .collect();
        let s = (0..self.m)
            .map(|j| xi.s[j] + (0..self.n).map(|k| self.alpha[j][k] * weights[k]).sum::<f64>())
            .collect();
        Covector {
            s,
            v: vv.iter().zip(&g.z0).map(|(v, z)| v - z * d).collect(),
            d,
        }
    }

    /// `⟨ξ, X⟩ = ⟨s, t⟩ + ω(v, u) + c d`.
    pub fn pairing(&self, xi: &Covector, x: &LieElement) -> f64 {
        let st: f64 = xi.s.iter().zip(&x.t).map(|(a, b)| a * b).sum();
        st + omega(&xi.v, &x.u) + x.c * xi.d
    }
}

/// `ω((z,z̄),(w,w̄)) = -Im Σ z_k w̄_k`.
pub fn omega(z: &[C64], w: &[C64]) -> f64 {
    -z.iter().zip(w).map(|(a, b)| a * b.conj()).sum::<C64>().im
}

/// The form `ω((z,w),(z',w')) = (i/2)(zw' − z'w)` on arbitrary pairs.
pub fn symplectic_form(z: &[C64], w: &[C64], zp: &[C64], wp: &[C64]) -> C64 {
    (dot(z, wp) - dot(zp, w)) * c(0.0, 0.5)
}

/// `(e^{iθ} − 1)/(iθ)`.
fn expm1_over(theta: f64) -> C64 {
    if theta.abs() < 1.0 {
        // sinθ/θ + i(1 − cosθ)/θ as alternating series.
        let t2 = theta * theta;
        let (mut re, mut im) = (0.0, 0.0);
        let mut term = 1.0; // θ^{2j}/(2j+1)!
        let mut term_im = theta / 2.0; // θ^{2j+1}/(2j+2)!
        for j in 0..12 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            re += sign * term;
            im += sign * term_im;
            let k = 2.0 * j as f64;
            term *= t2 / ((k + 2.0) * (k + 3.0));
            term_im *= t2 / ((k + 3.0) * (k + 4.0));
        }
        c(re, im)
    } else {
        c(theta.sin() / theta, (1.0 - theta.cos()) / theta)
    }
}

/// `(θ − sinθ)/θ²`.
fn theta_minus_sin_over_sq(theta: f64) -> f64 {
    if theta.abs() < 1.0 {
        let t2 = theta * theta;
        let mut term = theta / 6.0; // θ^{2j+1}/(2j+3)!
        let mut sum = 0.0;
        for j in 0..12 {
            sum += if j % 2 == 0 { term } else { -term };
            let k = 2.0 * j as f64;
            term *= t2 / ((k + 4.0) * (k + 5.0));
        }
        sum
    } else {
        (theta - theta.sin()) / (theta * theta)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub t: Vec<f64>,
    #[serde(with = "serde_cvec")]
    pub z0: Vec<C64>,
    pub c0: f64,
}

impl GroupElement {
    pub fn new(t: Vec<f64>, z0: Vec<C64>, c0: f64) -> Self {
        GroupElement { t, z0, c0 }
    }

    pub fn identity(m: usize, n: usize) -> Self {
        GroupElement {
            t: vec![0.0; m],
            z0: vec![r(0.0); n],
            c0: 0.0,
        }
    }

    /// Coordinates `(t, Re z0, Im z0, c0)` as a flat real vector.
    pub fn coords(&self) -> Vec<f64> {
        let mut v = self.t.clone();
        v.extend(self.z0.iter().map(|z| z.re));
        v.extend(self.z0.iter().map(|z| z.im));
        v.push(self.c0);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieElement {
    pub t: Vec<f64>,
    #[serde(with = "serde_cvec")]
    pub u: Vec<C64>,
    pub c: f64,
}

impl LieElement {
    pub fn new(t: Vec<f64>, u: Vec<C64>, c: f64) -> Self {
        LieElement { t, u, c }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        LieElement {
            t: vec![0.0; m],
            u: vec![r(0.0); n],
            c: 0.0,
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        let mut v = self.t.clone();
        v.extend(self.u.iter().map(|z| z.re));
        v.extend(self.u.iter().map(|z| z.im));
        v.push(self.c);
        v
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        LieElement {
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            c: self.c + other.c,
        }
    }

    pub fn scale(&self, s: f64) -> LieElement {
        LieElement {
            t: self.t.iter().map(|a| a * s).collect(),
            u: self.u.iter().map(|a| a * s).collect(),
            c: self.c * s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub s: Vec<f64>,
    #[serde(with = "serde_cvec")]
    pub v: Vec<C64>,
    pub d: f64,
}

impl Covector {
    pub fn coords(&self) -> Vec<f64> {
        let mut out = self.s.clone();
        out.extend(self.v.iter().map(|z| z.re));
        out.extend(self.v.iter().map(|z| z.im));
        out.push(self.d);
        out
    }

    /// Euclidean distance on `(s, Re v, Im v, d)`.
    pub fn distance(&self, other: &Covector) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// `max_i |a_i − b_i|`.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ws2() -> WeightSystem {
        WeightSystem::new(1.3, vec![vec![0.4, -0.9], vec![0.7, 0.2]], vec![0.3, -0.1]).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let ws = WeightSystem::simple(1.0);
        let a = GroupElement::new(vec![0.0], vec![r(1.0)], 0.0);
        let b = GroupElement::new(vec![0.0], vec![I], 0.0);
        let ab = ws.multiply(&a, &b);
        assert_eq!(ab.z0, vec![c(1.0, 1.0)]);
        assert!((ab.c0 - 0.5).abs() < 1e-15);
        assert_eq!(ws.multiply(&a, &ws.identity()), a);
    }

    #[test]
    fn inverse_examples() {
        let ws = ws2();
        let e = ws.identity();
        assert_eq!(ws.inverse(&e).coords(), e.coords().iter().map(|x| -x).collect::<Vec<_>>());
        let g = GroupElement::new(vec![0.0, 0.0], vec![c(1.0, 2.0), c(-0.5, 0.1)], 0.0);
        let gi = ws.inverse(&g);
        assert_eq!(gi.z0, vec![c(-1.0, -2.0), c(0.5, -0.1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let g = sample::group_element(&mut rng, &ws);
            let prod = ws.multiply(&g, &ws.inverse(&g));
            assert!(max_abs_diff(&prod.coords(), &e.coords()) < 1e-13);
        }
    }

    #[test]
    fn action_examples() {
        let ws = WeightSystem::simple(1.0);
        let t = vec![std::f64::consts::FRAC_PI_2];
        let g = GroupElement::new(t, vec![r(0.0)], 0.0);
        let z = ws.act(&g, &[c(0.3, 0.4)]);
        assert!((z[0] - c(-0.4, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn symplectic_examples() {
        let w = symplectic_form(&[r(1.0)], &[r(1.0)], &[I], &[-I]);
        assert!((w - r(1.0)).norm() < 1e-15);
        let z = [c(0.3, -1.2)];
        assert_eq!(omega(&z, &z), 0.0);
        let zz = [c(0.2, 0.5)];
        let full = symplectic_form(&z, &[z[0].conj()], &zz, &[zz[0].conj()]);
        assert!((full.re - omega(&z, &zz)).abs() < 1e-15 && full.im.abs() < 1e-15);
    }

    #[test]
    fn exp_examples() {
        let ws = WeightSystem::simple(1.0);
        let pi = std::f64::consts::PI;
        let g = ws.exp(&LieElement::new(vec![pi], vec![r(1.0)], 0.0), 1.0);
        assert!((g.t[0] - pi).abs() < 1e-15);
        assert!((g.z0[0] - c(0.0, 2.0 / pi)).norm() < 1e-15);
        assert!((g.c0 - 1.0 / (2.0 * pi)).abs() < 1e-15);

        let x = LieElement::new(vec![0.0], vec![c(0.5, -1.0)], 0.7);
        let g = ws.exp(&x, 2.0);
        assert_eq!(g.z0, vec![c(1.0, -2.0)]);
        assert!((g.c0 - 1.4).abs() < 1e-15);
    }

    #[test]
    fn exp_solves_its_ode() {
        // RK4 on z' = u + iα z, c' = c + ½|u|²(1 − cos αs)/α.
        let ws = WeightSystem::simple(1.0);
        let pi = std::f64::consts::PI;
        let (u, a, cc) = (r(1.0), pi, 0.0);
        let steps = 2000;
        let h = 1.0 / steps as f64;
        let mut z = r(0.0);
        let mut cs = 0.0;
        let f = |s: f64, z: C64| (u + I * a * z, cc + 0.5 * u.norm_sqr() * (1.0 - (a * s).cos()) / a);
        for i in 0..steps {
            let s = i as f64 * h;
            let (k1, l1) = f(s, z);
            let (k2, l2) = f(s + h / 2.0, z + k1 * (h / 2.0));
            let (k3, l3) = f(s + h / 2.0, z + k2 * (h / 2.0));
            let (k4, l4) = f(s + h, z + k3 * h);
            z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            cs += (l1 + 2.0 * l2 + 2.0 * l3 + l4) * (h / 6.0);
        }
        let g = ws.exp(&LieElement::new(vec![pi], vec![u], cc), 1.0);
        assert!((g.z0[0] - z).norm() < 1e-10);
        assert!((g.c0 - cs).abs() < 1e-10);
    }

    #[test]
    fn series_branch_is_continuous() {
        for &theta in &[0.999_999_9f64, 1.000_000_1, 1e-7, 1e-3] {
            let direct = c(theta.sin() / theta, (1.0 - theta.cos()) / theta);
            assert!((expm1_over(theta) - direct).norm() < 1e-9);
        }
        let lhs = theta_minus_sin_over_sq(0.999_999_999);
        let rhs = theta_minus_sin_over_sq(1.000_000_001);
        assert!((lhs - rhs).abs() < 1e-9);
        let t: f64 = 1e-4;
        assert!((theta_minus_sin_over_sq(t) - (t / 6.0 - t.powi(3) / 120.0)).abs() < 1e-19);
    }

    #[test]
    fn bracket_examples() {
        let ws = ws2();
        let x = LieElement::new(vec![0.3, -1.1], vec![c(0.2, 0.1), c(-1.0, 0.5)], 0.4);
        let xx = ws.bracket(&x, &x);
        assert!(xx.coords().iter().all(|v| v.abs() < 1e-15));
        let t = LieElement::new(vec![0.3, -1.1], vec![r(0.0), r(0.0)], 0.0);
        let u = LieElement::new(vec![0.0, 0.0], vec![c(0.2, 0.1), c(-1.0, 0.5)], 0.0);
        let b = ws.bracket(&t, &u);
        let ang = ws.angles(&t.t);
        for k in 0..2 {
            assert!((b.u[k] - I * u.u[k] * ang[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn adjoint_matches_finite_differences() {
        let ws = ws2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = sample::group_element(&mut rng, &ws);
            let x = sample::lie_element(&mut rng, &ws);
            let h = 1e-6;
            let gi = ws.inverse(&g);
            let plus = ws.multiply(&ws.multiply(&g, &ws.exp(&x, h)), &gi).coords();
            let minus = ws.multiply(&ws.multiply(&g, &ws.exp(&x, -h)), &gi).coords();
            let fd: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect();
            let ad = ws.adjoint(&g, &x).coords();
            assert!(max_abs_diff(&fd, &ad) < 1e-6, "{fd:?} vs {ad:?}");
        }
    }

    #[test]
    fn coadjoint_examples() {
        let ws = ws2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xi = sample::covector(&mut rng, &ws);
        let e = ws.identity();
        assert!(ws.coadjoint(&e, &xi).distance(&xi) < 1e-15);
        let g = sample::group_element(&mut rng, &ws);
        assert_eq!(ws.coadjoint(&g, &xi).d, xi.d);
    }
}
