//! Star products on polynomials (Moyal, `∗₁`, `∗₀`), formal star exponentials,
//! closed-form star exponentials of quadratics, and the Gaussian `∗₀` identity.

use serde::Serialize;

use crate::algebra::{MultiIndex, Poly, PolyXY, PolyZ, Vars};
use crate::cplx::{conj, r, C64, I};
use crate::{Error, Result};

/// Largest order accepted by [`star_exp_series`].
pub const MAX_SERIES_ORDER: usize = 12;

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `P^l(f, g) = Σ_{|α|+|β|=l} l!/(α!β!) (−1)^{|β|} ∂_x^α ∂_y^β f · ∂_y^α ∂_x^β g`,
/// the `l`-fold contraction of derivatives with `Λ = (0, I; −I, 0)`.
pub fn moyal_pl(f: &PolyXY, g: &PolyXY, l: u32) -> PolyXY {
    let n = f.dim();
    let mut out = PolyXY::zero(n);
    for ab in MultiIndex::all_up_to(2 * n, l) {
        if ab.degree() != l {
            continue;
        }
        let alpha = MultiIndex::new(ab.entries()[..n].to_vec());
        let beta = MultiIndex::new(ab.entries()[n..].to_vec());
        let df = f.derivative_multi(&alpha, &beta);
        if df.is_zero() {
            continue;
        }
        let dg = g.derivative_multi(&beta, &alpha);
        if dg.is_zero() {
            continue;
        }
        let sign = if beta.degree() % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * factorial(l) / (alpha.factorial() * beta.factorial());
        out = &out + &(&df * &dg).scale(r(weight));
    }
    out
}

/// `Σ_l (1/l!)(−iħ/2)^l P^l(f, g)`; the sum terminates at `min(deg f, deg g)`.
pub fn star_hbar(f: &PolyXY, g: &PolyXY, hbar: f64) -> PolyXY {
    let top = f.degree().unwrap_or(0).min(g.degree().unwrap_or(0));
    let mut out = PolyXY::zero(f.dim());
    let mut coef = r(1.0);
    for l in 0..=top {
        out = &out + &moyal_pl(f, g, l).scale(coef);
        coef *= -I * (hbar / 2.0) / f64::from(l + 1);
    }
    out
}

/// `f ∗_M g = Σ_l (1/l!)(−i/2)^l P^l(f, g)`.
pub fn moyal(f: &PolyXY, g: &PolyXY) -> PolyXY {
    star_hbar(f, g, 1.0)
}

/// `f ∗₁ g = (f^λ ∗_M g^λ)_λ`, with `f_λ(x,y) = f(x,λy)`, `f^λ(x,y) = f(x,y/λ)`.
pub fn star1(f: &PolyXY, g: &PolyXY, lambda: f64) -> PolyXY {
    moyal(&f.scale_y(1.0 / lambda), &g.scale_y(1.0 / lambda)).scale_y(lambda)
}

/// `∗₁` through its own expansion, with `(−i/2λ)^l` in place of `(−i/2)^l`.
pub fn star1_expansion(f: &PolyXY, g: &PolyXY, lambda: f64) -> PolyXY {
    star_hbar(f, g, 1.0 / lambda)
}

/// `F ∗₀ G = ((F∘j) ∗₁ (G∘j)) ∘ j⁻¹`, `j(x,y) = x + iy`.
pub fn star0(f: &PolyZ, g: &PolyZ, lambda: f64) -> PolyZ {
    star1_expansion(&f.to_xy(), &g.to_xy(), lambda).to_z()
}

/// Which product a series or CLI request refers to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductKind {
    Moyal,
    Star0,
    Star1,
}

/// Truncated power series `Σ_{k ≤ order} a_k s^k` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<V: Vars> {
    pub coefficients: Vec<Poly<V>>,
    pub order: usize,
}

impl<V: Vars> FormalSeries<V> {
    pub fn coefficient(&self, k: usize) -> Option<&Poly<V>> {
        self.coefficients.get(k)
    }

    /// Cauchy product truncated at `min(order)`, with `mul` as the coefficient product.
    pub fn mul_with(&self, other: &Self, mul: impl Fn(&Poly<V>, &Poly<V>) -> Poly<V>) -> Self {
        let order = self.order.min(other.order);
        let n = self.coefficients[0].dim();
        let coefficients = (0..=order)
            .map(|k| {
                (0..=k).fold(Poly::zero(n), |acc, i| {
                    &acc + &mul(&self.coefficients[i], &other.coefficients[k - i])
                })
            })
            .collect();
        FormalSeries { coefficients, order }
    }

    /// Term-wise `d/ds`; the order drops by one.
    pub fn derivative(&self) -> Self {
        let coefficients: Vec<Poly<V>> = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(r(k as f64)))
            .collect();
        let order = self.order.saturating_sub(1);
        if coefficients.is_empty() {
            let n = self.coefficients[0].dim();
            return FormalSeries { coefficients: vec![Poly::zero(n)], order: 0 };
        }
        FormalSeries { coefficients, order }
    }

    /// `Σ a_k(·) s^k` with each coefficient evaluated by `eval`.
    pub fn evaluate(&self, s: C64, eval: impl Fn(&Poly<V>) -> C64) -> C64 {
        self.coefficients.iter().rev().fold(r(0.0), |acc, c| acc * s + eval(c))
    }
}

/// `exp_∗(sP) = Σ_k s^k P^{∗k}/k!` up to `s^order`.
pub fn star_exp_series<V: Vars>(
    p: &Poly<V>,
    order: usize,
    product: impl Fn(&Poly<V>, &Poly<V>) -> Poly<V>,
) -> Result<FormalSeries<V>> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::OrderTooLarge { order, max: MAX_SERIES_ORDER });
    }
    let mut coefficients = vec![Poly::one(p.dim())];
    let mut power = Poly::one(p.dim());
    for k in 1..=order {
        power = product(&power, p);
        coefficients.push(power.scale(r(1.0 / factorial(k as u32))));
    }
    Ok(FormalSeries { coefficients, order })
}

/// Parameters of `P(z) = ic₀ + āz − az̄ + iΣ b_k|z_k|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpec {
    pub c0: f64,
    pub a: Vec<C64>,
    pub b: Vec<f64>,
}

impl QuadraticSpec {
    pub fn polynomial(&self) -> PolyZ {
        let n = self.b.len();
        let mut terms = vec![(MultiIndex::zero(n), MultiIndex::zero(n), I * self.c0)];
        for k in 0..n {
            let e = MultiIndex::unit(n, k);
            let zero = MultiIndex::zero(n);
            terms.push((e.clone(), zero.clone(), self.a[k].conj()));
            terms.push((zero, e.clone(), -self.a[k]));
            terms.push((e.clone(), e, I * self.b[k]));
        }
        terms
            .into_iter()
            .fold(PolyZ::zero(n), |acc, (p, q, c)| &acc + &PolyZ::monomial(n, p, q, c))
    }

    fn check(&self, lambda: f64) -> Result<()> {
        if self.a.len() != self.b.len() {
            return Err(Error::DimensionMismatch(format!("a has {} entries, b has {}", self.a.len(), self.b.len())));
        }
        if let Some(index) = self.b.iter().position(|&b| b == 0.0) {
            return Err(Error::DegenerateB { index });
        }
        for (k, b) in self.b.iter().enumerate() {
            if (b / lambda).cos().abs() <= 1e-8 {
                return Err(Error::Domain(format!("cos(b[{k}]/lambda) vanishes")));
            }
        }
        Ok(())
    }
}

/// The closed form of `exp_∗₀(P)` continued holomorphically in all parameters,
/// with `ā` passed separately from `a`.
pub(crate) fn star_exp0_holomorphic(
    c0: C64,
    a: &[C64],
    abar: &[C64],
    b: &[C64],
    z: &[C64],
    lambda: f64,
) -> C64 {
    let mut value = (I * c0).exp();
    let mut e = r(0.0);
    for k in 0..b.len() {
        let tn = (b[k] / lambda).tan();
        value /= (b[k] / lambda).cos();
        e += I * lambda * a[k] * abar[k] * (-1.0 / (lambda * b[k]) + tn / (b[k] * b[k]));
        e += I * lambda * z[k].norm_sqr() * tn;
        e += lambda * tn / b[k] * (z[k] * abar[k] - a[k] * z[k].conj());
    }
    value * e.exp()
}

/// `exp_∗₀(ic₀ + āz − az̄ + iΣ b_k|z_k|²)(z)` in closed form.
pub fn star_exp_closed(spec: &QuadraticSpec, z: &[C64], lambda: f64) -> Result<C64> {
    spec.check(lambda)?;
    let b: Vec<C64> = spec.b.iter().map(|&v| r(v)).collect();
    Ok(star_exp0_holomorphic(r(spec.c0), &spec.a, &conj(&spec.a), &b, z, lambda))
}

/// Moyal form: `exp_∗M(ic₀ + 2i(−v·x + u·y) + iΣ b_k(x_k² + y_k²))(x, y)`.
pub fn star_exp_moyal_closed(c0: f64, u: &[f64], v: &[f64], b: &[f64], x: &[f64], y: &[f64]) -> Result<C64> {
    let spec = QuadraticSpec {
        c0,
        a: u.iter().zip(v).map(|(p, q)| C64::new(*p, *q)).collect(),
        b: b.to_vec(),
    };
    spec.check(1.0)?;
    let mut value = (I * c0).exp();
    let mut e = r(0.0);
    for k in 0..b.len() {
        let tn = b[k].tan();
        value /= b[k].cos();
        e += I * (u[k] * u[k] + v[k] * v[k]) * (tn / (b[k] * b[k]) - 1.0 / b[k]);
        e += I * (x[k] * x[k] + y[k] * y[k]) * tn;
        e += 2.0 * I * tn / b[k] * (y[k] * u[k] - v[k] * x[k]);
    }
    Ok(value * e.exp())
}

/// `e^{−Σu_k|z_k|²} ∗₀ e^{−Σv_k|z_k|²} = Π(1 + u_kv_k/λ²)⁻¹ exp(−Σ (u_k+v_k)/(1 + u_kv_k/λ²) |z_k|²)`.
/// Returns the prefactor and the coefficients `e_k` of `exp(Σ e_k|z_k|²)`.
pub fn gaussian_star0(u: &[C64], v: &[C64], lambda: f64) -> Result<(C64, Vec<C64>)> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!("u has {} entries, v has {}", u.len(), v.len())));
    }
    let mut prefactor = r(1.0);
    let mut exponent = Vec::with_capacity(u.len());
    for (index, (uk, vk)) in u.iter().zip(v).enumerate() {
        let d = r(1.0) + uk * vk / (lambda * lambda);
        if d.norm() <= 1e-10 {
            return Err(Error::SingularProduct { index, modulus: d.norm() });
        }
        prefactor /= d;
        exponent.push(-(uk + vk) / d);
    }
    Ok((prefactor, exponent))
}

/// Bivariate truncated series in `(u, v)` with coefficients in `ℂ[z, z̄]`, `n = 1`.
struct UvSeries {
    degree: usize,
    c: Vec<Vec<PolyZ>>,
}

impl UvSeries {
    fn zero(degree: usize) -> Self {
        UvSeries { degree, c: vec![vec![PolyZ::zero(1); degree + 1]; degree + 1] }
    }

    fn mul(&self, other: &Self) -> Self {
        let d = self.degree;
        let mut out = UvSeries::zero(d);
        for i in 0..=d {
            for j in 0..=d - i {
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        let term = &self.c[i1][j1] * &other.c[i - i1][j - j1];
                        out.c[i][j] = &out.c[i][j] + &term;
                    }
                }
            }
        }
        out
    }
}

/// Coefficient-wise residual of the Gaussian `∗₀` identity (`n = 1`) expanded in
/// `(u, v)` to total degree `degree`. The left side is the term-by-term product
/// `Σ (−u)^i(−v)^j/(i!j!) |z|^{2i} ∗₀ |z|^{2j}`, the right side the expansion of
/// `(1 + uv/λ²)⁻¹ exp(−(u+v)|z|²/(1 + uv/λ²))`.
pub fn gaussian_star0_series_residual(lambda: f64, degree: usize) -> f64 {
    let w = PolyZ::monomial(1, MultiIndex::new(vec![1]), MultiIndex::new(vec![1]), r(1.0));
    let mut inv = UvSeries::zero(degree);
    for k in 0..=degree / 2 {
        inv.c[k][k] = PolyZ::constant(1, r((-1.0 / (lambda * lambda)).powi(k as i32)));
    }
    let mut lin = UvSeries::zero(degree);
    lin.c[1][0] = w.scale(r(-1.0));
    lin.c[0][1] = w.scale(r(-1.0));
    let e = lin.mul(&inv);
    let mut exp = UvSeries::zero(degree);
    exp.c[0][0] = PolyZ::one(1);
    let mut power = UvSeries::zero(degree);
    power.c[0][0] = PolyZ::one(1);
    for m in 1..=degree {
        power = power.mul(&e);
        for i in 0..=degree {
            for j in 0..=degree - i {
                exp.c[i][j] = &exp.c[i][j] + &power.c[i][j].scale(r(1.0 / factorial(m as u32)));
            }
        }
    }
    let rhs = inv.mul(&exp);
    let mut worst = 0.0f64;
    for i in 0..=degree {
        for j in 0..=degree - i {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = star0(&w.pow(i as u32), &w.pow(j as u32), lambda)
                .scale(r(sign / (factorial(i as u32) * factorial(j as u32))));
            worst = worst.max(lhs.max_abs_diff(&rhs.c[i][j]));
        }
    }
    worst
}

/// Taylor coefficients `f^{(k)}(0)/k!`, `k ≤ max_k`, of a function holomorphic on
/// the disc `|s| ≤ radius`, from `points` samples on the circle.
pub fn cauchy_taylor(f: impl Fn(C64) -> C64, radius: f64, points: usize, max_k: usize) -> Vec<C64> {
    let samples: Vec<(C64, C64)> = (0..points)
        .map(|j| {
            let w = (I * (2.0 * std::f64::consts::PI * j as f64 / points as f64)).exp();
            (w, f(w * radius))
        })
        .collect();
    (0..=max_k)
        .map(|k| {
            let sum: C64 = samples.iter().map(|(w, v)| v * w.powi(-(k as i32))).sum();
            sum / (points as f64 * radius.powi(k as i32))
        })
        .collect()
}

/// Taylor coefficients in `s` of the closed form at `(sc₀, sa, sb)`, up to `s^max_k`.
pub fn star_exp_closed_taylor(spec: &QuadraticSpec, z: &[C64], lambda: f64, max_k: usize) -> Result<Vec<C64>> {
    spec.check(lambda)?;
    let bmax = spec.b.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    // Stay well inside |s·b/λ| < π/2.
    let radius = (0.5 * std::f64::consts::FRAC_PI_2 * lambda / bmax).min(1.0);
    let abar = conj(&spec.a);
    let f = |s: C64| {
        let a: Vec<C64> = spec.a.iter().map(|v| v * s).collect();
        let ab: Vec<C64> = abar.iter().map(|v| v * s).collect();
        let b: Vec<C64> = spec.b.iter().map(|v| s * v).collect();
        star_exp0_holomorphic(s * spec.c0, &a, &ab, &b, z, lambda)
    };
    Ok(cauchy_taylor(f, radius, 96, max_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly_xy, parse_poly_z, weyl_quantize_poly, Slot};
    use crate::correspondences::{weyl0_of_diffop, weyl0_quantize, weyl0_symbol_trace};
    use crate::cplx::c;
    use crate::group::WeightSystem;
    use crate::representation::sigma_kernel;

    fn xy(s: &str, n: usize) -> PolyXY {
        parse_poly_xy(s, n).unwrap()
    }

    #[test]
    fn bracket_terms() {
        let x = xy("x1", 1);
        let y = xy("y1", 1);
        assert_eq!(moyal_pl(&x, &y, 0), xy("x1*y1", 1));
        assert_eq!(moyal_pl(&x, &y, 1), PolyXY::one(1));
        assert!(moyal_pl(&x, &y, 2).is_zero());
        assert!(moyal(&x, &y).max_abs_diff(&(&xy("x1*y1", 1) - &PolyXY::constant(1, c(0.0, 0.5)))) < 1e-15);
        assert!(moyal(&y, &x).max_abs_diff(&(&xy("x1*y1", 1) + &PolyXY::constant(1, c(0.0, 0.5)))) < 1e-15);
        let f = xy("x1^3*y2 + 2*x2*y1^2 - y2^3", 2);
        let g = xy("x1*y1^2 + x2^2 - 3*y2", 2);
        for l in 0..4 {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            assert!(moyal_pl(&f, &g, l).max_abs_diff(&moyal_pl(&g, &f, l).scale(r(sign))) < 1e-12);
        }
        assert_eq!(moyal(&f, &PolyXY::one(2)), f);
    }

    #[test]
    fn weyl_homomorphism() {
        let f = xy("x1^2*y1 - 2*x2*y2 + y1^3", 2);
        let g = xy("x1*y2^2 + 0.5*x2^2*y1 + x1", 2);
        let lhs = weyl_quantize_poly(&moyal(&f, &g));
        let rhs = weyl_quantize_poly(&f).compose(&weyl_quantize_poly(&g)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn star1_and_star0() {
        let lambda = 0.6;
        let f = xy("x1^2*y1 + y1^2", 1);
        let g = xy("x1*y1 - 2*y1^3", 1);
        assert!(star1(&f, &g, lambda).max_abs_diff(&star1_expansion(&f, &g, lambda)) < 1e-12);
        assert_eq!(star1(&f, &PolyXY::one(1), lambda), f);
        let z = PolyZ::var(1, Slot::First(0));
        let zb = PolyZ::var(1, Slot::Second(0));
        let comm = &star0(&z, &zb, lambda) - &star0(&zb, &z, lambda);
        assert!(comm.max_abs_diff(&PolyZ::constant(1, r(-2.0 / lambda))) < 1e-14);
        let via_ops = weyl0_of_diffop(
            &weyl0_quantize(&z, lambda).compose(&weyl0_quantize(&zb, lambda)).unwrap(),
            lambda,
        );
        assert!(via_ops.max_abs_diff(&star0(&z, &zb, lambda)) < 1e-14);
        let fz = parse_poly_z("z1^2*zb1 - 2*zb1", 1).unwrap();
        let gz = parse_poly_z("z1*zb1^2 + 1i*z1", 1).unwrap();
        assert!(star0(&fz, &gz, 1.0).to_xy().max_abs_diff(&moyal(&fz.to_xy(), &gz.to_xy())) < 1e-12);
        let via_ops = weyl0_of_diffop(
            &weyl0_quantize(&fz, lambda).compose(&weyl0_quantize(&gz, lambda)).unwrap(),
            lambda,
        );
        assert!(via_ops.max_abs_diff(&star0(&fz, &gz, lambda)) < 1e-12);
    }

    #[test]
    fn series_basics() {
        let lambda = 0.9;
        let p = PolyZ::constant(1, c(0.3, 0.0));
        let s = star_exp_series(&p, 5, |a, b| star0(a, b, lambda)).unwrap();
        for k in 0..=5 {
            let expected = 0.3f64.powi(k as i32) / factorial(k as u32);
            assert!((s.coefficients[k].coefficient(&MultiIndex::zero(1), &MultiIndex::zero(1)) - expected).norm() < 1e-15);
        }
        let q = parse_poly_z("1i*z1*zb1 + z1", 1).unwrap();
        let s = star_exp_series(&q, 3, |a, b| star0(a, b, lambda)).unwrap();
        assert_eq!(s.coefficients[1], q);
        assert!(s.coefficients[2].max_abs_diff(&star0(&q, &q, lambda).scale(r(0.5))) < 1e-15);
        assert!(matches!(star_exp_series(&q, 13, |a, b| star0(a, b, lambda)), Err(Error::OrderTooLarge { .. })));
        let d = s.derivative();
        assert_eq!(d.order, 2);
        assert!(d.coefficients[0].max_abs_diff(&q) < 1e-15);
        let sq = s.mul_with(&s, |a, b| star0(a, b, lambda));
        let s2 = star_exp_series(&q.scale(r(2.0)), 3, |a, b| star0(a, b, lambda)).unwrap();
        for k in 0..=3 {
            assert!(sq.coefficients[k].max_abs_diff(&s2.coefficients[k]) < 1e-12);
        }
    }

    #[test]
    fn pure_quadratic_closed_form() {
        let lambda = 1.3;
        let b = 0.7;
        let spec = QuadraticSpec { c0: 0.0, a: vec![r(0.0)], b: vec![b] };
        let z = [c(0.4, -0.2)];
        let expected = (I * lambda * z[0].norm_sqr() * (b / lambda).tan()).exp() / (b / lambda).cos();
        assert!((star_exp_closed(&spec, &z, lambda).unwrap() - expected).norm() < 1e-12);
        let zero_b = QuadraticSpec { c0: 0.0, a: vec![r(0.0)], b: vec![0.0] };
        assert!(matches!(star_exp_closed(&zero_b, &z, lambda), Err(Error::DegenerateB { index: 0 })));
        let bad = QuadraticSpec { c0: 0.0, a: vec![r(0.0)], b: vec![std::f64::consts::FRAC_PI_2 * lambda] };
        assert!(matches!(star_exp_closed(&bad, &z, lambda), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_matches_series() {
        let lambda = 0.8;
        let spec = QuadraticSpec {
            c0: 0.4,
            a: vec![c(0.3, -0.2), c(-0.1, 0.5)],
            b: vec![0.35, -0.6],
        };
        let series = star_exp_series(&spec.polynomial(), 8, |a, b| star0(a, b, lambda)).unwrap();
        for z in [[c(0.2, 0.1), c(-0.3, 0.4)], [c(-0.5, 0.2), c(0.1, -0.6)]] {
            let taylor = star_exp_closed_taylor(&spec, &z, lambda, 8).unwrap();
            for k in 0..=8 {
                let sk = series.coefficients[k].eval(&z);
                assert!((taylor[k] - sk).norm() < 1e-9 * sk.norm().max(1.0), "k={k}: {} vs {sk}", taylor[k]);
            }
        }
    }

    #[test]
    fn moyal_form_is_star0_at_unit_lambda() {
        let (c0, u, v, b) = (0.3, [0.2, -0.4], [0.1, 0.3], [0.5, -0.7]);
        let (x, y) = ([0.3, -0.1], [0.6, 0.2]);
        let spec = QuadraticSpec { c0, a: vec![c(u[0], v[0]), c(u[1], v[1])], b: b.to_vec() };
        let z = [c(x[0], y[0]), c(x[1], y[1])];
        let moy = star_exp_moyal_closed(c0, &u, &v, &b, &x, &y).unwrap();
        assert!((moy - star_exp_closed(&spec, &z, 1.0).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn gaussian_identity_values() {
        let (p, e) = gaussian_star0(&[r(1.0)], &[r(1.0)], 1.0).unwrap();
        assert!((p - 0.5).norm() < 1e-15 && (e[0] + 1.0).norm() < 1e-15);
        let (p, e) = gaussian_star0(&[c(0.3, 0.2)], &[r(0.0)], 2.0).unwrap();
        assert_eq!(p, r(1.0));
        assert_eq!(e[0], -c(0.3, 0.2));
        assert!(matches!(gaussian_star0(&[r(1.0)], &[r(-1.0)], 1.0), Err(Error::SingularProduct { .. })));
    }

    #[test]
    fn gaussian_identity_formal_expansion() {
        for lambda in [0.7, 1.0, 2.0] {
            assert!(gaussian_star0_series_residual(lambda, 6) < 1e-10);
        }
        // Summing the truncated series at small (u, v) reproduces the closed form.
        let (lambda, u, v) = (0.8, c(0.02, 0.01), c(-0.015, 0.02));
        let z = [c(0.5, -0.4)];
        let w = PolyZ::monomial(1, MultiIndex::new(vec![1]), MultiIndex::new(vec![1]), r(1.0));
        let mut total = r(0.0);
        for i in 0..=6u32 {
            for j in 0..=6 - i {
                let term = star0(&w.pow(i), &w.pow(j), lambda).eval(&z);
                total += term * (-u).powu(i) * (-v).powu(j) / (factorial(i) * factorial(j));
            }
        }
        let (p, e) = gaussian_star0(&[u], &[v], lambda).unwrap();
        assert!((total - p * (e[0] * z[0].norm_sqr()).exp()).norm() < 1e-10);
    }

    #[test]
    fn gaussian_identity_from_sigma_composition() {
        // W₀(σ(t)) = C(t) exp(−u(t)|z|²) with u(t) = iλ tan(α(t)/2).
        let ws = WeightSystem::new(0.9, vec![vec![0.7]], vec![0.2]).unwrap();
        let lambda = ws.lambda;
        let z0 = [r(0.0)];
        let z1 = [c(0.6, 0.3)];
        let fit = |t: f64| {
            let k = sigma_kernel(&[t], &ws);
            let w0 = weyl0_symbol_trace(&k, &z0).unwrap();
            let w1 = weyl0_symbol_trace(&k, &z1).unwrap();
            (w0, -(w1 / w0).ln() / z1[0].norm_sqr())
        };
        let (t1, t2) = (0.8, 1.1);
        let (c1, u1) = fit(t1);
        let (c2, u2) = fit(t2);
        let (c12, u12) = fit(t1 + t2);
        assert!((u1 - I * lambda * (0.7 * t1 / 2.0).tan()).norm() < 1e-12);
        let (p, e) = gaussian_star0(&[u1], &[u2], lambda).unwrap();
        assert!((c1 * c2 * p - c12).norm() < 1e-12);
        assert!((e[0] + u12).norm() < 1e-12);
    }
}
