//! The moment map `ψ: ℂⁿ → 𝔤*`, its equivariance, and `W′₀ = W₀ ∘ ψ⁻¹` on the
//! coadjoint orbit of `ξ₀ = ψ(0)`.

use crate::algebra::{PolyZ, Slot};
use crate::correspondences::weyl0_symbol_trace;
use crate::cplx::{c, r, C64};
use crate::gaussian::GaussianKernelOp;
use crate::group::{Covector, GroupElement, LieElement, WeightSystem};
use crate::{Error, Result};

/// Tolerance for the orbit-chart consistency test in [`psi_inverse`].
pub const ORBIT_TOL: f64 = 1e-8;

/// `ψ(z) = (β + ½Σ_k(1 − λ|z_k|²)α_k, −λz, λ)`, with `α_k` the k-th weight as a covector on `ℝᵐ`.
pub fn psi_map(z: &[C64], ws: &WeightSystem) -> Covector {
    let lambda = ws.lambda;
    let s = (0..ws.m)
        .map(|j| {
            ws.beta[j]
                + 0.5
                    * z.iter()
                        .enumerate()
                        .map(|(k, zk)| (1.0 - lambda * zk.norm_sqr()) * ws.alpha[j][k])
                        .sum::<f64>()
        })
        .collect();
    Covector {
        s,
        v: z.iter().map(|zk| zk * -lambda).collect(),
        d: lambda,
    }
}

/// `ξ₀ = ψ(0)`.
pub fn base_point(ws: &WeightSystem) -> Covector {
    psi_map(&vec![r(0.0); ws.n], ws)
}

/// `ψ⁻¹(ξ) = −v/λ`, after checking that `ξ` is on the chart.
pub fn psi_inverse(xi: &Covector, ws: &WeightSystem) -> Result<Vec<C64>> {
    let off = (xi.d - ws.lambda).abs();
    if off > ORBIT_TOL {
        return Err(Error::OffOrbit { residual: off });
    }
    let z: Vec<C64> = xi.v.iter().map(|v| v / -ws.lambda).collect();
    let residual = psi_map(&z, ws).distance(xi);
    if residual > ORBIT_TOL {
        return Err(Error::OffOrbit { residual });
    }
    Ok(z)
}

/// `‖ψ(g·z) − Ad*(g)ψ(z)‖`.
pub fn psi_equivariance_check(g: &GroupElement, z: &[C64], ws: &WeightSystem) -> f64 {
    psi_map(&ws.act(g, z), ws).distance(&ws.coadjoint(g, &psi_map(z, ws)))
}

/// `W′₀(A)(ξ) = W₀(A)(ψ⁻¹(ξ))`.
pub fn w0_prime(k: &GaussianKernelOp, xi: &Covector, ws: &WeightSystem) -> Result<C64> {
    weyl0_symbol_trace(k, &psi_inverse(xi, ws)?)
}

/// `z ↦ i⟨ψ(z), X⟩` as a polynomial in `(z, z̄)`, assembled from the
/// components of `ψ` with `ω(v, u) = (i/2)(vū − v̄u)`.
pub fn psi_pairing_poly(x: &LieElement, ws: &WeightSystem) -> PolyZ {
    let n = ws.n;
    let lambda = ws.lambda;
    let one = PolyZ::one(n);
    let z = |k| PolyZ::var(n, Slot::First(k));
    let zb = |k| PolyZ::var(n, Slot::Second(k));
    let mut pairing = PolyZ::constant(n, r(lambda * x.c));
    for j in 0..ws.m {
        let mut sj = PolyZ::constant(n, r(ws.beta[j]));
        for k in 0..n {
            let modulus = &one - &(&z(k) * &zb(k)).scale(r(lambda));
            sj = &sj + &modulus.scale(r(0.5 * ws.alpha[j][k]));
        }
        pairing = &pairing + &sj.scale(r(x.t[j]));
    }
    for k in 0..n {
        let v = z(k).scale(r(-lambda));
        let vb = v.conj();
        let w = &v.scale(x.u[k].conj()) - &vb.scale(x.u[k]);
        pairing = &pairing + &w.scale(c(0.0, 0.5));
    }
    pairing.scale(c(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondences::{weyl0_dpi, weyl0_gaussian_closed};
    use crate::representation::pi_kernel;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ws() -> WeightSystem {
        WeightSystem::new(0.7, vec![vec![0.8, -0.4], vec![0.3, 0.9]], vec![0.5, -0.2]).unwrap()
    }

    #[test]
    fn base_point_value() {
        let ws = ws();
        let xi0 = base_point(&ws);
        assert_eq!(xi0.s, vec![0.5 + 0.5 * 0.4, -0.2 + 0.5 * 1.2]);
        assert!(xi0.v.iter().all(|v| *v == r(0.0)));
        assert_eq!(xi0.d, 0.7);
    }

    #[test]
    fn pairing_is_weyl_symbol_of_dpi() {
        let ws = ws();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let x = sample::lie_element(&mut rng, &ws);
            let poly = psi_pairing_poly(&x, &ws);
            assert!(poly.max_abs_diff(&weyl0_dpi(&x, &ws)) < 1e-12);
            let z = sample::complex_vec(&mut rng, 2);
            let direct = c(0.0, ws.pairing(&psi_map(&z, &ws), &x));
            assert!((direct - poly.eval(&z)).norm() < 1e-12);
        }
    }

    #[test]
    fn equivariance() {
        let ws = ws();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let z = sample::complex_vec(&mut rng, 2);
        assert!(psi_equivariance_check(&ws.identity(), &z, &ws) < 1e-15);
        for _ in 0..100 {
            let g = sample::group_element(&mut rng, &ws);
            let z = sample::complex_vec(&mut rng, 2);
            assert!(psi_equivariance_check(&g, &z, &ws) < 1e-9);
            assert_eq!(psi_map(&ws.act(&g, &z), &ws).d, ws.lambda);
        }
    }

    #[test]
    fn pullback_symbol() {
        let ws = ws();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let g = sample::group_element(&mut rng, &ws);
        let k = pi_kernel(&g, &ws);
        let z = sample::complex_vec(&mut rng, 2);
        let xi = psi_map(&z, &ws);
        let back = psi_inverse(&xi, &ws).unwrap();
        assert!(back.iter().zip(&z).all(|(a, b)| (a - b).norm() < 1e-15));
        let lhs = w0_prime(&k, &xi, &ws).unwrap();
        assert!((lhs - weyl0_symbol_trace(&k, &z).unwrap()).norm() < 1e-12);
        let at0 = w0_prime(&k, &base_point(&ws), &ws).unwrap();
        assert!((at0 - weyl0_gaussian_closed(&k, &[r(0.0), r(0.0)]).unwrap()).norm() < 1e-10);
        let mut off = xi.clone();
        off.d += 0.1;
        assert!(matches!(w0_prime(&k, &off, &ws), Err(Error::OffOrbit { .. })));
        let mut off = xi;
        off.s[0] += 1e-3;
        assert!(matches!(psi_inverse(&off, &ws), Err(Error::OffOrbit { .. })));
    }
}
