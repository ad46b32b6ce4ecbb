//! The moment map ψ: ℂⁿ → 𝔤*, its equivariance, and the symbol W′₀ read on
//! the coadjoint orbit.

use fockweyl::group::{GroupElement, WeightSystem};
use fockweyl::orbit::{base_point, psi_equivariance_check, psi_map, w0_prime};
use fockweyl::representation::pi_kernel;
use fockweyl::C64;

fn main() -> fockweyl::Result<()> {
    let ws = WeightSystem::new(1.0, vec![vec![0.8]], vec![0.3])?;
    println!("ξ₀ = ψ(0) = {:?}", base_point(&ws));

    let z = [C64::new(0.4, -0.9)];
    let xi = psi_map(&z, &ws);
    println!("ψ(z) = {xi:?}");

    let g = GroupElement::new(vec![1.7], vec![C64::new(-0.3, 0.8)], 0.2);
    println!("‖ψ(g·z) − Ad*(g)ψ(z)‖ = {:e}", psi_equivariance_check(&g, &z, &ws));
    println!("W′₀(π(g))(ψ(z)) = {}", w0_prime(&pi_kernel(&g, &ws), &xi, &ws)?);
    Ok(())
}
