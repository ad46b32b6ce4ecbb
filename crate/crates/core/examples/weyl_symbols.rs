//! Berezin and complex Weyl symbols of π(g): trace formula, closed form and
//! quadrature of the integral formula, plus the polynomial symbols of dπ(X).

use fockweyl::correspondences::{
    berezin_pi_closed, berezin_symbol, weyl0_dpi, weyl0_pi_closed, weyl0_symbol_integral, weyl0_symbol_trace, QuadMode,
};
use fockweyl::group::{GroupElement, LieElement, WeightSystem};
use fockweyl::representation::pi_kernel;
use fockweyl::C64;

fn main() -> fockweyl::Result<()> {
    let ws = WeightSystem::new(0.7, vec![vec![0.8, -0.4], vec![0.3, 0.9]], vec![0.5, -0.2])?;
    let g = GroupElement::new(vec![0.6, -0.8], vec![C64::new(0.2, 0.4), C64::new(-0.5, 0.1)], 1.3);
    let z = [C64::new(0.3, -0.1), C64::new(-0.2, 0.6)];
    let k = pi_kernel(&g, &ws);

    println!("Berezin    {}", berezin_symbol(&k, &z));
    println!("  closed   {}", berezin_pi_closed(&g, &z, &ws));
    println!("W0 trace   {}", weyl0_symbol_trace(&k, &z)?);
    println!("   closed  {}", weyl0_pi_closed(&g, &z, &ws)?);
    println!("   integral {}", weyl0_symbol_integral(&k, &z, 12, QuadMode::Contour)?);

    let x = LieElement::new(vec![1.0, 0.0], vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)], 0.5);
    println!("W0(dπ(X)) = {}", weyl0_dpi(&x, &ws));
    Ok(())
}
