//! The Schrödinger model: the Mehler kernel of σ(t) and the kernel of π′(g),
//! checked against a direct quadrature of the Bargmann conjugation.

use fockweyl::group::{GroupElement, WeightSystem};
use fockweyl::representation::{conjugated_kernel_quadrature, mehler_kernel, pi_kernel, pi_prime_kernel, sigma_kernel};
use fockweyl::C64;

fn main() -> fockweyl::Result<()> {
    let ws = WeightSystem::simple(1.0);
    let t = [std::f64::consts::FRAC_PI_2];
    let mehler = mehler_kernel(&t, &ws)?;
    let sigma = sigma_kernel(&t, &ws);
    for (x, y) in [(0.0, 0.0), (0.3, -0.7), (1.2, 0.4)] {
        let closed = mehler.evaluate(&[x], &[y]);
        let quad = conjugated_kernel_quadrature(&sigma, &[x], &[y], 24)?;
        println!("Mehler K({x}, {y}) = {closed:.12}  quadrature {quad:.12}");
    }

    let g = GroupElement::new(vec![0.9], vec![C64::new(0.4, -0.3)], 0.5);
    let kernel = pi_prime_kernel(&g, &ws)?;
    let quad = conjugated_kernel_quadrature(&pi_kernel(&g, &ws), &[0.2], &[-0.5], 24)?;
    println!("π′(g) kernel at (0.2, −0.5): {:.12}  quadrature {quad:.12}", kernel.evaluate(&[0.2], &[-0.5]));
    Ok(())
}
