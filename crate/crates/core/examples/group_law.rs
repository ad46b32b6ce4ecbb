//! The generalized diamond group: product, inverse, exponential and the
//! action on ℂⁿ.

use fockweyl::group::{GroupElement, LieElement, WeightSystem};
use fockweyl::C64;

fn main() -> fockweyl::Result<()> {
    let ws = WeightSystem::new(1.0, vec![vec![0.8, -0.4], vec![0.3, 0.9]], vec![0.5, -0.2])?;
    let g = GroupElement::new(vec![0.4, -1.1], vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.5)], 0.7);
    let h = GroupElement::new(vec![-0.9, 0.2], vec![C64::new(1.0, -0.4), C64::new(0.0, 0.3)], -1.2);

    let gh = ws.multiply(&g, &h);
    println!("g·h       = {gh:?}");
    println!("g·g⁻¹     = {:?}", ws.multiply(&g, &ws.inverse(&g)).coords());
    println!("α(t) of g = {:?}", ws.angles(&g.t));

    let x = LieElement::new(vec![0.3, -0.5], vec![C64::new(0.2, 0.1), C64::new(-0.4, 0.0)], 0.9);
    let split = ws.multiply(&ws.exp(&x, 0.4), &ws.exp(&x, 0.6));
    println!("exp(0.4X)exp(0.6X) − exp(X): {:e}", fockweyl::group::max_abs_diff(&split.coords(), &ws.exp(&x, 1.0).coords()));

    let z = [C64::new(0.5, -0.2), C64::new(0.1, 0.3)];
    println!("g·z       = {:?}", ws.act(&g, &z));
    Ok(())
}
