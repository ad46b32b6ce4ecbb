//! Moyal, ∗₁ and ∗₀ products of polynomials, and the ∗₀ star exponential of a
//! quadratic polynomial in closed form and as a series.

use fockweyl::algebra::{parse_poly_xy, parse_poly_z};
use fockweyl::star::{moyal, star0, star1, star_exp_closed, star_exp_closed_taylor, star_exp_series, QuadraticSpec};
use fockweyl::C64;

fn main() -> fockweyl::Result<()> {
    let lambda = 2.0;
    let x = parse_poly_xy("x1", 1)?;
    let y = parse_poly_xy("y1", 1)?;
    println!("x ∗ y − y ∗ x     = {}", &moyal(&x, &y) - &moyal(&y, &x));
    println!("x ∗₁ y − y ∗₁ x   = {}", &star1(&x, &y, lambda) - &star1(&y, &x, lambda));

    let z = parse_poly_z("z1", 1)?;
    let zb = parse_poly_z("zb1", 1)?;
    println!("z ∗₀ z̄ − z̄ ∗₀ z  = {}", &star0(&z, &zb, lambda) - &star0(&zb, &z, lambda));

    let spec = QuadraticSpec {
        c0: 0.3,
        a: vec![C64::new(0.2, -0.1)],
        b: vec![0.8],
    };
    let at = [C64::new(0.4, 0.3)];
    println!("exp∗₀(P)(z) = {}", star_exp_closed(&spec, &at, lambda)?);
    let series = star_exp_series(&spec.polynomial(), 6, |f, g| star0(f, g, lambda))?;
    let taylor = star_exp_closed_taylor(&spec, &at, lambda, 6)?;
    for (k, t) in taylor.iter().enumerate() {
        println!("  order {k}: series {:.12}  closed {t:.12}", series.coefficients[k].eval(&at));
    }
    Ok(())
}
