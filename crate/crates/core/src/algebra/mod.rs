//! Multi-indices, sparse complex polynomials in `(z, z̄)` or `(x, y)`, and the
//! normal-ordered Weyl algebra of polynomial differential operators.

mod diffop;
mod multi;
mod poly;
mod text;

pub use diffop::{weyl_quantize_poly, weyl_symbol, DiffOp};
pub use multi::{Mono, MultiIndex};
pub use poly::{Poly, PolyXY, PolyZ, Slot, Vars, XYVars, ZVars};
pub use text::{parse_poly_xy, parse_poly_z, JsonTerm};

pub(crate) use multi::factorial as factorial_f64;
pub(crate) use poly::monomial_value as poly_monomial;
