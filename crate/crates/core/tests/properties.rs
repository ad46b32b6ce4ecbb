use fockweyl::algebra::{MultiIndex, Poly, PolyXY, PolyZ, Vars};
use fockweyl::correspondences::{weyl0_apq_closed, weyl0_pi_closed, weyl0_symbol_trace};
use fockweyl::gaussian::GaussianKernelOp;
use fockweyl::group::{GroupElement, WeightSystem};
use fockweyl::orbit::{psi_inverse, psi_map};
use fockweyl::representation::pi_kernel;
use fockweyl::star::{gaussian_star0, moyal, moyal_pl, star0};
use fockweyl::C64;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn ws() -> WeightSystem {
    WeightSystem::new(0.7, vec![vec![0.8, -0.4], vec![0.3, 0.9]], vec![0.5, -0.2]).unwrap()
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(re, im)| C64::new(re, im))
}

fn group_element() -> impl Strategy<Value = GroupElement> {
    (
        prop::collection::vec(-2.0f64..2.0, 2),
        prop::collection::vec(complex(), 2),
        -3.0f64..3.0,
    )
        .prop_map(|(t, z0, c0)| GroupElement::new(t, z0, c0))
}

fn kernel(n: usize, lambda: f64) -> impl Strategy<Value = GaussianKernelOp> {
    (
        complex(),
        prop::collection::vec(complex(), n),
        prop::collection::vec(complex(), n),
        prop::collection::vec(complex(), n * n),
    )
        .prop_map(move |(c, a, b, q)| {
            let q = DMatrix::from_iterator(n, n, q.into_iter().map(|v| v * (0.1 * lambda)));
            GaussianKernelOp::new(c, a, b, q, lambda).unwrap()
        })
}

fn poly<V: Vars>(n: usize) -> impl Strategy<Value = Poly<V>> {
    let exps = prop::collection::vec(0u32..=2, 2 * n);
    prop::collection::vec((exps, complex()), 1..4).prop_map(move |terms| {
        terms.into_iter().fold(Poly::zero(n), |acc, (e, c)| {
            let p = MultiIndex::new(e[..n].to_vec());
            let q = MultiIndex::new(e[n..].to_vec());
            &acc + &Poly::monomial(n, p, q, c)
        })
    })
}

fn scaled_diff<V: Vars>(a: &Poly<V>, b: &Poly<V>) -> f64 {
    a.max_abs_diff(b) / b.max_abs_coeff().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_is_associative(a in group_element(), b in group_element(), c in group_element()) {
        let ws = ws();
        let lhs = ws.multiply(&ws.multiply(&a, &b), &c).coords();
        let rhs = ws.multiply(&a, &ws.multiply(&b, &c)).coords();
        for (x, y) in lhs.iter().zip(&rhs) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }

    #[test]
    fn pi_is_a_homomorphism(g in group_element(), h in group_element()) {
        let ws = ws();
        let prod = pi_kernel(&g, &ws).compose(&pi_kernel(&h, &ws)).unwrap();
        prop_assert!(prod.param_distance(&pi_kernel(&ws.multiply(&g, &h), &ws)) < 1e-10);
    }

    #[test]
    fn kernel_composition_is_associative(a in kernel(2, 0.7), b in kernel(2, 0.7), c in kernel(2, 0.7)) {
        let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
        let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(lhs.param_distance(&rhs) < 1e-10);
    }

    #[test]
    fn trace_is_cyclic_and_adjoint_conjugates(a in kernel(1, 1.3), b in kernel(1, 1.3)) {
        let ab = a.compose(&b).unwrap().trace().unwrap();
        let ba = b.compose(&a).unwrap().trace().unwrap();
        prop_assert!((ab - ba).norm() <= 1e-10 * ab.norm().max(1.0));
        let ta = a.trace().unwrap();
        prop_assert!((a.adjoint().trace().unwrap() - ta.conj()).norm() <= 1e-12 * ta.norm().max(1.0));
        prop_assert!(a.adjoint().adjoint().param_distance(&a) == 0.0);
    }

    #[test]
    fn weyl0_of_adjoint_is_conjugate(a in kernel(2, 0.7), z in prop::collection::vec(complex(), 2)) {
        let w = weyl0_symbol_trace(&a, &z).unwrap();
        let wa = weyl0_symbol_trace(&a.adjoint(), &z).unwrap();
        prop_assert!((wa - w.conj()).norm() <= 1e-10 * w.norm().max(1.0));
    }

    #[test]
    fn weyl0_on_pi_matches_trace_form(g in group_element(), z in prop::collection::vec(complex(), 2)) {
        let ws = ws();
        // Skip the measure-zero set where the closed form is undefined.
        if let Ok(closed) = weyl0_pi_closed(&g, &z, &ws) {
            let trace = weyl0_symbol_trace(&pi_kernel(&g, &ws), &z).unwrap();
            prop_assert!((trace - closed).norm() <= 1e-8 * closed.norm().max(1.0));
        }
    }

    #[test]
    fn apq_symbols_reflect(p in prop::collection::vec(0u32..=3, 1), q in prop::collection::vec(0u32..=3, 1), z in complex(), lambda in 0.5f64..2.0) {
        let (p, q) = (MultiIndex::new(p), MultiIndex::new(q));
        let w = weyl0_apq_closed(&p, &q, lambda).eval(&[z]);
        let swapped = weyl0_apq_closed(&q, &p, lambda).eval(&[z]);
        let factor = (2.0 / lambda).powi(p.degree() as i32 - q.degree() as i32);
        prop_assert!((w.conj() - swapped * factor).norm() <= 1e-10 * w.norm().max(1.0));
    }

    #[test]
    fn psi_chart_round_trips(z in prop::collection::vec(complex(), 2), g in group_element()) {
        let ws = ws();
        let back = psi_inverse(&psi_map(&z, &ws), &ws).unwrap();
        for (a, b) in back.iter().zip(&z) {
            prop_assert!((a - b).norm() < 1e-14);
        }
        let moved = ws.coadjoint(&g, &psi_map(&z, &ws));
        prop_assert!(psi_inverse(&moved, &ws).is_ok());
    }

    #[test]
    fn moyal_is_associative(f in poly::<fockweyl::algebra::XYVars>(1), g in poly(1), h in poly(1)) {
        let (f, g, h): (PolyXY, PolyXY, PolyXY) = (f, g, h);
        prop_assert!(scaled_diff(&moyal(&moyal(&f, &g), &h), &moyal(&f, &moyal(&g, &h))) < 1e-12);
    }

    #[test]
    fn moyal_terms_alternate(f in poly::<fockweyl::algebra::XYVars>(2), g in poly(2), l in 0u32..5) {
        let (f, g): (PolyXY, PolyXY) = (f, g);
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(scaled_diff(&moyal_pl(&f, &g, l), &moyal_pl(&g, &f, l).scale(C64::new(sign, 0.0))) < 1e-12);
    }

    #[test]
    fn star0_is_associative(f in poly::<fockweyl::algebra::ZVars>(1), g in poly(1), h in poly(1), lambda in 0.5f64..2.0) {
        let (f, g, h): (PolyZ, PolyZ, PolyZ) = (f, g, h);
        let lhs = star0(&star0(&f, &g, lambda), &h, lambda);
        let rhs = star0(&f, &star0(&g, &h, lambda), lambda);
        prop_assert!(scaled_diff(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn gaussian_star0_is_symmetric(u in 0.05f64..2.0, v in 0.05f64..2.0, lambda in 0.5f64..2.0) {
        let (pa, ea) = gaussian_star0(&[C64::new(u, 0.0)], &[C64::new(v, 0.0)], lambda).unwrap();
        let (pb, eb) = gaussian_star0(&[C64::new(v, 0.0)], &[C64::new(u, 0.0)], lambda).unwrap();
        prop_assert!((pa - pb).norm() < 1e-14);
        prop_assert!((ea[0] - eb[0]).norm() < 1e-14);
        prop_assert!(pa.re > 0.0 && pa.re <= 1.0);
    }
}
