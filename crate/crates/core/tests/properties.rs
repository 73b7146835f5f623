//! Property-based invariants across the expression engine, the Minkowski
//! algebra and the surface geometry.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use thetafam::association::{graph_jacobian, graph_jacobian_factored};
use thetafam::expr::{differentiate, eval, parse, Expr, HolomorphicFn};
use thetafam::geometry::{
    euclidean_weingarten_from, frame_from, gauss_curvature_from, gauss_map_stereo, lambda2_from, lightlike_normals,
    north_stereographic, phi_map, weingarten_from,
};
use thetafam::grid::Rect;
use thetafam::minkowski::{clorentz_dot, lorentz_dot, CVec4, RVec4};
use thetafam::quadrature::{integrate_segment, QuadratureOptions};
use thetafam::weierstrass::{monge_residual, w_vector, Jet, SurfaceData};

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(x, y)| Complex64::new(x, y))
}

fn cvec4() -> impl Strategy<Value = CVec4> {
    [complex(3.0), complex(3.0), complex(3.0), complex(3.0)].prop_map(CVec4)
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        (-20i32..20, -20i32..20).prop_map(|(a, b)| Expr::constant(a as f64 / 10.0, b as f64 / 10.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), -3i32..=3).prop_map(|(a, n)| Expr::powi(a, n)),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(Expr::exp),
            inner.clone().prop_map(Expr::sinh),
            inner.prop_map(Expr::cosh),
        ]
    })
}

/// Max of `|f|` on a circle of radius `r` around `w`, or `None` if `f` fails there.
fn ring_bound(f: &Expr, w: Complex64, r: f64) -> Option<f64> {
    let mut m = eval(f, w).ok()?.norm();
    for k in 0..32 {
        let z = w + Complex64::from_polar(r, k as f64 * PI / 16.0);
        m = m.max(eval(f, z).ok()?.norm());
    }
    Some(m)
}

fn jet(a: Complex64, da: Complex64, mu: Complex64) -> Jet {
    Jet { w: Complex64::new(0.0, 0.0), a, da, mu }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn derivative_matches_finite_difference(f in expr_tree(), w in complex(1.0)) {
        // Cauchy bound on a disc of radius 0.1 controls the O(h²) error
        let m = ring_bound(&f, w, 0.1);
        prop_assume!(m.is_some_and(|m| m < 1e6));
        let m = m.unwrap();
        let df = eval(&differentiate(&f), w);
        prop_assume!(df.is_ok());
        let h = 1e-5;
        let fd = (eval(&f, w + h).unwrap() - eval(&f, w - h).unwrap()) / (2.0 * h);
        prop_assert!((df.unwrap() - fd).norm() <= 1e-5 * (1.0 + m), "{f}: {} vs {fd}", df.unwrap());
    }

    #[test]
    fn cauchy_riemann_holds(f in expr_tree(), w in complex(1.0)) {
        let m = ring_bound(&f, w, 0.1);
        prop_assume!(m.is_some_and(|m| m < 1e6));
        let h = 1e-5;
        let i = Complex64::i();
        let fu = (eval(&f, w + h).unwrap() - eval(&f, w - h).unwrap()) / (2.0 * h);
        let fv = (eval(&f, w + i * h).unwrap() - eval(&f, w - i * h).unwrap()) / (2.0 * h);
        prop_assert!((fu + i * fv).norm() <= 1e-5 * (1.0 + m.unwrap()));
    }

    #[test]
    fn print_then_parse_is_stable(f in expr_tree(), w in complex(1.0)) {
        let printed = f.to_string();
        let back = parse(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        prop_assert_eq!(back.to_string(), parse(&back.to_string()).unwrap().to_string());
        if let (Ok(x), Ok(y)) = (eval(&f, w), eval(&back, w)) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()), "{printed}");
        }
    }

    #[test]
    fn complex_form_is_symmetric_bilinear(u in cvec4(), v in cvec4(), z in cvec4(), al in complex(2.0), be in complex(2.0)) {
        let lhs = clorentz_dot(&(u.scale(al) + v.scale(be)), &z);
        let rhs = al * clorentz_dot(&u, &z) + be * clorentz_dot(&v, &z);
        prop_assert!((lhs - rhs).norm() < 1e-11);
        prop_assert_eq!(clorentz_dot(&u, &v), clorentz_dot(&v, &u));
        let (ur, vr) = (u.re(), v.re());
        prop_assert_eq!(clorentz_dot(&ur.to_complex(), &vr.to_complex()).re, lorentz_dot(&ur, &vr));
    }

    #[test]
    fn w_vector_is_null(a in complex(3.0), b in complex(3.0)) {
        let wv = w_vector(a, b);
        let scale = (1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr());
        prop_assert!(clorentz_dot(&wv, &wv).norm() < 1e-14 * scale);
    }

    #[test]
    fn monge_identities(a in complex(3.0), mu in complex(3.0), theta in 0.0..2.0 * PI) {
        let j = jet(a, Complex64::new(1.0, 0.0), mu);
        let fw = w_vector(a, Complex64::from_polar(1.0, theta) * a).scale(mu);
        let l2 = lambda2_from(&j, theta);
        let (null, conf) = monge_residual(&fw, l2);
        let scale = mu.norm_sqr() * (1.0 + a.norm_sqr()).powi(2);
        prop_assert!(null.norm() < 1e-13 * scale);
        prop_assert!(conf < 1e-13 * scale);
    }

    #[test]
    fn lightlike_normals_pair(a in complex(3.0), theta in 0.0..2.0 * PI) {
        let (l3, l0) = lightlike_normals(a, theta);
        let s = a.norm_sqr();
        let scale = (1.0 + s).powi(2);
        prop_assert!(lorentz_dot(&l3, &l3).abs() < 1e-14 * scale);
        prop_assert!(lorentz_dot(&l0, &l0).abs() < 1e-14 * scale);
        let expect = -2.0 * (1.0 - s * Complex64::from_polar(1.0, -theta)).norm_sqr();
        prop_assert!((lorentz_dot(&l3, &l0) - expect).abs() < 1e-13 * scale);
    }

    #[test]
    fn frame_invariants(a in complex(2.0), da in complex(2.0), mu in complex(2.0), theta in 0.0..2.0 * PI) {
        prop_assume!(mu.norm() > 0.05);
        prop_assume!((1.0 - a.norm_sqr() * Complex64::from_polar(1.0, -theta)).norm() > 0.05);
        let f = frame_from(&jet(a, da, mu), theta).unwrap();
        let r = f.residuals();
        let scale = 1.0 + f.tau[0] * f.tau[0];
        prop_assert!(r.max_inner() < 1e-12 * scale, "{r:?}");
        prop_assert_eq!(r.tau3, 0.0);
        prop_assert_eq!(r.nu0, 0.0);
        prop_assert!(f.tau[0] > 0.0);
    }

    #[test]
    fn gauss_map_recovers_a(a in complex(3.0), mu in complex(2.0)) {
        prop_assume!((a.norm() - 1.0).abs() > 0.05 && mu.norm() > 0.05);
        let f = frame_from(&jet(a, Complex64::new(1.0, 0.0), mu), 0.0).unwrap();
        let z = gauss_map_stereo(&f.tau).unwrap();
        let expect = if a.norm() < 1.0 { a } else { 1.0 / a.conj() };
        prop_assert!((z - expect).norm() < 1e-12 * (1.0 + expect.norm()));
        let nu = phi_map(&f.tau).unwrap();
        prop_assert!(nu[3] < 0.0);
        prop_assert!((lorentz_dot(&nu, &nu) - 1.0).abs() < 1e-12);
        prop_assert!((north_stereographic(&nu) - z).norm() < 1e-12);
    }

    #[test]
    fn weingarten_moduli_are_curvatures(a in complex(3.0), da in complex(2.0), mu in complex(2.0)) {
        prop_assume!((a.norm() - 1.0).abs() > 0.05 && mu.norm() > 0.05);
        let j = jet(a, da, mu);
        let d = weingarten_from(&j).unwrap();
        let k0 = gauss_curvature_from(&j, 0.0);
        prop_assert!((d.eta.norm_sqr() - k0).abs() <= 1e-12 * k0.abs().max(1e-300));
        let l2 = lambda2_from(&j, 0.0);
        prop_assert!((d.omega - d.eta * l2 / 2.0).norm() <= 1e-12 * (1.0 + d.omega.norm()));
        let e = euclidean_weingarten_from(&j).unwrap();
        let kpi = gauss_curvature_from(&j, PI);
        prop_assert!((e.eta.norm_sqr() + kpi).abs() <= 1e-12 * kpi.abs().max(1e-300));
        prop_assert!((e.omega - 2.0 * mu * da).norm() <= 1e-14 * (1.0 + e.omega.norm()));
    }

    #[test]
    fn curvature_sign_law(a in complex(3.0), da in complex(2.0), mu in complex(2.0)) {
        prop_assume!((a.norm() - 1.0).abs() > 1e-3 && mu.norm() > 1e-3);
        let j = jet(a, da, mu);
        prop_assert!(gauss_curvature_from(&j, 0.0) >= 0.0);
        prop_assert!(gauss_curvature_from(&j, PI) <= 0.0);
    }

    #[test]
    fn jacobian_identity(a in complex(3.0), mu in complex(3.0), w in complex(1.0)) {
        let domain = Rect::around(Complex64::new(0.0, 0.0), 2.0);
        let lit = |z: Complex64| format!("({:?}+{:?}i)", z.re, z.im);
        let sd = SurfaceData::new(
            HolomorphicFn::parse(&lit(a)).unwrap(),
            HolomorphicFn::parse(&lit(mu)).unwrap(),
            domain,
            Complex64::new(0.0, 0.0),
            RVec4::ZERO,
            RVec4::ZERO,
        ).unwrap();
        let j = graph_jacobian(&sd, w).unwrap();
        prop_assert_eq!(j.re, 0.0);
        let f = graph_jacobian_factored(&sd, w).unwrap();
        prop_assert!((j - f).norm() <= 1e-13 * (1.0 + f.norm()));
    }

    #[test]
    fn quadrature_is_exact_for_cubics(c in [complex(2.0), complex(2.0), complex(2.0), complex(2.0)], from in complex(2.0), to in complex(2.0)) {
        let p = |w: Complex64| c[0] + w * (c[1] + w * (c[2] + w * c[3]));
        let prim = |w: Complex64| w * (c[0] + w * (c[1] / 2.0 + w * (c[2] / 3.0 + w * c[3] / 4.0)));
        let r = integrate_segment(|w| Ok(CVec4::new(p(w), p(w) * 2.0, -p(w), w)), from, to, QuadratureOptions::default()).unwrap();
        let expect = prim(to) - prim(from);
        prop_assert!((r.value[0] - expect).norm() < 1e-11 * (1.0 + expect.norm()));
        prop_assert!((r.value[3] - (to * to - from * from) / 2.0).norm() < 1e-12 * (1.0 + to.norm_sqr() + from.norm_sqr()));
    }

    #[test]
    fn grid_nodes_pin_corners(u0 in -5.0..5.0f64, du in 0.01..3.0f64, v0 in -5.0..5.0f64, dv in 0.01..3.0f64, nu in 2usize..40, nv in 2usize..40) {
        let r = Rect::new(u0, u0 + du, v0, v0 + dv);
        prop_assert_eq!(r.node(0, 0, nu, nv), Complex64::new(r.u_min, r.v_min));
        prop_assert_eq!(r.node(nu - 1, nv - 1, nu, nv), Complex64::new(r.u_max, r.v_max));
        for i in 0..nu {
            prop_assert!(r.contains(r.node(i, nv / 2, nu, nv)));
        }
    }
}

#[test]
fn pair_residual_is_second_order() {
    use thetafam::association::pair_check_patches;
    use thetafam::scenario::ExampleId;
    let sd = ExampleId::Ex36.config().surface_data().unwrap();
    let rect = sd.domain.inset(0.05);
    let r = |h: f64| pair_check_patches(&sd, 0.0, &sd, PI, rect, 5, 5, h, 1.0).unwrap().max_residual();
    let ratio = r(2e-2) / r(1e-2);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}
