use ds3kg::fields::{cocycle, FieldConfig, PhysParams};
use ds3kg::geometry::{chart_for, killing_residual, pushforward_residual, table2_fields};
use ds3kg::lie::{catalog_at, coboundary_solve, fchange, so13_algebra, subalgebra, Cocycle};
use ds3kg::specfun::{bessel_j_jet, hyp2f1_derivs, kummer_m_derivs, legendre_p_jet, tricomi_u_derivs};
use ds3kg::{Case, CaseId, Complex64 as C, Error, Jet};
use proptest::prelude::*;

fn case_of(k: usize) -> Case {
    let id = CaseId::ALL[k % CaseId::ALL.len()];
    Case::new(id, if id.is_family() { Some(1.0) } else { None }).unwrap()
}

fn in_box(case: Case, u: [f64; 3]) -> [f64; 3] {
    let dom = chart_for(case).domain;
    std::array::from_fn(|i| {
        let (lo, hi) = dom[i];
        let w = hi - lo;
        lo + 0.05 * w + 0.9 * w * u[i]
    })
}

fn cplx() -> impl Strategy<Value = C> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C::new(a, b))
}

fn rel(res: C, terms: &[C]) -> f64 {
    res.norm() / (1e-300 + terms.iter().map(|t| t.norm()).sum::<f64>())
}

fn unit3() -> impl Strategy<Value = [f64; 3]> {
    [0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_exp_ln_roundtrip(re in 0.2..3.0f64, im in -2.0..2.0f64) {
        let x = Jet::var(0, C::new(re, im));
        let y = x.ln().exp();
        prop_assert!((y.value() - x.value()).norm() < 1e-13);
        prop_assert!((y.d1(0) - C::new(1.0, 0.0)).norm() < 1e-13);
        prop_assert!(y.d2(0, 0).norm() < 1e-12);
    }

    #[test]
    fn jet_pythagoras_and_chain_rule(z in cplx(), w in cplx()) {
        let x = Jet::var(0, z);
        let y = Jet::var(1, w);
        let one = x.sin() * x.sin() + x.cos() * x.cos();
        prop_assert!((one.value() - 1.0).norm() < 1e-12);
        prop_assert!(one.d1(0).norm() < 1e-12 && one.d2(0, 0).norm() < 1e-11);
        // d/dx sin(x y) = y cos(x y), d^2/dx dy = cos(x y) - x y sin(x y)
        let f = (x * y).sin();
        let xy = z * w;
        prop_assert!((f.d1(0) - w * xy.cos()).norm() < 1e-11 * (1.0 + xy.cos().norm() * w.norm()));
        let want = xy.cos() - xy * xy.sin();
        prop_assert!((f.d2(0, 1) - want).norm() < 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn catalog_is_a_family_of_subalgebras(a in 0.1..5.0f64) {
        let amb = so13_algebra();
        for spec in catalog_at(a).unwrap() {
            prop_assert!(spec.algebra.antisymmetry_residual() < 1e-14);
            prop_assert!(spec.algebra.jacobi_residual() < 1e-12);
            let rep = spec.closure_check(&amb).unwrap();
            prop_assert!(rep.span_residual < 1e-12, "span {}", rep.span_residual);
            prop_assert!(rep.structure_residual < 1e-12, "structure {}", rep.structure_residual);
        }
    }

    #[test]
    fn charts_land_on_hyperboloid(k in 0usize..13, u in unit3()) {
        let case = case_of(k);
        let xi = in_box(case, u);
        prop_assert!(chart_for(case).map(xi).hyperboloid_residual() < 1e-12);
        for a in 0..case.dim() {
            match pushforward_residual(case, a, xi) {
                Ok(r) => prop_assert!(r < 1e-10, "{} X{} at {:?}: {}", case.id, a, xi, r),
                Err(Error::RankDeficient(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn table_fields_are_killing(k in 0usize..13, u in unit3()) {
        let case = case_of(k);
        let chart = chart_for(case);
        let xi = in_box(case, u);
        let g = chart.induced_metric(xi).unwrap();
        let scale = g.g.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for f in table2_fields(case) {
            prop_assert!(killing_residual(&chart, &f, xi) < 1e-9 * scale);
        }
    }

    #[test]
    fn shifting_chi_changes_cocycle_by_a_coboundary(k in 0usize..13, lam in prop::collection::vec(-3.0..3.0f64, 4)) {
        let alg = subalgebra(case_of(k)).algebra;
        let n = alg.dim;
        let shifted = fchange(&alg, &Cocycle::zero(n), &lam[..n]);
        prop_assert!(shifted.antisymmetry_residual() < 1e-15);
        prop_assert!(shifted.cocycle_residual(&alg) < 1e-12);
        prop_assert!(coboundary_solve(&alg, &shifted).is_some());
    }

    #[test]
    fn g32_central_charge_survives_shifts(mu in 0.1..3.0f64, lam in prop::collection::vec(-3.0..3.0f64, 3)) {
        let params = PhysParams { mu, ..PhysParams::default() };
        let cfg = FieldConfig::new(Case::plain(CaseId::G32), params).unwrap();
        let c = cocycle(&cfg).unwrap();
        let alg = cfg.algebra();
        let shifted = fchange(&alg, &c, &lam);
        prop_assert!(coboundary_solve(&alg, &shifted).is_none());
        prop_assert!((shifted.get(0, 1) - mu).abs() < 1e-10);
    }

    #[test]
    fn kummer_and_tricomi_solve_kummer_equation(a in cplx(), bre in 0.3..3.0f64, bim in -1.0..1.0f64, zr in 0.2..5.0f64, zi in -3.0..3.0f64) {
        let (b, z) = (C::new(bre, bim), C::new(zr, zi));
        for d in [kummer_m_derivs(a, b, z).unwrap(), tricomi_u_derivs(a, b, z).unwrap()] {
            let t = [z * d[2], (b - z) * d[1], -a * d[0]];
            prop_assert!(rel(t[0] + t[1] + t[2], &t) < 1e-9, "{:?}", d);
        }
    }

    #[test]
    fn gauss_hypergeometric_solves_its_equation(a in cplx(), b in cplx(), cre in 0.3..3.0f64, zr in -0.8..0.8f64, zi in -0.5..0.5f64) {
        let (c, z) = (C::new(cre, 0.2), C::new(zr, zi));
        let d = hyp2f1_derivs(a, b, c, z).unwrap();
        let t = [z * (1.0 - z) * d[2], (c - (a + b + 1.0) * z) * d[1], -a * b * d[0]];
        prop_assert!(rel(t[0] + t[1] + t[2], &t) < 1e-9);
    }

    #[test]
    fn bessel_solves_bessel_equation(nu in cplx(), zr in 0.3..6.0f64, zi in -2.0..2.0f64) {
        let z = C::new(zr, zi);
        let j = bessel_j_jet(nu, &Jet::var(0, z)).unwrap();
        let t = [z * z * j.d2(0, 0), z * j.d1(0), (z * z - nu * nu) * j.value()];
        prop_assert!(rel(t[0] + t[1] + t[2], &t) < 1e-9);
    }

    #[test]
    fn legendre_solves_legendre_equation(nu in cplx(), sigma in cplx(), x in -0.9..0.9f64) {
        let xc = C::new(x, 0.0);
        let p = legendre_p_jet(nu, sigma, &Jet::var(0, xc)).unwrap();
        let om = 1.0 - xc * xc;
        let t = [om * p.d2(0, 0), -2.0 * xc * p.d1(0), (nu * (nu + 1.0) - sigma * sigma / om) * p.value()];
        prop_assert!(rel(t[0] + t[1] + t[2], &t) < 1e-9);
    }
}
