//! Acceptance suite: one line per criterion, nonzero exit on any failure that
//! is not listed in `ALLOWED_FAILURES`.

use ds3kg::fields::{cocycle, field_residuals, table3_row, FieldConfig, Perturbation, PhysParams};
use ds3kg::geometry::{chart_for, pushforward_residual, rep_commutator_residual, so12};
use ds3kg::integrate::{default_solve_setup, end_to_end, lambda_rep};
use ds3kg::lie::{coboundary_solve, fchange, subalgebra, Cocycle, LieAlgebra};
use ds3kg::operators::{
    chart_probes, commutation_table_fit, kg_agreement, printed_symmetry_ops, probe_functions, symmetry_check,
    symmetry_ops,
};
use ds3kg::specfun::*;
use ds3kg::{Case, CaseId, Complex64 as C, Jet};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Criteria whose failure is a documented defect of the printed reference data.
const ALLOWED_FAILURES: &[(u32, &str)] =
    &[(1, "printed G41 row (5,3,1,3,0) contradicts the algebra; computed (5,1,2,0,1), see README")];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn case(id: CaseId, a: f64) -> Case {
    Case::new(id, if id.is_family() { Some(a) } else { None }).unwrap()
}

fn cfg_with(id: CaseId, a: f64, params: PhysParams) -> FieldConfig {
    FieldConfig::new(case(id, a), params).unwrap()
}

fn cfg(id: CaseId) -> FieldConfig {
    cfg_with(id, 1.0, PhysParams::default())
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

// ---------------------------------------------------------------- 1

/// Rank-based index of the centrally extended algebra, independent of the library.
fn oracle_index(alg: &LieAlgebra, coc: &Cocycle, rng: &mut ChaCha8Rng) -> usize {
    let n = alg.dim;
    let mut best = 0;
    for _ in 0..20 {
        let f: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = DMatrix::from_fn(n + 1, n + 1, |a, b| {
            if a == n || b == n {
                0.0
            } else {
                (0..n).map(|k| alg.c(a, b, k) * f[k]).sum::<f64>() + coc.get(a, b) * f[n]
            }
        });
        let sv = m.singular_values();
        let smax = sv.max().max(1e-300);
        best = best.max(sv.iter().filter(|s| **s > 1e-9 * smax).count());
    }
    n + 1 - best
}

fn printed_table3(id: CaseId) -> (usize, usize, usize, usize, i64, bool) {
    match id.dim() {
        1 => (2, 2, 0, 1, 2, false),
        2 => (3, 1, 1, 0, 2, false),
        3 => (4, 2, 1, 1, 1, true),
        _ => (5, 3, 1, 3, 0, true),
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    let mut unexpected = Vec::new();
    for id in CaseId::ALL {
        for a in if id.is_family() { vec![0.5, 1.0, 2.0] } else { vec![1.0] } {
            let cf = cfg_with(id, a, PhysParams::default());
            let t = table3_row(&cf).unwrap();
            let got = (t.dim, t.ind, t.s, t.l, t.m_tilde, t.integrable);
            let coc = cocycle(&cf).unwrap();
            let ind = oracle_index(&cf.algebra(), &coc, &mut rng);
            if ind != t.ind || t.dim != cf.dim() + 1 {
                unexpected.push(format!("{id}: library ind {} vs oracle {ind}", t.ind));
            }
            if got != printed_table3(id) {
                mismatches.push(format!("{id} computed {got:?}"));
                if id != CaseId::G41 || got != (5, 1, 2, 0, 1, true) {
                    unexpected.push(format!("{id} computed {got:?}"));
                }
            }
        }
    }
    if !unexpected.is_empty() {
        return ok(false, format!("unexpected: {}", unexpected.join("; ")));
    }
    ok(mismatches.is_empty(), if mismatches.is_empty() { "all 13 rows match".into() } else { mismatches.join("; ") })
}

// ---------------------------------------------------------------- 2

/// so(1,3) generator J_ij as the matrix of a linear vector field.
fn j_matrix(i: usize, j: usize) -> DMatrix<f64> {
    let eta = [1.0, -1.0, -1.0, -1.0];
    let mut m = DMatrix::zeros(4, 4);
    m[(j, i)] = eta[i];
    m[(i, j)] = -eta[j];
    m
}

fn field_matrix(coeffs: &[f64; 6]) -> DMatrix<f64> {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    pairs.iter().zip(coeffs).fold(DMatrix::zeros(4, 4), |acc, (&(i, j), &v)| acc + j_matrix(i, j) * v)
}

fn printed_table1(id: CaseId, a: f64) -> Vec<(usize, usize, usize, f64)> {
    use CaseId::*;
    match id {
        G23 => vec![(0, 1, 0, -1.0)],
        G31 => vec![(0, 2, 0, -1.0), (1, 2, 1, -1.0)],
        G32 => vec![(0, 2, 1, 1.0), (1, 2, 0, -1.0)],
        G33a => vec![(0, 2, 1, 1.0), (0, 2, 0, -a), (1, 2, 0, -1.0), (1, 2, 1, -a)],
        G34 => vec![(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, 1.0)],
        G35 => vec![(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 0, -1.0)],
        G41 => vec![(0, 2, 1, 1.0), (0, 3, 0, -1.0), (1, 2, 0, -1.0), (1, 3, 1, -1.0)],
        _ => vec![],
    }
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for id in CaseId::ALL {
        for a in if id.is_family() { vec![0.5, 1.0, 2.0] } else { vec![1.0] } {
            let spec = subalgebra(case(id, a));
            let n = spec.dim();
            let expected = LieAlgebra::from_brackets(n, &printed_table1(id, a));
            let mats: Vec<DMatrix<f64>> = spec.generator_coeffs.iter().map(field_matrix).collect();
            let basis = DMatrix::from_fn(16, n, |r, k| mats[k][(r / 4, r % 4)]);
            let svd = basis.clone().svd(true, true);
            for x in 0..n {
                for y in 0..n {
                    // vector-field bracket of linear fields X = Mx, Y = Nx is (NM - MN)x
                    let br = &mats[y] * &mats[x] - &mats[x] * &mats[y];
                    let rhs = DMatrix::from_fn(16, 1, |r, _| br[(r / 4, r % 4)]);
                    let sol = svd.solve(&rhs, 1e-14).unwrap();
                    worst = worst.max((&basis * &sol - &rhs).amax());
                    for k in 0..n {
                        worst = worst.max((sol[k] - expected.c(x, y, k)).abs());
                    }
                }
            }
            worst = worst.max(spec.algebra.max_abs_diff(&expected));
            rows += 1;
        }
    }
    ok(worst < 1e-12, format!("{rows} rows, max coefficient residual {worst:.2e}"))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let (mut hyp, mut push): (f64, f64) = (0.0, 0.0);
    let mut failures = 0;
    for (k, id) in CaseId::ALL.into_iter().enumerate() {
        let cs = case(id, 1.0);
        let chart = chart_for(cs);
        for xi in chart.sample_points(1000 + k as u64, 1000, 0.0) {
            hyp = hyp.max(chart.map(xi).hyperboloid_residual());
            for g in 0..cs.dim() {
                match pushforward_residual(cs, g, xi) {
                    Ok(r) => push = push.max(r),
                    Err(_) => failures += 1,
                }
            }
        }
    }
    ok(
        hyp < 1e-12 && push < 1e-10 && failures == 0,
        format!("13 charts x 1000 points: hyperboloid {hyp:.2e}, pushforward {push:.2e}, rank failures {failures}"),
    )
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut gen, mut restr): (f64, f64) = (0.0, 0.0);
    let g35 = chart_for(Case::plain(CaseId::G35));
    for _ in 0..500 {
        let (q1, q2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-1.5..1.5));
        let (t1, t2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = so12::rectified(q1, q2, t1, t2);
        let b = so12::closed_form(q1, q2, t1, t2);
        let scale = 1.0 + b.x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        gen = gen.max(a.x.iter().zip(b.x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale);
        let u = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        let r = so12::restricted(q1, q2, u);
        let want = g35.map([q1, q2, u]);
        restr = restr.max(r.x.iter().zip(want.x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max));
        restr = restr.max(r.hyperboloid_residual());
    }
    let hom = rep_commutator_residual(&so12::rho(), &so12::primed_algebra());
    ok(
        gen < 1e-12 && restr < 1e-12 && hom < 1e-14,
        format!("general chart {gen:.2e}, restricted vs G35 chart {restr:.2e}, rho homomorphism {hom:.1e}"),
    )
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let mut clean: f64 = 0.0;
    let mut weakest_chi = f64::INFINITY;
    let mut weakest_form = f64::INFINITY;
    for id in CaseId::ALL {
        let cf = cfg(id);
        let probes = cf.probes(5, 100);
        let r = field_residuals(&cf, &probes);
        clean = clean.max(r.max());
        let chi = field_residuals(&cf.clone().with_perturbation(Perturbation::Chi(1e-3)), &probes);
        weakest_chi = weakest_chi.min(chi.eqchi);
        let form = field_residuals(&cf.with_perturbation(Perturbation::Form(1e-3)), &probes);
        weakest_form = weakest_form.min(form.lie_f.max(form.closedness));
    }
    ok(
        clean < 1e-10 && weakest_chi >= 5e-4 && weakest_form >= 5e-4,
        format!("clean max {clean:.2e}; weakest detection chi {weakest_chi:.2e}, form {weakest_form:.2e}"),
    )
}

// ---------------------------------------------------------------- 6

type Brackets = Vec<(usize, usize, usize, f64)>;

fn printed_hat(id: CaseId, a: f64, mu: f64) -> (Brackets, Vec<(usize, usize, f64)>) {
    use CaseId::*;
    match id {
        G21 | G22 => (vec![], vec![(0, 1, mu)]),
        G23 => (vec![(0, 1, 0, -1.0)], vec![]),
        G31 => (vec![(0, 2, 0, -1.0), (1, 2, 1, -1.0)], vec![]),
        G32 => (vec![(0, 2, 1, 1.0), (1, 2, 0, -1.0)], vec![(0, 1, mu)]),
        G33a => (vec![(0, 2, 1, 1.0), (0, 2, 0, -a), (1, 2, 0, -1.0), (1, 2, 1, -a)], vec![]),
        G34 => (vec![(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)], vec![]),
        G35 => (vec![(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 0, 1.0)], vec![]),
        G41 => (vec![(0, 2, 1, 1.0), (0, 3, 0, -1.0), (1, 2, 0, -1.0), (1, 3, 1, -1.0)], vec![]),
        _ => (vec![], vec![]),
    }
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut fit_res: f64 = 0.0;
    let mut charge: f64 = 0.0;
    for id in CaseId::ALL {
        for mu in [0.5, 1.0, 2.0] {
            let params = PhysParams { mu, ..PhysParams::default() };
            let cf = cfg_with(id, 1.0, params);
            let central = c(0.0, params.e);
            let probes = chart_probes(&cf, 6, 12);
            let (br, cc) = printed_hat(id, 1.0, mu);
            let alg = LieAlgebra::from_brackets(cf.dim(), &br);
            let coc = Cocycle::from_entries(cf.dim(), &cc);
            let mut sets = vec![symmetry_ops(&cf)];
            if let Ok(p) = printed_symmetry_ops(&cf) {
                sets.push(p);
            }
            for ops in sets {
                let fit = commutation_table_fit(&ops, &probes, central);
                fit_res = fit_res.max(fit.residual);
                worst = worst.max(fit.algebra.max_abs_diff(&alg)).max(fit.cocycle.max_abs_diff(&coc));
                if id == CaseId::G32 {
                    charge = charge.max((fit.cocycle.get(0, 1) - mu).abs());
                }
            }
        }
    }
    ok(
        worst < 1e-9 && fit_res < 1e-9 && charge < 1e-9,
        format!("table deviation {worst:.2e}, fit residual {fit_res:.2e}, G32 central charge vs mu {charge:.2e}"),
    )
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let mut sym: f64 = 0.0;
    let mut agree: f64 = 0.0;
    for id in CaseId::INTEGRABLE3 {
        let cf = cfg(id);
        sym = sym.max(symmetry_check(&cf).max_residual);
        let funcs = probe_functions(7, 5);
        agree = agree.max(kg_agreement(&cf, &funcs, &cf.probes(8, 50)).unwrap());
    }
    ok(sym < 1e-8 && agree < 1e-10, format!("[H, X_A] {sym:.2e}, display vs Laplace-Beltrami {agree:.2e}"))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for id in CaseId::INTEGRABLE3 {
        for j in [0.5, 1.0] {
            let cf = cfg(id);
            let rep = lambda_rep(&cf, j).unwrap();
            worst = worst.max(rep.residual(&cf).unwrap());
        }
    }
    ok(worst < 1e-10, format!("max commutator residual {worst:.2e}"))
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let params = PhysParams { e: 0.1, m: 0.5, zeta: 0.0, mu: 0.3, mu1: 0.3, mu2: 0.3 };
    let mut parts = Vec::new();
    let mut pass = true;
    for id in CaseId::INTEGRABLE3 {
        let cf = cfg_with(id, 1.0, params);
        let (grid, lambda) = default_solve_setup(id).unwrap();
        let mut worst: f64 = 0.0;
        for which in [1, 2] {
            let run = end_to_end(&cf, 1.0, lambda, &grid, which).unwrap();
            pass &= run.dropped == 0 && run.samples.len() == 1000;
            worst = worst.max(run.max_residual);
        }
        pass &= worst < 1e-6;
        parts.push(format!("{id} {worst:.1e}"));
    }
    ok(pass, parts.join(", "))
}

// ---------------------------------------------------------------- 10

type Eval = Box<dyn Fn(C) -> [C; 3]>;

struct Oracle {
    name: String,
    /// w'' + P w' + Q w = 0
    p: Box<dyn Fn(C) -> C>,
    q: Box<dyn Fn(C) -> C>,
    eval: Eval,
    /// Straight-line path endpoints.
    path: (C, C),
}

fn jet3(f: impl Fn(&Jet) -> ds3kg::Result<Jet> + 'static) -> Eval {
    Box::new(move |z| {
        let y = f(&Jet::var(0, z)).unwrap();
        [y.value(), y.d1(0), y.d2(0, 0)]
    })
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64, im: f64) -> C {
    c(rng.gen_range(lo..hi), rng.gen_range(-im..im))
}

fn oracles(rng: &mut ChaCha8Rng) -> Vec<Oracle> {
    let mut out = Vec::new();
    let mut rc = |lo: f64, hi: f64, im: f64| draw(rng, lo, hi, im);
    for k in 0..6 {
        // right half plane path for the confluent and Bessel families
        let path = (rc(0.3, 2.5, 2.0), rc(0.3, 2.5, 2.0));
        let (a, b) = (rc(-1.5, 1.5, 1.0), rc(0.4, 2.5, 1.0));
        out.push(Oracle {
            name: format!("M({a:.2},{b:.2})"),
            p: Box::new(move |z| (b - z) / z),
            q: Box::new(move |z| -a / z),
            eval: Box::new(move |z| kummer_m_derivs(a, b, z).unwrap()),
            path,
        });
        // integer b on every other draw exercises the degenerate branch of U
        let bu = if k % 2 == 0 { c((k / 2 + 1) as f64, 0.0) } else { b };
        out.push(Oracle {
            name: format!("U({a:.2},{bu:.2})"),
            p: Box::new(move |z| (bu - z) / z),
            q: Box::new(move |z| -a / z),
            eval: Box::new(move |z| tricomi_u_derivs(a, bu, z).unwrap()),
            path,
        });
        let (al, be) = (rc(-1.0, 1.0, 1.0), rc(0.1, 1.2, 0.8));
        let be = if k == 3 { c(0.5, 0.0) } else { be };
        let wq = move |z: C| -0.25 + al / z + (0.25 - be * be) / (z * z);
        out.push(Oracle {
            name: format!("WhittakerM({al:.2},{be:.2})"),
            p: Box::new(|_| c(0.0, 0.0)),
            q: Box::new(wq),
            eval: jet3(move |z| whittaker_m_jet(al, be, z)),
            path,
        });
        out.push(Oracle {
            name: format!("WhittakerW({al:.2},{be:.2})"),
            p: Box::new(|_| c(0.0, 0.0)),
            q: Box::new(wq),
            eval: jet3(move |z| whittaker_w_jet(al, be, z)),
            path,
        });
        let nu = if k < 2 { c(k as f64, 0.0) } else { rc(0.0, 2.0, 1.0) };
        let bq = move |z: C| 1.0 - nu * nu / (z * z);
        out.push(Oracle {
            name: format!("J({nu:.2})"),
            p: Box::new(|z| 1.0 / z),
            q: Box::new(bq),
            eval: jet3(move |z| bessel_j_jet(nu, z)),
            path,
        });
        out.push(Oracle {
            name: format!("Y({nu:.2})"),
            p: Box::new(|z| 1.0 / z),
            q: Box::new(bq),
            eval: jet3(move |z| bessel_y_jet(nu, z)),
            path,
        });
        // path inside |z| < 0.85 for 2F1
        let disk = |z: C| z / (1.0 + z.norm()) * 0.85;
        let hpath = (disk(rc(-1.0, 1.0, 1.0)), disk(rc(-1.0, 1.0, 1.0)));
        let (ha, hb, hc) = (rc(-1.5, 1.5, 1.0), rc(-1.5, 1.5, 1.0), rc(0.5, 2.5, 1.0));
        out.push(Oracle {
            name: format!("2F1({ha:.2},{hb:.2};{hc:.2})"),
            p: Box::new(move |z| (hc - (ha + hb + 1.0) * z) / (z * (1.0 - z))),
            q: Box::new(move |z| -ha * hb / (z * (1.0 - z))),
            eval: Box::new(move |z| hyp2f1_derivs(ha, hb, hc, z).unwrap()),
            path: hpath,
        });
        // real segment of (-1, 1) for Ferrers functions
        let lpath = (c(rc(-0.9, 0.9, 1.0).re, 0.0), c(rc(-0.9, 0.9, 1.0).re, 0.0));
        let lnu = if k == 0 { c(1.0, 0.0) } else { rc(-0.5, 2.0, 1.0) };
        let sg = if k == 1 { c(1.0, 0.0) } else { rc(0.0, 1.5, 1.0) };
        let lp = |x: C| -2.0 * x / (1.0 - x * x);
        let lq = move |x: C| (lnu * (lnu + 1.0) - sg * sg / (1.0 - x * x)) / (1.0 - x * x);
        out.push(Oracle {
            name: format!("P({lnu:.2},{sg:.2})"),
            p: Box::new(lp),
            q: Box::new(lq),
            eval: jet3(move |x| legendre_p_jet(lnu, sg, x)),
            path: lpath,
        });
        out.push(Oracle {
            name: format!("Q({lnu:.2},{sg:.2})"),
            p: Box::new(lp),
            q: Box::new(lq),
            eval: jet3(move |x| legendre_q_jet(lnu, sg, x)),
            path: lpath,
        });
    }
    out
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ode_worst: (f64, String) = (0.0, String::new());
    let mut rk_worst: (f64, String) = (0.0, String::new());
    let all = oracles(&mut rng);
    for o in &all {
        let (z0, z1) = o.path;
        let h = z1 - z0;
        for k in 0..=10 {
            let z = z0 + h * (k as f64 / 10.0);
            let w = (o.eval)(z);
            let terms = [w[2], (o.p)(z) * w[1], (o.q)(z) * w[0]];
            let s: f64 = terms.iter().map(|t| t.norm()).sum();
            let r = (terms[0] + terms[1] + terms[2]).norm() / s.max(1e-300);
            if r > ode_worst.0 {
                ode_worst = (r, o.name.clone());
            }
        }
        let w0 = (o.eval)(z0);
        let pf = |t: f64| h * (o.p)(z0 + h * t);
        let qf = |t: f64| h * h * (o.q)(z0 + h * t);
        let cfg = OdeConfig { rtol: 1e-12, atol: 1e-14, ..OdeConfig::default() };
        let sol = ode_integrate(&pf, &qf, 0.0, w0[0], h * w0[1], &[1.0], &cfg).unwrap();
        let (f1, df1) = sol.eval(1.0).unwrap();
        let w1 = (o.eval)(z1);
        let scale = 1.0 + w1[0].norm() + (h * w1[1]).norm();
        let r = ((f1 - w1[0]).norm() + (df1 - h * w1[1]).norm()) / scale;
        if r > rk_worst.0 {
            rk_worst = (r, o.name.clone());
        }
    }
    // gamma: recurrence, reflection and reciprocal
    let mut g: f64 = 0.0;
    for _ in 0..50 {
        let z = c(rng.gen_range(-4.0..6.0), rng.gen_range(-3.0..3.0));
        let gz = gamma(z).unwrap();
        g = g.max((gamma(z + 1.0).unwrap() - z * gz).norm() / (1.0 + (z * gz).norm()));
        let refl = gz * gamma(1.0 - z).unwrap() * (std::f64::consts::PI * z).sin();
        g = g.max((refl - std::f64::consts::PI).norm() / std::f64::consts::PI);
        g = g.max((rgamma(z) * gz - 1.0).norm());
    }
    ok(
        ode_worst.0 < 1e-8 && rk_worst.0 < 1e-7 && g < 1e-12,
        format!(
            "{} evaluators: ODE residual {:.1e} ({}), RK cross-check {:.1e} ({}), gamma identities {g:.1e}",
            all.len(),
            ode_worst.0,
            ode_worst.1,
            rk_worst.0,
            rk_worst.1
        ),
    )
}

// ---------------------------------------------------------------- 11

fn criterion_11() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for mu in [0.5, 1.0, 2.0] {
        let cf = cfg_with(CaseId::G32, 1.0, PhysParams { mu, ..PhysParams::default() });
        pass &= coboundary_solve(&cf.algebra(), &cocycle(&cf).unwrap()).is_none();
    }
    let cf0 = cfg_with(CaseId::G32, 1.0, PhysParams { mu: 0.0, ..PhysParams::default() });
    pass &= coboundary_solve(&cf0.algebra(), &cocycle(&cf0).unwrap()).is_some();
    notes.push(format!("G32 nontrivial for mu != 0, trivial for mu = 0: {pass}"));
    for id in [CaseId::G34, CaseId::G35] {
        let cf = cfg(id);
        let t = coboundary_solve(&cf.algebra(), &cocycle(&cf).unwrap()).is_some();
        pass &= t;
        notes.push(format!("{id} trivial: {t}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut law: f64 = 0.0;
    for k in 0..20 {
        let id = CaseId::ALL[k % CaseId::ALL.len()];
        let cf = cfg(id);
        let base = cocycle(&cf).unwrap();
        let shift: Vec<f64> = (0..cf.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let shifted = cocycle(&cf.clone().with_chi_shift(shift.clone())).unwrap();
        law = law.max(shifted.max_abs_diff(&fchange(&cf.algebra(), &base, &shift)));
    }
    pass &= law < 1e-13;
    notes.push(format!("Fchange law over 20 shifts {law:.1e}"));
    ok(pass, notes.join("; "))
}

fn main() {
    type Crit = (u32, &'static str, fn() -> Outcome, u64);
    let criteria: [Crit; 11] = [
        (1, "integrability table", criterion_1, 5),
        (2, "subalgebra closure", criterion_2, 5),
        (3, "chart validity", criterion_3, 30),
        (4, "rectification", criterion_4, 5),
        (5, "field invariance", criterion_5, 30),
        (6, "symmetry algebras", criterion_6, 60),
        (7, "symmetry of H", criterion_7, 120),
        (8, "lambda-representations", criterion_8, 60),
        (9, "end-to-end solutions", criterion_9, 600),
        (10, "special-function oracles", criterion_10, 60),
        (11, "cocycle theory", criterion_11, 30),
    ];
    let mut hard_failures = 0;
    for (n, name, f, budget) in criteria {
        let t = Instant::now();
        let out = f();
        let dt = t.elapsed();
        let in_time = dt < Duration::from_secs(budget);
        let pass = out.pass && in_time;
        let allowed = ALLOWED_FAILURES.iter().find(|(k, _)| *k == n);
        let verdict = match (pass, allowed) {
            (true, _) => "PASS".to_string(),
            (false, Some((_, why))) => format!("FAIL (allowed: {why})"),
            (false, None) => {
                hard_failures += 1;
                "FAIL".to_string()
            }
        };
        println!(
            "acceptance {n:>2} {name:<26} {verdict} [{:.2}s / {budget}s] {}",
            dt.as_secs_f64(),
            out.detail
        );
    }
    if hard_failures > 0 {
        eprintln!("{hard_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
