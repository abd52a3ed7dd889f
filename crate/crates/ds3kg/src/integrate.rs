//! Lambda-representations, solution ansaetze, reduced ordinary differential
//! equations and their solution bases for the five integrable cases.

use crate::error::{Error, Result};
use crate::fields::{chart_algebra, cocycle, FieldConfig};
use crate::geometry::chart_for;
use crate::jet::{Jet, Point, ScalarFn, LAMBDA, NV};
use crate::lie::CaseId;
use crate::operators::{kg_generic, symmetry_ops, table_residual, DiffOp1, DiffOp2};
use crate::specfun::{
    bessel_j_jet, bessel_y_jet, legendre_p_jet, legendre_q_jet, ode_integrate, whittaker_m_jet, whittaker_w_jet,
    DenseSolution, OdeConfig,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

type C = Complex64;
const I: C = C::new(0.0, 1.0);

/// Tolerance for lambda-rep commutators.
pub const REP_TOL: f64 = 1e-10;
/// Tolerance for the joint system X_A phi + l_A phi = 0.
pub const XLEQS_TOL: f64 = 1e-8;
/// Tolerance for the assembled solution.
pub const END_TO_END_TOL: f64 = 1e-6;

fn cr(x: f64) -> C {
    C::new(x, 0.0)
}

fn require_integrable(id: CaseId) -> Result<()> {
    if CaseId::INTEGRABLE3.contains(&id) {
        Ok(())
    } else if id == CaseId::G41 {
        Err(Error::Unsupported(id.label().into(), "free-field case out of scope".into()))
    } else {
        Err(Error::Unsupported(id.label().into(), "not integrable on de Sitter space".into()))
    }
}

/// Measure under which the lambda-operators are skew-symmetric (metadata only).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Measure {
    Lebesgue,
    /// exp(-e |lambda|^2 / 2).
    Gaussian { e: f64 },
    /// (1 + |lambda|^2)^{2(J+1)}.
    Weighted { j: f64 },
}

/// Operators l_A = a_A(lambda) d_lambda + b_A(lambda, J) with l_0 = -ie.
#[derive(Clone)]
pub struct LambdaRep {
    pub case: CaseId,
    pub j: f64,
    pub ops: Vec<DiffOp1>,
    pub ell0: C,
    pub measure: Measure,
    /// Whether lambda ranges over the complex plane.
    pub complex_lambda: bool,
}

fn lambda_op(a: impl Fn(Jet) -> Jet + Send + Sync + 'static, b: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> DiffOp1 {
    let a = Arc::new(a);
    DiffOp1 {
        coeffs: Arc::new(move |p| {
            let mut c = [Jet::zero(); NV];
            c[LAMBDA] = a(p[LAMBDA]);
            c
        }),
        scalar: Arc::new(move |p| b(p[LAMBDA])),
    }
}

/// Lambda probe points (chart part fixed).
pub fn lambda_probes(complex: bool, n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let t = k as f64 / n.max(1) as f64;
            let re = -0.9 + 1.8 * t;
            let im = if complex { 0.7 * (3.0 * t + 0.4).sin() } else { 0.0 };
            Jet::seed(&[cr(0.11), cr(0.23), cr(0.37), C::new(re, im)])
        })
        .collect()
}

/// The lambda-representation of an integrable case, checked against the
/// operator algebra (same structure constants and cocycle, central l_0 = -ie).
pub fn lambda_rep(cfg: &FieldConfig, j: f64) -> Result<LambdaRep> {
    use CaseId::*;
    require_integrable(cfg.case.id)?;
    let pr = cfg.params;
    let (e, mu) = (pr.e, pr.mu);
    let a = cfg.case.param();
    let (ops, measure, complex_lambda) = match cfg.case.id {
        G31 => (
            vec![
                lambda_op(|_| Jet::zero(), move |l| l * (I * j)),
                lambda_op(|_| Jet::zero(), move |l| l * I),
                lambda_op(|l| l, |_| Jet::real(0.5)),
            ],
            Measure::Lebesgue,
            false,
        ),
        G32 => (
            vec![
                lambda_op(|_| Jet::constant(I), move |l| l * (-0.5 * I * e * mu)),
                lambda_op(|_| Jet::real(-1.0), move |l| l * (-0.5 * e * mu)),
                lambda_op(|l| l * I, move |_| Jet::constant(-I * j)),
            ],
            Measure::Gaussian { e },
            true,
        ),
        G33a => (
            vec![
                lambda_op(|_| Jet::zero(), move |l| (l * a).exp() * l.cos() * (I * j)),
                lambda_op(|_| Jet::zero(), move |l| (l * a).exp() * l.sin() * (I * j)),
                lambda_op(|_| Jet::real(1.0), |_| Jet::zero()),
            ],
            Measure::Lebesgue,
            false,
        ),
        G34 => {
            if j <= 0.0 {
                return Err(Error::OutOfRange(format!("J = {j} must lie in (0, inf)")));
            }
            (
                vec![
                    lambda_op(|l| l * -I, move |_| Jet::constant(I * j)),
                    lambda_op(|l| (Jet::real(1.0) - l * l) * (0.5 * I), move |l| l * (I * j)),
                    lambda_op(|l| (Jet::real(1.0) + l * l) * -0.5, move |l| l * j),
                ],
                Measure::Weighted { j },
                true,
            )
        }
        G35 => {
            if j < 0.0 {
                return Err(Error::OutOfRange(format!("J = {j} must lie in [0, inf)")));
            }
            let b = I * j + 0.5;
            (
                vec![
                    lambda_op(|l| l, move |_| Jet::constant(b)),
                    lambda_op(|l| (l * l + 1.0) * 0.5, move |l| l * b),
                    lambda_op(|l| (l * l - 1.0) * 0.5, move |l| l * b),
                ],
                Measure::Lebesgue,
                false,
            )
        }
        _ => unreachable!(),
    };
    let rep = LambdaRep { case: cfg.case.id, j, ops, ell0: -I * e, measure, complex_lambda };
    let r = rep.residual(cfg)?;
    if r > REP_TOL {
        return Err(Error::Domain(format!("lambda-representation commutators off by {r:.3e}")));
    }
    Ok(rep)
}

impl LambdaRep {
    /// Max deviation from [l_A, l_B] = C_AB^C l_C + F_AB l_0.
    pub fn residual(&self, cfg: &FieldConfig) -> Result<f64> {
        let alg = chart_algebra(cfg.case);
        let coc = cocycle(cfg)?;
        Ok(table_residual(&self.ops, &alg, &coc, self.ell0, &lambda_probes(self.complex_lambda, 12)))
    }
}

/// Parameters of one solution family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveParams {
    pub j: f64,
    pub lambda: C,
}

/// phi_J = exp(R_J(xi, lambda)) Phi_J(v(xi, lambda)).
#[derive(Clone)]
pub struct SolutionAnsatz {
    pub case: CaseId,
    pub phase: ScalarFn,
    pub char_var: ScalarFn,
    pub j: f64,
    cfg: FieldConfig,
}

/// Bases of the complex powers in the ansatz at a point.
fn power_bases(cfg: &FieldConfig, p: &Point) -> Vec<Jet> {
    use CaseId::*;
    let (q1, q2, l) = (p[0], p[1], p[LAMBDA]);
    match cfg.case.id {
        G32 => vec![q1 + (q2 + l) * I],
        G34 => {
            let e1 = (q1 * I).exp();
            let (s2, c2) = (q2.sin(), q2.cos());
            let b1 = (l * l * e1 + (q1 * -I).exp()) * c2 - l * s2 * (2.0 * I);
            let t = l * e1 * c2 * I;
            let b2 = (t + s2 + 1.0) * (s2 - 1.0) / ((t + s2 - 1.0) * c2);
            vec![b1, b2]
        }
        G35 => {
            let (s2, c2) = (q2.sin(), q2.cos());
            let em = (-q1).exp();
            let b1 = l * s2 * 2.0 + (q1.exp() - l * l * em) * c2;
            let one = Jet::real(1.0);
            let b2 = (l * em * c2 + one - s2) / (c2 - l * em * (one - s2));
            vec![b1, b2]
        }
        _ => vec![],
    }
}

/// The ansatz of an integrable case.
pub fn ansatz(cfg: &FieldConfig, j: f64) -> Result<SolutionAnsatz> {
    use CaseId::*;
    require_integrable(cfg.case.id)?;
    let pr = cfg.params;
    let (e, mu, m1, m2) = (pr.e, pr.mu, pr.mu1, pr.mu2);
    let a = cfg.case.param();
    let cf = cfg.clone();
    let phase: ScalarFn = match cfg.case.id {
        G31 => Arc::new(move |p| {
            let (q1, q2, q3, l) = (p[0], p[1], p[2], p[LAMBDA]);
            l * (q1 * j + q2) * -I - q3 * 0.5 + q3.exp() * (q1 * m1 + q2 * m2) * (I * e)
        }),
        G32 => Arc::new(move |p| {
            let (q1, q2, l) = (p[0], p[1], p[LAMBDA]);
            power_bases(&cf, p)[0].ln() * j
                + l * (q1 * I + q2) * (0.5 * e * mu)
                + (q1 * q1 + q2 * q2) * (0.25 * e * mu)
        }),
        G33a => Arc::new(move |p| {
            let (q1, q2, q3, l) = (p[0], p[1], p[2], p[LAMBDA]);
            let ea = (q3 * a).exp();
            let k1 = (a * m1 - m2) / (1.0 + a * a);
            let k2 = (m1 + a * m2) / (1.0 + a * a);
            ea * (q1 * k1 - q2 * k2) * q3.cos() * (I * e) + ea * (q1 * k2 + q2 * k1) * q3.sin() * (I * e)
                - (l * a).exp() * (q1 * l.cos() + q2 * l.sin()) * (I * j)
        }),
        G34 => Arc::new(move |p| {
            let b = power_bases(&cf, p);
            b[0].ln() * j + b[1].ln() * (e * mu)
        }),
        G35 => Arc::new(move |p| {
            let b = power_bases(&cf, p);
            b[0].ln() * (-(I * j) - 0.5) + b[1].ln() * (I * e * mu)
        }),
        _ => unreachable!(),
    };
    let char_var: ScalarFn = match cfg.case.id {
        G31 => Arc::new(|p| p[LAMBDA] * (-p[2]).exp()),
        G33a => Arc::new(|p| p[2] - p[LAMBDA]),
        _ => Arc::new(|p| p[2]),
    };
    Ok(SolutionAnsatz { case: cfg.case.id, phase, char_var, j, cfg: cfg.clone() })
}

/// Phi evaluated at v as (Phi, Phi', Phi'').
pub type PhiFn = Arc<dyn Fn(C) -> Result<[C; 3]> + Send + Sync>;

const BRANCH_EPS: f64 = 1e-10;

impl SolutionAnsatz {
    /// Errors if a complex-power base vanishes or lies on the principal cut.
    pub fn branch_check(&self, p: &Point) -> Result<()> {
        for b in power_bases(&self.cfg, p) {
            let v = b.value();
            if v.norm() < BRANCH_EPS {
                return Err(Error::BranchPoint(format!("ansatz base vanishes ({v})")));
            }
            if v.re < 0.0 && v.im.abs() < BRANCH_EPS * v.norm() {
                return Err(Error::BranchPoint(format!("ansatz base on the cut ({v})")));
            }
        }
        Ok(())
    }

    /// phi on jets, with Phi given as a jet-valued function of v.
    pub fn phi_with(&self, p: &Point, phi: impl Fn(&Jet) -> Jet) -> Jet {
        (self.phase)(p).exp() * phi(&(self.char_var)(p))
    }

    /// phi on jets with Phi given by values; two orders exact.
    pub fn phi(&self, p: &Point, phi: &PhiFn) -> Result<Jet> {
        self.branch_check(p)?;
        let v = (self.char_var)(p);
        let d = phi(v.value())?;
        let lifted = v.compose([d[0], d[1], d[2], C::new(0.0, 0.0)], 2);
        Ok((self.phase)(p).exp() * lifted)
    }

    /// max_A |X_A phi + l_A phi| / |phi| for a generic Phi, at chart points and one lambda.
    pub fn xleqs_residual(&self, rep: &LambdaRep, points: &[[f64; 3]], lambda: C) -> Result<f64> {
        let ops = symmetry_ops(&self.cfg);
        let mut r: f64 = 0.0;
        let generic = |v: &Jet| (*v * 0.7).exp() + *v * *v;
        for &xi in points {
            let p = Jet::seed_chart(xi, lambda);
            self.branch_check(&p)?;
            let f = self.phi_with(&p, generic);
            for (x, l) in ops.iter().zip(&rep.ops) {
                let d = x.apply_jet(&p, &f) + l.apply_jet(&p, &f);
                r = r.max(d.value().norm() / f.value().norm());
            }
        }
        Ok(r)
    }
}

/// Phi'' + p(v) Phi' + q(v) Phi = 0.
#[derive(Clone)]
pub struct ReducedOde {
    pub case: CaseId,
    pub p: Arc<dyn Fn(C) -> C + Send + Sync>,
    pub q: Arc<dyn Fn(C) -> C + Send + Sync>,
}

impl ReducedOde {
    /// Errors at the coefficient singularities (v = 0 for G31, v in pi Z for G35).
    pub fn check(&self, v: C) -> Result<()> {
        let bad = match self.case {
            CaseId::G31 => v.norm() < 1e-12,
            CaseId::G35 => v.sin().norm() < 1e-12,
            _ => false,
        };
        if bad {
            return Err(Error::Singular(v.re));
        }
        Ok(())
    }

    /// |Phi'' + p Phi' + q Phi| / (|Phi''| + |p Phi'| + |q Phi|).
    pub fn residual(&self, v: C, d: [C; 3]) -> Result<f64> {
        self.check(v)?;
        let t = [d[2], (self.p)(v) * d[1], (self.q)(v) * d[0]];
        let s: f64 = t.iter().map(|z| z.norm()).sum();
        let tot = t[0] + t[1] + t[2];
        Ok(if s == 0.0 { 0.0 } else { tot.norm() / s })
    }
}

/// The reduced equation of an integrable case.
pub fn reduced_ode(cfg: &FieldConfig, j: f64) -> Result<ReducedOde> {
    use CaseId::*;
    require_integrable(cfg.case.id)?;
    let pr = cfg.params;
    let (e, mu, m1, m2) = (pr.e, pr.mu, pr.mu1, pr.mu2);
    let mass = pr.mass_term();
    let a = cfg.case.param();
    let (p, q): (Arc<dyn Fn(C) -> C + Send + Sync>, Arc<dyn Fn(C) -> C + Send + Sync>) = match cfg.case.id {
        G31 => {
            let mm = mass + e * e * (m1 * m1 + m2 * m2);
            (
                Arc::new(|_| cr(0.0)),
                Arc::new(move |v| ((j * j + 1.0) * v * v - 2.0 * e * (j * m1 + m2) * v + mm - 0.75) / (v * v)),
            )
        }
        G32 => (Arc::new(|_| cr(-2.0)), Arc::new(move |v| mass - e * mu * (2.0 * j + 1.0) * (2.0 * v).exp())),
        G33a => {
            let k = 2.0 * e * a * a * j / (1.0 + a * a);
            let tail = a * a * mass + e * e * a * a * (m1 * m1 + m2 * m2) / (1.0 + a * a);
            (
                Arc::new(move |_| cr(2.0 * a)),
                Arc::new(move |v| {
                    let ex = (-a * v).exp();
                    -k * ex * (a * m1 - m2) * v.cos() - k * ex * (m1 + a * m2) * v.sin()
                        + a * a * j * j * (-2.0 * a * v).exp()
                        + tail
                }),
            )
        }
        G34 => (
            Arc::new(|v: C| 2.0 * v.tanh()),
            Arc::new(move |v: C| mass + (j * (j + 1.0) - e * e * mu * mu) / (v.cosh() * v.cosh())),
        ),
        G35 => (
            Arc::new(|v: C| 2.0 * v.cos() / v.sin()),
            Arc::new(move |v: C| -mass + (j * j - e * e * mu * mu + 0.25) / (v.sin() * v.sin())),
        ),
        _ => unreachable!(),
    };
    Ok(ReducedOde { case: cfg.case.id, p, q })
}

/// Special-function parameters of a solution basis.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamRecord {
    pub family: String,
    pub j: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<C>,
    /// Argument scale: z = scale * v (Whittaker) or z = scale * exp(v) (Bessel).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<C>,
    pub branch: String,
}

/// Two independent solutions of the reduced equation.
#[derive(Clone)]
pub struct SolutionBasis {
    pub phi1: PhiFn,
    pub phi2: PhiFn,
    /// Further solutions, e.g. M_{alpha,-beta}.
    pub extra: Vec<(String, PhiFn)>,
    pub record: ParamRecord,
}

fn jet_phi(f: impl Fn(&Jet) -> Result<Jet> + Send + Sync + 'static) -> PhiFn {
    Arc::new(move |v: C| {
        let x = Jet::var(0, v);
        let y = f(&x)?;
        Ok([y.value(), y.d1(0), y.d2(0, 0)])
    })
}

fn dense_phi(sol: DenseSolution, ode: ReducedOde) -> PhiFn {
    Arc::new(move |v: C| {
        if v.im.abs() > 1e-12 {
            return Err(Error::Domain(format!("numerical basis needs real v, got {v}")));
        }
        let (f, df) = sol.eval(v.re)?;
        Ok([f, df, -(ode.p)(v) * df - (ode.q)(v) * f])
    })
}

/// Solution pair with parameters. `v_range` is used only by the numerically
/// integrated G33a basis (initial data (1,0) and (0,1) at the midpoint).
pub fn solution_basis(cfg: &FieldConfig, j: f64, v_range: (f64, f64)) -> Result<SolutionBasis> {
    use CaseId::*;
    require_integrable(cfg.case.id)?;
    let pr = cfg.params;
    let (e, mu, m1, m2) = (pr.e, pr.mu, pr.mu1, pr.mu2);
    let mass = pr.mass_term();
    let principal = "principal square roots and logarithms".to_string();
    let basis = match cfg.case.id {
        G31 => {
            let s = (j * j + 1.0).sqrt();
            let k = 2.0 * I * s;
            let alpha = I * e * (j * m1 + m2) / s;
            let beta = cr(1.0 - mass - e * e * (m1 * m1 + m2 * m2)).sqrt();
            let z = move |v: &Jet| *v * k;
            SolutionBasis {
                phi1: jet_phi(move |v| whittaker_m_jet(alpha, beta, &z(v))),
                phi2: jet_phi(move |v| whittaker_w_jet(alpha, beta, &z(v))),
                extra: vec![("M_{alpha,-beta}".into(), jet_phi(move |v| whittaker_m_jet(alpha, -beta, &z(v))))],
                record: ParamRecord {
                    family: "Whittaker M, W".into(),
                    j,
                    alpha: Some(alpha),
                    beta: Some(beta),
                    scale: Some(k),
                    branch: principal,
                    ..Default::default()
                },
            }
        }
        G32 => {
            let alpha = cr(1.0 - mass).sqrt();
            let kappa = I * cr(e * mu * (2.0 * j + 1.0)).sqrt();
            SolutionBasis {
                phi1: jet_phi(move |v| Ok(v.exp() * bessel_j_jet(alpha, &(v.exp() * kappa))?)),
                phi2: jet_phi(move |v| Ok(v.exp() * bessel_y_jet(alpha, &(v.exp() * kappa))?)),
                extra: vec![],
                record: ParamRecord {
                    family: "Bessel J, Y".into(),
                    j,
                    alpha: Some(alpha),
                    scale: Some(kappa),
                    branch: principal,
                    ..Default::default()
                },
            }
        }
        G34 => {
            let nu = cr((j + 0.5).powi(2) - e * e * mu * mu).sqrt() - 0.5;
            let sigma = cr(1.0 - mass).sqrt();
            let pre = |v: &Jet| v.cosh().recip();
            SolutionBasis {
                phi1: jet_phi(move |v| Ok(pre(v) * legendre_p_jet(nu, sigma, &v.tanh())?)),
                phi2: jet_phi(move |v| Ok(pre(v) * legendre_q_jet(nu, sigma, &v.tanh())?)),
                extra: vec![],
                record: ParamRecord {
                    family: "Legendre P, Q of tanh v over cosh v".into(),
                    j,
                    nu: Some(nu),
                    sigma: Some(sigma),
                    branch: principal,
                    ..Default::default()
                },
            }
        }
        G35 => {
            let nu = cr(1.0 - mass).sqrt() - 0.5;
            let sigma = cr(e * e * mu * mu - j * j).sqrt();
            let pre = |v: &Jet| v.sin().powc(cr(-0.5));
            SolutionBasis {
                phi1: jet_phi(move |v| Ok(pre(v) * legendre_p_jet(nu, sigma, &v.cos())?)),
                phi2: jet_phi(move |v| Ok(pre(v) * legendre_q_jet(nu, sigma, &v.cos())?)),
                extra: vec![],
                record: ParamRecord {
                    family: "Legendre P, Q of cos v".into(),
                    j,
                    nu: Some(nu),
                    sigma: Some(sigma),
                    branch: principal,
                    ..Default::default()
                },
            }
        }
        G33a => {
            let ode = reduced_ode(cfg, j)?;
            let (lo, hi) = v_range;
            let v0 = 0.5 * (lo + hi);
            let p = ode.p.clone();
            let q = ode.q.clone();
            let pf = move |v: f64| p(cr(v));
            let qf = move |v: f64| q(cr(v));
            let oc = OdeConfig::default();
            let s1 = ode_integrate(&pf, &qf, v0, cr(1.0), cr(0.0), &[lo, hi], &oc)?;
            let s2 = ode_integrate(&pf, &qf, v0, cr(0.0), cr(1.0), &[lo, hi], &oc)?;
            SolutionBasis {
                phi1: dense_phi(s1, ode.clone()),
                phi2: dense_phi(s2, ode),
                extra: vec![],
                record: ParamRecord {
                    family: "numerical (Dormand-Prince 5(4), dense output)".into(),
                    j,
                    branch: format!("initial data (1,0) and (0,1) at v = {v0}"),
                    ..Default::default()
                },
            }
        }
        _ => unreachable!(),
    };
    Ok(basis)
}

/// Phi1 Phi2' - Phi1' Phi2.
pub fn wronskian(b: &SolutionBasis, v: C) -> Result<C> {
    let a = (b.phi1)(v)?;
    let c = (b.phi2)(v)?;
    Ok(a[0] * c[1] - a[1] * c[0])
}

/// Normalised residual at one point: |H phi| / (1 + sum of |terms|), and
/// the pure ratio |H phi| / sum of |terms|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualSample {
    pub normalized: f64,
    pub relative: f64,
    pub phi: C,
}

pub fn residual_at(h: &DiffOp2, ans: &SolutionAnsatz, phi: &PhiFn, xi: [f64; 3], lambda: C) -> Result<ResidualSample> {
    let p = Jet::seed_chart(xi, lambda);
    let f = ans.phi(&p, phi)?;
    let t = h.terms_jet(&p, &f);
    let hv = h.apply_jet(&p, &f).value();
    let s = t.abs_sum();
    Ok(ResidualSample { normalized: hv.norm() / (1.0 + s), relative: if s == 0.0 { 0.0 } else { hv.norm() / s }, phi: f.value() })
}

/// Max normalised residual of H phi over probes (the reduction check).
pub fn reduction_residual(cfg: &FieldConfig, j: f64, phi: &PhiFn, probes: &[[f64; 3]], lambda: C) -> Result<f64> {
    let ans = ansatz(cfg, j)?;
    let h = kg_generic(cfg);
    let mut r: f64 = 0.0;
    for &xi in probes {
        r = r.max(residual_at(&h, &ans, phi, xi, lambda)?.normalized);
    }
    Ok(r)
}

/// Axis-aligned grid of chart points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub ranges: [(f64, f64); 3],
    pub counts: [usize; 3],
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.counts.iter().any(|&n| n < 2) {
            return Err(Error::Domain("grid counts must be at least 2".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        let axis = |k: usize| -> Vec<f64> {
            let (lo, hi) = self.ranges[k];
            let n = self.counts[k];
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        };
        let (a, b, c) = (axis(0), axis(1), axis(2));
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
        for &x in &a {
            for &y in &b {
                for &z in &c {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }
}

/// In-domain defaults (grid box and lambda) for which every ansatz base stays
/// away from zero and from the principal cut.
pub fn default_solve_setup(id: CaseId) -> Result<(GridSpec, C)> {
    use CaseId::*;
    let n = [10, 10, 10];
    let u = (-1.0, 1.0);
    let (ranges, lambda) = match id {
        G31 => ([u, u, u], cr(0.7)),
        G32 => ([u, u, u], C::new(0.3, 1.5)),
        G33a => ([u, u, u], cr(0.2)),
        G34 => ([u, u, (-1.5, 1.5)], C::new(0.1, 0.1)),
        G35 => ([(-0.5, 0.5), (-0.5, 0.5), (0.5, 2.5)], cr(0.3)),
        _ => {
            require_integrable(id)?;
            unreachable!()
        }
    };
    Ok((GridSpec { ranges, counts: n }, lambda))
}

/// One grid node of an assembled solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveSample {
    pub xi: [f64; 3],
    pub phi: C,
    pub residual: f64,
}

/// Assembled phi_J on a grid with pointwise normalised residuals.
#[derive(Clone, Debug, Serialize)]
pub struct EndToEnd {
    pub samples: Vec<SolveSample>,
    pub dropped: usize,
    pub max_residual: f64,
    pub record: ParamRecord,
}

/// Range of the characteristic variable over grid points (real part).
fn v_range(ans: &SolutionAnsatz, pts: &[[f64; 3]], lambda: C) -> (f64, f64) {
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &xi| {
        let v = (ans.char_var)(&Jet::seed_chart(xi, lambda)).re();
        (lo.min(v), hi.max(v))
    })
}

/// Evaluates phi_J = e^R Phi (basis member `which` = 1 or 2) on a grid and its
/// Klein-Gordon residual. Grid nodes at ansatz branch points are dropped.
pub fn end_to_end(cfg: &FieldConfig, j: f64, lambda: C, grid: &GridSpec, which: usize) -> Result<EndToEnd> {
    grid.validate()?;
    let chart = chart_for(cfg.case);
    let pts = grid.points();
    if let Some(bad) = pts.iter().find(|xi| !chart.contains(**xi)) {
        return Err(Error::Domain(format!("grid point {bad:?} outside the chart domain")));
    }
    let ans = ansatz(cfg, j)?;
    let (lo, hi) = v_range(&ans, &pts, lambda);
    let basis = solution_basis(cfg, j, (lo - 0.01, hi + 0.01))?;
    let phi = if which == 2 { basis.phi2.clone() } else { basis.phi1.clone() };
    let h = kg_generic(cfg);
    let mut samples = Vec::with_capacity(pts.len());
    let mut dropped = 0;
    let mut max_residual: f64 = 0.0;
    for xi in pts {
        match residual_at(&h, &ans, &phi, xi, lambda) {
            Ok(s) => {
                max_residual = max_residual.max(s.normalized);
                samples.push(SolveSample { xi, phi: s.phi, residual: s.normalized });
            }
            Err(Error::BranchPoint(_)) => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(EndToEnd { samples, dropped, max_residual, record: basis.record })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::PhysParams;
    use crate::lie::Case;

    fn cfg(id: CaseId) -> FieldConfig {
        let a = if id.is_family() { Some(1.0) } else { None };
        FieldConfig::new(Case::new(id, a).unwrap(), PhysParams::default()).unwrap()
    }

    #[test]
    fn j_ranges() {
        assert!(matches!(lambda_rep(&cfg(CaseId::G34), 0.0), Err(Error::OutOfRange(_))));
        assert!(lambda_rep(&cfg(CaseId::G35), 0.0).is_ok());
        assert!(matches!(lambda_rep(&cfg(CaseId::G35), -1.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn free_field_refused() {
        let c = FieldConfig::new(Case::plain(CaseId::G41), PhysParams::default()).unwrap();
        match ansatz(&c, 1.0) {
            Err(Error::Unsupported(_, msg)) => assert!(msg.contains("free-field case out of scope")),
            _ => panic!(),
        }
    }

    #[test]
    fn zero_phi_has_zero_residual() {
        let c = cfg(CaseId::G34);
        let zero: PhiFn = Arc::new(|_| Ok([cr(0.0); 3]));
        let r = reduction_residual(&c, 1.0, &zero, &[[0.1, 0.2, 0.3]], C::new(0.1, 0.1)).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn singular_points_reported() {
        let o = reduced_ode(&cfg(CaseId::G35), 1.0).unwrap();
        assert!(matches!(o.check(cr(std::f64::consts::PI)), Err(Error::Singular(_))));
        let o = reduced_ode(&cfg(CaseId::G31), 1.0).unwrap();
        assert!(matches!(o.check(cr(0.0)), Err(Error::Singular(_))));
    }
}
