//! Invariant closed 2-forms, their potentials, the functions chi_A solving
//! d chi_A = -i_{X_A} F, and the cocycle of the resulting central extension.

use crate::error::{Error, Result};
use crate::geometry::{chart_for, chart_frame, seed, table2_fields, Chart};
use crate::jet::{Jet, Point, ScalarFn, VectorFn};
use crate::lie::{
    change_basis, integrability_check, subalgebra, Case, CaseId, Cocycle, ExtendedAlgebra, Integrability, LieAlgebra,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Tolerance for closedness, invariance, dA = F and chi residuals.
pub const FIELD_TOL: f64 = 1e-10;

/// Evaluable antisymmetric 3x3 matrix of 2-form components.
pub type TwoFormFn = Arc<dyn Fn(&Point) -> [[Jet; 3]; 3] + Send + Sync>;

/// Evaluable 1-form components.
pub type OneFormFn = VectorFn;

/// Function of one variable on jets.
pub type Fn1 = Arc<dyn Fn(Jet) -> Jet + Send + Sync>;
/// Function of two variables on jets.
pub type Fn2 = Arc<dyn Fn(Jet, Jet) -> Jet + Send + Sync>;

/// Physical constants of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub e: f64,
    pub m: f64,
    pub zeta: f64,
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams { e: 0.1, m: 0.5, zeta: 0.0, mu: 1.0, mu1: 0.3, mu2: -0.2 }
    }
}

/// Conformal coupling (n - 1) / (4n) for n = 3.
pub const ZETA_CONFORMAL: f64 = 1.0 / 6.0;

impl PhysParams {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.e, self.m, self.zeta, self.mu, self.mu1, self.mu2];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite physical parameter".into()));
        }
        if self.zeta.abs() > 1e-12 && (self.zeta - ZETA_CONFORMAL).abs() > 1e-12 {
            return Err(Error::Domain(format!("zeta must be 0 or 1/6, got {}", self.zeta)));
        }
        Ok(())
    }

    /// m^2 + 6 zeta.
    pub fn mass_term(&self) -> f64 {
        self.m * self.m + 6.0 * self.zeta
    }
}

/// The arbitrary functions allowed by the 1- and 2-dimensional rows.
#[derive(Clone)]
pub struct FieldFns {
    /// f1(u) of the 2-dimensional rows and its antiderivative.
    pub f1: Fn1,
    pub f1_int: Fn1,
    /// f2(u) of the 2-dimensional rows and its antiderivative.
    pub f2: Fn1,
    pub f2_int: Fn1,
    /// f1(u1, u2) of the 1-dimensional rows.
    pub h1: Fn2,
    /// f2(u1, u2) of the 1-dimensional rows and an antiderivative in u1.
    pub h2: Fn2,
    pub h2_int: Fn2,
    pub label: String,
}

impl Default for FieldFns {
    fn default() -> Self {
        FieldFns {
            f1: Arc::new(|s| s),
            f1_int: Arc::new(|s| s * s * 0.5),
            f2: Arc::new(|_| Jet::real(1.0)),
            f2_int: Arc::new(|s| s),
            h1: Arc::new(|u1, u2| u1 + u2),
            h2: Arc::new(|_, _| Jet::real(1.0)),
            h2_int: Arc::new(|u1, _| u1),
            label: "default: f1(s)=s, f2(s)=1; f1(u1,u2)=u1+u2, f2(u1,u2)=1".into(),
        }
    }
}

impl std::fmt::Debug for FieldFns {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldFns").field("label", &self.label).finish()
    }
}

/// Injected faults used to exercise the detectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum Perturbation {
    #[default]
    None,
    /// chi_1 -> chi_1 + eps q^1.
    Chi(f64),
    /// F -> F + eps q^1 dq^1 ^ d xi^3 (closed, not invariant under X_1).
    Form(f64),
}

/// Electromagnetic data for one case in its rectifying chart.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    pub case: Case,
    pub params: PhysParams,
    pub fns: FieldFns,
    pub perturbation: Perturbation,
    /// Constant shifts added to chi_A.
    pub chi_shift: Vec<f64>,
}

/// Serializable summary of a [`FieldConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfigRecord {
    pub case: CaseId,
    pub a: Option<f64>,
    pub params: PhysParams,
    pub gauge: String,
    pub functions: String,
    pub perturbation: Perturbation,
}

fn zero3() -> [[Jet; 3]; 3] {
    [[Jet::zero(); 3]; 3]
}

fn set(f: &mut [[Jet; 3]; 3], a: usize, b: usize, v: Jet) {
    f[a][b] = v;
    f[b][a] = -v;
}

impl FieldConfig {
    pub fn new(case: Case, params: PhysParams) -> Result<Self> {
        params.validate()?;
        Ok(FieldConfig {
            case,
            params,
            fns: FieldFns::default(),
            perturbation: Perturbation::None,
            chi_shift: vec![0.0; case.dim()],
        })
    }

    pub fn with_fns(mut self, fns: FieldFns) -> Self {
        self.fns = fns;
        self
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Self {
        self.perturbation = p;
        self
    }

    pub fn with_chi_shift(mut self, shift: Vec<f64>) -> Self {
        assert_eq!(shift.len(), self.case.dim());
        self.chi_shift = shift;
        self
    }

    pub fn dim(&self) -> usize {
        self.case.dim()
    }

    pub fn chart(&self) -> Chart {
        chart_for(self.case)
    }

    pub fn generators(&self) -> Vec<VectorFn> {
        table2_fields(self.case)
    }

    /// Structure constants in the chart basis.
    pub fn algebra(&self) -> LieAlgebra {
        chart_algebra(self.case)
    }

    pub fn gauge_label(&self) -> &'static str {
        use CaseId::*;
        match self.case.id {
            G11 | G12 | G13a | G14 => "A = q1 d_u1 f1 du1 + (q1 d_u2 f1 + int f2 du1) du2",
            G21 | G22 => "A = -(mu q2/2 + int f1) dq1 + (mu q1/2 - int f2) dq2",
            G23 => "A = -exp(q2) f1 dq1 - int f2 dq2",
            G31 => "A = exp(q3)(mu1 q1 + mu2 q2) dq3",
            G32 => "A = mu (q1 dq2 - q2 dq1)/2",
            G33a => "A = (q1 F13 + q2 F23) dq3",
            G34 | G35 => "A = -mu sin(q2) dq1",
            G41 => "A = 0",
        }
    }

    pub fn record(&self) -> FieldConfigRecord {
        FieldConfigRecord {
            case: self.case.id,
            a: self.case.a,
            params: self.params,
            gauge: self.gauge_label().into(),
            functions: self.fns.label.clone(),
            perturbation: self.perturbation,
        }
    }

    /// Components F_ab of the invariant 2-form.
    pub fn two_form(&self, p: &Point) -> [[Jet; 3]; 3] {
        use CaseId::*;
        let pr = &self.params;
        let a = self.case.param();
        let (q1, x2, x3) = (p[0], p[1], p[2]);
        let mut f = zero3();
        match self.case.id {
            G11 | G12 | G13a | G14 => {
                let h = (self.fns.h1)(x2, x3);
                set(&mut f, 0, 1, h.partial(1));
                set(&mut f, 0, 2, h.partial(2));
                set(&mut f, 1, 2, (self.fns.h2)(x2, x3));
            }
            G21 | G22 => {
                set(&mut f, 0, 1, Jet::real(pr.mu));
                set(&mut f, 0, 2, (self.fns.f1)(x3));
                set(&mut f, 1, 2, (self.fns.f2)(x3));
            }
            G23 => {
                let e2 = x2.exp();
                let f1 = (self.fns.f1)(x3);
                set(&mut f, 0, 1, e2 * f1);
                set(&mut f, 0, 2, e2 * f1.partial(2));
                set(&mut f, 1, 2, (self.fns.f2)(x3));
            }
            G31 => {
                let e = x3.exp();
                set(&mut f, 0, 2, e * pr.mu1);
                set(&mut f, 1, 2, e * pr.mu2);
            }
            G32 => set(&mut f, 0, 1, Jet::real(pr.mu)),
            G33a => {
                let (f13, f23) = g33_components(pr, a, x3);
                set(&mut f, 0, 2, f13);
                set(&mut f, 1, 2, f23);
            }
            G34 | G35 => set(&mut f, 0, 1, x2.cos() * pr.mu),
            G41 => {}
        }
        if let Perturbation::Form(eps) = self.perturbation {
            let v = f[0][2] + q1 * eps;
            set(&mut f, 0, 2, v);
        }
        f
    }

    /// Potential components A_a with dA = F.
    pub fn potential(&self, p: &Point) -> [Jet; 3] {
        use CaseId::*;
        let pr = &self.params;
        let a = self.case.param();
        let (q1, x2, x3) = (p[0], p[1], p[2]);
        let z = Jet::zero();
        let mut out = match self.case.id {
            G11 | G12 | G13a | G14 => {
                let h = (self.fns.h1)(x2, x3);
                [z, q1 * h.partial(1), q1 * h.partial(2) + (self.fns.h2_int)(x2, x3)]
            }
            G21 | G22 => [
                -(x2 * (0.5 * pr.mu)) - (self.fns.f1_int)(x3),
                q1 * (0.5 * pr.mu) - (self.fns.f2_int)(x3),
                z,
            ],
            G23 => [-(x2.exp() * (self.fns.f1)(x3)), -(self.fns.f2_int)(x3), z],
            G31 => [z, z, x3.exp() * (q1 * pr.mu1 + x2 * pr.mu2)],
            G32 => [x2 * (-0.5 * pr.mu), q1 * (0.5 * pr.mu), z],
            G33a => {
                let (f13, f23) = g33_components(pr, a, x3);
                [z, z, q1 * f13 + x2 * f23]
            }
            G34 | G35 => [x2.sin() * (-pr.mu), z, z],
            G41 => [z, z, z],
        };
        if let Perturbation::Form(eps) = self.perturbation {
            out[2] += q1 * q1 * (0.5 * eps);
        }
        out
    }

    /// chi_A with d chi_A = -i_{X_A} F, including constant shifts and faults.
    pub fn chi(&self, idx: usize, p: &Point) -> Jet {
        use CaseId::*;
        let pr = &self.params;
        let a = self.case.param();
        let (q1, x2, x3) = (p[0], p[1], p[2]);
        let mut v = match (self.case.id, idx) {
            (G11 | G12 | G13a | G14, 0) => -(self.fns.h1)(x2, x3),
            (G21 | G22, 0) => -(x2 * pr.mu) - (self.fns.f1_int)(x3),
            (G21 | G22, 1) => q1 * pr.mu - (self.fns.f2_int)(x3),
            (G23, 0) => -(x2.exp() * (self.fns.f1)(x3)),
            (G23, 1) => q1 * x2.exp() * (self.fns.f1)(x3) - (self.fns.f2_int)(x3),
            (G31, 0) => x3.exp() * -pr.mu1,
            (G31, 1) => x3.exp() * -pr.mu2,
            (G31, 2) => x3.exp() * (q1 * pr.mu1 + x2 * pr.mu2),
            (G32, 0) => x2 * -pr.mu,
            (G32, 1) => q1 * pr.mu,
            (G32, 2) => (q1 * q1 + x2 * x2) * (0.5 * pr.mu),
            (G33a, 0 | 1) => {
                let ea = (x3 * a).exp();
                let (c, s) = (x3.cos(), x3.sin());
                let k1 = (pr.mu2 - a * pr.mu1) / (1.0 + a * a);
                let k2 = (pr.mu1 + a * pr.mu2) / (1.0 + a * a);
                if idx == 0 {
                    ea * (c * k1 - s * k2)
                } else {
                    ea * (s * k1 + c * k2)
                }
            }
            (G33a, 2) => {
                let (f13, f23) = g33_components(pr, a, x3);
                q1 * f13 + x2 * f23
            }
            (G34, 0) | (G35, 0) => x2.sin() * -pr.mu,
            (G34, 1) => q1.sin() * x2.cos() * pr.mu,
            (G34, 2) => q1.cos() * x2.cos() * pr.mu,
            (G35, 1) => q1.sinh() * x2.cos() * pr.mu,
            (G35, 2) => q1.cosh() * x2.cos() * pr.mu,
            (G41, _) => Jet::zero(),
            _ => panic!("chi index {idx} out of range for {}", self.case.id),
        };
        v = v + self.chi_shift[idx];
        if let (Perturbation::Chi(eps), 0) = (self.perturbation, idx) {
            v += q1 * eps;
        }
        v
    }

    pub fn two_form_fn(&self) -> TwoFormFn {
        let me = self.clone();
        Arc::new(move |p| me.two_form(p))
    }

    pub fn potential_fn(&self) -> OneFormFn {
        let me = self.clone();
        Arc::new(move |p| me.potential(p))
    }

    pub fn chi_fns(&self) -> Vec<ScalarFn> {
        (0..self.dim())
            .map(|k| {
                let me = self.clone();
                let f: ScalarFn = Arc::new(move |p| me.chi(k, p));
                f
            })
            .collect()
    }

    /// Probe points from the 10%-shrunken chart box.
    pub fn probes(&self, seed_val: u64, n: usize) -> Vec<[f64; 3]> {
        self.chart().sample_points(seed_val, n, 0.1)
    }

    /// Interior reference point (box centre).
    pub fn reference_point(&self) -> [f64; 3] {
        self.chart().domain.map(|(lo, hi)| 0.5 * (lo + hi))
    }
}

fn g33_components(pr: &PhysParams, a: f64, q3: Jet) -> (Jet, Jet) {
    let ea = (q3 * a).exp();
    let (c, s) = (q3.cos(), q3.sin());
    (ea * (c * pr.mu1 + s * pr.mu2), ea * (s * pr.mu1 - c * pr.mu2))
}

/// Structure constants of the chart-basis generators.
pub fn chart_algebra(case: Case) -> LieAlgebra {
    change_basis(&subalgebra(case).algebra, &chart_frame(case.id)).expect("chart frame is invertible")
}

/// (i_X F)_b = X^a F_ab.
pub fn interior(x: &[Jet; 3], f: &[[Jet; 3]; 3]) -> [Jet; 3] {
    std::array::from_fn(|b| {
        let mut s = Jet::zero();
        for a in 0..3 {
            s += x[a] * f[a][b];
        }
        s
    })
}

/// d(i_X F) at a point; equals the Lie derivative of a closed F.
pub fn lie_derivative(x: &VectorFn, f: &TwoFormFn, xi: [f64; 3]) -> [[f64; 3]; 3] {
    let p = seed(xi);
    let w = interior(&x(&p), &f(&p));
    std::array::from_fn(|b| std::array::from_fn(|c| (w[c].d1(b) - w[b].d1(c)).re))
}

/// Coordinate Lie derivative X^a d_a F_bc + F_ac d_b X^a + F_ba d_c X^a.
pub fn lie_derivative_coordinate(x: &VectorFn, f: &TwoFormFn, xi: [f64; 3]) -> [[f64; 3]; 3] {
    let p = seed(xi);
    let xv = x(&p);
    let fv = f(&p);
    std::array::from_fn(|b| {
        std::array::from_fn(|c| {
            let mut s = num_complex::Complex64::new(0.0, 0.0);
            for a in 0..3 {
                s += xv[a].value() * fv[b][c].d1(a) + fv[a][c].value() * xv[a].d1(b) + fv[b][a].value() * xv[a].d1(c);
            }
            s.re
        })
    })
}

pub fn max_abs3(m: &[[f64; 3]; 3]) -> f64 {
    m.iter().flatten().fold(0.0f64, |r, v| r.max(v.abs()))
}

/// |d_0 F_12 + d_1 F_20 + d_2 F_01|.
pub fn closedness_residual(f: &TwoFormFn, xi: [f64; 3]) -> f64 {
    let v = f(&seed(xi));
    (v[1][2].d1(0) + v[2][0].d1(1) + v[0][1].d1(2)).norm()
}

/// Max |F_ab + F_ba|.
pub fn antisymmetry_residual(f: &TwoFormFn, xi: [f64; 3]) -> f64 {
    let v = f(&seed(xi));
    let mut r: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            r = r.max((v[a][b] + v[b][a]).value().norm());
        }
    }
    r
}

/// Max |d_a A_b - d_b A_a - F_ab|.
pub fn da_residual(a: &OneFormFn, f: &TwoFormFn, xi: [f64; 3]) -> f64 {
    let p = seed(xi);
    let av = a(&p);
    let fv = f(&p);
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            r = r.max((av[j].d1(i) - av[i].d1(j) - fv[i][j].value()).norm());
        }
    }
    r
}

/// Max_b |d_b chi + X^a F_ab|.
pub fn eqchi_residual(x: &VectorFn, chi: &ScalarFn, f: &TwoFormFn, xi: [f64; 3]) -> f64 {
    let p = seed(xi);
    let w = interior(&x(&p), &f(&p));
    let c = chi(&p);
    (0..3).map(|b| (c.d1(b) + w[b].value()).norm()).fold(0.0, f64::max)
}

/// Residuals of one configuration over a set of probes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FieldResiduals {
    pub antisymmetry: f64,
    pub closedness: f64,
    pub lie_f: f64,
    pub da: f64,
    pub eqchi: f64,
}

impl FieldResiduals {
    pub fn max(&self) -> f64 {
        [self.antisymmetry, self.closedness, self.lie_f, self.da, self.eqchi].into_iter().fold(0.0, f64::max)
    }
}

pub fn field_residuals(cfg: &FieldConfig, probes: &[[f64; 3]]) -> FieldResiduals {
    let f = cfg.two_form_fn();
    let a = cfg.potential_fn();
    let xs = cfg.generators();
    let chis = cfg.chi_fns();
    let mut r = FieldResiduals::default();
    for &xi in probes {
        r.antisymmetry = r.antisymmetry.max(antisymmetry_residual(&f, xi));
        r.closedness = r.closedness.max(closedness_residual(&f, xi));
        r.da = r.da.max(da_residual(&a, &f, xi));
        for (x, chi) in xs.iter().zip(&chis) {
            r.lie_f = r.lie_f.max(max_abs3(&lie_derivative(x, &f, xi)));
            r.eqchi = r.eqchi.max(eqchi_residual(x, chi, &f, xi));
        }
    }
    r
}

const CONSTRUCTION_PROBES: usize = 16;
const CONSTRUCTION_SEED: u64 = 7;

/// The row's 2-form, verified closed and invariant on probe points.
pub fn invariant_two_form(cfg: &FieldConfig) -> Result<TwoFormFn> {
    let f = cfg.two_form_fn();
    let xs = cfg.generators();
    for xi in cfg.probes(CONSTRUCTION_SEED, CONSTRUCTION_PROBES) {
        let c = closedness_residual(&f, xi);
        if c > FIELD_TOL {
            return Err(Error::Domain(format!("2-form not closed at {xi:?}: {c:.3e}")));
        }
        for (k, x) in xs.iter().enumerate() {
            let l = max_abs3(&lie_derivative(x, &f, xi));
            if l > FIELD_TOL {
                return Err(Error::Domain(format!("2-form not invariant under X{} at {xi:?}: {l:.3e}", k + 1)));
            }
        }
    }
    Ok(f)
}

/// The gauge potential, verified against dA = F.
pub fn potential(cfg: &FieldConfig) -> Result<OneFormFn> {
    let a = cfg.potential_fn();
    let f = cfg.two_form_fn();
    for xi in cfg.probes(CONSTRUCTION_SEED, CONSTRUCTION_PROBES) {
        let r = da_residual(&a, &f, xi);
        if r > FIELD_TOL {
            return Err(Error::Domain(format!("dA != F at {xi:?}: {r:.3e}")));
        }
    }
    Ok(a)
}

/// The chi_A, verified against d chi = -i_X F on probes.
pub fn solve_chi(cfg: &FieldConfig) -> Result<Vec<ScalarFn>> {
    invariant_two_form(cfg)?;
    let f = cfg.two_form_fn();
    let xs = cfg.generators();
    let chis = cfg.chi_fns();
    for xi in cfg.probes(CONSTRUCTION_SEED, CONSTRUCTION_PROBES) {
        for (k, (x, c)) in xs.iter().zip(&chis).enumerate() {
            let r = eqchi_residual(x, c, &f, xi);
            if r > FIELD_TOL {
                return Err(Error::Domain(format!("chi_{} residual {r:.3e} at {xi:?}", k + 1)));
            }
        }
    }
    Ok(chis)
}

/// F_AB = F(X_A, X_B) - C_AB^C chi_C at one point.
pub fn cocycle_at(cfg: &FieldConfig, xi: [f64; 3]) -> Cocycle {
    let p = seed(xi);
    let alg = cfg.algebra();
    let f = cfg.two_form(&p);
    let xs: Vec<[Jet; 3]> = cfg.generators().iter().map(|x| x(&p)).collect();
    let chi: Vec<f64> = (0..cfg.dim()).map(|k| cfg.chi(k, &p).re()).collect();
    let n = cfg.dim();
    Cocycle::from_fn(n, |a, b| {
        let w = interior(&xs[a], &f);
        let fab: f64 = (0..3).map(|k| (w[k] * xs[b][k]).re()).sum();
        fab - (0..n).map(|c| alg.c(a, b, c) * chi[c]).sum::<f64>()
    })
}

/// The cocycle, checked to be constant over probes and to satisfy the cocycle identity.
pub fn cocycle(cfg: &FieldConfig) -> Result<Cocycle> {
    let c0 = cocycle_at(cfg, cfg.reference_point());
    for xi in cfg.probes(CONSTRUCTION_SEED, CONSTRUCTION_PROBES) {
        let d = cocycle_at(cfg, xi).max_abs_diff(&c0);
        if d > 1e-9 * (1.0 + c0.f.iter().fold(0.0f64, |r, v| r.max(v.abs()))) {
            return Err(Error::Domain(format!("cocycle not constant: deviation {d:.3e} at {xi:?}")));
        }
    }
    let r = c0.cocycle_residual(&cfg.algebra());
    if r > 1e-12 {
        return Err(Error::Domain(format!("cocycle identity violated: {r:.3e}")));
    }
    Ok(c0)
}

/// The central extension realised by the symmetry operators.
pub fn extension(cfg: &FieldConfig) -> Result<ExtendedAlgebra> {
    Ok(ExtendedAlgebra::new(cfg.algebra(), cocycle(cfg)?))
}

/// One computed row (dim, ind, s, l, m~, decision) for de Sitter space (m = 3).
pub fn table3_row(cfg: &FieldConfig) -> Result<Integrability> {
    integrability_check(&extension(cfg)?, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cfg(id: CaseId) -> FieldConfig {
        let a = if id.is_family() { Some(1.0) } else { None };
        FieldConfig::new(Case::new(id, a).unwrap(), PhysParams::default()).unwrap()
    }

    #[test]
    fn zeta_validation() {
        let mut p = PhysParams { zeta: 0.2, ..PhysParams::default() };
        assert!(FieldConfig::new(Case::plain(CaseId::G31), p).is_err());
        p.zeta = 1.0 / 6.0;
        assert!(FieldConfig::new(Case::plain(CaseId::G31), p).is_ok());
    }

    #[test]
    fn g32_and_g34_form_values() {
        let mut p = PhysParams { mu: 2.0, ..PhysParams::default() };
        let c = FieldConfig::new(Case::plain(CaseId::G32), p).unwrap();
        let f = c.two_form(&seed([0.3, -0.2, 0.5]));
        assert_eq!(f[0][1].re(), 2.0);
        assert_eq!(f[0][2].re(), 0.0);
        p.mu = 1.0;
        let c = FieldConfig::new(Case::plain(CaseId::G34), p).unwrap();
        assert!((c.two_form(&seed([0.3, 0.0, 0.5]))[0][1].re() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coordinate_lie_derivative_matches_cartan() {
        for id in CaseId::ALL {
            let c = cfg(id);
            let f = c.two_form_fn();
            for x in c.generators() {
                for xi in c.probes(3, 5) {
                    let a = lie_derivative(&x, &f, xi);
                    let b = lie_derivative_coordinate(&x, &f, xi);
                    for i in 0..3 {
                        for j in 0..3 {
                            assert!((a[i][j] - b[i][j]).abs() < 1e-10, "{id}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn d1_on_q1_coefficient_form() {
        // X = d_q1 on F = q1 dq1 ^ dq2 gives L_X F = dq1 ^ dq2.
        let x: VectorFn = Arc::new(|_p| [Jet::real(1.0), Jet::zero(), Jet::zero()]);
        let f: TwoFormFn = Arc::new(|p| {
            let mut m = zero3();
            set(&mut m, 0, 1, p[0]);
            m
        });
        let l = lie_derivative(&x, &f, [0.4, 0.1, 0.2]);
        assert!((l[0][1] - 1.0).abs() < 1e-15);
        assert!((l[1][0] + 1.0).abs() < 1e-15);
        let _ = Complex64::new(0.0, 0.0);
    }
}
