//! The de Sitter hyperboloid, rectifying charts for every catalog row,
//! induced metrics, generator pushforwards and the matrix-exponential
//! rectification construction.

use crate::error::{Error, Result};
use crate::jet::{Jet, Point, VectorFn};
use crate::lie::{subalgebra, Case, CaseId, ETA, J_PAIRS};
use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Minkowski point (x0, x1, x2, x3).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub x: [f64; 4],
}

impl AmbientPoint {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        AmbientPoint { x: [x0, x1, x2, x3] }
    }

    /// |x0^2 - x1^2 - x2^2 - x3^2 + 1|.
    pub fn hyperboloid_residual(&self) -> f64 {
        let [a, b, c, d] = self.x;
        (a * a - b * b - c * c - d * d + 1.0).abs()
    }

    pub fn on_hyperboloid(&self) -> bool {
        self.hyperboloid_residual() < 1e-12
    }
}

/// Uniformly seeded points on the hyperboloid, x = (sinh t, cosh t n).
pub fn random_hyperboloid_points(seed: u64, n: usize) -> Vec<AmbientPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let t: f64 = rng.gen_range(-1.5..1.5);
            let z: f64 = rng.gen_range(-1.0..1.0);
            let ph: f64 = rng.gen_range(0.0..2.0 * PI);
            let s = (1.0 - z * z).sqrt();
            AmbientPoint::new(t.sinh(), t.cosh() * s * ph.cos(), t.cosh() * s * ph.sin(), t.cosh() * z)
        })
        .collect()
}

/// Ambient components of sum_k c_k J_k at x, with J_ij = x_i d_j - x_j d_i.
pub fn ambient_field<T>(c: &[f64; 6], x: &[T; 4]) -> [T; 4]
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let mut out = [x[0] * 0.0; 4];
    for (k, &(i, j)) in J_PAIRS.iter().enumerate() {
        if c[k] == 0.0 {
            continue;
        }
        out[j] = out[j] + x[i] * (c[k] * ETA[i]);
        out[i] = out[i] - x[j] * (c[k] * ETA[j]);
    }
    out
}

/// A rectifying chart (q^1..q^r, u^1..u^{3-r}) onto the hyperboloid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chart {
    pub case: Case,
    pub r: usize,
    /// Open coordinate box.
    pub domain: [(f64, f64); 3],
    pub coord_names: [&'static str; 3],
}

const EDGE: f64 = 0.1;

/// Hard-coded rectifying chart of a catalog row.
pub fn chart_for(case: Case) -> Chart {
    use CaseId::*;
    let r = case.id.orbit_dim();
    let half = (-FRAC_PI_2 + EDGE, FRAC_PI_2 - EDGE);
    let domain = match case.id {
        G11 => [(-2.0, 2.0), (EDGE, PI - EDGE), (EDGE, PI - EDGE)],
        G12 => [(-PI, PI), (-2.0, 2.0), half],
        G13a => [(-2.0, 2.0), (-1.5, 1.5), half],
        G14 => [(-2.0, 2.0), (-1.5, 0.3), (0.6, 1.4)],
        G21 | G32 => [(-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
        G22 => [(-PI, PI), (-2.0, 2.0), (EDGE, FRAC_PI_2 - EDGE)],
        G23 => [(-2.0, 2.0), (-2.0, 2.0), half],
        G31 | G33a | G41 => [(-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
        G34 => [(-PI, PI), half, (-2.0, 2.0)],
        G35 => [(-3.0, 3.0), half, (EDGE, PI - EDGE)],
    };
    let coord_names = match r {
        1 => ["q1", "u1", "u2"],
        2 => ["q1", "q2", "u1"],
        _ => ["q1", "q2", "q3"],
    };
    Chart { case, r, domain, coord_names }
}

impl Chart {
    /// The embedding x(xi) evaluated on jets.
    pub fn map_jet(&self, p: &Point) -> [Jet; 4] {
        use CaseId::*;
        let a = self.case.param();
        let (q1, v2, v3) = (p[0], p[1], p[2]);
        match self.case.id {
            G11 => {
                let (u1, u2) = (v2, v3);
                let s = u1.sin() * u2.sin();
                [-(s * q1.sinh()), u2.cos(), u1.cos() * u2.sin(), s * q1.cosh()]
            }
            G12 | G13a => {
                let (u1, u2) = (v2, v3);
                let x1 = -(u1.cosh() * u2.cos() * q1.sin());
                let x2 = u1.cosh() * u2.cos() * q1.cos();
                if self.case.id == G12 {
                    [u1.sinh(), x1, x2, u1.cosh() * u2.sin()]
                } else {
                    let aq = q1 * a;
                    let cs = u1.cosh() * u2.sin();
                    [-(cs * aq.sinh()) + u1.sinh() * aq.cosh(), x1, x2, cs * aq.cosh() - u1.sinh() * aq.sinh()]
                }
            }
            G14 => {
                let (u1, u2) = (v2, v3);
                let w = u1.cosh() * u2.sin() - u1.sinh();
                let h = q1 * q1 * 0.5;
                [-(h * w) + u1.sinh(), q1 * w, u1.cosh() * u2.cos(), -(h * w) + u1.cosh() * u2.sin()]
            }
            G21 | G32 => {
                let (q2, u) = (v2, v3);
                let em = (-u).exp();
                let h = em * (q1 * q1 + q2 * q2) * 0.5;
                [u.sinh() - h, q1 * em, q2 * em, u.cosh() - h]
            }
            G22 => {
                let (q2, u) = (v2, v3);
                [-(u.sin() * q2.sinh()), u.cos() * q1.cos(), u.cos() * q1.sin(), u.sin() * q2.cosh()]
            }
            G23 => {
                let (q2, u) = (v2, v3);
                let e2 = q2.exp();
                let h = q1 * q1 * e2 * 0.5;
                [-(u.cos() * (q2.sinh() + h)), q1 * e2 * u.cos(), u.sin(), u.cos() * (q2.cosh() - h)]
            }
            G31 | G41 | G33a => {
                let (q2, q3) = (v2, v3);
                let t = if self.case.id == G33a { q3 * a } else { q3 };
                let e = t.exp();
                let h = e * (q1 * q1 + q2 * q2) * 0.5;
                [-t.sinh() - h, q1 * e, q2 * e, t.cosh() - h]
            }
            G34 => {
                let (q2, u) = (v2, v3);
                [u.sinh(), -(u.cosh() * q1.sin() * q2.cos()), u.cosh() * q1.cos() * q2.cos(), u.cosh() * q2.sin()]
            }
            G35 => {
                let (q2, u) = (v2, v3);
                [
                    -(u.sin() * q1.sinh() * q2.cos()),
                    u.sin() * q1.cosh() * q2.cos(),
                    u.sin() * q2.sin(),
                    u.cos(),
                ]
            }
        }
    }

    pub fn map(&self, xi: [f64; 3]) -> AmbientPoint {
        let x = self.map_jet(&seed(xi));
        AmbientPoint { x: x.map(|j| j.re()) }
    }

    /// dx^i / dxi^a as a 4x3 matrix.
    pub fn jacobian(&self, xi: [f64; 3]) -> DMatrix<f64> {
        let x = self.map_jet(&seed(xi));
        DMatrix::from_fn(4, 3, |i, a| x[i].d1(a).re)
    }

    /// g_ab = eta_ij dx^i/dxi^a dx^j/dxi^b as jets (two orders exact).
    pub fn metric_jet(&self, p: &Point) -> [[Jet; 3]; 3] {
        let x = self.map_jet(p);
        let dx: [[Jet; 3]; 4] = std::array::from_fn(|i| std::array::from_fn(|a| x[i].partial(a)));
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut s = Jet::zero();
                for i in 0..4 {
                    s += dx[i][a] * dx[i][b] * ETA[i];
                }
                s
            })
        })
    }

    pub fn induced_metric(&self, xi: [f64; 3]) -> Result<MetricSample> {
        let g = self.metric_jet(&seed(xi));
        MetricSample::new(std::array::from_fn(|a| std::array::from_fn(|b| g[a][b].re())), xi)
    }

    pub fn contains(&self, xi: [f64; 3]) -> bool {
        xi.iter().zip(&self.domain).all(|(v, (lo, hi))| v > lo && v < hi)
    }

    /// Box shrunk by `margin` times its width on each side.
    pub fn shrunken(&self, margin: f64) -> [(f64, f64); 3] {
        self.domain.map(|(lo, hi)| {
            let w = hi - lo;
            (lo + margin * w, hi - margin * w)
        })
    }

    /// Seeded uniform samples from the box shrunk by `margin`.
    pub fn sample_points(&self, seed: u64, n: usize, margin: f64) -> Vec<[f64; 3]> {
        let b = self.shrunken(margin);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| b.map(|(lo, hi)| rng.gen_range(lo..hi))).collect()
    }
}

/// Seeds a real chart point (lambda = 0).
pub fn seed(xi: [f64; 3]) -> Point {
    Jet::seed_chart(xi, Complex64::new(0.0, 0.0))
}

/// Metric data at a chart point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSample {
    pub g: [[f64; 3]; 3],
    pub g_inv: [[f64; 3]; 3],
    pub sqrt_abs_det: f64,
    pub point: [f64; 3],
}

impl MetricSample {
    pub fn new(g: [[f64; 3]; 3], point: [f64; 3]) -> Result<Self> {
        let m = Matrix3::from_fn(|a, b| g[a][b]);
        let eig = SymmetricEigen::new(m).eigenvalues;
        let pos = eig.iter().filter(|e| **e > 0.0).count();
        let negc = eig.iter().filter(|e| **e < 0.0).count();
        if pos != 1 || negc != 2 {
            return Err(Error::Signature(point));
        }
        let inv = m.try_inverse().ok_or(Error::Signature(point))?;
        Ok(MetricSample {
            g,
            g_inv: std::array::from_fn(|a| std::array::from_fn(|b| inv[(a, b)])),
            sqrt_abs_det: m.determinant().abs().sqrt(),
            point,
        })
    }

    /// max |g g_inv - I|.
    pub fn inverse_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let s: f64 = (0..3).map(|c| self.g[a][c] * self.g_inv[c][b]).sum();
                r = r.max((s - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        r
    }
}

/// Signed-permutation frame P with TableField_A = sum_B P_AB CatalogGenerator_B.
pub fn chart_frame(id: CaseId) -> DMatrix<f64> {
    use CaseId::*;
    let n = id.dim();
    match id {
        G11 | G12 | G13a => DMatrix::from_element(1, 1, -1.0),
        G22 => -DMatrix::identity(2, 2),
        G34 => DMatrix::from_row_slice(3, 3, &[-1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]),
        G35 => DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]),
        _ => DMatrix::identity(n, n),
    }
}

/// Ambient coefficient rows of the chart-basis generators.
pub fn chart_generator_coeffs(case: Case) -> Vec<[f64; 6]> {
    let spec = subalgebra(case);
    let p = chart_frame(case.id);
    let n = spec.dim();
    (0..n)
        .map(|a| {
            let mut row = [0.0; 6];
            for b in 0..n {
                for k in 0..6 {
                    row[k] += p[(a, b)] * spec.generator_coeffs[b][k];
                }
            }
            row
        })
        .collect()
}

/// Generator A in rectifying coordinates, evaluated on jets.
pub fn table2_field(case: Case, a_idx: usize, p: &Point) -> [Jet; 3] {
    use CaseId::*;
    let a = case.param();
    let (q1, q2) = (p[0], p[1]);
    let z = Jet::zero();
    let one = Jet::real(1.0);
    let unit = |k: usize| -> [Jet; 3] { std::array::from_fn(|i| if i == k { one } else { z }) };
    match (case.id, a_idx) {
        (_, 0) => unit(0),
        (G21 | G22 | G31 | G32 | G33a | G41, 1) => unit(1),
        (G23, 1) => [-q1, one, z],
        (G31, 2) | (G41, 3) => [-q1, -q2, one],
        (G32, 2) | (G41, 2) => [-q2, q1, z],
        (G33a, 2) => [-(q1 * a + q2), q1 - q2 * a, one],
        (G34, 1) => [q1.sin() * q2.tan(), q1.cos(), z],
        (G34, 2) => [q1.cos() * q2.tan(), -q1.sin(), z],
        (G35, 1) => [q1.sinh() * q2.tan(), q1.cosh(), z],
        (G35, 2) => [q1.cosh() * q2.tan(), q1.sinh(), z],
        _ => panic!("generator index {a_idx} out of range for {}", case.id),
    }
}

/// All chart-basis generators of a case as vector-field closures.
pub fn table2_fields(case: Case) -> Vec<VectorFn> {
    (0..case.dim())
        .map(|k| {
            let f: VectorFn = Arc::new(move |p: &Point| table2_field(case, k, p));
            f
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PushforwardSample {
    pub components: [f64; 3],
    /// |Jac v - X(x)|, zero when X is tangent to the chart image.
    pub solve_residual: f64,
}

/// Solves Jac v = X_A(x(xi)) for the chart-basis generator A.
pub fn pushforward(case: Case, a_idx: usize, xi: [f64; 3]) -> Result<PushforwardSample> {
    let chart = chart_for(case);
    let coeffs = chart_generator_coeffs(case);
    let c = coeffs.get(a_idx).ok_or_else(|| Error::OutOfRange(format!("generator {a_idx} of {}", case.id)))?;
    let x = chart.map(xi).x;
    let jac = chart.jacobian(xi);
    let rhs = DVector::from_column_slice(&ambient_field(c, &x));
    let svd = jac.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-10 * sv.max() {
        return Err(Error::RankDeficient(xi));
    }
    let qr = jac.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let ls = |b: &DVector<f64>| r.solve_upper_triangular(&(q.transpose() * b));
    let mut v = ls(&rhs).ok_or(Error::RankDeficient(xi))?;
    // one step of iterative refinement
    if let Some(dv) = ls(&(&rhs - &jac * &v)) {
        v += dv;
    }
    let solve_residual = (&jac * &v - &rhs).norm();
    Ok(PushforwardSample { components: [v[0], v[1], v[2]], solve_residual })
}

/// Max over components of |pushforward - table field| / max(1, |table field|) at a point.
/// Fields that blow up at a coordinate singularity are compared relatively.
pub fn pushforward_residual(case: Case, a_idx: usize, xi: [f64; 3]) -> Result<f64> {
    let pf = pushforward(case, a_idx, xi)?;
    let want = table2_field(case, a_idx, &seed(xi)).map(|j| j.re());
    Ok((0..3)
        .map(|k| (pf.components[k] - want[k]).abs() / want[k].abs().max(1.0))
        .fold(pf.solve_residual, f64::max))
}

/// Lie derivative of the induced metric along a chart field: max |(L_X g)_ab|.
pub fn killing_residual(chart: &Chart, field: &VectorFn, xi: [f64; 3]) -> f64 {
    let p = seed(xi);
    let g = chart.metric_jet(&p);
    let x = field(&p);
    let mut r: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let mut s = Complex64::new(0.0, 0.0);
            for c in 0..3 {
                s += x[c].value() * g[a][b].d1(c) + g[c][b].value() * x[c].d1(a) + g[a][c].value() * x[c].d1(b);
            }
            r = r.max(s.norm());
        }
    }
    r
}

/// Generic orbit dimension: max rank of the n x 4 matrix of ambient generator components.
pub fn orbit_rank(case: Case, points: &[AmbientPoint]) -> usize {
    let spec = subalgebra(case);
    let n = spec.dim();
    let mut best = 0;
    for pt in points {
        let m = DMatrix::from_fn(n, 4, |a, i| ambient_field(&spec.generator_coeffs[a], &pt.x)[i]);
        let sv = m.singular_values();
        let smax = sv.max();
        if smax > 0.0 {
            best = best.max(sv.iter().filter(|s| **s > 1e-10 * smax).count());
        }
    }
    best
}

/// Linear representation matrix (acting on column vectors).
pub type RepMatrix = Matrix4<f64>;

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn matexp(y: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = (0..4).map(|i| (0..4).map(|j| y[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0;
    let mut scaled = norm;
    while scaled > 0.25 {
        scaled *= 0.5;
        s += 1;
    }
    let a = y * 0.5f64.powi(s);
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for k in 1..=20 {
        term = term * a / k as f64;
        sum += term;
        if term.amax() < 1e-18 * sum.amax() {
            break;
        }
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

/// prod_a exp(-q^a rho_a) applied to the section value.
pub fn rectify(gens: &[RepMatrix], section: &dyn Fn(&[f64]) -> Vector4<f64>, q: &[f64], u: &[f64]) -> Vector4<f64> {
    let mut m = Matrix4::identity();
    for (rho, qa) in gens.iter().zip(q) {
        m *= matexp(&(rho * -qa));
    }
    m * section(u)
}

/// max |[rho_A, rho_B] - C_AB^C rho_C|.
pub fn rep_commutator_residual(rhos: &[RepMatrix], alg: &crate::lie::LieAlgebra) -> f64 {
    let n = rhos.len();
    let mut r: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let mut d = rhos[a] * rhos[b] - rhos[b] * rhos[a];
            for (c, rc) in rhos.iter().enumerate() {
                d -= rc * alg.c(a, b, c);
            }
            r = r.max(d.amax());
        }
    }
    r
}

/// The SO(1,2) worked example: representation matrices in (y1, y2, y3, y0)
/// order for the primed basis, with y1 = -x0, y2 = x2, y3 = x3, y0 = x1.
pub mod so12 {
    use super::*;
    use crate::lie::LieAlgebra;

    pub fn rho() -> [RepMatrix; 3] {
        let mut r1 = Matrix4::zeros();
        r1[(0, 3)] = -1.0;
        r1[(3, 0)] = -1.0;
        let mut r2 = Matrix4::zeros();
        r2[(1, 3)] = -1.0;
        r2[(3, 1)] = 1.0;
        let mut r3 = Matrix4::zeros();
        r3[(0, 1)] = -1.0;
        r3[(1, 0)] = -1.0;
        [r1, r2, r3]
    }

    /// Table of the primed basis: [1,2] = 3, [1,3] = 2, [2,3] = 1.
    pub fn primed_algebra() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 0, 1.0)])
    }

    /// Section through the base point.
    pub fn section(ut: &[f64]) -> Vector4<f64> {
        Vector4::new(0.0, 0.0, ut[0], ut[1] + 1.0)
    }

    pub fn y_to_x(y: &Vector4<f64>) -> AmbientPoint {
        AmbientPoint::new(-y[0], y[3], y[1], y[2])
    }

    /// Rectified point in the ambient space.
    pub fn rectified(q1: f64, q2: f64, ut1: f64, ut2: f64) -> AmbientPoint {
        let r = rho();
        y_to_x(&rectify(&r[..2], &section, &[q1, q2], &[ut1, ut2]))
    }

    /// Closed form of the rectified map.
    pub fn closed_form(q1: f64, q2: f64, ut1: f64, ut2: f64) -> AmbientPoint {
        let w = ut2 + 1.0;
        AmbientPoint::new(-w * q1.sinh() * q2.cos(), w * q1.cosh() * q2.cos(), w * q2.sin(), ut1)
    }

    /// The invariant kappa(ut) = J(x(q, ut)).
    pub fn kappa(ut1: f64, ut2: f64) -> f64 {
        ut1 * ut1 + (ut2 + 1.0) * (ut2 + 1.0)
    }

    /// Restriction to kappa = 1 via ut1 = cos u, ut2 = sin u - 1.
    pub fn restricted(q1: f64, q2: f64, u: f64) -> AmbientPoint {
        rectified(q1, q2, u.cos(), u.sin() - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_points() {
        let p = chart_for(Case::plain(CaseId::G35)).map([0.0, 0.0, FRAC_PI_2]);
        for (a, b) in p.x.iter().zip([0.0, 1.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let p = chart_for(Case::plain(CaseId::G31)).map([0.0, 0.0, 0.0]);
        assert_eq!(p.x, [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn matexp_boost_and_null() {
        let mut b = Matrix4::zeros();
        b[(0, 1)] = 1.0;
        b[(1, 0)] = 1.0;
        let t = 2.3;
        let e = matexp(&(b * t));
        assert!((e[(0, 0)] - t.cosh()).abs() < 1e-13 * t.cosh());
        assert!((e[(0, 1)] - t.sinh()).abs() < 1e-13 * t.cosh());
        assert!((e[(2, 2)] - 1.0).abs() < 1e-14);
        assert_eq!(matexp(&Matrix4::zeros()), Matrix4::identity());
    }

    #[test]
    fn g34_pushforward_example() {
        let pf = pushforward(Case::plain(CaseId::G34), 1, [0.0, 0.3, 0.4]).unwrap();
        assert!(pf.components[0].abs() < 1e-10);
        assert!((pf.components[1] - 1.0).abs() < 1e-10);
        assert!(pf.components[2].abs() < 1e-10);
    }

    #[test]
    fn g35_signature_needs_interior() {
        let c = chart_for(Case::plain(CaseId::G35));
        assert!(c.induced_metric([0.1, 0.2, 1.0]).is_ok());
    }
}
