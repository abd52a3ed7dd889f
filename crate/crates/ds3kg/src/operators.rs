//! First- and second-order differential operators acting on jets, their
//! commutators, the Klein-Gordon operator of each integrable case and the
//! symmetry test [H, X_A] = 0.

use crate::error::{Error, Result};
use crate::fields::FieldConfig;
use crate::geometry::chart_for;
use crate::jet::{Jet, Point, ScalarFn, NV};
use crate::lie::{CaseId, Cocycle, LieAlgebra};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

pub type Coeff4Fn = Arc<dyn Fn(&Point) -> [Jet; NV] + Send + Sync>;
pub type Matrix3Fn = Arc<dyn Fn(&Point) -> [[Jet; 3]; 3] + Send + Sync>;
pub type Vector3Fn = Arc<dyn Fn(&Point) -> [Jet; 3] + Send + Sync>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// a^mu(x) d_mu + b(x) over the three chart variables and lambda.
#[derive(Clone)]
pub struct DiffOp1 {
    pub coeffs: Coeff4Fn,
    pub scalar: ScalarFn,
}

impl DiffOp1 {
    pub fn new(coeffs: Coeff4Fn, scalar: ScalarFn) -> Self {
        DiffOp1 { coeffs, scalar }
    }

    /// Multiplication by a constant.
    pub fn constant(v: Complex64) -> Self {
        DiffOp1 {
            coeffs: Arc::new(|_| [Jet::zero(); NV]),
            scalar: Arc::new(move |_| Jet::constant(v)),
        }
    }

    /// d / d x_k.
    pub fn partial(k: usize) -> Self {
        DiffOp1 {
            coeffs: Arc::new(move |_| std::array::from_fn(|i| if i == k { Jet::real(1.0) } else { Jet::zero() })),
            scalar: Arc::new(|_| Jet::zero()),
        }
    }

    pub fn apply_jet(&self, p: &Point, f: &Jet) -> Jet {
        let a = (self.coeffs)(p);
        let mut out = (self.scalar)(p) * *f;
        for (k, ak) in a.iter().enumerate() {
            if ak.value().norm() != 0.0 || ak.degree() > 0 {
                out += *ak * f.partial(k);
            }
        }
        out.with_order(f.order() - 1)
    }

    pub fn apply(&self, f: &ScalarFn, p: &Point) -> Jet {
        self.apply_jet(p, &f(p))
    }

    /// The function x -> (op f)(x).
    pub fn apply_fn(&self, f: &ScalarFn) -> ScalarFn {
        let op = self.clone();
        let f = f.clone();
        Arc::new(move |p| op.apply(&f, p))
    }

    /// Coefficient values at a point.
    pub fn sample(&self, p: &Point) -> OpSample {
        OpSample {
            coeffs: (self.coeffs)(p).map(|j| j.value()),
            scalar: (self.scalar)(p).value(),
        }
    }
}

/// Coefficients of a first-order operator at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpSample {
    pub coeffs: [Complex64; NV],
    pub scalar: Complex64,
}

impl OpSample {
    pub fn max_abs_diff(&self, o: &OpSample) -> f64 {
        self.coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold((self.scalar - o.scalar).norm(), f64::max)
    }
}

/// [A, B] as an operator: c^mu = a.grad b^mu - b.grad a^mu, scalar likewise.
pub fn commutator(a: &DiffOp1, b: &DiffOp1) -> DiffOp1 {
    let (a1, b1) = (a.clone(), b.clone());
    let (a2, b2) = (a.clone(), b.clone());
    let coeffs: Coeff4Fn = Arc::new(move |p| {
        let ca = (a1.coeffs)(p);
        let cb = (b1.coeffs)(p);
        std::array::from_fn(|mu| {
            let mut s = Jet::zero();
            for nu in 0..NV {
                s += ca[nu] * cb[mu].partial(nu) - cb[nu] * ca[mu].partial(nu);
            }
            s
        })
    });
    let scalar: ScalarFn = Arc::new(move |p| {
        let ca = (a2.coeffs)(p);
        let cb = (b2.coeffs)(p);
        let sa = (a2.scalar)(p);
        let sb = (b2.scalar)(p);
        let mut s = Jet::zero();
        for nu in 0..NV {
            s += ca[nu] * sb.partial(nu) - cb[nu] * sa.partial(nu);
        }
        s
    });
    DiffOp1 { coeffs, scalar }
}

/// Coefficients of [A, B] at one point.
pub fn commutator_at(a: &DiffOp1, b: &DiffOp1, p: &Point) -> OpSample {
    commutator(a, b).sample(p)
}

/// s^{ab} d_a d_b + f^a d_a + c over the three chart variables.
#[derive(Clone)]
pub struct DiffOp2 {
    pub second: Matrix3Fn,
    pub first: Vector3Fn,
    pub scalar: ScalarFn,
}

/// The separate contributions of a second-order operator applied to f.
#[derive(Clone, Copy, Debug)]
pub struct Op2Terms {
    pub second: [[Complex64; 3]; 3],
    pub first: [Complex64; 3],
    pub scalar: Complex64,
}

impl Op2Terms {
    pub fn total(&self) -> Complex64 {
        self.second.iter().flatten().sum::<Complex64>() + self.first.iter().sum::<Complex64>() + self.scalar
    }

    pub fn abs_sum(&self) -> f64 {
        self.second.iter().flatten().map(|v| v.norm()).sum::<f64>()
            + self.first.iter().map(|v| v.norm()).sum::<f64>()
            + self.scalar.norm()
    }
}

impl DiffOp2 {
    pub fn apply_jet(&self, p: &Point, f: &Jet) -> Jet {
        let s = (self.second)(p);
        let fa = (self.first)(p);
        let mut out = (self.scalar)(p) * *f;
        for a in 0..3 {
            let da = f.partial(a);
            out += fa[a] * da;
            for b in 0..3 {
                out += s[a][b] * da.partial(b);
            }
        }
        out.with_order(f.order() - 2)
    }

    pub fn apply(&self, f: &ScalarFn, p: &Point) -> Jet {
        self.apply_jet(p, &f(p))
    }

    pub fn apply_fn(&self, f: &ScalarFn) -> ScalarFn {
        let op = self.clone();
        let f = f.clone();
        Arc::new(move |p| op.apply(&f, p))
    }

    /// Individual term values of (op f)(p).
    pub fn terms(&self, f: &ScalarFn, p: &Point) -> Op2Terms {
        self.terms_jet(p, &f(p))
    }

    pub fn terms_jet(&self, p: &Point, fv: &Jet) -> Op2Terms {
        let s = (self.second)(p);
        let fa = (self.first)(p);
        Op2Terms {
            second: std::array::from_fn(|a| std::array::from_fn(|b| s[a][b].value() * fv.d2(a, b))),
            first: std::array::from_fn(|a| fa[a].value() * fv.d1(a)),
            scalar: (self.scalar)(p).value() * fv.value(),
        }
    }

    pub fn symmetry_residual(&self, p: &Point) -> f64 {
        let s = (self.second)(p);
        let mut r: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                r = r.max((s[a][b] - s[b][a]).value().norm());
            }
        }
        r
    }
}

/// D_a = d_a - i e A_a.
pub fn covariant_derivative(cfg: &FieldConfig, a: usize) -> DiffOp1 {
    let e = cfg.params.e;
    let cf = cfg.clone();
    DiffOp1 {
        coeffs: Arc::new(move |_| std::array::from_fn(|i| if i == a { Jet::real(1.0) } else { Jet::zero() })),
        scalar: Arc::new(move |p| cf.potential(p)[a] * (-I * e)),
    }
}

/// X_A = X^a (d_a - i e A_a) + i e chi_A for every generator.
pub fn symmetry_ops(cfg: &FieldConfig) -> Vec<DiffOp1> {
    let e = cfg.params.e;
    cfg.generators()
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let x2 = x.clone();
            let cf = cfg.clone();
            DiffOp1 {
                coeffs: Arc::new(move |p| {
                    let v = x(p);
                    [v[0], v[1], v[2], Jet::zero()]
                }),
                scalar: Arc::new(move |p| {
                    let v = x2(p);
                    let a = cf.potential(p);
                    let xa = v[0] * a[0] + v[1] * a[1] + v[2] * a[2];
                    (cf.chi(k, p) - xa) * (I * e)
                }),
            }
        })
        .collect()
}

/// The symmetry operators as printed in explicit form for the integrable cases.
pub fn printed_symmetry_ops(cfg: &FieldConfig) -> Result<Vec<DiffOp1>> {
    use CaseId::*;
    let pr = cfg.params;
    let e = pr.e;
    let a = cfg.case.param();
    let ie = I * e;
    type F3 = fn(&Point, f64) -> [Jet; 3];
    let vec_of = |f: Arc<dyn Fn(&Point) -> [Jet; 3] + Send + Sync>, s: ScalarFn| DiffOp1 {
        coeffs: Arc::new(move |p| {
            let v = f(p);
            [v[0], v[1], v[2], Jet::zero()]
        }),
        scalar: s,
    };
    let z = Jet::zero();
    let one = Jet::real(1.0);
    let ops: Vec<DiffOp1> = match cfg.case.id {
        G31 => {
            let (m1, m2) = (pr.mu1, pr.mu2);
            vec![
                vec_of(Arc::new(move |_| [one, z, z]), Arc::new(move |p| p[2].exp() * (-ie * m1))),
                vec_of(Arc::new(move |_| [z, one, z]), Arc::new(move |p| p[2].exp() * (-ie * m2))),
                vec_of(Arc::new(move |p| [-p[0], -p[1], one]), Arc::new(|_| Jet::zero())),
            ]
        }
        G32 => {
            let mu = pr.mu;
            vec![
                vec_of(Arc::new(move |_| [one, z, z]), Arc::new(move |p| p[1] * (-0.5 * ie * mu))),
                vec_of(Arc::new(move |_| [z, one, z]), Arc::new(move |p| p[0] * (0.5 * ie * mu))),
                vec_of(Arc::new(move |p| [-p[1], p[0], z]), Arc::new(|_| Jet::zero())),
            ]
        }
        G33a => {
            let (m1, m2) = (pr.mu1, pr.mu2);
            let k = ie / (1.0 + a * a);
            vec![
                vec_of(
                    Arc::new(move |_| [one, z, z]),
                    Arc::new(move |p| {
                        (p[2] * a).exp() * (p[2].cos() * (a * m1 - m2) + p[2].sin() * (m1 + a * m2)) * (-k)
                    }),
                ),
                vec_of(
                    Arc::new(move |_| [z, one, z]),
                    Arc::new(move |p| {
                        (p[2] * a).exp() * (p[2].cos() * (m1 + a * m2) - p[2].sin() * (a * m1 - m2)) * k
                    }),
                ),
                vec_of(Arc::new(move |p| [-(p[0] * a + p[1]), p[0] - p[1] * a, one]), Arc::new(|_| Jet::zero())),
            ]
        }
        G34 | G35 => {
            let mu = pr.mu;
            let hyper = cfg.case.id == G35;
            let f2: F3 = |p, _| {
                [p[0].sin() * p[1].tan(), p[0].cos(), Jet::zero()]
            };
            let f3: F3 = |p, _| {
                [p[0].cos() * p[1].tan(), -p[0].sin(), Jet::zero()]
            };
            let h2: F3 = |p, _| {
                [p[0].sinh() * p[1].tan(), p[0].cosh(), Jet::zero()]
            };
            let h3: F3 = |p, _| {
                [p[0].cosh() * p[1].tan(), p[0].sinh(), Jet::zero()]
            };
            let (g2, g3) = if hyper { (h2, h3) } else { (f2, f3) };
            let s2: ScalarFn = if hyper {
                Arc::new(move |p| p[0].sinh() / p[1].cos() * (ie * mu))
            } else {
                Arc::new(move |p| p[0].sin() / p[1].cos() * (ie * mu))
            };
            let s3: ScalarFn = if hyper {
                Arc::new(move |p| p[0].cosh() / p[1].cos() * (ie * mu))
            } else {
                Arc::new(move |p| p[0].cos() / p[1].cos() * (ie * mu))
            };
            vec![
                vec_of(Arc::new(move |_| [one, z, z]), Arc::new(|_| Jet::zero())),
                vec_of(Arc::new(move |p| g2(p, 0.0)), s2),
                vec_of(Arc::new(move |p| g3(p, 0.0)), s3),
            ]
        }
        id => return Err(Error::Unsupported(id.label().into(), "no explicit operator display".into())),
    };
    Ok(ops)
}

/// Result of fitting commutators into span{ops, central}.
#[derive(Clone, Debug, Serialize)]
pub struct TableFit {
    pub algebra: LieAlgebra,
    pub cocycle: Cocycle,
    pub residual: f64,
}

/// Tolerance certifying a fitted commutation table.
pub const TABLE_TOL: f64 = 1e-9;

/// Least-squares fit [op_A, op_B] = C_AB^C op_C + F_AB * central over probes.
pub fn commutation_table_fit(ops: &[DiffOp1], probes: &[Point], central: Complex64) -> TableFit {
    let n = ops.len();
    let samples: Vec<Vec<OpSample>> = probes.iter().map(|p| ops.iter().map(|o| o.sample(p)).collect()).collect();
    let rows = probes.len() * (NV + 1) * 2;
    let mut alg = LieAlgebra::zero(n);
    let mut coc = Cocycle::zero(n);
    let mut residual: f64 = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            let comm = commutator(&ops[a], &ops[b]);
            let mut m = DMatrix::<f64>::zeros(rows, n + 1);
            let mut rhs = DVector::<f64>::zeros(rows);
            let mut r = 0;
            for (pi, p) in probes.iter().enumerate() {
                let s = comm.sample(p);
                for k in 0..=NV {
                    let lhs = if k < NV { s.coeffs[k] } else { s.scalar };
                    for part in 0..2 {
                        let pick = |z: Complex64| if part == 0 { z.re } else { z.im };
                        rhs[r] = pick(lhs);
                        for cidx in 0..n {
                            let o = &samples[pi][cidx];
                            m[(r, cidx)] = pick(if k < NV { o.coeffs[k] } else { o.scalar });
                        }
                        m[(r, n)] = if k < NV { 0.0 } else { pick(central) };
                        r += 1;
                    }
                }
            }
            let svd = m.clone().svd(true, true);
            let x = svd.solve(&rhs, 1e-12).expect("svd solve");
            let res = (&m * &x - &rhs).amax();
            residual = residual.max(res);
            for cidx in 0..n {
                let v = x[cidx];
                alg.structure_constants[(a * n + b) * n + cidx] = v;
                alg.structure_constants[(b * n + a) * n + cidx] = -v;
            }
            coc.set(a, b, x[n]);
        }
    }
    TableFit { algebra: alg, cocycle: coc, residual }
}

/// Max deviation of [op_A, op_B] from C_AB^C op_C + F_AB central over probes.
pub fn table_residual(ops: &[DiffOp1], alg: &LieAlgebra, coc: &Cocycle, central: Complex64, probes: &[Point]) -> f64 {
    let n = ops.len();
    let mut r: f64 = 0.0;
    for p in probes {
        let s: Vec<OpSample> = ops.iter().map(|o| o.sample(p)).collect();
        for a in 0..n {
            for b in (a + 1)..n {
                let got = commutator_at(&ops[a], &ops[b], p);
                let mut want = OpSample { coeffs: [Complex64::new(0.0, 0.0); NV], scalar: central * coc.get(a, b) };
                for (cidx, sc) in s.iter().enumerate() {
                    let k = alg.c(a, b, cidx);
                    if k != 0.0 {
                        for mu in 0..NV {
                            want.coeffs[mu] += sc.coeffs[mu] * k;
                        }
                        want.scalar += sc.scalar * k;
                    }
                }
                r = r.max(got.max_abs_diff(&want));
            }
        }
    }
    r
}

/// Seeded chart probes (10% margin) with lambda = 0.
pub fn chart_probes(cfg: &FieldConfig, seed_val: u64, n: usize) -> Vec<Point> {
    cfg.probes(seed_val, n).into_iter().map(crate::geometry::seed).collect()
}

/// Printed commutation tables of the operator algebras in the chart basis.
pub fn printed_hat_table(cfg: &FieldConfig) -> (LieAlgebra, Cocycle) {
    use CaseId::*;
    let a = cfg.case.param();
    let mu = cfg.params.mu;
    let n = cfg.dim();
    let (br, central): (Vec<(usize, usize, usize, f64)>, Vec<(usize, usize, f64)>) = match cfg.case.id {
        G11 | G12 | G13a | G14 => (vec![], vec![]),
        G21 | G22 => (vec![], vec![(0, 1, mu)]),
        G23 => (vec![(0, 1, 0, -1.0)], vec![]),
        G31 => (vec![(0, 2, 0, -1.0), (1, 2, 1, -1.0)], vec![]),
        G32 => (vec![(0, 2, 1, 1.0), (1, 2, 0, -1.0)], vec![(0, 1, mu)]),
        G33a => (vec![(0, 2, 1, 1.0), (0, 2, 0, -a), (1, 2, 0, -1.0), (1, 2, 1, -a)], vec![]),
        G34 => (vec![(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)], vec![]),
        G35 => (vec![(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 0, 1.0)], vec![]),
        G41 => (vec![(0, 2, 1, 1.0), (0, 3, 0, -1.0), (1, 2, 0, -1.0), (1, 3, 1, -1.0)], vec![]),
    };
    (LieAlgebra::from_brackets(n, &br), Cocycle::from_entries(n, &central))
}

fn diag3(d: [Jet; 3]) -> [[Jet; 3]; 3] {
    let z = Jet::zero();
    [[d[0], z, z], [z, d[1], z], [z, z, d[2]]]
}

fn inverse3(g: &[[Jet; 3]; 3]) -> ([[Jet; 3]; 3], Jet) {
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        g[r0][c0] * g[r1][c1] - g[r0][c1] * g[r1][c0]
    };
    let det = g[0][0] * cof(0, 0) + g[0][1] * cof(0, 1) + g[0][2] * cof(0, 2);
    let rd = det.recip();
    (std::array::from_fn(|a| std::array::from_fn(|b| cof(b, a) * rd)), det)
}

/// Klein-Gordon operator assembled from the induced metric and the potential:
/// (1/sqrt g) D_a (sqrt g g^{ab} D_b) + 6 zeta + m^2.
pub fn kg_generic(cfg: &FieldConfig) -> DiffOp2 {
    let chart = chart_for(cfg.case);
    let e = cfg.params.e;
    let mass = cfg.params.mass_term();
    let build = {
        let chart = chart.clone();
        move |p: &Point| {
            let g = chart.metric_jet(p);
            let (gi, det) = inverse3(&g);
            let sq = if det.value().re < 0.0 { (-det).sqrt() } else { det.sqrt() };
            (gi, sq)
        }
    };
    let b1 = build.clone();
    let b2 = build.clone();
    let b3 = build;
    let cf1 = cfg.clone();
    let cf2 = cfg.clone();
    DiffOp2 {
        second: Arc::new(move |p| b1(p).0),
        first: Arc::new(move |p| {
            let (gi, sq) = b2(p);
            let a = cf1.potential(p);
            let rs = sq.recip();
            std::array::from_fn(|b| {
                let mut div = Jet::zero();
                let mut ga = Jet::zero();
                for k in 0..3 {
                    div += (sq * gi[k][b]).partial(k);
                    ga += gi[b][k] * a[k];
                }
                div * rs + ga * (-2.0 * I * e)
            })
        }),
        scalar: Arc::new(move |p| {
            let (gi, sq) = b3(p);
            let a = cf2.potential(p);
            let mut div = Jet::zero();
            let mut aa = Jet::zero();
            for i in 0..3 {
                let mut w = Jet::zero();
                for k in 0..3 {
                    w += gi[i][k] * a[k];
                    aa += gi[i][k] * a[i] * a[k];
                }
                div += (sq * w).partial(i);
            }
            div * sq.recip() * (-I * e) + aa * (-e * e) + mass
        }),
    }
}

/// The Klein-Gordon operators written out per case.
pub fn kg_display(cfg: &FieldConfig) -> Result<DiffOp2> {
    use CaseId::*;
    let pr = cfg.params;
    let (e, mu, m1, m2) = (pr.e, pr.mu, pr.mu1, pr.mu2);
    let mass = pr.mass_term();
    let a = cfg.case.param();
    let ie = I * e;
    let z = Jet::zero();
    let op = match cfg.case.id {
        G31 => DiffOp2 {
            second: Arc::new(|p| {
                let w = -(p[2] * -2.0).exp();
                diag3([w, w, Jet::real(1.0)])
            }),
            first: Arc::new(move |p| {
                let s = p[0] * m1 + p[1] * m2;
                [z, z, p[2].exp() * s * (-2.0 * ie) + 2.0]
            }),
            scalar: Arc::new(move |p| {
                let es = p[2].exp() * (p[0] * m1 + p[1] * m2);
                es * (-3.0 * ie) - es * es * (e * e) + mass
            }),
        },
        G32 => DiffOp2 {
            second: Arc::new(|p| {
                let w = -(p[2] * 2.0).exp();
                diag3([w, w, Jet::real(1.0)])
            }),
            first: Arc::new(move |p| {
                let w = (p[2] * 2.0).exp() * (-ie * mu);
                [w * p[1], -(w * p[0]), Jet::real(-2.0)]
            }),
            scalar: Arc::new(move |p| {
                (p[2] * 2.0).exp() * (p[0] * p[0] + p[1] * p[1]) * (0.25 * e * e * mu * mu) + mass
            }),
        },
        G33a => {
            let a3 = move |p: &Point| {
                let (cs, sn) = (p[2].cos(), p[2].sin());
                (p[2] * a).exp() * ((p[0] * m1 - p[1] * m2) * cs + (p[0] * m2 + p[1] * m1) * sn)
            };
            DiffOp2 {
                second: Arc::new(move |p| {
                    let w = -(p[2] * (-2.0 * a)).exp();
                    diag3([w, w, Jet::real(1.0 / (a * a))])
                }),
                first: Arc::new(move |p| [z, z, a3(p) * (-2.0 * ie / (a * a)) + 2.0 / a]),
                scalar: Arc::new(move |p| {
                    let (q1, q2) = (p[0], p[1]);
                    let ea = (p[2] * a).exp();
                    let cterm = (q1 * (3.0 * a) + q2) * m1 + (q1 - q2 * (3.0 * a)) * m2;
                    let sterm = (q2 * (3.0 * a) - q1) * m1 + (q1 * (3.0 * a) + q2) * m2;
                    let t = a3(p);
                    ea * (cterm * p[2].cos() + sterm * p[2].sin()) * (-ie / (a * a)) - t * t * (e * e / (a * a)) + mass
                }),
            }
        }
        G34 => DiffOp2 {
            second: Arc::new(|p| {
                let r = (p[2].cosh() * p[2].cosh()).recip();
                let c2 = p[1].cos();
                diag3([-(r / (c2 * c2)), -r, Jet::real(1.0)])
            }),
            first: Arc::new(move |p| {
                let r = (p[2].cosh() * p[2].cosh()).recip();
                let t2 = p[1].tan();
                [r * t2 / p[1].cos() * (-2.0 * ie * mu), r * t2, p[2].tanh() * 2.0]
            }),
            scalar: Arc::new(move |p| {
                let t2 = p[1].tan();
                t2 * t2 / (p[2].cosh() * p[2].cosh()) * (e * e * mu * mu) + mass
            }),
        },
        G35 => DiffOp2 {
            second: Arc::new(|p| {
                let r = (p[2].sin() * p[2].sin()).recip();
                let c2 = p[1].cos();
                diag3([r / (c2 * c2), -r, Jet::real(-1.0)])
            }),
            first: Arc::new(move |p| {
                let r = (p[2].sin() * p[2].sin()).recip();
                let t2 = p[1].tan();
                [r * t2 / p[1].cos() * (2.0 * ie * mu), r * t2, p[2].cos() / p[2].sin() * -2.0]
            }),
            scalar: Arc::new(move |p| {
                let t2 = p[1].tan();
                -(t2 * t2 / (p[2].sin() * p[2].sin()) * (e * e * mu * mu)) + mass
            }),
        },
        id => return Err(Error::Unsupported(id.label().into(), "no Klein-Gordon display for this row".into())),
    };
    Ok(op)
}

/// Both constructions of the operator; the case must be integrable.
pub fn kg_operator(cfg: &FieldConfig) -> Result<(DiffOp2, DiffOp2)> {
    Ok((kg_display(cfg)?, kg_generic(cfg)))
}

/// Seeded complex polynomial-times-exponential test functions of the chart variables.
pub fn probe_functions(seed_val: u64, n: usize) -> Vec<ScalarFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_val);
    (0..n)
        .map(|_| {
            let mut cz = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let c0 = cz();
            let c1: [Complex64; 3] = std::array::from_fn(|_| cz());
            let c2: [[Complex64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| cz()));
            let d: [Complex64; 3] = std::array::from_fn(|_| cz() * 0.5);
            let f: ScalarFn = Arc::new(move |p: &Point| {
                let mut poly = Jet::constant(c0);
                let mut ex = Jet::zero();
                for i in 0..3 {
                    poly += p[i] * c1[i];
                    ex += p[i] * d[i];
                    for j in 0..3 {
                        poly += p[i] * p[j] * c2[i][j];
                    }
                }
                poly * ex.exp()
            });
            f
        })
        .collect()
}

/// Outcome of the [H, X_A] test.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// max |H(X f) - X(H f)| / (1 + |H(X f)| + |X(H f)|).
    pub max_residual: f64,
    /// Unnormalised maximum.
    pub max_abs: f64,
    pub worst_generator: usize,
    pub worst_point: [f64; 3],
}

pub const SYMMETRY_TOL: f64 = 1e-8;

/// |[H, X] f| at one point, with the normalising scale.
pub fn commutator_h_x(h: &DiffOp2, x: &DiffOp1, f: &ScalarFn, p: &Point) -> (Complex64, f64) {
    let hx = h.apply(&x.apply_fn(f), p).value();
    let xh = x.apply(&h.apply_fn(f), p).value();
    (hx - xh, 1.0 + hx.norm() + xh.norm())
}

/// Max normalised [H, X_A] f over operators, probe functions and probe points.
pub fn symmetry_check_with(h: &DiffOp2, ops: &[DiffOp1], funcs: &[ScalarFn], points: &[[f64; 3]]) -> SymmetryReport {
    let mut rep = SymmetryReport::default();
    for (k, x) in ops.iter().enumerate() {
        for f in funcs {
            for &xi in points {
                let (d, scale) = commutator_h_x(h, x, f, &crate::geometry::seed(xi));
                let r = d.norm() / scale;
                rep.max_abs = rep.max_abs.max(d.norm());
                if r > rep.max_residual {
                    rep.max_residual = r;
                    rep.worst_generator = k;
                    rep.worst_point = xi;
                }
            }
        }
    }
    rep
}

pub const SYMMETRY_SEED: u64 = 2024;

/// [H, X_A] f = 0 with 5 probe functions at 50 seeded points per generator.
pub fn symmetry_check(cfg: &FieldConfig) -> SymmetryReport {
    let h = kg_generic(cfg);
    let ops = symmetry_ops(cfg);
    let funcs = probe_functions(SYMMETRY_SEED, 5);
    let pts = cfg.probes(SYMMETRY_SEED + 1, 50);
    symmetry_check_with(&h, &ops, &funcs, &pts)
}

/// max |display f - generic f| / (1 + sum of |terms|) over probes.
pub fn kg_agreement(cfg: &FieldConfig, funcs: &[ScalarFn], points: &[[f64; 3]]) -> Result<f64> {
    let (disp, gen) = kg_operator(cfg)?;
    let mut r: f64 = 0.0;
    for f in funcs {
        for &xi in points {
            let p = crate::geometry::seed(xi);
            let a = disp.terms(f, &p);
            let b = gen.terms(f, &p);
            r = r.max((a.total() - b.total()).norm() / (1.0 + a.abs_sum()));
        }
    }
    Ok(r)
}

/// max |[D_a, D_b] f + i e F_ab f| over index pairs and probes (f = 1).
pub fn covariant_commutator_residual(cfg: &FieldConfig, points: &[[f64; 3]]) -> f64 {
    let e = cfg.params.e;
    let mut r: f64 = 0.0;
    for &xi in points {
        let p = crate::geometry::seed(xi);
        let f = cfg.two_form(&p);
        for a in 0..3 {
            for b in 0..3 {
                let s = commutator_at(&covariant_derivative(cfg, a), &covariant_derivative(cfg, b), &p);
                let want = -I * e * f[a][b].value();
                let coeff = s.coeffs.iter().map(|v| v.norm()).fold(0.0, f64::max);
                r = r.max((s.scalar - want).norm()).max(coeff);
            }
        }
    }
    r
}
