//! so(1,3), its inequivalent subalgebras, cocycles of their central
//! extensions, the index of an extension and the integrability test.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Minkowski metric diag(1,-1,-1,-1).
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Ordering of the ambient generators J_ij.
pub const J_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Tolerance used for closure and structure-constant comparisons.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Identifiers of the thirteen catalog rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CaseId {
    G11,
    G12,
    G13a,
    G14,
    G21,
    G22,
    G23,
    G31,
    G32,
    G33a,
    G34,
    G35,
    G41,
}

impl CaseId {
    pub const ALL: [CaseId; 13] = [
        CaseId::G11,
        CaseId::G12,
        CaseId::G13a,
        CaseId::G14,
        CaseId::G21,
        CaseId::G22,
        CaseId::G23,
        CaseId::G31,
        CaseId::G32,
        CaseId::G33a,
        CaseId::G34,
        CaseId::G35,
        CaseId::G41,
    ];

    /// The five three-dimensional cases with a nontrivial reduction.
    pub const INTEGRABLE3: [CaseId; 5] = [CaseId::G31, CaseId::G32, CaseId::G33a, CaseId::G34, CaseId::G35];

    pub fn label(self) -> &'static str {
        match self {
            CaseId::G11 => "G11",
            CaseId::G12 => "G12",
            CaseId::G13a => "G13a",
            CaseId::G14 => "G14",
            CaseId::G21 => "G21",
            CaseId::G22 => "G22",
            CaseId::G23 => "G23",
            CaseId::G31 => "G31",
            CaseId::G32 => "G32",
            CaseId::G33a => "G33a",
            CaseId::G34 => "G34",
            CaseId::G35 => "G35",
            CaseId::G41 => "G41",
        }
    }

    /// Command-line spelling, e.g. `g3_3a`.
    pub fn cli_name(self) -> String {
        let l = self.label();
        format!("g{}_{}", &l[1..2], &l[2..]).to_lowercase()
    }

    pub fn dim(self) -> usize {
        match self {
            CaseId::G11 | CaseId::G12 | CaseId::G13a | CaseId::G14 => 1,
            CaseId::G21 | CaseId::G22 | CaseId::G23 => 2,
            CaseId::G41 => 4,
            _ => 3,
        }
    }

    /// Orbit dimension r (number of q coordinates).
    pub fn orbit_dim(self) -> usize {
        match self {
            CaseId::G11 | CaseId::G12 | CaseId::G13a | CaseId::G14 => 1,
            CaseId::G21 | CaseId::G22 | CaseId::G23 | CaseId::G32 | CaseId::G34 | CaseId::G35 => 2,
            CaseId::G31 | CaseId::G33a | CaseId::G41 => 3,
        }
    }

    pub fn is_family(self) -> bool {
        matches!(self, CaseId::G13a | CaseId::G33a)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| *c != '_' && *c != ',' && *c != ' ').collect::<String>().to_lowercase();
        let norm = norm.trim_start_matches('g').trim_end_matches('a');
        CaseId::ALL
            .iter()
            .copied()
            .find(|c| c.label()[1..3] == *norm)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

impl TryFrom<String> for CaseId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CaseId> for String {
    fn from(c: CaseId) -> String {
        c.label().to_string()
    }
}

/// A catalog row with its parameter resolved.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: CaseId,
    pub a: Option<f64>,
}

impl Case {
    /// Builds a case; families require `a > 0`, other rows ignore `a`.
    pub fn new(id: CaseId, a: Option<f64>) -> Result<Case> {
        if id.is_family() {
            match a {
                None => Err(Error::MissingParameter(format!("a (required by {id})"))),
                Some(v) if !(v > 0.0) || !v.is_finite() => Err(Error::Domain(format!("{id} requires a > 0, got {v}"))),
                Some(v) => Ok(Case { id, a: Some(v) }),
            }
        } else {
            Ok(Case { id, a: None })
        }
    }

    /// Convenience constructor for rows without parameter (panics on families).
    pub fn plain(id: CaseId) -> Case {
        Case::new(id, None).expect("case requires parameter a")
    }

    pub fn param(&self) -> f64 {
        self.a.unwrap_or(0.0)
    }

    pub fn dim(&self) -> usize {
        self.id.dim()
    }
}

/// A real Lie algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebra {
    pub dim: usize,
    /// Flattened C[a][b][c] = C_{ab}^c.
    pub structure_constants: Vec<f64>,
    pub basis_labels: Vec<String>,
}

impl LieAlgebra {
    pub fn zero(dim: usize) -> Self {
        LieAlgebra {
            dim,
            structure_constants: vec![0.0; dim * dim * dim],
            basis_labels: (1..=dim).map(|i| format!("X{i}")).collect(),
        }
    }

    /// Builds from nonzero entries `[X_a, X_b] = coef X_c` (a < b); antisymmetry is filled in.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Self {
        let mut alg = LieAlgebra::zero(dim);
        for &(a, b, c, v) in entries {
            *alg.c_mut(a, b, c) += v;
            *alg.c_mut(b, a, c) -= v;
        }
        alg
    }

    #[inline]
    pub fn c(&self, a: usize, b: usize, c: usize) -> f64 {
        self.structure_constants[(a * self.dim + b) * self.dim + c]
    }

    #[inline]
    fn c_mut(&mut self, a: usize, b: usize, c: usize) -> &mut f64 {
        let n = self.dim;
        &mut self.structure_constants[(a * n + b) * n + c]
    }

    /// Bracket of two elements given by coordinate vectors.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                if y[b] == 0.0 {
                    continue;
                }
                for (c, o) in out.iter_mut().enumerate() {
                    *o += x[a] * y[b] * self.c(a, b, c);
                }
            }
        }
        out
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    r = r.max((self.c(a, b, c) + self.c(b, a, c)).abs());
                }
            }
        }
        r
    }

    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut s = 0.0;
                        for d in 0..n {
                            s += self.c(a, b, d) * self.c(d, c, e)
                                + self.c(b, c, d) * self.c(d, a, e)
                                + self.c(c, a, d) * self.c(d, b, e);
                        }
                        r = r.max(s.abs());
                    }
                }
            }
        }
        r
    }

    /// Nonzero entries with a < b, as (a, b, c, value).
    pub fn triples(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    let v = self.c(a, b, c);
                    if v.abs() > 1e-14 {
                        out.push((a, b, c, v));
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &LieAlgebra) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.structure_constants
            .iter()
            .zip(&other.structure_constants)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Coordinate vector of J_ij (sign flips for i > j).
pub fn j_vec(i: usize, j: usize) -> [f64; 6] {
    let mut v = [0.0; 6];
    if i == j {
        return v;
    }
    let (p, s) = if i < j { ((i, j), 1.0) } else { ((j, i), -1.0) };
    let k = J_PAIRS.iter().position(|q| *q == p).unwrap();
    v[k] = s;
    v
}

/// so(1,3) with [J_ij, J_kl] = eta_jk J_il - eta_ik J_jl + eta_il J_jk - eta_jl J_ik.
pub fn so13_algebra() -> LieAlgebra {
    let mut alg = LieAlgebra::zero(6);
    alg.basis_labels = J_PAIRS.iter().map(|(i, j)| format!("J{i}{j}")).collect();
    for (a, &(i, j)) in J_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in J_PAIRS.iter().enumerate() {
            let mut v = [0.0; 6];
            let terms = [
                (ETA[j] * f64::from(j == k), j_vec(i, l)),
                (-ETA[i] * f64::from(i == k), j_vec(j, l)),
                (ETA[i] * f64::from(i == l), j_vec(j, k)),
                (-ETA[j] * f64::from(j == l), j_vec(i, k)),
            ];
            for (s, w) in terms {
                for c in 0..6 {
                    v[c] += s * w[c];
                }
            }
            for (c, val) in v.iter().enumerate() {
                *alg.c_mut(a, b, c) = *val;
            }
        }
    }
    alg
}

/// One catalog row, instantiated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubalgebraSpec {
    pub id: CaseId,
    pub parameter_a: Option<f64>,
    /// Rows express each X_A over (J01, J02, J03, J12, J13, J23).
    pub generator_coeffs: Vec<[f64; 6]>,
    pub algebra: LieAlgebra,
}

fn add(x: [f64; 6], y: [f64; 6], s: f64) -> [f64; 6] {
    std::array::from_fn(|k| x[k] + s * y[k])
}

fn neg(x: [f64; 6]) -> [f64; 6] {
    x.map(|v| -v)
}

/// Builds the catalog row for a case.
pub fn subalgebra(case: Case) -> SubalgebraSpec {
    let a = case.param();
    let j = j_vec;
    let n13 = add(j(1, 3), j(0, 1), -1.0);
    let n23 = add(j(2, 3), j(0, 2), -1.0);
    let lox = add(j(1, 2), j(0, 3), a);
    let (gens, brackets): (Vec<[f64; 6]>, Vec<(usize, usize, usize, f64)>) = match case.id {
        CaseId::G11 => (vec![j(0, 3)], vec![]),
        CaseId::G12 => (vec![j(1, 2)], vec![]),
        CaseId::G13a => (vec![lox], vec![]),
        CaseId::G14 => (vec![n13], vec![]),
        CaseId::G21 => (vec![n13, n23], vec![]),
        CaseId::G22 => (vec![j(1, 2), j(0, 3)], vec![]),
        CaseId::G23 => (vec![n13, neg(j(0, 3))], vec![(0, 1, 0, -1.0)]),
        CaseId::G31 => (vec![n13, n23, neg(j(0, 3))], vec![(0, 2, 0, -1.0), (1, 2, 1, -1.0)]),
        CaseId::G32 => (vec![n13, n23, neg(j(1, 2))], vec![(0, 2, 1, 1.0), (1, 2, 0, -1.0)]),
        CaseId::G33a => (
            vec![n13, n23, neg(lox)],
            vec![(0, 2, 1, 1.0), (0, 2, 0, -a), (1, 2, 0, -1.0), (1, 2, 1, -a)],
        ),
        CaseId::G34 => (vec![j(1, 2), j(1, 3), j(2, 3)], vec![(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, 1.0)]),
        CaseId::G35 => (
            vec![neg(j(0, 1)), neg(j(0, 2)), neg(j(1, 2))],
            vec![(0, 1, 2, 1.0), (0, 2, 1, 1.0), (1, 2, 0, -1.0)],
        ),
        CaseId::G41 => (
            vec![n13, n23, neg(j(1, 2)), neg(j(0, 3))],
            vec![(0, 2, 1, 1.0), (0, 3, 0, -1.0), (1, 2, 0, -1.0), (1, 3, 1, -1.0)],
        ),
    };
    let algebra = LieAlgebra::from_brackets(gens.len(), &brackets);
    SubalgebraSpec { id: case.id, parameter_a: case.a, generator_coeffs: gens, algebra }
}

/// A catalog slot: fixed rows build directly, families need `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: CaseId,
}

impl CatalogEntry {
    pub fn is_family(&self) -> bool {
        self.id.is_family()
    }

    pub fn build(&self, a: Option<f64>) -> Result<SubalgebraSpec> {
        Ok(subalgebra(Case::new(self.id, a)?))
    }
}

/// The thirteen inequivalent rows (families listed once).
pub fn catalog() -> Vec<CatalogEntry> {
    CaseId::ALL.iter().map(|&id| CatalogEntry { id }).collect()
}

/// The full catalog instantiated at parameter `a` for the families.
pub fn catalog_at(a: f64) -> Result<Vec<SubalgebraSpec>> {
    catalog().iter().map(|e| e.build(Some(a))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    /// Largest residual of projecting an ambient bracket onto the span.
    pub span_residual: f64,
    /// Largest difference between fitted and stored structure constants.
    pub structure_residual: f64,
    pub worst_pair: (usize, usize),
    pub fitted: LieAlgebra,
}

/// Checks closure of a set of generators inside an ambient algebra and fits
/// the structure constants; compares with `expected` when given.
pub fn closure_check_generators(
    gens: &[[f64; 6]],
    expected: Option<&LieAlgebra>,
    amb: &LieAlgebra,
) -> Result<ClosureReport> {
    let n = gens.len();
    let g = DMatrix::from_fn(6, n, |r, c| gens[c][r]);
    let svd = g.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.iter().any(|s| *s <= 1e-12 * smax.max(1.0)) {
        return Err(Error::Domain("generator coefficients are linearly dependent".into()));
    }
    let mut fitted = LieAlgebra::zero(n);
    let mut span_residual: f64 = 0.0;
    let mut worst = (0, 0);
    let mut worst_val = -1.0;
    for a in 0..n {
        for b in 0..n {
            let br = amb.bracket(&gens[a], &gens[b]);
            let rhs = DVector::from_column_slice(&br);
            let x = svd.solve(&rhs, 1e-14).map_err(|e| Error::Domain(e.to_string()))?;
            let res = (&g * &x - &rhs).amax();
            span_residual = span_residual.max(res);
            if res > CLOSURE_TOL {
                return Err(Error::NonClosure(a, b, res));
            }
            let mut diff: f64 = 0.0;
            for c in 0..n {
                *fitted.c_mut(a, b, c) = x[c];
                if let Some(e) = expected {
                    diff = diff.max((x[c] - e.c(a, b, c)).abs());
                }
            }
            if diff > worst_val {
                worst_val = diff;
                worst = (a, b);
            }
        }
    }
    let structure_residual = expected.map(|e| fitted.max_abs_diff(e)).unwrap_or(0.0);
    Ok(ClosureReport { span_residual, structure_residual, worst_pair: worst, fitted })
}

impl SubalgebraSpec {
    pub fn dim(&self) -> usize {
        self.generator_coeffs.len()
    }

    pub fn closure_check(&self, amb: &LieAlgebra) -> Result<ClosureReport> {
        closure_check_generators(&self.generator_coeffs, Some(&self.algebra), amb)
    }
}

/// Structure constants in the basis X'_A = sum_B P_AB X_B.
pub fn change_basis(alg: &LieAlgebra, p: &DMatrix<f64>) -> Result<LieAlgebra> {
    let n = alg.dim;
    let pinv = p.clone().try_inverse().ok_or_else(|| Error::Domain("singular basis change".into()))?;
    let mut out = LieAlgebra::zero(n);
    out.basis_labels = alg.basis_labels.clone();
    for a in 0..n {
        for b in 0..n {
            let mut ve = vec![0.0; n];
            for c in 0..n {
                for d in 0..n {
                    let w = p[(a, c)] * p[(b, d)];
                    if w == 0.0 {
                        continue;
                    }
                    for (e, v) in ve.iter_mut().enumerate() {
                        *v += w * alg.c(c, d, e);
                    }
                }
            }
            for f in 0..n {
                *out.c_mut(a, b, f) = (0..n).map(|e| ve[e] * pinv[(e, f)]).sum();
            }
        }
    }
    Ok(out)
}

/// Antisymmetric matrix of central charges F_AB.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cocycle {
    pub n: usize,
    pub f: Vec<f64>,
}

impl Cocycle {
    pub fn zero(n: usize) -> Self {
        Cocycle { n, f: vec![0.0; n * n] }
    }

    /// From entries with a < b.
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut c = Cocycle::zero(n);
        for &(a, b, v) in entries {
            c.set(a, b, v);
        }
        c
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut c = Cocycle::zero(n);
        for a in 0..n {
            for b in 0..n {
                c.f[a * n + b] = f(a, b);
            }
        }
        c
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.f[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: f64) {
        self.f[a * self.n + b] = v;
        self.f[b * self.n + a] = -v;
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n;
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| (self.get(a, b) + self.get(b, a)).abs()).fold(0.0, f64::max)
    }

    /// Max |C_AB^D F_CD + C_BC^D F_AD + C_CA^D F_BD|.
    pub fn cocycle_residual(&self, alg: &LieAlgebra) -> f64 {
        let n = self.n;
        let mut r: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let s: f64 = (0..n)
                        .map(|d| alg.c(a, b, d) * self.get(c, d) + alg.c(b, c, d) * self.get(a, d) + alg.c(c, a, d) * self.get(b, d))
                        .sum();
                    r = r.max(s.abs());
                }
            }
        }
        r
    }

    /// F'_AB = P_AC P_BD F_CD.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Cocycle {
        let n = self.n;
        Cocycle::from_fn(n, |a, b| {
            let mut s = 0.0;
            for c in 0..n {
                for d in 0..n {
                    s += p[(a, c)] * p[(b, d)] * self.get(c, d);
                }
            }
            s
        })
    }

    pub fn max_abs_diff(&self, o: &Cocycle) -> f64 {
        self.f.iter().zip(&o.f).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// F_AB - C_AB^C lambda_C: the effect of shifting chi_A by constants lambda_A.
pub fn fchange(alg: &LieAlgebra, c: &Cocycle, lambda: &[f64]) -> Cocycle {
    let n = alg.dim;
    Cocycle::from_fn(n, |a, b| c.get(a, b) - (0..n).map(|k| alg.c(a, b, k) * lambda[k]).sum::<f64>())
}

/// Tolerance of the coboundary least-squares test.
pub const COBOUNDARY_TOL: f64 = 1e-10;

/// Finds lambda with F_AB = C_AB^C lambda_C if one exists.
pub fn coboundary_solve(alg: &LieAlgebra, c: &Cocycle) -> Option<Vec<f64>> {
    let n = alg.dim;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    if pairs.is_empty() {
        return Some(vec![0.0; n]);
    }
    let m = DMatrix::from_fn(pairs.len(), n, |r, k| alg.c(pairs[r].0, pairs[r].1, k));
    let rhs = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(a, b)| c.get(a, b)));
    let svd = m.clone().svd(true, true);
    let x = svd.solve(&rhs, 1e-12).ok()?;
    let res = (&m * &x - &rhs).amax();
    if res < COBOUNDARY_TOL {
        Some(x.iter().copied().collect())
    } else {
        None
    }
}

/// Central extension of a base algebra by a cocycle; the central element is
/// stored last in [`ExtendedAlgebra::structure_constants`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtendedAlgebra {
    pub base: LieAlgebra,
    pub cocycle: Cocycle,
}

impl ExtendedAlgebra {
    pub fn new(base: LieAlgebra, cocycle: Cocycle) -> Self {
        assert_eq!(base.dim, cocycle.n);
        ExtendedAlgebra { base, cocycle }
    }

    pub fn trivial(base: LieAlgebra) -> Self {
        let n = base.dim;
        ExtendedAlgebra::new(base, Cocycle::zero(n))
    }

    pub fn dim_hat(&self) -> usize {
        self.base.dim + 1
    }

    pub fn structure_constants(&self) -> LieAlgebra {
        let n = self.base.dim;
        let mut out = LieAlgebra::zero(n + 1);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    *out.c_mut(a, b, c) = self.base.c(a, b, c);
                }
                *out.c_mut(a, b, n) = self.cocycle.get(a, b);
            }
        }
        out.basis_labels = self.base.basis_labels.clone();
        out.basis_labels.push("X0".into());
        out
    }

    /// The matrix C_AB^C f_C + F_AB f_0 bordered by a zero central row/column.
    pub fn form_matrix(&self, f: &[f64]) -> DMatrix<f64> {
        let n = self.base.dim;
        DMatrix::from_fn(n + 1, n + 1, |a, b| {
            if a == n || b == n {
                0.0
            } else {
                (0..n).map(|c| self.base.c(a, b, c) * f[c]).sum::<f64>() + self.cocycle.get(a, b) * f[n]
            }
        })
    }
}

/// Seed of the dual-vector sampler.
pub const INDEX_SEED: u64 = 0x1d5_3c0de;
pub const INDEX_SAMPLES: usize = 200;

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > 1e-10 * smax).count()
}

/// Index: dim_hat minus the generic rank of the coadjoint form matrix.
pub fn index(ext: &ExtendedAlgebra) -> usize {
    let n1 = ext.dim_hat();
    let mut rng = ChaCha8Rng::seed_from_u64(INDEX_SEED);
    let mut best = numerical_rank(&ext.form_matrix(&vec![1.0; n1]));
    for _ in 0..INDEX_SAMPLES {
        let f: Vec<f64> = (0..n1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        best = best.max(numerical_rank(&ext.form_matrix(&f)));
    }
    n1 - best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrability {
    pub dim: usize,
    pub ind: usize,
    pub s: usize,
    pub l: usize,
    pub m_tilde: i64,
    pub integrable: bool,
}

/// Applies dim + ind >= 2m and the counting identities for s, l, m~.
pub fn integrability_check(ext: &ExtendedAlgebra, manifold_dim: usize) -> Result<Integrability> {
    if manifold_dim < 1 {
        return Err(Error::Domain("manifold dimension must be at least 1".into()));
    }
    let dim = ext.dim_hat();
    let ind = index(ext);
    integrability_from(dim, ind, manifold_dim)
}

pub fn integrability_from(dim: usize, ind: usize, m: usize) -> Result<Integrability> {
    if ind > dim || !(dim - ind).is_multiple_of(2) || ind == 0 {
        return Err(Error::Parity(dim, ind));
    }
    Ok(Integrability {
        dim,
        ind,
        s: (dim - ind) / 2,
        l: ind - 1,
        m_tilde: m as i64 - ((dim + ind) / 2) as i64 + 1,
        integrable: dim + ind >= 2 * m,
    })
}

/// Rows of the printed integrability table, used for diffs.
pub fn table3_reference(id: CaseId) -> Integrability {
    let (dim, ind, s, l, m_tilde, integrable) = match id.dim() {
        1 => (2, 2, 0, 1, 2, false),
        2 => (3, 1, 1, 0, 2, false),
        3 => (4, 2, 1, 1, 1, true),
        _ => (5, 3, 1, 3, 0, true),
    };
    Integrability { dim, ind, s, l, m_tilde, integrable }
}
