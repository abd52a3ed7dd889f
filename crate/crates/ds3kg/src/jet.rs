//! Truncated multivariate Taylor jets over complex scalars.
//!
//! A [`Jet`] carries the Taylor coefficients of a function of up to [`NV`]
//! variables through total degree [`MAX_ORDER`]. Coefficients are stored
//! normalised (`c_m = d^m f / m!`), so multiplication is plain truncated
//! convolution. Every jet also tracks how many of its orders are still exact:
//! taking a partial derivative consumes one order, so after applying a
//! second-order operator to an order-3 jet the result is exact through order 1.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

/// Number of independent variables (three chart coordinates plus lambda).
pub const NV: usize = 4;
/// Highest total degree carried.
pub const MAX_ORDER: i8 = 3;
/// Number of monomials of degree at most 3 in 4 variables.
pub const NC: usize = 35;

/// Index of the lambda variable inside a point.
pub const LAMBDA: usize = 3;

/// A point seeded as jets: three chart coordinates and lambda.
pub type Point = [Jet; NV];

/// Evaluable complex scalar on points.
pub type ScalarFn = std::sync::Arc<dyn Fn(&Point) -> Jet + Send + Sync>;

/// Evaluable vector field with three chart components.
pub type VectorFn = std::sync::Arc<dyn Fn(&Point) -> [Jet; 3] + Send + Sync>;

struct Tables {
    exps: [[u8; NV]; NC],
    deg: [u8; NC],
    mul: Vec<(u8, u8, u8)>,
    // raise[m][v] = index of m + e_v, if within degree
    raise: [[Option<u8>; NV]; NC],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut exps = Vec::with_capacity(NC);
        for d in 0..=MAX_ORDER as u8 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    for c in (0..=d - a - b).rev() {
                        exps.push([a, b, c, d - a - b - c]);
                    }
                }
            }
        }
        assert_eq!(exps.len(), NC);
        let find = |e: [u8; NV]| exps.iter().position(|x| *x == e);
        let mut deg = [0u8; NC];
        let mut raise = [[None; NV]; NC];
        for (i, e) in exps.iter().enumerate() {
            deg[i] = e.iter().sum();
            for v in 0..NV {
                let mut r = *e;
                r[v] += 1;
                raise[i][v] = find(r).map(|k| k as u8);
            }
        }
        let mut mul = Vec::new();
        for i in 0..NC {
            for j in 0..NC {
                if deg[i] + deg[j] <= MAX_ORDER as u8 {
                    let mut s = exps[i];
                    for v in 0..NV {
                        s[v] += exps[j][v];
                    }
                    mul.push((i as u8, j as u8, find(s).unwrap() as u8));
                }
            }
        }
        let mut e = [[0u8; NV]; NC];
        e.copy_from_slice(&exps);
        Tables { exps: e, deg, mul, raise }
    })
}

fn unit_index(v: usize) -> usize {
    1 + v
}

/// Truncated Taylor expansion of a complex-valued function.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    c: [Complex64; NC],
    ord: i8,
}

impl Default for Jet {
    fn default() -> Self {
        Jet::zero()
    }
}

impl Jet {
    pub fn zero() -> Self {
        Jet { c: [Complex64::new(0.0, 0.0); NC], ord: MAX_ORDER }
    }

    pub fn constant(v: Complex64) -> Self {
        let mut j = Jet::zero();
        j.c[0] = v;
        j
    }

    pub fn real(v: f64) -> Self {
        Jet::constant(Complex64::new(v, 0.0))
    }

    /// The coordinate function `x_k` expanded around `value`.
    pub fn var(k: usize, value: Complex64) -> Self {
        let mut j = Jet::constant(value);
        j.c[unit_index(k)] = Complex64::new(1.0, 0.0);
        j
    }

    /// Seeds all variables at a point.
    pub fn seed(point: &[Complex64; NV]) -> [Jet; NV] {
        std::array::from_fn(|k| Jet::var(k, point[k]))
    }

    /// Seeds a real chart point together with a complex lambda.
    pub fn seed_chart(xi: [f64; 3], lambda: Complex64) -> [Jet; NV] {
        Jet::seed(&[
            Complex64::new(xi[0], 0.0),
            Complex64::new(xi[1], 0.0),
            Complex64::new(xi[2], 0.0),
            lambda,
        ])
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn re(&self) -> f64 {
        self.c[0].re
    }

    /// Number of orders that remain exact (negative means exhausted).
    pub fn order(&self) -> i8 {
        self.ord
    }

    pub fn with_order(mut self, ord: i8) -> Self {
        self.ord = self.ord.min(ord);
        self
    }

    pub fn coeffs(&self) -> &[Complex64; NC] {
        &self.c
    }

    /// First partial derivative value `df/dx_k` at the expansion point.
    pub fn d1(&self, k: usize) -> Complex64 {
        self.c[unit_index(k)]
    }

    /// Second partial derivative value `d^2 f / dx_i dx_j`.
    pub fn d2(&self, i: usize, j: usize) -> Complex64 {
        let t = tables();
        let k = t.raise[unit_index(i)][j].unwrap() as usize;
        if i == j {
            self.c[k] * 2.0
        } else {
            self.c[k]
        }
    }

    /// Partial derivative as a jet; one order of accuracy is consumed.
    pub fn partial(&self, k: usize) -> Jet {
        let t = tables();
        let mut out = Jet::zero();
        for m in 0..NC {
            if let Some(r) = t.raise[m][k] {
                let r = r as usize;
                let n = t.exps[r][k] as f64;
                out.c[m] = self.c[r] * n;
            }
        }
        out.ord = self.ord - 1;
        out
    }

    /// Applies a scalar function given its value and first three derivatives
    /// at the expansion point. `exact` caps the resulting valid order.
    pub fn compose(&self, d: [Complex64; 4], exact: i8) -> Jet {
        let mut h = *self;
        h.c[0] = Complex64::new(0.0, 0.0);
        let h2 = h * h;
        let h3 = h2 * h;
        let mut out = Jet::constant(d[0]);
        for m in 1..NC {
            out.c[m] = d[1] * h.c[m] + d[2] * 0.5 * h2.c[m] + d[3] * (1.0 / 6.0) * h3.c[m];
        }
        out.ord = self.ord.min(exact);
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.c[0].exp();
        self.compose([e, e, e, e], MAX_ORDER)
    }

    pub fn ln(&self) -> Jet {
        let x = self.c[0];
        let r = x.inv();
        self.compose([x.ln(), r, -r * r, r * r * r * 2.0], MAX_ORDER)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (self.c[0].sin(), self.c[0].cos());
        self.compose([s, c, -s, -c], MAX_ORDER)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (self.c[0].sin(), self.c[0].cos());
        self.compose([c, -s, -c, s], MAX_ORDER)
    }

    pub fn tan(&self) -> Jet {
        let t = self.c[0].tan();
        let s = t * t + 1.0;
        self.compose([t, s, t * s * 2.0, s * (t * t * 6.0 + 2.0)], MAX_ORDER)
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([s, c, s, c], MAX_ORDER)
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([c, s, c, s], MAX_ORDER)
    }

    pub fn tanh(&self) -> Jet {
        let t = self.c[0].tanh();
        let s = -t * t + 1.0;
        self.compose([t, s, -t * s * 2.0, s * (t * t * 6.0 - 2.0)], MAX_ORDER)
    }

    pub fn sqrt(&self) -> Jet {
        let s = self.c[0].sqrt();
        let r = s.inv();
        self.compose([s, r * 0.5, -r * r * r * 0.25, r * r * r * r * r * 0.375], MAX_ORDER)
    }

    pub fn recip(&self) -> Jet {
        let r = self.c[0].inv();
        self.compose([r, -r * r, r * r * r * 2.0, -r * r * r * r * 6.0], MAX_ORDER)
    }

    /// Principal complex power.
    pub fn powc(&self, p: Complex64) -> Jet {
        let x = self.c[0];
        let v = x.powc(p);
        let r = x.inv();
        self.compose(
            [v, v * p * r, v * p * (p - 1.0) * r * r, v * p * (p - 1.0) * (p - 2.0) * r * r * r],
            MAX_ORDER,
        )
    }

    pub fn powi(&self, n: i32) -> Jet {
        match n {
            0 => Jet::real(1.0),
            1 => *self,
            2 => *self * *self,
            _ if n < 0 => self.powi(-n).recip(),
            _ => {
                let h = self.powi(n / 2);
                if n % 2 == 0 {
                    h * h
                } else {
                    h * h * *self
                }
            }
        }
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        let mut out = *self;
        for c in out.c.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn norm_sq_value(&self) -> f64 {
        self.c[0].norm_sqr()
    }

    /// Highest degree with a nonzero coefficient (used by tests).
    pub fn degree(&self) -> u8 {
        let t = tables();
        (0..NC).filter(|&m| self.c[m] != Complex64::new(0.0, 0.0)).map(|m| t.deg[m]).max().unwrap_or(0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
        self.ord = self.ord.min(o.ord);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a -= b;
        }
        self.ord = self.ord.min(o.ord);
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let t = tables();
        let mut out = Jet::zero();
        for &(i, j, k) in &t.mul {
            out.c[k as usize] += self.c[i as usize] * o.c[j as usize];
        }
        out.ord = self.ord.min(o.ord);
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self = *self - o;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

macro_rules! scalar_ops {
    ($t:ty, $conv:expr) => {
        impl Add<$t> for Jet {
            type Output = Jet;
            fn add(mut self, s: $t) -> Jet {
                self.c[0] += $conv(s);
                self
            }
        }
        impl Sub<$t> for Jet {
            type Output = Jet;
            fn sub(mut self, s: $t) -> Jet {
                self.c[0] -= $conv(s);
                self
            }
        }
        impl Mul<$t> for Jet {
            type Output = Jet;
            fn mul(self, s: $t) -> Jet {
                self.scale($conv(s))
            }
        }
        impl Div<$t> for Jet {
            type Output = Jet;
            fn div(self, s: $t) -> Jet {
                self.scale(Complex64::new(1.0, 0.0) / $conv(s))
            }
        }
        impl Add<Jet> for $t {
            type Output = Jet;
            fn add(self, j: Jet) -> Jet {
                j + self
            }
        }
        impl Sub<Jet> for $t {
            type Output = Jet;
            fn sub(self, j: Jet) -> Jet {
                -j + self
            }
        }
        impl Mul<Jet> for $t {
            type Output = Jet;
            fn mul(self, j: Jet) -> Jet {
                j * self
            }
        }
        impl Div<Jet> for $t {
            type Output = Jet;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn div(self, j: Jet) -> Jet {
                j.recip() * self
            }
        }
    };
}

scalar_ops!(f64, |s: f64| Complex64::new(s, 0.0));
scalar_ops!(Complex64, |s: Complex64| s);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn polynomial_derivatives_exact() {
        let p = Jet::seed(&[c(1.0), c(2.0), c(-0.5), c(0.3)]);
        let (x, y, z) = (p[0], p[1], p[2]);
        // f = x^2 y + 3 y z^3 - x z
        let f = x * x * y + y * z.powi(3) * 3.0 - x * z;
        assert!((f.value() - c(2.0 - 0.75 + 0.5)).norm() < 1e-14);
        assert!((f.d1(0) - c(2.0 * 1.0 * 2.0 + 0.5)).norm() < 1e-14);
        assert!((f.d1(2) - c(9.0 * 2.0 * 0.25 - 1.0)).norm() < 1e-14);
        assert!((f.d2(0, 0) - c(4.0)).norm() < 1e-14);
        assert!((f.d2(0, 1) - c(2.0)).norm() < 1e-14);
        assert!((f.d2(2, 2) - c(18.0 * 2.0 * -0.5)).norm() < 1e-14);
        assert!((f.d2(1, 2) - c(9.0 * 0.25)).norm() < 1e-14);
    }

    #[test]
    fn partial_consumes_order() {
        let p = Jet::seed(&[c(0.2), c(0.1), c(0.0), c(0.0)]);
        let f = (p[0] * p[1]).sin();
        assert_eq!(f.order(), 3);
        let g = f.partial(0).partial(1);
        assert_eq!(g.order(), 1);
        // d^2/dxdy sin(xy) = cos(xy) - xy sin(xy)
        let xy = 0.02f64;
        assert!((g.value() - c(xy.cos() - xy * xy.sin())).norm() < 1e-14);
    }

    #[test]
    fn elementary_chain_rule() {
        let p = Jet::seed(&[c(0.7), c(0.0), c(0.0), c(0.0)]);
        let x = p[0];
        let checks: Vec<(Jet, [f64; 3])> = vec![
            (x.exp(), [0.7f64.exp(), 0.7f64.exp(), 0.7f64.exp()]),
            (x.ln(), [0.7f64.ln(), 1.0 / 0.7, -1.0 / 0.49]),
            (x.tan(), {
                let t = 0.7f64.tan();
                [t, 1.0 + t * t, 2.0 * t * (1.0 + t * t)]
            }),
            (x.tanh(), {
                let t = 0.7f64.tanh();
                [t, 1.0 - t * t, -2.0 * t * (1.0 - t * t)]
            }),
            (x.sqrt(), [0.7f64.sqrt(), 0.5 / 0.7f64.sqrt(), -0.25 * 0.7f64.powf(-1.5)]),
            (x.powc(c(2.5)), [0.7f64.powf(2.5), 2.5 * 0.7f64.powf(1.5), 3.75 * 0.7f64.powf(0.5)]),
        ];
        for (j, want) in checks {
            assert!((j.value() - c(want[0])).norm() < 1e-13);
            assert!((j.d1(0) - c(want[1])).norm() < 1e-13);
            assert!((j.d2(0, 0) - c(want[2])).norm() < 1e-12);
        }
    }

    #[test]
    fn third_order_survives_one_derivative() {
        let p = Jet::seed(&[c(0.4), c(0.0), c(0.0), c(0.0)]);
        let f = p[0].powi(3);
        let g = f.partial(0);
        assert!((g.d2(0, 0) - c(6.0)).norm() < 1e-14);
    }
}
