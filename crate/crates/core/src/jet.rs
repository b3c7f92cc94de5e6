//! Truncated Taylor jets.
//!
//! A [`Jet`] holds the normalized Taylor coefficients `c[k] = f⁽ᵏ⁾(x₀)/k!` of a
//! function at one point, up to a tracked `depth` (the highest valid order).
//! Arithmetic and the elementary functions below propagate the coefficients
//! exactly (up to rounding), which is what the analytic derivative scheme of
//! [`crate::numgrid`] is built on: closed-form fixtures are sampled as jets and
//! every quantity derived from them (Wronskians, quotients, potentials) keeps
//! exact derivatives without any finite-difference error.

#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of stored coefficients; orders `0..JET_LEN`.
pub const JET_LEN: usize = 10;

/// Highest derivative order a freshly seeded jet carries.
pub const MAX_ORDER: usize = JET_LEN - 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; JET_LEN],
    depth: usize,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = value;
        Self { c, depth: MAX_ORDER }
    }

    /// The independent variable `x` expanded around `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = x0;
        c[1] = 1.0;
        Self { c, depth: MAX_ORDER }
    }

    /// Builds a jet from derivative values `f, f′, f″, …` (not Taylor coefficients).
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        assert!(!derivs.is_empty() && derivs.len() <= JET_LEN);
        let mut c = [0.0; JET_LEN];
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            c[k] = d / fact;
        }
        Self { c, depth: derivs.len() - 1 }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The `order`-th derivative at the expansion point, if the jet is deep enough.
    pub fn derivative(&self, order: usize) -> Option<f64> {
        (order <= self.depth).then(|| self.c[order] * factorial(order))
    }

    /// Jet of the derivative function: shifts coefficients and loses one order.
    pub fn differentiate(&self) -> Option<Self> {
        if self.depth == 0 {
            return None;
        }
        let mut c = [0.0; JET_LEN];
        for k in 0..self.depth {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Some(Self { c, depth: self.depth - 1 })
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for k in 0..=self.depth {
            out.c[k] *= s;
        }
        out
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0).with_depth(self.depth) / *self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Jet::constant(1.0).with_depth(self.depth);
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `self^r` for a jet with positive value.
    pub fn powf(&self, r: f64) -> Self {
        let d = self.depth;
        let a = &self.c;
        let mut p = [0.0; JET_LEN];
        p[0] = a[0].powf(r);
        // a·p′ = r·a′·p, matched coefficient by coefficient
        for k in 1..=d {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (r * j as f64 - (k - j) as f64) * a[j] * p[k - j];
            }
            p[k] = acc / (k as f64 * a[0]);
        }
        Self { c: p, depth: d }
    }

    pub fn sqrt(&self) -> Self {
        let d = self.depth;
        let mut s = [0.0; JET_LEN];
        s[0] = self.c[0].sqrt();
        for k in 1..=d {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Self { c: s, depth: d }
    }

    pub fn exp(&self) -> Self {
        let d = self.depth;
        let mut e = [0.0; JET_LEN];
        e[0] = self.c[0].exp();
        for k in 1..=d {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { c: e, depth: d }
    }

    /// `(sin, cos)` of the jet.
    pub fn sin_cos(&self) -> (Self, Self) {
        self.trig_pair(-1.0)
    }

    /// `(sinh, cosh)` of the jet.
    pub fn sinh_cosh(&self) -> (Self, Self) {
        self.trig_pair(1.0)
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    pub fn tanh(&self) -> Self {
        let (s, c) = self.sinh_cosh();
        s / c
    }

    pub fn sech(&self) -> Self {
        self.cosh().recip()
    }

    // s' = a' c, c' = sign · a' s
    fn trig_pair(&self, sign: f64) -> (Self, Self) {
        let d = self.depth;
        let a0 = self.c[0];
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        if sign < 0.0 {
            s[0] = a0.sin();
            c[0] = a0.cos();
        } else {
            s[0] = a0.sinh();
            c[0] = a0.cosh();
        }
        for k in 1..=d {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                ds += w * c[k - j];
                dc += w * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = sign * dc / k as f64;
        }
        (Self { c: s, depth: d }, Self { c, depth: d })
    }

    fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let depth = self.depth.min(rhs.depth);
        let mut c = [0.0; JET_LEN];
        for k in 0..=depth {
            c[k] = self.c[k] + rhs.c[k];
        }
        Jet { c, depth }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let depth = self.depth.min(rhs.depth);
        let mut c = [0.0; JET_LEN];
        for k in 0..=depth {
            let mut acc = 0.0;
            for i in 0..=k {
                acc += self.c[i] * rhs.c[k - i];
            }
            c[k] = acc;
        }
        Jet { c, depth }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let depth = self.depth.min(rhs.depth);
        let mut q = [0.0; JET_LEN];
        let b0 = rhs.c[0];
        for k in 0..=depth {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= rhs.c[i] * q[k - i];
            }
            q[k] = acc / b0;
        }
        Jet { c: q, depth }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}
