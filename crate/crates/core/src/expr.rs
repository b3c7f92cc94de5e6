//! Closed-form functions of `x` built from the catalog vocabulary: constants,
//! hyperbolic and trigonometric functions of `a·x`, integer powers of `sech`,
//! sums, products, integer powers and reciprocals.
//!
//! Expressions serialize to JSON as externally tagged objects, e.g.
//! `{"sum": [{"const": -5.0}, {"product": [{"const": 12.0}, {"sech": {"scale": 1.0, "power": 2.0}}]}]}`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::jet::Jet;
use crate::numgrid::{Grid, GridFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Const(f64),
    X,
    /// `sech(scale·x)^power`
    Sech {
        scale: f64,
        power: f64,
    },
    Cosh {
        scale: f64,
    },
    Sinh {
        scale: f64,
    },
    Tanh {
        scale: f64,
    },
    Cos {
        scale: f64,
    },
    Sin {
        scale: f64,
    },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow {
        base: Box<Expr>,
        exp: u32,
    },
    Recip(Box<Expr>),
}

impl Expr {
    pub fn eval_jet(&self, x: Jet) -> Jet {
        match self {
            Expr::Const(c) => Jet::constant(*c),
            Expr::X => x,
            Expr::Sech { scale, power } => {
                let s = (x * *scale).sech();
                if power.fract() == 0.0 && *power >= 0.0 {
                    s.powi(*power as u32)
                } else {
                    s.powf(*power)
                }
            }
            Expr::Cosh { scale } => (x * *scale).cosh(),
            Expr::Sinh { scale } => (x * *scale).sinh(),
            Expr::Tanh { scale } => (x * *scale).tanh(),
            Expr::Cos { scale } => (x * *scale).cos(),
            Expr::Sin { scale } => (x * *scale).sin(),
            Expr::Sum(terms) => terms.iter().fold(Jet::constant(0.0), |acc, t| acc + t.eval_jet(x)),
            Expr::Product(factors) => factors.iter().fold(Jet::constant(1.0), |acc, t| acc * t.eval_jet(x)),
            Expr::Pow { base, exp } => base.eval_jet(x).powi(*exp),
            Expr::Recip(inner) => inner.eval_jet(x).recip(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Sech { scale, power } => (1.0 / (scale * x).cosh()).powf(*power),
            Expr::Cosh { scale } => (scale * x).cosh(),
            Expr::Sinh { scale } => (scale * x).sinh(),
            Expr::Tanh { scale } => (scale * x).tanh(),
            Expr::Cos { scale } => (scale * x).cos(),
            Expr::Sin { scale } => (scale * x).sin(),
            Expr::Sum(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Expr::Product(factors) => factors.iter().map(|t| t.eval(x)).product(),
            Expr::Pow { base, exp } => base.eval(x).powi(*exp as i32),
            Expr::Recip(inner) => 1.0 / inner.eval(x),
        }
    }

    /// Samples the expression with jets attached.
    pub fn sample(&self, grid: Grid) -> GridFunction {
        GridFunction::from_jet_fn(grid, |x| self.eval_jet(x))
    }

    pub fn pow(self, exp: u32) -> Expr {
        Expr::Pow { base: Box::new(self), exp }
    }

    pub fn recip(self) -> Expr {
        Expr::Recip(Box::new(self))
    }
}

pub fn c(value: f64) -> Expr {
    Expr::Const(value)
}

pub fn sech(scale: f64, power: impl Into<f64>) -> Expr {
    Expr::Sech { scale, power: power.into() }
}

pub fn cosh(scale: f64) -> Expr {
    Expr::Cosh { scale }
}

pub fn sinh(scale: f64) -> Expr {
    Expr::Sinh { scale }
}

pub fn tanh(scale: f64) -> Expr {
    Expr::Tanh { scale }
}

pub fn cos(scale: f64) -> Expr {
    Expr::Cos { scale }
}

pub fn sin(scale: f64) -> Expr {
    Expr::Sin { scale }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Sum(mut terms) => {
                terms.push(rhs);
                Expr::Sum(terms)
            }
            lhs => Expr::Sum(vec![lhs, rhs]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        c(-1.0) * self
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Product(mut factors) => {
                factors.push(rhs);
                Expr::Product(factors)
            }
            lhs => Expr::Product(vec![lhs, rhs]),
        }
    }
}

impl Mul<Expr> for f64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        c(self) * rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn json_shape() {
        let e = c(-5.0) + 12.0 * sech(1.0, 2);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"sum":[{"const":-5.0},{"product":[{"const":12.0},{"sech":{"scale":1.0,"power":2.0}}]}]}"#);
        let back: Expr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn jet_and_plain_evaluation_agree() {
        let chi = (c(2f64.sqrt()) + cosh(1.0)).recip();
        let e = 4.0 * (c(2f64.sqrt()) * chi.clone() - chi.pow(2)) * sin(0.5) + tanh(2.0) - sinh(0.3) * cos(1.1);
        for x in [-3.0, -0.2, 0.0, 1.7] {
            assert_relative_eq!(e.eval(x), e.eval_jet(Jet::variable(x)).value(), epsilon = 1e-14);
        }
    }

    #[test]
    fn fractional_sech_power_matches_integer_path() {
        // sech^2.5 = sech^2 · sqrt(sech)
        let frac = sech(0.7, 2.5);
        let reference = sech(0.7, 2u32) * Expr::Sech { scale: 0.7, power: 0.5 };
        for x in [-2.0, 0.3, 1.1] {
            let a = frac.eval_jet(Jet::variable(x));
            let b = reference.eval_jet(Jet::variable(x));
            for k in 0..=5 {
                assert_relative_eq!(a.derivative(k).unwrap(), b.derivative(k).unwrap(), epsilon = 1e-11);
            }
        }
    }
}
