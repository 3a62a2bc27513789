//! Jet evaluation of expressions with domain checking.

use crate::error::{Error, Result};

use super::ast::{BinOp, Expression, Func, Node};
use super::jet::Jet3;

impl Expression {
    /// Evaluate the expression and its first three derivatives at `t`.
    /// Derivatives are exact (jet arithmetic); errors report the primitive
    /// whose domain was left.
    pub fn eval_jet(&self, t: f64) -> Result<Jet3> {
        eval_node(self.root(), t)
    }

    /// Value only.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_jet(t).map(|j| j.f)
    }
}

fn eval_node(node: &Node, t: f64) -> Result<Jet3> {
    match node {
        Node::Number(v) => Ok(Jet3::constant(*v)),
        Node::Constant { value, .. } => Ok(Jet3::constant(*value)),
        Node::Parameter => Ok(Jet3::variable(t)),
        Node::Neg(c) => Ok(-eval_node(c, t)?),
        Node::Call { func, arg } => func_jet(*func, eval_node(arg, t)?),
        Node::Binary { op, lhs, rhs } => {
            let a = eval_node(lhs, t)?;
            let b = eval_node(rhs, t)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b.f == 0.0 {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    finite(a / b, "division overflow")
                }
                BinOp::Pow => pow_jet(a, b),
            }
        }
    }
}

// `^` with a constant integer exponent is repeated multiplication and allows
// any base; everything else is exp(e*ln b) and requires a positive base.
fn pow_jet(base: Jet3, exponent: Jet3) -> Result<Jet3> {
    let e = exponent.f;
    if exponent.is_constant() && e.fract() == 0.0 && e.abs() <= 1e9 {
        let n = e as i64;
        if n < 0 && base.f == 0.0 {
            return Err(Error::Domain("zero base with negative integer exponent".into()));
        }
        return finite(base.powi(n), "integer power overflow");
    }
    if base.f <= 0.0 {
        return Err(Error::Domain(format!(
            "non-integer power of non-positive base {}",
            base.f
        )));
    }
    let ln_b = func_jet(Func::Ln, base)?;
    func_jet(Func::Exp, exponent * ln_b)
}

fn finite(j: Jet3, what: &str) -> Result<Jet3> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(Error::Domain(what.into()))
    }
}

/// Apply `func` to a jet: scalar derivatives of the outer function feed the
/// order-3 chain rule. A constant argument short-circuits to a constant jet so
/// boundary points with infinite derivatives (for instance `asin(1)`) stay
/// usable as constants.
pub(crate) fn func_jet(func: Func, u: Jet3) -> Result<Jet3> {
    let x = u.f;
    let (g0, g1, g2, g3) = match func {
        Func::Sin => {
            let (s, c) = x.sin_cos();
            (s, c, -s, -c)
        }
        Func::Cos => {
            let (s, c) = x.sin_cos();
            (c, -s, -c, s)
        }
        Func::Tan => {
            let v = x.tan();
            let w = 1.0 + v * v;
            (v, w, 2.0 * v * w, w * (2.0 + 6.0 * v * v))
        }
        Func::Asin => {
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::Domain(format!("asin of {x} outside [-1, 1]")));
            }
            let w = 1.0 - x * x;
            let s = w.sqrt();
            (x.asin(), 1.0 / s, x / (w * s), (1.0 + 2.0 * x * x) / (w * w * s))
        }
        Func::Acos => {
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::Domain(format!("acos of {x} outside [-1, 1]")));
            }
            let w = 1.0 - x * x;
            let s = w.sqrt();
            (x.acos(), -1.0 / s, -x / (w * s), -(1.0 + 2.0 * x * x) / (w * w * s))
        }
        Func::Atan => {
            let w = 1.0 + x * x;
            (x.atan(), 1.0 / w, -2.0 * x / (w * w), (6.0 * x * x - 2.0) / (w * w * w))
        }
        Func::Sinh => {
            let s = x.sinh();
            let c = x.cosh();
            (s, c, s, c)
        }
        Func::Cosh => {
            let s = x.sinh();
            let c = x.cosh();
            (c, s, c, s)
        }
        Func::Tanh => {
            let v = x.tanh();
            let w = 1.0 - v * v;
            (v, w, -2.0 * v * w, w * (6.0 * v * v - 2.0))
        }
        Func::Exp => {
            let v = x.exp();
            (v, v, v, v)
        }
        Func::Ln => {
            if x <= 0.0 {
                return Err(Error::Domain(format!("ln of non-positive value {x}")));
            }
            (x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
        }
        Func::Sqrt => {
            if x <= 0.0 {
                return Err(Error::Domain(format!("sqrt of non-positive value {x}")));
            }
            let r = x.sqrt();
            (r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r))
        }
    };
    let out = if u.is_constant() {
        Jet3::constant(g0)
    } else {
        u.compose(g0, g1, g2, g3)
    };
    finite(out, &format!("{} produced a non-finite derivative", func.name()))
}
