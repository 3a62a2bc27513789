//! Expression AST and pretty-printing.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Binary operators, loosest to tightest: `+ -`, `* /`, `^` (right-associative).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// The function vocabulary of the expression language. Only C-infinity
/// primitives on their open domains; no absolute value or floor, so every
/// expression stays three-times differentiable wherever it evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Atan => "atan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "asin" => Func::Asin,
            "acos" => Func::Acos,
            "atan" => Func::Atan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// One AST node. Constants keep their name so reports and re-emitted specs
/// stay readable; the bound value is frozen at parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number(f64),
    Constant { name: String, value: f64 },
    Parameter,
    Neg(Box<Node>),
    Binary { op: BinOp, lhs: Box<Node>, rhs: Box<Node> },
    Call { func: Func, arg: Box<Node> },
}

/// A parsed scalar function of one parameter, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
    parameter: String,
    shadowed: Vec<String>,
}

impl Expression {
    pub(crate) fn from_parts(root: Node, parameter: String, shadowed: Vec<String>) -> Self {
        Expression { root, parameter, shadowed }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Name of the evaluation parameter.
    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    /// Built-in constants that user bindings shadowed while parsing; surfaced
    /// as warnings in reports.
    pub fn shadowed_constants(&self) -> &[String] {
        &self.shadowed
    }

    /// Literal number as an expression (in the given parameter).
    pub fn number(value: f64, parameter: &str) -> Expression {
        Expression::from_parts(Node::Number(value), parameter.to_owned(), Vec::new())
    }

    /// The bare parameter as an expression.
    pub fn parameter_symbol(parameter: &str) -> Expression {
        Expression::from_parts(Node::Parameter, parameter.to_owned(), Vec::new())
    }

    /// Named constant as an expression.
    pub fn named_constant(name: &str, value: f64, parameter: &str) -> Expression {
        Expression::from_parts(
            Node::Constant { name: name.to_owned(), value },
            parameter.to_owned(),
            Vec::new(),
        )
    }

    /// Apply a function to this expression.
    pub fn apply(self, func: Func) -> Expression {
        Expression {
            root: Node::Call { func, arg: Box::new(self.root) },
            parameter: self.parameter,
            shadowed: self.shadowed,
        }
    }

    /// Replace every occurrence of the parameter with `inner`, producing an
    /// expression in `inner`'s parameter. This is how composed curves such as
    /// spherical-factor constructions are assembled.
    pub fn substitute(&self, inner: &Expression) -> Expression {
        fn subst(node: &Node, replacement: &Node) -> Node {
            match node {
                Node::Parameter => replacement.clone(),
                Node::Number(_) | Node::Constant { .. } => node.clone(),
                Node::Neg(c) => Node::Neg(Box::new(subst(c, replacement))),
                Node::Binary { op, lhs, rhs } => Node::Binary {
                    op: *op,
                    lhs: Box::new(subst(lhs, replacement)),
                    rhs: Box::new(subst(rhs, replacement)),
                },
                Node::Call { func, arg } => Node::Call {
                    func: *func,
                    arg: Box::new(subst(arg, replacement)),
                },
            }
        }
        let mut shadowed = self.shadowed.clone();
        for name in &inner.shadowed {
            if !shadowed.contains(name) {
                shadowed.push(name.clone());
            }
        }
        Expression {
            root: subst(&self.root, &inner.root),
            parameter: inner.parameter.clone(),
            shadowed,
        }
    }

    fn binary(op: BinOp, lhs: Expression, rhs: Expression) -> Expression {
        debug_assert_eq!(lhs.parameter, rhs.parameter, "mixed-parameter expression");
        let mut shadowed = lhs.shadowed;
        for name in rhs.shadowed {
            if !shadowed.contains(&name) {
                shadowed.push(name);
            }
        }
        Expression {
            root: Node::Binary { op, lhs: Box::new(lhs.root), rhs: Box::new(rhs.root) },
            parameter: lhs.parameter,
            shadowed,
        }
    }

    pub fn pow(self, rhs: Expression) -> Expression {
        Expression::binary(BinOp::Pow, self, rhs)
    }
}

impl Add for Expression {
    type Output = Expression;
    fn add(self, rhs: Expression) -> Expression {
        Expression::binary(BinOp::Add, self, rhs)
    }
}

impl Sub for Expression {
    type Output = Expression;
    fn sub(self, rhs: Expression) -> Expression {
        Expression::binary(BinOp::Sub, self, rhs)
    }
}

impl Mul for Expression {
    type Output = Expression;
    fn mul(self, rhs: Expression) -> Expression {
        Expression::binary(BinOp::Mul, self, rhs)
    }
}

impl Div for Expression {
    type Output = Expression;
    fn div(self, rhs: Expression) -> Expression {
        Expression::binary(BinOp::Div, self, rhs)
    }
}

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            root: Node::Neg(Box::new(self.root)),
            parameter: self.parameter,
            shadowed: self.shadowed,
        }
    }
}

// Precedence levels for the printer, doubled so strict bounds stay integral:
// + - are 2, * / are 4, unary minus 5, ^ is 6, atoms 8. A child is
// parenthesized when its level falls below the minimum its position requires,
// which is exactly the condition for the reparse to rebuild the same tree.
fn level(node: &Node) -> u8 {
    match node {
        Node::Binary { op: BinOp::Add | BinOp::Sub, .. } => 2,
        Node::Binary { op: BinOp::Mul | BinOp::Div, .. } => 4,
        Node::Neg(_) => 5,
        Node::Binary { op: BinOp::Pow, .. } => 6,
        Node::Number(_) | Node::Constant { .. } | Node::Parameter | Node::Call { .. } => 8,
    }
}

fn write_node(node: &Node, min_level: u8, parameter: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = level(node) < min_level;
    if paren {
        f.write_str("(")?;
    }
    match node {
        Node::Number(v) => write!(f, "{v}")?,
        Node::Constant { name, .. } => f.write_str(name)?,
        Node::Parameter => f.write_str(parameter)?,
        Node::Neg(c) => {
            f.write_str("-")?;
            // The operand of unary minus is a unary or primary in the grammar;
            // anything binary must be parenthesized to survive the round trip.
            let ok_bare = matches!(
                **c,
                Node::Number(_) | Node::Constant { .. } | Node::Parameter | Node::Call { .. } | Node::Neg(_)
            );
            write_node(c, if ok_bare { 0 } else { 9 }, parameter, f)?;
        }
        Node::Binary { op, lhs, rhs } => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => (" + ", 2, 3),
                BinOp::Sub => (" - ", 2, 3),
                BinOp::Mul => ("*", 4, 5),
                BinOp::Div => ("/", 4, 5),
                BinOp::Pow => ("^", 7, 5),
            };
            write_node(lhs, lmin, parameter, f)?;
            f.write_str(sym)?;
            write_node(rhs, rmin, parameter, f)?;
        }
        Node::Call { func, arg } => {
            f.write_str(func.name())?;
            f.write_str("(")?;
            write_node(arg, 0, parameter, f)?;
            f.write_str(")")?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, 0, &self.parameter, f)
    }
}
