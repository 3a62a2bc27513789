//! The curve expression language: parsing, printing, and order-3 jet evaluation.

pub mod ast;
mod eval;
pub mod jet;
mod parser;

pub use ast::{BinOp, Expression, Func, Node};
pub use jet::Jet3;
pub use parser::parse;

use std::collections::BTreeMap;

/// Convenience: parse with no constant bindings.
pub fn parse_simple(source: &str, parameter: &str) -> crate::Result<Expression> {
    parse(source, parameter, &BTreeMap::new())
}
