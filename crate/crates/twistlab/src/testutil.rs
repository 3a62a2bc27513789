//! Curve builders shared by the unit tests.

use std::collections::BTreeMap;

use crate::expr::parse;
use crate::frenet::CurveDef;

pub fn consts(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// (p cos t, p sin t, q t) on [0, t1].
pub fn helix(p: f64, q: f64, t1: f64) -> CurveDef {
    let c = consts(&[("p", p), ("q", q)]);
    CurveDef::new(
        format!("helix_{p}_{q}"),
        [
            parse("p*cos(t)", "t", &c).unwrap(),
            parse("p*sin(t)", "t", &c).unwrap(),
            parse("q*t", "t", &c).unwrap(),
        ],
        (0.0, t1),
        false,
    )
    .unwrap()
}

/// Circle of radius `r` about the origin in the z = 0 plane.
pub fn circle(r: f64) -> CurveDef {
    let c = consts(&[("r", r)]);
    CurveDef::new(
        "circle",
        [
            parse("r*cos(t)", "t", &c).unwrap(),
            parse("r*sin(t)", "t", &c).unwrap(),
            parse("0", "t", &c).unwrap(),
        ],
        (0.0, 2.0 * std::f64::consts::PI),
        true,
    )
    .unwrap()
}

/// Unit-speed line through the origin in the z = 0 plane, on [0.5, 3].
pub fn planar_line() -> CurveDef {
    let c = consts(&[]);
    CurveDef::new(
        "line",
        [
            parse("0.6*t", "t", &c).unwrap(),
            parse("0.8*t", "t", &c).unwrap(),
            parse("0", "t", &c).unwrap(),
        ],
        (0.5, 3.0),
        true,
    )
    .unwrap()
}
