//! Position-vector decomposition in the Frenet frame.
//!
//! At every sample the position (relative to a chosen origin) is resolved into
//! `m0 T + m1 N1 + m2 N2`, with the distance function `rho`, the tangential
//! and normal component norms, and the gradient norm `|m0|/rho`. The module
//! also measures how well a sampled curve satisfies the fundamental system
//!
//! ```text
//! m0' - k1 m1         = 1
//! m1' + k1 m0 - k2 m2 = 0
//! m2' + k2 m1         = 0
//! ```
//!
//! which is an identity for every unit-speed curve; the residuals are an
//! end-to-end consistency check of frames, arc length and decomposition
//! together. Derivatives are taken by grid differences, not another jet pass,
//! precisely so that the check is not a tautology.

use std::io::{self, Write};

use crate::error::Result;
use crate::frenet::{FrenetSample, SampledCurve};
use crate::numeric::{self, derivative_series, max_abs, rms};
use crate::vec3::Vec3;

/// Relative threshold under which the distance is treated as zero and the
/// gradient norm becomes undefined.
pub const EPS_RHO_REL: f64 = 1e-9;

/// Frenet components of the position vector at one sample.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    pub s: f64,
    /// Tangential coefficient `<x - o, T>`.
    pub m0: f64,
    /// Principal-normal coefficient `<x - o, N1>`.
    pub m1: f64,
    /// Binormal coefficient `<x - o, N2>`.
    pub m2: f64,
    /// Distance `|x - o|`.
    pub rho: f64,
    /// `|x^T| = |m0|`.
    pub tangential_norm: f64,
    /// `|x^N| = sqrt(m1^2 + m2^2)`.
    pub normal_norm: f64,
    /// `|grad rho| = |m0|/rho`; `None` when rho is (relatively) zero.
    pub grad_norm: Option<f64>,
}

/// Decompose one sample about `origin`, treating distances below `eps_rho`
/// as zero for the gradient norm.
pub fn decompose_with_eps(sample: &FrenetSample, origin: Vec3, eps_rho: f64) -> Decomposition {
    let x = sample.position - origin;
    let m0 = x.dot(sample.tangent);
    let m1 = x.dot(sample.normal);
    let m2 = x.dot(sample.binormal);
    let rho = x.norm();
    let grad_norm = if rho > eps_rho { Some(m0.abs() / rho) } else { None };
    Decomposition {
        s: sample.s,
        m0,
        m1,
        m2,
        rho,
        tangential_norm: m0.abs(),
        normal_norm: (m1 * m1 + m2 * m2).sqrt(),
        grad_norm,
    }
}

/// Decompose one sample about `origin`. The zero test on rho is absolute
/// here; use [`decompose_series`] for the scale-relative policy.
pub fn decompose(sample: &FrenetSample, origin: Vec3) -> Decomposition {
    decompose_with_eps(sample, origin, 0.0)
}

/// Decompose every sample about `origin`. The gradient-norm zero threshold is
/// scale-relative: [`EPS_RHO_REL`] times the largest distance seen.
pub fn decompose_series(curve: &SampledCurve, origin: Vec3) -> Vec<Decomposition> {
    let scale = curve
        .samples
        .iter()
        .map(|p| (p.position - origin).norm())
        .fold(0.0, f64::max);
    let eps = EPS_RHO_REL * scale;
    curve.samples.iter().map(|p| decompose_with_eps(p, origin, eps)).collect()
}

/// Max and RMS of one residual series.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ResidualStats {
    pub max: f64,
    pub rms: f64,
}

impl ResidualStats {
    pub(crate) fn of(series: &[f64]) -> ResidualStats {
        ResidualStats { max: max_abs(series), rms: rms(series) }
    }
}

/// Residuals of the three fundamental equations over the interior grid.
#[derive(Debug, Clone)]
pub struct OdeResiduals {
    /// `m0' - k1 m1 - 1`
    pub tangential: ResidualStats,
    /// `m1' + k1 m0 - k2 m2`
    pub normal: ResidualStats,
    /// `m2' + k2 m1`
    pub binormal: ResidualStats,
    /// Raw residual series in the same order, aligned to interior indices
    /// `2..n-2`.
    pub series: [Vec<f64>; 3],
}

impl OdeResiduals {
    pub fn worst_max(&self) -> f64 {
        self.tangential.max.max(self.normal.max).max(self.binormal.max)
    }
}

/// Evaluate the fundamental-system residuals for a sampled curve and its
/// decomposition series. Coefficient derivatives use the 4th-order central
/// stencil, so residuals of a consistent pipeline shrink like h^4.
pub fn ode_residuals(curve: &SampledCurve, decomps: &[Decomposition]) -> Result<OdeResiduals> {
    let n = curve.len();
    numeric::require_samples(n, 7)?;
    assert_eq!(n, decomps.len(), "decomposition series must match the samples");
    let h = curve.spacing();
    let m0: Vec<f64> = decomps.iter().map(|d| d.m0).collect();
    let m1: Vec<f64> = decomps.iter().map(|d| d.m1).collect();
    let m2: Vec<f64> = decomps.iter().map(|d| d.m2).collect();
    let (off, dm0) = derivative_series(&m0, h);
    let (_, dm1) = derivative_series(&m1, h);
    let (_, dm2) = derivative_series(&m2, h);
    let mut r_t = Vec::with_capacity(dm0.len());
    let mut r_n = Vec::with_capacity(dm0.len());
    let mut r_b = Vec::with_capacity(dm0.len());
    for k in 0..dm0.len() {
        let i = k + off;
        let k1 = curve.samples[i].kappa1;
        let k2 = curve.samples[i].kappa2;
        r_t.push(dm0[k] - k1 * m1[i] - 1.0);
        r_n.push(dm1[k] + k1 * m0[i] - k2 * m2[i]);
        r_b.push(dm2[k] + k2 * m1[i]);
    }
    Ok(OdeResiduals {
        tangential: ResidualStats::of(&r_t),
        normal: ResidualStats::of(&r_n),
        binormal: ResidualStats::of(&r_b),
        series: [r_t, r_n, r_b],
    })
}

/// CSV export of a decomposition series: `s,m0,m1,m2,rho,grad_norm` with 17
/// significant digits; an undefined gradient norm is written as `nan`.
pub fn write_decomposition_csv<W: Write>(decomps: &[Decomposition], w: &mut W) -> io::Result<()> {
    writeln!(w, "s,m0,m1,m2,rho,grad_norm")?;
    for d in decomps {
        let grad = d.grad_norm.map(numeric::fmt17).unwrap_or_else(|| "nan".to_string());
        writeln!(
            w,
            "{},{},{},{},{},{}",
            numeric::fmt17(d.s),
            numeric::fmt17(d.m0),
            numeric::fmt17(d.m1),
            numeric::fmt17(d.m2),
            numeric::fmt17(d.rho),
            grad
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use crate::expr::parse;
    use crate::frenet::{frenet_apparatus, sample_curve, CurveDef, Provenance};
    use crate::testutil::{circle, helix};

    use super::*;

    /// Log-spiral cone curve with |grad rho| = c: unit speed, rho = c*t.
    fn cone_spiral(a: f64, c: f64, t0: f64, t1: f64) -> CurveDef {
        let k = (c * c - a * a).sqrt();
        let w = (1.0 - c * c).sqrt() / k;
        let consts: BTreeMap<String, f64> =
            [("k".to_string(), k), ("w".to_string(), w), ("a".to_string(), a)]
                .into_iter()
                .collect();
        CurveDef::new(
            "cone_spiral",
            [
                parse("k*t*sin(w*ln(t))", "t", &consts).unwrap(),
                parse("k*t*cos(w*ln(t))", "t", &consts).unwrap(),
                parse("a*t", "t", &consts).unwrap(),
            ],
            (t0, t1),
            a == 0.0,
        )
        .unwrap()
    }

    #[test]
    fn cone_spiral_distance_and_gradient() {
        // At t = 2 with a = 0.3, c = 0.6: rho = c*t = 1.2, |grad rho| = 0.6.
        let curve = cone_spiral(0.3, 0.6, 0.5, 5.0);
        let sample = frenet_apparatus(&curve, 2.0).unwrap();
        let d = decompose(&sample, Vec3::ZERO);
        assert!((d.rho - 1.2).abs() < 1e-12);
        assert!((d.grad_norm.unwrap() - 0.6).abs() < 1e-12);
        // And the curve is unit speed.
        assert!((curve.speed(2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn helix_tangential_coefficient() {
        // For (cos u, sin u, u): <x, T> = u/sqrt(2) = s/2 with s = sqrt(2) u.
        let curve = helix(1.0, 1.0, 10.0);
        let sc = sample_curve(&curve, 64).unwrap();
        let decomps = decompose_series(&sc, Vec3::ZERO);
        for d in &decomps {
            assert!((d.m0 - d.s / 2.0).abs() < 1e-9, "m0 {} at s {}", d.m0, d.s);
        }
    }

    #[test]
    fn zero_distance_marks_gradient_undefined() {
        let curve = helix(1.0, 1.0, 10.0);
        let sample = frenet_apparatus(&curve, 1.0).unwrap();
        // Decompose about the point itself: rho = 0.
        let d = decompose(&sample, sample.position);
        assert_eq!(d.rho, 0.0);
        assert!(d.grad_norm.is_none());

        // Scale-relative policy over a series: a line through the origin has
        // one sample at distance ~0 when t crosses 0.
        let consts = BTreeMap::new();
        let line = CurveDef::new(
            "through_origin",
            [
                parse("t", "t", &consts).unwrap(),
                parse("0*t", "t", &consts).unwrap(),
                parse("0", "t", &consts).unwrap(),
            ],
            (-1.0, 1.0),
            true,
        )
        .unwrap();
        let sc = sample_curve(&line, 65).unwrap();
        let decomps = decompose_series(&sc, Vec3::ZERO);
        let undefined = decomps.iter().filter(|d| d.grad_norm.is_none()).count();
        assert_eq!(undefined, 1, "exactly the t = 0 sample is undefined");
        for d in decomps.iter().filter(|d| d.grad_norm.is_some()) {
            assert!((d.grad_norm.unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pythagoras_and_gradient_bound() {
        for curve in [helix(2.0, 1.0, 8.0), circle(5.0), cone_spiral(0.3, 0.6, 0.5, 5.0)] {
            let sc = sample_curve(&curve, 128).unwrap();
            for origin in [Vec3::ZERO, Vec3::new(0.7, -0.3, 1.1)] {
                let decomps = decompose_series(&sc, origin);
                for d in &decomps {
                    let sum = d.m0 * d.m0 + d.m1 * d.m1 + d.m2 * d.m2;
                    assert!(
                        (d.rho * d.rho - sum).abs() <= 1e-9 * (1.0 + d.rho * d.rho),
                        "pythagoras at s={}",
                        d.s
                    );
                    if let Some(g) = d.grad_norm {
                        assert!((0.0..=1.0 + 1e-9).contains(&g), "grad bound at s={}", d.s);
                    }
                }
            }
        }
    }

    #[test]
    fn origin_covariance() {
        // Decomposing about p equals decomposing the translated curve about 0.
        let base = helix(2.0, 1.0, 6.0);
        let p = Vec3::new(1.0, -2.0, 0.5);
        let lin = |i: usize, d: f64| {
            base.components[i].clone() + crate::expr::Expression::number(-d, "t")
        };
        let translated = CurveDef::new(
            "translated",
            [lin(0, p.x), lin(1, p.y), lin(2, p.z)],
            base.domain,
            false,
        )
        .unwrap();
        let sc_base = sample_curve(&base, 33).unwrap();
        let sc_translated = sample_curve(&translated, 33).unwrap();
        let da = decompose_series(&sc_base, p);
        let db = decompose_series(&sc_translated, Vec3::ZERO);
        for (a, b) in da.iter().zip(db.iter()) {
            assert!((a.m0 - b.m0).abs() < 1e-12);
            assert!((a.m1 - b.m1).abs() < 1e-12);
            assert!((a.m2 - b.m2).abs() < 1e-12);
            assert!((a.rho - b.rho).abs() < 1e-12);
        }
    }

    #[test]
    fn residuals_vanish_for_closed_form_helix_coefficients() {
        // Decomposition series from the closed forms m0 = s/2, m1 = -1,
        // m2 = s/2 for the unit-pitch helix; the stencil is exact on
        // polynomials so the identity holds almost to machine precision.
        let n = 512;
        let s_max = 10.0;
        let h = s_max / (n - 1) as f64;
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut samples = Vec::new();
        let mut decomps = Vec::new();
        for i in 0..n {
            let s = i as f64 * h;
            let u = s / sqrt2;
            samples.push(FrenetSample {
                s,
                t: u,
                position: Vec3::new(u.cos(), u.sin(), u),
                tangent: Vec3::new(-u.sin(), u.cos(), 1.0) / sqrt2,
                normal: Vec3::new(-u.cos(), -u.sin(), 0.0),
                binormal: Vec3::new(u.sin(), -u.cos(), 1.0) / sqrt2,
                kappa1: 0.5,
                kappa2: 0.5,
            });
            decomps.push(Decomposition {
                s,
                m0: s / 2.0,
                m1: -1.0,
                m2: s / 2.0,
                rho: (1.0 + u * u).sqrt(),
                tangential_norm: s / 2.0,
                normal_norm: (1.0 + s * s / 4.0).sqrt(),
                grad_norm: None,
            });
        }
        let sc = SampledCurve { samples, provenance: Provenance::Synthesized };
        let res = ode_residuals(&sc, &decomps).unwrap();
        assert!(res.worst_max() < 1e-9, "max residual {}", res.worst_max());
    }

    #[test]
    fn residuals_small_and_fourth_order_for_analyzed_curves() {
        let curve = cone_spiral(0.3, 0.6, 0.5, 5.0);
        let run = |n: usize| {
            let sc = sample_curve(&curve, n).unwrap();
            let decomps = decompose_series(&sc, Vec3::ZERO);
            ode_residuals(&sc, &decomps).unwrap().worst_max()
        };
        let r512 = run(512);
        let r1024 = run(1024);
        assert!(r512 < 1e-5, "r512 = {r512}");
        assert!(r1024 < r512 / 8.0 || r1024 < 1e-9, "r512 {r512} -> r1024 {r1024}");
    }

    #[test]
    fn perturbed_m1_shifts_tangential_residual_linearly() {
        let curve = helix(1.0, 1.0, 10.0);
        let sc = sample_curve(&curve, 64).unwrap();
        let clean = decompose_series(&sc, Vec3::ZERO);
        let mut bumped = clean.clone();
        for d in &mut bumped {
            d.m1 += 0.1;
        }
        let r_clean = ode_residuals(&sc, &clean).unwrap();
        let r_bumped = ode_residuals(&sc, &bumped).unwrap();
        for (a, b) in r_clean.series[0].iter().zip(r_bumped.series[0].iter()) {
            // residual1 = m0' - k1 m1 - 1 moves by exactly -0.1*k1 = -0.05.
            assert!(((b - a) + 0.1 * 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let curve = helix(1.0, 1.0, 4.0);
        let sc = sample_curve(&curve, 6).unwrap();
        let decomps = decompose_series(&sc, Vec3::ZERO);
        assert!(matches!(
            ode_residuals(&sc, &decomps),
            Err(crate::Error::InsufficientSamples { required: 7, got: 6 })
        ));
    }

    #[test]
    fn decomposition_csv_shape() {
        let curve = helix(1.0, 1.0, 4.0);
        let sc = sample_curve(&curve, 8).unwrap();
        let decomps = decompose_series(&sc, Vec3::ZERO);
        let mut buf = Vec::new();
        write_decomposition_csv(&decomps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("s,m0,m1,m2,rho,grad_norm\n"));
        assert_eq!(text.lines().count(), 9);
    }
}
