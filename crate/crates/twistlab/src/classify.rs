//! Curve-family classification.
//!
//! Every family in the report is decided from sampled series through one
//! explicit tolerance policy: "constant" means a small coefficient of
//! variation, "zero" means small relative to a scale, and "linear" means a
//! small normalized least-squares residual. Each record carries the fitted
//! parameters and the statistic that decided the flag, so a report is
//! auditable rather than a bare boolean.
//!
//! Membership is a flag *set*: a great circle about the origin is spherical,
//! normal, T-constant of first kind and equiangular all at once.

use serde::Serialize;

use crate::decomp::{decompose_series, Decomposition};
use crate::error::{Error, Result};
use crate::frenet::SampledCurve;
use crate::numeric::{self, mean_std, solve_symmetric3};
use crate::vec3::Vec3;

/// Thresholds for the constancy/zero/linearity predicates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToleranceConfig {
    /// Max coefficient of variation for a series to count as constant.
    pub tol_const: f64,
    /// Scale-relative zero threshold.
    pub tol_zero: f64,
    /// Max normalized RMS residual for a line fit to count as linear.
    pub tol_linear: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { tol_const: 1e-6, tol_zero: 1e-8, tol_linear: 1e-6 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol_const > 0.0 && self.tol_zero > 0.0 && self.tol_linear > 0.0 {
            Ok(())
        } else {
            Err(Error::Param("tolerances must be strictly positive".into()))
        }
    }
}

/// Outcome of the constancy predicate on one series.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constancy {
    pub mean: f64,
    /// Coefficient of variation: stddev over max(|mean|, tol_zero*scale).
    pub cv: f64,
    pub max_abs: f64,
    pub is_constant: bool,
    pub is_zero: bool,
}

/// Judge whether `series` is constant or zero relative to `scale`.
pub fn constancy(series: &[f64], scale: f64, cfg: &ToleranceConfig) -> Constancy {
    assert!(!series.is_empty(), "constancy needs a non-empty series");
    assert!(scale > 0.0, "constancy needs a positive scale");
    let (mean, std) = mean_std(series);
    let max_abs = numeric::max_abs(series);
    let cv = std / mean.abs().max(cfg.tol_zero * scale);
    let is_zero = max_abs < cfg.tol_zero * scale;
    let is_constant = cv < cfg.tol_const && !is_zero;
    Constancy { mean, cv, max_abs, is_constant, is_zero }
}

/// Least-squares line fit of `y` against `s`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual normalized by the spread of `y` (guarded by tol_zero).
    pub nrms: f64,
    pub is_linear: bool,
    /// Linear with a slope that moves `y` by more than the zero threshold
    /// across the sampled range.
    pub is_nonconstant_linear: bool,
}

pub fn linear_fit(s: &[f64], y: &[f64], cfg: &ToleranceConfig) -> LinearFit {
    assert!(s.len() == y.len() && s.len() >= 3, "linear_fit needs >= 3 paired points");
    debug_assert!(s.windows(2).all(|w| w[0] < w[1]), "abscissae must increase");
    let n = s.len() as f64;
    let (ms, _) = mean_std(s);
    let (my, _) = mean_std(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (si, yi) in s.iter().zip(y.iter()) {
        sxx += (si - ms) * (si - ms);
        sxy += (si - ms) * (yi - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * ms;
    let rss: f64 = s
        .iter()
        .zip(y.iter())
        .map(|(si, yi)| {
            let r = yi - (slope * si + intercept);
            r * r
        })
        .sum();
    let rms = (rss / n).sqrt();
    let y_min = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (y_max - y_min).max(cfg.tol_zero);
    let nrms = rms / spread;
    let is_linear = nrms < cfg.tol_linear;
    let y_scale = numeric::max_abs(y).max(cfg.tol_zero);
    let s_range = s[s.len() - 1] - s[0];
    let is_nonconstant_linear = is_linear && slope.abs() * s_range > cfg.tol_zero * y_scale;
    LinearFit { slope, intercept, nrms, is_linear, is_nonconstant_linear }
}

/// First kind means the constant is zero, second kind a nonzero constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SphericalRecord {
    pub flag: bool,
    pub radius: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineThroughOriginRecord {
    pub flag: bool,
    /// max |grad_norm - 1| over the defined samples.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantRatioRecord {
    pub flag: bool,
    pub c: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquiangularRecord {
    pub flag: bool,
    /// Constant angle between position vector and tangent, radians.
    pub alpha: f64,
    pub cv: f64,
}

/// T-constant (`|x^T|`) or N-constant (`|x^N|`) membership.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComponentConstantRecord {
    pub flag: bool,
    pub kind: Option<Kind>,
    pub value: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RectifyingRecord {
    pub flag: bool,
    /// Intercept of m0 = s + lambda.
    pub lambda: f64,
    /// Constant binormal coefficient.
    pub mu: f64,
    pub max_m1_over_scale: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlaneFlagRecord {
    pub flag: bool,
    pub max_over_scale: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeneralHelixRecord {
    pub flag: bool,
    /// kappa2/kappa1.
    pub ratio: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WCurveRecord {
    pub flag: bool,
    pub kappa1: f64,
    pub kappa2: f64,
    pub cv_kappa1: f64,
    pub cv_kappa2: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CongruentRectifyingRecord {
    pub flag: bool,
    /// Slope of kappa2/kappa1 = c1 s + c2.
    pub c1: f64,
    pub c2: f64,
    pub nrms: f64,
    pub fitted_origin: Vec3,
    /// max |m1| about the fitted origin, over the curve scale.
    pub fit_residual: f64,
    pub rank_deficient: bool,
}

/// Family flags with their fitted parameters and deciding statistics.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub spherical: SphericalRecord,
    pub line_through_origin: LineThroughOriginRecord,
    pub constant_ratio: ConstantRatioRecord,
    pub equiangular: EquiangularRecord,
    pub t_constant: ComponentConstantRecord,
    pub n_constant: ComponentConstantRecord,
    pub rectifying: RectifyingRecord,
    pub osculating: PlaneFlagRecord,
    pub normal: PlaneFlagRecord,
    pub general_helix: GeneralHelixRecord,
    pub w_curve: WCurveRecord,
    pub congruent_rectifying: CongruentRectifyingRecord,
    /// Samples where the gradient norm was undefined (distance ~ 0).
    pub undefined_grad_samples: usize,
}

/// Classify a sampled curve about `origin`.
pub fn classify(
    curve: &SampledCurve,
    origin: Vec3,
    cfg: &ToleranceConfig,
) -> Result<ClassificationReport> {
    cfg.validate()?;
    numeric::require_samples(curve.len(), 7)?;
    let decomps = decompose_series(curve, origin);
    classify_decomposed(curve, &decomps, cfg)
}

/// Classification from an existing decomposition series (shares work with the
/// report pipeline).
pub fn classify_decomposed(
    curve: &SampledCurve,
    decomps: &[Decomposition],
    cfg: &ToleranceConfig,
) -> Result<ClassificationReport> {
    numeric::require_samples(curve.len(), 7)?;
    let s: Vec<f64> = decomps.iter().map(|d| d.s).collect();
    let rho: Vec<f64> = decomps.iter().map(|d| d.rho).collect();
    let m0: Vec<f64> = decomps.iter().map(|d| d.m0).collect();
    let m1: Vec<f64> = decomps.iter().map(|d| d.m1).collect();
    let m2: Vec<f64> = decomps.iter().map(|d| d.m2).collect();
    let t_norm: Vec<f64> = decomps.iter().map(|d| d.tangential_norm).collect();
    let n_norm: Vec<f64> = decomps.iter().map(|d| d.normal_norm).collect();
    let rho_scale = numeric::max_abs(&rho).max(f64::MIN_POSITIVE);

    // Distance-normalized series exist only where rho is nonzero.
    let grad: Vec<f64> = decomps.iter().filter_map(|d| d.grad_norm).collect();
    let cos_alpha: Vec<f64> = decomps
        .iter()
        .filter(|d| d.grad_norm.is_some())
        .map(|d| d.m0 / d.rho)
        .collect();
    let undefined_grad_samples = decomps.len() - grad.len();

    let c_rho = constancy(&rho, rho_scale, cfg);
    let spherical =
        SphericalRecord { flag: c_rho.is_constant, radius: c_rho.mean, cv: c_rho.cv };

    let (line_flag, line_dev) = if grad.is_empty() {
        (false, f64::NAN)
    } else {
        let dev = grad.iter().map(|g| (g - 1.0).abs()).fold(0.0, f64::max);
        (dev < cfg.tol_zero && undefined_grad_samples == 0, dev)
    };
    let line_through_origin = LineThroughOriginRecord { flag: line_flag, max_deviation: line_dev };

    let constant_ratio = if grad.is_empty() {
        ConstantRatioRecord { flag: false, c: f64::NAN, cv: f64::NAN }
    } else {
        let cg = constancy(&grad, 1.0, cfg);
        ConstantRatioRecord {
            flag: cg.is_constant || cg.is_zero,
            c: if cg.is_zero { 0.0 } else { cg.mean.clamp(0.0, 1.0) },
            cv: cg.cv,
        }
    };

    let equiangular = if cos_alpha.is_empty() {
        EquiangularRecord { flag: false, alpha: f64::NAN, cv: f64::NAN }
    } else {
        let ca = constancy(&cos_alpha, 1.0, cfg);
        EquiangularRecord {
            flag: ca.is_constant || ca.is_zero,
            alpha: if ca.is_zero {
                std::f64::consts::FRAC_PI_2
            } else {
                ca.mean.clamp(-1.0, 1.0).acos()
            },
            cv: ca.cv,
        }
    };

    let t_constant = component_constant(&t_norm, rho_scale, cfg);
    let n_constant = component_constant(&n_norm, rho_scale, cfg);

    let m1_max = numeric::max_abs(&m1);
    let rectifying_flag = m1_max < cfg.tol_zero * rho_scale;
    let shifted: Vec<f64> = m0.iter().zip(s.iter()).map(|(a, b)| a - b).collect();
    let rectifying = RectifyingRecord {
        flag: rectifying_flag,
        lambda: mean_of(&shifted),
        mu: mean_of(&m2),
        max_m1_over_scale: m1_max / rho_scale,
    };

    let m2_max = numeric::max_abs(&m2);
    let osculating = PlaneFlagRecord {
        flag: m2_max < cfg.tol_zero * rho_scale,
        max_over_scale: m2_max / rho_scale,
    };
    let m0_max = numeric::max_abs(&m0);
    let normal = PlaneFlagRecord {
        flag: m0_max < cfg.tol_zero * rho_scale,
        max_over_scale: m0_max / rho_scale,
    };

    // Curvature-based families. The ratio kappa2/kappa1 needs kappa1 bounded
    // away from zero (relative to its own peak).
    let k1: Vec<f64> = curve.samples.iter().map(|p| p.kappa1).collect();
    let k2: Vec<f64> = curve.samples.iter().map(|p| p.kappa2).collect();
    let k_scale = numeric::max_abs(&k1).max(f64::MIN_POSITIVE);
    let ck1 = constancy(&k1, k_scale, cfg);
    let ck2 = constancy(&k2, k_scale, cfg);
    let w_curve = WCurveRecord {
        flag: ck1.is_constant && (ck2.is_constant || ck2.is_zero),
        kappa1: ck1.mean,
        kappa2: if ck2.is_zero { 0.0 } else { ck2.mean },
        cv_kappa1: ck1.cv,
        cv_kappa2: ck2.cv,
    };

    let ratio_defined = k1.iter().all(|&v| v > cfg.tol_zero * k_scale);
    let (general_helix, congruent_rectifying) = if ratio_defined {
        let ratio: Vec<f64> = k1.iter().zip(k2.iter()).map(|(a, b)| b / a).collect();
        let cr = constancy(&ratio, 1.0, cfg);
        let gh = GeneralHelixRecord { flag: cr.is_constant, ratio: cr.mean, cv: cr.cv };
        let lf = linear_fit(&s, &ratio, cfg);
        let fit = fit_origin(curve, FrameComponent::Normal)?;
        let cr_rec = CongruentRectifyingRecord {
            flag: lf.is_nonconstant_linear,
            c1: lf.slope,
            c2: lf.intercept,
            nrms: lf.nrms,
            fitted_origin: fit.origin,
            fit_residual: fit.residual,
            rank_deficient: fit.rank_deficient,
        };
        (gh, cr_rec)
    } else {
        (
            GeneralHelixRecord { flag: false, ratio: f64::NAN, cv: f64::NAN },
            CongruentRectifyingRecord {
                flag: false,
                c1: f64::NAN,
                c2: f64::NAN,
                nrms: f64::NAN,
                fitted_origin: Vec3::ZERO,
                fit_residual: f64::NAN,
                rank_deficient: false,
            },
        )
    };

    Ok(ClassificationReport {
        spherical,
        line_through_origin,
        constant_ratio,
        equiangular,
        t_constant,
        n_constant,
        rectifying,
        osculating,
        normal,
        general_helix,
        w_curve,
        congruent_rectifying,
        undefined_grad_samples,
    })
}

fn component_constant(norms: &[f64], scale: f64, cfg: &ToleranceConfig) -> ComponentConstantRecord {
    let c = constancy(norms, scale, cfg);
    let (flag, kind) = if c.is_zero {
        (true, Some(Kind::First))
    } else if c.is_constant {
        (true, Some(Kind::Second))
    } else {
        (false, None)
    };
    ComponentConstantRecord { flag, kind, value: c.mean, cv: c.cv }
}

fn mean_of(values: &[f64]) -> f64 {
    mean_std(values).0
}

/// Which frame vector an origin fit minimizes projections onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameComponent {
    /// Minimize `<x - p, T>`: the origin making the curve closest to normal.
    Tangent,
    /// Minimize `<x - p, N1>`: the origin making the curve closest to
    /// rectifying.
    Normal,
}

/// An origin recovered by least squares.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OriginFit {
    pub origin: Vec3,
    /// Max projection after translation, over the curve scale about the
    /// fitted origin.
    pub residual: f64,
    /// The normal matrix was singular (frame vectors coplanar through a
    /// common line); the minimum-norm origin is reported.
    pub rank_deficient: bool,
}

/// Find the origin `p` minimizing the sum of squared projections of `x_i - p`
/// onto the chosen frame vector: a 3x3 normal-equations problem with a
/// symmetric solve.
pub fn fit_origin(curve: &SampledCurve, component: FrameComponent) -> Result<OriginFit> {
    numeric::require_samples(curve.len(), 3)?;
    let pick = |p: &crate::frenet::FrenetSample| match component {
        FrameComponent::Tangent => p.tangent,
        FrameComponent::Normal => p.normal,
    };
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for p in &curve.samples {
        let v = pick(p);
        let va = v.to_array();
        let proj = v.dot(p.position);
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += va[i] * va[j];
            }
            b[i] += va[i] * proj;
        }
    }
    let sol = solve_symmetric3(a, b);
    let origin = Vec3::new(sol.x[0], sol.x[1], sol.x[2]);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for p in &curve.samples {
        let d = p.position - origin;
        worst = worst.max(pick(p).dot(d).abs());
        scale = scale.max(d.norm());
    }
    Ok(OriginFit {
        origin,
        residual: worst / scale.max(f64::MIN_POSITIVE),
        rank_deficient: sol.rank_deficient,
    })
}

/// Origin fit against the principal normal, realizing "congruent to a
/// rectifying curve": congruence allows a translation and `m1` depends on the
/// origin.
pub fn fit_rectifying_origin(curve: &SampledCurve) -> Result<OriginFit> {
    fit_origin(curve, FrameComponent::Normal)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use crate::decomp::decompose_series;
    use crate::expr::parse;
    use crate::frenet::{
        sample_curve, synthesize_curve, CurvatureProfile, FrameInit, FrenetSample, Provenance,
        SampledCurve,
    };
    use crate::testutil::{circle, helix, planar_line};

    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn constancy_examples() {
        let c = constancy(&[2.0, 2.0, 2.0], 1.0, &cfg());
        assert!(c.is_constant && !c.is_zero);
        assert_eq!(c.mean, 2.0);

        let c = constancy(&[1e-12, -1e-12], 1.0, &cfg());
        assert!(c.is_zero && !c.is_constant);

        let c = constancy(&[1.0, 2.0, 3.0], 1.0, &cfg());
        assert!(!c.is_constant && !c.is_zero);
    }

    #[test]
    fn linear_fit_examples() {
        let s: Vec<f64> = (0..512).map(|i| i as f64 / 511.0).collect();
        let y: Vec<f64> = s.iter().map(|v| 2.0 * v + 1.0).collect();
        let f = linear_fit(&s, &y, &cfg());
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
        assert!(f.nrms < 1e-12);
        assert!(f.is_linear && f.is_nonconstant_linear);

        let y: Vec<f64> = s.iter().map(|_| 5.0).collect();
        let f = linear_fit(&s, &y, &cfg());
        assert!(f.is_linear && !f.is_nonconstant_linear);

        // Parabola on [0, 1]: the continuous least-squares remainder of s^2
        // after projecting onto {1, s} has RMS 1/sqrt(180); the spread of y
        // is 1, so nrms approaches that value.
        let y: Vec<f64> = s.iter().map(|v| v * v).collect();
        let f = linear_fit(&s, &y, &cfg());
        let expected = 1.0 / 180.0f64.sqrt();
        assert!((f.nrms - expected).abs() < 3e-3, "nrms {} vs {}", f.nrms, expected);
        assert!(!f.is_linear);
    }

    #[test]
    fn helix_is_w_curve_and_general_helix() {
        for (p, q) in [(1.0, 1.0), (3.0, 4.0)] {
            let sc = sample_curve(&helix(p, q, 8.0), 128).unwrap();
            let report = classify(&sc, Vec3::ZERO, &cfg()).unwrap();
            assert!(report.w_curve.flag);
            assert!(report.general_helix.flag);
            assert!((report.general_helix.ratio - q / p).abs() < 1e-9);
            assert!((report.w_curve.kappa1 - p / (p * p + q * q)).abs() < 1e-9);
            assert!(!report.rectifying.flag);
            assert!(!report.congruent_rectifying.flag);
            assert!(!report.spherical.flag);
        }
    }

    #[test]
    fn great_circle_flag_set() {
        let sc = sample_curve(&circle(5.0), 128).unwrap();
        let report = classify(&sc, Vec3::ZERO, &cfg()).unwrap();
        assert!(report.spherical.flag);
        assert!((report.spherical.radius - 5.0).abs() < 1e-9);
        assert!(report.normal.flag, "m0 = 0 about the center");
        assert!(report.osculating.flag, "planar curve about an in-plane origin");
        assert_eq!(report.t_constant.kind, Some(Kind::First));
        assert_eq!(report.n_constant.kind, Some(Kind::Second));
        assert!((report.n_constant.value - 5.0).abs() < 1e-9);
        assert!(report.constant_ratio.flag);
        assert_eq!(report.constant_ratio.c, 0.0);
        assert!(report.equiangular.flag);
        assert!((report.equiangular.alpha - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(!report.line_through_origin.flag);
        // T-constant of first kind comes with the normal-plane flag.
        assert!(report.t_constant.kind == Some(Kind::First) && report.normal.flag);
    }

    #[test]
    fn line_through_origin_flag_set() {
        let sc = sample_curve(&planar_line(), 64).unwrap();
        let report = classify(&sc, Vec3::ZERO, &cfg()).unwrap();
        assert!(report.line_through_origin.flag);
        assert!(report.line_through_origin.max_deviation < 1e-10);
        assert!(report.constant_ratio.flag);
        assert!((report.constant_ratio.c - 1.0).abs() < 1e-9);
        assert_eq!(report.n_constant.kind, Some(Kind::First));
        // N-constant first kind coincides with the line flag.
        assert!(report.n_constant.kind == Some(Kind::First) && report.line_through_origin.flag);
        assert!(!report.general_helix.flag, "curvature ratio undefined on a line");
    }

    fn rectifying_test_curve() -> SampledCurve {
        let profile = CurvatureProfile::new(
            parse("1", "s", &BTreeMap::new()).unwrap(),
            parse("s", "s", &BTreeMap::new()).unwrap(),
            (0.1, 3.0),
        )
        .unwrap();
        synthesize_curve(&profile, 4096, &FrameInit::identity()).unwrap()
    }

    #[test]
    fn congruent_rectifying_detection_and_origin_fit() {
        let sc = rectifying_test_curve();
        let report = classify(&sc, Vec3::ZERO, &cfg()).unwrap();
        assert!(report.congruent_rectifying.flag);
        assert!((report.congruent_rectifying.c1 - 1.0).abs() < 1e-4);
        assert!(report.congruent_rectifying.c2.abs() < 1e-4);
        assert!(report.congruent_rectifying.fit_residual < 1e-6);
        assert!(!report.congruent_rectifying.rank_deficient);

        // About the fitted origin the curve really is rectifying, with
        // m0 = s + lambda (lambda = 0 for this profile) and m2 = mu = 1.
        let p = report.congruent_rectifying.fitted_origin;
        let refit = classify(&sc, p, &cfg()).unwrap();
        assert!(refit.rectifying.flag, "max m1 {}", refit.rectifying.max_m1_over_scale);
        assert!(refit.rectifying.lambda.abs() < 1e-6);
        assert!((refit.rectifying.mu - 1.0).abs() < 1e-6);
        assert_eq!(refit.n_constant.kind, Some(Kind::Second));
        assert!((refit.n_constant.value - refit.rectifying.mu.abs()).abs() < 1e-9);
    }

    #[test]
    fn origin_fit_recovers_translation() {
        let sc = rectifying_test_curve();
        let base = fit_rectifying_origin(&sc).unwrap();
        let shift = Vec3::new(1.0, -2.0, 0.5);
        let mut moved = sc.clone();
        for p in &mut moved.samples {
            p.position = p.position + shift;
        }
        let fit = fit_rectifying_origin(&moved).unwrap();
        assert!((fit.origin - (base.origin + shift)).norm() < 1e-9);
        assert!(fit.residual < 1e-6);
    }

    #[test]
    fn helix_is_not_congruent_rectifying() {
        let sc = sample_curve(&helix(1.0, 1.0, 8.0), 256).unwrap();
        let report = classify(&sc, Vec3::ZERO, &cfg()).unwrap();
        // Constant curvature ratio: linear but not nonconstant-linear.
        assert!(!report.congruent_rectifying.flag);
        let fit = fit_rectifying_origin(&sc).unwrap();
        assert!(
            fit.residual > cfg().tol_zero,
            "no origin makes a helix rectifying, residual {}",
            fit.residual
        );
    }

    #[test]
    fn rectifying_distance_squared_is_quadratic() {
        // rho^2 about the fitted origin fits s^2 + c1 s + c2.
        let sc = rectifying_test_curve();
        let fit = fit_rectifying_origin(&sc).unwrap();
        let decomps = decompose_series(&sc, fit.origin);
        let s: Vec<f64> = decomps.iter().map(|d| d.s).collect();
        let shifted: Vec<f64> = decomps.iter().map(|d| d.rho * d.rho - d.s * d.s).collect();
        let f = linear_fit(&s, &shifted, &cfg());
        assert!(f.is_linear, "rho^2 - s^2 should be linear, nrms {}", f.nrms);
    }

    #[test]
    fn flags_invariant_under_rotation_and_scaling() {
        let sc = sample_curve(&circle(2.0), 64).unwrap();
        // Rotate all samples about the origin by a fixed rotation.
        let r0 = Vec3::new(0.6, 0.0, 0.8);
        let r1 = Vec3::new(0.0, 1.0, 0.0);
        let r2 = r0.cross(r1);
        let rot = |v: Vec3| Vec3::new(r0.dot(v), r1.dot(v), r2.dot(v));
        let mut rotated = sc.clone();
        for p in &mut rotated.samples {
            p.position = rot(p.position);
            p.tangent = rot(p.tangent);
            p.normal = rot(p.normal);
            p.binormal = rot(p.binormal);
        }
        let a = classify(&sc, Vec3::ZERO, &cfg()).unwrap();
        let b = classify(&rotated, Vec3::ZERO, &cfg()).unwrap();
        assert_eq!(a.spherical.flag, b.spherical.flag);
        assert_eq!(a.constant_ratio.flag, b.constant_ratio.flag);
        assert_eq!(a.t_constant.kind, b.t_constant.kind);
        assert_eq!(a.n_constant.kind, b.n_constant.kind);
        assert_eq!(a.normal.flag, b.normal.flag);

        // Uniform scaling about the origin: s and positions scale, curvatures
        // scale inversely.
        let sigma = 3.5;
        let mut scaled = sc.clone();
        for p in &mut scaled.samples {
            p.position = p.position * sigma;
            p.s *= sigma;
            p.kappa1 /= sigma;
            p.kappa2 /= sigma;
        }
        let c = classify(&scaled, Vec3::ZERO, &cfg()).unwrap();
        assert_eq!(a.spherical.flag, c.spherical.flag);
        assert_eq!(a.constant_ratio.flag, c.constant_ratio.flag);
        assert!((c.spherical.radius - sigma * a.spherical.radius).abs() < 1e-9);
        assert_eq!(a.constant_ratio.c, c.constant_ratio.c);
    }

    #[test]
    fn degenerate_origin_fit_is_flagged() {
        // All principal normals parallel to x: the normal matrix has rank 1.
        let mut samples = Vec::new();
        for i in 0..16 {
            let s = i as f64 * 0.1;
            samples.push(FrenetSample {
                s,
                t: s,
                position: Vec3::new(0.0, s, 1.0),
                tangent: Vec3::Y,
                normal: Vec3::X,
                binormal: Vec3::Z,
                kappa1: 1.0,
                kappa2: 0.0,
            });
        }
        let sc = SampledCurve { samples, provenance: Provenance::Synthesized };
        let fit = fit_rectifying_origin(&sc).unwrap();
        assert!(fit.rank_deficient);
        assert!(fit.residual < 1e-12, "minimum-norm solution still kills m1");
    }
}
