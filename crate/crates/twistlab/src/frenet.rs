//! Frenet apparatus of parametric curves: frames, curvature and torsion,
//! arc-length reparametrization, uniform sampling, and synthesis of a curve
//! from prescribed curvature functions.
//!
//! Conventions: the first curvature is unsigned (kappa1 >= 0), torsion is
//! signed through the triple-product formula, and the frame satisfies
//! `N2 = T x N1` by construction. Planar curves (`z = 0`) additionally expose
//! a signed curvature and keep a valid frame on straight segments, where the
//! general construction would be degenerate.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::expr::{Expression, Jet3};
use crate::numeric::{self, adaptive_simpson, derivatives_123_at, QUAD_TOL};
use crate::vec3::Vec3;

/// Speed below this is a degenerate (stationary) point.
pub const EPS_SPEED: f64 = 1e-12;
/// `|x' x x''| < EPS_FRAME * |x'|^3` marks a vanishing-curvature point.
pub const EPS_FRAME: f64 = 1e-9;

/// Newton/bisection tolerance for inverting the arc-length function.
const INVERT_TOL: f64 = 1e-13;

/// A parametric curve given by three coordinate expressions in one parameter.
#[derive(Debug, Clone)]
pub struct CurveDef {
    pub name: String,
    pub components: [Expression; 3],
    pub domain: (f64, f64),
    /// When set, the curve is promised to lie in the z = 0 plane: torsion is
    /// exactly zero, straight segments keep the plane frame, and a signed
    /// curvature is available.
    pub planar: bool,
}

impl CurveDef {
    pub fn new(
        name: impl Into<String>,
        components: [Expression; 3],
        domain: (f64, f64),
        planar: bool,
    ) -> Result<Self> {
        let (t0, t1) = domain;
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::Param(format!(
                "curve domain [{t0}, {t1}] must be a finite interval with t0 < t1"
            )));
        }
        let def = CurveDef { name: name.into(), components, domain, planar };
        if planar {
            for k in 0..5 {
                let t = t0 + (t1 - t0) * (k as f64 + 0.5) / 5.0;
                if let Ok(z) = def.components[2].eval(t) {
                    if z.abs() > 1e-9 {
                        return Err(Error::Param(format!(
                            "planar curve has z({t}) = {z}, expected 0"
                        )));
                    }
                }
            }
        }
        Ok(def)
    }

    /// Jets of all three coordinates at `t`.
    pub fn position_jet(&self, t: f64) -> Result<[Jet3; 3]> {
        Ok([
            self.components[0].eval_jet(t)?,
            self.components[1].eval_jet(t)?,
            self.components[2].eval_jet(t)?,
        ])
    }

    pub fn position(&self, t: f64) -> Result<Vec3> {
        let j = self.position_jet(t)?;
        Ok(Vec3::new(j[0].f, j[1].f, j[2].f))
    }

    /// `|x'(t)|`.
    pub fn speed(&self, t: f64) -> Result<f64> {
        let j = self.position_jet(t)?;
        Ok(Vec3::new(j[0].d1, j[1].d1, j[2].d1).norm())
    }
}

/// The Frenet data of a curve at one point.
#[derive(Debug, Clone, Copy)]
pub struct FrenetSample {
    /// Arc length from the sampling origin.
    pub s: f64,
    /// Source parameter the sample was taken at (equals `s` for synthesized
    /// curves).
    pub t: f64,
    pub position: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl FrenetSample {
    /// Worst deviation from an orthonormal right-handed frame.
    pub fn orthonormality_deviation(&self) -> f64 {
        let t = self.tangent;
        let n1 = self.normal;
        let n2 = self.binormal;
        let mut dev: f64 = 0.0;
        dev = dev.max((t.norm() - 1.0).abs());
        dev = dev.max((n1.norm() - 1.0).abs());
        dev = dev.max((n2.norm() - 1.0).abs());
        dev = dev.max(t.dot(n1).abs());
        dev = dev.max(t.dot(n2).abs());
        dev = dev.max(n1.dot(n2).abs());
        dev = dev.max((n2 - t.cross(n1)).norm());
        dev
    }
}

/// Frenet frame, curvature and torsion at parameter `t`, with `s` supplied by
/// the caller (the samplers already track arc length).
fn frenet_at(curve: &CurveDef, t: f64, s: f64) -> Result<FrenetSample> {
    let j = curve.position_jet(t)?;
    let position = Vec3::new(j[0].f, j[1].f, j[2].f);
    let v1 = Vec3::new(j[0].d1, j[1].d1, j[2].d1);
    let v2 = Vec3::new(j[0].d2, j[1].d2, j[2].d2);
    let v3 = Vec3::new(j[0].d3, j[1].d3, j[2].d3);

    let speed = v1.norm();
    if speed < EPS_SPEED {
        return Err(Error::DegenerateFrame {
            t,
            reason: format!("speed {speed} below {EPS_SPEED}"),
        });
    }
    let tangent = v1 / speed;
    let c = v1.cross(v2);
    let cn = c.norm();
    if cn < EPS_FRAME * speed.powi(3) {
        if curve.planar {
            // Straight run of a planar curve: adopt the plane normal so the
            // frame (and the decomposition built on it) stays defined.
            let binormal = Vec3::Z;
            let normal = binormal.cross(tangent);
            return Ok(FrenetSample {
                s,
                t,
                position,
                tangent,
                normal,
                binormal,
                kappa1: cn / speed.powi(3),
                kappa2: 0.0,
            });
        }
        return Err(Error::DegenerateFrame {
            t,
            reason: format!(
                "|x' x x''| = {cn} below {EPS_FRAME}*|x'|^3 (vanishing curvature)"
            ),
        });
    }
    let binormal = c / cn;
    let normal = binormal.cross(tangent);
    let kappa1 = cn / speed.powi(3);
    let kappa2 = if curve.planar { 0.0 } else { c.dot(v3) / (cn * cn) };
    Ok(FrenetSample { s, t, position, tangent, normal, binormal, kappa1, kappa2 })
}

/// Frenet frame and curvatures at `t`, with arc length measured from the
/// domain start.
pub fn frenet_apparatus(curve: &CurveDef, t: f64) -> Result<FrenetSample> {
    let (t0, t1) = curve.domain;
    if !(t0..=t1).contains(&t) {
        return Err(Error::Param(format!("t = {t} outside curve domain [{t0}, {t1}]")));
    }
    let s = arc_length(curve, t0, t)?;
    frenet_at(curve, t, s)
}

/// Signed curvature `(x'y'' - y'x'') / |x'|^3` of a planar curve.
pub fn signed_curvature(curve: &CurveDef, t: f64) -> Result<f64> {
    if !curve.planar {
        return Err(Error::Param("signed curvature requires a planar curve".into()));
    }
    let j = curve.position_jet(t)?;
    let v1 = Vec3::new(j[0].d1, j[1].d1, j[2].d1);
    let speed = v1.norm();
    if speed < EPS_SPEED {
        return Err(Error::DegenerateFrame { t, reason: "vanishing speed".into() });
    }
    Ok((j[0].d1 * j[1].d2 - j[1].d1 * j[0].d2) / speed.powi(3))
}

/// Arc length of `curve` between parameters `a` and `b` by adaptive Simpson
/// quadrature (absolute tolerance well under the documented 1e-10).
pub fn arc_length(curve: &CurveDef, a: f64, b: f64) -> Result<f64> {
    let (t0, t1) = curve.domain;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if lo < t0 - 1e-12 || hi > t1 + 1e-12 {
        return Err(Error::Param(format!(
            "arc length bounds [{a}, {b}] outside curve domain [{t0}, {t1}]"
        )));
    }
    let mut speed = |t: f64| curve.speed(t);
    adaptive_simpson(&mut speed, a, b, QUAD_TOL)
}

/// Inverse of the arc-length function: the parameter `t` with
/// `arc_length(curve, t0, t) = s`. Newton iteration with a bisection fallback;
/// arc length is monotone in `t`, so the bracket always converges.
pub fn param_at_arclength(curve: &CurveDef, t0: f64, s: f64) -> Result<f64> {
    let (_, t1) = curve.domain;
    let total = arc_length(curve, t0, t1)?;
    let slack = 1e-9 * (1.0 + total);
    if s < -slack || s > total + slack {
        return Err(Error::Range { s, max: total });
    }
    invert_arclength(curve, t0, t1, s.clamp(0.0, total), total)
}

/// Solve `arc(lo0 -> t) = want` on the bracket `[lo0, hi0]` whose total arc
/// length is `remaining`. Quadrature runs only over the shrinking sub-interval
/// between the bracket's low edge and the iterate, so repeated inversions stay
/// cheap.
fn invert_arclength(
    curve: &CurveDef,
    lo0: f64,
    hi0: f64,
    want: f64,
    remaining: f64,
) -> Result<f64> {
    if want <= 0.0 {
        return Ok(lo0);
    }
    if want >= remaining {
        return Ok(hi0);
    }
    let mut lo = lo0;
    let mut s_lo = 0.0; // arc(lo0 -> lo)
    let mut hi = hi0;
    let mut t = lo + (hi - lo) * want / remaining;
    let tol = INVERT_TOL * (1.0 + want.abs());
    for _ in 0..100 {
        let mut speed_f = |x: f64| curve.speed(x);
        let s_t = s_lo + adaptive_simpson(&mut speed_f, lo, t, QUAD_TOL)?;
        let err = s_t - want;
        if err.abs() <= tol {
            return Ok(t);
        }
        if err > 0.0 {
            hi = t;
        } else {
            lo = t;
            s_lo = s_t;
        }
        if hi - lo < 1e-15 * (1.0 + t.abs()) {
            return Ok(0.5 * (lo + hi));
        }
        let speed = curve.speed(t)?;
        let mut next = if speed > EPS_SPEED { t - err / speed } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        t = next;
    }
    Ok(t)
}

/// How a [`SampledCurve`] came to be.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Analyzed { curve: String },
    Synthesized,
}

/// A curve tabulated at uniform arc-length spacing.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    pub samples: Vec<FrenetSample>,
    pub provenance: Provenance,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Arc-length step between consecutive samples.
    pub fn spacing(&self) -> f64 {
        if self.samples.len() < 2 {
            0.0
        } else {
            self.samples[1].s - self.samples[0].s
        }
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    /// Largest deviation of any sample frame from orthonormality.
    pub fn orthonormality_drift(&self) -> f64 {
        self.samples.iter().map(|p| p.orthonormality_deviation()).fold(0.0, f64::max)
    }

    /// CSV export: `s,x,y,z,Tx,Ty,Tz,N1x,N1y,N1z,N2x,N2y,N2z,kappa1,kappa2`
    /// with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "s,x,y,z,Tx,Ty,Tz,N1x,N1y,N1z,N2x,N2y,N2z,kappa1,kappa2")?;
        for p in &self.samples {
            let cols = [
                p.s,
                p.position.x,
                p.position.y,
                p.position.z,
                p.tangent.x,
                p.tangent.y,
                p.tangent.z,
                p.normal.x,
                p.normal.y,
                p.normal.z,
                p.binormal.x,
                p.binormal.y,
                p.binormal.z,
                p.kappa1,
                p.kappa2,
            ];
            let row: Vec<String> = cols.iter().map(|v| numeric::fmt17(*v)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Sample `curve` at `n` points spaced uniformly in arc length across its
/// domain. Arc length is measured from the domain start.
pub fn sample_curve(curve: &CurveDef, n: usize) -> Result<SampledCurve> {
    if n < 2 {
        return Err(Error::Param(format!("need at least 2 samples, got {n}")));
    }
    let (t0, t1) = curve.domain;
    let total = arc_length(curve, t0, t1)?;
    if total <= 0.0 {
        return Err(Error::DegenerateFrame { t: t0, reason: "curve has zero length".into() });
    }
    let h = total / (n - 1) as f64;
    let mut samples = Vec::with_capacity(n);
    let mut t_prev = t0;
    let mut s_prev = 0.0;
    for i in 0..n {
        let s_i = i as f64 * h;
        let t_i = if i == 0 {
            t0
        } else if i == n - 1 {
            t1
        } else {
            invert_arclength(curve, t_prev, t1, s_i - s_prev, total - s_prev)?
        };
        samples.push(frenet_at(curve, t_i, s_i)?);
        t_prev = t_i;
        s_prev = s_i;
    }
    Ok(SampledCurve {
        samples,
        provenance: Provenance::Analyzed { curve: curve.name.clone() },
    })
}

/// Curvature and torsion as functions of arc length, the input to synthesis.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    /// First curvature; must stay positive on the domain.
    pub kappa1: Expression,
    pub kappa2: Expression,
    pub domain: (f64, f64),
}

impl CurvatureProfile {
    pub fn new(kappa1: Expression, kappa2: Expression, domain: (f64, f64)) -> Result<Self> {
        if !(domain.0.is_finite() && domain.1.is_finite() && domain.0 < domain.1) {
            return Err(Error::Param(format!(
                "profile domain [{}, {}] must be a finite interval",
                domain.0, domain.1
            )));
        }
        Ok(CurvatureProfile { kappa1, kappa2, domain })
    }

    /// Jets of both curvature functions at `s`, rejecting non-positive kappa1.
    pub fn kappa_jets(&self, s: f64) -> Result<(Jet3, Jet3)> {
        let k1 = self.kappa1.eval_jet(s)?;
        if k1.f <= 0.0 {
            return Err(Error::Domain(format!("kappa1({s}) = {} is not positive", k1.f)));
        }
        let k2 = self.kappa2.eval_jet(s)?;
        Ok((k1, k2))
    }
}

/// Anything that can feed curvature and torsion to the synthesizer.
/// Expression-backed profiles are the common case; tabulated or
/// quadrature-backed sources implement this too.
pub trait CurvatureSource {
    fn domain(&self) -> (f64, f64);
    fn curvatures(&self, s: f64) -> Result<(f64, f64)>;
}

impl CurvatureSource for CurvatureProfile {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn curvatures(&self, s: f64) -> Result<(f64, f64)> {
        let (k1, k2) = self.kappa_jets(s)?;
        Ok((k1.f, k2.f))
    }
}

/// Initial data for synthesis: a position and an orthonormal frame.
#[derive(Debug, Clone, Copy)]
pub struct FrameInit {
    pub position: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
}

impl FrameInit {
    /// Identity frame at the origin.
    pub fn identity() -> Self {
        FrameInit {
            position: Vec3::ZERO,
            tangent: Vec3::X,
            normal: Vec3::Y,
            binormal: Vec3::Z,
        }
    }

    pub fn orthonormality_deviation(&self) -> f64 {
        FrenetSample {
            s: 0.0,
            t: 0.0,
            position: self.position,
            tangent: self.tangent,
            normal: self.normal,
            binormal: self.binormal,
            kappa1: 0.0,
            kappa2: 0.0,
        }
        .orthonormality_deviation()
    }
}

#[derive(Clone, Copy)]
struct FrameState {
    x: Vec3,
    t: Vec3,
    n1: Vec3,
    n2: Vec3,
}

impl FrameState {
    fn axpy(self, k: f64, d: FrameState) -> FrameState {
        FrameState {
            x: self.x + d.x * k,
            t: self.t + d.t * k,
            n1: self.n1 + d.n1 * k,
            n2: self.n2 + d.n2 * k,
        }
    }
}

fn frame_derivative(state: &FrameState, k1: f64, k2: f64) -> FrameState {
    FrameState {
        x: state.t,
        t: state.n1 * k1,
        n1: state.t * (-k1) + state.n2 * k2,
        n2: state.n1 * (-k2),
    }
}

/// Integrate the frame system `x' = T`, `T' = k1 N1`, `N1' = -k1 T + k2 N2`,
/// `N2' = -k2 N1` with classical fixed-step RK4, re-orthonormalizing the frame
/// (Gram-Schmidt on T then N1, `N2 = T x N1`) after every step. Produces
/// `steps + 1` samples spaced `(s1 - s0)/steps`.
pub fn synthesize_curve(
    source: &dyn CurvatureSource,
    steps: usize,
    initial: &FrameInit,
) -> Result<SampledCurve> {
    if steps < 16 {
        return Err(Error::Param(format!("synthesis needs at least 16 steps, got {steps}")));
    }
    let dev = initial.orthonormality_deviation();
    if dev > 1e-12 {
        return Err(Error::NonOrthonormalInitialFrame { deviation: dev });
    }
    let (s0, s1) = source.domain();
    let h = (s1 - s0) / steps as f64;
    let mut state = FrameState {
        x: initial.position,
        t: initial.tangent,
        n1: initial.normal,
        n2: initial.binormal,
    };
    let mut samples = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let s = s0 + i as f64 * h;
        let (k1, k2) = source.curvatures(s)?;
        samples.push(FrenetSample {
            s,
            t: s,
            position: state.x,
            tangent: state.t,
            normal: state.n1,
            binormal: state.n2,
            kappa1: k1,
            kappa2: k2,
        });
        if i == steps {
            break;
        }
        let (k1m, k2m) = source.curvatures(s + 0.5 * h)?;
        let (k1e, k2e) = source.curvatures(s + h)?;
        let d1 = frame_derivative(&state, k1, k2);
        let d2 = frame_derivative(&state.axpy(0.5 * h, d1), k1m, k2m);
        let d3 = frame_derivative(&state.axpy(0.5 * h, d2), k1m, k2m);
        let d4 = frame_derivative(&state.axpy(h, d3), k1e, k2e);
        state = state
            .axpy(h / 6.0, d1)
            .axpy(h / 3.0, d2)
            .axpy(h / 3.0, d3)
            .axpy(h / 6.0, d4);
        // Re-orthonormalize: T, then N1 against T, then the cross product.
        let t = state.t.normalized().ok_or(Error::DegenerateFrame {
            t: s + h,
            reason: "tangent collapsed during integration".into(),
        })?;
        let n1_raw = state.n1 - t * t.dot(state.n1);
        let n1 = n1_raw.normalized().ok_or(Error::DegenerateFrame {
            t: s + h,
            reason: "normal collapsed during integration".into(),
        })?;
        state.t = t;
        state.n1 = n1;
        state.n2 = t.cross(n1);
    }
    Ok(SampledCurve { samples, provenance: Provenance::Synthesized })
}

/// Curvature and torsion re-estimated from sample positions alone, by
/// 4th-order finite differences on the uniform arc-length grid. Covers the
/// interior indices `3..n-3`; closes the synthesis round trip independently of
/// the frames the integrator carried.
#[derive(Debug, Clone)]
pub struct CurvatureEstimate {
    pub s: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
}

pub fn estimate_curvatures(curve: &SampledCurve) -> Result<CurvatureEstimate> {
    let n = curve.len();
    numeric::require_samples(n, 7)?;
    let h = curve.spacing();
    let xs: Vec<f64> = curve.samples.iter().map(|p| p.position.x).collect();
    let ys: Vec<f64> = curve.samples.iter().map(|p| p.position.y).collect();
    let zs: Vec<f64> = curve.samples.iter().map(|p| p.position.z).collect();
    let mut out = CurvatureEstimate { s: Vec::new(), kappa1: Vec::new(), kappa2: Vec::new() };
    for i in 3..n - 3 {
        let (dx1, dx2, dx3) = derivatives_123_at(&xs, h, i);
        let (dy1, dy2, dy3) = derivatives_123_at(&ys, h, i);
        let (dz1, dz2, dz3) = derivatives_123_at(&zs, h, i);
        let v1 = Vec3::new(dx1, dy1, dz1);
        let v2 = Vec3::new(dx2, dy2, dz2);
        let v3 = Vec3::new(dx3, dy3, dz3);
        let c = v1.cross(v2);
        let cn = c.norm();
        let speed = v1.norm();
        if speed < EPS_SPEED || cn < EPS_FRAME * speed.powi(3) {
            return Err(Error::DegenerateFrame {
                t: curve.samples[i].s,
                reason: "curvature vanishes along sampled curve".into(),
            });
        }
        out.s.push(curve.samples[i].s);
        out.kappa1.push(cn / speed.powi(3));
        out.kappa2.push(c.dot(v3) / (cn * cn));
    }
    Ok(out)
}
