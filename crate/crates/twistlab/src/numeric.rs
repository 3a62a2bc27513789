//! Shared numerical kernels: adaptive quadrature, finite-difference stencils
//! on uniform grids, and a small symmetric 3x3 solver.

use crate::error::{Error, Result};

/// Absolute tolerance used for arc-length quadrature. Tighter than the
/// documented 1e-10 contract so that downstream finite differences are not
/// limited by positioning noise.
pub const QUAD_TOL: f64 = 1e-12;

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`, with interval bisection driven by the classic |S2 - S1|/15 estimate.
pub fn adaptive_simpson<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let half = 0.5 * tol;
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}

/// First derivative of a uniformly spaced series by the 4th-order central
/// stencil. The result covers interior indices `2..n-2`; `offset` in the
/// returned pair tells where it aligns in the input.
pub fn derivative_series(values: &[f64], h: f64) -> (usize, Vec<f64>) {
    let n = values.len();
    if n < 5 {
        return (0, Vec::new());
    }
    let mut out = Vec::with_capacity(n - 4);
    for i in 2..n - 2 {
        let d = (-values[i + 2] + 8.0 * values[i + 1] - 8.0 * values[i - 1] + values[i - 2])
            / (12.0 * h);
        out.push(d);
    }
    (2, out)
}

/// 4th-order central first, second and third derivatives of a uniformly
/// spaced series at interior index `i` (requires `3 <= i <= n-4`).
pub fn derivatives_123_at(values: &[f64], h: f64, i: usize) -> (f64, f64, f64) {
    let d1 = (-values[i + 2] + 8.0 * values[i + 1] - 8.0 * values[i - 1] + values[i - 2])
        / (12.0 * h);
    let d2 = (-values[i + 2] + 16.0 * values[i + 1] - 30.0 * values[i] + 16.0 * values[i - 1]
        - values[i - 2])
        / (12.0 * h * h);
    let d3 = (values[i - 3] - 8.0 * values[i - 2] + 13.0 * values[i - 1] - 13.0 * values[i + 1]
        + 8.0 * values[i + 2]
        - values[i + 3])
        / (8.0 * h * h * h);
    (d1, d2, d3)
}

/// Population statistics of a series.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Solution of a symmetric 3x3 system by Jacobi eigendecomposition.
///
/// Rank-deficient systems (within `1e-12` of the largest eigenvalue) get the
/// minimum-norm solution and are flagged.
pub struct Sym3Solution {
    pub x: [f64; 3],
    pub rank_deficient: bool,
}

pub fn solve_symmetric3(a: [[f64; 3]; 3], b: [f64; 3]) -> Sym3Solution {
    let (vals, vecs) = jacobi_eigen3(a);
    let max_val = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = 1e-12 * max_val.max(f64::MIN_POSITIVE);
    let mut x = [0.0; 3];
    let mut rank_deficient = false;
    for k in 0..3 {
        if vals[k].abs() <= cutoff {
            rank_deficient = true;
            continue;
        }
        let vk = vecs[k];
        let proj = (vk[0] * b[0] + vk[1] * b[1] + vk[2] * b[2]) / vals[k];
        for j in 0..3 {
            x[j] += proj * vk[j];
        }
    }
    Sym3Solution { x, rank_deficient }
}

/// Eigenvalues and orthonormal eigenvectors of a symmetric 3x3 matrix by
/// cyclic Jacobi rotations. Returns `(values, vectors)` with `vectors[k]`
/// the eigenvector of `values[k]`.
fn jacobi_eigen3(mut a: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..50 {
        // Largest off-diagonal element.
        let mut p = 0;
        let mut q = 1;
        let mut big = a[0][1].abs();
        if a[0][2].abs() > big {
            p = 0;
            q = 2;
            big = a[0][2].abs();
        }
        if a[1][2].abs() > big {
            p = 1;
            q = 2;
            big = a[1][2].abs();
        }
        if big < 1e-300 || big < 1e-16 * (a[0][0].abs() + a[1][1].abs() + a[2][2].abs()) {
            break;
        }
        let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        let mut rot = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        rot[p][p] = c;
        rot[q][q] = c;
        rot[p][q] = s;
        rot[q][p] = -s;
        // a = rot^T a rot, v = v rot
        let mut na = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut sum = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        sum += rot[k][i] * a[k][l] * rot[l][j];
                    }
                }
                na[i][j] = sum;
            }
        }
        a = na;
        let mut nv = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut sum = 0.0;
                for k in 0..3 {
                    sum += v[i][k] * rot[k][j];
                }
                nv[i][j] = sum;
            }
        }
        v = nv;
    }
    let vals = [a[0][0], a[1][1], a[2][2]];
    // Columns of v are the eigenvectors; return them as rows for convenience.
    let vecs = [
        [v[0][0], v[1][0], v[2][0]],
        [v[0][1], v[1][1], v[2][1]],
        [v[0][2], v[1][2], v[2][2]],
    ];
    (vals, vecs)
}

/// Render a float with 17 significant digits, the fixed width every exported
/// file uses so values round-trip bit-exactly and output stays byte-stable.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Guard for grid operations that need a 4th-order stencil plus headroom.
pub fn require_samples(n: usize, required: usize) -> Result<()> {
    if n < required {
        Err(Error::InsufficientSamples { required, got: n })
    } else {
        Ok(())
    }
}
