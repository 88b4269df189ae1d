//! Dormand–Prince 5(4) for complex states over a real parameter.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RkError {
    /// The right-hand side refused to evaluate (a pole or singular point).
    Pole { t: f64 },
    StepUnderflow { t: f64 },
    MaxSteps { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkConfig {
    /// Mixed absolute/relative local error target per step.
    pub tol: f64,
    /// Smallest step as a fraction of the interval length.
    pub h_min_rel: f64,
    pub max_steps: usize,
}

impl Default for RkConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            h_min_rel: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOutcome<const N: usize> {
    pub t: f64,
    pub y: [Complex64; N],
    pub steps: usize,
    /// Largest accepted local error estimate in units of `tol` (so at most 1).
    pub max_err: f64,
    /// Whether the observer stopped the integration before `t1`.
    pub stopped: bool,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn axpy<const N: usize>(y: &[Complex64; N], h: f64, ks: &[[Complex64; N]], w: &[f64]) -> [Complex64; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(w) {
        if c != 0.0 {
            for i in 0..N {
                out[i] += k[i] * (h * c);
            }
        }
    }
    out
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction).
///
/// `observer` sees every accepted step and may stop the run by returning
/// `true`.
pub fn integrate<const N: usize>(
    mut rhs: impl FnMut(f64, &[Complex64; N]) -> Option<[Complex64; N]>,
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    cfg: &RkConfig,
    mut observer: impl FnMut(f64, &[Complex64; N]) -> bool,
) -> Result<RkOutcome<N>, RkError> {
    let span = t1 - t0;
    let dir = span.signum();
    let h_min = cfg.h_min_rel * span.abs();
    let mut out = RkOutcome {
        t: t0,
        y: y0,
        steps: 0,
        max_err: 0.0,
        stopped: false,
    };
    if span == 0.0 {
        return Ok(out);
    }
    let mut h = (span.abs() * 0.01).max(h_min);
    let mut k = [[Complex64::default(); N]; 7];
    k[0] = rhs(t0, &y0).ok_or(RkError::Pole { t: t0 })?;
    while (t1 - out.t) * dir > 0.0 {
        if out.steps >= cfg.max_steps {
            return Err(RkError::MaxSteps { t: out.t });
        }
        let last = h >= (t1 - out.t).abs();
        let h_step = if last { t1 - out.t } else { h * dir };
        let mut pole = false;
        for s in 1..7 {
            let ys = axpy(&out.y, h_step, &k[..s], &A[s][..s]);
            match rhs(out.t + C[s] * h_step, &ys) {
                Some(v) => k[s] = v,
                None => {
                    pole = true;
                    break;
                }
            }
        }
        let (y_new, err_norm) = if pole {
            (out.y, f64::INFINITY)
        } else {
            let y_new = axpy(&out.y, h_step, &k[..6], &A[6][..6]);
            let err = axpy(&[Complex64::default(); N], h_step, &k, &E);
            let mut norm: f64 = 0.0;
            for i in 0..N {
                let scale = cfg.tol * (1.0 + out.y[i].norm().max(y_new[i].norm()));
                norm = norm.max(err[i].norm() / scale);
            }
            (y_new, norm)
        };
        if err_norm <= 1.0 {
            out.t = if last { t1 } else { out.t + h_step };
            out.y = y_new;
            out.steps += 1;
            out.max_err = out.max_err.max(err_norm);
            k[0] = k[6];
            let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            h = h_step.abs() * factor;
            if observer(out.t, &out.y) {
                out.stopped = true;
                return Ok(out);
            }
        } else {
            let factor = if err_norm.is_finite() { (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9) } else { 0.25 };
            h = h_step.abs() * factor;
            if h < h_min {
                return Err(if pole {
                    RkError::Pole { t: out.t }
                } else {
                    RkError::StepUnderflow { t: out.t }
                });
            }
        }
    }
    Ok(out)
}
