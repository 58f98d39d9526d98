//! Maximization of the sample surrogate objective over a norm ball.
//!
//! The sample objective `Q_n(b)` is the mean of per-observation surrogate
//! losses. It is smooth and concave, and strictly concave whenever the
//! covariates span the full dimension, so projected Newton with an Armijo
//! backtracking line search converges to the unique constrained maximizer.
//! Boundary contact (`||b|| = R`) is legitimate output — it is the expected
//! outcome under perfect separation — and is flagged rather than rejected.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dgp::Dataset;
use crate::error::{Error, Result};
use crate::loss::LossSpec;

/// Options for [`fit`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitOptions {
    /// Radius of the feasible ball; the maximizer is constrained to `||b|| <= radius`.
    pub radius: f64,
    /// Convergence threshold on the (projected) gradient norm.
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Starting point; defaults to the origin, where the gradient is
    /// `phi'(0) * mean[(2y-1) x]`, nonzero for any informative sample.
    pub init: Option<Vec<f64>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            radius: 100.0,
            grad_tol: 1e-10,
            max_iter: 200,
            init: None,
        }
    }
}

/// Output of [`fit`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub b_hat: Vec<f64>,
    /// Sample objective value at `b_hat`.
    pub objective: f64,
    /// Projected gradient norm at `b_hat` (plain gradient norm when interior).
    pub grad_norm: f64,
    pub iterations: usize,
    /// True when the maximizer sits on the ball boundary with the gradient
    /// pointing outward.
    pub on_boundary: bool,
    /// Angle `atan2(b2, b1)` when `d == 2` and `b_hat != 0`.
    pub theta_hat: Option<f64>,
    /// Unit vector `b_hat / ||b_hat||` (zero vector if `b_hat == 0`).
    pub direction: Vec<f64>,
    pub warning: Option<String>,
}

/// Sample surrogate objective with gradient and Hessian at `b`.
///
/// Returns the mean loss, mean score vector, and mean Hessian (negative
/// semidefinite by construction).
pub fn objective(
    dataset: &Dataset,
    spec: &LossSpec,
    b: &[f64],
) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
    let d = dataset.dim();
    if b.len() != d {
        return Err(Error::Shape {
            expected: d,
            got: b.len(),
        });
    }
    let mut grad = vec![0.0; d];
    let mut hess = vec![0.0; d * d];
    let q = accumulate(dataset, spec, b, &mut grad, &mut hess);
    let hess_rows = (0..d)
        .map(|j| hess[j * d..(j + 1) * d].to_vec())
        .collect();
    Ok((q, grad, hess_rows))
}

/// Mean loss, filling `grad` and row-major `hess` (both length-checked by the
/// caller). Only the upper triangle is accumulated, then mirrored.
fn accumulate(dataset: &Dataset, spec: &LossSpec, b: &[f64], grad: &mut [f64], hess: &mut [f64]) -> f64 {
    let d = dataset.dim();
    let n = dataset.n();
    grad.fill(0.0);
    hess.fill(0.0);
    let mut q = 0.0;
    let xs = dataset.x();
    for (i, &yi) in dataset.y().iter().enumerate() {
        let row = &xs[i * d..(i + 1) * d];
        let mut u = 0.0;
        for j in 0..d {
            u += row[j] * b[j];
        }
        let s = if yi != 0 { 1.0 } else { -1.0 };
        let e = spec.eval(s * u);
        q += e.value;
        let c = s * e.d1;
        for j in 0..d {
            grad[j] += c * row[j];
            let cj = e.d2 * row[j];
            for k in j..d {
                hess[j * d + k] += cj * row[k];
            }
        }
    }
    let inv_n = 1.0 / n as f64;
    q *= inv_n;
    for g in grad.iter_mut() {
        *g *= inv_n;
    }
    for j in 0..d {
        for k in j..d {
            hess[j * d + k] *= inv_n;
            hess[k * d + j] = hess[j * d + k];
        }
    }
    q
}

/// Mean loss only (used by the line search).
fn objective_value(dataset: &Dataset, spec: &LossSpec, b: &[f64]) -> f64 {
    let d = dataset.dim();
    let xs = dataset.x();
    let mut q = 0.0;
    for (i, &yi) in dataset.y().iter().enumerate() {
        let row = &xs[i * d..(i + 1) * d];
        let mut u = 0.0;
        for j in 0..d {
            u += row[j] * b[j];
        }
        let s = if yi != 0 { 1.0 } else { -1.0 };
        q += spec.eval(s * u).value;
    }
    q / dataset.n() as f64
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn project_ball(b: &mut [f64], radius: f64) {
    let nb = norm(b);
    if nb > radius {
        let s = radius / nb;
        for v in b.iter_mut() {
            *v *= s;
        }
    }
}

/// Relative rank threshold for the sample second-moment matrix.
const COLLINEARITY_TOL: f64 = 1e-10;

fn check_full_rank(dataset: &Dataset) -> Result<()> {
    let d = dataset.dim();
    let n = dataset.n();
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 0..n {
        let row = dataset.row(i);
        for j in 0..d {
            for k in 0..d {
                m[(j, k)] += row[j] * row[k];
            }
        }
    }
    m /= n as f64;
    let eig = SymmetricEigen::new(m);
    let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if max <= 0.0 || min / max < COLLINEARITY_TOL {
        return Err(Error::DegenerateData(format!(
            "covariate columns are collinear (eigenvalue ratio {:.3e})",
            if max > 0.0 { min / max } else { 0.0 }
        )));
    }
    Ok(())
}

/// Maximize the sample surrogate objective over `||b|| <= radius`.
pub fn fit(dataset: &Dataset, spec: &LossSpec, opts: &FitOptions) -> Result<FitResult> {
    let d = dataset.dim();
    let n = dataset.n();
    if !(opts.radius.is_finite() && opts.radius > 0.0) {
        return Err(Error::Config(format!("radius must be positive, got {}", opts.radius)));
    }
    if !(opts.grad_tol.is_finite() && opts.grad_tol > 0.0) {
        return Err(Error::Config(format!(
            "grad_tol must be positive, got {}",
            opts.grad_tol
        )));
    }
    if !dataset.has_both_classes() {
        return Err(Error::DegenerateData(
            "dataset contains a single outcome class".into(),
        ));
    }
    if n < d + 1 {
        return Err(Error::DegenerateData(format!(
            "need at least d+1 = {} observations, got {n}",
            d + 1
        )));
    }
    check_full_rank(dataset)?;

    let mut b = match &opts.init {
        Some(v) => {
            if v.len() != d {
                return Err(Error::Shape {
                    expected: d,
                    got: v.len(),
                });
            }
            let mut b = v.clone();
            project_ball(&mut b, opts.radius);
            b
        }
        None => vec![0.0; d],
    };

    let mut grad = vec![0.0; d];
    let mut hess = vec![0.0; d * d];
    let mut q = accumulate(dataset, spec, &b, &mut grad, &mut hess);

    let boundary_eps = opts.radius * 1e-9;
    let mut iterations = 0;

    loop {
        // Projected gradient: on the boundary with an outward gradient, only
        // the tangential component can still be followed.
        let nb = norm(&b);
        let g_norm = norm(&grad);
        let mut pg = grad.clone();
        let mut at_boundary = false;
        if nb >= opts.radius - boundary_eps && nb > 0.0 {
            let gu: f64 = grad.iter().zip(&b).map(|(g, bi)| g * bi).sum::<f64>() / nb;
            if gu > 0.0 {
                at_boundary = true;
                for j in 0..d {
                    pg[j] -= gu * b[j] / nb;
                }
            }
        }
        let pg_norm = norm(&pg);
        if pg_norm <= opts.grad_tol {
            return Ok(finish(b, q, pg_norm, iterations, at_boundary, opts));
        }
        if iterations >= opts.max_iter {
            return Err(Error::IterationLimit {
                max_iter: opts.max_iter,
                grad_norm: pg_norm,
                last_iterate: b,
            });
        }

        // Newton step on the concave objective: solve (-H + ridge I) p = g.
        // The ridge engages only when -H fails to factor.
        let neg_h = DMatrix::from_fn(d, d, |j, k| -hess[j * d + k]);
        let trace_scale = (0..d).map(|j| neg_h[(j, j)]).sum::<f64>() / d as f64;
        let g_vec = DVector::from_column_slice(&grad);
        let mut newton = None;
        let mut ridge = 0.0;
        for _ in 0..8 {
            let mut m = neg_h.clone();
            if ridge > 0.0 {
                for j in 0..d {
                    m[(j, j)] += ridge;
                }
            }
            if let Some(ch) = Cholesky::new(m) {
                newton = Some(ch.solve(&g_vec));
                break;
            }
            ridge = if ridge == 0.0 {
                1e-12 * trace_scale.max(f64::MIN_POSITIVE)
            } else {
                ridge * 1e2
            };
        }

        // Quadratic-basin endgame: once the Newton step is tiny, objective
        // increments drop below f64 value resolution and a value-based
        // Armijo test can no longer certify ascent. Newton is a contraction
        // there, so take the full (projected) step unconditionally.
        if let Some(nsol) = &newton {
            let step_norm = norm(nsol.as_slice());
            if step_norm <= 1e-6 * (1.0 + nb) {
                for j in 0..d {
                    b[j] += nsol[j];
                }
                project_ball(&mut b, opts.radius);
                q = accumulate(dataset, spec, &b, &mut grad, &mut hess);
                iterations += 1;
                continue;
            }
        }

        // Direction candidates: the Newton step (capped — in flat far-field
        // regions the near-singular Hessian produces steps far longer than
        // the ball, which starves the backtracking), then the projected
        // gradient scaled to the ball radius.
        let mut directions: Vec<Vec<f64>> = Vec::with_capacity(2);
        if let Some(nsol) = newton {
            let mut dir: Vec<f64> = nsol.iter().cloned().collect();
            let len = norm(&dir);
            let cap = 4.0 * opts.radius;
            if len > cap {
                for v in dir.iter_mut() {
                    *v *= cap / len;
                }
            }
            directions.push(dir);
        }
        directions.push(pg.iter().map(|v| v * opts.radius / pg_norm).collect());

        let mut accepted = false;
        'dirs: for dir in &directions {
            let mut t = 1.0;
            for _ in 0..60 {
                let mut cand = b.clone();
                for j in 0..d {
                    cand[j] += t * dir[j];
                }
                project_ball(&mut cand, opts.radius);
                let pred: f64 = grad
                    .iter()
                    .zip(cand.iter().zip(&b))
                    .map(|(g, (c, old))| g * (c - old))
                    .sum();
                if pred > 0.0 {
                    let q_cand = objective_value(dataset, spec, &cand);
                    if q_cand >= q + 1e-4 * pred {
                        b = cand;
                        q = accumulate(dataset, spec, &b, &mut grad, &mut hess);
                        accepted = true;
                        break 'dirs;
                    }
                }
                t *= 0.5;
            }
        }
        iterations += 1;
        if !accepted {
            // Line search exhausted. On the boundary with the gradient
            // near-parallel to b this is convergence of the constrained
            // problem (the tangential component has hit the floating-point
            // floor; only interior fits promise grad_norm <= grad_tol).
            if at_boundary && pg_norm <= 1e-6 * (1.0 + g_norm) {
                return Ok(finish(b, q, pg_norm, iterations, true, opts));
            }
            return Err(Error::IterationLimit {
                max_iter: iterations,
                grad_norm: pg_norm,
                last_iterate: b,
            });
        }
    }
}

fn finish(
    b: Vec<f64>,
    q: f64,
    grad_norm: f64,
    iterations: usize,
    on_boundary: bool,
    opts: &FitOptions,
) -> FitResult {
    let nb = norm(&b);
    let direction = if nb > 0.0 {
        b.iter().map(|v| v / nb).collect()
    } else {
        vec![0.0; b.len()]
    };
    let theta_hat = if b.len() == 2 && nb > 0.0 {
        Some(b[1].atan2(b[0]))
    } else {
        None
    };
    let warning = if on_boundary {
        Some(format!(
            "maximizer lies on the ||b|| = {} boundary; possible perfect separation",
            opts.radius
        ))
    } else if nb == 0.0 {
        Some("maximizer is the zero vector; direction undefined".into())
    } else {
        None
    };
    FitResult {
        b_hat: b,
        objective: q,
        grad_norm,
        iterations,
        on_boundary,
        theta_hat,
        direction,
        warning,
    }
}

/// Unit-norm direction fit in two dimensions.
///
/// Maximizes `theta -> Q_n(b(theta))` with `b(theta) = (cos theta, sin theta)`
/// — the parameterization the simulation study estimates and reports. The
/// restriction of the concave sample objective to the circle is quasiconcave
/// (superlevel sets of a concave function cut the circle in arcs), so a
/// coarse grid followed by Newton polishing finds the unique mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleFit {
    /// Maximizing angle in (-pi, pi].
    pub theta_hat: f64,
    /// Sample objective at the maximizer.
    pub objective: f64,
    /// |dQ/dtheta| at the maximizer.
    pub grad_norm: f64,
    pub iterations: usize,
}

/// Objective, first and second theta-derivatives, and the mean squared
/// per-observation theta-score at `b(theta)`; single pass over the data.
pub(crate) fn theta_terms(
    dataset: &Dataset,
    spec: &LossSpec,
    theta: f64,
) -> (f64, f64, f64, f64) {
    let (c, s) = (theta.cos(), theta.sin());
    let xs = dataset.x();
    let (mut q, mut g, mut h, mut omega) = (0.0, 0.0, 0.0, 0.0);
    for (i, &yi) in dataset.y().iter().enumerate() {
        let x1 = xs[2 * i];
        let x2 = xs[2 * i + 1];
        let u = x1 * c + x2 * s;
        let du = -x1 * s + x2 * c; // second derivative of u in theta is -u
        let sg = if yi != 0 { 1.0 } else { -1.0 };
        let e = spec.eval(sg * u);
        q += e.value;
        let psi = sg * e.d1 * du;
        g += psi;
        omega += psi * psi;
        h += e.d2 * du * du - sg * e.d1 * u;
    }
    let inv_n = 1.0 / dataset.n() as f64;
    (q * inv_n, g * inv_n, h * inv_n, omega * inv_n)
}

const ANGLE_GRID: usize = 64;
const ANGLE_GRAD_TOL: f64 = 1e-11;
const ANGLE_MAX_ITER: usize = 100;

/// Fit the direction by maximizing over the unit circle.
pub fn fit_angle(dataset: &Dataset, spec: &LossSpec) -> Result<AngleFit> {
    fit_angle_from(dataset, spec, None)
}

/// Direction fit with an optional warm start (used by bootstrap refits).
/// Without one, a 64-point grid locates the mode basin first.
pub fn fit_angle_from(dataset: &Dataset, spec: &LossSpec, init: Option<f64>) -> Result<AngleFit> {
    if dataset.dim() != 2 {
        return Err(Error::Shape {
            expected: 2,
            got: dataset.dim(),
        });
    }
    if !dataset.has_both_classes() {
        return Err(Error::DegenerateData(
            "dataset contains a single outcome class".into(),
        ));
    }
    if dataset.n() < 3 {
        return Err(Error::DegenerateData(format!(
            "need at least 3 observations, got {}",
            dataset.n()
        )));
    }
    check_full_rank(dataset)?;

    let mut theta = match init {
        Some(t) => t,
        None => {
            let mut best = (f64::MIN, 0.0);
            for k in 0..ANGLE_GRID {
                let t = -std::f64::consts::PI
                    + (k as f64 + 0.5) * std::f64::consts::TAU / ANGLE_GRID as f64;
                let q = theta_terms(dataset, spec, t).0;
                if q > best.0 {
                    best = (q, t);
                }
            }
            best.1
        }
    };

    let mut iterations = 0;
    loop {
        let (q, g, h, _) = theta_terms(dataset, spec, theta);
        if g.abs() <= ANGLE_GRAD_TOL {
            if h >= 0.0 {
                return Err(Error::DegenerateData(
                    "direction fit converged to a non-maximum stationary point".into(),
                ));
            }
            return Ok(AngleFit {
                theta_hat: wrap_angle(theta),
                objective: q,
                grad_norm: g.abs(),
                iterations,
            });
        }
        if iterations >= ANGLE_MAX_ITER {
            return Err(Error::IterationLimit {
                max_iter: ANGLE_MAX_ITER,
                grad_norm: g.abs(),
                last_iterate: vec![theta.cos(), theta.sin()],
            });
        }
        // Newton step with a trust cap; fall back to a damped gradient move
        // if the local curvature has the wrong sign.
        let mut step = if h < 0.0 { -g / h } else { g.signum() * 0.1 };
        step = step.clamp(-0.5, 0.5);
        theta += step;
        iterations += 1;
        if step.abs() < 1e-14 {
            let (q, g, h, _) = theta_terms(dataset, spec, theta);
            if h >= 0.0 {
                return Err(Error::DegenerateData(
                    "direction fit stalled at a non-maximum stationary point".into(),
                ));
            }
            return Ok(AngleFit {
                theta_hat: wrap_angle(theta),
                objective: q,
                grad_norm: g.abs(),
                iterations,
            });
        }
    }
}

fn wrap_angle(mut t: f64) -> f64 {
    const TAU: f64 = std::f64::consts::TAU;
    t %= TAU;
    if t > std::f64::consts::PI {
        t -= TAU;
    } else if t <= -std::f64::consts::PI {
        t += TAU;
    }
    t
}

/// Angle of a 2-D coefficient vector plus the gradient of `b -> atan2(b2, b1)`
/// for delta-method use.
pub fn angle_of(b: &[f64]) -> Result<(f64, Vec<f64>)> {
    if b.len() != 2 {
        return Err(Error::Shape {
            expected: 2,
            got: b.len(),
        });
    }
    let norm2 = b[0] * b[0] + b[1] * b[1];
    if norm2 == 0.0 {
        return Err(Error::Domain("angle of the zero vector is undefined".into()));
    }
    let theta = b[1].atan2(b[0]);
    Ok((theta, vec![-b[1] / norm2, b[0] / norm2]))
}
