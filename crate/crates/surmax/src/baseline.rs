//! Conventional maximum score estimation, exact in two dimensions.
//!
//! The step objective counts correct sign classifications. As a function of
//! the direction angle it is piecewise constant, changing value only where
//! some `x_i' b(theta)` crosses zero, i.e. at the two angles perpendicular to
//! each observation. Sorting those breakpoints and sweeping the circle with
//! integer score updates yields the exact global arc maximum in O(n log n) —
//! something a grid search cannot certify for a discontinuous objective.

use serde::{Deserialize, Serialize};

use crate::dgp::Dataset;
use crate::error::{Error, Result};

/// Exact 2-D maximum score fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxScoreFit {
    /// Midpoint of a maximizing arc, wrapped to (-pi, pi].
    pub theta_hat: f64,
    /// Achieved fraction of correct classifications, in [0, 1].
    pub score: f64,
    /// Open angle interval around `theta_hat` on which the objective is
    /// constant at its maximum; may extend past +-pi.
    pub argmax_interval: (f64, f64),
}

/// Fraction of observations whose sign `x_i'b` classifies correctly.
pub fn score_q0(dataset: &Dataset, b: &[f64]) -> Result<f64> {
    let d = dataset.dim();
    if b.len() != d {
        return Err(Error::Shape {
            expected: d,
            got: b.len(),
        });
    }
    if b.iter().all(|&v| v == 0.0) {
        return Err(Error::Domain("maximum score direction must be nonzero".into()));
    }
    let mut correct = 0usize;
    for (i, &yi) in dataset.y().iter().enumerate() {
        let row = dataset.row(i);
        let mut u = 0.0;
        for j in 0..d {
            u += row[j] * b[j];
        }
        let positive = u >= 0.0;
        if (yi == 1) == positive {
            correct += 1;
        }
    }
    Ok(correct as f64 / dataset.n() as f64)
}

fn wrap_pi(mut t: f64) -> f64 {
    const TAU: f64 = std::f64::consts::TAU;
    t %= TAU;
    if t > std::f64::consts::PI {
        t -= TAU;
    } else if t <= -std::f64::consts::PI {
        t += TAU;
    }
    t
}

/// Exact maximum score over directions `b(theta) = (cos theta, sin theta)`.
///
/// Observations with `x_i = 0` always classify as positive and generate no
/// breakpoint. Ties across maximizing arcs break toward the arc whose
/// midpoint is closest to angle zero, then toward the lowest arc index.
pub fn fit_maxscore_2d(dataset: &Dataset) -> Result<MaxScoreFit> {
    if dataset.dim() != 2 {
        return Err(Error::Shape {
            expected: 2,
            got: dataset.dim(),
        });
    }
    let n = dataset.n();
    if n < 2 {
        return Err(Error::DegenerateData(format!(
            "maximum score needs at least 2 observations, got {n}"
        )));
    }

    // Constant contribution and sign-change events for the sweep.
    // For x != 0 the indicator 1{x'b(theta) >= 0} is 1 on the closed arc
    // [alpha - pi/2, alpha + pi/2] around alpha = atan2(x2, x1).
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * n);
    let mut constant = 0i64;
    for (i, &yi) in dataset.y().iter().enumerate() {
        let row = dataset.row(i);
        let s = if yi == 1 { 1i64 } else { -1i64 };
        if row[0] == 0.0 && row[1] == 0.0 {
            constant += i64::from(yi == 1);
            continue;
        }
        constant += i64::from(yi == 0);
        let alpha = row[1].atan2(row[0]);
        events.push((wrap_pi(alpha - std::f64::consts::FRAC_PI_2), s));
        events.push((wrap_pi(alpha + std::f64::consts::FRAC_PI_2), -s));
    }
    if events.is_empty() {
        return Err(Error::DegenerateData(
            "all covariate rows are zero; no direction is informative".into(),
        ));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Collapse events sharing an angle into (angle, delta) breakpoints.
    let mut angles: Vec<f64> = Vec::with_capacity(events.len());
    let mut deltas: Vec<i64> = Vec::with_capacity(events.len());
    for (ang, s) in events {
        if angles.last() == Some(&ang) {
            *deltas.last_mut().unwrap() += s;
        } else {
            angles.push(ang);
            deltas.push(s);
        }
    }
    let m = angles.len();

    // Score on the first arc (angles[0], angles[1]) evaluated directly,
    // then integer updates while sweeping the remaining arcs.
    let first_hi = if m > 1 {
        angles[1]
    } else {
        angles[0] + std::f64::consts::TAU
    };
    let mid0 = (angles[0] + first_hi) / 2.0;
    let dir0 = [mid0.cos(), mid0.sin()];
    let mut f: i64 = 0;
    for (i, &yi) in dataset.y().iter().enumerate() {
        let row = dataset.row(i);
        if row[0] == 0.0 && row[1] == 0.0 {
            continue;
        }
        let s = if yi == 1 { 1i64 } else { -1i64 };
        if row[0] * dir0[0] + row[1] * dir0[1] >= 0.0 {
            f += s;
        }
    }

    let mut best_f = f;
    let mut best_arc = 0usize;
    let mut best_mid_dist = wrap_pi(mid0).abs();
    for j in 1..m {
        f += deltas[j];
        if f > best_f {
            best_f = f;
            best_arc = j;
            let hi = if j + 1 < m { angles[j + 1] } else { angles[0] + std::f64::consts::TAU };
            best_mid_dist = wrap_pi((angles[j] + hi) / 2.0).abs();
        } else if f == best_f {
            let hi = if j + 1 < m { angles[j + 1] } else { angles[0] + std::f64::consts::TAU };
            let dist = wrap_pi((angles[j] + hi) / 2.0).abs();
            if dist < best_mid_dist {
                best_arc = j;
                best_mid_dist = dist;
            }
        }
    }

    let lo = angles[best_arc];
    let hi = if best_arc + 1 < m {
        angles[best_arc + 1]
    } else {
        angles[0] + std::f64::consts::TAU
    };
    let width = hi - lo;
    let theta_hat = wrap_pi((lo + hi) / 2.0);
    Ok(MaxScoreFit {
        theta_hat,
        score: (constant + best_f) as f64 / n as f64,
        argmax_interval: (theta_hat - width / 2.0, theta_hat + width / 2.0),
    })
}
