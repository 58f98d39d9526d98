//! Surrogate score functions and per-observation losses.
//!
//! A surrogate score `phi` is a strictly concave, strictly increasing,
//! differentiable replacement for the sign indicator in the maximum score
//! objective. Three families are provided, each minus a standard convex
//! classification loss with a positive scale parameter `a`:
//!
//! * logistic:     `phi(u) = -(1/a) * ln(1 + exp(-a*u))`
//! * pseudo-Huber: `phi(u) = u - sqrt(a^2 + u^2)`
//! * probit:       `phi(u) = ln Phi(a*u)` with `Phi` the standard normal CDF
//!
//! All evaluations are stable over the whole real line: the logistic branch
//! works in the log domain, the pseudo-Huber branch goes through `hypot` and
//! a conjugate rearrangement, and the probit branch switches between an
//! erfc-based CDF and a Mills-ratio continued fraction in the deep tail.
//! Where the true value of `phi` falls below the representable range (which
//! happens for pseudo-Huber and probit at astronomically negative `u`), the
//! value saturates at `-f64::MAX` instead of overflowing to `-inf`; the
//! derivatives stay finite everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which surrogate family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Logistic,
    PseudoHuber,
    Probit,
}

impl LossKind {
    /// Name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Logistic => "logistic",
            LossKind::PseudoHuber => "huber",
            LossKind::Probit => "probit",
        }
    }

    /// Scale parameter used in the simulation study for this family.
    pub fn default_scale(self) -> f64 {
        match self {
            LossKind::Logistic => 1.0,
            LossKind::PseudoHuber => 2.0,
            LossKind::Probit => 0.5,
        }
    }

    /// Parse a CLI name ("logistic", "huber", "probit").
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "logistic" => Ok(LossKind::Logistic),
            "huber" => Ok(LossKind::PseudoHuber),
            "probit" => Ok(LossKind::Probit),
            other => Err(Error::Config(format!(
                "unknown loss '{other}'; supported: logistic, huber, probit"
            ))),
        }
    }
}

/// A validated surrogate choice: family plus positive scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossSpec {
    pub kind: LossKind,
    /// Scale parameter; invariant: finite and > 0 (enforced by [`LossSpec::new`]).
    #[serde(rename = "a")]
    scale: f64,
}

impl LossSpec {
    /// Build a spec, rejecting non-positive or non-finite scales.
    pub fn new(kind: LossKind, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Config(format!(
                "loss scale must be a positive real, got {scale}"
            )));
        }
        Ok(LossSpec { kind, scale })
    }

    /// Family with its simulation-study default scale.
    pub fn with_default_scale(kind: LossKind) -> Self {
        LossSpec {
            kind,
            scale: kind.default_scale(),
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Evaluate `phi` with first and second derivatives at `u`.
    pub fn eval(&self, u: f64) -> PhiEval {
        match self.kind {
            LossKind::Logistic => logistic_phi(self.scale, u),
            LossKind::PseudoHuber => pseudo_huber_phi(self.scale, u),
            LossKind::Probit => probit_phi(self.scale, u),
        }
    }
}

/// Value and first two derivatives of the surrogate score at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiEval {
    /// `phi(u)`; negative of the underlying classification loss.
    pub value: f64,
    /// `phi'(u)`; strictly positive for finite `u`.
    pub d1: f64,
    /// `phi''(u)`; strictly negative for finite `u` (may underflow to -0.0
    /// in the far logistic tail).
    pub d2: f64,
}

/// Evaluate the surrogate score; free-function form of [`LossSpec::eval`].
pub fn eval_phi(spec: &LossSpec, u: f64) -> PhiEval {
    spec.eval(u)
}

/// Per-observation surrogate loss with gradient and Hessian in `b`.
///
/// For a binary outcome `y` and index `u = x'b`, the loss is
/// `y*phi(u) + (1-y)*phi(-u)`; its gradient is `s*phi'(s*u) * x` and its
/// Hessian `phi''(s*u) * x x'`, where `s = 2y - 1`. The Hessian is negative
/// semidefinite by construction.
pub fn eval_obs_loss(
    spec: &LossSpec,
    y: u8,
    x: &[f64],
    b: &[f64],
) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
    if x.len() != b.len() {
        return Err(Error::Shape {
            expected: b.len(),
            got: x.len(),
        });
    }
    let s = if y != 0 { 1.0 } else { -1.0 };
    let u: f64 = x.iter().zip(b).map(|(xi, bi)| xi * bi).sum();
    let e = spec.eval(s * u);
    let score: Vec<f64> = x.iter().map(|xi| s * e.d1 * xi).collect();
    let hess: Vec<Vec<f64>> = x
        .iter()
        .map(|xi| x.iter().map(|xj| e.d2 * xi * xj).collect())
        .collect();
    Ok((e.value, score, hess))
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn saturate_low(v: f64) -> f64 {
    if v == f64::NEG_INFINITY {
        -f64::MAX
    } else {
        v
    }
}

fn saturate_high(v: f64) -> f64 {
    if v == f64::INFINITY {
        f64::MAX
    } else {
        v
    }
}

/// `ln(1 + exp(t))` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn logistic_phi(a: f64, u: f64) -> PhiEval {
    let v = a * u; // may round to +-inf for extreme inputs; handled below
    let (sig_pos, sig_neg) = if v >= 0.0 {
        let e = (-v).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = v.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    };
    let sp = softplus(-v);
    // For a*u beyond the exponent range phi(u) ~= u exactly.
    let value = if sp.is_infinite() { u } else { -sp / a };
    PhiEval {
        value: saturate_low(value),
        d1: sig_neg,
        d2: -a * sig_pos * sig_neg,
    }
}

fn pseudo_huber_phi(a: f64, u: f64) -> PhiEval {
    let h = a.hypot(u);
    // value: u - h cancels for u > 0; use the conjugate -a^2/(u+h) there.
    let value = if u > 0.0 {
        -(a * (a / (u + h)))
    } else {
        u - h
    };
    let d1 = if u > 0.0 {
        (a / h) * (a / (u + h))
    } else {
        1.0 - u / h
    };
    // -(a/h)^2 / h computed in ratio form so h^3 never overflows.
    let d2 = -(a / h) * (a / h) / h;
    PhiEval {
        value: saturate_low(value),
        d1,
        d2: saturate_low(d2),
    }
}

/// Gauss continued fraction `D2(k) = k + 2/(k + 3/(k + 4/(k + ...)))`
/// appearing in the lower-tail Mills ratio. Backward recursion depth chosen
/// for sub-1e-14 truncation down to `k = 2` (convergence slows as `k`
/// shrinks).
fn mills_cf_d2(kappa: f64) -> f64 {
    let depth = if kappa >= 3.5 {
        36
    } else if kappa >= 2.5 {
        60
    } else {
        100
    };
    let mut f = kappa;
    let mut j = (depth + 1) as f64;
    while j >= 2.0 {
        f = kappa + j / f;
        j -= 1.0;
    }
    f
}

/// `erf(z)` by Maclaurin series; used only for `|z| <= sqrt(2)`, where some
/// thirty terms reach full f64 precision.
fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut power = z; // holds (-1)^k z^(2k+1) / k!
    let mut sum = z;
    let mut k = 1.0;
    while k <= 60.0 {
        power *= -z2 / k;
        let contrib = power / (2.0 * k + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-18 {
            break;
        }
        k += 1.0;
    }
    std::f64::consts::FRAC_2_SQRT_PI * sum
}

/// `(ln Phi(v), r(v), g(v))` where `r = pdf/CDF` is the inverse Mills ratio
/// and `g = r * (v + r)`; all three stable over the real line.
///
/// Central range `|v| < 2`: series `erf`. Lower tail `v <= -2`: the direct
/// form of `v + r(v)` loses relative accuracy to cancellation (the error
/// grows like `v^2 * eps`), so both `r` and `v + r` come from the Gauss
/// continued fraction — with `D1 = kappa + 1/D2` one has `r = D1`,
/// `v + r = 1/D2`, hence `g = D1/D2` with no subtraction anywhere. Upper
/// tail `v >= 2`: the same fraction evaluated at `kappa = v` gives the
/// complementary mass `Phi(-v) = pdf(v)/D1`, and `ln Phi(v)` follows from
/// `ln1p`.
fn normal_tail_terms(v: f64) -> (f64, f64, f64) {
    if v == f64::INFINITY {
        return (0.0, 0.0, 0.0);
    }
    if v <= -1e154 {
        // v*v would overflow; the limits are log_cdf -> -inf, r -> -v, g -> 1.
        return (f64::NEG_INFINITY, (-v).min(f64::MAX), 1.0);
    }
    let log_pdf = -0.5 * v * v - LN_SQRT_2PI;
    if v <= -2.0 {
        let kappa = -v;
        let d2 = mills_cf_d2(kappa);
        let r = kappa + 1.0 / d2;
        (log_pdf - r.ln(), r, r / d2)
    } else if v < 2.0 {
        let e = erf_series(v / SQRT_2);
        let log_cdf = if v <= 0.0 {
            (0.5 * (1.0 + e)).ln()
        } else {
            (-0.5 * (1.0 - e)).ln_1p()
        };
        let r = (log_pdf - log_cdf).exp();
        (log_cdf, r, r * (v + r))
    } else {
        let d2 = mills_cf_d2(v);
        let r_mirror = v + 1.0 / d2;
        let upper_tail = (log_pdf - r_mirror.ln()).exp();
        let log_cdf = (-upper_tail).ln_1p();
        let r = (log_pdf - log_cdf).exp();
        (log_cdf, r, r * (v + r))
    }
}

fn probit_phi(a: f64, u: f64) -> PhiEval {
    let v = a * u;
    let (log_cdf, r, g) = normal_tail_terms(v);
    PhiEval {
        value: saturate_low(log_cdf),
        d1: saturate_high(a * r),
        d2: -a * a * g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: LossKind, a: f64) -> LossSpec {
        LossSpec::new(kind, a).unwrap()
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(LossSpec::new(LossKind::Logistic, 0.0).is_err());
        assert!(LossSpec::new(LossKind::Probit, -1.0).is_err());
        assert!(LossSpec::new(LossKind::PseudoHuber, f64::NAN).is_err());
    }

    #[test]
    fn logistic_at_zero() {
        let e = spec(LossKind::Logistic, 1.0).eval(0.0);
        assert!((e.value + std::f64::consts::LN_2).abs() < 1e-15);
        assert!((e.d1 - 0.5).abs() < 1e-15);
        assert!((e.d2 + 0.25).abs() < 1e-15);
    }

    #[test]
    fn pseudo_huber_at_zero() {
        let e = spec(LossKind::PseudoHuber, 2.0).eval(0.0);
        assert!((e.value + 2.0).abs() < 1e-15);
        assert!((e.d1 - 1.0).abs() < 1e-15);
        assert!((e.d2 + 0.5).abs() < 1e-15); // -a^2/a^3 = -1/a
    }

    #[test]
    fn probit_at_zero() {
        let e = spec(LossKind::Probit, 0.5).eval(0.0);
        assert!((e.value - 0.5f64.ln()).abs() < 1e-15);
        // 0.5 * pdf(0)/Phi(0) = pdf(0) = 1/sqrt(2*pi)
        assert!((e.d1 - 0.398_942_280_401_432_7).abs() < 1e-15);
    }

    #[test]
    fn logistic_deep_tail_is_linear() {
        let e = spec(LossKind::Logistic, 1.0).eval(-800.0);
        assert!((e.value + 800.0).abs() < 1e-10 * 800.0);
        assert!((e.d1 - 1.0).abs() < 1e-12);
        assert!(e.value.is_finite() && e.d1.is_finite() && e.d2.is_finite());
    }

    #[test]
    fn extreme_inputs_stay_finite() {
        for kind in [LossKind::Logistic, LossKind::PseudoHuber, LossKind::Probit] {
            for a in [0.5, 1.0, 2.0] {
                for u in [
                    -1.0e308, -1.0e200, -1.0e16, -750.0, 750.0, 1.0e16, 1.0e200, 1.0e308,
                    f64::INFINITY,
                ] {
                    let e = spec(kind, a).eval(u);
                    assert!(
                        e.value.is_finite() && e.d1.is_finite() && e.d2.is_finite(),
                        "{kind:?} a={a} u={u} -> {e:?}"
                    );
                    assert!(e.d1 >= 0.0, "{kind:?} a={a} u={u} d1={}", e.d1);
                    assert!(e.d2 <= 0.0, "{kind:?} a={a} u={u} d2={}", e.d2);
                }
            }
        }
    }

    #[test]
    fn obs_loss_symmetry_y0_equals_y1_with_negated_x() {
        let sp = spec(LossKind::Probit, 0.5);
        let x = [2.0, -1.0];
        let neg_x = [-2.0, 1.0];
        let b = [0.3, 0.7];
        let (l0, s0, h0) = eval_obs_loss(&sp, 0, &x, &b).unwrap();
        let (l1, s1, h1) = eval_obs_loss(&sp, 1, &neg_x, &b).unwrap();
        assert_eq!(l0, l1);
        assert_eq!(s0, s1);
        assert_eq!(h0, h1);
    }

    #[test]
    fn obs_loss_at_zero_index() {
        let sp = spec(LossKind::Logistic, 1.0);
        let (l, s, h) = eval_obs_loss(&sp, 1, &[1.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((l + std::f64::consts::LN_2).abs() < 1e-15);
        assert!((s[0] - 0.5).abs() < 1e-15 && s[1] == 0.0);
        assert!((h[0][0] + 0.25).abs() < 1e-15);
        assert_eq!(h[0][1], 0.0);
        assert_eq!(h[1][1], 0.0);
    }

    #[test]
    fn obs_loss_shape_error() {
        let sp = spec(LossKind::Logistic, 1.0);
        assert!(matches!(
            eval_obs_loss(&sp, 1, &[1.0], &[1.0, 2.0]),
            Err(Error::Shape { expected: 2, got: 1 })
        ));
    }
}
