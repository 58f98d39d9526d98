//! Surrogate maximum score estimation for threshold-crossing binary choice
//! models.
//!
//! The classical maximum score estimator maximizes the fraction of correctly
//! sign-classified observations; its sample objective is a step function, the
//! estimator converges at the cube-root rate, and the naive bootstrap fails.
//! Replacing the indicator with a strictly concave, strictly increasing
//! surrogate score turns the problem into smooth concave maximization with a
//! unique solution, a root-n normal limit, and working standard inference.
//!
//! The crate provides:
//!
//! * [`loss`] — logistic, pseudo-Huber, and probit surrogate scores with
//!   numerically stable derivatives;
//! * [`dgp`] — synthetic threshold-crossing designs (normal, t5, Laplace
//!   covariates with logistic errors) and CSV dataset I/O;
//! * [`estimate`] — projected Newton maximization of the sample surrogate
//!   objective over a norm ball, plus the angle reparameterization;
//! * [`infer`] — sandwich variance, delta-method normal intervals, and the
//!   studentized nonparametric bootstrap;
//! * [`baseline`] — the exact 2-D conventional maximum score estimator via
//!   an angle-arc sweep;
//! * [`mc`] — a reproducible parallel Monte Carlo harness for RMSE, coverage,
//!   and sampling-distribution experiments.

pub mod baseline;
pub mod dgp;
pub mod error;
pub mod estimate;
pub mod infer;
pub mod loss;
pub mod mc;
pub mod seed;

pub use baseline::{fit_maxscore_2d, score_q0, MaxScoreFit};
pub use dgp::{gen_dataset, load_csv, sample_x, write_csv, DataSource, Dataset, SimDesign};
pub use error::{Error, Result};
pub use estimate::{angle_of, fit, fit_angle, objective, AngleFit, FitOptions, FitResult};
pub use infer::{
    angle_sandwich, bootstrap_studentized, bootstrap_studentized_angle, ci_normal,
    ci_normal_angle, sandwich, AngleSandwich, CiMethod, CiReport, SandwichEstimate, Target,
};
pub use loss::{eval_obs_loss, eval_phi, LossKind, LossSpec, PhiEval};
pub use mc::{run_coverage, run_distribution, run_rmse, McCell, McConfig, McRatio, McReport, Method};
