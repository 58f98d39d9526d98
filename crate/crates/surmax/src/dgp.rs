//! Synthetic data generation and the dataset abstraction.
//!
//! The simulation designs draw a 2-D covariate vector from one of three
//! elliptical families sharing the covariance shape
//! `Sigma = [[1.0, 0.5], [0.5, 1.0]]`:
//!
//! * `Normal`  — `X ~ N(0, Sigma)`;
//! * `T5`      — `X = Z / sqrt(U/5)` with `Z ~ N(0, Sigma)`, `U ~ chi2(5)`;
//! * `Laplace` — `X = sqrt(S) * Z` with `Z ~ N(0, Sigma)`, `S ~ Exp(1)`.
//!
//! Outcomes follow the threshold-crossing rule `y = 1{x'b0 + eps >= 0}` with
//! `b0 = (1,1)/sqrt(2)` (true angle pi/4) and `eps ~ Logistic(0,1)` drawn by
//! inverse CDF from a stream independent of the covariate stream.
//!
//! Reproducibility: covariates and errors use disjoint sub-seeds derived from
//! the master seed (see [`stream_seeds`]), each materialized as a `ChaCha8Rng`.
//! Normal draws use the `rand_distr` ziggurat sampler; chi-square and
//! exponential mixing draws use `rand_distr` as well. These choices are fixed:
//! golden files are pinned to them.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::{ChiSquared, Exp1, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{self, tag};

/// Covariate design for the synthetic threshold-crossing model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimDesign {
    Normal,
    T5,
    Laplace,
}

impl SimDesign {
    pub const ALL: [SimDesign; 3] = [SimDesign::Normal, SimDesign::T5, SimDesign::Laplace];

    /// Covariance shape shared by all designs.
    pub fn sigma() -> [[f64; 2]; 2] {
        [[1.0, 0.5], [0.5, 1.0]]
    }

    /// True coefficient vector `(1,1)/sqrt(2)`.
    pub fn b0() -> [f64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [s, s]
    }

    /// True angle of `b0`.
    pub fn theta0() -> f64 {
        std::f64::consts::FRAC_PI_4
    }

    pub fn name(self) -> &'static str {
        match self {
            SimDesign::Normal => "normal",
            SimDesign::T5 => "t5",
            SimDesign::Laplace => "laplace",
        }
    }

    /// Display label matching the simulation tables.
    pub fn label(self) -> &'static str {
        match self {
            SimDesign::Normal => "(i) Normal",
            SimDesign::T5 => "(ii) t5",
            SimDesign::Laplace => "(iii) Laplace",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "normal" => Ok(SimDesign::Normal),
            "t5" => Ok(SimDesign::T5),
            "laplace" => Ok(SimDesign::Laplace),
            other => Err(Error::Config(format!(
                "unknown design '{other}'; supported: normal, t5, laplace"
            ))),
        }
    }

    /// Stable id used in seed derivation.
    pub(crate) fn seed_id(self) -> u64 {
        match self {
            SimDesign::Normal => 1,
            SimDesign::T5 => 2,
            SimDesign::Laplace => 3,
        }
    }
}

/// Where a dataset came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    Synthetic { design: SimDesign, seed: u64 },
    File { path: PathBuf },
}

/// Observations `(y_i, x_i)` with `y` binary and `x` stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    y: Vec<u8>,
    x: Vec<f64>,
    d: usize,
    pub source: DataSource,
}

impl Dataset {
    /// Build a dataset, validating shapes and the binary outcome.
    pub fn new(y: Vec<u8>, x: Vec<f64>, d: usize, source: DataSource) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension d must be at least 1".into()));
        }
        if x.len() != y.len() * d {
            return Err(Error::Shape {
                expected: y.len() * d,
                got: x.len(),
            });
        }
        if let Some(i) = y.iter().position(|&v| v > 1) {
            return Err(Error::Domain(format!(
                "y must be 0 or 1; found {} at row {}",
                y[i],
                i + 1
            )));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "x must be finite; bad value at row {}",
                i / d + 1
            )));
        }
        Ok(Dataset { y, x, d, source })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn y(&self) -> &[u8] {
        &self.y
    }

    /// Flat row-major covariate storage.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    /// True when both outcome classes occur.
    pub fn has_both_classes(&self) -> bool {
        let ones = self.y.iter().filter(|&&v| v == 1).count();
        ones > 0 && ones < self.y.len()
    }

    /// Resample `n` rows with replacement using the supplied RNG.
    pub(crate) fn resample_into(&self, rng: &mut impl Rng, y: &mut Vec<u8>, x: &mut Vec<f64>) {
        let n = self.n();
        y.clear();
        x.clear();
        for _ in 0..n {
            let k = rng.random_range(0..n);
            y.push(self.y[k]);
            x.extend_from_slice(self.row(k));
        }
    }

    pub(crate) fn from_parts_unchecked(y: Vec<u8>, x: Vec<f64>, d: usize, source: DataSource) -> Self {
        Dataset { y, x, d, source }
    }

    pub(crate) fn into_parts(self) -> (Vec<u8>, Vec<f64>) {
        (self.y, self.x)
    }
}

/// Disjoint sub-seeds (covariate stream, error stream) for a master seed.
pub fn stream_seeds(master: u64) -> (u64, u64) {
    (seed::mix(master, tag::X, &[]), seed::mix(master, tag::EPS, &[]))
}

// Lower Cholesky factor of Sigma: [[1, 0], [0.5, sqrt(3)/2]].
const CHOL_21: f64 = 0.5;
const CHOL_22: f64 = 0.866_025_403_784_438_6;

/// Draw `n` i.i.d. covariate rows (row-major `n x 2`) for a design.
///
/// Per row the stream is consumed in a fixed order: two standard normals
/// (mapped through the Cholesky factor of Sigma), then the design's mixing
/// draw if any. Deterministic given `(design, n, seed)`.
pub fn sample_x(design: SimDesign, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seed::stream(seed);
    let chi5 = ChiSquared::new(5.0).expect("valid dof");
    let mut out = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let g1 = z1;
        let g2 = CHOL_21 * z1 + CHOL_22 * z2;
        let (x1, x2) = match design {
            SimDesign::Normal => (g1, g2),
            SimDesign::T5 => {
                let u: f64 = rng.sample(chi5);
                let s = (u / 5.0).sqrt();
                (g1 / s, g2 / s)
            }
            SimDesign::Laplace => {
                let s: f64 = rng.sample(Exp1);
                let r = s.sqrt();
                (g1 * r, g2 * r)
            }
        };
        out.push(x1);
        out.push(x2);
    }
    out
}

/// Generate a synthetic dataset: covariates from [`sample_x`], logistic
/// errors by inverse CDF from an independent stream, outcomes by the
/// threshold-crossing rule.
pub fn gen_dataset(design: SimDesign, n: usize, master_seed: u64) -> Dataset {
    let (x_seed, e_seed) = stream_seeds(master_seed);
    gen_with_streams(design, n, x_seed, e_seed, master_seed)
}

/// Generation with explicit sub-seeds; `gen_dataset` derives them from the
/// master seed. Exposed so stream independence is testable.
pub fn gen_with_streams(
    design: SimDesign,
    n: usize,
    x_seed: u64,
    e_seed: u64,
    master_seed: u64,
) -> Dataset {
    let x = sample_x(design, n, x_seed);
    let mut erng = seed::stream(e_seed);
    let b0 = SimDesign::b0();
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let u: f64 = erng.sample(Open01);
        let eps = (u / (1.0 - u)).ln();
        let idx = x[2 * i] * b0[0] + x[2 * i + 1] * b0[1];
        y.push(u8::from(idx + eps >= 0.0));
    }
    Dataset::from_parts_unchecked(
        y,
        x,
        2,
        DataSource::Synthetic {
            design,
            seed: master_seed,
        },
    )
}

/// Read a dataset from CSV with header `y,x1,...,xd`.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;

    let headers = rdr
        .headers()
        .map_err(|e| Error::Format(format!("cannot read header: {e}")))?
        .clone();
    if headers.len() < 2 || headers.get(0) != Some("y") {
        return Err(Error::Format(format!(
            "expected header 'y,x1,...,xd', got '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let d = headers.len() - 1;
    for j in 1..headers.len() {
        let want = format!("x{j}");
        if headers.get(j) != Some(want.as_str()) {
            return Err(Error::Format(format!(
                "expected header column {} to be '{want}', got '{}'",
                j + 1,
                headers.get(j).unwrap_or("")
            )));
        }
    }

    let mut y = Vec::new();
    let mut x = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Format(format!("data row {row}: {e}")))?;
        if rec.len() != d + 1 {
            return Err(Error::Format(format!(
                "data row {row}: expected {} fields, got {}",
                d + 1,
                rec.len()
            )));
        }
        let yv: f64 = rec[0]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("data row {row}: cannot parse y '{}'", &rec[0])))?;
        if yv != 0.0 && yv != 1.0 {
            return Err(Error::Domain(format!(
                "data row {row}: y must be 0 or 1, got {}",
                &rec[0]
            )));
        }
        y.push(yv as u8);
        for j in 1..=d {
            let xv: f64 = rec[j].trim().parse().map_err(|_| {
                Error::Format(format!("data row {row}: cannot parse x{j} '{}'", &rec[j]))
            })?;
            if !xv.is_finite() {
                return Err(Error::Format(format!(
                    "data row {row}: x{j} must be finite, got {}",
                    &rec[j]
                )));
            }
            x.push(xv);
        }
    }
    let n = y.len();
    if n <= d {
        return Err(Error::DegenerateData(format!(
            "insufficient data: {n} rows for dimension {d}; need n > d"
        )));
    }
    Dataset::new(
        y,
        x,
        d,
        DataSource::File {
            path: path.to_path_buf(),
        },
    )
}

/// Write a dataset as CSV. Values print in shortest round-trip form, so a
/// write-then-load cycle reproduces `x` bit-exactly and `y` exactly.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut wtr = csv::Writer::from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let d = dataset.dim();
    let mut header = vec!["y".to_string()];
    header.extend((1..=d).map(|j| format!("x{j}")));
    wtr.write_record(&header)
        .map_err(|e| Error::Io(e.to_string()))?;
    for i in 0..dataset.n() {
        let mut rec = vec![dataset.y()[i].to_string()];
        rec.extend(dataset.row(i).iter().map(|v| v.to_string()));
        wtr.write_record(&rec).map_err(|e| Error::Io(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
