//! Seeded biased-annotator simulator with known ground truth.
//!
//! Each datapoint gets a latent score drawn uniformly on `[1, K]`. Annotator
//! `i` reports `clamp(round(spread_i·(t − mid) + mid + bias_i + noise), 1, K)`
//! with `mid = (1 + K)/2` and Gaussian noise, then drops the cell (rating 0)
//! with probability `missing_prob`.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{AnnotationMatrix, DataError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid synthetic spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_annotators: usize,
    pub n_datapoints: usize,
    pub scale_max: u32,
    /// Additive offset per annotator; a single value applies to everyone.
    pub bias: Vec<f64>,
    /// Range multiplier around the scale midpoint per annotator; a single value applies to everyone.
    pub spread: Vec<f64>,
    pub noise_sd: f64,
    pub missing_prob: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_annotators: 4,
            n_datapoints: 138,
            scale_max: 7,
            bias: vec![0.0],
            spread: vec![1.0],
            noise_sd: 0.0,
            missing_prob: 0.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |msg: String| Err(SpecError::Invalid(msg));
        if self.n_annotators == 0 {
            return bad("n_annotators must be at least 1".into());
        }
        if self.n_datapoints < 2 {
            return bad("n_datapoints must be at least 2".into());
        }
        if self.scale_max < 2 {
            return bad("scale_max must be at least 2".into());
        }
        for (name, v) in [("bias", &self.bias), ("spread", &self.spread)] {
            if v.len() != 1 && v.len() != self.n_annotators {
                return bad(format!(
                    "{name} needs 1 or {} values, got {}",
                    self.n_annotators,
                    v.len()
                ));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return bad(format!("{name} values must be finite"));
            }
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return bad(format!("noise_sd must be finite and >= 0, got {}", self.noise_sd));
        }
        if !(0.0..1.0).contains(&self.missing_prob) {
            return bad(format!("missing_prob must be in [0, 1), got {}", self.missing_prob));
        }
        Ok(())
    }

    fn per_annotator(v: &[f64], i: usize) -> f64 {
        if v.len() == 1 {
            v[0]
        } else {
            v[i]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub matrix: AnnotationMatrix,
    pub truth: Vec<f64>,
}

/// Draws a matrix and its ground truth. Deterministic in `spec.seed`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Synthetic, SpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = f64::from(spec.scale_max);
    let mid = (1.0 + k) / 2.0;
    let noise = Normal::new(0.0, spec.noise_sd).map_err(|e| SpecError::Invalid(e.to_string()))?;

    let truth: Vec<f64> = (0..spec.n_datapoints).map(|_| rng.random_range(1.0..=k)).collect();
    let mut ratings = Array2::<u32>::zeros((spec.n_annotators, spec.n_datapoints));
    for i in 0..spec.n_annotators {
        let bias = SyntheticSpec::per_annotator(&spec.bias, i);
        let spread = SyntheticSpec::per_annotator(&spec.spread, i);
        for (j, &t) in truth.iter().enumerate() {
            let eps: f64 = noise.sample(&mut rng);
            let drop = rng.random::<f64>() < spec.missing_prob;
            let raw = (spread * (t - mid) + mid + bias + eps).round().clamp(1.0, k);
            ratings[[i, j]] = if drop { 0 } else { raw as u32 };
        }
    }
    let matrix = AnnotationMatrix::new(ratings, spec.scale_max, None, None)?;
    Ok(Synthetic { matrix, truth })
}
