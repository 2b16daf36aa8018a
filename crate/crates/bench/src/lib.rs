//! Fixtures shared by the benchmarks.

use likert_lpp::{generate_synthetic, AnnotationMatrix, SyntheticSpec};

/// Noisy synthetic matrix with a fixed seed.
pub fn fixture(n_annotators: usize, n_datapoints: usize, missing_prob: f64) -> AnnotationMatrix {
    let spec = SyntheticSpec {
        n_annotators,
        n_datapoints,
        scale_max: 7,
        noise_sd: 0.8,
        missing_prob,
        seed: 7,
        ..SyntheticSpec::default()
    };
    generate_synthetic(&spec).expect("valid spec").matrix
}
