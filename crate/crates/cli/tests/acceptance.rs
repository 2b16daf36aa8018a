//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use likert_lpp::baseline::DENOISED_TIE_TOL;
use likert_lpp::{
    denoise_pipeline, discrimination, generalized_eigen, jacobi_eigen, laplacian_pair, mean_baseline, postprocess,
    project_direction, sandwich, solve_embedding, spearman, AnnotationMatrix, AnnotatorGraph, EmbeddingOptions,
    FlipMode, LaplacianPair, PipelineOptions, Selection, SymMatrix, SyntheticSpec,
};
use ndarray::{array, Array2};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        // NaN comparisons are false, so they fail here too
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(rng: &mut impl Rng, m: usize, n: usize, k: u32, missing: f64) -> AnnotationMatrix {
    let mut rows = vec![vec![0u32; n]; m];
    for j in 0..n {
        for row in rows.iter_mut() {
            if !rng.random_bool(missing) {
                row[j] = rng.random_range(1..=k);
            }
        }
        // keep every column rated at least once
        if rows.iter().all(|r| r[j] == 0) {
            let i = rng.random_range(0..m);
            rows[i][j] = rng.random_range(1..=k);
        }
    }
    AnnotationMatrix::from_rows(&rows, k).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Flips `b` onto `a`'s orientation before comparing.
fn signed_diff(a: &[f64], b: &[f64]) -> f64 {
    let s = if dot(a, b) < 0.0 { -1.0 } else { 1.0 };
    let flipped: Vec<f64> = b.iter().map(|v| s * v).collect();
    max_abs_diff(a, &flipped)
}

fn toy() -> AnnotationMatrix {
    AnnotationMatrix::from_rows(&[vec![1, 1, 2], vec![1, 2, 2]], 3).unwrap()
}

// 1. Toy oracle.
fn toy_oracle() -> Outcome {
    let matrix = toy();
    let pair = laplacian_pair(&matrix).map_err(|e| e.to_string())?;
    let x = matrix.to_f64();
    let l_expected = array![[0.5, -0.5, 0.0], [-0.5, 1.0, -0.5], [0.0, -0.5, 0.5]];
    let m = sandwich(pair.laplacian(), x.view()).unwrap();
    let b = sandwich(pair.degree_matrix().view(), x.view()).unwrap();
    let l_err = (&pair.laplacian() - &l_expected)
        .mapv(f64::abs)
        .fold(0.0, |a: f64, &v| a.max(v));
    let m_err = (&m.view() - &array![[0.5, 0.0], [0.0, 0.5]])
        .mapv(f64::abs)
        .fold(0.0, |a: f64, &v| a.max(v));
    let b_err = (&b.view() - &array![[3.5, 4.5], [4.5, 6.5]])
        .mapv(f64::abs)
        .fold(0.0, |a: f64, &v| a.max(v));
    ensure!(
        l_err < 1e-15 && m_err < 1e-15 && b_err < 1e-15,
        "L/M/B off by {l_err:e}/{m_err:e}/{b_err:e}"
    );

    // Closed-form 2x2 generalized eigensolve, computed from the hand matrices.
    let (m11, m12, m22) = (0.5_f64, 0.0_f64, 0.5_f64);
    let (b11, b12, b22) = (3.5_f64, 4.5_f64, 6.5_f64);
    let qa = b11 * b22 - b12 * b12;
    let qb = -(m11 * b22 + m22 * b11 - 2.0 * m12 * b12);
    let qc = m11 * m22 - m12 * m12;
    let lam = (-qb - (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
    let (a0, a1) = (-(m12 - lam * b12), m11 - lam * b11);
    let norm = (b11 * a0 * a0 + 2.0 * b12 * a0 * a1 + b22 * a1 * a1).sqrt();
    let a_oracle = [a0 / norm, a1 / norm];
    let y_oracle: Vec<f64> = (0..3)
        .map(|j| a_oracle[0] * x[[0, j]] + a_oracle[1] * x[[1, j]])
        .collect();

    let emb = solve_embedding(&matrix, &pair, &EmbeddingOptions::default()).map_err(|e| e.to_string())?;
    let y = project_direction(&matrix, &emb.direction).map_err(|e| e.to_string())?;
    ensure!(
        (emb.eigenvalue - 0.051317).abs() <= 1e-5,
        "λ = {} vs 0.051317",
        emb.eigenvalue
    );
    ensure!(
        (emb.eigenvalue - lam).abs() <= 1e-12,
        "λ = {} vs oracle {lam}",
        emb.eigenvalue
    );
    let y_err = signed_diff(&y_oracle, &y);
    ensure!(y_err <= 1e-4, "y = {y:?} vs oracle {y_oracle:?}");

    let printed = [0.44727, 0.70718, 0.89454];
    let printed_err = signed_diff(&printed, &y);
    Ok(format!(
        "λ = {:.7}, y = ({:.6}, {:.6}, {:.6}), |y - oracle| = {y_err:.1e}; printed reference triple differs by {printed_err:.2e}",
        emb.eigenvalue,
        y[0].abs(),
        y[1].abs(),
        y[2].abs()
    ))
}

fn random_pd(rng: &mut impl Rng, n: usize, rank: usize, shift: f64) -> SymMatrix {
    let g = Array2::from_shape_fn((n, rank), |_| rng.sample::<f64, _>(StandardNormal));
    let mut s = g.dot(&g.t());
    for i in 0..n {
        s[[i, i]] += shift;
    }
    SymMatrix::new(s).unwrap()
}

// 2. Solver certificates.
fn solver_certificates() -> Outcome {
    let mut rng = rng(2);
    let mut worst_res = 0.0_f64;
    let mut worst_con = 0.0_f64;
    let mut worst_gap = 0.0_f64;
    for case in 0..100 {
        let n = 2 + case % 19;
        let rank = rng.random_range(1..=n);
        let m = random_pd(&mut rng, n, rank, 0.0);
        let b = random_pd(&mut rng, n, n, 0.1);
        let pairs = generalized_eigen(&m, &b).map_err(|e| format!("case {case}: {e}"))?;
        let scale = m.frobenius_norm() + b.frobenius_norm();
        for p in &pairs {
            let ma = m.mul_vec(p.vector.view());
            let ba = b.mul_vec(p.vector.view());
            let res = (&ma - &(&ba * p.value)).mapv(|v| v * v).sum().sqrt();
            let a_norm = p.vector.dot(&p.vector).sqrt();
            let rel = res / (scale * a_norm);
            worst_res = worst_res.max(rel);
            ensure!(rel <= 1e-8, "case {case} (n = {n}): residual ratio {rel:e}");
            let con = (b.quad_form(p.vector.view()) - 1.0).abs();
            worst_con = worst_con.max(con);
            ensure!(con <= 1e-8, "case {case}: |aᵀBa − 1| = {con:e}");
        }
        let lam_min = pairs[0].value;
        let (mv, bv) = (m.view(), b.view());
        let mut v = vec![0.0; n];
        for _ in 0..10_000 {
            for x in v.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let (mut vmv, mut vbv) = (0.0, 0.0);
            for i in 0..n {
                let (mut mi, mut bi) = (0.0, 0.0);
                for j in 0..n {
                    mi += mv[[i, j]] * v[j];
                    bi += bv[[i, j]] * v[j];
                }
                vmv += v[i] * mi;
                vbv += v[i] * bi;
            }
            // Rayleigh quotient of the B-normalized probe
            let rq = vmv / vbv;
            let gap = lam_min - rq;
            worst_gap = worst_gap.max(gap);
            ensure!(
                gap <= 1e-10 * scale,
                "case {case}: probe quotient {rq} below λ_min {lam_min}"
            );
        }
    }
    Ok(format!(
        "worst residual ratio {worst_res:.1e}, worst |aᵀBa − 1| {worst_con:.1e}, 1,000,000 probes, worst probe undercut {:.1e}",
        worst_gap.max(0.0)
    ))
}

/// Edge sum over unordered pairs of each annotator's equality graph, averaged over annotators.
fn edge_sum(matrix: &AnnotationMatrix, y: &[f64]) -> f64 {
    let r = matrix.ratings();
    let mut total = 0.0;
    for i in 0..matrix.n_annotators() {
        for p in 0..y.len() {
            for q in (p + 1)..y.len() {
                if r[[i, p]] != 0 && r[[i, p]] == r[[i, q]] {
                    total += (y[p] - y[q]).powi(2);
                }
            }
        }
    }
    total / matrix.n_annotators() as f64
}

// 3. Objective equivalence.
fn objective_equivalence() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0_f64;
    let mut solved = 0;
    for case in 0..50 {
        let m = rng.random_range(1..=10);
        let n = rng.random_range(2..=100);
        let matrix = random_matrix(&mut rng, m, n, 7, 0.2);
        let pair = laplacian_pair(&matrix).map_err(|e| e.to_string())?;
        let x = matrix.to_f64();
        let mut directions = vec![(0..m).map(|_| rng.sample(StandardNormal)).collect::<Vec<f64>>()];
        if let Ok(emb) = solve_embedding(&matrix, &pair, &EmbeddingOptions::default()) {
            directions.push(emb.direction);
            solved += 1;
        }
        let m_mat = sandwich(pair.laplacian(), x.view()).unwrap();
        for a in &directions {
            let quad = m_mat.quad_form(ndarray::ArrayView1::from(a.as_slice()));
            let y = project_direction(&matrix, a).unwrap();
            let direct = edge_sum(&matrix, &y);
            // Relative to yᵀD_avg·y, which bounds both sides up to a factor of two and
            // stays meaningful when the objective itself is rounding noise.
            let y_d_y: f64 = y.iter().zip(pair.avg_degree()).map(|(v, d)| d * v * v).sum();
            let denom = direct.max(y_d_y);
            let rel = if quad == direct {
                0.0
            } else {
                (quad - direct).abs() / denom
            };
            worst = worst.max(rel);
            ensure!(rel <= 1e-8, "case {case} ({m}x{n}): aᵀMa = {quad}, edge sum = {direct}");
        }
    }
    Ok(format!(
        "50 matrices ({solved} with solved directions), worst relative gap {worst:.1e}"
    ))
}

// 4. Graph laws.
fn graph_laws() -> Outcome {
    let mut rng = rng(4);
    for row_no in 0..1000 {
        let n = rng.random_range(1..=40);
        let k = rng.random_range(2..=9u32);
        let row: Vec<u32> = (0..n).map(|_| rng.random_range(0..=k)).collect();
        let g = AnnotatorGraph::from_ratings(&row, 0);
        let adj = g.adjacency();
        for i in 0..n {
            for j in 0..n {
                let expected = u8::from(i != j && row[i] != 0 && row[i] == row[j]);
                ensure!(
                    adj[[i, j]] == expected,
                    "row {row_no}: A[{i},{j}] = {} for {row:?}",
                    adj[[i, j]]
                );
            }
            if row[i] == 0 {
                ensure!(
                    g.degree(i) == 0,
                    "row {row_no}: missing vertex {i} has degree {}",
                    g.degree(i)
                );
            } else {
                let clique = row.iter().filter(|&&v| v == row[i]).count();
                ensure!(
                    g.degree(i) == clique - 1,
                    "row {row_no}: vertex {i} not in a full clique"
                );
            }
        }
        for _ in 0..100 {
            let mut targets: Vec<u32> = (1..=60).collect();
            targets.shuffle(&mut rng);
            let relabeled: Vec<u32> = row
                .iter()
                .map(|&v| if v == 0 { 0 } else { targets[v as usize - 1] })
                .collect();
            let h = AnnotatorGraph::from_ratings(&relabeled, 0);
            ensure!(h.adjacency() == adj, "row {row_no}: relabeling changed the graph");
        }
    }
    Ok("1000 rows, 100,000 relabelings".into())
}

fn laplacian_corpus() -> Vec<(String, AnnotationMatrix)> {
    let mut corpus = vec![
        ("toy-3".to_string(), toy()),
        (
            "all-distinct".to_string(),
            AnnotationMatrix::from_rows(&[vec![1, 2, 3, 4, 5]], 5).unwrap(),
        ),
        (
            "single-equal".to_string(),
            AnnotationMatrix::from_rows(&[vec![3, 3, 3, 3]], 5).unwrap(),
        ),
    ];
    let mut rng = rng(5);
    for c in 0..50 {
        let (m, n) = (rng.random_range(1..=10), rng.random_range(2..=100));
        corpus.push((format!("random-{c}"), random_matrix(&mut rng, m, n, 7, 0.2)));
    }
    for c in 0..20 {
        corpus.push((format!("full-4x138-{c}"), random_matrix(&mut rng, 4, 138, 7, 0.0)));
    }
    for seed in 0..20 {
        let spec = SyntheticSpec {
            n_annotators: 15,
            n_datapoints: 51,
            missing_prob: 0.1,
            noise_sd: 0.7,
            seed,
            ..SyntheticSpec::default()
        };
        corpus.push((
            format!("synthetic-{seed}"),
            likert_lpp::generate_synthetic(&spec).unwrap().matrix,
        ));
    }
    corpus
}

fn laplacian_certificate(pair: &LaplacianPair) -> Result<(f64, f64), String> {
    let l = pair.laplacian();
    let n = pair.n_nodes();
    let mut worst_row = 0.0_f64;
    let mut gersh = f64::INFINITY;
    for i in 0..n {
        let row = l.row(i);
        worst_row = worst_row.max(row.sum().abs());
        let off: f64 = row
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.abs())
            .sum();
        gersh = gersh.min(l[[i, i]] - off);
    }
    let eig = jacobi_eigen(&SymMatrix::new(l.to_owned()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let min_eig = eig[0].value.min(gersh.min(0.0));
    Ok((worst_row, min_eig))
}

// 5. Laplacian PSD and zero row sums.
fn laplacian_laws() -> Outcome {
    let corpus = laplacian_corpus();
    let (mut worst_row, mut worst_eig) = (0.0_f64, 0.0_f64);
    for (name, matrix) in &corpus {
        let pair = laplacian_pair(matrix).map_err(|e| format!("{name}: {e}"))?;
        let (row, eig) = laplacian_certificate(&pair).map_err(|e| format!("{name}: {e}"))?;
        worst_row = worst_row.max(row);
        worst_eig = worst_eig.min(eig);
        ensure!(row <= 1e-12, "{name}: row sum {row:e}");
        ensure!(eig >= -1e-12, "{name}: eigenvalue {eig:e}");
    }
    Ok(format!(
        "{} pairs, worst |row sum| {worst_row:.1e}, smallest eigenvalue {worst_eig:.1e}",
        corpus.len()
    ))
}

// 6. Discrimination bound.
fn discrimination_bound() -> Outcome {
    let mut rng = rng(6);
    let (mut max_mean, mut min_den, mut max_den, mut sum_den) = (0, usize::MAX, 0, 0);
    for case in 0..100 {
        let matrix = random_matrix(&mut rng, 4, 138, 7, 0.0);
        let means = mean_baseline(&matrix).map_err(|e| e.to_string())?.means;
        let mut seen: Vec<u64> = means.iter().map(|m| m.to_bits()).collect();
        seen.sort_unstable();
        seen.dedup();
        let distinct = seen.len();
        ensure!(distinct <= 25, "case {case}: {distinct} distinct means");
        max_mean = max_mean.max(distinct);
        let den = denoise_pipeline(&matrix, &PipelineOptions::default()).map_err(|e| format!("case {case}: {e}"))?;
        let d = discrimination(&den.presentation_scores, DENOISED_TIE_TOL).distinct_count;
        min_den = min_den.min(d);
        max_den = max_den.max(d);
        sum_den += d;
    }
    Ok(format!(
        "max distinct means {max_mean} (bound 25); denoised distinct counts min {min_den}, mean {:.1}, max {max_den}",
        sum_den as f64 / 100.0
    ))
}

// 7. Symmetry suite.
fn symmetry_suite() -> Outcome {
    let mut rng = rng(7);
    let opts = PipelineOptions::default();
    let (mut worst_col, mut worst_row) = (0.0_f64, 0.0_f64);
    for case in 0..50 {
        // Enough datapoints that X D Xᵀ is nonsingular, so the selected
        // eigenpair is unique and the comparison is well posed.
        let m = rng.random_range(2..=8);
        let n = rng.random_range(4 * m..=60);
        let matrix = random_matrix(&mut rng, m, n, 7, 0.1);
        let base = denoise_pipeline(&matrix, &opts)
            .map_err(|e| format!("case {case}: {e}"))?
            .raw_scores;

        let mut cols: Vec<usize> = (0..n).collect();
        cols.shuffle(&mut rng);
        let permuted = matrix.select_datapoints(&cols).unwrap();
        let y = denoise_pipeline(&permuted, &opts)
            .map_err(|e| e.to_string())?
            .raw_scores;
        let expected: Vec<f64> = cols.iter().map(|&j| base[j]).collect();
        let d = signed_diff(&expected, &y);
        worst_col = worst_col.max(d);
        ensure!(d <= 1e-9, "case {case}: column permutation moved scores by {d:e}");

        let mut rows: Vec<usize> = (0..m).collect();
        rows.shuffle(&mut rng);
        let permuted = matrix.select_annotators(&rows).unwrap();
        let y = denoise_pipeline(&permuted, &opts)
            .map_err(|e| e.to_string())?
            .raw_scores;
        let d = signed_diff(&base, &y);
        worst_row = worst_row.max(d);
        ensure!(d <= 1e-9, "case {case}: row permutation moved scores by {d:e}");

        let mut with_dups: Vec<usize> = (0..n).collect();
        let dups: Vec<usize> = (0..3).map(|_| rng.random_range(0..n)).collect();
        with_dups.extend(&dups);
        let y = denoise_pipeline(&matrix.select_datapoints(&with_dups).unwrap(), &opts)
            .map_err(|e| e.to_string())?
            .raw_scores;
        for (k, &j) in dups.iter().enumerate() {
            ensure!(
                y[n + k] == y[j],
                "case {case}: duplicate of column {j} scored {} vs {}",
                y[n + k],
                y[j]
            );
        }
    }
    Ok(format!(
        "50 matrices, worst column-permutation diff {worst_col:.1e}, row-permutation diff {worst_row:.1e}, duplicates exact"
    ))
}

// 8. Synthetic recovery.
fn synthetic_recovery() -> Outcome {
    let opts = PipelineOptions {
        embedding: EmbeddingOptions {
            selection: Selection::SkipTrivial,
            ..EmbeddingOptions::default()
        },
        ..PipelineOptions::default()
    };
    let mut worst = f64::INFINITY;
    for seed in 0..20 {
        let spec = SyntheticSpec {
            n_annotators: 15,
            n_datapoints: 51,
            scale_max: 7,
            bias: vec![0.0],
            spread: vec![1.0],
            noise_sd: 0.0,
            missing_prob: 0.0,
            seed,
        };
        let synth = likert_lpp::generate_synthetic(&spec).map_err(|e| e.to_string())?;
        let den = denoise_pipeline(&synth.matrix, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        let rho = spearman(&den.presentation_scores, &synth.truth).map_err(|e| e.to_string())?;
        worst = worst.min(rho);
        ensure!(rho >= 0.95, "seed {seed}: Spearman vs truth {rho}");
    }
    Ok(format!("20 seeds, worst Spearman vs truth {worst:.4}"))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_likert-lpp"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.code() == Some(0),
        "`likert-lpp {}` exited {:?}: {}",
        args.join(" "),
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn cli_chain(dir: &Path) -> Result<(), String> {
    let s = |p: &str| dir.join(p).display().to_string();
    run_cli(&[
        "simulate",
        "--annotators",
        "4",
        "--datapoints",
        "138",
        "--scale-max",
        "7",
        "--bias=0,0.5,-0.5,1",
        "--spread",
        "1,0.8,1.2,1",
        "--noise-sd",
        "0.8",
        "--missing-prob",
        "0.05",
        "--seed",
        "42",
        "--out",
        &s("sim"),
    ])?;
    let matrix = s("sim/matrix.csv");
    run_cli(&[
        "denoise",
        "--input",
        &matrix,
        "--scale-max",
        "7",
        "--format",
        "csv,json,svg",
        "--out",
        &s("den"),
    ])?;
    run_cli(&[
        "evaluate",
        "--input",
        &matrix,
        "--scale-max",
        "7",
        "--truth",
        &s("sim/truth.csv"),
        "--format",
        "json,svg",
        "--out",
        &s("eval"),
    ])
}

fn list_files(dir: &Path) -> Vec<String> {
    let mut out = Vec::new();
    for sub in ["sim", "den", "eval"] {
        for entry in std::fs::read_dir(dir.join(sub)).unwrap() {
            out.push(format!("{sub}/{}", entry.unwrap().file_name().to_string_lossy()));
        }
    }
    out.sort();
    out
}

// 9. CLI round trip.
fn cli_round_trip() -> Outcome {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    cli_chain(first.path())?;
    cli_chain(second.path())?;

    let files = list_files(first.path());
    ensure!(files == list_files(second.path()), "runs produced different file sets");
    for f in &files {
        let a = std::fs::read(first.path().join(f)).unwrap();
        let b = std::fs::read(second.path().join(f)).unwrap();
        ensure!(a == b, "{f} differs between runs");
    }

    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(first.path().join("den/report.json")).unwrap()).unwrap();
    let flipped = report["flipped"].as_bool().ok_or("report.json lacks `flipped`")?;
    let k = report["scale_max"].as_u64().ok_or("report.json lacks `scale_max`")? as u32;
    let mut reader = csv::Reader::from_path(first.path().join("den/scores.csv")).map_err(|e| e.to_string())?;
    let (mut means, mut raw, mut shown) = (Vec::new(), Vec::new(), Vec::new());
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |i: usize| rec[i].parse::<f64>().map_err(|e| e.to_string());
        means.push(num(1)?);
        raw.push(num(3)?);
        shown.push(num(4)?);
    }
    ensure!(raw.len() == 138, "scores.csv has {} rows", raw.len());
    let mode = if flipped { FlipMode::On } else { FlipMode::Off };
    let again = postprocess(&raw, k, mode, &means);
    let err = max_abs_diff(&again.presentation_scores, &shown);
    ensure!(err <= 1e-9, "postprocess round trip off by {err:e}");
    Ok(format!(
        "{} artifacts byte-identical across runs, postprocess round trip within {err:.1e}",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 toy-3 oracle", toy_oracle, Duration::from_secs(1)),
        ("2 solver certificates", solver_certificates, Duration::from_secs(10)),
        ("3 objective equivalence", objective_equivalence, Duration::MAX),
        ("4 graph laws", graph_laws, Duration::MAX),
        ("5 Laplacian PSD / zero row sum", laplacian_laws, Duration::MAX),
        ("6 discrimination bound", discrimination_bound, Duration::MAX),
        ("7 symmetry suite", symmetry_suite, Duration::MAX),
        ("8 synthetic recovery", synthetic_recovery, Duration::from_secs(30)),
        ("9 CLI round trip", cli_round_trip, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {}", p.downcast_ref::<String>().map_or("?", |s| s))));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:.0?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{name}] ({elapsed:.2?}) {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] ({elapsed:.2?}) {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
