//! Command-line front end: `denoise`, `graph`, `simulate` and `evaluate`.

pub mod error;
pub mod output;
pub mod svg;

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use likert_lpp::{
    denoise_pipeline, evaluate, generate_synthetic, graph_stats, laplacian_pair, AnnotationMatrix, DenoisedResult,
    Embedding, EmbeddingOptions, FlipMode, PipelineOptions, Ridge, Selection, SyntheticSpec,
};
use serde::Serialize;

pub use error::CliError;
use output::{fmt_f64, matrix_csv, to_json, Artifacts};
use svg::{Mark, Series, BLUE, RED};

#[derive(Debug, Parser)]
#[command(
    name = "likert-lpp",
    version,
    about = "Summarize multi-annotator Likert ratings with a graph embedding"
)]
pub struct Cli {
    /// Print errors as a JSON object on stderr
    #[arg(long, global = true)]
    pub error_json: bool,
    /// More log output on stderr (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed the datapoints and write scores, a provenance report and plots
    Denoise(DenoiseArgs),
    /// Write the averaged adjacency, degree and Laplacian matrices with graph statistics
    Graph(GraphArgs),
    /// Generate a synthetic annotation matrix with known ground truth
    Simulate(SimulateArgs),
    /// Compare the embedding against the mean baseline (and ground truth, if given)
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Annotation matrix CSV (rows = annotators, columns = datapoints, 0 = missing)
    #[arg(long)]
    pub input: PathBuf,
    /// Maximum Likert value K (ratings are 1..=K)
    #[arg(long)]
    pub scale_max: u32,
    /// Read the CSV as datapoints x annotators
    #[arg(long)]
    pub transpose: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Score orientation: auto aligns with the mean ratings
    #[arg(long, default_value = "auto", value_parser = parse_flip)]
    pub flip: FlipMode,
    /// Eigenpair rule: `paper` takes the smallest eigenvalue, `skip-trivial` skips constant projections
    #[arg(long, default_value = "paper", value_parser = parse_selection)]
    pub selection: Selection,
    /// Ridge on a singular constraint matrix: auto (1e-10*trace/m), a number, or off
    #[arg(long, default_value = "auto", value_parser = parse_ridge)]
    pub ridge: Ridge,
}

impl SolveArgs {
    pub fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            embedding: EmbeddingOptions {
                selection: self.selection,
                ridge: self.ridge,
            },
            flip: self.flip,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DenoiseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Artifacts to write
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json")]
    pub format: Vec<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 4)]
    pub annotators: usize,
    #[arg(long, default_value_t = 138)]
    pub datapoints: usize,
    #[arg(long, default_value_t = 7)]
    pub scale_max: u32,
    /// Per-annotator offsets, comma separated (one value applies to all)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0")]
    pub bias: Vec<f64>,
    /// Per-annotator range multipliers, comma separated (one value applies to all)
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub spread: Vec<f64>,
    /// Standard deviation of the Gaussian rating noise
    #[arg(long, default_value_t = 0.0)]
    pub noise_sd: f64,
    /// Probability that a rating is dropped (written as 0)
    #[arg(long, default_value_t = 0.0)]
    pub missing_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

impl SimulateArgs {
    pub fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            n_annotators: self.annotators,
            n_datapoints: self.datapoints,
            scale_max: self.scale_max,
            bias: self.bias.clone(),
            spread: self.spread.clone(),
            noise_sd: self.noise_sd,
            missing_prob: self.missing_prob,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Ground-truth CSV, one value per datapoint in column order (last column is used)
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json")]
    pub format: Vec<Format>,
}

fn parse_flip(s: &str) -> Result<FlipMode, String> {
    s.parse().map_err(|e: likert_lpp::ParseOptionError| e.to_string())
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    s.parse().map_err(|e: likert_lpp::ParseOptionError| e.to_string())
}

fn parse_ridge(s: &str) -> Result<Ridge, String> {
    s.parse().map_err(|e: likert_lpp::ParseOptionError| e.to_string())
}

pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    match &cli.command {
        Command::Denoise(a) => cmd_denoise(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Evaluate(a) => cmd_evaluate(a),
    }
}

pub fn load_input(args: &InputArgs) -> Result<AnnotationMatrix, CliError> {
    let file = File::open(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    AnnotationMatrix::load_csv(BufReader::new(file), args.scale_max, args.transpose).map_err(|e| match e {
        likert_lpp::DataError::Io(source) => CliError::io(&args.input, source),
        other => CliError::Validation(format!("{}: {other}", args.input.display())),
    })
}

#[derive(Serialize)]
struct DenoiseReport<'a> {
    n_annotators: usize,
    n_datapoints: usize,
    scale_max: u32,
    selection: String,
    ridge: String,
    flip_mode: String,
    flipped: bool,
    embedding: &'a Embedding,
}

/// Header of the scores file.
pub const SCORES_HEADER: &str = "datapoint_id,mean,count,raw_score,presentation_score,rank";

pub fn scores_csv(matrix: &AnnotationMatrix, r: &DenoisedResult) -> String {
    let mut out = String::from(SCORES_HEADER);
    out.push('\n');
    for j in 0..matrix.n_datapoints() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            matrix.datapoint_ids()[j],
            fmt_f64(r.baseline.means[j]),
            r.baseline.counts[j],
            fmt_f64(r.raw_scores[j]),
            fmt_f64(r.presentation_scores[j]),
            r.ranks[j]
        );
    }
    out
}

fn order_by(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

pub fn cmd_denoise(args: &DenoiseArgs) -> Result<Vec<PathBuf>, CliError> {
    let matrix = load_input(&args.input)?;
    let opts = args.solve.pipeline_options();
    let result = denoise_pipeline(&matrix, &opts)?;
    log::info!(
        "λ = {}, constraint residual = {:e}, ridge ε = {}, flipped = {}",
        result.embedding.eigenvalue,
        result.embedding.constraint_residual,
        result.embedding.selection.ridge_epsilon,
        result.flipped
    );

    let mut files = Artifacts::default();
    if args.format.contains(&Format::Csv) {
        files.add("scores.csv", scores_csv(&matrix, &result));
    }
    if args.format.contains(&Format::Json) {
        let report = DenoiseReport {
            n_annotators: matrix.n_annotators(),
            n_datapoints: matrix.n_datapoints(),
            scale_max: matrix.scale_max(),
            selection: opts.embedding.selection.to_string(),
            ridge: opts.embedding.ridge.to_string(),
            flip_mode: opts.flip.to_string(),
            flipped: result.flipped,
            embedding: &result.embedding,
        };
        files.add("report.json", to_json(&report));
    }
    if args.format.contains(&Format::Svg) {
        let series = [
            Series {
                name: "mean rating",
                color: BLUE,
                mark: Mark::Line,
                values: &result.baseline.means,
            },
            Series {
                name: "denoised",
                color: RED,
                mark: Mark::Dots,
                values: &result.presentation_scores,
            },
        ];
        let identity: Vec<usize> = (0..matrix.n_datapoints()).collect();
        files.add(
            "matrix.svg",
            svg::panel("Annotation matrix and scores", &matrix, &identity, &series),
        );
        let by_mean = order_by(&result.baseline.means);
        files.add(
            "sorted_by_mean.svg",
            svg::panel("Sorted by mean rating", &matrix, &by_mean, &series),
        );
        let by_denoised = order_by(&result.presentation_scores);
        let series_denoised = [
            Series {
                mark: Mark::Dots,
                ..series[0]
            },
            Series {
                mark: Mark::Line,
                ..series[1]
            },
        ];
        files.add(
            "sorted_by_denoised.svg",
            svg::panel("Sorted by denoised score", &matrix, &by_denoised, &series_denoised),
        );
    }
    files.write_all(&args.out)
}

pub fn cmd_graph(args: &GraphArgs) -> Result<Vec<PathBuf>, CliError> {
    let matrix = load_input(&args.input)?;
    let pair = laplacian_pair(&matrix)?;
    let mut files = Artifacts::default();
    if args.format.contains(&Format::Csv) {
        files.add("avg_adjacency.csv", matrix_csv(pair.avg_adjacency()));
        files.add("avg_degree.csv", matrix_csv(pair.degree_matrix().view()));
        files.add("laplacian.csv", matrix_csv(pair.laplacian()));
    }
    if args.format.contains(&Format::Json) {
        files.add("graph_stats.json", to_json(&graph_stats(&pair)));
    }
    files.write_all(&args.out)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Vec<PathBuf>, CliError> {
    let spec = args.spec();
    let synth = generate_synthetic(&spec)?;
    let mut matrix_buf = Vec::new();
    synth
        .matrix
        .write_csv(&mut matrix_buf, true)
        .expect("writing to memory does not fail");
    let mut truth = String::from("datapoint_id,truth\n");
    for (id, t) in synth.matrix.datapoint_ids().iter().zip(&synth.truth) {
        let _ = writeln!(truth, "{id},{}", fmt_f64(*t));
    }
    let spec_json = to_json(&spec);
    print!("{spec_json}");

    let mut files = Artifacts::default();
    files.add("matrix.csv", matrix_buf);
    files.add("truth.csv", truth);
    files.add("spec.json", spec_json);
    files.write_all(&args.out)
}

/// Reads one value per row from the last column; a non-numeric first row is a header.
pub fn load_truth(path: &Path) -> Result<Vec<f64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let mut values = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let cell = rec.iter().next_back().unwrap_or("");
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ if k == 0 => continue,
            _ => {
                return Err(CliError::Validation(format!(
                    "{}: row {}: `{cell}` is not a number",
                    path.display(),
                    k + 1
                )))
            }
        }
    }
    Ok(values)
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<Vec<PathBuf>, CliError> {
    let matrix = load_input(&args.input)?;
    let truth = match &args.truth {
        Some(p) => {
            let t = load_truth(p)?;
            if t.len() != matrix.n_datapoints() {
                return Err(CliError::Validation(format!(
                    "truth has {} values, matrix has {} datapoints",
                    t.len(),
                    matrix.n_datapoints()
                )));
            }
            Some(t)
        }
        None => None,
    };
    let result = denoise_pipeline(&matrix, &args.solve.pipeline_options())?;
    let report = evaluate(&matrix, &result, truth.as_deref())?;
    log::info!(
        "spearman(mean, denoised) = {}, distinct values mean/denoised = {}/{}",
        report.spearman_mean_vs_denoised,
        report.distinct_values.mean,
        report.distinct_values.denoised
    );

    let mut files = Artifacts::default();
    if args.format.contains(&Format::Json) {
        files.add("comparison.json", to_json(&report));
    }
    if args.format.contains(&Format::Svg) {
        let series = [
            Series {
                name: "mean rating (sorted)",
                color: BLUE,
                mark: Mark::Line,
                values: &result.baseline.means,
            },
            Series {
                name: "denoised (sorted)",
                color: RED,
                mark: Mark::Line,
                values: &result.presentation_scores,
            },
        ];
        files.add("comparison.svg", svg::sorted_curves("Sorted scores", &series));
    }
    if args.format.contains(&Format::Csv) {
        files.add("scores.csv", scores_csv(&matrix, &result));
    }
    files.write_all(&args.out)
}
