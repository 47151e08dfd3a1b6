//! Command-line surface for the apple grading pipeline.
//!
//! Subcommands: `grade` (single images or small batches), `search-weights`
//! (grayscale weight grid sweep), `synth` (labeled synthetic batches), and
//! `evaluate` (batch evaluation against the valley-threshold reference).
//!
//! Every command is deterministic given its arguments; floating-point
//! values in reports are serialized with six decimals so repeated runs are
//! byte-identical. Exit codes: 0 success, 1 runtime error, 2 usage or I/O
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use applevision::error::io_err;
use applevision::io::{load_image, save_mask, save_rgb};
use applevision::report::{render_json, write_json_file, write_text_file};
use applevision::{
    centroid_of_weights, enumerate_weight_grid, evaluate_batch, generate_batch, grade_image,
    production_weights, resize_bilinear, search_results_to_csv, search_weight_grid,
    valley_oracle_nda, Error, EvalRecord, GradeLabel, ModalityParams, PipelineConfig, Result,
    RgbImage, WeightPair, DEFAULT_PEAK_PROMINENCE, DEFAULT_SMOOTHING_WINDOW, DEFAULT_TAU,
};

#[derive(Parser)]
#[command(
    name = "applevision",
    version,
    about = "Grades apples by surface browning from true-color images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Pipeline options shared by the grading-style subcommands.
#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    /// Grayscale transform weights as "A,B" (red, green)
    #[arg(long, value_parser = parse_weights, default_value = "0.7641,0.7436")]
    weights: (f64, f64),

    /// Gaussian low-pass standard deviation
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,

    /// NDA threshold separating healthy from defective
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,

    /// Histogram smoothing window in bins (odd)
    #[arg(long, default_value_t = DEFAULT_SMOOTHING_WINDOW)]
    smoothing_window: usize,

    /// Histogram peak prominence as a fraction of the tallest peak
    #[arg(long, default_value_t = DEFAULT_PEAK_PROMINENCE)]
    prominence: f64,

    /// Fixed gray-level threshold bypassing the automatic search
    #[arg(long)]
    manual_threshold: Option<u8>,

    /// Processing resolution as "WIDTHxHEIGHT"; default downsamples
    /// 1600x1200 captures to 1000x750 and leaves other sizes unchanged
    #[arg(long, value_parser = parse_size)]
    resize_to: Option<(u32, u32)>,
}

impl PipelineArgs {
    fn to_config(&self) -> PipelineConfig {
        PipelineConfig {
            weights: WeightPair::new(self.weights.0, self.weights.1),
            sigma: self.sigma,
            tau: self.tau,
            resize_to: self.resize_to,
            modality: ModalityParams {
                smoothing_window: self.smoothing_window,
                prominence: self.prominence,
            },
            manual_threshold: self.manual_threshold,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Grade apple images and write per-image reports and defect masks
    Grade {
        /// Input image paths (PNG, PPM, or PGM)
        #[arg(required = true)]
        images: Vec<PathBuf>,

        /// Output directory for reports and masks
        #[arg(long)]
        out: PathBuf,

        #[command(flatten)]
        pipeline: PipelineArgs,
    },

    /// Sweep the grayscale weight grid on one image and report bimodality
    SearchWeights {
        /// Input image path
        image: PathBuf,

        /// Grid step for both weights
        #[arg(long, default_value_t = 0.1)]
        step: f64,

        /// Output directory for the grid CSV and centroid report
        #[arg(long)]
        out: PathBuf,

        #[command(flatten)]
        pipeline: PipelineArgs,
    },

    /// Generate a labeled synthetic apple batch with ground-truth masks
    Synth {
        /// Number of apples with browning defects
        #[arg(long, default_value_t = 30)]
        defective: usize,

        /// Number of sound apples (calyx and stem only)
        #[arg(long, default_value_t = 30)]
        sound: usize,

        /// Master seed for the batch
        #[arg(long, default_value_t = 7)]
        seed: u64,

        /// Output directory for images, masks, and the manifest
        #[arg(long)]
        out: PathBuf,
    },

    /// Evaluate a labeled batch against the valley-threshold reference
    Evaluate {
        /// Manifest CSV (image_id,label,defect_fraction,seed); images are
        /// resolved as <image_id>.png next to the manifest
        manifest: PathBuf,

        /// Output directory for the evaluation report
        #[arg(long)]
        out: PathBuf,

        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

fn parse_weights(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"A,B\", got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad weight {v:?}: {e}"))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a < 0.0 || b < 0.0 {
        return Err("weights must be non-negative".into());
    }
    Ok((a, b))
}

fn parse_size(s: &str) -> std::result::Result<(u32, u32), String> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| format!("expected \"WIDTHxHEIGHT\", got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad dimension {v:?}: {e}"))
    };
    let (w, h) = (parse(w)?, parse(h)?);
    if w == 0 || h == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok((w, h))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Grade {
            images,
            out,
            pipeline,
        } => cmd_grade(&images, &out, &pipeline.to_config()),
        Command::SearchWeights {
            image,
            step,
            out,
            pipeline,
        } => cmd_search_weights(&image, step, &out, &pipeline.to_config()),
        Command::Synth {
            defective,
            sound,
            seed,
            out,
        } => cmd_synth(defective, sound, seed, &out),
        Command::Evaluate {
            manifest,
            out,
            pipeline,
        } => cmd_evaluate(&manifest, &out, &pipeline.to_config()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::MissingFile(_) | Error::Io { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

fn cmd_grade(images: &[PathBuf], out: &Path, config: &PipelineConfig) -> Result<()> {
    ensure_dir(out)?;
    let mut records = Vec::with_capacity(images.len());
    for path in images {
        let image = load_image(path)?;
        let outcome = grade_image(&image, config)?;
        let stem = file_stem(path);
        save_mask(out.join(format!("{stem}_mask.png")), &outcome.mask)?;
        let record = json!({
            "image": path.file_name().map(|s| s.to_string_lossy().into_owned()),
            "width": outcome.processed_size.0,
            "height": outcome.processed_size.1,
            "is_bimodal": outcome.modality.is_bimodal,
            "peak_levels": outcome.modality.peak_levels,
            "threshold": outcome.threshold,
            "nda": outcome.nda,
            "label": outcome.label.as_str(),
        });
        write_json_file(&out.join(format!("{stem}_report.json")), &record)?;
        println!(
            "{}: nda {:.6} threshold {} -> {}",
            path.display(),
            outcome.nda,
            outcome.threshold,
            outcome.label
        );
        records.push(record);
    }
    let defective = records
        .iter()
        .filter(|r| r["label"] == "defective")
        .count();
    let summary = json!({
        "images": records.len(),
        "healthy": records.len() - defective,
        "defective": defective,
        "records": records,
    });
    write_json_file(&out.join("summary.json"), &summary)
}

fn resolve_working_image(image: RgbImage, config: &PipelineConfig) -> Result<RgbImage> {
    let target = config.resize_to.or({
        if (image.width, image.height) == (1600, 1200) {
            Some((1000, 750))
        } else {
            None
        }
    });
    match target {
        Some((w, h)) if (w, h) != (image.width, image.height) => resize_bilinear(&image, w, h),
        _ => Ok(image),
    }
}

fn cmd_search_weights(
    image: &Path,
    step: f64,
    out: &Path,
    config: &PipelineConfig,
) -> Result<()> {
    ensure_dir(out)?;
    let working = resolve_working_image(load_image(image)?, config)?;
    let grid = enumerate_weight_grid(step)?;
    let results = search_weight_grid(&working, &grid, &config.modality, config.sigma)?;
    write_text_file(&out.join("weight_search.csv"), &search_results_to_csv(&results))?;

    let bimodal: Vec<WeightPair> = results
        .iter()
        .filter(|r| r.is_bimodal)
        .map(|r| r.pair)
        .collect();
    let report = match centroid_of_weights(&bimodal) {
        Ok(c) => {
            println!(
                "{} of {} pairs bimodal; centroid ({:.4}, {:.4})",
                bimodal.len(),
                results.len(),
                c.a,
                c.b
            );
            json!({
                "pairs": results.len(),
                "bimodal_pairs": bimodal.len(),
                "centroid": { "a": c.a, "b": c.b },
            })
        }
        Err(e) => {
            eprintln!("warning: no centroid: {e}");
            json!({
                "pairs": results.len(),
                "bimodal_pairs": 0,
                "centroid": serde_json::Value::Null,
                "error": e.to_string(),
            })
        }
    };
    write_json_file(&out.join("centroid.json"), &report)
}

fn cmd_synth(n_defective: usize, n_sound: usize, seed: u64, out: &Path) -> Result<()> {
    ensure_dir(out)?;
    let batch = generate_batch(n_defective, n_sound, seed)?;
    let mut manifest = String::from("image_id,label,defect_fraction,seed\n");
    let (mut d_next, mut s_next) = (0usize, 0usize);
    for sample in &batch {
        let id = match sample.label {
            GradeLabel::Defective => {
                d_next += 1;
                format!("defective_{d_next:02}")
            }
            GradeLabel::Healthy => {
                s_next += 1;
                format!("sound_{s_next:02}")
            }
        };
        save_rgb(out.join(format!("{id}.png")), &sample.image)?;
        save_mask(out.join(format!("{id}_mask.png")), &sample.truth.defect_mask)?;
        manifest.push_str(&format!(
            "{id},{},{:.6},{}\n",
            sample.label.as_str(),
            sample.truth.defect_fraction,
            sample.spec.seed
        ));
    }
    write_text_file(&out.join("manifest.csv"), &manifest)?;
    println!(
        "wrote {} defective + {} sound apples to {}",
        n_defective,
        n_sound,
        out.display()
    );
    Ok(())
}

const MANIFEST_HEADER: &str = "image_id,label,defect_fraction,seed";

fn cmd_evaluate(manifest: &Path, out: &Path, config: &PipelineConfig) -> Result<()> {
    ensure_dir(out)?;
    let text = fs::read_to_string(manifest).map_err(|e| io_err(manifest, e))?;
    let dir = manifest.parent().unwrap_or_else(|| Path::new("."));

    // The valley oracle is the fixed verification baseline: it always reads
    // the production-weight grayscale, so sweeping --weights moves only the
    // method totals and the error measures the weights, not the oracle.
    let oracle_config = PipelineConfig {
        weights: production_weights(),
        ..config.clone()
    };

    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim_end() == MANIFEST_HEADER => {}
        other => {
            return Err(Error::CorruptData(format!(
                "manifest must start with \"{MANIFEST_HEADER}\", got {other:?}"
            )))
        }
    }

    let mut records: Vec<EvalRecord> = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::CorruptData(format!(
                "manifest row {} has {} fields, expected 4",
                idx + 2,
                fields.len()
            )));
        }
        let image_id = fields[0].trim().to_string();
        if image_id.is_empty() {
            return Err(Error::CorruptData(format!(
                "manifest row {} has an empty image_id",
                idx + 2
            )));
        }
        let true_label = GradeLabel::parse(fields[1].trim()).map_err(|e| {
            Error::CorruptData(format!("manifest row {}: {e}", idx + 2))
        })?;
        fields[2].trim().parse::<f64>().map_err(|e| {
            Error::CorruptData(format!("manifest row {}: bad fraction: {e}", idx + 2))
        })?;
        fields[3].trim().parse::<u64>().map_err(|e| {
            Error::CorruptData(format!("manifest row {}: bad seed: {e}", idx + 2))
        })?;

        let image = load_image(dir.join(format!("{image_id}.png")))?;
        let method_nda = grade_image(&image, config)?.nda;
        let oracle_nda = valley_oracle_nda(&image, &oracle_config)?;
        records.push(EvalRecord {
            image_id,
            method_nda,
            oracle_nda,
            true_label,
        });
    }

    let report = evaluate_batch(&records, config.tau)?;
    write_json_file(&out.join("evaluation.json"), &report.to_json_value())?;
    write_text_file(&out.join("evaluation.csv"), &report.rows_to_csv())?;
    println!("{}", render_json(&report.to_json_value()).trim_end());
    Ok(())
}
