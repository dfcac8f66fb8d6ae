use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use felix_core::filter::{self, io as fio, FilterConfig, StageFlags};
use felix_core::ingest::build_manifest;
use felix_core::pipeline::{self, rank_dissimilar, read_layer_reports, AlignOptions};
use felix_core::Error;

const WORKERS_ENV: &str = "FELIX_WORKERS";

#[derive(Parser)]
#[command(
    name = "felix",
    version,
    about = "Cat-vision filtering and cross-domain representational alignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Image,
    Sequence,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the cat-vision filter to an image, a directory of images, or a frame sequence.
    Filter {
        /// Input image file or directory.
        input: PathBuf,
        /// Output file (single image) or directory.
        #[arg(long)]
        out: PathBuf,
        /// JSON filter parameters; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "image")]
        mode: Mode,
        /// Frames per second for sequence mode.
        #[arg(long, default_value_t = 30.0)]
        frame_rate: f64,
    },
    /// Compute per-layer alignment metrics for every layer in a layer manifest.
    Align {
        /// Layer manifest CSV.
        layers: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        perms_mantel: usize,
        #[arg(long, default_value_t = 200)]
        perms_shift: usize,
        #[arg(long, default_value_t = 0.05)]
        fdr_q: f64,
        /// Keep only pairs whose seeded id hash is divisible by K.
        #[arg(long)]
        golden_subset_k: Option<u64>,
        /// Include per-pair arrays in the JSON report.
        #[arg(long)]
        pairs: bool,
    },
    /// Rank layers by dissimilarity from a layer_reports.csv.
    Rank {
        reports: PathBuf,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair two mirrored image trees and write the manifest CSV.
    Pairs {
        human_dir: PathBuf,
        cat_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_) => 2,
        Error::Internal(_) => 4,
        _ => 3,
    }
}

fn load_config(path: Option<&Path>) -> Result<FilterConfig, Error> {
    let cfg = match path {
        Some(p) => FilterConfig::from_path(p)?,
        None => {
            info!("no config given; using built-in defaults");
            FilterConfig::default()
        }
    };
    cfg.validate()?;
    info!("filter config: {}", cfg.to_json());
    Ok(cfg)
}

fn metadata_line(input: &Path, output: &Path, flags: StageFlags) -> String {
    serde_json::json!({
        "input": input.display().to_string(),
        "output": output.display().to_string(),
        "temporal": flags.temporal,
        "motion": flags.motion,
    })
    .to_string()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn run_filter(input: &Path, out: &Path, config: Option<&Path>, mode: Mode, frame_rate: f64) -> Result<(), Error> {
    let cfg = load_config(config)?;
    match mode {
        Mode::Sequence => {
            let seq = fio::read_sequence::<f64>(input, frame_rate)?;
            let (filtered, flags) = filter::apply_to_sequence(&seq, &cfg)?;
            info!("sequence of {} frames: {:?}", seq.len(), flags);
            let inputs = fio::list_frames(input)?;
            for (src, dst) in inputs.iter().zip(fio::write_sequence(&filtered, out)?) {
                println!("{}", metadata_line(src, &dst, flags));
            }
        }
        Mode::Image if input.is_dir() => {
            let mut files: Vec<PathBuf> = fs::read_dir(input)
                .map_err(io_err(input))?
                .map(|e| e.map(|e| e.path()).map_err(io_err(input)))
                .collect::<Result<_, _>>()?;
            files.retain(|p| p.is_file() && fio::is_image_file(p));
            files.sort();
            fs::create_dir_all(out).map_err(io_err(out))?;
            for src in files {
                let dst = out.join(src.file_name().expect("listed files have names"));
                filter_one(&src, &dst, &cfg)?;
            }
        }
        Mode::Image => {
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io_err(parent))?;
            }
            filter_one(input, out, &cfg)?;
        }
    }
    Ok(())
}

fn filter_one(src: &Path, dst: &Path, cfg: &FilterConfig) -> Result<(), Error> {
    let img = fio::read_image::<f64>(src)?;
    let (filtered, flags) = filter::apply_to_image(&img, cfg)?;
    fio::write_image(&filtered, dst)?;
    println!("{}", metadata_line(src, dst, flags));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Filter {
            input,
            out,
            config,
            mode,
            frame_rate,
        } => run_filter(&input, &out, config.as_deref(), mode, frame_rate),
        Command::Align {
            layers,
            out,
            seed,
            perms_mantel,
            perms_shift,
            fdr_q,
            golden_subset_k,
            pairs,
        } => {
            let opts = AlignOptions {
                seed,
                perms_mantel,
                perms_shift,
                fdr_q,
                golden_subset_k,
                include_pairs: pairs,
                ..AlignOptions::default()
            };
            let result = pipeline::run_align(&layers, &out, &opts)?;
            let rejected: usize = result
                .reports
                .iter()
                .map(|r| [r.mantel_rejected, r.mmd_rejected, r.energy_rejected, r.paired_rejected])
                .map(|flags| flags.iter().filter(|&&f| f).count())
                .sum();
            info!(
                "aligned {} layers over {} models; {rejected} of {} hypotheses rejected",
                result.reports.len(),
                result.summaries.len(),
                result.reports.len() * pipeline::METRICS.len()
            );
            Ok(())
        }
        Command::Rank { reports, out } => {
            let ranking = rank_dissimilar(&read_layer_reports(&reports)?);
            let csv = ranking.to_csv()?;
            match out {
                Some(p) => fs::write(&p, csv).map_err(io_err(&p)),
                None => {
                    print!("{}", String::from_utf8_lossy(&csv));
                    Ok(())
                }
            }
        }
        Command::Pairs {
            human_dir,
            cat_dir,
            out,
        } => {
            let manifest = build_manifest(&human_dir, &cat_dir)?;
            manifest.write_csv(&out)?;
            info!(
                "{} records, {} usable pairs",
                manifest.records().len(),
                manifest.ok().count()
            );
            Ok(())
        }
    }
}

fn init_workers() -> Result<(), Error> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidConfig(format!("{WORKERS_ENV}={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Internal(e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match init_workers().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
