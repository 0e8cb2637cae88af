//! `cornerdc` command-line interface.
//!
//! Exit codes: 0 success, 1 input or parse failure, 2 internal invariant
//! violation, 3 dimension mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::blockdct::{coeff_grid_to_image, image_to_coeff_grid_padded, QuantTable};
use crate::dcrecover::{recover_grid, recover_image, Corner, Loss, RecoveryConfig, ScanMode};
use crate::error::{Error, Result};
use crate::image::{load_image, load_rgb, save_image, Image, ImageFormat};
use crate::jpegstream::{compression_ratio, decode_baseline, drop_dc, encode_baseline, EncodedJpeg};
use crate::metrics::{format_db, psnr, quality, ssim};
use crate::wavelet::wd_denoise_levels;
use crate::wavext::{build_tensor, export_tensor, TensorMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;

/// Header row of the benchmark report.
pub const BENCH_HEADER: &str = "id,orig_bytes,drop_bytes,ratio,psnr_zero,psnr_rec,ssim_rec,ms";

#[derive(Debug, Parser)]
#[command(name = "cornerdc", version, about = "JPEG with dropped DC coefficients and receiver-side DC recovery")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a PGM/PNG image as baseline JPEG (Q50).
    Encode {
        input: PathBuf,
        output: PathBuf,
        /// Zero every DC coefficient except the four corner blocks'.
        #[arg(long)]
        drop_dc: bool,
    },
    /// Recover the missing DC coefficients of a DC-dropped JPEG.
    Recover {
        input: PathBuf,
        /// Output image (.pgm or .png).
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Avg4)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = LossArg::Mse)]
        loss: LossArg,
        /// Image or standard JPEG to score the recovery against.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Run the drop/recover pipeline over every image in a directory.
    Bench {
        dir: PathBuf,
        report: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Build the 6-channel wavelet-extended tensor and write it as NPY.
    Wavext {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = TensorModeArg::Train)]
        mode: TensorModeArg,
    },
    /// BayesShrink wavelet denoising.
    Denoise {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Single raster scan from the top-left corner.
    Single,
    /// Average of the four corner-seeded scans.
    Avg4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    Mse,
    Trend,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TensorModeArg {
    Train,
    Inference,
}

impl From<ModeArg> for ScanMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Single => ScanMode::SingleCorner(Corner::TopLeft),
            ModeArg::Avg4 => ScanMode::FourCornerAverage,
        }
    }
}

impl From<LossArg> for Loss {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Mse => Loss::BoundaryMse,
            LossArg::Trend => Loss::GradientTrend,
            LossArg::Both => Loss::Both,
        }
    }
}

impl From<TensorModeArg> for TensorMode {
    fn from(m: TensorModeArg) -> Self {
        match m {
            TensorModeArg::Train => TensorMode::Train,
            TensorModeArg::Inference => TensorMode::Inference,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Format(_) | Error::Parse(_) | Error::Huffman(_) | Error::Truncation(_) => EXIT_INPUT,
        Error::Dimension(_) | Error::Size(_) => EXIT_DIMENSION,
        Error::Capacity(_) | Error::NoNeighbor { .. } | Error::Config(_) => EXIT_INTERNAL,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Encode { input, output, drop_dc } => cmd_encode(&input, &output, drop_dc, out),
        Command::Recover { input, output, mode, loss, reference } => {
            let cfg = RecoveryConfig::default().with_scan(mode.into()).with_loss(loss.into());
            cmd_recover(&input, &output, &cfg, reference.as_deref(), out)
        }
        Command::Bench { dir, report, jobs } => cmd_bench(&dir, &report, jobs, out),
        Command::Wavext { input, output, mode } => cmd_wavext(&input, &output, mode.into(), out),
        Command::Denoise { input, output, levels } => cmd_denoise(&input, &output, levels, out),
    }
}

fn image_format(path: &Path) -> Result<ImageFormat> {
    ImageFormat::from_path(path)
        .ok_or_else(|| Error::Format(format!("{}: unknown image extension (use .pgm or .png)", path.display())))
}

fn read_image(path: &Path) -> Result<Image> {
    load_image(path, image_format(path)?)
}

fn is_jpeg(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("jpg") || e.eq_ignore_ascii_case("jpeg"))
}

/// Standard and DC-dropped encodings of one image.
pub fn encode_pair(img: &Image) -> Result<(EncodedJpeg, EncodedJpeg)> {
    let grid = image_to_coeff_grid_padded(img, &QuantTable::q50())?;
    Ok((encode_baseline(&grid)?, encode_baseline(&drop_dc(&grid))?))
}

pub fn cmd_encode(input: &Path, output: &Path, drop: bool, out: &mut dyn Write) -> Result<()> {
    let img = read_image(input)?;
    let (standard, dropped) = encode_pair(&img)?;
    if drop {
        fs::write(output, dropped.bytes())?;
        let r = compression_ratio(&standard, &dropped);
        writeln!(
            out,
            "original_bytes={} dropped_bytes={} ratio={:.6} scan_ratio={:.6}",
            standard.total_len(),
            dropped.total_len(),
            r.total,
            r.scan
        )?;
    } else {
        fs::write(output, standard.bytes())?;
        writeln!(out, "bytes={} scan_bytes={}", standard.total_len(), standard.scan_len())?;
    }
    Ok(())
}

pub fn cmd_recover(
    input: &Path,
    output: &Path,
    cfg: &RecoveryConfig,
    reference: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let bytes = fs::read(input)?;
    let recovered = recover_image(&bytes, cfg)?;
    save_image(&recovered, output, image_format(output)?)?;
    if let Some(ref_path) = reference {
        let reference = if is_jpeg(ref_path) {
            coeff_grid_to_image(&decode_baseline(&fs::read(ref_path)?)?)
        } else {
            read_image(ref_path)?
        };
        let q = quality(&reference, &recovered)?;
        writeln!(out, "psnr_db={} ssim={:.6}", format_db(q.psnr), q.ssim)?;
    }
    Ok(())
}

/// One line of the benchmark report.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub id: String,
    pub orig_bytes: usize,
    pub drop_bytes: usize,
    pub ratio: f64,
    /// Dropped stream decoded as is, against the Q50 reconstruction.
    pub psnr_zero: f64,
    /// Recovered image against the Q50 reconstruction.
    pub psnr_rec: f64,
    pub ssim_rec: f64,
    pub ms: f64,
}

/// Encode, drop, recover (default configuration) and score one image.
pub fn bench_image(id: &str, img: &Image, cfg: &RecoveryConfig) -> Result<BenchRow> {
    let start = Instant::now();
    let grid = image_to_coeff_grid_padded(img, &QuantTable::q50())?;
    let dropped_grid = drop_dc(&grid);
    let standard = encode_baseline(&grid)?;
    let dropped = encode_baseline(&dropped_grid)?;

    let received = decode_baseline(dropped.bytes())?;
    if received != dropped_grid {
        return Err(Error::Capacity(format!("{id}: entropy codec round trip mismatch")));
    }
    let reference = coeff_grid_to_image(&grid);
    let zero_dc = coeff_grid_to_image(&received);
    let recovered = coeff_grid_to_image(&recover_grid(&received, cfg)?);
    let ms = start.elapsed().as_secs_f64() * 1e3;

    Ok(BenchRow {
        id: id.to_string(),
        orig_bytes: standard.total_len(),
        drop_bytes: dropped.total_len(),
        ratio: compression_ratio(&standard, &dropped).total,
        psnr_zero: psnr(&reference, &zero_dc)?,
        psnr_rec: psnr(&reference, &recovered)?,
        ssim_rec: ssim(&reference, &recovered)?,
        ms,
    })
}

/// PGM and PNG files directly inside `dir`, sorted by name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && ImageFormat::from_path(p).is_some())
        .collect();
    files.sort();
    Ok(files)
}

pub fn bench_directory(dir: &Path, jobs: usize, cfg: &RecoveryConfig) -> Result<Vec<BenchRow>> {
    let files = list_images(dir)?;
    if files.is_empty() {
        return Err(Error::Format(format!("no .pgm or .png images in {}", dir.display())));
    }
    let run_one = |path: &PathBuf| -> Result<BenchRow> {
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("?");
        bench_image(id, &read_image(path)?, cfg)
    };
    if jobs <= 1 {
        return files.iter().map(run_one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| files.par_iter().map(run_one).collect())
}

fn summary(rows: &[BenchRow], label: &str, pick: impl Fn(&[f64]) -> f64) -> String {
    let col = |f: fn(&BenchRow) -> f64| -> f64 { pick(&rows.iter().map(f).collect::<Vec<_>>()) };
    let bytes = |v: f64| if v.fract() == 0.0 { format!("{v:.0}") } else { format!("{v:.1}") };
    format!(
        "{label},{},{},{:.6},{},{},{:.6},{:.3}",
        bytes(col(|r| r.orig_bytes as f64)),
        bytes(col(|r| r.drop_bytes as f64)),
        col(|r| r.ratio),
        format_db(col(|r| r.psnr_zero)),
        format_db(col(|r| r.psnr_rec)),
        col(|r| r.ssim_rec),
        col(|r| r.ms),
    )
}

/// Header, one line per image, then `min`, `max` and `ave` rows.
pub fn write_bench_csv(rows: &[BenchRow], w: &mut dyn Write) -> Result<()> {
    writeln!(w, "{BENCH_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.6},{},{},{:.6},{:.3}",
            r.id,
            r.orig_bytes,
            r.drop_bytes,
            r.ratio,
            format_db(r.psnr_zero),
            format_db(r.psnr_rec),
            r.ssim_rec,
            r.ms
        )?;
    }
    if !rows.is_empty() {
        writeln!(w, "{}", summary(rows, "min", |v| v.iter().copied().fold(f64::INFINITY, f64::min)))?;
        writeln!(w, "{}", summary(rows, "max", |v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max)))?;
        writeln!(w, "{}", summary(rows, "ave", |v| v.iter().sum::<f64>() / v.len() as f64))?;
    }
    Ok(())
}

pub fn cmd_bench(dir: &Path, report: &Path, jobs: usize, out: &mut dyn Write) -> Result<()> {
    let rows = bench_directory(dir, jobs, &RecoveryConfig::default())?;
    let mut csv = Vec::new();
    write_bench_csv(&rows, &mut csv)?;
    fs::write(report, &csv)?;
    let mean = rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len() as f64;
    writeln!(out, "images={} mean_ratio={mean:.6} report={}", rows.len(), report.display())?;
    Ok(())
}

pub fn cmd_wavext(input: &Path, output: &Path, mode: TensorMode, out: &mut dyn Write) -> Result<()> {
    let img = load_rgb(input, image_format(input)?)?;
    let t = build_tensor(&img, mode)?;
    export_tensor(&t, output)?;
    let [a, b, c] = t.shape();
    writeln!(out, "shape=({a}, {b}, {c})")?;
    Ok(())
}

pub fn cmd_denoise(input: &Path, output: &Path, levels: usize, out: &mut dyn Write) -> Result<()> {
    let img = read_image(input)?;
    let denoised = wd_denoise_levels(&img, levels)?;
    save_image(&denoised, output, image_format(output)?)?;
    writeln!(out, "wrote {}", output.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, ratio: f64, psnr_rec: f64) -> BenchRow {
        BenchRow {
            id: id.into(),
            orig_bytes: 1000,
            drop_bytes: (1000.0 * ratio) as usize,
            ratio,
            psnr_zero: 10.0,
            psnr_rec,
            ssim_rec: 0.9,
            ms: 1.0,
        }
    }

    #[test]
    fn csv_layout() {
        let rows: Vec<BenchRow> =
            (0..5).map(|i| row(&format!("img{i}"), 0.5 + 0.05 * i as f64, 25.0 + i as f64)).collect();
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 5 + 3);
        assert_eq!(lines[0], BENCH_HEADER);
        assert!(lines[6].starts_with("min,1000,500,0.500000,"));
        assert!(lines[7].starts_with("max,1000,700,0.700000,"));
        assert!(lines[8].starts_with("ave,1000,600,0.600000,"));
        assert!(lines.iter().all(|l| l.split(',').count() == 8));
    }

    #[test]
    fn infinite_psnr_is_written_as_inf() {
        let rows = vec![row("a", 1.0, f64::INFINITY), row("b", 0.9, 30.0)];
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().contains(",inf,"));
        assert!(text.lines().find(|l| l.starts_with("min")).unwrap().contains(",30.0000,"));
        assert!(text.lines().find(|l| l.starts_with("ave")).unwrap().contains(",inf,"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Format("x".into())), EXIT_INPUT);
        assert_eq!(exit_code(&Error::Truncation("x".into())), EXIT_INPUT);
        assert_eq!(exit_code(&Error::Dimension("x".into())), EXIT_DIMENSION);
        assert_eq!(exit_code(&Error::Capacity("x".into())), EXIT_INTERNAL);
    }

    #[test]
    fn bad_arguments_exit_with_input_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(main_with_args(["cornerdc", "frobnicate"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(main_with_args(["cornerdc", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
