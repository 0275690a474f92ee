//! `snpfilter` command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use snpfilter::metrics::format_psnr;
use snpfilter::sweep::{default_densities, threshold_sweep, write_threshold_csv};
use snpfilter::{
    inject, mse, psnr, read_pgm_file, run_sweep, write_pgm_file, AmfConfig, DenoiseConfig,
    DetectorConfig, EnhanceConfig, EnhanceMode, Filter, NoiseSpec, ScanPolicy, SweepSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "snpfilter",
    version,
    about = "Adaptive salt-and-pepper noise reduction for PGM images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Corrupt a clean image with salt-and-pepper noise.
    Inject(InjectArgs),
    /// Restore a noisy image.
    Denoise(DenoiseArgs),
    /// Print MSE and PSNR between two images.
    Psnr { a: PathBuf, b: PathBuf },
    /// Inject, filter and score over a range of noise densities.
    Sweep(SweepArgs),
    /// Score the detector over a grid of MAG thresholds.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
struct InjectArgs {
    input: PathBuf,
    output: PathBuf,
    /// Fraction of pixels to corrupt, in [0, 1].
    #[arg(long)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Share of corrupted pixels set to 255.
    #[arg(long, default_value_t = 0.5)]
    salt_fraction: f64,
    /// Also write the ground-truth mask (255 = corrupted).
    #[arg(long)]
    mask_out: Option<PathBuf>,
}

/// Flags shared by every command that runs the filters.
#[derive(Debug, Args, Clone)]
struct FilterFlags {
    /// Mean absolute gradient above which an impulse-valued pixel is noise.
    #[arg(long, default_value_t = snpfilter::detect::DEFAULT_MAG_THRESHOLD)]
    mag_threshold: f64,
    /// Standard deviation of the noisy image above which enhancement runs.
    #[arg(long, default_value_t = snpfilter::enhance::DEFAULT_SIGMA_THRESHOLD)]
    sigma_threshold: f64,
    /// auto: gate on the noisy image's standard deviation.
    #[arg(long, default_value_t = EnhanceMode::Auto, value_parser = parse_via_str::<EnhanceMode>)]
    enhance: EnhanceMode,
    #[arg(long, default_value_t = ScanPolicy::Progressive, value_parser = parse_via_str::<ScanPolicy>)]
    scan: ScanPolicy,
    /// Largest AMF window side (odd).
    #[arg(long, default_value_t = 39)]
    amf_max_window: usize,
}

impl FilterFlags {
    fn denoise_config(&self) -> Result<DenoiseConfig> {
        Ok(DenoiseConfig {
            detector: DetectorConfig::new(self.mag_threshold)?,
            scan: self.scan,
            enhance: EnhanceConfig::new(self.sigma_threshold, self.enhance)?,
        })
    }

    fn amf_config(&self) -> Result<AmfConfig> {
        Ok(AmfConfig::new(self.amf_max_window)?)
    }
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, default_value_t = Filter::Proposed, value_parser = parse_via_str::<Filter>)]
    filter: Filter,
    #[command(flatten)]
    flags: FilterFlags,
    /// Clean image to score the output against.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Write the detection mask (proposed filter only).
    #[arg(long)]
    mask_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Clean input image.
    input: PathBuf,
    /// Output CSV path; `-` for stdout.
    #[arg(long)]
    csv: PathBuf,
    /// Comma-separated densities in (0, 1].
    #[arg(long = "density", value_delimiter = ',', default_values_t = default_densities())]
    densities: Vec<f64>,
    /// Comma-separated filters.
    #[arg(long = "filter", value_delimiter = ',', value_parser = parse_via_str::<Filter>,
          default_values_t = Filter::ALL.to_vec())]
    filters: Vec<Filter>,
    /// Base seed; density i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    flags: FilterFlags,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    input: PathBuf,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long = "density", value_delimiter = ',', default_values_t = default_densities())]
    densities: Vec<f64>,
    /// Comma-separated MAG thresholds to try.
    #[arg(long = "thresholds", value_delimiter = ',',
          default_values_t = vec![10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 80.0, 100.0])]
    thresholds: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    flags: FilterFlags,
}

fn parse_via_str<T: std::str::FromStr<Err = snpfilter::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: snpfilter::Error| e.to_string())
}

fn open_output(path: &PathBuf) -> Result<Box<dyn Write>> {
    Ok(if path.as_os_str() == "-" {
        Box::new(io::stdout().lock())
    } else {
        Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ))
    })
}

fn cmd_inject(args: &InjectArgs) -> Result<()> {
    let img = read_pgm_file(&args.input)?;
    let spec = NoiseSpec::with_salt_fraction(args.density, args.salt_fraction, args.seed)?;
    let (noisy, mask) = inject(&img, &spec);
    write_pgm_file(&args.output, &noisy)?;
    if let Some(path) = &args.mask_out {
        write_pgm_file(path, &mask.to_image()?)?;
    }
    println!("corrupted fraction: {:.6}", mask.fraction());
    Ok(())
}

fn cmd_denoise(args: &DenoiseArgs) -> Result<()> {
    let noisy = read_pgm_file(&args.input)?;
    let reference = args.reference.as_ref().map(read_pgm_file).transpose()?;
    if let Some(clean) = &reference {
        if clean.dimensions() != noisy.dimensions() {
            bail!(
                "reference is {}x{} but input is {}x{}",
                clean.width(),
                clean.height(),
                noisy.width(),
                noisy.height()
            );
        }
    }
    let cfg = args.flags.denoise_config()?;
    let (out, mask) = args.filter.apply(&noisy, &cfg, &args.flags.amf_config()?)?;
    write_pgm_file(&args.output, &out)?;
    if let Some(path) = &args.mask_out {
        match &mask {
            Some(mask) => write_pgm_file(path, &mask.to_image()?)?,
            None => bail!("--mask-out needs --filter proposed"),
        }
    }
    if let Some(clean) = &reference {
        println!("mse: {:.6}", mse(clean, &out)?);
        println!("psnr_db: {}", format_psnr(psnr(clean, &out)?));
    }
    Ok(())
}

fn cmd_psnr(a: &PathBuf, b: &PathBuf) -> Result<()> {
    let (a, b) = (read_pgm_file(a)?, read_pgm_file(b)?);
    println!("mse: {:.6}", mse(&a, &b)?);
    println!("psnr_db: {}", format_psnr(psnr(&a, &b)?));
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let clean = read_pgm_file(&args.input)?;
    let spec = SweepSpec {
        densities: args.densities.clone(),
        filters: args.filters.clone(),
        seed: args.seed,
        salt_fraction: 0.5,
        denoise: args.flags.denoise_config()?,
        amf: args.flags.amf_config()?,
    };
    let outcome = run_sweep(&clean, &spec)?;
    for case in &outcome.cases {
        eprintln!("density {}: noisy sigma {:.3}", case.density, case.sigma);
    }
    let mut out = open_output(&args.csv)?;
    outcome.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<()> {
    let clean = read_pgm_file(&args.input)?;
    let spec = SweepSpec {
        densities: args.densities.clone(),
        seed: args.seed,
        denoise: args.flags.denoise_config()?,
        ..SweepSpec::default()
    };
    let points = threshold_sweep(&clean, &spec, &args.thresholds)?;
    let mut out = open_output(&args.csv)?;
    write_threshold_csv(&points, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Inject(a) => cmd_inject(a),
        Command::Denoise(a) => cmd_denoise(a),
        Command::Psnr { a, b } => cmd_psnr(a, b),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Calibrate(a) => cmd_calibrate(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("snpfilter").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn denoise_flags_map_to_config() {
        let cli = parse(&[
            "denoise",
            "in.pgm",
            "out.pgm",
            "--filter",
            "amf",
            "--mag-threshold",
            "33",
            "--sigma-threshold",
            "61.5",
            "--enhance",
            "off",
            "--scan",
            "snapshot",
            "--amf-max-window",
            "7",
            "--reference",
            "ref.pgm",
            "--mask-out",
            "m.pgm",
        ]);
        let Command::Denoise(a) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(a.filter, Filter::Amf);
        let cfg = a.flags.denoise_config().unwrap();
        assert_eq!(cfg.detector.mag_threshold, 33.0);
        assert_eq!(cfg.enhance.sigma_threshold, 61.5);
        assert_eq!(cfg.enhance.mode, EnhanceMode::Off);
        assert_eq!(cfg.scan, ScanPolicy::Snapshot);
        assert_eq!(a.flags.amf_config().unwrap().max_window(), 7);
        assert_eq!(a.reference, Some(PathBuf::from("ref.pgm")));
        assert_eq!(a.mask_out, Some(PathBuf::from("m.pgm")));
    }

    #[test]
    fn denoise_defaults_match_library_defaults() {
        let Command::Denoise(a) = parse(&["denoise", "a", "b"]).command else {
            panic!()
        };
        assert_eq!(a.filter, Filter::Proposed);
        assert_eq!(a.flags.denoise_config().unwrap(), DenoiseConfig::default());
        assert_eq!(a.flags.amf_config().unwrap(), AmfConfig::default());
    }

    #[test]
    fn inject_flags() {
        let Command::Inject(a) = parse(&[
            "inject",
            "a",
            "b",
            "--density",
            "0.25",
            "--seed",
            "9",
            "--mask-out",
            "m",
        ])
        .command
        else {
            panic!()
        };
        assert_eq!(a.density, 0.25);
        assert_eq!(a.seed, 9);
        assert_eq!(a.salt_fraction, 0.5);
        assert_eq!(a.mask_out, Some(PathBuf::from("m")));
    }

    #[test]
    fn sweep_defaults_and_lists() {
        let Command::Sweep(a) = parse(&["sweep", "in", "--csv", "o.csv"]).command else {
            panic!()
        };
        assert_eq!(a.densities, default_densities());
        assert_eq!(a.filters, Filter::ALL.to_vec());
        assert_eq!(a.seed, 0);
        let Command::Sweep(a) = parse(&[
            "sweep",
            "in",
            "--csv",
            "o",
            "--density",
            "0.1,0.5",
            "--filter",
            "none,smf",
            "--seed",
            "4",
        ])
        .command
        else {
            panic!()
        };
        assert_eq!(a.densities, vec![0.1, 0.5]);
        assert_eq!(a.filters, vec![Filter::None, Filter::Smf]);
        assert_eq!(a.seed, 4);
    }

    #[test]
    fn bad_enum_values_rejected() {
        let bad = |args: &[&str]| {
            Cli::try_parse_from(std::iter::once("snpfilter").chain(args.iter().copied())).is_err()
        };
        assert!(bad(&["denoise", "a", "b", "--scan", "zigzag"]));
        assert!(bad(&["denoise", "a", "b", "--enhance", "maybe"]));
        assert!(bad(&["denoise", "a", "b", "--filter", "dba"]));
    }
}
