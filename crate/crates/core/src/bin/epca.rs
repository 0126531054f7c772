//! `epca`: command-line front end for the library.
//!
//! Exit codes: 0 success, 1 input error, 2 focal or degenerate data,
//! 3 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use extrinsic_pca::engine::{run_epca, EpcaBackend, EpcaResult, DEFAULT_T_GRID};
use extrinsic_pca::error::{EpcaError, Result};
use extrinsic_pca::io::{self, ContourFormat, CsvPoint, ResultOptions, SyntheticSphereConfig};
use extrinsic_pca::shape::KendallShapes;
use extrinsic_pca::sphere::{sphere_project, Sphere};
use extrinsic_pca::verify::{run_verify, VerifyBackend};
use nalgebra::DVector;

#[derive(Parser)]
#[command(name = "epca", version, about = "Extrinsic PCA on spheres and planar shape spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a concentrated sample on S² (or read one) and analyse it.
    SphereDemo {
        #[arg(long, default_value_t = 300)]
        n: usize,
        /// Tangent standard deviations, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.18, 0.065])]
        sigmas: Vec<f64>,
        /// Mean direction, comma separated (normalized before use).
        #[arg(long, value_delimiter = ',', default_values_t = [0.2153, 0.8692, 0.4461])]
        mean: Vec<f64>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Read points from this CSV instead of simulating.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_T_GRID)]
        t_grid: usize,
    },
    /// Extrinsic PCA of a contour dataset described by a JSON manifest.
    ShapePca {
        #[arg(long)]
        manifest: PathBuf,
        /// Resample every contour to this many arclength-uniform points
        /// (defaults to the manifest's k_common).
        #[arg(long, conflicts_with = "no_resample")]
        resample: Option<usize>,
        /// Use the points as given.
        #[arg(long)]
        no_resample: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_T_GRID)]
        t_grid: usize,
    },
    /// Write a synthetic contour dataset (CSV files and manifest).
    SimulateContours {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        k: usize,
        #[arg(long, default_value_t = 0.08)]
        noise: f64,
        #[arg(long)]
        seed: u64,
        /// Dataset name recorded in the manifest.
        #[arg(long, default_value = "synthetic-contours")]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check closed forms against brute-force and finite-difference oracles.
    Verify {
        #[arg(long, value_enum)]
        backend: BackendArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Sphere,
    Shape,
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("EPCA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| EpcaError::Input(format!("EPCA_THREADS must be a non-negative integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| EpcaError::Input(format!("cannot configure thread pool: {e}")))
}

fn report_result<B: EpcaBackend>(result: &EpcaResult<B>, skipped: &[(usize, String)]) {
    if result.single_sample {
        eprintln!("warning: fewer than two samples; all eigenvalues are zero");
    } else if result.zero_variance {
        eprintln!("warning: the sample has no spread; all eigenvalues are zero");
    }
    for (c, reason) in skipped {
        if !result.zero_variance {
            eprintln!("warning: principal curve {} skipped: {reason}", c + 1);
        }
    }
    let cumulative = result.cumulative_ratio();
    for i in 0..result.dim().min(5) {
        println!(
            "component {}: eigenvalue {:.6e}, ratio {:.4}, cumulative {:.4}",
            i + 1,
            result.eigenvalues[i],
            result.explained_ratio[i],
            cumulative[i]
        );
    }
}

fn write<B>(backend: &B, result: &EpcaResult<B>, out: &std::path::Path, t_grid: usize, projections: bool) -> Result<()>
where
    B: EpcaBackend,
    B::Point: CsvPoint,
{
    let opts = ResultOptions {
        curves: vec![0, 1],
        t_grid,
        projections,
    };
    let report = io::write_results(backend, result, out, &opts)?;
    report_result(result, &report.skipped);
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::SphereDemo {
            n,
            sigmas,
            mean,
            seed,
            input,
            out,
            t_grid,
        } => {
            let sample = match input {
                Some(path) => io::read_sphere_sample(&path)?,
                None => {
                    let cfg = SyntheticSphereConfig {
                        n,
                        mean_direction: sphere_project(&DVector::from_vec(mean))?,
                        tangent_sigmas: sigmas,
                        seed,
                    };
                    io::gen_sphere_sample(&cfg)?
                }
            };
            let backend = Sphere::new(sample.dim())?;
            let result = run_epca(sample.points(), &backend)?;
            std::fs::create_dir_all(&out).map_err(|e| EpcaError::Io {
                path: out.clone(),
                source: e,
            })?;
            io::write_sphere_sample(&out.join("sample.csv"), &sample)?;
            write(&backend, &result, &out, t_grid, true)?;
        }
        Command::ShapePca {
            manifest,
            resample,
            no_resample,
            out,
            t_grid,
        } => {
            let override_k = if no_resample { Some(None) } else { resample.map(Some) };
            let dataset = io::read_contours(&manifest, ContourFormat::Auto, override_k)?;
            let shapes = dataset.preshapes()?;
            let backend = KendallShapes::new(dataset.common_k()?)?;
            let result = run_epca(&shapes, &backend)?;
            write(&backend, &result, &out, t_grid, false)?;
        }
        Command::SimulateContours {
            n,
            k,
            noise,
            seed,
            name,
            out,
        } => {
            let template = io::butterfly_template(k)?;
            let mut dataset = io::gen_contour_sample(&template, n, noise, seed)?;
            dataset.name = name;
            let manifest = io::write_dataset(&dataset, &out)?;
            println!("wrote {} contours to {}", manifest.files.len(), out.display());
        }
        Command::Verify { backend, seed, mutate } => {
            let backend = match backend {
                BackendArg::Sphere => VerifyBackend::Sphere,
                BackendArg::Shape => VerifyBackend::Shape,
            };
            if mutate && backend == VerifyBackend::Sphere {
                return Err(EpcaError::Input(
                    "the mutation canary is only wired into the shape suite".into(),
                ));
            }
            let report = run_verify(backend, seed, mutate)?;
            print!("{}", report.table());
            if !report.all_passed() {
                for c in report.checks.iter().filter(|c| !c.passed()) {
                    eprintln!(
                        "verification failed: {} (residual {:e} > {:e})",
                        c.name, c.worst_residual, c.tolerance
                    );
                }
                return Ok(3);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
