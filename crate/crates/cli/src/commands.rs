use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use tsmetric::classifier::{mean_ratios, pair_rows, CurveSettings};
use tsmetric::covariance::{diagonal_covariance, sample_covariance, shrinkage_covariance};
use tsmetric::io::z_normalize_dataset;
use tsmetric::{
    evaluate_with, export_matrix, generate, read_ucr, write_ucr, ClassLabel, Error, GeneratorSpec,
    LabeledDataset, Workers,
};

use crate::table::{BenchRow, BenchTable};
use crate::{BenchArgs, CovEstimator, CovmatArgs, CurveArgs, SynthArgs};

const USAGE: u8 = 2;

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

struct Split {
    name: String,
    train: PathBuf,
    test: PathBuf,
}

fn splits(args: &BenchArgs) -> Vec<Split> {
    let mut out: Vec<Split> = args
        .train
        .iter()
        .zip(&args.test)
        .map(|(train, test)| {
            let stem = train
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let name = stem.strip_suffix("_TRAIN").map(str::to_string).unwrap_or(stem);
            Split {
                name,
                train: train.clone(),
                test: test.clone(),
            }
        })
        .collect();
    if let Some(dir) = &args.ucr_dir {
        out.extend(args.dataset.iter().map(|name| Split {
            name: name.clone(),
            train: dir.join(name).join(format!("{name}_TRAIN.tsv")),
            test: dir.join(name).join(format!("{name}_TEST.tsv")),
        }));
    }
    out
}

fn load(path: &Path, znorm: bool) -> tsmetric::Result<LabeledDataset> {
    let d = read_ucr(path)?;
    Ok(if znorm { z_normalize_dataset(&d) } else { d })
}

pub fn bench(args: BenchArgs) -> Result<ExitCode> {
    if args.train.len() != args.test.len() {
        eprintln!(
            "error: {} --train files but {} --test files; pass them in pairs",
            args.train.len(),
            args.test.len()
        );
        return Ok(ExitCode::from(USAGE));
    }
    let splits = splits(&args);
    if splits.is_empty() {
        eprintln!("error: no datasets; pass --train/--test or --ucr-dir/--dataset");
        return Ok(ExitCode::from(USAGE));
    }
    let workers = Workers::from_count(args.workers.workers);
    let mut table = BenchTable::new(args.distances.clone());
    let mut failed = 0;
    // Datasets run one at a time; parallelism is over test instances.
    for split in &splits {
        let loaded =
            load(&split.train, args.znorm).and_then(|train| Ok((train, load(&split.test, args.znorm)?)));
        let (train, test) = match loaded {
            Ok(pair) => pair,
            Err(e) => {
                eprintln!("{}: {e}", split.name);
                failed += 1;
                continue;
            }
        };
        for spec in &args.distances {
            log::info!("{}: {spec}", split.name);
            match evaluate_with(spec, &train, &test, workers) {
                Ok(report) => {
                    for entry in &report.fallback_log {
                        log::warn!("{} {spec}: {entry:?}", split.name);
                    }
                    table.push(BenchRow {
                        dataset: split.name.clone(),
                        distance: *spec,
                        error_rate: report.error_rate,
                        n_errors: report.n_errors,
                        n_test: report.n_test,
                        fallbacks: report.fallback_log.len(),
                        wall_time: report.wall_time,
                    });
                }
                Err(e) => {
                    eprintln!("{} {spec}: {e}", split.name);
                    failed += 1;
                }
            }
        }
    }
    let mut out = output(args.out.as_deref())?;
    table.write(&mut out, args.format, args.summary)?;
    out.flush()?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

pub fn learning_curve(args: CurveArgs) -> Result<ExitCode> {
    if args.sizes.is_empty() || args.sizes.contains(&0) {
        eprintln!("error: --sizes must be positive integers");
        return Ok(ExitCode::from(USAGE));
    }
    let settings = CurveSettings {
        n_test_per_class: args.test_per_class,
        repeats: args.repeats,
        seed: args.seed,
        z_normalize: !args.raw,
        workers: Workers::from_count(args.workers.workers),
    };
    let mut points = Vec::new();
    for &family in &args.family {
        eprintln!("{family}: sizes {:?}, {} repeats", args.sizes, args.repeats);
        let rows = tsmetric::learning_curve(family, &args.sizes, &settings)?;
        points.extend(pair_rows(&rows));
    }
    let mut out = output(args.out.as_deref())?;
    writeln!(
        out,
        "family,train_size,repeat,accuracy_euclidean,accuracy_mahalanobis_diag_cb,ratio"
    )?;
    for p in &points {
        writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6}",
            p.family, p.train_size, p.repeat, p.accuracy_euclidean, p.accuracy_mahalanobis, p.ratio
        )?;
    }
    writeln!(out)?;
    writeln!(out, "family,train_size,repeats,mean_ratio")?;
    for m in mean_ratios(&points) {
        writeln!(
            out,
            "{},{},{},{:.6}",
            m.family, m.train_size, m.repeats, m.mean_ratio
        )?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn synth(args: SynthArgs) -> Result<ExitCode> {
    if args.per_class == 0 {
        eprintln!("error: --per-class must be positive");
        return Ok(ExitCode::from(USAGE));
    }
    let d = generate(&GeneratorSpec {
        family: args.family,
        per_class_count: args.per_class,
        seed: args.seed,
    })?;
    write_ucr(&d, &args.out)?;
    println!(
        "{} instances of length {} written to {}",
        d.len(),
        d.series_length(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn covmat(args: CovmatArgs) -> Result<ExitCode> {
    let data = load(&args.train, args.znorm)?;
    let selected = if args.class.eq_ignore_ascii_case("global") {
        data
    } else {
        let label = ClassLabel(args.class.parse().with_context(|| {
            format!(
                "--class must be an integer label or \"global\", got {:?}",
                args.class
            )
        })?);
        match data.class_partition().remove(&label) {
            Some(part) => part,
            None => bail!(Error::UnknownLabel(label)),
        }
    };
    let estimate = match args.estimator {
        CovEstimator::Sample => sample_covariance(&selected),
        CovEstimator::Shrinkage => shrinkage_covariance(&selected),
        CovEstimator::Diagonal => diagonal_covariance(&selected),
    }?;
    export_matrix(&estimate.to_dense(), &args.out, args.format.into())?;
    match estimate.shrink_intensity {
        Some(lambda) => eprintln!(
            "{}x{} {} covariance from {} instances (intensity {lambda:.6}) written to {}",
            estimate.dim(),
            estimate.dim(),
            estimate.estimator.name(),
            estimate.sample_count,
            args.out.display()
        ),
        None => eprintln!(
            "{}x{} {} covariance from {} instances written to {}",
            estimate.dim(),
            estimate.dim(),
            estimate.estimator.name(),
            estimate.sample_count,
            args.out.display()
        ),
    }
    Ok(ExitCode::SUCCESS)
}
