use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use ptmoment::circuits::outcome_distribution;
use ptmoment::criteria::{all_reports, simon_gaussian3, CriterionReport, PtMomentVector};
use ptmoment::estimation::{stream_rng, summarize, Channel, OutcomeSampler};
use ptmoment::fock::{pt_moment_with, C64};
use ptmoment::gaussian::simon_test;
use ptmoment::records::OutputRecord;

use crate::config::{CommandSpec, Family, RunConfig};
use crate::reproduce;
use crate::state;

/// Environment variable naming the directory for outputs without `--out`.
pub const OUT_DIR_ENV: &str = "PTMOMENT_OUT_DIR";

const DEFAULT_COPIES: usize = 3;
const DEFAULT_K: usize = 1000;

/// Runs the configured command and returns its record with provenance attached.
pub fn execute(cfg: &RunConfig) -> Result<OutputRecord> {
    cfg.validate()?;
    let record = match &cfg.command {
        CommandSpec::Criteria { moments } => criteria(cfg, moments.as_deref())?,
        CommandSpec::Reproduce { target, .. } => reproduce::run(*target, cfg)?,
        CommandSpec::Sample { copies, k, repetitions } => {
            sample(cfg, copies.unwrap_or(DEFAULT_COPIES), k.unwrap_or(DEFAULT_K), repetitions.unwrap_or(1))?
        }
    };
    provenance(record, cfg)
}

fn provenance(record: OutputRecord, cfg: &RunConfig) -> Result<OutputRecord> {
    let command = match &cfg.command {
        CommandSpec::Criteria { .. } => "criteria".to_string(),
        CommandSpec::Reproduce { target, .. } => format!("reproduce {}", target.name()),
        CommandSpec::Sample { .. } => "sample".to_string(),
    };
    Ok(record
        .with_provenance("command", command)
        .with_provenance("tool", concat!("ptmoment ", env!("CARGO_PKG_VERSION")))
        .with_provenance("seed", cfg.seed)
        .with_provenance("state", serde_json::to_string(&cfg.state)?)
        .with_provenance("cutoff", cfg.cutoff.map_or("auto".to_string(), |c| c.to_string()))
        .with_provenance("tolerances", serde_json::to_string(&cfg.tolerances)?))
}

fn report_columns(reports: &[CriterionReport], moments: &PtMomentVector) -> Result<OutputRecord> {
    let mut columns: Vec<String> = (1..=moments.order()).map(|n| format!("p{n}")).collect();
    let mut row = moments.moments().to_vec();
    for r in reports {
        for (field, value) in
            [("witness", r.witness), ("threshold", r.threshold), ("detected", if r.detected { 1.0 } else { 0.0 })]
        {
            columns.push(format!("{}.{field}", r.id));
            row.push(value);
        }
    }
    let mut out = OutputRecord::new(columns);
    out.push(row)?;
    let gaussian: Vec<String> = reports.iter().filter(|r| r.gaussian_only).map(|r| r.id.to_string()).collect();
    if !gaussian.is_empty() {
        out = out.with_provenance("gaussian_only", gaussian.join(","));
    }
    Ok(out)
}

fn criteria(cfg: &RunConfig, explicit: Option<&[f64]>) -> Result<OutputRecord> {
    let moments = match explicit {
        Some(m) => PtMomentVector::new(m.to_vec())?,
        None if cfg.state.family.is_some() => state::moments(&cfg.state, cfg.cutoff, &cfg.tolerances)?,
        None => bail!("give either moments (--p2/--p3 or --moments) or a state --family"),
    };
    let mut reports = all_reports(&moments);
    if cfg.state.family == Some(Family::Tmsv) && explicit.is_none() {
        reports.push(simon_test(state::tmsv_pair(&cfg.state)?));
        if let (Some(p2), Some(p3)) = (moments.get(2), moments.get(3)) {
            reports.push(simon_gaussian3(p2, p3)?);
        }
    }
    report_columns(&reports, &moments)
}

fn sample(cfg: &RunConfig, copies: usize, k: usize, repetitions: usize) -> Result<OutputRecord> {
    let rho = state::density(&cfg.state, cfg.cutoff, &cfg.tolerances)?;
    let exact = pt_moment_with(&rho, copies as u32, &cfg.tolerances)?;
    let dist = outcome_distribution(&vec![rho; copies], copies)?;
    let sampler = OutcomeSampler::new(&dist)?;
    let channel = if copies == 2 { Channel::TwoCopy } else { Channel::ThreeCopy };
    let draws: Vec<C64> = (0..repetitions as u64)
        .map(|r| sampler.estimate(k, &mut stream_rng(cfg.seed, channel, r)))
        .collect::<Result<_, _>>()?;
    let re: Vec<f64> = draws.iter().map(|z| z.re).collect();
    let stats = summarize(&re, k);
    let mean_im = draws.iter().map(|z| z.im).sum::<f64>() / repetitions as f64;
    let mut out = OutputRecord::new(
        ["copies", "k", "repetitions", "mean", "mean_imag", "variance", "std_error", "exact", "analytic_std"]
            .iter()
            .map(|c| c.to_string())
            .collect(),
    );
    out.push(vec![
        copies as f64,
        k as f64,
        repetitions as f64,
        stats.mean,
        mean_im,
        stats.variance,
        stats.std_error,
        exact,
        ((1.0 - exact * exact).max(0.0) / k as f64).sqrt(),
    ])?;
    Ok(out)
}

/// Where the output goes: the explicit path, else a file named after the
/// command in the directory from the environment, else standard output.
pub fn destination(cfg: &RunConfig, env_dir: Option<PathBuf>) -> Option<PathBuf> {
    if let Some(p) = &cfg.out {
        return Some(p.clone());
    }
    let stem = match &cfg.command {
        CommandSpec::Criteria { .. } => "criteria".to_string(),
        CommandSpec::Reproduce { target, .. } => target.name(),
        CommandSpec::Sample { .. } => "sample".to_string(),
    };
    env_dir.map(|d| d.join(format!("{stem}.{}", cfg.format.extension())))
}

/// Renders the record and writes it to its destination; returns the path
/// written, if any.
pub fn emit(record: &OutputRecord, cfg: &RunConfig) -> Result<Option<PathBuf>> {
    let text = record.render(cfg.format.into())?;
    match destination(cfg, std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Some(path))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}
