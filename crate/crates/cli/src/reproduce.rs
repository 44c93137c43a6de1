//! Datasets behind each figure and table target.

use std::f64::consts::FRAC_1_SQRT_2;

use anyhow::Result;
use ptmoment::circuits::outcome_distribution;
use ptmoment::criteria::{
    gaussian_physicality_bound, hankel_test, optimal_threshold, p3_linear, p3_optimal, p3_quadratic, simon_gaussian3,
    PtMomentVector,
};
use ptmoment::estimation::{
    full_simulation, min_samples, repeated_estimates, summarize, witness_variances, EstimateSample, NoiseSpec,
    SampleCriterion, SamplingPlan,
};
use ptmoment::fock::partial_transpose;
use ptmoment::gaussian::{gaussian_pt_moment, simon_test, SymplecticPair};
use ptmoment::records::OutputRecord;
use ptmoment::states::{
    cat_pt_moments, cat_separability_radius, hhg_pt_moments, lossy_noon_crossing, lossy_noon_density,
    lossy_noon_pt_moments, noon_pt_moment, CatParams, HhgParams, LossyNoonParams, NoonParams, Parity,
};

use crate::config::{CommandSpec, RunConfig, Target};

const TYPICAL_TAUS: [f64; 3] = [0.9, 0.75, 0.6];
const TABLE_TAUS: [f64; 4] = [1.0, 0.9, 0.75, 0.6];
const K_GRID: [usize; 8] = [10, 20, 50, 100, 200, 500, 1000, 2000];
const DEFAULT_REPETITIONS: usize = 500;
const ALPHA_REL_STD: f64 = 0.05;
const TAU_STD: f64 = 0.05;
const P2_FLOOR: f64 = 1e-9;

fn record(columns: &[&str]) -> OutputRecord {
    OutputRecord::new(columns.iter().map(|c| c.to_string()).collect())
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn alpha(cfg: &RunConfig) -> f64 {
    cfg.state.alpha.unwrap_or(FRAC_1_SQRT_2)
}

fn taus(cfg: &RunConfig, default: &[f64]) -> Vec<f64> {
    cfg.state.tau.map_or_else(|| default.to_vec(), |t| vec![t])
}

fn sampling(cfg: &RunConfig) -> (Option<usize>, usize) {
    match cfg.command {
        CommandSpec::Reproduce { k, repetitions, .. } => (k, repetitions.unwrap_or(DEFAULT_REPETITIONS)),
        _ => (None, DEFAULT_REPETITIONS),
    }
}

/// Default sample-size grid truncated at `k_max`, which is always included.
fn k_grid(k_max: Option<usize>) -> Vec<usize> {
    match k_max {
        None => K_GRID.to_vec(),
        Some(k) => K_GRID.iter().copied().filter(|&g| g < k).chain(std::iter::once(k)).collect(),
    }
}

fn optimal_estimate(s: &EstimateSample) -> Result<f64> {
    Ok(s.p3.re - optimal_threshold(s.p2.clamp(P2_FLOOR, 1.0))?)
}

pub fn run(target: Target, cfg: &RunConfig) -> Result<OutputRecord> {
    match target {
        Target::Fig2a => symplectic_grid(cfg),
        Target::Fig2b => moment_plane(),
        Target::Fig2c => cat_plane(cfg),
        Target::Fig2d => hhg_curves(cfg),
        Target::Fig2e => noon_curves(cfg),
        Target::Fig3a => loss_curves(cfg),
        Target::Fig3b => noisy_copies(cfg),
        Target::Fig3c => sample_budgets(cfg),
        Target::Fig4 => simulation(cfg),
        Target::Fig5 => hankel_grid(),
        Target::Fig6 => distributions(cfg),
        Target::Fig7 => error_model(cfg),
        Target::Fig8 => error_vs_loss(cfg),
        Target::Table1 => table_one(cfg),
        Target::Table2 => table_two(cfg),
    }
}

const SYMPLECTIC_GRID: usize = 100;

fn physical_pairs() -> impl Iterator<Item = (f64, f64)> {
    linspace(0.2, 3.0, SYMPLECTIC_GRID)
        .flat_map(|a| linspace(0.2, 3.0, SYMPLECTIC_GRID).map(move |b| (a, b)))
        .filter(|(a, b)| a * b >= 1.0)
}

fn symplectic_grid(_cfg: &RunConfig) -> Result<OutputRecord> {
    let mut out = record(&["nu1", "nu2", "p2", "p3", "simon", "linear", "quadratic", "optimal"]);
    for (a, b) in physical_pairs() {
        let pair = SymplecticPair::new(a, b)?;
        let (p2, p3) = (gaussian_pt_moment(pair, 2)?, gaussian_pt_moment(pair, 3)?);
        out.push(vec![
            a,
            b,
            p2,
            p3,
            flag(simon_test(pair).detected),
            flag(p3_linear(p2, p3).detected),
            flag(p3_quadratic(p2, p3).detected),
            flag(p3_optimal(p2, p3)?.detected),
        ])?;
    }
    Ok(out.with_provenance("grid", format!("{SYMPLECTIC_GRID}x{SYMPLECTIC_GRID} over [0.2, 3]")))
}

fn hankel_grid() -> Result<OutputRecord> {
    let mut out = record(&["nu1", "nu2", "simon", "hankel3", "hankel5", "hankel7"]);
    for (a, b) in physical_pairs() {
        let pair = SymplecticPair::new(a, b)?;
        let m = (1..=7).map(|n| gaussian_pt_moment(pair, n)).collect::<Result<Vec<_>, _>>()?;
        let p = PtMomentVector::new(m)?;
        out.push(vec![
            a,
            b,
            flag(simon_test(pair).detected),
            flag(hankel_test(&p, 3)?.detected),
            flag(hankel_test(&p, 5)?.detected),
            flag(hankel_test(&p, 7)?.detected),
        ])?;
    }
    Ok(out.with_provenance("grid", format!("{SYMPLECTIC_GRID}x{SYMPLECTIC_GRID} over [0.2, 3]")))
}

fn moment_plane() -> Result<OutputRecord> {
    let mut out = record(&["p2", "linear", "quadratic", "optimal", "simon_gaussian3", "gaussian_bound"]);
    for i in 1..=1000 {
        let p2 = i as f64 / 1000.0;
        out.push(vec![
            p2,
            p3_linear(p2, 0.0).threshold,
            p3_quadratic(p2, 0.0).threshold,
            optimal_threshold(p2)?,
            simon_gaussian3(p2, 0.0)?.threshold,
            gaussian_physicality_bound(p2),
        ])?;
    }
    Ok(out.with_provenance("columns", "thresholds on p3 as functions of p2"))
}

fn cat_plane(cfg: &RunConfig) -> Result<OutputRecord> {
    let zs = cfg.state.z.map_or_else(|| vec![0.0, 0.5, 0.9, 0.99], |z| vec![z]);
    let parity: Parity = cfg.state.parity.map(Into::into).unwrap_or(Parity::Odd);
    let mut out = record(&["z", "alpha", "beta", "p2", "p3", "linear_witness", "separability_radius"]);
    for &z in &zs {
        let radius = cat_separability_radius(z)?;
        for a in linspace(0.0, 2.0, 41) {
            for b in linspace(0.0, 2.0, 41) {
                let Ok(p) = CatParams::real(a, b, z, parity) else { continue };
                let (p2, p3) = cat_pt_moments(&p)?;
                out.push(vec![z, a, b, p2, p3, p3_linear(p2, p3).witness, radius])?;
            }
        }
    }
    Ok(out.with_provenance("parity", format!("{parity:?}").to_lowercase()))
}

fn hhg_curves(cfg: &RunConfig) -> Result<OutputRecord> {
    let ns = cfg.state.n.map_or_else(|| vec![2, 3, 5, 10], |n| vec![n]);
    let mut out = record(&["n_modes", "delta_alpha", "p2", "p3", "linear_witness"]);
    for &n in &ns {
        for i in 1..=500 {
            let da = i as f64 / 100.0;
            let (p2, p3) = hhg_pt_moments(&HhgParams::new(cfg.state.alpha.unwrap_or(2.0), da, n)?)?;
            out.push(vec![n as f64, da, p2, p3, p3_linear(p2, p3).witness])?;
        }
    }
    Ok(out)
}

fn noon_curves(cfg: &RunConfig) -> Result<OutputRecord> {
    let ns = cfg.state.n.map_or_else(|| (1..=5).collect(), |n| vec![n]);
    let mut out = record(&["n", "alpha", "p2", "p3", "linear_witness"]);
    let (mut best, mut best_alpha) = (f64::INFINITY, f64::NAN);
    for &n in &ns {
        for a in linspace(0.0, 1.0, 1001) {
            let p = NoonParams::balanced_real(n, a)?;
            let (p2, p3) = (noon_pt_moment(&p, 2)?, noon_pt_moment(&p, 3)?);
            let w = p3_linear(p2, p3).witness;
            if w < best {
                (best, best_alpha) = (w, a);
            }
            out.push(vec![n as f64, a, p2, p3, w])?;
        }
    }
    Ok(out.with_provenance("min_linear_witness", best).with_provenance("argmin_alpha", best_alpha))
}

fn loss_curves(cfg: &RunConfig) -> Result<OutputRecord> {
    let ns = cfg.state.n.map_or_else(|| (1..=10).collect(), |n| vec![n]);
    let a = alpha(cfg);
    let mut out = record(&["n", "tau", "p2", "p3", "optimal_witness"]);
    for &n in &ns {
        for tau in linspace(0.0, 1.0, 1001) {
            let (p2, p3) = lossy_noon_pt_moments(&LossyNoonParams::symmetric(n, a, tau)?)?;
            out.push(vec![n as f64, tau, p2, p3, p3_optimal(p2, p3)?.witness])?;
        }
    }
    for &n in &ns {
        let crossing = lossy_noon_crossing(n, a, 0.5, 1.0, 1e-9)?;
        out =
            out.with_provenance(&format!("crossing_n{n}"), crossing.map_or("none".to_string(), |c| format!("{c:.6}")));
    }
    Ok(out.with_provenance("alpha", a))
}

fn noisy_copies(cfg: &RunConfig) -> Result<OutputRecord> {
    let n = cfg.state.n.unwrap_or(1);
    let a = alpha(cfg);
    let mut out = record(&["tau", "panel", "x", "y", "p2", "p3", "optimal_witness"]);
    let pt = |alpha: f64, tau: f64| -> Result<_> {
        let rho = lossy_noon_density(&LossyNoonParams::symmetric(n, alpha, tau)?)?;
        Ok(partial_transpose(&rho).into_elements())
    };
    for tau in taus(cfg, &TYPICAL_TAUS) {
        let first = pt(a, tau)?;
        for panel in 0..2 {
            for x in linspace(0.0, 1.0, 41) {
                let second = if panel == 0 { pt(x, tau)? } else { pt(a, x)? };
                let pair = &first * &second;
                let p2 = pair.trace().re;
                for y in linspace(0.0, 1.0, 41) {
                    let third = if panel == 0 { pt(y, tau)? } else { pt(a, y)? };
                    let p3 = (&pair * &third).trace().re;
                    let w = if p2 > 0.0 { p3_optimal(p2.min(1.0), p3)?.witness } else { f64::NAN };
                    out.push(vec![tau, panel as f64, x, y, p2, p3, w])?;
                }
            }
        }
    }
    Ok(out
        .with_provenance("panels", "0: amplitudes of copies 2 and 3; 1: transmissivities of copies 2 and 3")
        .with_provenance("alpha", a)
        .with_provenance("n", n))
}

fn sample_budgets(cfg: &RunConfig) -> Result<OutputRecord> {
    let ns = cfg.state.n.map_or_else(|| (1..=10).collect(), |n| vec![n]);
    let a = alpha(cfg);
    let mut out = record(&["n", "tau", "min_samples"]);
    for &n in &ns {
        for tau in linspace(0.5, 1.0, 201) {
            let (p2, p3) = lossy_noon_pt_moments(&LossyNoonParams::symmetric(n, a, tau)?)?;
            let k = min_samples(p2, p3, SampleCriterion::Quadratic)?;
            out.push(vec![n as f64, tau, k.map_or(f64::NAN, |k| k as f64)])?;
        }
    }
    Ok(out.with_provenance("criterion", "quadratic").with_provenance("alpha", a))
}

fn simulation(cfg: &RunConfig) -> Result<OutputRecord> {
    let (k_max, repetitions) = sampling(cfg);
    let plan = SamplingPlan { k_grid: k_grid(k_max), repetitions, master_seed: cfg.seed };
    let n = cfg.state.n.unwrap_or(1);
    let a = alpha(cfg);
    let mut out = record(&["tau", "k", "mean", "std", "analytic_band_low", "analytic_band_high", "reference"]);
    let mut clamped = 0;
    for tau in taus(cfg, &TYPICAL_TAUS) {
        let noise = NoiseSpec::lossy_noon(a, tau, ALPHA_REL_STD, TAU_STD)?;
        let sim = full_simulation(n, &noise, &plan)?;
        clamped += sim.clamped;
        for p in &sim.points {
            out.push(vec![tau, p.witness.k as f64, p.witness.mean, p.std, p.band_low, p.band_high, sim.reference])?;
        }
    }
    Ok(out
        .with_provenance("repetitions", repetitions)
        .with_provenance("noise", format!("alpha relative std {ALPHA_REL_STD}, tau std {TAU_STD}"))
        .with_provenance("clamped_draws", clamped)
        .with_provenance("n", n)
        .with_provenance("alpha", a))
}

fn distributions(cfg: &RunConfig) -> Result<OutputRecord> {
    let a = alpha(cfg);
    let mut out = record(&["tau", "copies", "n2a", "n2b", "n3a", "n3b", "total", "probability"]);
    for tau in taus(cfg, &TABLE_TAUS) {
        let rho = lossy_noon_density(&LossyNoonParams::symmetric(1, a, tau)?)?;
        for copies in [2usize, 3] {
            let dist = outcome_distribution(&vec![rho.clone(); copies], copies)?;
            for (key, &p) in dist.probabilities() {
                let third = |v: &[usize]| v.get(1).map_or(f64::NAN, |&x| x as f64);
                let total: usize = key.a.iter().chain(&key.b).sum();
                out.push(vec![
                    tau,
                    copies as f64,
                    key.a[0] as f64,
                    key.b[0] as f64,
                    third(&key.a),
                    third(&key.b),
                    total as f64,
                    p,
                ])?;
            }
        }
    }
    Ok(out
        .with_provenance("alpha", a)
        .with_provenance("rows", "reachable outcomes only; all others have probability 0"))
}

struct Stats {
    linear: Vec<f64>,
    quadratic: Vec<f64>,
    optimal: Vec<f64>,
}

fn sampled_stats(tau: f64, a: f64, k: usize, repetitions: usize, seed: u64) -> Result<(Stats, f64, f64)> {
    let params = LossyNoonParams::symmetric(1, a, tau)?;
    let rho = lossy_noon_density(&params)?;
    let d2 = outcome_distribution(&[rho.clone(), rho.clone()], 2)?;
    let d3 = outcome_distribution(&[rho.clone(), rho.clone(), rho], 3)?;
    let samples = repeated_estimates(&d2, &d3, k, repetitions, seed)?;
    let stats = Stats {
        linear: samples.iter().map(|s| s.w_linear.re).collect(),
        quadratic: samples.iter().map(|s| s.w_quadratic.re).collect(),
        optimal: samples.iter().map(optimal_estimate).collect::<Result<_>>()?,
    };
    let (p2, p3) = lossy_noon_pt_moments(&params)?;
    Ok((stats, p2, p3))
}

fn error_model(cfg: &RunConfig) -> Result<OutputRecord> {
    let (k_max, repetitions) = sampling(cfg);
    let a = alpha(cfg);
    let mut out = record(&[
        "tau",
        "k",
        "mean_linear",
        "std_linear",
        "analytic_std_linear",
        "mean_quadratic",
        "std_quadratic",
        "analytic_std_quadratic",
        "mean_optimal",
        "std_optimal",
        "reference_linear",
        "reference_quadratic",
        "reference_optimal",
    ]);
    for (ti, tau) in taus(cfg, &TABLE_TAUS).into_iter().enumerate() {
        for (ki, k) in k_grid(k_max).into_iter().enumerate() {
            let seed = cfg.seed.wrapping_add(1000 * ti as u64 + ki as u64);
            let (s, p2, p3) = sampled_stats(tau, a, k, repetitions, seed)?;
            let (vl, vq) = witness_variances(p2, p3, k)?;
            let (l, q, o) = (summarize(&s.linear, k), summarize(&s.quadratic, k), summarize(&s.optimal, k));
            out.push(vec![
                tau,
                k as f64,
                l.mean,
                l.variance.sqrt(),
                vl.sqrt(),
                q.mean,
                q.variance.sqrt(),
                vq.sqrt(),
                o.mean,
                o.variance.sqrt(),
                p3_linear(p2, p3).witness,
                p3_quadratic(p2, p3).witness,
                p3_optimal(p2, p3)?.witness,
            ])?;
        }
    }
    Ok(out.with_provenance("repetitions", repetitions).with_provenance("alpha", a))
}

fn error_vs_loss(cfg: &RunConfig) -> Result<OutputRecord> {
    let (k_max, repetitions) = sampling(cfg);
    let k = k_max.unwrap_or(2000);
    let a = alpha(cfg);
    let grid: Vec<f64> = cfg.state.tau.map_or_else(|| linspace(0.5, 1.0, 21).collect(), |t| vec![t]);
    let mut out = record(&[
        "tau",
        "k",
        "std_linear",
        "analytic_std_linear",
        "std_quadratic",
        "analytic_std_quadratic",
        "std_optimal",
    ]);
    for (ti, tau) in grid.into_iter().enumerate() {
        let (s, p2, p3) = sampled_stats(tau, a, k, repetitions, cfg.seed.wrapping_add(ti as u64))?;
        let (vl, vq) = witness_variances(p2, p3, k)?;
        let std = |v: &[f64]| summarize(v, k).variance.sqrt();
        out.push(vec![tau, k as f64, std(&s.linear), vl.sqrt(), std(&s.quadratic), vq.sqrt(), std(&s.optimal)])?;
    }
    Ok(out.with_provenance("repetitions", repetitions).with_provenance("alpha", a))
}

/// Two-copy outcome probabilities of the lossy single-photon NOON state,
/// keyed by `(N2A, N2B)`.
pub fn table_one_formulas(tau: f64, a2: f64) -> Vec<([usize; 2], f64)> {
    let b2 = 1.0 - a2;
    let t = tau;
    vec![
        ([0, 0], 1.0 - t / 2.0 * (2.0 - t)),
        ([1, 0], t * (1.0 - t) * a2),
        ([0, 1], t * (1.0 - t) * b2),
        ([1, 1], t * t * a2 * b2),
        ([2, 0], t * t / 2.0 * a2 * a2),
        ([0, 2], t * t / 2.0 * b2 * b2),
    ]
}

/// Configurations that carry zero probability although they conserve the
/// input photon number, as `(N2A, N2B, N3A, N3B)`.
pub const TABLE_TWO_ZEROS: [[usize; 4]; 12] = [
    [1, 0, 2, 0],
    [2, 0, 1, 0],
    [0, 1, 0, 2],
    [0, 2, 0, 1],
    [0, 1, 2, 0],
    [0, 2, 1, 0],
    [1, 0, 0, 2],
    [2, 0, 0, 1],
    [0, 1, 1, 1],
    [1, 0, 1, 1],
    [1, 1, 0, 1],
    [1, 1, 1, 0],
];

/// Three-copy outcome probabilities keyed by `(N2A, N2B, N3A, N3B)`.
pub fn table_two_formulas(tau: f64, a2: f64) -> Vec<([usize; 4], f64)> {
    let b2 = 1.0 - a2;
    let t = tau;
    let one = |x: f64| x * (1.0 - t) * t * (3.0 - 2.0 * t) / 3.0;
    let mut rows = vec![
        ([0, 0, 0, 0], 1.0 - t / 9.0 * (18.0 + t * (-15.0 + 4.0 * t))),
        ([1, 0, 0, 0], one(a2)),
        ([0, 0, 1, 0], one(a2)),
        ([0, 1, 0, 0], one(b2)),
        ([0, 0, 0, 1], one(b2)),
        ([1, 1, 0, 0], 4.0 / 3.0 * a2 * b2 * (1.0 - t) * t * t),
        ([0, 0, 1, 1], 4.0 / 3.0 * a2 * b2 * (1.0 - t) * t * t),
        ([1, 0, 0, 1], a2 * b2 * t * t / 3.0),
        ([0, 1, 1, 0], a2 * b2 * t * t / 3.0),
        ([1, 0, 1, 0], a2 * a2 * t * t / 3.0),
        ([0, 1, 0, 1], b2 * b2 * t * t / 3.0),
        ([2, 0, 0, 0], 2.0 / 3.0 * a2 * a2 * (1.0 - t) * t * t),
        ([0, 0, 2, 0], 2.0 / 3.0 * a2 * a2 * (1.0 - t) * t * t),
        ([0, 2, 0, 0], 2.0 / 3.0 * b2 * b2 * (1.0 - t) * t * t),
        ([0, 0, 0, 2], 2.0 / 3.0 * b2 * b2 * (1.0 - t) * t * t),
        ([1, 2, 0, 0], 2.0 / 3.0 * a2 * b2 * b2 * t.powi(3)),
        ([0, 0, 1, 2], 2.0 / 3.0 * a2 * b2 * b2 * t.powi(3)),
        ([2, 1, 0, 0], 2.0 / 3.0 * a2 * a2 * b2 * t.powi(3)),
        ([0, 0, 2, 1], 2.0 / 3.0 * a2 * a2 * b2 * t.powi(3)),
    ];
    rows.extend(TABLE_TWO_ZEROS.iter().map(|&k| (k, 0.0)));
    rows.extend([
        ([3, 0, 0, 0], 2.0 / 9.0 * a2.powi(3) * t.powi(3)),
        ([0, 0, 3, 0], 2.0 / 9.0 * a2.powi(3) * t.powi(3)),
        ([0, 3, 0, 0], 2.0 / 9.0 * b2.powi(3) * t.powi(3)),
        ([0, 0, 0, 3], 2.0 / 9.0 * b2.powi(3) * t.powi(3)),
    ]);
    rows
}

fn table_one(cfg: &RunConfig) -> Result<OutputRecord> {
    let a = alpha(cfg);
    let mut out = record(&["tau", "n2a", "n2b", "formula", "simulated", "abs_diff"]);
    let mut worst: f64 = 0.0;
    for tau in taus(cfg, &TABLE_TAUS) {
        let rho = lossy_noon_density(&LossyNoonParams::symmetric(1, a, tau)?)?;
        let dist = outcome_distribution(&[rho.clone(), rho], 2)?;
        for ([na, nb], f) in table_one_formulas(tau, a * a) {
            let sim = dist.get(&[na], &[nb]);
            worst = worst.max((sim - f).abs());
            out.push(vec![tau, na as f64, nb as f64, f, sim, (sim - f).abs()])?;
        }
    }
    Ok(out.with_provenance("alpha", a).with_provenance("max_abs_diff", worst))
}

fn table_two(cfg: &RunConfig) -> Result<OutputRecord> {
    let a = alpha(cfg);
    let mut out = record(&["tau", "n2a", "n2b", "n3a", "n3b", "formula", "simulated", "abs_diff"]);
    let mut worst: f64 = 0.0;
    for tau in taus(cfg, &TABLE_TAUS) {
        let rho = lossy_noon_density(&LossyNoonParams::symmetric(1, a, tau)?)?;
        let dist = outcome_distribution(&[rho.clone(), rho.clone(), rho], 3)?;
        for ([n2a, n2b, n3a, n3b], f) in table_two_formulas(tau, a * a) {
            let sim = dist.get(&[n2a, n3a], &[n2b, n3b]);
            worst = worst.max((sim - f).abs());
            out.push(vec![tau, n2a as f64, n2b as f64, n3a as f64, n3b as f64, f, sim, (sim - f).abs()])?;
        }
    }
    Ok(out.with_provenance("alpha", a).with_provenance("max_abs_diff", worst))
}
