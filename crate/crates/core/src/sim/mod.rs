//! Seeded, reproducible Monte Carlo evaluation of constructed codes.
//!
//! Trials derive their random stream from the experiment seed and the trial
//! index alone, so results are independent of worker count and identical
//! configurations produce byte-identical output.

pub mod config;
mod report;

pub use config::{ConfigFile, ConfigError};
pub use report::{report_complexity, report_cycles, ComplexityRow};

use crate::alist::read_alist;
use crate::channel::{llr_init, transmit, ChannelKind, ChannelOutput, ChannelSpec};
use crate::decode::{bec_peel, SpaDecoder};
use crate::distribution::DegreeDistribution;
use crate::diversity::{build_full_diversity, parse_layout, puncture, BlockLayout};
use crate::encode::{Encoder, IraEncoder, SystematicEncoder};
use crate::graph::TannerGraph;
use crate::peg::{peg_construct, ComplexityAudit, MetricPipeline};
use crate::structured::{ira_construct, qc_peg_construct, QcConstraint};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Which code to build (or load) for an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeSpec {
    General { n: usize, m: usize, construction: String },
    Qc { n: usize, m: usize, q: usize, construction: String },
    Ira { n: usize, m: usize, construction: String },
    Diversity { f: usize, n: usize, k: Option<usize>, punctured: bool, construction: String },
    Alist { path: String, layout: Option<String> },
}

/// Channel family of an experiment; the operating point comes from the sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelChoice {
    Bec,
    Awgn,
    BlockFading { rayleigh_scale: f64 },
    FastFading { rayleigh_scale: f64 },
}

/// The swept axis: erasure probabilities, SNR points, or decoder iteration
/// caps at a fixed SNR.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Erasure(Vec<f64>),
    SnrDb(Vec<f64>),
    IterCaps { snr_db: f64, caps: Vec<usize> },
}

/// When to stop accumulating trials at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_trials: u64,
    /// Explicit override of the statistical floor on `min_frame_errors`.
    pub allow_low_frame_errors: bool,
}

/// Which bits count toward frame and bit errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorScope {
    Frame,
    Systematic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmission {
    RandomMessage,
    AllZero,
}

/// Full description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub code: CodeSpec,
    pub lambda: DegreeDistribution,
    pub construction_seed: u64,
    pub channel: ChannelChoice,
    /// Fade count for block fading on non-diversity codes.
    pub fades: Option<usize>,
    pub sweep: Sweep,
    pub max_iter: usize,
    pub stop: StopRule,
    pub scope: ErrorScope,
    pub transmission: Transmission,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.stop.min_frame_errors < 20 && !self.stop.allow_low_frame_errors {
            return Err(format!(
                "min_frame_errors = {} is below the statistical floor of 20; \
                 set allow_low_frame_errors = true to override",
                self.stop.min_frame_errors
            ));
        }
        if self.max_iter == 0 {
            return Err("max_iter must be at least 1".into());
        }
        if let Sweep::IterCaps { caps, .. } = &self.sweep {
            if caps.is_empty() || caps.windows(2).any(|w| w[0] >= w[1]) {
                return Err("iter_caps must be a strictly increasing list".into());
            }
        }
        Ok(())
    }

    /// Canonical `key = value` echo recorded in output headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| kv.push((k.to_string(), v));
        match &self.code {
            CodeSpec::General { n, m, construction } => {
                push("kind", "general".into());
                push("n", n.to_string());
                push("m", m.to_string());
                push("construction", construction.clone());
            }
            CodeSpec::Qc { n, m, q, construction } => {
                push("kind", "qc".into());
                push("n", n.to_string());
                push("m", m.to_string());
                push("q", q.to_string());
                push("construction", construction.clone());
            }
            CodeSpec::Ira { n, m, construction } => {
                push("kind", "ira".into());
                push("n", n.to_string());
                push("m", m.to_string());
                push("construction", construction.clone());
            }
            CodeSpec::Diversity { f, n, k, punctured, construction } => {
                push("kind", "diversity".into());
                push("f", f.to_string());
                push("n", n.to_string());
                if let Some(k) = k {
                    push("k", k.to_string());
                }
                if *punctured {
                    push("puncture", "true".into());
                }
                push("construction", construction.clone());
            }
            CodeSpec::Alist { path, layout } => {
                push("kind", "alist".into());
                push("alist", path.clone());
                if let Some(l) = layout {
                    push("layout", l.clone());
                }
            }
        }
        let lambda_text = self
            .lambda
            .lambda()
            .iter()
            .map(|(d, f)| format!("{d}:{f}"))
            .collect::<Vec<_>>()
            .join(",");
        push("lambda", lambda_text);
        push("construction_seed", self.construction_seed.to_string());
        match &self.channel {
            ChannelChoice::Bec => push("channel", "bec".into()),
            ChannelChoice::Awgn => push("channel", "awgn".into()),
            ChannelChoice::BlockFading { rayleigh_scale } => {
                push("channel", "block-fading".into());
                push("rayleigh_scale", rayleigh_scale.to_string());
            }
            ChannelChoice::FastFading { rayleigh_scale } => {
                push("channel", "fast-fading".into());
                push("rayleigh_scale", rayleigh_scale.to_string());
            }
        }
        if let Some(f) = self.fades {
            push("fades", f.to_string());
        }
        match &self.sweep {
            Sweep::Erasure(points) => push("erasure_probs", join_f64(points)),
            Sweep::SnrDb(points) => push("snr_db_points", join_f64(points)),
            Sweep::IterCaps { snr_db, caps } => {
                push("snr_db", snr_db.to_string());
                let caps = caps.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                push("iter_caps", caps);
            }
        }
        push("max_iter", self.max_iter.to_string());
        push("min_frame_errors", self.stop.min_frame_errors.to_string());
        push("max_trials", self.stop.max_trials.to_string());
        if self.stop.allow_low_frame_errors {
            push("allow_low_frame_errors", "true".into());
        }
        push(
            "scope",
            match self.scope {
                ErrorScope::Frame => "frame".into(),
                ErrorScope::Systematic => "systematic".into(),
            },
        );
        push(
            "transmission",
            match self.transmission {
                Transmission::RandomMessage => "random".into(),
                Transmission::AllZero => "all-zero".into(),
            },
        );
        push("seed", self.seed.to_string());
        kv
    }
}

fn join_f64(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Error counters and derived rates at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub point: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub mean_iterations: f64,
    pub fer: f64,
    pub ber: f64,
    /// Normal-approximation 95% half-width: `1.96 sqrt(p (1 - p) / trials)`.
    pub ci95_half: f64,
}

impl PointResult {
    fn from_totals(point: f64, totals: &PointTotals, scope_bits: u64) -> Self {
        let trials = totals.trials;
        let fer = totals.frame_errors as f64 / trials as f64;
        let ber = totals.bit_errors as f64 / (trials * scope_bits.max(1)) as f64;
        let ci95_half = 1.96 * (fer * (1.0 - fer) / trials as f64).sqrt();
        Self {
            point,
            trials,
            frame_errors: totals.frame_errors,
            bit_errors: totals.bit_errors,
            mean_iterations: totals.iterations as f64 / trials as f64,
            fer,
            ber,
            ci95_half,
        }
    }

    /// True when the 95% intervals of `self` and `other` do not overlap.
    pub fn ci_disjoint_from(&self, other: &PointResult) -> bool {
        let (a_lo, a_hi) = (self.fer - self.ci95_half, self.fer + self.ci95_half);
        let (b_lo, b_hi) = (other.fer - other.ci95_half, other.fer + other.ci95_half);
        a_hi < b_lo || b_hi < a_lo
    }
}

/// All rows of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub points: Vec<PointResult>,
}

/// A constructed (or loaded) code ready for simulation.
pub struct BuiltCode {
    pub graph: TannerGraph,
    pub encoder: Encoder,
    pub rate: f64,
    /// Positions counted by the error scope.
    pub scope_positions: Vec<usize>,
    /// Positions withheld from transmission.
    pub puncture_mask: Vec<usize>,
    pub layout: Option<BlockLayout>,
    pub qc: Option<QcConstraint>,
    pub audit: ComplexityAudit,
}

impl BuiltCode {
    /// Positions that actually traverse the channel, ascending.
    pub fn transmitted_positions(&self) -> Vec<usize> {
        let n = self.graph.n_var();
        (0..n).filter(|v| !self.puncture_mask.contains(v)).collect()
    }
}

/// Builds the code an experiment asks for.
pub fn build_code(cfg: &ExperimentConfig) -> Result<BuiltCode, SimError> {
    let fail = |e: String| SimError::Construction(e);
    let pipeline = |name: &str| {
        MetricPipeline::by_name(name, cfg.construction_seed)
            .map_err(|e| SimError::Construction(e.to_string()))
    };
    let (graph, encoder, layout, qc, audit) = match &cfg.code {
        CodeSpec::General { n, m, construction } => {
            let (g, audit) =
                peg_construct(*n, *m, &cfg.lambda, pipeline(construction)?).map_err(|e| fail(e.to_string()))?;
            let enc = Encoder::Systematic(SystematicEncoder::new(&g, None));
            (g, enc, None, None, audit)
        }
        CodeSpec::Qc { n, m, q, construction } => {
            let (g, qc, audit) = qc_peg_construct(*n, *m, *q, &cfg.lambda, pipeline(construction)?)
                .map_err(|e| fail(e.to_string()))?;
            let enc = Encoder::Systematic(SystematicEncoder::new(&g, None));
            (g, enc, None, Some(qc), audit)
        }
        CodeSpec::Ira { n, m, construction } => {
            let (g, ira, audit) = ira_construct(*n, *m, &cfg.lambda, pipeline(construction)?)
                .map_err(|e| fail(e.to_string()))?;
            let enc = Encoder::Ira(IraEncoder::new(&g, &ira));
            (g, enc, None, None, audit)
        }
        CodeSpec::Diversity { f, n, k, punctured, construction } => {
            let (dg, audit) =
                build_full_diversity(*f, *n, *k, &cfg.lambda, pipeline(construction)?)
                    .map_err(|e| fail(e.to_string()))?;
            let dg = if *punctured {
                let (p, _mask) = puncture(&dg, f - 1).map_err(|e| fail(e.to_string()))?;
                p
            } else {
                dg
            };
            let syst: Vec<usize> = dg.layout.systematic().collect();
            let enc = Encoder::Systematic(SystematicEncoder::new(&dg.graph, Some(&syst)));
            (dg.graph.clone(), enc, Some(dg.layout), None, audit)
        }
        CodeSpec::Alist { path, layout } => {
            let text = std::fs::read_to_string(path)?;
            let g = read_alist(&text).map_err(|e| fail(e.to_string()))?;
            let layout = match layout {
                None => None,
                Some(p) => {
                    let text = std::fs::read_to_string(p)?;
                    Some(parse_layout(&text).map_err(fail)?)
                }
            };
            let enc = match &layout {
                Some(l) => {
                    let syst: Vec<usize> = l.systematic().collect();
                    Encoder::Systematic(SystematicEncoder::new(&g, Some(&syst)))
                }
                None => Encoder::Systematic(SystematicEncoder::new(&g, None)),
            };
            (g, enc, layout, None, ComplexityAudit::default())
        }
    };

    let puncture_mask: Vec<usize> = layout
        .as_ref()
        .and_then(|l| l.punctured_block.map(|b| l.block_range(b).collect()))
        .unwrap_or_default();
    let transmitted = graph.n_var() - puncture_mask.len();
    let rate = encoder.effective_k() as f64 / transmitted as f64;
    let scope_positions: Vec<usize> = match cfg.scope {
        ErrorScope::Systematic => match &layout {
            Some(l) => l.systematic().collect(),
            None => encoder.message_positions(),
        },
        ErrorScope::Frame => {
            (0..graph.n_var()).filter(|v| !puncture_mask.contains(v)).collect()
        }
    };
    Ok(BuiltCode { graph, encoder, rate, scope_positions, puncture_mask, layout, qc, audit })
}

struct TrialOutcome {
    /// Scope bit errors per cap (single entry for plain sweeps).
    errors_per_cap: Vec<u64>,
    iterations: u64,
    /// Convergence iteration, or `usize::MAX` when the decoder ran out.
    exit_iter: usize,
}

#[derive(Debug, Default, Clone, Copy)]
struct PointTotals {
    trials: u64,
    frame_errors: u64,
    bit_errors: u64,
    iterations: u64,
}

/// Runs one experiment, appending one CSV row per completed point to `out`.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out: &mut dyn Write,
) -> Result<SimResult, SimError> {
    cfg.validate().map_err(SimError::Config)?;
    let code = build_code(cfg)?;
    write_header(cfg, out)?;

    let points: Vec<(usize, f64)> = match &cfg.sweep {
        Sweep::Erasure(p) => p.iter().copied().enumerate().collect(),
        Sweep::SnrDb(p) => p.iter().copied().enumerate().collect(),
        Sweep::IterCaps { caps, .. } => {
            caps.iter().map(|&c| c as f64).enumerate().collect()
        }
    };

    let mut results = Vec::new();
    match &cfg.sweep {
        Sweep::IterCaps { snr_db, caps } => {
            let totals = run_caps_point(cfg, &code, *snr_db, caps)?;
            for ((_, cap), t) in points.iter().zip(&totals) {
                let row = PointResult::from_totals(*cap, t, code.scope_positions.len() as u64);
                write_row(&row, out)?;
                results.push(row);
            }
        }
        _ => {
            for (index, point) in points {
                let totals = run_plain_point(cfg, &code, index, point)?;
                let row = PointResult::from_totals(point, &totals, code.scope_positions.len() as u64);
                write_row(&row, out)?;
                results.push(row);
            }
        }
    }
    Ok(SimResult { points: results })
}

/// Runs an experiment without retaining CSV output.
pub fn run_experiment_quiet(cfg: &ExperimentConfig) -> Result<SimResult, SimError> {
    let mut sink = Vec::new();
    run_experiment(cfg, &mut sink)
}

fn write_header(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<(), SimError> {
    for (k, v) in cfg.echo() {
        writeln!(out, "# {k} = {v}")?;
    }
    writeln!(out, "point,trials,frame_errors,bit_errors,mean_iterations,fer,ber,ci95_half")?;
    Ok(())
}

fn write_row(row: &PointResult, out: &mut dyn Write) -> Result<(), SimError> {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        row.point,
        row.trials,
        row.frame_errors,
        row.bit_errors,
        row.mean_iterations,
        row.fer,
        row.ber,
        row.ci95_half
    )?;
    Ok(())
}

fn trial_rng(seed: u64, point_index: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (point_index as u64).wrapping_mul(0x9E3779B97F4A7C15));
    rng.set_stream(trial);
    rng
}

fn batch_size(done: u64) -> u64 {
    match done {
        0..=4_095 => 4_096,
        4_096..=65_535 => 16_384,
        _ => 65_536,
    }
}

fn run_plain_point(
    cfg: &ExperimentConfig,
    code: &BuiltCode,
    point_index: usize,
    point: f64,
) -> Result<PointTotals, SimError> {
    let spec = channel_spec_at(cfg, code, point)?;
    let mut totals = PointTotals::default();
    while totals.frame_errors < cfg.stop.min_frame_errors && totals.trials < cfg.stop.max_trials {
        let batch = batch_size(totals.trials).min(cfg.stop.max_trials - totals.trials);
        let outcomes: Vec<TrialOutcome> = (totals.trials..totals.trials + batch)
            .into_par_iter()
            .map_init(
                || SpaDecoder::<f64>::new(&code.graph),
                |decoder, trial| {
                    let mut rng = trial_rng(cfg.seed, point_index, trial);
                    run_trial(cfg, code, &spec, &[cfg.max_iter], decoder, &mut rng)
                },
            )
            .collect();
        for o in outcomes {
            totals.trials += 1;
            totals.bit_errors += o.errors_per_cap[0];
            totals.frame_errors += u64::from(o.errors_per_cap[0] > 0);
            totals.iterations += o.iterations;
        }
    }
    Ok(totals)
}

fn run_caps_point(
    cfg: &ExperimentConfig,
    code: &BuiltCode,
    snr_db: f64,
    caps: &[usize],
) -> Result<Vec<PointTotals>, SimError> {
    let spec = channel_spec_at(cfg, code, snr_db)?;
    let mut totals = vec![PointTotals::default(); caps.len()];
    loop {
        let done = totals[0].trials;
        let min_errors = totals.iter().map(|t| t.frame_errors).min().unwrap_or(0);
        if min_errors >= cfg.stop.min_frame_errors || done >= cfg.stop.max_trials {
            break;
        }
        let batch = batch_size(done).min(cfg.stop.max_trials - done);
        let outcomes: Vec<TrialOutcome> = (done..done + batch)
            .into_par_iter()
            .map_init(
                || SpaDecoder::<f64>::new(&code.graph),
                |decoder, trial| {
                    let mut rng = trial_rng(cfg.seed, 0, trial);
                    run_trial(cfg, code, &spec, caps, decoder, &mut rng)
                },
            )
            .collect();
        for o in outcomes {
            for (i, (&cap, t)) in caps.iter().zip(totals.iter_mut()).enumerate() {
                t.trials += 1;
                t.bit_errors += o.errors_per_cap[i];
                t.frame_errors += u64::from(o.errors_per_cap[i] > 0);
                t.iterations += o.exit_iter.min(cap) as u64;
            }
        }
    }
    Ok(totals)
}

fn channel_spec_at(
    cfg: &ExperimentConfig,
    code: &BuiltCode,
    point: f64,
) -> Result<ChannelSpec, SimError> {
    let kind = match (&cfg.channel, &cfg.sweep) {
        (ChannelChoice::Bec, Sweep::Erasure(_)) => ChannelKind::Bec { epsilon: point },
        (ChannelChoice::Bec, _) => {
            return Err(SimError::Config("BEC sweeps take erasure_probs".into()))
        }
        (ChannelChoice::Awgn, _) => ChannelKind::Awgn,
        (ChannelChoice::BlockFading { rayleigh_scale }, _) => {
            let fades = cfg
                .fades
                .or_else(|| code.layout.as_ref().map(|l| l.effective_fades()))
                .ok_or_else(|| {
                    SimError::Config("block fading needs `fades` or a diversity layout".into())
                })?;
            ChannelKind::BlockFading { fades, rayleigh_scale: *rayleigh_scale }
        }
        (ChannelChoice::FastFading { rayleigh_scale }, _) => {
            ChannelKind::FastFading { rayleigh_scale: *rayleigh_scale }
        }
    };
    let snr_db = match &cfg.sweep {
        Sweep::Erasure(_) => 0.0,
        Sweep::SnrDb(_) => point,
        Sweep::IterCaps { snr_db, .. } => *snr_db,
    };
    Ok(ChannelSpec { kind, snr_db })
}

fn run_trial(
    cfg: &ExperimentConfig,
    code: &BuiltCode,
    spec: &ChannelSpec,
    caps: &[usize],
    decoder: &mut SpaDecoder<f64>,
    rng: &mut ChaCha8Rng,
) -> TrialOutcome {
    if let ChannelKind::Bec { epsilon } = spec.kind {
        // Erasure trials peel directly: recovery depends only on the erased
        // positions, never on transmitted values.
        let transmitted = code.transmitted_positions();
        let mut erased: Vec<usize> =
            transmitted.into_iter().filter(|_| rng.random::<f64>() < epsilon).collect();
        erased.extend(code.puncture_mask.iter().copied());
        erased.sort_unstable();
        let outcome = bec_peel(&code.graph, &erased);
        let errors = code
            .scope_positions
            .iter()
            .filter(|v| outcome.residual.binary_search(v).is_ok())
            .count() as u64;
        return TrialOutcome {
            errors_per_cap: vec![errors; caps.len()],
            iterations: outcome.rounds as u64,
            exit_iter: outcome.rounds,
        };
    }

    // Gaussian channels: encode, fade, add noise, decode.
    let codeword = match cfg.transmission {
        Transmission::AllZero => vec![0u8; code.graph.n_var()],
        Transmission::RandomMessage => {
            let msg: Vec<u8> =
                (0..code.encoder.effective_k()).map(|_| rng.random_range(0..2u8)).collect();
            code.encoder.encode(&msg).expect("message length fixed by encoder")
        }
    };
    let transmitted_positions = code.transmitted_positions();
    let subword: Vec<u8> = transmitted_positions.iter().map(|&v| codeword[v]).collect();
    let output: ChannelOutput<f64> =
        transmit(&subword, spec, code.rate, rng).expect("channel spec validated per point");
    let sub_llrs = llr_init(&output, spec, code.rate, None).expect("record matches output");

    // Scatter back to full length; punctured positions stay erased.
    let mut llrs = crate::channel::LlrVector { values: vec![0.0f64; code.graph.n_var()] };
    for (&pos, &value) in transmitted_positions.iter().zip(&sub_llrs.values) {
        llrs.values[pos] = value;
    }

    let max_cap = *caps.last().expect("at least one cap");
    let mut errors_at_iter: Vec<u64> = Vec::with_capacity(max_cap);
    let scope_errors = |estimate: &[u8]| {
        code.scope_positions.iter().filter(|&&v| estimate[v] != codeword[v]).count() as u64
    };
    let result = decoder.decode_traced(&llrs, max_cap, |_, estimate, _| {
        errors_at_iter.push(scope_errors(estimate));
    });
    let exit_iter = if result.converged { result.iterations_used } else { usize::MAX };
    let errors_per_cap = caps
        .iter()
        .map(|&cap| {
            let idx = cap.min(errors_at_iter.len()).saturating_sub(1);
            errors_at_iter[idx]
        })
        .collect();
    TrialOutcome { errors_per_cap, iterations: result.iterations_used as u64, exit_iter }
}
