//! Evaluation machinery: error metrics, distribution divergence, the
//! risk/crash correlation apparatus and the behavioral-cloning benchmark.

pub mod special;
pub mod sweep;

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::env::{step_kinematics, Action, ConflictEpisode, EnvState, DT};
use crate::fmath::{abs, ln, sqrt};
use crate::nn::{AdamState, Mlp, OutputActivation};

pub use special::{beta_inc, gamma_p, student_t_two_sided};
pub use sweep::{threshold_sweep, KindFilter, RiskPoint, SegmentCrashes, SweepEntry, SweepResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input sequence")]
    Empty,
    #[error("histogram needs at least 2 bins")]
    TooFewBins,
    #[error("need at least 3 paired samples")]
    TooShort,
    #[error("zero variance input")]
    ZeroVariance,
}

/// Root mean squared componentwise error.
pub fn rmse(estimates: &[f64], observed: &[f64]) -> Result<f64, StatsError> {
    if estimates.len() != observed.len() {
        return Err(StatsError::LengthMismatch(estimates.len(), observed.len()));
    }
    if estimates.is_empty() {
        return Err(StatsError::Empty);
    }
    let sum: f64 = estimates
        .iter()
        .zip(observed)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sqrt(sum / estimates.len() as f64))
}

fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; bins];
    let span = hi - lo;
    for &x in samples {
        let mut idx = ((x - lo) / span * bins as f64) as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        counts[idx] += 1.0;
    }
    let total = samples.len() as f64;
    for c in &mut counts {
        *c /= total;
    }
    counts
}

/// Jensen–Shannon divergence between the empirical distributions of two
/// sample sets, natural-log convention (so the maximum is ln 2).
///
/// Both sets are binned over their pooled min–max range; empty bins
/// contribute nothing (0·log 0 = 0). A fully degenerate range (every value
/// in both sets equal) is zero divergence.
pub fn jsd(p_samples: &[f64], q_samples: &[f64], bins: usize) -> Result<f64, StatsError> {
    if p_samples.is_empty() || q_samples.is_empty() {
        return Err(StatsError::Empty);
    }
    if bins < 2 {
        return Err(StatsError::TooFewBins);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in p_samples.iter().chain(q_samples) {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if lo == hi {
        return Ok(0.0);
    }
    let p = histogram(p_samples, lo, hi, bins);
    let q = histogram(q_samples, lo, hi, bins);
    // Separate accumulators keep the result exactly symmetric in (p, q).
    let mut sum_p = 0.0;
    let mut sum_q = 0.0;
    for (&pi, &qi) in p.iter().zip(&q) {
        let m = 0.5 * (pi + qi);
        if pi > 0.0 {
            sum_p += pi * ln(pi / m);
        }
        if qi > 0.0 {
            sum_q += qi * ln(qi / m);
        }
    }
    Ok(0.5 * (sum_p + sum_q))
}

/// Per-road-segment aggregation used by the correlation validation.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteAggregate {
    pub segment_id: u64,
    pub risk_count: u64,
    pub gps_count: u64,
    pub crash_count: u64,
    pub aadt: f64,
}

/// Risky-point fraction of a segment; `None` (with a warning) when the
/// segment has no GPS points at all.
pub fn risk_rate(agg: &SiteAggregate) -> Option<f64> {
    if agg.gps_count == 0 {
        log::warn!("segment {} has no GPS points; excluded", agg.segment_id);
        return None;
    }
    Some(agg.risk_count as f64 / agg.gps_count as f64)
}

/// Crashes per unit of annual average daily traffic; `None` (with a
/// warning) for non-positive AADT.
pub fn crash_rate(agg: &SiteAggregate) -> Option<f64> {
    if agg.aadt <= 0.0 {
        log::warn!("segment {} has AADT {}; excluded", agg.segment_id, agg.aadt);
        return None;
    }
    Some(agg.crash_count as f64 / agg.aadt)
}

/// Sample correlation with its two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    pub p_value: f64,
}

/// Pearson correlation coefficient plus the two-sided p-value from the
/// exact t-distribution with n − 2 degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooShort);
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let r = (cov / sqrt(vx * vy)).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let p_value = if abs(r) >= 1.0 {
        0.0
    } else {
        student_t_two_sided(r * sqrt(df / (1.0 - r * r)), df)
    };
    Ok(Correlation { r, p_value })
}

/// The six motion variables a model is scored on.
pub const METRIC_VARIABLES: [&str; 6] = ["d_lon", "v_lon", "a_lon", "d_lat", "v_lat", "a_lat"];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VariableMetrics {
    pub rmse: f64,
    pub jsd: f64,
}

/// RMSE and JSD for distances, speeds and accelerations on both axes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricReport {
    pub per_variable: [VariableMetrics; 6],
}

impl MetricReport {
    pub fn get(&self, name: &str) -> Option<VariableMetrics> {
        METRIC_VARIABLES
            .iter()
            .position(|v| *v == name)
            .map(|i| self.per_variable[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, VariableMetrics)> + '_ {
        METRIC_VARIABLES
            .iter()
            .copied()
            .zip(self.per_variable.iter().copied())
    }
}

/// One-step teacher-forced evaluation: at every observed state the policy
/// proposes an action, the kinematic model predicts the next state, and
/// predictions are scored against the observed next state (accelerations
/// against the driver's recorded ones).
pub fn evaluate_one_step<F>(
    mut policy: F,
    test: &[ConflictEpisode],
    bins: usize,
) -> Result<MetricReport, StatsError>
where
    F: FnMut(&EnvState) -> Action,
{
    let mut predicted: [Vec<f64>; 6] = Default::default();
    let mut observed: [Vec<f64>; 6] = Default::default();
    for conflict in test {
        let n = conflict.states.len();
        for t in 0..n.saturating_sub(1) {
            let state = conflict.states[t];
            let action = policy(&state);
            let sim = step_kinematics(&state, &action, DT);
            let next = conflict.states[t + 1];
            let human = conflict.human_accel[t];
            let pred = [sim.d_lon, sim.v_lon, action.a_lon, sim.d_lat, sim.v_lat, action.a_lat];
            let obs = [next.d_lon, next.v_lon, human[0], next.d_lat, next.v_lat, human[1]];
            for v in 0..6 {
                predicted[v].push(pred[v]);
                observed[v].push(obs[v]);
            }
        }
    }
    if predicted[0].is_empty() {
        return Err(StatsError::Empty);
    }
    let mut report = MetricReport::default();
    for v in 0..6 {
        report.per_variable[v] = VariableMetrics {
            rmse: rmse(&predicted[v], &observed[v])?,
            jsd: jsd(&predicted[v], &observed[v], bins)?,
        };
    }
    Ok(report)
}

/// Supervised behavioral-cloning benchmark: a dense network regressing the
/// observed state onto the driver's recorded accelerations with
/// mean-squared loss and Adam.
pub struct BenchmarkConfig {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            hidden: vec![256, 256],
            learning_rate: 1e-3,
            batch_size: 256,
            epochs: 60,
        }
    }
}

/// Trains the benchmark and returns it with the per-epoch training loss.
pub fn nn_benchmark_train(
    conflicts: &[ConflictEpisode],
    config: &BenchmarkConfig,
    seed: u64,
) -> Result<(Mlp, Vec<f64>), StatsError> {
    let mut states = Vec::new();
    let mut labels = Vec::new();
    for c in conflicts {
        for t in 0..c.states.len().saturating_sub(1) {
            states.push(c.states[t].to_array());
            labels.push(c.human_accel[t]);
        }
    }
    if states.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut sizes = vec![6];
    sizes.extend_from_slice(&config.hidden);
    sizes.push(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Mlp::new(&sizes, OutputActivation::Identity, &mut rng);
    let mut opt = AdamState::new(&net, config.learning_rate);

    let n = states.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut losses = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0;
        for chunk in order.chunks(config.batch_size) {
            let b = chunk.len();
            let mut x = Vec::with_capacity(b * 6);
            let mut y = Vec::with_capacity(b * 2);
            for &i in chunk {
                x.extend_from_slice(&states[i]);
                y.extend_from_slice(&labels[i]);
            }
            let cache = net.forward_batch_cached(&x, b);
            let out = cache.output();
            let inv = 1.0 / (b * 2) as f64;
            let mut loss = 0.0;
            let upstream: Vec<f64> = out
                .iter()
                .zip(&y)
                .map(|(&o, &t)| {
                    let e = o - t;
                    loss += e * e;
                    2.0 * e * inv
                })
                .collect();
            let (grads, _) = net.backward(&cache, &upstream, true, false);
            let grads = grads.expect("param grads requested");
            opt.apply(&mut net, &grads);
            epoch_loss += loss * inv;
            batches += 1;
        }
        losses.push(epoch_loss / batches as f64);
    }
    Ok((net, losses))
}

/// Deterministic event-level train/test split: shuffle conflict indices
/// with the seed, put the first `train_fraction` in the training set.
pub fn split_conflicts(
    conflicts: &[ConflictEpisode],
    train_fraction: f64,
    seed: u64,
) -> (Vec<ConflictEpisode>, Vec<ConflictEpisode>) {
    assert!((0.0..=1.0).contains(&train_fraction));
    let mut order: Vec<usize> = (0..conflicts.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let cut = ((conflicts.len() as f64) * train_fraction + 0.5) as usize;
    let train = order[..cut.min(order.len())]
        .iter()
        .map(|&i| conflicts[i].clone())
        .collect();
    let test = order[cut.min(order.len())..]
        .iter()
        .map(|&i| conflicts[i].clone())
        .collect();
    (train, test)
}
