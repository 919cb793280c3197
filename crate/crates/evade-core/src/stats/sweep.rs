//! Threshold sweep: correlate per-segment risk rates against crash rates
//! over a grid of 2D-TTC thresholds and pick the best-correlating one.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::ssm::{classify_risk, ConflictKind, TtcResult};

use super::{crash_rate, pearson, risk_rate, Correlation, SiteAggregate, StatsError};

/// One GPS observation reduced to its segment assignment and TTC outcome.
/// Segment ids come from an upstream spatial join.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskPoint {
    pub segment_id: u64,
    pub ttc: TtcResult,
}

/// Per-segment crash tallies by collision type plus exposure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentCrashes {
    pub segment_id: u64,
    pub aadt: f64,
    pub rear_end: u64,
    pub sideswipe: u64,
}

/// Which risk/crash combination the sweep correlates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindFilter {
    Rear,
    Side,
    All,
}

impl KindFilter {
    pub fn label(&self) -> &'static str {
        match self {
            KindFilter::Rear => "rear",
            KindFilter::Side => "side",
            KindFilter::All => "all",
        }
    }

    fn accepts(&self, kind: ConflictKind) -> bool {
        match self {
            KindFilter::Rear => kind == ConflictKind::RearEnd,
            KindFilter::Side => kind == ConflictKind::Sideswipe,
            KindFilter::All => kind != ConflictKind::None,
        }
    }

    fn crashes(&self, site: &SegmentCrashes) -> u64 {
        match self {
            KindFilter::Rear => site.rear_end,
            KindFilter::Side => site.sideswipe,
            KindFilter::All => site.rear_end + site.sideswipe,
        }
    }
}

/// Result for one threshold; `correlation` is `None` when the correlation
/// is undefined there (no risky points anywhere, or degenerate variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEntry {
    pub threshold: f64,
    pub correlation: Option<Correlation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    /// Threshold with the highest correlation (first one on ties) and its
    /// correlation; `None` when every entry was degenerate.
    pub best: Option<(f64, Correlation)>,
}

/// Runs the sweep over `thresholds` (seconds). For each threshold every
/// point is scored as risky when its 2D-TTC is below the threshold and the
/// conflict kind passes the filter; counts aggregate per segment and the
/// risk rates are correlated against the matching crash rates.
pub fn threshold_sweep(
    points: &[RiskPoint],
    sites: &[SegmentCrashes],
    filter: KindFilter,
    thresholds: &[f64],
) -> SweepResult {
    // Stable segment order, independent of input order.
    let mut site_index: BTreeMap<u64, &SegmentCrashes> = BTreeMap::new();
    for s in sites {
        site_index.insert(s.segment_id, s);
    }
    let mut gps_counts: BTreeMap<u64, u64> = BTreeMap::new();
    for p in points {
        *gps_counts.entry(p.segment_id).or_insert(0) += 1;
    }

    let mut entries = Vec::with_capacity(thresholds.len());
    let mut best: Option<(f64, Correlation)> = None;
    for &threshold in thresholds {
        let mut risk_counts: BTreeMap<u64, u64> = BTreeMap::new();
        for p in points {
            if filter.accepts(p.ttc.conflict_kind) && classify_risk(&p.ttc, threshold) {
                *risk_counts.entry(p.segment_id).or_insert(0) += 1;
            }
        }
        let mut risk_rates = Vec::new();
        let mut crash_rates = Vec::new();
        for (&segment_id, site) in &site_index {
            let gps_count = gps_counts.get(&segment_id).copied().unwrap_or(0);
            let agg = SiteAggregate {
                segment_id,
                risk_count: risk_counts.get(&segment_id).copied().unwrap_or(0),
                gps_count,
                crash_count: filter.crashes(site),
                aadt: site.aadt,
            };
            if let (Some(rr), Some(cr)) = (risk_rate(&agg), crash_rate(&agg)) {
                risk_rates.push(rr);
                crash_rates.push(cr);
            }
        }
        let correlation = match pearson(&risk_rates, &crash_rates) {
            Ok(c) => Some(c),
            Err(StatsError::ZeroVariance) | Err(StatsError::TooShort) => None,
            Err(e) => {
                log::warn!("sweep at {threshold}: {e}");
                None
            }
        };
        if let Some(c) = correlation {
            let better = match best {
                None => true,
                Some((_, b)) => c.r > b.r,
            };
            if better {
                best = Some((threshold, c));
            }
        }
        entries.push(SweepEntry {
            threshold,
            correlation,
        });
    }
    SweepResult { entries, best }
}

/// Inclusive 0.1 s-style grid builder, robust to float drift at the end.
pub fn threshold_grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && max >= min);
    let n = ((max - min) / step + 0.5) as usize;
    (0..=n).map(|k| min + k as f64 * step).collect()
}
