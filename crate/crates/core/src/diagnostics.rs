//! Consecutive-ratio diagnostics for sequences expected to behave like `c * r^k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One consecutive ratio `value[k] / value[k-1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStep {
    pub index: i64,
    pub ratio: f64,
    /// `|ratio - target_ratio|`.
    pub deviation: f64,
}

/// Ratios, deviations and the normalization track `value / (prefactor * ratio^index)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDiagnostic {
    pub points: Vec<(i64, f64)>,
    pub target_ratio: f64,
    pub target_prefactor: f64,
    /// Only between consecutive nonzero values of equal sign.
    pub steps: Vec<RatioStep>,
    pub normalized: Vec<(i64, f64)>,
    /// Set when a sign change or zero split the sequence.
    pub sign_change: bool,
}

impl RatioDiagnostic {
    pub fn last_step(&self) -> Option<&RatioStep> {
        self.steps.last()
    }

    /// Deviations of the last `k` steps never increase.
    pub fn deviation_non_increasing(&self, k: usize) -> bool {
        let tail = &self.steps[self.steps.len().saturating_sub(k)..];
        tail.windows(2).all(|w| w[1].deviation <= w[0].deviation)
    }

    /// Values strictly increase along the sequence.
    pub fn strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 > w[0].1)
    }
}

pub fn ratio_diagnostic(seq: &[(i64, f64)], target_ratio: f64, target_prefactor: f64) -> Result<RatioDiagnostic> {
    let positive = seq.iter().filter(|p| p.1 > 0.0).count();
    let negative = seq.iter().filter(|p| p.1 < 0.0).count();
    let best = positive.max(negative);
    if best < 3 {
        return Err(Error::ShortSequence { need: 3, got: best });
    }
    let mut steps = Vec::new();
    let mut sign_change = false;
    for w in seq.windows(2) {
        let (prev, cur) = (w[0].1, w[1].1);
        if prev == 0.0 || cur == 0.0 || prev.signum() != cur.signum() {
            sign_change = true;
            continue;
        }
        let ratio = cur / prev;
        steps.push(RatioStep {
            index: w[1].0,
            ratio,
            deviation: (ratio - target_ratio).abs(),
        });
    }
    let normalized = seq
        .iter()
        .map(|&(k, v)| (k, v / (target_prefactor * target_ratio.powi(k as i32))))
        .collect();
    Ok(RatioDiagnostic {
        points: seq.to_vec(),
        target_ratio,
        target_prefactor,
        steps,
        normalized,
        sign_change,
    })
}
