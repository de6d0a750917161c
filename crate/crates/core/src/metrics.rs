//! The seven evaluation measures.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// Predicted probability of being defective.
    pub proba: f64,
    pub defective: bool,
    pub hash: String,
}

/// Predictions for one test release, in test-set (chronological) order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionSet {
    pub entries: Vec<Prediction>,
}

impl PredictionSet {
    pub fn new(entries: Vec<Prediction>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|e| !(0.0..=1.0).contains(&e.proba)) {
            return Err(Error::InvalidInput(format!(
                "probability {} for {} is outside [0, 1]",
                bad.proba, bad.hash
            )));
        }
        Ok(Self { entries })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, bool)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .enumerate()
                .map(|(i, (proba, defective))| Prediction {
                    proba,
                    defective,
                    hash: i.to_string(),
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Maximize,
    Minimize,
}

/// The seven measures, in win-table column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    D2h,
    Auc,
    Ifa,
    Brier,
    Recall,
    Pf,
    Gm,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::D2h,
        Measure::Auc,
        Measure::Ifa,
        Measure::Brier,
        Measure::Recall,
        Measure::Pf,
        Measure::Gm,
    ];

    pub fn polarity(self) -> Polarity {
        match self {
            Measure::Auc | Measure::Recall | Measure::Gm => Polarity::Maximize,
            Measure::D2h | Measure::Ifa | Measure::Brier | Measure::Pf => Polarity::Minimize,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::D2h => "D2H",
            Measure::Auc => "AUC",
            Measure::Ifa => "IFA",
            Measure::Brier => "Brier",
            Measure::Recall => "Recall",
            Measure::Pf => "PF",
            Measure::Gm => "GM",
        }
    }

    /// Column header with its polarity mark, e.g. `D2H-`.
    pub fn header(self) -> String {
        let mark = match self.polarity() {
            Polarity::Maximize => '+',
            Polarity::Minimize => '-',
        };
        format!("{}{mark}", self.name())
    }

    pub fn value(self, report: &MetricReport) -> f64 {
        match self {
            Measure::D2h => report.d2h,
            Measure::Auc => report.auc,
            Measure::Ifa => report.ifa as f64,
            Measure::Brier => report.brier,
            Measure::Recall => report.recall,
            Measure::Pf => report.pf,
            Measure::Gm => report.gm,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown measure {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub recall: f64,
    pub pf: f64,
    pub auc: f64,
    pub gm: f64,
    pub d2h: f64,
    pub brier: f64,
    pub ifa: u64,
    /// The release has no defective commits: recall, AUC and IFA are 0 by
    /// convention.
    pub no_positives: bool,
    /// The release has no clean commits: PF and AUC are 0 by convention.
    pub no_negatives: bool,
}

impl MetricReport {
    pub fn is_degenerate(&self) -> bool {
        self.no_positives || self.no_negatives
    }
}

pub fn d2h(recall: f64, pf: f64) -> f64 {
    ((1.0 - recall).powi(2) + pf.powi(2)).sqrt() / std::f64::consts::SQRT_2
}

pub fn g_measure(recall: f64, pf: f64) -> f64 {
    let denom = recall + (1.0 - pf);
    if denom <= 0.0 {
        0.0
    } else {
        2.0 * recall * (1.0 - pf) / denom
    }
}

/// Probability that a random defective entry outranks a random clean one,
/// ties counting one half. Computed from midranks.
pub fn auc(entries: &[Prediction]) -> Option<f64> {
    let pos = entries.iter().filter(|e| e.defective).count();
    let neg = entries.len() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| entries[a].proba.total_cmp(&entries[b].proba));
    // Twice the rank sum of positives, kept integral.
    let mut twice_rank_sum: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && entries[order[j + 1]].proba == entries[order[i]].proba {
            j += 1;
        }
        // ranks i+1..=j+1, midrank * 2 = i + j + 2
        let twice_mid = (i + j + 2) as u128;
        let positives = order[i..=j]
            .iter()
            .filter(|&&k| entries[k].defective)
            .count() as u128;
        twice_rank_sum += twice_mid * positives;
        i = j + 1;
    }
    let (p, n) = (pos as u128, neg as u128);
    // U = R - p(p+1)/2 ; A = U / (p n)
    let twice_u = twice_rank_sum - p * (p + 1);
    Some(twice_u as f64 / (2 * p * n) as f64)
}

/// Clean entries ranked above the first defective one, sorting by descending
/// probability with ties kept in test-set order.
pub fn initial_false_alarms(entries: &[Prediction]) -> Option<u64> {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| entries[b].proba.total_cmp(&entries[a].proba));
    order
        .iter()
        .position(|&i| entries[i].defective)
        .map(|p| p as u64)
}

/// Score a prediction set. An entry is predicted defective when its
/// probability is at least `threshold`.
pub fn evaluate(preds: &PredictionSet, threshold: f64) -> Result<MetricReport> {
    if preds.is_empty() {
        return Err(Error::InvalidInput(
            "cannot evaluate an empty prediction set".into(),
        ));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0u64, 0u64, 0u64, 0u64);
    let mut squared = 0.0;
    for e in &preds.entries {
        let predicted = e.proba >= threshold;
        match (predicted, e.defective) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
        let y = if e.defective { 1.0 } else { 0.0 };
        squared += (y - e.proba) * (y - e.proba);
    }
    let no_positives = tp + fn_ == 0;
    let no_negatives = fp + tn == 0;
    let recall = if no_positives {
        0.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    let pf = if no_negatives {
        0.0
    } else {
        fp as f64 / (fp + tn) as f64
    };
    Ok(MetricReport {
        recall,
        pf,
        auc: auc(&preds.entries).unwrap_or(0.0),
        gm: g_measure(recall, pf),
        d2h: d2h(recall, pf),
        brier: squared / preds.len() as f64,
        ifa: initial_false_alarms(&preds.entries).unwrap_or(0),
        no_positives,
        no_negatives,
    })
}
