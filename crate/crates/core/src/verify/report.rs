//! Structured pass/fail records.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A gap too small to call an order and too large to call a tie.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// What an item asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemKind {
    /// Exact or tolerance check with no ordering claim.
    Check,
    /// `upper - lower` must exceed the order gap.
    Strict,
    /// `|upper - lower|` must stay below the tie threshold.
    Tie,
}

impl ItemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ItemKind::Check => "check",
            ItemKind::Strict => "strict",
            ItemKind::Tie => "tie",
        }
    }
}

/// Thresholds for comparing two radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub tie: f64,
    pub order_gap: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tie: tolerances::TIE,
            order_gap: tolerances::ORDER_GAP,
        }
    }
}

impl Thresholds {
    /// Judges `upper - lower` against the expected relation.
    pub fn judge(&self, lower: f64, upper: f64, expect_tie: bool) -> (ItemKind, Verdict, f64) {
        let gap = upper - lower;
        if expect_tie {
            (ItemKind::Tie, Verdict::from_bool(gap.abs() <= self.tie), gap)
        } else if gap > self.order_gap {
            (ItemKind::Strict, Verdict::Pass, gap)
        } else if gap <= self.tie {
            (ItemKind::Strict, Verdict::Fail, gap)
        } else {
            (ItemKind::Strict, Verdict::Inconclusive, gap)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportItem {
    pub label: String,
    pub kind: ItemKind,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl ReportItem {
    pub fn check(label: impl Into<String>, ok: bool) -> Self {
        ReportItem {
            label: label.into(),
            kind: ItemKind::Check,
            verdict: Verdict::from_bool(ok),
            margin: None,
            values: BTreeMap::new(),
            note: String::new(),
        }
    }

    /// Compares two radii; the gap becomes the margin.
    pub fn compare(
        label: impl Into<String>,
        thresholds: &Thresholds,
        lower: f64,
        upper: f64,
        expect_tie: bool,
    ) -> Self {
        let (kind, verdict, gap) = thresholds.judge(lower, upper, expect_tie);
        ReportItem {
            label: label.into(),
            kind,
            verdict,
            margin: Some(gap),
            values: BTreeMap::new(),
            note: String::new(),
        }
        .with("lower", lower)
        .with("upper", upper)
    }

    /// Passes when `|a - b| <= tol`; the margin is `tol - |a - b|`.
    pub fn agreement(label: impl Into<String>, a: f64, b: f64, tol: f64) -> Self {
        let diff = (a - b).abs();
        let mut item = ReportItem::check(label, diff <= tol).with("difference", diff);
        item.margin = Some(tol - diff);
        item
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if self.note.is_empty() {
            self.note = note;
        } else {
            self.note = format!("{}; {}", self.note, note);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Summary of the numeric margins across a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Margins {
    pub tie_threshold: f64,
    pub order_gap: f64,
    /// Smallest gap among strict comparisons.
    pub min_strict_gap: Option<f64>,
    /// Largest absolute gap among predicted ties.
    pub max_tie_gap: Option<f64>,
    pub failed_items: usize,
    pub inconclusive_items: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: BTreeMap<String, String>,
    pub items: Vec<ReportItem>,
    pub verdict: Verdict,
    pub margins: Margins,
    /// Kept out of the serialized form so repeated runs give identical bytes.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>, thresholds: &Thresholds) -> Self {
        VerificationReport {
            claim: claim.into(),
            params: BTreeMap::new(),
            items: Vec::new(),
            verdict: Verdict::Pass,
            margins: Margins {
                tie_threshold: thresholds.tie,
                order_gap: thresholds.order_gap,
                min_strict_gap: None,
                max_tie_gap: None,
                failed_items: 0,
                inconclusive_items: 0,
            },
            elapsed: Duration::ZERO,
        }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.insert(name.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, item: ReportItem) {
        self.items.push(item);
    }

    /// Moves the items of `other` in, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut item in other.items {
            item.label = format!("{prefix}: {}", item.label);
            self.items.push(item);
        }
    }

    /// Recomputes the overall verdict and the margin summary.
    pub fn finish(mut self, elapsed: Duration) -> Self {
        let mut m = self.margins.clone();
        m.failed_items = self.items.iter().filter(|i| i.verdict == Verdict::Fail).count();
        m.inconclusive_items = self
            .items
            .iter()
            .filter(|i| i.verdict == Verdict::Inconclusive)
            .count();
        m.min_strict_gap = self
            .items
            .iter()
            .filter(|i| i.kind == ItemKind::Strict)
            .filter_map(|i| i.margin)
            .reduce(f64::min);
        m.max_tie_gap = self
            .items
            .iter()
            .filter(|i| i.kind == ItemKind::Tie)
            .filter_map(|i| i.margin.map(f64::abs))
            .reduce(f64::max);
        self.verdict = if m.failed_items > 0 {
            Verdict::Fail
        } else if m.inconclusive_items > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        self.margins = m;
        self.elapsed = elapsed;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Labels of the items that did not pass.
    pub fn failures(&self) -> Vec<String> {
        self.items
            .iter()
            .filter(|i| !i.passed())
            .map(|i| match &i.note {
                n if n.is_empty() => format!("{} [{}]", i.label, i.verdict.as_str()),
                n => format!("{} [{}]: {}", i.label, i.verdict.as_str(), n),
            })
            .collect()
    }

    /// One flat row per item.
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        self.items
            .iter()
            .map(|i| CsvRow {
                claim: self.claim.clone(),
                label: i.label.clone(),
                kind: i.kind.as_str(),
                verdict: i.verdict.as_str(),
                margin: i.margin,
                values: i
                    .values
                    .iter()
                    .map(|(k, v)| format!("{k}={v:e}"))
                    .collect::<Vec<_>>()
                    .join(";"),
                note: i.note.clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub claim: String,
    pub label: String,
    pub kind: &'static str,
    pub verdict: &'static str,
    pub margin: Option<f64>,
    pub values: String,
    pub note: String,
}
