//! Genuine-tripartite-entanglement criteria and their reports.
//!
//! Every criterion reduces to a statistic compared against a threshold; the
//! state is reported as GME-detected only when the margin is strictly
//! positive.

mod closed_form;
mod correlation;
mod fisher;

use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::{Error, Result};

pub use closed_form::{closed_form_f, closed_form_g};
pub use correlation::{
    concurrence_bound, correlation_tensor, knorm_criterion, knorm_criterion_all, knorm_threshold,
    CorrelationTensor,
};
pub use fisher::{
    corollary1, corollary2, corollary2_with_signs, ghz_w_signs, lemma_bounds, theorem1_margin,
    theorem2_margin, Corollary2Mode, LemmaBounds, ReducedBounds,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionKind {
    Corollary1,
    Corollary2,
    #[serde(rename = "theorem1-custom")]
    Theorem1Custom,
    Theorem2,
    TensorKnorm,
    ConcurrenceBound,
}

impl CriterionKind {
    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::Corollary1 => "corollary1",
            CriterionKind::Corollary2 => "corollary2",
            CriterionKind::Theorem1Custom => "theorem1-custom",
            CriterionKind::Theorem2 => "theorem2",
            CriterionKind::TensorKnorm => "tensor-knorm",
            CriterionKind::ConcurrenceBound => "concurrence-bound",
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "GME-detected")]
    GmeDetected,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn is_detected(self) -> bool {
        self == Verdict::GmeDetected
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::GmeDetected => "GME-detected",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: CriterionKind,
    pub statistic: f64,
    pub threshold: f64,
    pub margin: f64,
    pub verdict: Verdict,
    /// Per-operator contributions (or other named intermediate values), in
    /// evaluation order.
    pub details: IndexMap<String, f64>,
}

impl CriterionReport {
    pub fn new(
        criterion: CriterionKind,
        statistic: f64,
        threshold: f64,
        details: IndexMap<String, f64>,
    ) -> Result<Self> {
        let margin = statistic - threshold;
        if !margin.is_finite() {
            return Err(Error::param(format!(
                "{criterion}: non-finite margin (statistic {statistic}, threshold {threshold})"
            )));
        }
        // ties are inconclusive: every criterion is a strict inequality
        let verdict = if margin > 0.0 {
            Verdict::GmeDetected
        } else {
            Verdict::Inconclusive
        };
        Ok(Self {
            criterion,
            statistic,
            threshold,
            margin,
            verdict,
            details,
        })
    }
}
