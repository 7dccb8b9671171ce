//! Tester reports, round records and witnesses.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::group::Element;
use crate::rep::{values_equal, ScalarFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

/// A counterexample found by a one-sided rejection. Every variant can be
/// rechecked against the raw function with [`Witness::holds_for`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `f(x) ≠ f(y x y⁻¹)`.
    NotConjugationInvariant {
        x: Element,
        conjugator: Element,
        value: Complex64,
        conjugate_value: Complex64,
    },
    /// `f(y₁ x y₁⁻¹) ≠ f(y₂ x y₂⁻¹)`.
    ConjugatesDisagree {
        x: Element,
        first_conjugator: Element,
        second_conjugator: Element,
        first_value: Complex64,
        second_value: Complex64,
    },
    /// Sampled `x, y` with points `a ~ x`, `b ~ y`, `c ~ xy` (the elements
    /// actually queried, conjugates of the sampled ones under self-correction)
    /// such that `f(a)·f(b) ≠ f(c)`. Either the values break multiplicativity
    /// of a class function, or `f` is not constant on one of the classes.
    NotHomomorphism {
        x: Element,
        y: Element,
        x_point: Element,
        y_point: Element,
        product_point: Element,
        x_value: Complex64,
        y_value: Complex64,
        product_value: Complex64,
    },
}

impl Witness {
    /// Recomputes the violated relation directly from the table.
    pub fn holds_for(&self, f: &ScalarFunction, tol: f64) -> bool {
        let g = f.group();
        let in_range = |e: &Element| e.index() < g.order();
        match *self {
            Witness::NotConjugationInvariant {
                x,
                conjugator,
                value,
                conjugate_value,
            } => {
                if !in_range(&x) || !in_range(&conjugator) {
                    return false;
                }
                let c = g.conjugate(x, conjugator);
                f.at(x) == value && f.at(c) == conjugate_value && !values_equal(value, conjugate_value, tol)
            }
            Witness::ConjugatesDisagree {
                x,
                first_conjugator,
                second_conjugator,
                first_value,
                second_value,
            } => {
                if ![x, first_conjugator, second_conjugator].iter().all(in_range) {
                    return false;
                }
                let a = g.conjugate(x, first_conjugator);
                let b = g.conjugate(x, second_conjugator);
                f.at(a) == first_value && f.at(b) == second_value && !values_equal(first_value, second_value, tol)
            }
            Witness::NotHomomorphism {
                x,
                y,
                x_point,
                y_point,
                product_point,
                x_value,
                y_value,
                product_value,
            } => {
                if ![x, y, x_point, y_point, product_point].iter().all(in_range) {
                    return false;
                }
                let xy = g.mul(x, y);
                g.class_of(x_point) == g.class_of(x)
                    && g.class_of(y_point) == g.class_of(y)
                    && g.class_of(product_point) == g.class_of(xy)
                    && f.at(x_point) == x_value
                    && f.at(y_point) == y_value
                    && f.at(product_point) == product_value
                    && !values_equal(x_value * y_value, product_value, tol)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Conjugacy,
    Homomorphism,
    Norm,
    Weyl,
    Net,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundOutcome {
    Continue,
    Accept,
    Reject,
}

/// One round of a tester: the sampled elements, the values compared or
/// estimated, and the threshold they were held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub stage: Stage,
    /// 1-based within the stage.
    pub round: u64,
    pub elements: Vec<Element>,
    pub values: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub outcome: RoundOutcome,
}

/// Keeps the first `limit` rounds of every stage plus the last round of
/// each stage.
#[derive(Debug, Clone)]
pub struct Trace {
    limit: usize,
    kept: Vec<RoundRecord>,
    stage: Option<Stage>,
    kept_in_stage: usize,
    last: Option<RoundRecord>,
}

impl Trace {
    pub fn new(limit: usize) -> Self {
        Trace {
            limit,
            kept: Vec::new(),
            stage: None,
            kept_in_stage: 0,
            last: None,
        }
    }

    /// Whether a record of `stage` pushed now would be kept among the first
    /// `limit`; callers may skip building records that would not, as long as
    /// the final round of the stage is always pushed.
    pub fn wants(&self, stage: Stage) -> bool {
        self.stage != Some(stage) || self.kept_in_stage < self.limit
    }

    pub fn push(&mut self, record: RoundRecord) {
        if self.stage != Some(record.stage) {
            self.kept.extend(self.last.take());
            self.stage = Some(record.stage);
            self.kept_in_stage = 0;
        }
        if self.kept_in_stage < self.limit {
            self.kept.push(record);
            self.kept_in_stage += 1;
        } else {
            self.last = Some(record);
        }
    }

    pub fn into_records(mut self) -> Vec<RoundRecord> {
        self.kept.extend(self.last);
        self.kept
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TesterReport {
    pub tool_version: String,
    pub tester: String,
    pub epsilon: f64,
    pub seed: u64,
    pub verdict: Verdict,
    pub queries: u64,
    pub rounds: Vec<RoundRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

impl TesterReport {
    pub(crate) fn new(
        tester: &str,
        epsilon: f64,
        seed: u64,
        verdict: Verdict,
        queries: u64,
        trace: Trace,
        witness: Option<Witness>,
    ) -> Self {
        TesterReport {
            tool_version: crate::TOOL_VERSION.to_string(),
            tester: tester.to_string(),
            epsilon,
            seed,
            verdict,
            queries,
            rounds: trace.into_records(),
            witness,
            certificate: None,
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict.is_accept()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::Builtin;

    fn record(round: u64) -> RoundRecord {
        RoundRecord {
            stage: Stage::Conjugacy,
            round,
            elements: vec![],
            values: vec![],
            statistic: None,
            threshold: None,
            outcome: RoundOutcome::Continue,
        }
    }

    #[test]
    fn trace_keeps_prefix_and_last() {
        let mut t = Trace::new(3);
        for r in 1..=10 {
            t.push(record(r));
        }
        let rounds: Vec<u64> = t.into_records().iter().map(|r| r.round).collect();
        assert_eq!(rounds, vec![1, 2, 3, 10]);
        let mut t = Trace::new(1);
        t.push(record(1));
        t.push(record(2));
        let mut other = record(1);
        other.stage = Stage::Homomorphism;
        t.push(other);
        let rounds: Vec<(Stage, u64)> = t.into_records().iter().map(|r| (r.stage, r.round)).collect();
        assert_eq!(rounds, vec![(Stage::Conjugacy, 1), (Stage::Conjugacy, 2), (Stage::Homomorphism, 1)]);
    }

    #[test]
    fn witnesses_recheck_against_the_table() {
        let g = Arc::new(Builtin::Symmetric(3).build().unwrap());
        // transposition class of S3 in lexicographic order is {1, 2, 5}
        let mut values = vec![Complex64::new(0.0, 0.0); 6];
        values[1] = Complex64::new(1.0, 0.0);
        let f = ScalarFunction::new(g.clone(), values).unwrap();
        let x = g.element(1).unwrap();
        let y = g.elements().find(|&y| g.conjugate(x, y) != x).unwrap();
        let w = Witness::NotConjugationInvariant {
            x,
            conjugator: y,
            value: f.at(x),
            conjugate_value: f.at(g.conjugate(x, y)),
        };
        assert!(w.holds_for(&f, 0.0));
        let fake = Witness::NotConjugationInvariant {
            x,
            conjugator: g.identity(),
            value: f.at(x),
            conjugate_value: f.at(x),
        };
        assert!(!fake.holds_for(&f, 0.0));
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
