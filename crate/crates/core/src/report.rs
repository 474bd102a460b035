//! Empirical bound reports.
//!
//! Every inequality taken from the analytic arguments is checked as data,
//! never asserted: we compute the left-hand side, the envelope (right-hand
//! side with implied constant 1) and their ratio. Exact finite identities
//! reuse the same record with `lhs` = observed deviation and `envelope` =
//! tolerance, so `passes()` means the identity held.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// Which inequality or identity this report is for.
    pub label: String,
    /// Computed left-hand side (or deviation, for identity checks).
    pub lhs: f64,
    /// Envelope with implied constant 1 (or tolerance, for identity checks).
    pub envelope: f64,
    /// `lhs / envelope`.
    pub ratio: f64,
    /// Named scalar parameters of the run, ordered by key for determinism.
    pub params: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(label: impl Into<String>, lhs: f64, envelope: f64) -> Self {
        let ratio = if envelope == 0.0 {
            if lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            lhs / envelope
        };
        BoundReport {
            label: label.into(),
            lhs,
            envelope,
            ratio,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// For identity-style reports (`lhs` = deviation, `envelope` = tolerance).
    pub fn passes(&self) -> bool {
        self.lhs <= self.envelope
    }

    pub fn csv_header() -> &'static str {
        "label,lhs,envelope,ratio,params"
    }

    /// One CSV row; `params` is rendered as `k=v` pairs joined by `;` so the
    /// row stays a single field regardless of how many parameters there are.
    pub fn csv_row(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{}",
            self.label, self.lhs, self.envelope, self.ratio, params
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_and_pass() {
        let r = BoundReport::new("t", 1.0, 4.0);
        assert_eq!(r.ratio, 0.25);
        assert!(r.passes());
        let r = BoundReport::new("t", 1.0, 0.5);
        assert!(!r.passes());
    }

    #[test]
    fn zero_envelope() {
        assert_eq!(BoundReport::new("t", 0.0, 0.0).ratio, 0.0);
        assert!(BoundReport::new("t", 1.0, 0.0).ratio.is_infinite());
    }

    #[test]
    fn csv_row_orders_params() {
        let r = BoundReport::new("t", 1.0, 2.0)
            .with_param("x", 10.0)
            .with_param("h", 3.0);
        assert_eq!(r.csv_row(), "t,1,2,0.5,h=3;x=10");
    }
}
