//! Machine-readable verification reports and fixed-precision formatting.

use serde::Serialize;

/// Significant digits used in every report.
pub const REPORT_DIGITS: usize = 12;

/// Rounds `x` to `digits` significant decimal digits (via the decimal
/// representation, so equal inputs always print identically).
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

/// `x` in scientific notation with [`REPORT_DIGITS`] significant digits.
pub fn fmt_report(x: f64) -> String {
    format!("{:.*e}", REPORT_DIGITS - 1, x)
}

/// `x` in scientific notation with 17 significant digits (round-trips f64).
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// One named check with its measured quantity and the tolerance it was held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed,
            measured: round_sig(measured, REPORT_DIGITS),
            tolerance: round_sig(tolerance, REPORT_DIGITS),
            detail: None,
        }
    }

    /// A check that passes when `measured ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured <= tolerance, measured, tolerance)
    }

    /// A check that passes when `measured ≥ −tolerance` (a signed slack).
    pub fn slack(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured >= -tolerance, measured, tolerance)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_decimal() {
        assert_eq!(round_sig(0.1 + 0.2, 12), 0.3);
        assert_eq!(round_sig(1.234_567_890_123_456e-7, 3), 1.23e-7);
        assert_eq!(round_sig(0.0, 12), 0.0);
        assert_eq!(fmt_report(1.0), "1.00000000000e0");
    }

    #[test]
    fn report_aggregation() {
        let mut r = VerificationReport::new();
        r.push(Check::at_most("small", 1e-14, 1e-12));
        r.push(Check::slack("slack", -1.0, 1e-8).with_detail("z = 0"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        let json = r.to_json();
        assert!(json.contains("\"detail\": \"z = 0\""));
        assert!(!json.contains("\"detail\": null"));
    }
}
