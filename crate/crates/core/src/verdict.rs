use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a numerical certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Verified,
    Refuted,
    /// Residual above tolerance but not cleanly separated from quadrature error.
    Inconclusive,
    /// The convergence screen rejected the instance, so nothing was computed.
    NotApplicable,
}

impl Verdict {
    pub fn is_verified(self) -> bool {
        self == Verdict::Verified
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Verified => "Verified",
            Verdict::Refuted => "Refuted",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::NotApplicable => "NotApplicable",
        };
        f.write_str(s)
    }
}

/// Verified at `gap <= tol`; Refuted only when the gap exceeds ten tolerances
/// and the error estimate sits an order of magnitude below the gap.
pub fn classify(gap: f64, tol: f64, err: f64) -> Verdict {
    if gap <= tol {
        Verdict::Verified
    } else if gap > 10.0 * tol && err * 10.0 <= gap {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    }
}
