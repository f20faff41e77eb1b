use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::VerdictError;
use crate::solver::MAX_ASSUMPTION_COST;

/// Five-level severity, best first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeverityLabel {
    Safe,
    LowSeverity,
    MediumSeverity,
    HighSeverity,
    Critical,
}

impl SeverityLabel {
    pub const ALL: [SeverityLabel; 5] = [
        SeverityLabel::Safe,
        SeverityLabel::LowSeverity,
        SeverityLabel::MediumSeverity,
        SeverityLabel::HighSeverity,
        SeverityLabel::Critical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeverityLabel::Safe => "SAFE",
            SeverityLabel::LowSeverity => "LOW_SEVERITY",
            SeverityLabel::MediumSeverity => "MEDIUM_SEVERITY",
            SeverityLabel::HighSeverity => "HIGH_SEVERITY",
            SeverityLabel::Critical => "CRITICAL",
        }
    }
}

impl fmt::Display for SeverityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeverityLabel {
    type Err = String;

    /// Accepts `HIGH_SEVERITY`, `high-severity` and `high`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        SeverityLabel::ALL
            .into_iter()
            .find(|l| {
                l.as_str() == norm || l.as_str().strip_suffix("_SEVERITY") == Some(norm.as_str())
            })
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

/// Thresholds of the trust/distrust plane. Checked in order:
///
/// 1. `SAFE` when trust ≤ `safe_max_trust` and distrust ≥ `safe_min_distrust`
/// 2. `LOW_SEVERITY` when trust ≤ `low_max_trust`
/// 3. `MEDIUM_SEVERITY` when trust ≤ `medium_max_trust`
/// 4. `HIGH_SEVERITY` when trust ≤ `high_max_trust` and distrust ≥ `high_min_distrust`
/// 5. `CRITICAL` otherwise
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeverityBands {
    pub safe_max_trust: u32,
    pub safe_min_distrust: u32,
    pub low_max_trust: u32,
    pub medium_max_trust: u32,
    pub high_max_trust: u32,
    pub high_min_distrust: u32,
}

impl Default for SeverityBands {
    fn default() -> Self {
        SeverityBands {
            safe_max_trust: 20,
            safe_min_distrust: 50,
            low_max_trust: 35,
            medium_max_trust: 55,
            high_max_trust: 70,
            high_min_distrust: 40,
        }
    }
}

impl SeverityBands {
    /// Trust thresholds must not decrease from one band to the next.
    pub fn is_ordered(&self) -> bool {
        self.safe_max_trust <= self.low_max_trust
            && self.low_max_trust <= self.medium_max_trust
            && self.medium_max_trust <= self.high_max_trust
    }

    pub fn combine(&self, trust: u32, distrust: u32) -> Result<SeverityLabel, VerdictError> {
        if trust > MAX_ASSUMPTION_COST || distrust > MAX_ASSUMPTION_COST {
            return Err(VerdictError::CostOutOfRange { trust, distrust });
        }
        Ok(
            if trust <= self.safe_max_trust && distrust >= self.safe_min_distrust {
                SeverityLabel::Safe
            } else if trust <= self.low_max_trust {
                SeverityLabel::LowSeverity
            } else if trust <= self.medium_max_trust {
                SeverityLabel::MediumSeverity
            } else if trust <= self.high_max_trust && distrust >= self.high_min_distrust {
                SeverityLabel::HighSeverity
            } else {
                SeverityLabel::Critical
            },
        )
    }
}

/// [`SeverityBands::combine`] with the default bands.
pub fn combine(trust: u32, distrust: u32) -> Result<SeverityLabel, VerdictError> {
    SeverityBands::default().combine(trust, distrust)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_points() {
        assert_eq!(combine(6, 70).unwrap(), SeverityLabel::Safe);
        assert_eq!(combine(32, 70).unwrap(), SeverityLabel::LowSeverity);
        assert_eq!(combine(37, 73).unwrap(), SeverityLabel::MediumSeverity);
        assert_eq!(combine(75, 80).unwrap(), SeverityLabel::Critical);
    }

    #[test]
    fn monotone_over_the_whole_grid() {
        for t in 0..=100 {
            for d in 0..=100 {
                let here = combine(t, d).unwrap();
                if t < 100 {
                    assert!(
                        combine(t + 1, d).unwrap() >= here,
                        "trust {t}->{} at distrust {d}",
                        t + 1
                    );
                }
                if d < 100 {
                    assert!(
                        combine(t, d + 1).unwrap() <= here,
                        "distrust {d}->{} at trust {t}",
                        d + 1
                    );
                }
            }
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(combine(101, 0).is_err());
        assert!(combine(0, 101).is_err());
    }

    #[test]
    fn labels_parse_loosely() {
        assert_eq!(
            "high".parse::<SeverityLabel>().unwrap(),
            SeverityLabel::HighSeverity
        );
        assert_eq!(
            "HIGH_SEVERITY".parse::<SeverityLabel>().unwrap(),
            SeverityLabel::HighSeverity
        );
        assert_eq!(
            "critical".parse::<SeverityLabel>().unwrap(),
            SeverityLabel::Critical
        );
        assert!("meh".parse::<SeverityLabel>().is_err());
    }
}
