use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CatalogError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Assumptions concluding the crate is safe.
    Trust,
    /// Assumptions concluding the crate is unsafe.
    Distrust,
}

impl Polarity {
    pub fn predicate(self) -> &'static str {
        match self {
            Polarity::Trust => "safe",
            Polarity::Distrust => "unsafe",
        }
    }
}

/// Built-in assumption templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateId {
    CrateSafe,
    Downloads,
    AuditPassed,
    PastAuditPassed,
    StarsForks,
    NoSideEffectsSafeDeps,
    /// Supporting fact for `NoSideEffectsSafeDeps`.
    NoSideEffects,
    TrustedAuthor,
    CrateUnsafe,
    RustsecCritical,
    RustsecHigh,
    RustsecMedium,
    /// Low and informational advisories.
    RustsecLow,
    RustsecPatched,
    MiriFlagged,
    SideEffects,
    UnsafeDependency,
}

/// How a template's cost is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultCost {
    Fixed(u32),
    /// Interpolated from a metric between `lo` and `hi`.
    Range {
        lo: u32,
        hi: u32,
        metric: Metric,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Downloads,
    StarsForks,
    SideEffects,
}

impl TemplateId {
    pub const ALL: [TemplateId; 17] = [
        TemplateId::CrateSafe,
        TemplateId::Downloads,
        TemplateId::AuditPassed,
        TemplateId::PastAuditPassed,
        TemplateId::StarsForks,
        TemplateId::NoSideEffectsSafeDeps,
        TemplateId::NoSideEffects,
        TemplateId::TrustedAuthor,
        TemplateId::CrateUnsafe,
        TemplateId::RustsecCritical,
        TemplateId::RustsecHigh,
        TemplateId::RustsecMedium,
        TemplateId::RustsecLow,
        TemplateId::RustsecPatched,
        TemplateId::MiriFlagged,
        TemplateId::SideEffects,
        TemplateId::UnsafeDependency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::CrateSafe => "crate_safe",
            TemplateId::Downloads => "downloads",
            TemplateId::AuditPassed => "audit_passed",
            TemplateId::PastAuditPassed => "past_audit_passed",
            TemplateId::StarsForks => "stars_forks",
            TemplateId::NoSideEffectsSafeDeps => "no_side_effects_safe_deps",
            TemplateId::NoSideEffects => "no_side_effects",
            TemplateId::TrustedAuthor => "trusted_author",
            TemplateId::CrateUnsafe => "crate_unsafe",
            TemplateId::RustsecCritical => "rustsec_critical",
            TemplateId::RustsecHigh => "rustsec_high",
            TemplateId::RustsecMedium => "rustsec_medium",
            TemplateId::RustsecLow => "rustsec_low",
            TemplateId::RustsecPatched => "rustsec_patched",
            TemplateId::MiriFlagged => "miri_flagged",
            TemplateId::SideEffects => "side_effects",
            TemplateId::UnsafeDependency => "unsafe_dependency",
        }
    }

    pub fn polarity(self) -> Polarity {
        use TemplateId::*;
        match self {
            CrateSafe
            | Downloads
            | AuditPassed
            | PastAuditPassed
            | StarsForks
            | NoSideEffectsSafeDeps
            | NoSideEffects
            | TrustedAuthor => Polarity::Trust,
            _ => Polarity::Distrust,
        }
    }

    pub fn is_base(self) -> bool {
        matches!(self, TemplateId::CrateSafe | TemplateId::CrateUnsafe)
    }

    pub fn default_cost(self) -> DefaultCost {
        use DefaultCost::*;
        match self {
            TemplateId::CrateSafe | TemplateId::CrateUnsafe => Fixed(100),
            TemplateId::Downloads => Range {
                lo: 25,
                hi: 100,
                metric: Metric::Downloads,
            },
            TemplateId::AuditPassed => Fixed(5),
            TemplateId::PastAuditPassed => Fixed(20),
            TemplateId::StarsForks => Range {
                lo: 20,
                hi: 100,
                metric: Metric::StarsForks,
            },
            TemplateId::NoSideEffectsSafeDeps => Fixed(10),
            TemplateId::NoSideEffects => Fixed(0),
            TemplateId::TrustedAuthor => Fixed(5),
            TemplateId::RustsecCritical => Fixed(5),
            TemplateId::RustsecHigh => Fixed(20),
            TemplateId::RustsecMedium => Fixed(40),
            TemplateId::RustsecLow => Fixed(60),
            TemplateId::RustsecPatched => Fixed(90),
            TemplateId::MiriFlagged => Fixed(30),
            TemplateId::SideEffects => Range {
                lo: 60,
                hi: 100,
                metric: Metric::SideEffects,
            },
            TemplateId::UnsafeDependency => Fixed(10),
        }
    }

    /// One-line description of what the template asserts.
    pub fn summary(self) -> &'static str {
        match self {
            TemplateId::CrateSafe => "the crate is safe",
            TemplateId::Downloads => "a widely downloaded crate is safe",
            TemplateId::AuditPassed => "a crate whose version passed an audit is safe",
            TemplateId::PastAuditPassed => "a crate with an earlier audited version is safe",
            TemplateId::StarsForks => "a crate whose repository has many stars and forks is safe",
            TemplateId::NoSideEffectsSafeDeps => {
                "a crate without side effects whose dependencies are safe is safe"
            }
            TemplateId::NoSideEffects => "the side-effect scan found nothing",
            TemplateId::TrustedAuthor => "a crate by a trusted author is safe",
            TemplateId::CrateUnsafe => "the crate is unsafe",
            TemplateId::RustsecCritical => "a crate with a critical advisory is unsafe",
            TemplateId::RustsecHigh => "a crate with a high-severity advisory is unsafe",
            TemplateId::RustsecMedium => "a crate with a medium-severity advisory is unsafe",
            TemplateId::RustsecLow => "a crate with a low-severity advisory is unsafe",
            TemplateId::RustsecPatched => {
                "a crate with an advisory patched in this version is unsafe"
            }
            TemplateId::MiriFlagged => "a crate flagged by Miri is unsafe",
            TemplateId::SideEffects => "a crate with many side effects is unsafe",
            TemplateId::UnsafeDependency => "a crate with an unsafe dependency is unsafe",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown template `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Cost falls from `hi` at `v_low` to `lo` at `v_high`.
    #[default]
    Decreasing,
    /// Cost rises from `lo` at `v_low` to `hi` at `v_high`.
    Increasing,
}

/// Log-linear interpolation between two anchors, clamped to
/// `[lo_cost, hi_cost]` and rounded to the nearest integer.
///
/// A value of zero (or anything at or below `v_low`) sits at the `v_low`
/// end.
pub fn parameterized_cost(
    value: f64,
    lo_cost: u32,
    hi_cost: u32,
    v_low: f64,
    v_high: f64,
    direction: Direction,
) -> Result<u32, CatalogError> {
    if !(v_low > 0.0 && v_low < v_high && v_high.is_finite()) {
        return Err(CatalogError::InvalidAnchors(format!(
            "need 0 < v_low < v_high, got {v_low} and {v_high}"
        )));
    }
    if lo_cost >= hi_cost {
        return Err(CatalogError::InvalidAnchors(format!(
            "need lo_cost < hi_cost, got {lo_cost} and {hi_cost}"
        )));
    }
    if value.is_nan() || value < 0.0 {
        return Err(CatalogError::InvalidAnchors(format!(
            "metric {value} is negative"
        )));
    }
    let t = if value <= v_low {
        0.0
    } else {
        ((value.log10() - v_low.log10()) / (v_high.log10() - v_low.log10())).clamp(0.0, 1.0)
    };
    let (lo, hi) = (f64::from(lo_cost), f64::from(hi_cost));
    let cost = match direction {
        Direction::Decreasing => hi - (hi - lo) * t,
        Direction::Increasing => lo + (hi - lo) * t,
    };
    Ok(cost.round() as u32)
}
