use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CatalogError, DefaultCost, Direction, Metric, Polarity, TemplateId};
use crate::solver::MAX_ASSUMPTION_COST;
use crate::verdict::SeverityBands;

/// A cost override: a number for fixed templates, a range for
/// parameterized ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostSpec {
    Fixed(i64),
    Range { lo: i64, hi: i64 },
}

/// Metric values pinned to the ends of a cost range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub low: f64,
    pub high: f64,
    #[serde(default)]
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Anchors {
    pub downloads: Anchor,
    pub stars_forks: Anchor,
    pub side_effects: Anchor,
}

impl Default for Anchors {
    fn default() -> Self {
        let anchor = |low, high| Anchor {
            low,
            high,
            direction: Direction::Decreasing,
        };
        Anchors {
            downloads: anchor(1e3, 1e7),
            stars_forks: anchor(10.0, 1e4),
            side_effects: anchor(1.0, 50.0),
        }
    }
}

impl Anchors {
    pub fn get(&self, metric: Metric) -> &Anchor {
        match metric {
            Metric::Downloads => &self.downloads,
            Metric::StarsForks => &self.stars_forks,
            Metric::SideEffects => &self.side_effects,
        }
    }
}

/// A hand-written assumption attached to one crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomAssumption {
    /// `name@version`, or a bare name for every version.
    #[serde(rename = "crate")]
    pub krate: String,
    pub polarity: Polarity,
    pub id: String,
    #[serde(default)]
    pub body: Vec<String>,
    pub head: String,
    pub cost: i64,
    #[serde(default)]
    pub label: String,
}

impl CustomAssumption {
    pub fn applies_to(&self, name: &str, key: &str) -> bool {
        self.krate == name || self.krate == key
    }
}

/// Costs, trust lists and smoothing anchors.
///
/// On disk every section is optional and overrides the built-in default:
///
/// ```json
/// {
///   "costs": { "trusted_author": 6, "downloads": { "lo": 30, "hi": 100 } },
///   "trusted_authors": ["dtolnay"],
///   "enabled": { "stars_forks": false }
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostConfig {
    pub costs: BTreeMap<TemplateId, CostSpec>,
    /// `None` keeps the built-in list, which is empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trusted_authors: Option<BTreeSet<String>>,
    pub trusted_audit_orgs: BTreeSet<String>,
    pub anchors: Anchors,
    pub enabled: BTreeMap<TemplateId, bool>,
    /// A side-effect count at or below this counts as "no side effects";
    /// above it the crate counts as flagged.
    pub side_effect_threshold: u32,
    pub custom: Vec<CustomAssumption>,
    /// Label thresholds applied to the two costs.
    pub bands: SeverityBands,
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig {
            costs: BTreeMap::new(),
            trusted_authors: None,
            trusted_audit_orgs: ["google", "mozilla", "bytecode-alliance"]
                .into_iter()
                .map(String::from)
                .collect(),
            anchors: Anchors::default(),
            enabled: BTreeMap::new(),
            side_effect_threshold: 0,
            custom: Vec::new(),
            bands: SeverityBands::default(),
        }
    }
}

/// One problem found by [`CostConfig::check_consistency`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

impl CostConfig {
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        serde_json::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CatalogError::Parse(m) => CatalogError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Loads and checks.
    pub fn load_checked(path: &Path) -> Result<Self, CatalogError> {
        let cfg = Self::load(path)?;
        cfg.check_consistency()
            .map_err(CatalogError::InvalidConfig)?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn is_enabled(&self, t: TemplateId) -> bool {
        self.enabled.get(&t).copied().unwrap_or(true)
    }

    pub fn trusted_authors(&self) -> BTreeSet<String> {
        self.trusted_authors.clone().unwrap_or_default()
    }

    /// Fixed cost of `t`. Only meaningful after a successful consistency
    /// check.
    pub fn fixed_cost(&self, t: TemplateId) -> u32 {
        match (self.costs.get(&t), t.default_cost()) {
            (Some(CostSpec::Fixed(c)), _) => *c as u32,
            (_, DefaultCost::Fixed(c)) => c,
            (_, DefaultCost::Range { hi, .. }) => hi,
        }
    }

    /// Cost range of a parameterized template.
    pub fn cost_range(&self, t: TemplateId) -> Option<(u32, u32, Metric)> {
        let DefaultCost::Range { lo, hi, metric } = t.default_cost() else {
            return None;
        };
        match self.costs.get(&t) {
            Some(CostSpec::Range { lo, hi }) => Some((*lo as u32, *hi as u32, metric)),
            _ => Some((lo, hi, metric)),
        }
    }

    /// Every rule the configuration breaks; empty means consistent.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut flag = |subject: &str, message: String| {
            out.push(Violation {
                subject: subject.to_string(),
                message,
            })
        };
        let max = i64::from(MAX_ASSUMPTION_COST);
        let in_range = |c: i64| (0..=max).contains(&c);

        for (t, spec) in &self.costs {
            let name = t.as_str();
            match (spec, t.default_cost()) {
                (CostSpec::Fixed(c), DefaultCost::Fixed(_)) => {
                    if !in_range(*c) {
                        flag(name, format!("cost {c} is outside 0..={max}"));
                    } else if t.is_base() && *c != max {
                        flag(
                            name,
                            format!("the base assumption must cost {max}, not {c}"),
                        );
                    }
                }
                (CostSpec::Range { lo, hi }, DefaultCost::Range { .. }) => {
                    if !in_range(*lo) || !in_range(*hi) {
                        flag(name, format!("range {lo}..{hi} leaves 0..={max}"));
                    } else if lo >= hi {
                        flag(name, format!("range {lo}..{hi} is empty"));
                    }
                }
                (CostSpec::Fixed(_), DefaultCost::Range { .. }) => flag(
                    name,
                    "parameterized template needs a {\"lo\", \"hi\"} range".into(),
                ),
                (CostSpec::Range { .. }, DefaultCost::Fixed(_)) => {
                    flag(name, "fixed-cost template cannot take a range".into())
                }
            }
        }
        for t in [TemplateId::CrateSafe, TemplateId::CrateUnsafe] {
            if !self.is_enabled(t) {
                flag(t.as_str(), "the base assumption cannot be disabled".into());
            }
        }
        if self
            .trusted_authors
            .as_ref()
            .is_some_and(BTreeSet::is_empty)
            && self.is_enabled(TemplateId::TrustedAuthor)
        {
            flag(
                "trusted_authors",
                "empty list silently disables trusted_author; disable the template instead".into(),
            );
        }
        for (name, a) in [
            ("anchors.downloads", &self.anchors.downloads),
            ("anchors.stars_forks", &self.anchors.stars_forks),
            ("anchors.side_effects", &self.anchors.side_effects),
        ] {
            if !(a.low > 0.0 && a.low < a.high && a.high.is_finite()) {
                flag(
                    name,
                    format!("need 0 < low < high, got {} and {}", a.low, a.high),
                );
            }
        }
        if !self.bands.is_ordered() {
            flag(
                "bands",
                "trust thresholds must not decrease from SAFE to HIGH_SEVERITY".into(),
            );
        }
        let mut ids = BTreeSet::new();
        for c in &self.custom {
            let subject = format!("custom.{}", c.id);
            if !in_range(c.cost) {
                flag(&subject, format!("cost {} is outside 0..={max}", c.cost));
            }
            if c.id.is_empty() || !ids.insert((&c.krate, c.polarity, &c.id)) {
                flag(
                    &subject,
                    "ids must be non-empty and unique per crate and polarity".into(),
                );
            }
            if c.head.is_empty() || c.body.iter().any(String::is_empty) {
                flag(&subject, "variable names must be non-empty".into());
            }
        }
        out
    }

    pub fn check_consistency(&self) -> Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_consistent() {
        assert_eq!(CostConfig::default().check_consistency(), Ok(()));
    }

    #[test]
    fn cost_over_100_is_a_violation() {
        let cfg = CostConfig::from_json(r#"{"costs":{"trusted_author":101}}"#).unwrap();
        let v = cfg.check_consistency().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].subject, "trusted_author");
    }

    #[test]
    fn negative_cost_is_a_violation() {
        let cfg = CostConfig::from_json(r#"{"costs":{"audit_passed":-1}}"#).unwrap();
        assert!(cfg.check_consistency().is_err());
    }

    #[test]
    fn side_effect_range_60_to_100_is_fine() {
        let cfg =
            CostConfig::from_json(r#"{"costs":{"side_effects":{"lo":60,"hi":100}}}"#).unwrap();
        assert_eq!(cfg.check_consistency(), Ok(()));
        let wide =
            CostConfig::from_json(r#"{"costs":{"side_effects":{"lo":60,"hi":120}}}"#).unwrap();
        assert!(wide.check_consistency().is_err());
    }

    #[test]
    fn empty_author_list_must_disable_the_template() {
        let silent = CostConfig::from_json(r#"{"trusted_authors":[]}"#).unwrap();
        assert!(silent.check_consistency().is_err());
        let explicit =
            CostConfig::from_json(r#"{"trusted_authors":[],"enabled":{"trusted_author":false}}"#)
                .unwrap();
        assert_eq!(explicit.check_consistency(), Ok(()));
    }

    #[test]
    fn unknown_section_is_a_parse_error() {
        assert!(CostConfig::from_json(r#"{"costz":{}}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = CostConfig::from_json(
            r#"{"costs":{"downloads":{"lo":30,"hi":90}},"trusted_authors":["a"]}"#,
        )
        .unwrap();
        assert_eq!(CostConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        assert_eq!(
            cfg.cost_range(TemplateId::Downloads),
            Some((30, 90, Metric::Downloads))
        );
    }
}
