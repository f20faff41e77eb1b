use crate::logic::Var;
use crate::model::{CrateKey, CrateRecord, DependencyGraph, Severity, ToolKind};
use crate::solver::AssumptionInstance;

use super::{parameterized_cost, CatalogError, CostConfig, Polarity, TemplateId};

pub fn safe(key: &CrateKey) -> Var {
    Var::fact(format!("safe({key})"))
}

pub fn unsafe_(key: &CrateKey) -> Var {
    Var::fact(format!("unsafe({key})"))
}

pub fn no_side_effects(key: &CrateKey) -> Var {
    Var::fact(format!("no_side_effects({key})"))
}

/// The variable a polarity's query concludes for `key`.
pub fn conclusion(key: &CrateKey, polarity: Polarity) -> Var {
    match polarity {
        Polarity::Trust => safe(key),
        Polarity::Distrust => unsafe_(key),
    }
}

struct Builder<'a> {
    key: &'a CrateKey,
    out: Vec<AssumptionInstance>,
}

impl Builder<'_> {
    fn push(
        &mut self,
        suffix: String,
        template: &str,
        body: Vec<Var>,
        head: Var,
        cost: u32,
        label: String,
    ) {
        let id = format!("{}/{suffix}", self.key);
        self.out
            .push(AssumptionInstance::horn(id, body, head, cost, label).with_provenance(template));
    }

    fn template(&mut self, t: TemplateId, body: Vec<Var>, head: Var, cost: u32, label: String) {
        self.push(t.as_str().to_string(), t.as_str(), body, head, cost, label);
    }
}

/// Candidate assumptions about one crate for one polarity, in a fixed
/// order: the base assumption, then built-in templates, then custom
/// entries from the configuration.
///
/// Compositional templates refer to the direct dependencies in `graph`;
/// their own assumptions come from instantiating them in turn.
pub fn instantiate(
    record: &CrateRecord,
    graph: &DependencyGraph,
    cfg: &CostConfig,
    polarity: Polarity,
) -> Result<Vec<AssumptionInstance>, CatalogError> {
    cfg.check_consistency()
        .map_err(CatalogError::InvalidConfig)?;
    let key = record.key();
    let deps = graph.direct_dependencies(&key);
    let mut b = Builder {
        key: &key,
        out: Vec::new(),
    };
    let on = |t: TemplateId| cfg.is_enabled(t);
    let param = |t: TemplateId, value: f64| -> Result<u32, CatalogError> {
        let (lo, hi, metric) = cfg.cost_range(t).expect("parameterized template");
        let a = cfg.anchors.get(metric);
        parameterized_cost(value, lo, hi, a.low, a.high, a.direction)
    };

    match polarity {
        Polarity::Trust => {
            let head = safe(&key);
            let t = TemplateId::CrateSafe;
            b.template(
                t,
                vec![],
                head.clone(),
                cfg.fixed_cost(t),
                format!("{key} is safe."),
            );

            if on(TemplateId::Downloads) && record.downloads > 0 {
                let cost = param(TemplateId::Downloads, record.downloads as f64)?;
                let label = format!("{key} has {} downloads, so it is safe.", record.downloads);
                b.template(TemplateId::Downloads, vec![], head.clone(), cost, label);
            }

            let trusted_audits: Vec<_> = record
                .audits
                .iter()
                .filter(|a| a.passed && cfg.trusted_audit_orgs.contains(&a.organization))
                .collect();
            let current = trusted_audits.iter().find(|a| a.covers(&record.version));
            if let Some(a) = current.filter(|_| on(TemplateId::AuditPassed)) {
                let t = TemplateId::AuditPassed;
                let label = format!(
                    "{key} passed an audit by {} ({}), so it is safe.",
                    a.organization, a.criteria
                );
                b.template(t, vec![], head.clone(), cfg.fixed_cost(t), label);
            }
            let past = trusted_audits.iter().find(|a| a.is_before(&record.version));
            if let Some(a) = past.filter(|_| current.is_none() && on(TemplateId::PastAuditPassed)) {
                let t = TemplateId::PastAuditPassed;
                let label = format!(
                    "An earlier version of {key} passed an audit by {}, so it is safe.",
                    a.organization
                );
                b.template(t, vec![], head.clone(), cfg.fixed_cost(t), label);
            }

            let popularity = record.stars_and_forks();
            if on(TemplateId::StarsForks) && popularity > 0 {
                let cost = param(TemplateId::StarsForks, popularity as f64)?;
                let label = format!(
                    "{key} has {} stars and {} forks, so it is safe.",
                    record.stars, record.forks
                );
                b.template(TemplateId::StarsForks, vec![], head.clone(), cost, label);
            }

            let quiet = record
                .side_effect_count()
                .filter(|&n| n <= cfg.side_effect_threshold);
            if let Some(n) = quiet
                .filter(|_| on(TemplateId::NoSideEffects) && on(TemplateId::NoSideEffectsSafeDeps))
            {
                let fact = no_side_effects(&key);
                let t = TemplateId::NoSideEffects;
                let label = format!("{key} has {n} side effects.");
                b.template(t, vec![], fact.clone(), cfg.fixed_cost(t), label);
                let t = TemplateId::NoSideEffectsSafeDeps;
                let body: Vec<Var> = std::iter::once(fact).chain(deps.iter().map(safe)).collect();
                let label = if deps.is_empty() {
                    format!("{key} has no side effects and no dependencies, so it is safe.")
                } else {
                    format!("{key} has no side effects and all of its dependencies are safe, so it is safe.")
                };
                b.template(t, body, head.clone(), cfg.fixed_cost(t), label);
            }

            let trusted = cfg.trusted_authors();
            if let Some(author) = record.authors.iter().find(|a| trusted.contains(*a)) {
                if on(TemplateId::TrustedAuthor) {
                    let t = TemplateId::TrustedAuthor;
                    let label =
                        format!("{key} is written by {author}, a trusted author, so it is safe.");
                    b.template(t, vec![], head.clone(), cfg.fixed_cost(t), label);
                }
            }
        }
        Polarity::Distrust => {
            let head = unsafe_(&key);
            let t = TemplateId::CrateUnsafe;
            b.template(
                t,
                vec![],
                head.clone(),
                cfg.fixed_cost(t),
                format!("{key} is unsafe."),
            );

            for adv in &record.advisories {
                let t = if adv.patched_in_queried_version {
                    TemplateId::RustsecPatched
                } else {
                    match adv.severity {
                        Severity::Critical => TemplateId::RustsecCritical,
                        Severity::High => TemplateId::RustsecHigh,
                        Severity::Medium => TemplateId::RustsecMedium,
                        Severity::Low | Severity::Informational => TemplateId::RustsecLow,
                    }
                };
                if !on(t) {
                    continue;
                }
                let label = if adv.patched_in_queried_version {
                    format!(
                        "{key} has advisory {} (patched in this version), so it is unsafe.",
                        adv.id
                    )
                } else {
                    format!(
                        "{key} has {} advisory {}, so it is unsafe.",
                        adv.severity.as_str(),
                        adv.id
                    )
                };
                b.push(
                    format!("rustsec/{}", adv.id),
                    t.as_str(),
                    vec![],
                    head.clone(),
                    cfg.fixed_cost(t),
                    label,
                );
            }

            if on(TemplateId::MiriFlagged) && record.tool(ToolKind::Miri).is_some_and(|r| r.flagged)
            {
                let t = TemplateId::MiriFlagged;
                let label = format!("{key} is flagged by Miri, so it is unsafe.");
                b.template(t, vec![], head.clone(), cfg.fixed_cost(t), label);
            }

            let noisy = record
                .side_effect_count()
                .filter(|&n| n > cfg.side_effect_threshold);
            if let Some(n) = noisy.filter(|_| on(TemplateId::SideEffects)) {
                let cost = param(TemplateId::SideEffects, f64::from(n))?;
                let label = format!("{key} has {n} side effects, so it is unsafe.");
                b.template(TemplateId::SideEffects, vec![], head.clone(), cost, label);
            }

            if on(TemplateId::UnsafeDependency) {
                let t = TemplateId::UnsafeDependency;
                for dep in deps {
                    let label = format!("{key} depends on {dep}; if that is unsafe, so is {key}.");
                    b.push(
                        format!("{t}/{dep}"),
                        t.as_str(),
                        vec![unsafe_(dep)],
                        head.clone(),
                        cfg.fixed_cost(t),
                        label,
                    );
                }
            }
        }
    }

    for c in cfg.custom.iter().filter(|c| c.polarity == polarity) {
        if !c.applies_to(&record.name, &key.to_string()) {
            continue;
        }
        let label = if c.label.is_empty() {
            c.id.clone()
        } else {
            c.label.clone()
        };
        b.push(
            format!("custom/{}", c.id),
            "custom",
            c.body.iter().map(Var::fact).collect(),
            Var::fact(&c.head),
            c.cost as u32,
            label,
        );
    }
    Ok(b.out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use semver::Version;

    use super::*;
    use crate::model::{Audit, AuditScope, ToolResult};

    fn alone(r: &CrateRecord) -> DependencyGraph {
        DependencyGraph {
            root: r.key(),
            nodes: BTreeMap::from([(r.key(), r.clone())]),
            edges: BTreeMap::new(),
        }
    }

    fn costs(r: &CrateRecord, p: Polarity) -> Vec<(String, u32)> {
        instantiate(r, &alone(r), &CostConfig::default(), p)
            .unwrap()
            .into_iter()
            .map(|a| (a.provenance, a.cost))
            .collect()
    }

    #[test]
    fn bare_record_gets_only_the_base() {
        let r = CrateRecord::new("nothing", Version::new(0, 1, 0));
        assert_eq!(
            costs(&r, Polarity::Trust),
            [("crate_safe".to_string(), 100)]
        );
        assert_eq!(
            costs(&r, Polarity::Distrust),
            [("crate_unsafe".to_string(), 100)]
        );
    }

    #[test]
    fn exact_audit_costs_5_and_hides_past_audits() {
        let mut r = CrateRecord::new("audited", Version::new(1, 2, 0));
        for v in [Version::new(1, 1, 0), Version::new(1, 2, 0)] {
            r.audits.push(Audit {
                organization: "mozilla".into(),
                criteria: "safe-to-deploy".into(),
                scope: AuditScope::Version(v),
                passed: true,
            });
        }
        let c = costs(&r, Polarity::Trust);
        assert!(c.contains(&("audit_passed".into(), 5)));
        assert!(!c.iter().any(|(t, _)| t == "past_audit_passed"));
        r.audits.pop();
        assert!(costs(&r, Polarity::Trust).contains(&("past_audit_passed".into(), 20)));
    }

    #[test]
    fn untrusted_auditor_is_ignored() {
        let mut r = CrateRecord::new("audited", Version::new(1, 2, 0));
        r.audits.push(Audit {
            organization: "nobody-in-particular".into(),
            criteria: "safe-to-deploy".into(),
            scope: AuditScope::Version(r.version.clone()),
            passed: true,
        });
        assert_eq!(costs(&r, Polarity::Trust).len(), 1);
    }

    #[test]
    fn miri_flag_costs_30() {
        let mut r = CrateRecord::new("ub", Version::new(0, 3, 0));
        r.tool_results.push(ToolResult {
            tool: ToolKind::Miri,
            flagged: true,
            side_effect_count: None,
        });
        assert!(costs(&r, Polarity::Distrust).contains(&("miri_flagged".into(), 30)));
    }

    #[test]
    fn instantiation_is_deterministic() {
        let mut r = CrateRecord::new("busy", Version::new(2, 0, 0));
        r.downloads = 5_000;
        r.stars = 40;
        r.tool_results.push(ToolResult {
            tool: ToolKind::SideEffects,
            flagged: true,
            side_effect_count: Some(4),
        });
        let g = alone(&r);
        let cfg = CostConfig::default();
        for p in [Polarity::Trust, Polarity::Distrust] {
            assert_eq!(
                instantiate(&r, &g, &cfg, p).unwrap(),
                instantiate(&r, &g, &cfg, p).unwrap()
            );
        }
    }

    #[test]
    fn inconsistent_config_is_refused() {
        let r = CrateRecord::new("x", Version::new(1, 0, 0));
        let cfg = CostConfig::from_json(r#"{"costs":{"trusted_author":101}}"#).unwrap();
        assert!(matches!(
            instantiate(&r, &alone(&r), &cfg, Polarity::Trust),
            Err(CatalogError::InvalidConfig(_))
        ));
    }
}
