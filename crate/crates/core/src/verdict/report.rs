use std::fmt::Write;

use super::{PolarityOutcome, SeverityLabel, Verdict};
use crate::solver::SolveStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

fn paint(label: SeverityLabel, color: bool) -> String {
    if !color {
        return label.to_string();
    }
    let code = match label {
        SeverityLabel::Safe => "32",
        SeverityLabel::LowSeverity => "36",
        SeverityLabel::MediumSeverity => "33",
        SeverityLabel::HighSeverity => "31",
        SeverityLabel::Critical => "1;31",
    };
    format!("\x1b[{code}m{label}\x1b[0m")
}

fn section(out: &mut String, key: &str, heading: &str, p: &PolarityOutcome) {
    match (p.cost, p.status) {
        (Some(c), _) => writeln!(out, "{key}: {c}").unwrap(),
        (None, SolveStatus::ResourceLimit) => {
            writeln!(out, "{key}: incomplete (resource limit reached)").unwrap()
        }
        (None, _) => writeln!(out, "{key}: none (conclusion not derivable)").unwrap(),
    }
    writeln!(out, "{heading}:").unwrap();
    for a in &p.assumptions {
        writeln!(out, "  - {} (cost {})", a.label, a.cost).unwrap();
    }
}

/// Plain text with stable `crate:`, `trust_cost:`, `distrust_cost:` and
/// `label:` prefixes, or the JSON form of the verdict. `color` only
/// affects the label in text mode.
pub fn render_report(v: &Verdict, format: ReportFormat, color: bool) -> String {
    if format == ReportFormat::Json {
        return v.to_json() + "\n";
    }
    let mut out = String::new();
    writeln!(out, "crate: {}", v.krate).unwrap();
    writeln!(out, "algorithm: {}", v.algorithm).unwrap();
    section(&mut out, "trust_cost", "Assumptions for Trusting", &v.trust);
    section(
        &mut out,
        "distrust_cost",
        "Assumptions for Distrusting",
        &v.distrust,
    );
    match v.label {
        Some(l) => writeln!(out, "label: {}", paint(l, color)).unwrap(),
        None => writeln!(out, "label: incomplete").unwrap(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Algorithm;
    use crate::verdict::ChosenAssumption;

    fn outcome(costs: &[u32]) -> PolarityOutcome {
        PolarityOutcome {
            status: SolveStatus::Solved,
            cost: Some(costs.iter().sum()),
            assumptions: costs
                .iter()
                .enumerate()
                .map(|(i, &c)| ChosenAssumption {
                    id: format!("x/{i}"),
                    label: format!("reason {i}"),
                    cost: c,
                })
                .collect(),
        }
    }

    fn sample() -> Verdict {
        Verdict {
            krate: "demo@1.0.0".into(),
            algorithm: Algorithm::Horn,
            trust: outcome(&[1, 2, 3, 4]),
            distrust: outcome(&[70]),
            label: Some(SeverityLabel::Safe),
        }
    }

    #[test]
    fn safe_appears_once_and_bullets_match() {
        let text = render_report(&sample(), ReportFormat::Text, false);
        assert_eq!(text.matches("SAFE").count(), 1);
        assert!(text.lines().any(|l| l == "label: SAFE"));
        let trust_section: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "Assumptions for Trusting:")
            .skip(1)
            .take_while(|l| l.starts_with("  - "))
            .collect();
        assert_eq!(trust_section.len(), 4);
    }

    #[test]
    fn json_parses_back() {
        let v = sample();
        let json = render_report(&v, ReportFormat::Json, false);
        assert_eq!(Verdict::from_json(&json).unwrap(), v);
    }

    #[test]
    fn color_only_when_asked() {
        assert!(!render_report(&sample(), ReportFormat::Text, false).contains('\x1b'));
        assert!(render_report(&sample(), ReportFormat::Text, true).contains("\x1b[32mSAFE"));
    }

    #[test]
    fn partial_verdict_is_marked() {
        let mut v = sample();
        v.trust = PolarityOutcome {
            status: SolveStatus::ResourceLimit,
            cost: None,
            assumptions: vec![],
        };
        v.label = None;
        let text = render_report(&v, ReportFormat::Text, false);
        assert!(text.contains("trust_cost: incomplete"));
        assert!(text.contains("label: incomplete"));
    }
}
