use std::fmt::Write;

use serde::Serialize;

use super::ReportFormat;
use crate::model::{AuditScope, CrateKey, CrateRecord, DependencyGraph};

#[derive(Serialize)]
struct LogsDoc<'a> {
    record: &'a CrateRecord,
    dependencies: &'a [CrateKey],
    transitive_dependencies: usize,
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

/// Every field of the root record, then its direct dependencies.
pub fn render_logs(graph: &DependencyGraph, format: ReportFormat) -> String {
    let r = graph.root_record();
    let direct = graph.direct_dependencies(&graph.root);
    let transitive = graph.len() - 1;
    if format == ReportFormat::Json {
        let doc = LogsDoc {
            record: r,
            dependencies: direct,
            transitive_dependencies: transitive,
        };
        return serde_json::to_string_pretty(&doc).expect("logs serialize") + "\n";
    }

    let mut out = String::new();
    writeln!(out, "crate: {}", r.key()).unwrap();
    writeln!(out, "downloads: {}", r.downloads).unwrap();
    writeln!(out, "authors: {}", list(&r.authors)).unwrap();
    writeln!(out, "stars: {}", r.stars).unwrap();
    writeln!(out, "forks: {}", r.forks).unwrap();

    writeln!(
        out,
        "audits:{}",
        if r.audits.is_empty() { " none" } else { "" }
    )
    .unwrap();
    for a in &r.audits {
        let scope = match &a.scope {
            AuditScope::Version(v) => v.to_string(),
            AuditScope::Range(req) => req.to_string(),
        };
        let outcome = if a.passed { "passed" } else { "failed" };
        writeln!(
            out,
            "  - {} {} {scope} ({outcome})",
            a.organization, a.criteria
        )
        .unwrap();
    }

    writeln!(
        out,
        "tool_results:{}",
        if r.tool_results.is_empty() {
            " none"
        } else {
            ""
        }
    )
    .unwrap();
    for t in &r.tool_results {
        let tool = serde_json::to_value(t.tool).expect("tool kind serializes");
        let tool = tool.as_str().unwrap_or_default();
        match t.side_effect_count {
            Some(n) => writeln!(out, "  - {tool}: {n} side effects").unwrap(),
            None => writeln!(
                out,
                "  - {tool}: {}",
                if t.flagged { "flagged" } else { "clean" }
            )
            .unwrap(),
        }
    }

    writeln!(
        out,
        "advisories:{}",
        if r.advisories.is_empty() { " none" } else { "" }
    )
    .unwrap();
    for a in &r.advisories {
        let patched = if a.patched_in_queried_version {
            ", patched"
        } else {
            ""
        };
        writeln!(out, "  - {} ({}{patched})", a.id, a.severity.as_str()).unwrap();
    }

    if !r.provenance.is_empty() {
        let sources: Vec<String> = r
            .provenance
            .iter()
            .map(|(f, s)| format!("{f}={s:?}"))
            .collect();
        writeln!(out, "provenance: {}", sources.join(", ")).unwrap();
    }

    writeln!(
        out,
        "dependencies: {} direct, {transitive} transitive",
        direct.len()
    )
    .unwrap();
    for d in &r.dependencies {
        writeln!(out, "  - {}@{} (requires {})", d.name, d.version, d.req).unwrap();
    }
    out
}
