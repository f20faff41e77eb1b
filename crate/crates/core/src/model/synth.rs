use std::collections::BTreeSet;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semver::Version;

use super::{
    Advisory, Audit, AuditScope, Bundle, CrateRecord, Dependency, Manifest, ModelError, Severity,
    ToolKind, ToolResult, TyposquatPair,
};

pub const SYNTHETIC_ROOT: &str = "synth-root";

/// Downloads given to every generated typosquat.
pub const TYPOSQUAT_DOWNLOADS: u64 = 171;

/// A random tree of `n_dependencies` crates below a root, with varied
/// metadata. Each dependency hangs off a uniformly chosen earlier node, so
/// depth grows roughly logarithmically. The same seed gives the same tree.
pub fn synthetic_tree(n_dependencies: usize, seed: u64) -> Vec<CrateRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let authors = ["ada", "grace", "linus", "barbara", "ken", "margaret"];
    let mut records: Vec<CrateRecord> = (0..=n_dependencies)
        .map(|i| {
            let name = if i == 0 {
                SYNTHETIC_ROOT.to_string()
            } else {
                format!("synth-dep-{i:03}")
            };
            let mut r = CrateRecord::new(name, Version::new(1, rng.gen_range(0..5), 0));
            r.downloads = 10f64.powf(rng.gen_range(1.0..8.0)) as u64;
            r.stars = rng.gen_range(0..3000);
            r.forks = rng.gen_range(0..300);
            r.authors = vec![authors[rng.gen_range(0..authors.len())].to_string()];
            if rng.gen_bool(0.15) {
                r.audits.push(Audit {
                    organization: "mozilla".into(),
                    criteria: "safe-to-deploy".into(),
                    scope: AuditScope::Version(r.version.clone()),
                    passed: true,
                });
            }
            let effects = if rng.gen_bool(0.4) {
                0
            } else {
                rng.gen_range(1..30)
            };
            r.tool_results.push(ToolResult {
                tool: ToolKind::SideEffects,
                flagged: effects > 0,
                side_effect_count: Some(effects),
            });
            if rng.gen_bool(0.05) {
                r.tool_results.push(ToolResult {
                    tool: ToolKind::Miri,
                    flagged: true,
                    side_effect_count: None,
                });
            }
            if rng.gen_bool(0.05) {
                r.advisories.push(Advisory {
                    id: format!("SYNTH-{i:04}"),
                    severity: Severity::Medium,
                    patched_in_queried_version: rng.gen_bool(0.5),
                });
            }
            r
        })
        .collect();
    for i in 1..=n_dependencies {
        let parent = rng.gen_range(0..i);
        let dep = Dependency {
            name: records[i].name.clone(),
            req: format!("^{}", records[i].version)
                .parse()
                .expect("caret requirement parses"),
            version: records[i].version.clone(),
        };
        records[parent].dependencies.push(dep);
    }
    records
}

/// Duplicates the middle character, moving right until the result is not
/// in `taken`: `serde` becomes `serrde`.
pub fn typosquat_name(name: &str, taken: &BTreeSet<String>) -> String {
    let chars: Vec<char> = name.chars().collect();
    let n = chars.len();
    (0..n)
        .map(|offset| (n / 2 + offset) % n)
        .map(|i| {
            let mut s: String = chars[..=i].iter().collect();
            s.extend(&chars[i..]);
            s
        })
        .find(|s| !taken.contains(s))
        .unwrap_or_else(|| format!("{name}-rs"))
}

/// Same code and dependencies under a fresh name and an unknown author,
/// with no popularity and no audits.
pub fn typosquat(original: &CrateRecord, taken: &BTreeSet<String>) -> CrateRecord {
    let name = typosquat_name(&original.name, taken);
    let mut v = original.clone();
    v.authors = vec![format!("{name}-dev")];
    v.name = name;
    v.downloads = TYPOSQUAT_DOWNLOADS;
    v.stars = 0;
    v.forks = 0;
    v.audits.clear();
    v.provenance.clear();
    v
}

/// Writes a bundle holding every base record plus one typosquat per base
/// root. The new manifest lists the variants as roots and records each
/// pair.
pub fn typosquat_bundle(base: &Bundle, out: &Path) -> Result<Bundle, ModelError> {
    let mut records = base.records()?;
    let mut taken: BTreeSet<String> = records.iter().map(|r| r.name.clone()).collect();
    let cache = base.cache();
    let mut manifest = Manifest::default();
    for root in &base.manifest.roots {
        let original = cache.load(root)?;
        let variant = typosquat(&original, &taken);
        taken.insert(variant.name.clone());
        manifest.roots.push(variant.key());
        manifest.pairs.push(TyposquatPair {
            original: original.key(),
            variant: variant.key(),
        });
        records.push(variant);
    }
    if let Some(cfg) = base.config_path() {
        std::fs::create_dir_all(out)?;
        std::fs::copy(cfg, out.join("assumptions.json"))?;
    }
    Bundle::write(out, &records, manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_has_requested_size_and_is_deterministic() {
        let a = synthetic_tree(150, 7);
        assert_eq!(a.len(), 151);
        let edges: usize = a.iter().map(|r| r.dependencies.len()).sum();
        assert_eq!(edges, 150);
        assert_eq!(a, synthetic_tree(150, 7));
        assert_ne!(a, synthetic_tree(150, 8));
    }

    #[test]
    fn typosquat_names_avoid_collisions() {
        let taken: BTreeSet<String> = ["serrde".to_string()].into();
        assert_eq!(typosquat_name("serde", &BTreeSet::new()), "serrde");
        assert_eq!(typosquat_name("serde", &taken), "serdde");
    }

    #[test]
    fn typosquat_strips_popularity_and_audits() {
        let mut r = CrateRecord::new("anyhow", Version::new(1, 0, 86));
        r.downloads = 300_000_000;
        r.stars = 5000;
        r.authors = vec!["dtolnay".into()];
        r.audits.push(Audit {
            organization: "google".into(),
            criteria: "safe-to-deploy".into(),
            scope: AuditScope::Version(r.version.clone()),
            passed: true,
        });
        let v = typosquat(&r, &BTreeSet::new());
        assert_eq!(v.name, "anyhhow");
        assert_eq!(v.downloads, TYPOSQUAT_DOWNLOADS);
        assert_eq!((v.stars, v.forks), (0, 0));
        assert!(v.audits.is_empty());
        assert_eq!(v.authors, ["anyhhow-dev"]);
        assert_eq!(v.dependencies, r.dependencies);
    }
}
