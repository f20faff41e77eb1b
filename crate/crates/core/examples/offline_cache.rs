//! Fetching through the cache: the first lookup goes to the sources and is
//! written through, later lookups are served offline.

use semver::Version;
use trustcost::model::{
    AuditsDoc, Cache, Dependency, Fetcher, MemoryFetcher, ModelError, RecordSource, RegistryDoc,
    SourceKind,
};

fn registry_doc(name: &str, version: Version, deps: Vec<Dependency>) -> RegistryDoc {
    RegistryDoc {
        name: name.into(),
        version,
        downloads: 12_000,
        authors: vec!["someone".into()],
        stars: 0,
        forks: 0,
        dependencies: deps,
    }
}

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let cache = Cache::new(dir.path());

    let leaf = Version::new(0, 3, 1);
    let registry = MemoryFetcher::new(SourceKind::Registry)
        .with(
            "app",
            registry_doc(
                "app",
                Version::new(1, 0, 0),
                vec![Dependency {
                    name: "leaf".into(),
                    req: "^0.3".parse()?,
                    version: leaf.clone(),
                }],
            ),
        )
        .with("leaf", registry_doc("leaf", leaf, vec![]));
    let audits = MemoryFetcher::new(SourceKind::Audits).with("leaf", AuditsDoc::default());
    let fetchers: Vec<Box<dyn Fetcher>> = vec![Box::new(registry), Box::new(audits)];

    let online = RecordSource::online(Some(cache.clone()), fetchers);
    let root = online.fetch_record("app", None)?;
    let graph = trustcost::model::resolve_graph(root, |k| online.fetch_key(k))?;
    let cached: Vec<String> = cache.keys()?.iter().map(ToString::to_string).collect();
    println!(
        "fetched {} crates, cached: {}",
        graph.len(),
        cached.join(", ")
    );

    let offline = RecordSource::offline(cache);
    let again = offline.fetch_record("app", None)?;
    println!("offline newest app: {}", again.key());
    match offline.fetch_record("missing", None) {
        Err(ModelError::NetworkUnavailable(why)) => println!("offline miss: {why}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
