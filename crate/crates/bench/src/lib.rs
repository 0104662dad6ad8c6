//! Shared fixtures for the benchmark suite.

use std::path::PathBuf;

use mora_core::morpho::CompiledResources;
use mora_core::ResourcePaths;

/// The resource set shipped at the workspace root.
pub fn resource_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../resources")
        .canonicalize()
        .expect("resources directory")
}

pub fn load_resources() -> CompiledResources {
    ResourcePaths::in_dir(resource_dir())
        .load()
        .expect("resources load")
}

/// A token mix of real conjugated forms and rejects.
pub fn sample_tokens() -> Vec<String> {
    let res = load_resources();
    let mut tokens = Vec::new();
    for entry in res.entries() {
        for (form, _) in res.generate_paradigm(entry).expect("paradigm") {
            tokens.push(form);
        }
    }
    let rejects: Vec<String> = tokens.iter().map(|t| format!("{t}x")).collect();
    tokens.extend(rejects);
    tokens
}
