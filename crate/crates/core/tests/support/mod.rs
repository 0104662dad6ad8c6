//! Shared helpers for the integration suites: loading the shipped resource
//! set and a brute-force segmentation oracle kept independent of the
//! matcher it checks.

use std::collections::BTreeSet;
use std::path::PathBuf;

use mora_core::fst::{Arc, Path};
use mora_core::morpho::{CompiledResources, SegmentRole};
use mora_core::ResourcePaths;

pub fn resource_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../resources")
        .canonicalize()
        .expect("resources directory")
}

pub fn load_resources() -> CompiledResources {
    ResourcePaths::in_dir(resource_dir())
        .load()
        .expect("shipped resources load")
}

/// Canonical comparable shape of one segmentation: lemma, affix class, and
/// the (text, role, value) triple of every segment.
pub type Segmentation = (String, String, Vec<(String, String, String)>);

/// Brute-force oracle: for every affix class, enumerate every resolved
/// path, substitute every allomorph of the class that carries the root
/// tag, concatenate, and keep the segmentations whose concatenation equals
/// the token byte-for-byte. Generate-and-test, sharing no code with the
/// left-to-right matcher inside `analyze_token`.
pub fn oracle_analyses(res: &CompiledResources, token: &str) -> BTreeSet<Segmentation> {
    let mut out = BTreeSet::new();
    let classes: BTreeSet<&str> = res
        .entries()
        .iter()
        .map(|e| e.affix_class.raw())
        .collect();
    for class in classes {
        let paths = res.class_paths(class).expect("class resolved");
        for path in paths {
            substitute(res, class, path, token, &mut out);
        }
    }
    out
}

fn substitute(
    res: &CompiledResources,
    class: &str,
    path: &Path,
    token: &str,
    out: &mut BTreeSet<Segmentation>,
) {
    // collect root choices first; exactly one root slot per path
    let root_tag = path.arcs.iter().find_map(|a| match a {
        Arc::RootSlot(tag) => Some(*tag),
        _ => None,
    });
    let Some(root_tag) = root_tag else { return };
    let candidates: Vec<_> = res
        .allomorphs()
        .iter()
        .filter(|a| a.affix_class.raw() == class && a.compat_tag == root_tag)
        .collect();

    for root in candidates {
        let mut text = String::new();
        let mut segments = Vec::new();
        for arc in &path.arcs {
            match arc {
                Arc::Literal(l) => {
                    let role = l.role.as_ref().expect("roles present after validation");
                    segments.push((
                        l.text.clone(),
                        role.category.as_str().to_string(),
                        role.value.clone(),
                    ));
                    text.push_str(&l.text);
                }
                Arc::RootSlot(_) => {
                    segments.push((
                        root.surface_key.clone(),
                        "root".to_string(),
                        root.lemma.clone(),
                    ));
                    text.push_str(&root.surface_key);
                }
                Arc::Call(_) | Arc::Edit(_) => {}
            }
        }
        if text == token {
            out.insert((root.lemma.clone(), class.to_string(), segments));
        }
    }
}

/// The analyzer's output mapped onto the oracle's shape.
pub fn analyzer_segmentations(res: &CompiledResources, token: &str) -> BTreeSet<Segmentation> {
    res.analyze_token(token)
        .into_iter()
        .map(|a| {
            let segments = a
                .segments
                .iter()
                .map(|s| match &s.role {
                    SegmentRole::Root { lemma } => {
                        (s.text.clone(), "root".to_string(), lemma.clone())
                    }
                    SegmentRole::Morpheme(r) => (
                        s.text.clone(),
                        r.category.as_str().to_string(),
                        r.value.clone(),
                    ),
                })
                .collect();
            (a.lemma, a.affix_class, segments)
        })
        .collect()
}
