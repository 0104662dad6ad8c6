//! Loading a resource set from disk.
//!
//! A set consists of the DEMA-VS root dictionary, a directory of `*.stem`
//! inflection transducers, a directory of `*.affix` morpheme graphs, the
//! DEMA-INVflx invariable dictionary and the bound pronoun table. Every
//! file must exist and parse before any query runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::contraction::parse_pronoun_table;
use crate::error::{Error, Result};
use crate::inflect::{parse_transducer_dsl, InflectionTransducer};
use crate::lexicon::{parse_dema_invflx, parse_dema_vs};
use crate::morpho::{parse_graph_dsl, BuildOptions, CompiledResources, MorphemeGraph};

/// Paths to the five resource files plus build knobs.
#[derive(Debug, Clone)]
pub struct ResourcePaths {
    pub dema_vs: PathBuf,
    pub stem_dir: PathBuf,
    pub affix_dir: PathBuf,
    pub dema_invflx: PathBuf,
    pub pronouns: PathBuf,
    pub options: BuildOptions,
}

impl ResourcePaths {
    /// Conventional layout under one directory: `dema_vs.dic`, `stems/`,
    /// `affixes/`, `dema_invflx.dic`, `pronouns.tbl`.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        ResourcePaths {
            dema_vs: dir.join("dema_vs.dic"),
            stem_dir: dir.join("stems"),
            affix_dir: dir.join("affixes"),
            dema_invflx: dir.join("dema_invflx.dic"),
            pronouns: dir.join("pronouns.tbl"),
            options: BuildOptions::default(),
        }
    }

    pub fn load(&self) -> Result<CompiledResources> {
        let entries = parse_dema_vs(&read(&self.dema_vs)?)
            .map_err(|e| e.in_file(self.dema_vs.display().to_string()))?;

        let mut transducers: BTreeMap<String, InflectionTransducer> = BTreeMap::new();
        for path in files_with_extension(&self.stem_dir, "stem")? {
            let t = parse_transducer_dsl(&read(&path)?)
                .map_err(|e| e.in_file(path.display().to_string()))?;
            if transducers.insert(t.name.clone(), t).is_some() {
                return Err(Error::GraphIntegrity {
                    graph: path.display().to_string(),
                    message: "stem class defined twice".into(),
                });
            }
        }

        let mut graphs: Vec<MorphemeGraph> = Vec::new();
        for path in files_with_extension(&self.affix_dir, "affix")? {
            graphs.push(
                parse_graph_dsl(&read(&path)?)
                    .map_err(|e| e.in_file(path.display().to_string()))?,
            );
        }

        let invariables = parse_dema_invflx(&read(&self.dema_invflx)?)
            .map_err(|e| e.in_file(self.dema_invflx.display().to_string()))?;
        let pronouns = parse_pronoun_table(&read(&self.pronouns)?)
            .map_err(|e| e.in_file(self.pronouns.display().to_string()))?;

        CompiledResources::build(
            entries,
            transducers,
            graphs,
            invariables,
            pronouns,
            self.options,
        )
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path.display().to_string()))
}

/// Directory entries with the given extension, sorted by name so loading
/// order (and thus every downstream ordering) is stable.
fn files_with_extension(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let entries =
        fs::read_dir(dir).map_err(|e| Error::from(e).in_file(dir.display().to_string()))?;
    for entry in entries {
        let path = entry?.path();
        if path.extension().map(|e| e == ext).unwrap_or(false) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}
