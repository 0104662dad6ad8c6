//! Verb–pronoun contractions and apostrophe/dash elisions.
//!
//! A conjugated verb can fuse with a bound personal pronoun (`nojerena` +
//! `ny` -> `nojereny`, with the objective marker reduced to zero) or lose
//! its ending before the next word, leaving a trailing apostrophe or dash
//! (`noraisin'`, `hanaovan-`). The word-final machinery lives in the
//! morpheme graphs: an affix class either embeds pronoun arcs directly in
//! its own paths or calls one of the shared suffix graphs. Bound pronouns
//! come from a dedicated table file (`pronouns.tbl`); free pronouns live in
//! DEMA-INVflx.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{nfc, InvariableEntry};
use crate::morpho::{Analysis, CompiledResources, MorphemeGraph, RoleCategory, SegmentRole};

/// How one affix-class graph reaches pronouns and elision marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionPattern {
    /// Pronoun arcs sit directly in the class's own paths.
    Embedded,
    /// The class calls a shared contraction suffix graph.
    SharedCall,
    /// No contraction support.
    Plain,
}

/// Parse `pronouns.tbl`: one bound pronoun per line, `form, features`,
/// features `+`-separated (`ny, pers:3`). Entries come out as PRO rows so
/// they can be reported uniformly with DEMA-INVflx entries.
pub fn parse_pronoun_table(text: &str) -> Result<Vec<InvariableEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (form, feats) = match line.split_once(',') {
            Some((f, rest)) => (f.trim(), rest.trim()),
            None => (line, ""),
        };
        if form.is_empty() {
            return Err(Error::parse(idx + 1, 1, "empty pronoun form"));
        }
        let features: Vec<String> = feats
            .split('+')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        out.push(InvariableEntry {
            form: nfc(form),
            pos: "PRO".into(),
            subcat: None,
            features,
        });
    }
    Ok(out)
}

/// Decide, for every affix class in use, whether it embeds pronouns, calls
/// a contraction suffix graph, or supports no contractions. Call targets
/// are chased transitively; a call to a missing graph is an error.
pub fn classify_patterns(
    specs: &BTreeMap<String, MorphemeGraph>,
    affix_classes: &BTreeSet<String>,
) -> Result<BTreeMap<String, ContractionPattern>> {
    let mut out = BTreeMap::new();
    for class in affix_classes {
        let spec = specs
            .get(class)
            .ok_or_else(|| Error::UnresolvedGraph(class.clone()))?;
        let pattern = if spec.embeds_pronouns() {
            ContractionPattern::Embedded
        } else if calls_contraction_graph(spec, specs, &mut BTreeSet::new())? {
            ContractionPattern::SharedCall
        } else if spec.has_elision() {
            ContractionPattern::Embedded
        } else {
            ContractionPattern::Plain
        };
        out.insert(class.clone(), pattern);
    }
    Ok(out)
}

fn calls_contraction_graph(
    spec: &MorphemeGraph,
    specs: &BTreeMap<String, MorphemeGraph>,
    visited: &mut BTreeSet<String>,
) -> Result<bool> {
    for target in spec.call_targets() {
        if !visited.insert(target.clone()) {
            continue;
        }
        let callee = specs
            .get(&target)
            .ok_or_else(|| Error::UnresolvedGraph(target.clone()))?;
        if callee.embeds_pronouns()
            || callee.has_elision()
            || calls_contraction_graph(callee, specs, visited)?
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Analyses of a token whose final segment is a bound pronoun or an
/// elision mark. Tokens ending in an apostrophe or dash can only come out
/// of elision paths, so the plain analyzer already restricts them; this is
/// the contraction-only view of its output.
pub fn analyze_contracted(token: &str, resources: &CompiledResources) -> Vec<Analysis> {
    resources
        .analyze_token(token)
        .into_iter()
        .filter(|a| {
            a.segments
                .last()
                .map(|s| {
                    matches!(
                        &s.role,
                        SegmentRole::Morpheme(r)
                            if matches!(r.category, RoleCategory::Pronoun | RoleCategory::ElisionMark)
                    )
                })
                .unwrap_or(false)
        })
        .collect()
}
