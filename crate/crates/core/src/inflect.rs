//! Inflection transducers: per-stem-class edit programs that turn a lemma
//! into its allomorphs, and the compiler that builds the DEMA-VSflx
//! allomorph dictionary from a DEMA-VS root dictionary.
//!
//! Transducers are written in a small text DSL, one file per stem class
//! (`*.stem`). The header names the class, then each line is one path: a
//! sequence of edit operations, `->`, and the compatibility tags the
//! resulting allomorph carries.
//!
//! ```text
//! class 0av(1)
//! KEEP -> 0
//! MOVE_STRESS_TO_FINAL_VOWEL -> ana,a,imprt
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lexicon::{
    acute, is_lexical_char, is_vowel, nfc, strip_stress, AllomorphEntry, CompatTag, DictEntry,
};

/// One edit operation over a lemma. Strings are restricted to the lexical
/// alphabet; counts are at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditOp {
    DeleteLast(usize),
    DeleteFirst(usize),
    Append(String),
    Prepend(String),
    /// Remove every stress mark, then put an acute accent on the last vowel.
    MoveStressToFinalVowel,
    /// Remove every stress mark.
    DropStress,
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::DeleteLast(n) => write!(f, "DELETE_LAST {n}"),
            EditOp::DeleteFirst(n) => write!(f, "DELETE_FIRST {n}"),
            EditOp::Append(s) => write!(f, "APPEND {s}"),
            EditOp::Prepend(s) => write!(f, "PREPEND {s}"),
            EditOp::MoveStressToFinalVowel => f.write_str("MOVE_STRESS_TO_FINAL_VOWEL"),
            EditOp::DropStress => f.write_str("DROP_STRESS"),
        }
    }
}

/// One transducer path: an edit program plus the tags carried by the
/// allomorph it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditPath {
    pub edits: Vec<EditOp>,
    pub tags: Vec<CompatTag>,
}

/// The inflection transducer for one stem class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflectionTransducer {
    pub name: String,
    pub paths: Vec<EditPath>,
}

impl InflectionTransducer {
    /// True if some path yields the untouched lemma with tag `0`. Every
    /// class is expected to keep its bare root.
    pub fn has_bare_root_path(&self) -> bool {
        self.paths
            .iter()
            .any(|p| p.edits.is_empty() && p.tags.contains(&CompatTag::Zero))
    }
}

// ---------------------------------------------------------------------------
// DSL parsing
// ---------------------------------------------------------------------------

fn parse_count(tok: Option<&str>, line: usize, op: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, 1, format!("{op} needs a count")))?;
    let n: usize = tok
        .parse()
        .map_err(|_| Error::parse(line, 1, format!("{op}: `{tok}` is not a count")))?;
    if n == 0 {
        return Err(Error::parse(line, 1, format!("{op}: count must be at least 1")));
    }
    Ok(n)
}

fn parse_literal(tok: Option<&str>, line: usize, op: &str) -> Result<String> {
    let tok = tok.ok_or_else(|| Error::parse(line, 1, format!("{op} needs a string")))?;
    let s = nfc(tok);
    if s.is_empty() || !s.chars().all(is_lexical_char) {
        return Err(Error::parse(
            line,
            1,
            format!("{op}: `{tok}` is not a lexical-alphabet string"),
        ));
    }
    Ok(s)
}

/// Parse one `*.stem` file.
pub fn parse_transducer_dsl(text: &str) -> Result<InflectionTransducer> {
    let mut name: Option<String> = None;
    let mut paths = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("class ") {
            if name.is_some() {
                return Err(Error::parse(line_no, 1, "duplicate class header"));
            }
            let code = rest.trim();
            if code.is_empty() {
                return Err(Error::parse(line_no, 1, "empty class code"));
            }
            name = Some(code.to_string());
            continue;
        }
        if name.is_none() {
            return Err(Error::parse(line_no, 1, "expected `class <code>` header first"));
        }

        let (ops_part, tags_part) = line
            .split_once("->")
            .ok_or_else(|| Error::parse(line_no, 1, "path line needs `->` before its tags"))?;

        let mut edits = Vec::new();
        let mut toks = ops_part.split_whitespace().peekable();
        let mut saw_keep = false;
        while let Some(tok) = toks.next() {
            match tok {
                "KEEP" => saw_keep = true,
                "DELETE_LAST" => edits.push(EditOp::DeleteLast(parse_count(
                    toks.next(),
                    line_no,
                    "DELETE_LAST",
                )?)),
                "DELETE_FIRST" => edits.push(EditOp::DeleteFirst(parse_count(
                    toks.next(),
                    line_no,
                    "DELETE_FIRST",
                )?)),
                "APPEND" => edits.push(EditOp::Append(parse_literal(toks.next(), line_no, "APPEND")?)),
                "PREPEND" => {
                    edits.push(EditOp::Prepend(parse_literal(toks.next(), line_no, "PREPEND")?))
                }
                "MOVE_STRESS_TO_FINAL_VOWEL" => edits.push(EditOp::MoveStressToFinalVowel),
                "DROP_STRESS" => edits.push(EditOp::DropStress),
                other => {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("unknown edit operation `{other}`"),
                    ))
                }
            }
        }
        if saw_keep && !edits.is_empty() {
            return Err(Error::parse(line_no, 1, "KEEP cannot be combined with edits"));
        }
        if !saw_keep && edits.is_empty() {
            return Err(Error::parse(line_no, 1, "empty edit program (use KEEP)"));
        }

        let tags: Vec<CompatTag> = tags_part
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(line_no, 1, format!("unknown tag `{t}`")))
            })
            .collect::<Result<_>>()?;
        if tags.is_empty() {
            return Err(Error::parse(line_no, 1, "path carries no tags"));
        }

        paths.push(EditPath { edits, tags });
    }

    let name = name.ok_or_else(|| Error::parse(1, 1, "missing `class <code>` header"))?;
    if paths.is_empty() {
        return Err(Error::parse(1, 1, format!("class {name} has no paths")));
    }
    Ok(InflectionTransducer { name, paths })
}

// ---------------------------------------------------------------------------
// Edit application
// ---------------------------------------------------------------------------

fn edit_error(lemma: &str, path: usize, reason: impl Into<String>) -> Error {
    Error::Edit {
        lemma: lemma.to_string(),
        path,
        reason: reason.into(),
    }
}

/// Apply an edit program to a lemma. Fails on underflow (deleting more
/// characters than remain), on a stress shift with no vowel to land on, or
/// when the result would be empty.
pub fn apply_edits(lemma: &str, edits: &[EditOp], path_idx: usize) -> Result<String> {
    let mut chars: Vec<char> = nfc(lemma).chars().collect();
    for op in edits {
        match op {
            EditOp::DeleteLast(n) => {
                if *n >= chars.len() {
                    return Err(edit_error(
                        lemma,
                        path_idx,
                        format!("DELETE_LAST {n} underflows `{lemma}`"),
                    ));
                }
                chars.truncate(chars.len() - n);
            }
            EditOp::DeleteFirst(n) => {
                if *n >= chars.len() {
                    return Err(edit_error(
                        lemma,
                        path_idx,
                        format!("DELETE_FIRST {n} underflows `{lemma}`"),
                    ));
                }
                chars.drain(..*n);
            }
            EditOp::Append(s) => chars.extend(s.chars()),
            EditOp::Prepend(s) => {
                let mut next: Vec<char> = s.chars().collect();
                next.extend(chars);
                chars = next;
            }
            EditOp::DropStress => {
                let plain = strip_stress(&chars.iter().collect::<String>());
                chars = plain.chars().collect();
            }
            EditOp::MoveStressToFinalVowel => {
                let plain = strip_stress(&chars.iter().collect::<String>());
                chars = plain.chars().collect();
                let pos = chars.iter().rposition(|c| is_vowel(*c)).ok_or_else(|| {
                    edit_error(lemma, path_idx, "no vowel to carry the shifted stress")
                })?;
                chars[pos] = acute(chars[pos]).expect("stressable vowel");
            }
        }
    }
    if chars.is_empty() {
        return Err(edit_error(lemma, path_idx, "edits produced an empty form"));
    }
    Ok(chars.into_iter().collect())
}

// ---------------------------------------------------------------------------
// Allomorph generation
// ---------------------------------------------------------------------------

/// Run one entry through its class transducer. Yields one allomorph entry
/// per (path, tag) pair in declaration order, with exact duplicates
/// (same form and tag) collapsed.
pub fn generate_allomorphs(
    entry: &DictEntry,
    transducer: &InflectionTransducer,
) -> Result<Vec<AllomorphEntry>> {
    if transducer.name != entry.stem_class.raw() {
        return Err(edit_error(
            &entry.lemma,
            0,
            format!(
                "transducer `{}` does not match stem class `{}`",
                transducer.name,
                entry.stem_class.raw()
            ),
        ));
    }
    let mut out: Vec<AllomorphEntry> = Vec::new();
    for (idx, path) in transducer.paths.iter().enumerate() {
        let form = apply_edits(&entry.lemma, &path.edits, idx)?;
        for tag in &path.tags {
            let candidate = AllomorphEntry::new(
                form.clone(),
                entry.lemma.clone(),
                entry.affix_class.clone(),
                entry.group,
                *tag,
            );
            if !out
                .iter()
                .any(|e| e.form == candidate.form && e.compat_tag == candidate.compat_tag)
            {
                out.push(candidate);
            }
        }
    }
    Ok(out)
}

/// Counters reported by [`compile_lexicon`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompileStats {
    pub roots: usize,
    pub entries: usize,
    pub mean_variants_per_root: f64,
}

/// Compile a whole root dictionary into allomorph entries. Output order is
/// input order, then path order, so re-compiling is byte-identical. Missing
/// transducers are collected across all entries before failing.
pub fn compile_lexicon(
    entries: &[DictEntry],
    registry: &BTreeMap<String, InflectionTransducer>,
) -> Result<(Vec<AllomorphEntry>, CompileStats)> {
    let mut missing: Vec<String> = Vec::new();
    for entry in entries {
        let class = entry.stem_class.raw();
        if !registry.contains_key(class) && !missing.iter().any(|m| m == class) {
            missing.push(class.to_string());
        }
    }
    if !missing.is_empty() {
        missing.sort();
        return Err(Error::MissingStemClasses(missing));
    }

    let mut out = Vec::new();
    for entry in entries {
        let transducer = &registry[entry.stem_class.raw()];
        out.extend(generate_allomorphs(entry, transducer)?);
    }
    let stats = CompileStats {
        roots: entries.len(),
        entries: out.len(),
        mean_variants_per_root: if entries.is_empty() {
            0.0
        } else {
            out.len() as f64 / entries.len() as f64
        },
    };
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_dema_vs_line;

    fn registry(sources: &[&str]) -> BTreeMap<String, InflectionTransducer> {
        sources
            .iter()
            .map(|src| {
                let t = parse_transducer_dsl(src).unwrap();
                (t.name.clone(), t)
            })
            .collect()
    }

    const ANDRO_CLASS: &str = "class 0av(1)\nKEEP -> 0\nMOVE_STRESS_TO_FINAL_VOWEL -> ana,a,imprt\n";
    const ANDRIANA_CLASS: &str =
        "class 3iv\nKEEP -> 0\nDELETE_LAST 1 MOVE_STRESS_TO_FINAL_VOWEL -> ana,ina,a,imprt\n";

    #[test]
    fn parses_documented_edit_program() {
        let t = parse_transducer_dsl(
            "class 0are\nKEEP -> 0\nDELETE_FIRST 1 -> 0\nDELETE_FIRST 1 MOVE_STRESS_TO_FINAL_VOWEL APPEND z -> ana,imprt\nMOVE_STRESS_TO_FINAL_VOWEL APPEND z -> ana,imprt\n",
        )
        .unwrap();
        assert_eq!(t.name, "0are");
        assert_eq!(t.paths.len(), 4);
        assert_eq!(t.paths[0].edits, vec![]);
        assert_eq!(t.paths[0].tags, vec![CompatTag::Zero]);
        assert_eq!(t.paths[2].edits.len(), 3);
    }

    #[test]
    fn rejects_headers_without_paths() {
        assert!(parse_transducer_dsl("class X\n").is_err());
    }

    #[test]
    fn minimal_single_path_class() {
        let t = parse_transducer_dsl("class 0iv\nKEEP -> 0").unwrap();
        assert_eq!(t.paths.len(), 1);
        assert!(t.has_bare_root_path());
    }

    #[test]
    fn rejects_unknown_op_and_missing_tags() {
        assert!(parse_transducer_dsl("class x\nSWAP 1 -> 0").is_err());
        assert!(parse_transducer_dsl("class x\nKEEP ->").is_err());
        assert!(parse_transducer_dsl("class x\nKEEP -> 0\nclass y\nKEEP -> 0").is_err());
    }

    #[test]
    fn stress_shift_strips_then_accents_last_vowel() {
        assert_eq!(
            apply_edits("àndro", &[EditOp::MoveStressToFinalVowel], 0).unwrap(),
            "andró"
        );
        assert_eq!(
            apply_edits(
                "andriana",
                &[EditOp::DeleteLast(1), EditOp::MoveStressToFinalVowel],
                0
            )
            .unwrap(),
            "andrián"
        );
        assert_eq!(apply_edits("àndro", &[EditOp::DropStress], 0).unwrap(), "andro");
    }

    #[test]
    fn edit_underflow_reports_lemma_and_path() {
        let err = apply_edits("ào", &[EditOp::DeleteLast(2)], 3).unwrap_err();
        match err {
            Error::Edit { lemma, path, .. } => {
                assert_eq!(lemma, "ào");
                assert_eq!(path, 3);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn andro_block_matches_printed_allomorphs() {
        let entry = parse_dema_vs_line("àndro,V0av(1)+a1ps20vAy+gc1").unwrap();
        let reg = registry(&[ANDRO_CLASS]);
        let out = generate_allomorphs(&entry, &reg["0av(1)"]).unwrap();
        let lines: Vec<String> = out.iter().map(|e| e.serialize_line()).collect();
        assert_eq!(
            lines,
            vec![
                "àndro,àndro.V+a1ps20vAy+gc1+0",
                "andró,àndro.V+a1ps20vAy+gc1+ana",
                "andró,àndro.V+a1ps20vAy+gc1+a",
                "andró,àndro.V+a1ps20vAy+gc1+imprt",
            ]
        );
    }

    #[test]
    fn andriana_block_matches_printed_allomorphs() {
        let entry = parse_dema_vs_line("andriana,V3iv+a16v2Jo+gc3").unwrap();
        let reg = registry(&[ANDRIANA_CLASS]);
        let out = generate_allomorphs(&entry, &reg["3iv"]).unwrap();
        let lines: Vec<String> = out.iter().map(|e| e.serialize_line()).collect();
        assert_eq!(
            lines,
            vec![
                "andriana,andriana.V+a16v2Jo+gc3+0",
                "andrián,andriana.V+a16v2Jo+gc3+ana",
                "andrián,andriana.V+a16v2Jo+gc3+ina",
                "andrián,andriana.V+a16v2Jo+gc3+a",
                "andrián,andriana.V+a16v2Jo+gc3+imprt",
            ]
        );
    }

    #[test]
    fn compile_produces_nine_lines_for_the_two_sample_roots() {
        let entries = vec![
            parse_dema_vs_line("andriana,V3iv+a16v2Jo+gc3").unwrap(),
            parse_dema_vs_line("àndro,V0av(1)+a1ps20vAy+gc1").unwrap(),
        ];
        let reg = registry(&[ANDRO_CLASS, ANDRIANA_CLASS]);
        let (out, stats) = compile_lexicon(&entries, &reg).unwrap();
        assert_eq!(out.len(), 9);
        assert_eq!(stats.roots, 2);
        assert_eq!(stats.entries, 9);
        assert!((stats.mean_variants_per_root - 4.5).abs() < 1e-12);
        // deterministic: recompiling is byte-identical
        let (again, _) = compile_lexicon(&entries, &reg).unwrap();
        assert_eq!(
            crate::lexicon::serialize_dema_vsflx(&out),
            crate::lexicon::serialize_dema_vsflx(&again)
        );
    }

    #[test]
    fn compile_empty_lexicon() {
        let reg = registry(&[ANDRO_CLASS]);
        let (out, stats) = compile_lexicon(&[], &reg).unwrap();
        assert!(out.is_empty());
        assert_eq!(stats.roots, 0);
        assert_eq!(stats.mean_variants_per_root, 0.0);
    }

    #[test]
    fn compile_collects_all_missing_classes() {
        let entries = vec![
            parse_dema_vs_line("andriana,V3iv+a16v2Jo+gc3").unwrap(),
            parse_dema_vs_line("àndro,V0av(1)+a1ps20vAy+gc1").unwrap(),
        ];
        let err = compile_lexicon(&entries, &BTreeMap::new()).unwrap_err();
        match err {
            Error::MissingStemClasses(classes) => {
                assert_eq!(classes, vec!["0av(1)", "3iv"]);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn duplicate_form_tag_pairs_collapse() {
        let entry = parse_dema_vs_line("àndro,V0av(1)+a1ps20vAy+gc1").unwrap();
        let t = parse_transducer_dsl("class 0av(1)\nKEEP -> 0\nKEEP -> 0,ana\n").unwrap();
        let out = generate_allomorphs(&entry, &t).unwrap();
        assert_eq!(out.len(), 2); // àndro+0 once, àndro+ana once
    }
}
