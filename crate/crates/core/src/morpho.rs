//! Morpheme-combination graphs: the per-affix-class automata that recognize
//! conjugated forms, the token analyzer built on them, and full-paradigm
//! enumeration.
//!
//! Graphs are written in a text DSL, one file per affix class (`*.affix`).
//! A file headed `affixclass <code>` describes the conjugation of one affix
//! class; a file headed `graph <name>` is a shared suffix graph that other
//! graphs pull in with `CALL:<name>`. Each path line is a sequence of slots
//! followed by `->` and optional annotations:
//!
//! ```text
//! affixclass a8ps42Bo
//! {TENSE:present:"m"|TENSE:past:"n"|TENSE:future:"h"} VOICE:act_stat:"i" ROOT:0 ->
//! {TENSE:past:"no"|TENSE:future:"ho"|_} ROOT:ina CALL:vs_ina_obj ->
//! ROOT:imprt IMPERATIVE:o:"o" ->
//! ```
//!
//! Slot forms: `ROLE:value:"literal"`, `ROOT:<tag>`, `CALL:<name>`,
//! `PRONOUN:@` (one branch per bound pronoun in the pronoun table), and
//! `{a|b|_}` alternation where `_` skips the slot. A quoted empty literal
//! is a zero morpheme: it carries its role into the analysis without
//! consuming text, and is only legal on paths that also carry a pronoun or
//! an elision mark. The annotation `voice=<value>` declares the voice of a
//! path whose morphemes do not spell it out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::contraction::{self, ContractionPattern};
use crate::error::{Error, Result};
use crate::fst::{
    self, AllomorphIndex, Arc, Branch, Graph, MatchTrace, Path, PathExpr, SegmentKind, Slot,
};
use crate::inflect::{compile_lexicon, CompileStats, InflectionTransducer};
use crate::lexicon::{nfc, AllomorphEntry, CompatTag, DictEntry, Group, InvariableEntry};

// ---------------------------------------------------------------------------
// Roles and features
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleCategory {
    Tense,
    Voice,
    Aspect,
    SuffixVoice,
    Imperative,
    Pronoun,
    ElisionMark,
}

impl RoleCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            RoleCategory::Tense => "tense",
            RoleCategory::Voice => "voice",
            RoleCategory::Aspect => "aspect",
            RoleCategory::SuffixVoice => "suffix_voice",
            RoleCategory::Imperative => "imperative",
            RoleCategory::Pronoun => "pronoun",
            RoleCategory::ElisionMark => "elision_mark",
        }
    }
}

/// A grammatical annotation on one literal arc: what the morpheme marks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphemeRole {
    pub category: RoleCategory,
    pub value: String,
}

impl MorphemeRole {
    pub fn new(category: RoleCategory, value: impl Into<String>) -> Self {
        MorphemeRole {
            category,
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Tense {
    #[default]
    Present,
    Past,
    Future,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Voice {
    ActStat,
    Obj,
    Loc,
    Circ,
    AgiInst,
    #[default]
    Unresolved,
}

impl Voice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "act_stat" => Some(Voice::ActStat),
            "obj" => Some(Voice::Obj),
            "loc" => Some(Voice::Loc),
            "circ" => Some(Voice::Circ),
            "agi_inst" => Some(Voice::AgiInst),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Voice::ActStat => "act_stat",
            Voice::Obj => "obj",
            Voice::Loc => "loc",
            Voice::Circ => "circ",
            Voice::AgiInst => "agi_inst",
            Voice::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Aspect {
    #[default]
    Neutral,
    Aha,
    Voa,
    Tafa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Indicative,
    Imperative,
}

/// A bound pronoun recovered from a contraction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PronounRef {
    pub form: String,
    pub person: String,
}

/// The decoded grammatical features of one analysis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Default)]
pub struct FeatureBundle {
    pub tense: Tense,
    pub voice: Voice,
    pub aspect: Aspect,
    pub mode: Mode,
    pub pronoun: Option<PronounRef>,
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tense = match self.tense {
            Tense::Present => "present",
            Tense::Past => "past",
            Tense::Future => "future",
        };
        let aspect = match self.aspect {
            Aspect::Neutral => "neutral",
            Aspect::Aha => "aha",
            Aspect::Voa => "voa",
            Aspect::Tafa => "tafa",
        };
        let mode = match self.mode {
            Mode::Indicative => "indicative",
            Mode::Imperative => "imperative",
        };
        write!(
            f,
            "tense={tense} voice={} aspect={aspect} mode={mode}",
            self.voice.as_str()
        )?;
        if let Some(p) = &self.pronoun {
            write!(f, " pron={}({})", p.form, p.person)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Analyses
// ---------------------------------------------------------------------------

/// What one span of the token realizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SegmentRole {
    /// The root slot; carries the lemma of the consumed allomorph.
    Root { lemma: String },
    Morpheme(MorphemeRole),
}

/// One morpheme span of an analyzed token.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub role: SegmentRole,
}

impl Serialize for Segment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Segment", 3)?;
        s.serialize_field("text", &self.text)?;
        match &self.role {
            SegmentRole::Root { lemma } => {
                s.serialize_field("role", "root")?;
                s.serialize_field("value", lemma)?;
            }
            SegmentRole::Morpheme(role) => {
                s.serialize_field("role", role.category.as_str())?;
                s.serialize_field("value", &role.value)?;
            }
        }
        s.end()
    }
}

/// One segmentation of a token into labeled morphemes. Segment spans
/// partition the token exactly; there is exactly one root segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    #[serde(skip)]
    pub token: String,
    pub lemma: String,
    pub affix_class: String,
    #[serde(skip)]
    pub group: Group,
    pub segments: Vec<Segment>,
    pub features: FeatureBundle,
}

impl Analysis {
    pub fn root_segment(&self) -> Option<&Segment> {
        self.segments
            .iter()
            .find(|s| matches!(s.role, SegmentRole::Root { .. }))
    }

    /// Human-readable segmentation like `no-jere-∅(obj)-ny`.
    pub fn segmentation(&self) -> String {
        self.segments
            .iter()
            .map(|s| {
                let text = if s.text.is_empty() { "∅" } else { &s.text };
                match &s.role {
                    SegmentRole::Root { lemma } => format!("{text}[{lemma}]"),
                    SegmentRole::Morpheme(r) => format!("{text}({})", r.value),
                }
            })
            .collect::<Vec<_>>()
            .join("-")
    }
}

// ---------------------------------------------------------------------------
// Graph DSL
// ---------------------------------------------------------------------------

/// Whether a DSL file defines the graph of an affix class or a shared
/// suffix graph that other graphs call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    AffixClass,
    Shared,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SpecBranch {
    Literal(MorphemeRole, String),
    Root(CompatTag),
    Call(String),
    /// `PRONOUN:@` — expands to one branch per bound pronoun.
    Pronouns,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SpecSlot {
    pub(crate) branches: Vec<SpecBranch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SpecPath {
    pub(crate) slots: Vec<SpecSlot>,
    pub(crate) voice_default: Option<Voice>,
}

/// A parsed (but not yet resolved) morpheme graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphemeGraph {
    pub name: String,
    pub kind: GraphKind,
    pub(crate) paths: Vec<SpecPath>,
}

impl MorphemeGraph {
    /// True if any path carries a `PRONOUN:@` slot directly.
    pub fn embeds_pronouns(&self) -> bool {
        self.paths.iter().any(|p| {
            p.slots
                .iter()
                .any(|s| s.branches.iter().any(|b| matches!(b, SpecBranch::Pronouns)))
        })
    }

    /// True if any path carries an elision-mark literal directly.
    pub fn has_elision(&self) -> bool {
        self.paths.iter().any(|p| {
            p.slots.iter().any(|s| {
                s.branches.iter().any(|b| {
                    matches!(b, SpecBranch::Literal(role, _) if role.category == RoleCategory::ElisionMark)
                })
            })
        })
    }

    /// Names of graphs this one calls.
    pub fn call_targets(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &self.paths {
            for s in &p.slots {
                for b in &s.branches {
                    if let SpecBranch::Call(name) = b {
                        out.insert(name.clone());
                    }
                }
            }
        }
        out
    }

    /// Expand the spec into the substrate graph, one pronoun branch per
    /// table entry. The pronoun role value records the pronoun's features.
    pub(crate) fn to_fst_graph(&self, pronouns: &[InvariableEntry]) -> Graph {
        let mut g = Graph::new(self.name.clone());
        for path in &self.paths {
            let mut slots = Vec::new();
            for slot in &path.slots {
                let mut branches = Vec::new();
                for b in &slot.branches {
                    match b {
                        SpecBranch::Literal(role, text) => branches
                            .push(Branch::Arc(Arc::literal(text.clone(), Some(role.clone())))),
                        SpecBranch::Root(tag) => branches.push(Branch::Arc(Arc::RootSlot(*tag))),
                        SpecBranch::Call(name) => branches.push(Branch::Arc(Arc::Call(name.clone()))),
                        SpecBranch::Pronouns => {
                            for p in pronouns {
                                let value = if p.features.is_empty() {
                                    p.form.clone()
                                } else {
                                    p.features.join("+")
                                };
                                branches.push(Branch::Arc(Arc::literal(
                                    p.form.clone(),
                                    Some(MorphemeRole::new(RoleCategory::Pronoun, value)),
                                )));
                            }
                        }
                        SpecBranch::Skip => branches.push(Branch::Skip),
                    }
                }
                slots.push(Slot { branches });
            }
            let tags = match path.voice_default {
                Some(v) => vec![format!("voice={}", v.as_str())],
                None => Vec::new(),
            };
            g.paths.push(PathExpr::new(slots, tags));
        }
        g
    }
}

fn role_value_table(category: RoleCategory) -> &'static [&'static str] {
    match category {
        RoleCategory::Tense => &["present", "past", "future"],
        RoleCategory::Voice | RoleCategory::SuffixVoice => {
            &["act_stat", "obj", "loc", "circ", "agi_inst"]
        }
        RoleCategory::Aspect => &["aha", "voa", "tafa"],
        RoleCategory::Imperative => &["a", "o", "y"],
        RoleCategory::ElisionMark => &["apostrophe", "dash"],
        RoleCategory::Pronoun => &[],
    }
}

fn is_surface_char(c: char) -> bool {
    crate::lexicon::is_lexical_char(c) || c == '\'' || c == '-'
}

fn parse_atom(tok: &str, line: usize) -> Result<SpecBranch> {
    if tok == "PRONOUN:@" {
        return Ok(SpecBranch::Pronouns);
    }
    if let Some(rest) = tok.strip_prefix("ROOT:") {
        let tag: CompatTag = rest
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("unknown root tag `{rest}`")))?;
        return Ok(SpecBranch::Root(tag));
    }
    if let Some(rest) = tok.strip_prefix("CALL:") {
        if rest.is_empty() {
            return Err(Error::parse(line, 1, "CALL needs a graph name"));
        }
        return Ok(SpecBranch::Call(rest.to_string()));
    }

    let (cat_str, rest) = tok
        .split_once(':')
        .ok_or_else(|| Error::parse(line, 1, format!("malformed slot `{tok}`")))?;
    let category = match cat_str {
        "TENSE" => RoleCategory::Tense,
        "VOICE" => RoleCategory::Voice,
        "ASPECT" => RoleCategory::Aspect,
        "SUFFIX_VOICE" => RoleCategory::SuffixVoice,
        "IMPERATIVE" => RoleCategory::Imperative,
        "ELISION_MARK" => RoleCategory::ElisionMark,
        other => return Err(Error::parse(line, 1, format!("unknown role `{other}`"))),
    };
    let (value, quoted) = rest
        .split_once(':')
        .ok_or_else(|| Error::parse(line, 1, format!("slot `{tok}` needs role:value:\"literal\"")))?;
    if !role_value_table(category).contains(&value) {
        return Err(Error::parse(
            line,
            1,
            format!("value `{value}` not in the {} table", category.as_str()),
        ));
    }
    let text = quoted
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .ok_or_else(|| Error::parse(line, 1, format!("literal in `{tok}` must be quoted")))?;
    let text = nfc(text);
    if !text.chars().all(is_surface_char) {
        return Err(Error::parse(
            line,
            1,
            format!("literal `{text}` is not over the surface alphabet"),
        ));
    }
    Ok(SpecBranch::Literal(MorphemeRole::new(category, value), text))
}

fn parse_slot(tok: &str, line: usize) -> Result<SpecSlot> {
    if let Some(inner) = tok.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let mut branches = Vec::new();
        for part in inner.split('|') {
            let part = part.trim();
            if part == "_" {
                branches.push(SpecBranch::Skip);
            } else if part.is_empty() {
                return Err(Error::parse(line, 1, "empty alternation branch (use `_`)"));
            } else {
                let b = parse_atom(part, line)?;
                if matches!(b, SpecBranch::Root(_)) {
                    return Err(Error::parse(line, 1, "ROOT is not allowed inside alternation"));
                }
                branches.push(b);
            }
        }
        if branches.is_empty() {
            return Err(Error::parse(line, 1, "empty alternation"));
        }
        Ok(SpecSlot { branches })
    } else {
        Ok(SpecSlot {
            branches: vec![parse_atom(tok, line)?],
        })
    }
}

/// Parse one `*.affix` file into a morpheme graph.
pub fn parse_graph_dsl(text: &str) -> Result<MorphemeGraph> {
    let mut header: Option<(String, GraphKind)> = None;
    let mut paths = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("affixclass ") {
            if header.is_some() {
                return Err(Error::parse(line_no, 1, "duplicate header"));
            }
            header = Some((rest.trim().to_string(), GraphKind::AffixClass));
            continue;
        }
        if let Some(rest) = line.strip_prefix("graph ") {
            if header.is_some() {
                return Err(Error::parse(line_no, 1, "duplicate header"));
            }
            header = Some((rest.trim().to_string(), GraphKind::Shared));
            continue;
        }
        let (name, kind) = header
            .as_ref()
            .ok_or_else(|| Error::parse(line_no, 1, "expected `affixclass <code>` or `graph <name>` header first"))?;
        if name.is_empty() {
            return Err(Error::parse(line_no, 1, "empty graph name"));
        }

        let (slots_part, anno_part) = line
            .split_once("->")
            .ok_or_else(|| Error::parse(line_no, 1, "path line needs `->`"))?;

        let mut slots = Vec::new();
        for tok in slots_part.split_whitespace() {
            slots.push(parse_slot(tok, line_no)?);
        }

        let mut voice_default = None;
        for anno in anno_part.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match anno.split_once('=') {
                Some(("voice", v)) => {
                    let voice = Voice::parse(v)
                        .ok_or_else(|| Error::parse(line_no, 1, format!("unknown voice `{v}`")))?;
                    if voice_default.replace(voice).is_some() {
                        return Err(Error::parse(line_no, 1, "duplicate voice annotation"));
                    }
                }
                _ => return Err(Error::parse(line_no, 1, format!("unknown annotation `{anno}`"))),
            }
        }

        let roots = slots
            .iter()
            .flat_map(|s| &s.branches)
            .filter(|b| matches!(b, SpecBranch::Root(_)))
            .count();
        match kind {
            GraphKind::AffixClass if roots != 1 => {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("path must contain exactly one ROOT slot, found {roots}"),
                ));
            }
            GraphKind::Shared if roots != 0 => {
                return Err(Error::parse(line_no, 1, "shared graphs cannot contain ROOT slots"));
            }
            _ => {}
        }

        paths.push(SpecPath {
            slots,
            voice_default,
        });
    }

    let (name, kind) = header.ok_or_else(|| Error::parse(1, 1, "missing graph header"))?;
    if paths.is_empty() {
        return Err(Error::parse(1, 1, format!("graph {name} has no paths")));
    }
    Ok(MorphemeGraph { name, kind, paths })
}

// ---------------------------------------------------------------------------
// Compiled resources
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub max_call_depth: usize,
    pub paradigm_ceiling: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_call_depth: fst::DEFAULT_MAX_CALL_DEPTH,
            paradigm_ceiling: DEFAULT_PARADIGM_CEILING,
        }
    }
}

/// Upper bound on paradigm size; a class/stem combination that enumerates
/// past this is treated as a resource bug.
pub const DEFAULT_PARADIGM_CEILING: usize = 1000;

#[derive(Debug)]
struct ClassResources {
    paths: Vec<Path>,
    index: AllomorphIndex,
}

/// Everything the analyzer needs, compiled and frozen: the root dictionary,
/// the allomorph dictionary generated from it, resolved morpheme graphs per
/// affix class, invariable words and the bound pronoun table. Immutable
/// after construction; queries may run concurrently.
#[derive(Debug)]
pub struct CompiledResources {
    entries: Vec<DictEntry>,
    allomorphs: Vec<AllomorphEntry>,
    stats: CompileStats,
    classes: BTreeMap<String, ClassResources>,
    invariables: Vec<InvariableEntry>,
    pronouns: Vec<InvariableEntry>,
    patterns: BTreeMap<String, ContractionPattern>,
    paradigm_ceiling: usize,
}

impl CompiledResources {
    pub fn build(
        entries: Vec<DictEntry>,
        transducers: BTreeMap<String, InflectionTransducer>,
        graphs: Vec<MorphemeGraph>,
        invariables: Vec<InvariableEntry>,
        pronouns: Vec<InvariableEntry>,
        options: BuildOptions,
    ) -> Result<Self> {
        let (allomorphs, stats) = compile_lexicon(&entries, &transducers)?;

        let mut specs: BTreeMap<String, MorphemeGraph> = BTreeMap::new();
        for g in graphs {
            if specs.insert(g.name.clone(), g.clone()).is_some() {
                return Err(Error::GraphIntegrity {
                    graph: g.name,
                    message: "defined twice".into(),
                });
            }
        }

        let needed: BTreeSet<String> = entries
            .iter()
            .map(|e| e.affix_class.raw().to_string())
            .collect();
        let missing: Vec<String> = needed
            .iter()
            .filter(|c| {
                !specs
                    .get(*c)
                    .map(|g| g.kind == GraphKind::AffixClass)
                    .unwrap_or(false)
            })
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingAffixClasses(missing));
        }

        let patterns = contraction::classify_patterns(&specs, &needed)?;

        let registry: BTreeMap<String, Graph> = specs
            .iter()
            .map(|(name, spec)| (name.clone(), spec.to_fst_graph(&pronouns)))
            .collect();

        let mut classes = BTreeMap::new();
        for class in &needed {
            let paths = registry[class].enumerate_paths(&registry, options.max_call_depth)?;
            for path in &paths {
                validate_resolved_path(class, path)?;
            }
            let index = AllomorphIndex::build(
                allomorphs
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.affix_class.raw() == class.as_str()),
            );
            classes.insert(class.clone(), ClassResources { paths, index });
        }

        Ok(CompiledResources {
            entries,
            allomorphs,
            stats,
            classes,
            invariables,
            pronouns,
            patterns,
            paradigm_ceiling: options.paradigm_ceiling,
        })
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn allomorphs(&self) -> &[AllomorphEntry] {
        &self.allomorphs
    }

    pub fn compile_stats(&self) -> CompileStats {
        self.stats
    }

    pub fn invariables(&self) -> &[InvariableEntry] {
        &self.invariables
    }

    pub fn pronouns(&self) -> &[InvariableEntry] {
        &self.pronouns
    }

    pub fn contraction_patterns(&self) -> &BTreeMap<String, ContractionPattern> {
        &self.patterns
    }

    pub fn paradigm_ceiling(&self) -> usize {
        self.paradigm_ceiling
    }

    pub fn entry(&self, lemma: &str) -> Option<&DictEntry> {
        let lemma = nfc(lemma);
        self.entries.iter().find(|e| e.lemma == lemma)
    }

    pub fn invariable(&self, form: &str) -> Option<&InvariableEntry> {
        self.invariables.iter().find(|e| e.form == form)
    }

    /// Resolved recognition paths of one affix class.
    pub fn class_paths(&self, affix_class: &str) -> Option<&[Path]> {
        self.classes.get(affix_class).map(|c| c.paths.as_slice())
    }

    /// Every segmentation of a normalized token, deduplicated, ordered by
    /// lemma then by graph path. The empty list means the token is not a
    /// recognized verb form.
    pub fn analyze_token(&self, token: &str) -> Vec<Analysis> {
        let mut out: Vec<Analysis> = Vec::new();
        for cls in self.classes.values() {
            for trace in fst::match_token(&cls.paths, token, &self.allomorphs, &cls.index) {
                let analysis = self.analysis_from_trace(token, &trace);
                if !out.iter().any(|a| {
                    a.lemma == analysis.lemma
                        && a.affix_class == analysis.affix_class
                        && a.segments == analysis.segments
                }) {
                    out.push(analysis);
                }
            }
        }
        out.sort_by(|a, b| a.lemma.cmp(&b.lemma));
        out
    }

    fn analysis_from_trace(&self, token: &str, trace: &MatchTrace) -> Analysis {
        let mut segments = Vec::new();
        let mut lemma = String::new();
        let mut affix_class = String::new();
        let mut group = Group::Gc1;
        for seg in &trace.segments {
            let role = match &seg.kind {
                SegmentKind::Root { allomorph } => {
                    let entry = &self.allomorphs[*allomorph];
                    lemma = entry.lemma.clone();
                    affix_class = entry.affix_class.raw().to_string();
                    group = entry.group;
                    SegmentRole::Root {
                        lemma: entry.lemma.clone(),
                    }
                }
                SegmentKind::Literal(role) => SegmentRole::Morpheme(
                    role.clone()
                        .unwrap_or_else(|| MorphemeRole::new(RoleCategory::Tense, "present")),
                ),
            };
            segments.push(Segment {
                start: seg.start,
                end: seg.end,
                text: seg.text.clone(),
                role,
            });
        }
        Analysis {
            token: token.to_string(),
            lemma,
            affix_class,
            group,
            features: decode_features(trace),
            segments,
        }
    }

    /// Enumerate every conjugated form of one root: the class paths minus
    /// pronoun/elision contractions, with the entry's own allomorphs
    /// substituted into the root slot. Every returned form analyzes back to
    /// the entry. Sorted and deduplicated.
    pub fn generate_paradigm(&self, entry: &DictEntry) -> Result<Vec<(String, FeatureBundle)>> {
        let class = entry.affix_class.raw();
        let cls = self
            .classes
            .get(class)
            .ok_or_else(|| Error::MissingAffixClasses(vec![class.to_string()]))?;

        let own: Vec<(usize, &AllomorphEntry)> = self
            .allomorphs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.lemma == entry.lemma && a.affix_class.raw() == class)
            .collect();

        let mut out: Vec<(String, FeatureBundle)> = Vec::new();
        for (path_index, path) in cls.paths.iter().enumerate() {
            let contracted = path.has_role(|r| {
                matches!(r.category, RoleCategory::Pronoun | RoleCategory::ElisionMark)
            });
            if contracted {
                continue;
            }
            let root_choices: Vec<&(usize, &AllomorphEntry)> = own
                .iter()
                .filter(|(_, a)| {
                    path.arcs
                        .iter()
                        .any(|arc| matches!(arc, Arc::RootSlot(tag) if *tag == a.compat_tag))
                })
                .collect();
            for (id, allo) in root_choices {
                let mut form = String::new();
                let mut segments = Vec::new();
                for arc in &path.arcs {
                    let (text, kind) = match arc {
                        Arc::Literal(l) => (l.text.clone(), SegmentKind::Literal(l.role.clone())),
                        Arc::RootSlot(_) => (
                            allo.surface_key.clone(),
                            SegmentKind::Root { allomorph: *id },
                        ),
                        Arc::Call(_) | Arc::Edit(_) => continue,
                    };
                    let start = form.len();
                    form.push_str(&text);
                    segments.push(fst::TraceSegment {
                        start,
                        end: form.len(),
                        text,
                        kind,
                    });
                }
                let trace = MatchTrace {
                    path_index,
                    tags: path.tags.clone(),
                    segments,
                };
                let features = decode_features(&trace);
                if !out.iter().any(|(f, feat)| *f == form && *feat == features) {
                    out.push((form, features));
                }
            }
        }
        out.sort();
        if out.len() > self.paradigm_ceiling {
            return Err(Error::ParadigmCeiling {
                lemma: entry.lemma.clone(),
                ceiling: self.paradigm_ceiling,
            });
        }
        Ok(out)
    }
}

/// Structural checks on a fully expanded path, run at load time: exactly
/// one root slot, no conflicting role values, zero morphemes only next to a
/// pronoun or elision mark, roles on every literal.
fn validate_resolved_path(graph: &str, path: &Path) -> Result<()> {
    let integrity = |message: String| Error::GraphIntegrity {
        graph: graph.to_string(),
        message,
    };

    if path.root_slots() != 1 {
        return Err(integrity(format!(
            "resolved path has {} root slots",
            path.root_slots()
        )));
    }

    let mut seen: BTreeMap<&'static str, &str> = BTreeMap::new();
    let mut has_contraction_mark = false;
    let mut has_zero_literal = false;
    for arc in &path.arcs {
        if let Arc::Literal(lit) = arc {
            let role = lit
                .role
                .as_ref()
                .ok_or_else(|| integrity("literal arc without a role".into()))?;
            if lit.text.is_empty() {
                has_zero_literal = true;
            }
            let family = match role.category {
                RoleCategory::Voice | RoleCategory::SuffixVoice => "voice",
                RoleCategory::Tense => "tense",
                RoleCategory::Aspect => "aspect",
                RoleCategory::Imperative => "imperative",
                RoleCategory::Pronoun => {
                    has_contraction_mark = true;
                    "pronoun"
                }
                RoleCategory::ElisionMark => {
                    has_contraction_mark = true;
                    "elision"
                }
            };
            if let Some(prev) = seen.get(family) {
                if *prev != role.value {
                    return Err(integrity(format!(
                        "conflicting {family} values `{prev}` and `{}` on one path",
                        role.value
                    )));
                }
            }
            seen.insert(family, &role.value);
        }
    }
    for tag in &path.tags {
        if let Some(v) = tag.strip_prefix("voice=") {
            if let Some(prev) = seen.get("voice") {
                if *prev != v {
                    return Err(integrity(format!(
                        "voice annotation `{v}` conflicts with morpheme voice `{prev}`"
                    )));
                }
            }
        }
    }
    if has_zero_literal && !has_contraction_mark {
        return Err(integrity(
            "zero morpheme on a path without pronoun or elision mark".into(),
        ));
    }
    Ok(())
}

/// Map the role annotations of one trace to a feature bundle. Tense
/// defaults to present when no tense morpheme is present; voice falls back
/// to the path's `voice=` annotation and otherwise stays unresolved;
/// an imperative morpheme switches the mode.
pub fn decode_features(trace: &MatchTrace) -> FeatureBundle {
    let mut features = FeatureBundle::default();
    for seg in &trace.segments {
        let role = match &seg.kind {
            SegmentKind::Literal(Some(role)) => role,
            _ => continue,
        };
        match role.category {
            RoleCategory::Tense => {
                features.tense = match role.value.as_str() {
                    "past" => Tense::Past,
                    "future" => Tense::Future,
                    _ => Tense::Present,
                }
            }
            RoleCategory::Aspect => {
                features.aspect = match role.value.as_str() {
                    "aha" => Aspect::Aha,
                    "voa" => Aspect::Voa,
                    "tafa" => Aspect::Tafa,
                    _ => Aspect::Neutral,
                }
            }
            RoleCategory::Voice | RoleCategory::SuffixVoice => {
                if let Some(v) = Voice::parse(&role.value) {
                    features.voice = v;
                }
            }
            RoleCategory::Imperative => features.mode = Mode::Imperative,
            RoleCategory::Pronoun => {
                features.pronoun = Some(PronounRef {
                    form: seg.text.clone(),
                    person: role.value.clone(),
                })
            }
            RoleCategory::ElisionMark => {}
        }
    }
    if features.voice == Voice::Unresolved {
        for tag in &trace.tags {
            if let Some(v) = tag.strip_prefix("voice=").and_then(Voice::parse) {
                features.voice = v;
            }
        }
    }
    features
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fst::TraceSegment;

    fn seg(start: usize, text: &str, kind: SegmentKind) -> TraceSegment {
        TraceSegment {
            start,
            end: start + text.len(),
            text: text.to_string(),
            kind,
        }
    }

    fn lit_seg(start: usize, text: &str, category: RoleCategory, value: &str) -> TraceSegment {
        seg(
            start,
            text,
            SegmentKind::Literal(Some(MorphemeRole::new(category, value))),
        )
    }

    #[test]
    fn parses_affix_class_with_alternation_and_calls() {
        let g = parse_graph_dsl(
            "affixclass a8ps42Bo\n\
             {TENSE:present:\"m\"|TENSE:past:\"n\"|TENSE:future:\"h\"} VOICE:act_stat:\"i\" ROOT:0 ->\n\
             {TENSE:past:\"no\"|TENSE:future:\"ho\"|_} ROOT:ina CALL:vs_ina_obj ->\n\
             ROOT:imprt IMPERATIVE:o:\"o\" ->\n",
        )
        .unwrap();
        assert_eq!(g.name, "a8ps42Bo");
        assert_eq!(g.kind, GraphKind::AffixClass);
        assert_eq!(g.paths.len(), 3);
        assert_eq!(g.call_targets().len(), 1);
        assert!(!g.embeds_pronouns());
    }

    #[test]
    fn rejects_paths_with_zero_or_two_roots() {
        assert!(parse_graph_dsl("affixclass x\nROOT:0 ROOT:ana ->\n").is_err());
        assert!(parse_graph_dsl("affixclass x\nTENSE:present:\"m\" ->\n").is_err());
    }

    #[test]
    fn minimal_bare_root_graph() {
        let g = parse_graph_dsl("affixclass t\nROOT:0 -> \n").unwrap();
        assert_eq!(g.paths.len(), 1);
        assert_eq!(g.paths[0].slots.len(), 1);
    }

    #[test]
    fn rejects_unknown_roles_and_values() {
        assert!(parse_graph_dsl("affixclass x\nMOOD:a:\"m\" ROOT:0 ->\n").is_err());
        assert!(parse_graph_dsl("affixclass x\nTENSE:gnomic:\"m\" ROOT:0 ->\n").is_err());
        assert!(parse_graph_dsl("affixclass x\nROOT:xyz ->\n").is_err());
    }

    #[test]
    fn voice_annotation_parses_and_unknown_annotation_rejects() {
        let g = parse_graph_dsl("affixclass x\nTENSE:present:\"m\" ROOT:0 -> voice=act_stat\n")
            .unwrap();
        assert_eq!(g.paths[0].voice_default, Some(Voice::ActStat));
        assert!(parse_graph_dsl("affixclass x\nROOT:0 -> mood=real\n").is_err());
    }

    #[test]
    fn decode_past_objective_with_pronoun() {
        // no- + root + zero objective marker + bound pronoun
        let trace = MatchTrace {
            path_index: 0,
            tags: vec![],
            segments: vec![
                lit_seg(0, "no", RoleCategory::Tense, "past"),
                seg(2, "jere", SegmentKind::Root { allomorph: 0 }),
                lit_seg(6, "", RoleCategory::SuffixVoice, "obj"),
                lit_seg(6, "ny", RoleCategory::Pronoun, "pers:3"),
            ],
        };
        let f = decode_features(&trace);
        assert_eq!(f.tense, Tense::Past);
        assert_eq!(f.voice, Voice::Obj);
        assert_eq!(f.mode, Mode::Indicative);
        assert_eq!(f.pronoun.as_ref().unwrap().form, "ny");
    }

    #[test]
    fn decode_present_active() {
        let trace = MatchTrace {
            path_index: 0,
            tags: vec![],
            segments: vec![
                lit_seg(0, "m", RoleCategory::Tense, "present"),
                lit_seg(1, "i", RoleCategory::Voice, "act_stat"),
                seg(2, "tondra", SegmentKind::Root { allomorph: 0 }),
            ],
        };
        let f = decode_features(&trace);
        assert_eq!(f.tense, Tense::Present);
        assert_eq!(f.voice, Voice::ActStat);
        assert_eq!(f.aspect, Aspect::Neutral);
    }

    #[test]
    fn decode_aspect_with_absent_tense() {
        let trace = MatchTrace {
            path_index: 0,
            tags: vec![],
            segments: vec![
                lit_seg(0, "tafa", RoleCategory::Aspect, "tafa"),
                seg(4, "andro", SegmentKind::Root { allomorph: 0 }),
            ],
        };
        let f = decode_features(&trace);
        assert_eq!(f.tense, Tense::Present);
        assert_eq!(f.aspect, Aspect::Tafa);
        assert_eq!(f.voice, Voice::Unresolved);
    }

    #[test]
    fn voice_annotation_feeds_decoding() {
        let trace = MatchTrace {
            path_index: 0,
            tags: vec!["voice=act_stat".to_string()],
            segments: vec![
                lit_seg(0, "m", RoleCategory::Tense, "present"),
                seg(1, "andro", SegmentKind::Root { allomorph: 0 }),
            ],
        };
        assert_eq!(decode_features(&trace).voice, Voice::ActStat);
    }

    #[test]
    fn segment_serializes_to_text_role_value() {
        let s = Segment {
            start: 0,
            end: 2,
            text: "no".into(),
            role: SegmentRole::Morpheme(MorphemeRole::new(RoleCategory::Tense, "past")),
        };
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"text": "no", "role": "tense", "value": "past"})
        );
    }
}
