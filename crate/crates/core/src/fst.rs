//! Minimal transducer substrate shared by inflection transducers and
//! morpheme graphs: labeled arcs, series-parallel path expressions with
//! bounded subgraph calls, exhaustive path enumeration, and exact token
//! matching against an allomorph index.
//!
//! Graphs here are acyclic apart from nested calls, which are expanded up
//! to a fixed depth, so every enumeration is finite and total. Matching is
//! plain string matching over pre-normalized text; there are no weights.
//! Resolved graphs and indexes are immutable, so queries are safe to run
//! concurrently without synchronization.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::inflect::{EditOp, InflectionTransducer};
use crate::lexicon::{AllomorphEntry, CompatTag};
use crate::morpho::MorphemeRole;

/// Call-nesting budget used when none is configured. The shipped resources
/// nest suffix graphs one level deep; pronoun graphs would add a second.
pub const DEFAULT_MAX_CALL_DEPTH: usize = 4;

/// A surface morpheme arc. `text` may be empty only for role-carrying zero
/// morphemes, which graph validation restricts to contraction paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub text: String,
    pub role: Option<MorphemeRole>,
}

/// One labeled transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arc {
    /// A concrete surface string, possibly annotated with a morpheme role.
    Literal(Literal),
    /// A slot consuming any indexed allomorph that carries the tag.
    RootSlot(CompatTag),
    /// A reference to another graph in the registry, inlined on resolution.
    Call(String),
    /// An edit instruction (inflection transducers only).
    Edit(EditOp),
}

impl Arc {
    pub fn literal(text: impl Into<String>, role: Option<MorphemeRole>) -> Self {
        Arc::Literal(Literal {
            text: text.into(),
            role,
        })
    }
}

/// One accepting path: a flat arc sequence plus the symbolic tags attached
/// to its end (compatibility tags for inflection paths, feature annotations
/// for morpheme paths).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub arcs: Vec<Arc>,
    pub tags: Vec<String>,
}

impl Path {
    pub fn has_role(&self, pred: impl Fn(&MorphemeRole) -> bool) -> bool {
        self.arcs.iter().any(|a| match a {
            Arc::Literal(l) => l.role.as_ref().map(&pred).unwrap_or(false),
            _ => false,
        })
    }

    pub fn root_slots(&self) -> usize {
        self.arcs
            .iter()
            .filter(|a| matches!(a, Arc::RootSlot(_)))
            .count()
    }
}

// ---------------------------------------------------------------------------
// Series-parallel graph expressions
// ---------------------------------------------------------------------------

/// One alternative inside a slot. `Skip` contributes no arc at all, which is
/// distinct from a zero-length literal (the latter still appears as a
/// segment in analyses).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Branch {
    Arc(Arc),
    Skip,
}

/// One position in a path expression: a set of alternative arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub branches: Vec<Branch>,
}

impl Slot {
    pub fn arc(a: Arc) -> Self {
        Slot { branches: vec![Branch::Arc(a)] }
    }
}

/// One declared path: a slot sequence with end tags. A zero-slot path is
/// only accepting when explicitly marked as the empty-string path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathExpr {
    pub slots: Vec<Slot>,
    pub tags: Vec<String>,
    pub accepts_empty: bool,
}

impl PathExpr {
    pub fn new(slots: Vec<Slot>, tags: Vec<String>) -> Self {
        PathExpr {
            slots,
            tags,
            accepts_empty: false,
        }
    }

    /// The explicit empty-string path.
    pub fn empty() -> Self {
        PathExpr {
            slots: Vec::new(),
            tags: Vec::new(),
            accepts_empty: true,
        }
    }
}

/// A named graph: an ordered list of path expressions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    pub name: String,
    pub paths: Vec<PathExpr>,
}

impl Graph {
    pub fn new(name: impl Into<String>) -> Self {
        Graph {
            name: name.into(),
            paths: Vec::new(),
        }
    }

    /// Expand every path expression into flat arc sequences, inlining
    /// subgraph calls from `registry` up to `max_depth` nested levels.
    /// Paths are produced in declaration order, branches in declaration
    /// order within each slot, so the result is lexicographic by arc
    /// choice; exact duplicates are dropped. Branches that would exceed the
    /// depth budget are cut. A call to a name missing from the registry is
    /// an error.
    pub fn enumerate_paths(
        &self,
        registry: &BTreeMap<String, Graph>,
        max_depth: usize,
    ) -> Result<Vec<Path>> {
        let mut out: Vec<Path> = Vec::new();
        for expr in &self.paths {
            if expr.slots.is_empty() && !expr.accepts_empty {
                continue;
            }
            let mut expansions: Vec<Vec<Arc>> = vec![Vec::new()];
            for slot in &expr.slots {
                expansions = expand_slot(&expansions, slot, registry, max_depth)?;
                if expansions.is_empty() {
                    break;
                }
            }
            for arcs in expansions {
                let path = Path {
                    arcs,
                    tags: expr.tags.clone(),
                };
                if !out.contains(&path) {
                    out.push(path);
                }
            }
        }
        Ok(out)
    }
}

fn expand_slot(
    prefixes: &[Vec<Arc>],
    slot: &Slot,
    registry: &BTreeMap<String, Graph>,
    depth_left: usize,
) -> Result<Vec<Vec<Arc>>> {
    let mut out = Vec::new();
    for prefix in prefixes {
        for branch in &slot.branches {
            match branch {
                Branch::Skip => out.push(prefix.clone()),
                Branch::Arc(Arc::Call(name)) => {
                    let callee = registry
                        .get(name)
                        .ok_or_else(|| Error::UnresolvedGraph(name.clone()))?;
                    if depth_left == 0 {
                        continue; // budget exhausted: cut this branch
                    }
                    for sub in callee.enumerate_paths(registry, depth_left - 1)? {
                        let mut arcs = prefix.clone();
                        arcs.extend(sub.arcs);
                        out.push(arcs);
                    }
                }
                Branch::Arc(arc) => {
                    let mut arcs = prefix.clone();
                    arcs.push(arc.clone());
                    out.push(arcs);
                }
            }
        }
    }
    Ok(out)
}

impl InflectionTransducer {
    /// Inflection transducers have no calls or alternation: each declared
    /// path is already flat.
    pub fn enumerate_paths(&self) -> Vec<Path> {
        let mut out: Vec<Path> = Vec::new();
        for p in &self.paths {
            let path = Path {
                arcs: p.edits.iter().cloned().map(Arc::Edit).collect(),
                tags: p.tags.iter().map(|t| t.to_string()).collect(),
            };
            if !out.contains(&path) {
                out.push(path);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Token matching
// ---------------------------------------------------------------------------

/// Surface-key index over a shared allomorph table. Values are positions
/// into the table, so the index carries no lifetimes of its own.
#[derive(Debug, Clone, Default)]
pub struct AllomorphIndex {
    by_surface: BTreeMap<String, Vec<usize>>,
}

impl AllomorphIndex {
    pub fn build<'a>(
        entries: impl IntoIterator<Item = (usize, &'a AllomorphEntry)>,
    ) -> Self {
        let mut by_surface: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (id, entry) in entries {
            by_surface
                .entry(entry.surface_key.clone())
                .or_default()
                .push(id);
        }
        AllomorphIndex { by_surface }
    }

    pub fn lookup(&self, surface: &str) -> &[usize] {
        self.by_surface.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.by_surface.is_empty()
    }
}

/// What one arc consumed during a match.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// A literal arc; carries its role annotation if any.
    Literal(Option<MorphemeRole>),
    /// A root slot; carries the table position of the consumed allomorph.
    Root { allomorph: usize },
}

/// Span of one arc over the token, in bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceSegment {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub kind: SegmentKind,
}

/// One complete match of a token against one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTrace {
    pub path_index: usize,
    pub tags: Vec<String>,
    pub segments: Vec<TraceSegment>,
}

/// Match a token against every path of a resolved graph. A path matches
/// when its arc realizations concatenate to the token exactly; root slots
/// consume any indexed allomorph whose tag matches. Returns every match in
/// path order, then index order, with the consumed span of each arc.
pub fn match_token(
    paths: &[Path],
    token: &str,
    entries: &[AllomorphEntry],
    index: &AllomorphIndex,
) -> Vec<MatchTrace> {
    let mut traces = Vec::new();
    for (path_index, path) in paths.iter().enumerate() {
        let mut stack = Vec::new();
        match_arcs(path, token, 0, 0, entries, index, &mut stack, &mut |segments| {
            traces.push(MatchTrace {
                path_index,
                tags: path.tags.clone(),
                segments,
            });
        });
    }
    traces
}

#[allow(clippy::too_many_arguments)]
fn match_arcs(
    path: &Path,
    token: &str,
    arc_idx: usize,
    pos: usize,
    entries: &[AllomorphEntry],
    index: &AllomorphIndex,
    acc: &mut Vec<TraceSegment>,
    emit: &mut impl FnMut(Vec<TraceSegment>),
) {
    if arc_idx == path.arcs.len() {
        if pos == token.len() {
            emit(acc.clone());
        }
        return;
    }
    match &path.arcs[arc_idx] {
        Arc::Literal(lit) => {
            if token[pos..].starts_with(&lit.text) {
                acc.push(TraceSegment {
                    start: pos,
                    end: pos + lit.text.len(),
                    text: lit.text.clone(),
                    kind: SegmentKind::Literal(lit.role.clone()),
                });
                match_arcs(path, token, arc_idx + 1, pos + lit.text.len(), entries, index, acc, emit);
                acc.pop();
            }
        }
        Arc::RootSlot(tag) => {
            let rest = &token[pos..];
            for (off, _) in rest.char_indices().skip(1).chain([(rest.len(), '\0')]) {
                if off == 0 {
                    continue;
                }
                let candidate = &rest[..off];
                for &id in index.lookup(candidate) {
                    if entries[id].compat_tag != *tag {
                        continue;
                    }
                    acc.push(TraceSegment {
                        start: pos,
                        end: pos + off,
                        text: candidate.to_string(),
                        kind: SegmentKind::Root { allomorph: id },
                    });
                    match_arcs(path, token, arc_idx + 1, pos + off, entries, index, acc, emit);
                    acc.pop();
                }
            }
        }
        // Calls are gone after resolution and edits never occur in
        // recognition paths; neither can consume surface text.
        Arc::Call(_) | Arc::Edit(_) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflect::parse_transducer_dsl;
    use crate::lexicon::{AffixClass, Group};

    fn lit(s: &str) -> Arc {
        Arc::literal(s, None)
    }

    #[test]
    fn parallel_literals_enumerate_in_declaration_order() {
        let mut g = Graph::new("pair");
        g.paths.push(PathExpr::new(
            vec![Slot {
                branches: vec![Branch::Arc(lit("m")), Branch::Arc(lit("n"))],
            }],
            vec![],
        ));
        let paths = g.enumerate_paths(&BTreeMap::new(), 4).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].arcs, vec![lit("m")]);
        assert_eq!(paths[1].arcs, vec![lit("n")]);
    }

    #[test]
    fn explicit_empty_path_enumerates_once() {
        let mut g = Graph::new("eps");
        g.paths.push(PathExpr::empty());
        let paths = g.enumerate_paths(&BTreeMap::new(), 4).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(paths[0].arcs.is_empty());
    }

    #[test]
    fn inflection_transducer_paths_enumerate() {
        let t = parse_transducer_dsl(
            "class 0are\nKEEP -> 0\nDELETE_FIRST 1 -> 0\nDELETE_FIRST 1 DELETE_LAST 1 APPEND az MOVE_STRESS_TO_FINAL_VOWEL -> ana,a\nDELETE_LAST 1 APPEND az MOVE_STRESS_TO_FINAL_VOWEL -> ana,imprt\n",
        )
        .unwrap();
        let paths = t.enumerate_paths();
        assert_eq!(paths.len(), 4);
        assert!(paths[0].arcs.is_empty());
        assert_eq!(paths[3].tags, vec!["ana", "imprt"]);
    }

    #[test]
    fn unresolved_call_names_the_missing_graph() {
        let mut g = Graph::new("caller");
        g.paths.push(PathExpr::new(
            vec![Slot::arc(Arc::Call("ghost".into()))],
            vec![],
        ));
        let err = g.enumerate_paths(&BTreeMap::new(), 4).unwrap_err();
        match err {
            Error::UnresolvedGraph(name) => assert_eq!(name, "ghost"),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn call_depth_budget_cuts_cycles() {
        let mut a = Graph::new("a");
        a.paths.push(PathExpr::new(
            vec![Slot::arc(lit("x"))],
            vec![],
        ));
        a.paths.push(PathExpr::new(
            vec![Slot::arc(lit("y")), Slot::arc(Arc::Call("a".into()))],
            vec![],
        ));
        let registry: BTreeMap<String, Graph> = [("a".to_string(), a.clone())].into();
        let paths = a.enumerate_paths(&registry, 2).unwrap();
        // x, yx, yyx — deeper recursion is cut by the budget
        assert_eq!(paths.len(), 3);
    }

    fn sample_entries() -> Vec<AllomorphEntry> {
        let class = AffixClass::parse("a1ps20vAy").unwrap();
        vec![
            AllomorphEntry::new("àndro".into(), "àndro".into(), class.clone(), Group::Gc1, CompatTag::Zero),
            AllomorphEntry::new("andró".into(), "àndro".into(), class.clone(), Group::Gc1, CompatTag::Ana),
            AllomorphEntry::new("andró".into(), "àndro".into(), class, Group::Gc1, CompatTag::A),
        ]
    }

    #[test]
    fn match_token_consumes_tagged_allomorphs() {
        let entries = sample_entries();
        let index = AllomorphIndex::build(entries.iter().enumerate());
        let paths = vec![
            Path {
                arcs: vec![lit("m"), Arc::RootSlot(CompatTag::Zero)],
                tags: vec![],
            },
            Path {
                arcs: vec![Arc::RootSlot(CompatTag::Ana), lit("ana")],
                tags: vec![],
            },
        ];
        let traces = match_token(&paths, "mandro", &entries, &index);
        assert_eq!(traces.len(), 1);
        let spans: Vec<(usize, usize, &str)> = traces[0]
            .segments
            .iter()
            .map(|s| (s.start, s.end, s.text.as_str()))
            .collect();
        assert_eq!(spans, vec![(0, 1, "m"), (1, 6, "andro")]);

        let traces = match_token(&paths, "androana", &entries, &index);
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0].path_index, 1);

        assert!(match_token(&paths, "xyz", &entries, &index).is_empty());
    }

    #[test]
    fn traces_reconcatenate_to_the_token() {
        let entries = sample_entries();
        let index = AllomorphIndex::build(entries.iter().enumerate());
        let paths = vec![Path {
            arcs: vec![lit("tafa"), Arc::RootSlot(CompatTag::Zero)],
            tags: vec![],
        }];
        for token in ["tafandro", "tafandrox", "tafa"] {
            for trace in match_token(&paths, token, &entries, &index) {
                let rebuilt: String = trace.segments.iter().map(|s| s.text.as_str()).collect();
                assert_eq!(rebuilt, token);
            }
        }
    }

    #[test]
    fn matching_is_deterministic() {
        let entries = sample_entries();
        let index = AllomorphIndex::build(entries.iter().enumerate());
        let paths = vec![Path {
            arcs: vec![lit("m"), Arc::RootSlot(CompatTag::Zero)],
            tags: vec![],
        }];
        let a = match_token(&paths, "mandro", &entries, &index);
        let b = match_token(&paths, "mandro", &entries, &index);
        assert_eq!(a, b);
    }
}
