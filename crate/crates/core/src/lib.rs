//! Finite-state morphology for Malagasy simple verbs.
//!
//! The toolkit compiles a root dictionary (DEMA-VS) through per-stem-class
//! inflection transducers into an allomorph dictionary (DEMA-VSflx), then
//! recognizes conjugated verbs in text with per-affix-class morpheme
//! graphs: prefixes of tense, voice and aspect, the root through an
//! allomorph-matching slot, and suffixes, including verb–pronoun
//! contractions and apostrophe/dash elisions. On top of recognition it
//! enumerates full conjugation paradigms and scores lexical coverage on
//! annotated corpora.
//!
//! Modules follow the pipeline:
//!
//! * [`lexicon`] — dictionary formats and class codes
//! * [`inflect`] — stem-class edit programs, the DEMA-VSflx compiler
//! * [`fst`] — shared path/graph substrate: enumeration and matching
//! * [`morpho`] — affix-class graphs, the analyzer, paradigm generation
//! * [`contraction`] — bound pronouns and elision handling
//! * [`corpus_eval`] — tokenizer and coverage metrics
//! * [`resources`] — loading a resource set from disk

pub mod contraction;
pub mod corpus_eval;
pub mod error;
pub mod fst;
pub mod inflect;
pub mod lexicon;
pub mod morpho;
pub mod resources;

pub use contraction::{analyze_contracted, ContractionPattern};
pub use error::{Error, Result};
pub use inflect::{compile_lexicon, generate_allomorphs, InflectionTransducer};
pub use lexicon::{
    strip_stress, AffixClass, AllomorphEntry, CompatTag, DictEntry, Group, InvariableEntry,
    StemClass,
};
pub use morpho::{
    decode_features, Analysis, BuildOptions, CompiledResources, FeatureBundle, MorphemeGraph,
};
pub use resources::ResourcePaths;
