//! The three dictionary formats and their class codes.
//!
//! * DEMA-VS: root dictionary, one verb per line (`àndro,V0av(1)+a1ps20vAy+gc1`).
//! * DEMA-VSflx: allomorph dictionary (`andró,àndro.V+a1ps20vAy+gc1+ana`).
//! * DEMA-INVflx: invariable words (`aho,PRO(NV)+pers:1s`).
//!
//! All files are UTF-8, NFC-normalized on read, one entry per line, LF line
//! endings. Lines starting with `#` are comments. A single space after the
//! separating comma is accepted on input; canonical serialization emits none.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Vowels that can carry a stress mark. `u` is not part of the native
/// alphabet and is never stressed.
pub const STRESSABLE_VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'y'];

const GRAVE: [(char, char); 5] = [('à', 'a'), ('è', 'e'), ('ì', 'i'), ('ò', 'o'), ('ỳ', 'y')];
const ACUTE: [(char, char); 5] = [('á', 'a'), ('é', 'e'), ('í', 'i'), ('ó', 'o'), ('ý', 'y')];

/// NFC-normalize a string. Dictionary text may arrive with combining marks;
/// everything downstream assumes precomposed accented vowels.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Map every accented vowel to its plain counterpart. Stress is marked in
/// the lexicon but generally absent from running text, so all surface
/// matching happens on stripped keys. Idempotent.
pub fn strip_stress(form: &str) -> String {
    nfc(form)
        .chars()
        .map(|c| {
            GRAVE
                .iter()
                .chain(ACUTE.iter())
                .find(|(accented, _)| *accented == c)
                .map(|(_, plain)| *plain)
                .unwrap_or(c)
        })
        .collect()
}

/// True for characters permitted in lemmas and allomorph forms.
pub fn is_lexical_char(c: char) -> bool {
    c.is_ascii_lowercase()
        || GRAVE.iter().any(|(a, _)| *a == c)
        || ACUTE.iter().any(|(a, _)| *a == c)
}

/// Put an acute accent on a plain vowel.
pub fn acute(c: char) -> Option<char> {
    ACUTE.iter().find(|(_, plain)| *plain == c).map(|(a, _)| *a)
}

/// True if the (plain) character counts as a vowel for stress placement.
pub fn is_vowel(c: char) -> bool {
    STRESSABLE_VOWELS.contains(&c)
}

// ---------------------------------------------------------------------------
// Class codes
// ---------------------------------------------------------------------------

/// The `-ka` / `-tra` / `-na` ending distinction, first field of a stem
/// class code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StemEnding {
    None,
    Ka,
    Tra,
    Na,
}

impl StemEnding {
    pub fn from_digit(d: char) -> Option<Self> {
        match d {
            '0' => Some(StemEnding::None),
            '1' => Some(StemEnding::Ka),
            '2' => Some(StemEnding::Tra),
            '3' => Some(StemEnding::Na),
            _ => None,
        }
    }

    pub fn digit(self) -> char {
        match self {
            StemEnding::None => '0',
            StemEnding::Ka => '1',
            StemEnding::Tra => '2',
            StemEnding::Na => '3',
        }
    }
}

/// A stem class code such as `0av(1)` or `3iv`: ending digit, `-ina`
/// acceptance letter, then a free-form contact-phenomena field. The
/// phenomena field is carried opaquely; each class maps to a hand-written
/// inflection transducer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StemClass {
    raw: String,
    pub ending: StemEnding,
    pub ina_accepting: bool,
    pub phenomena: String,
}

impl StemClass {
    pub fn parse(code: &str) -> Result<Self> {
        let mut chars = code.chars();
        let ending = chars
            .next()
            .and_then(StemEnding::from_digit)
            .ok_or_else(|| Error::parse(1, 1, format!("stem class `{code}`: first character must be an ending digit 0-3")))?;
        let ina_accepting = match chars.next() {
            Some('i') => true,
            Some('a') => false,
            _ => {
                return Err(Error::parse(
                    1,
                    2,
                    format!("stem class `{code}`: second character must be `i` or `a`"),
                ))
            }
        };
        Ok(StemClass {
            raw: code.to_string(),
            ending,
            ina_accepting,
            phenomena: chars.collect(),
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    /// Filesystem-safe name for the class: parentheses become underscores.
    pub fn file_stem(&self) -> String {
        self.raw.replace(['(', ')'], "_")
    }
}

impl fmt::Display for StemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// An affix class code such as `a1ps20vAy`. Beyond the leading character
/// (imperative with `-a` when it is `a`) the code is an opaque key into the
/// morpheme graph registry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AffixClass {
    raw: String,
    pub imperative_a: bool,
}

impl AffixClass {
    pub fn parse(code: &str) -> Result<Self> {
        if code.is_empty() {
            return Err(Error::parse(1, 1, "empty affix class code"));
        }
        Ok(AffixClass {
            raw: code.to_string(),
            imperative_a: code.starts_with('a'),
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }
}

impl fmt::Display for AffixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// Conjugation group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Gc1,
    Gc2,
    Gc3,
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gc1" => Ok(Group::Gc1),
            "gc2" => Ok(Group::Gc2),
            "gc3" => Ok(Group::Gc3),
            _ => Err(Error::parse(1, 1, format!("unknown conjugation group `{s}`"))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Gc1 => "gc1",
            Group::Gc2 => "gc2",
            Group::Gc3 => "gc3",
        })
    }
}

/// Suffix-compatibility tag attached to each allomorph: which suffix family
/// the variant may precede. `0` marks the variant used with no suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompatTag {
    Zero,
    Ana,
    Ina,
    A,
    Imprt,
}

impl CompatTag {
    pub const ALL: [CompatTag; 5] = [
        CompatTag::Zero,
        CompatTag::Ana,
        CompatTag::Ina,
        CompatTag::A,
        CompatTag::Imprt,
    ];
}

impl FromStr for CompatTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(CompatTag::Zero),
            "ana" => Ok(CompatTag::Ana),
            "ina" => Ok(CompatTag::Ina),
            "a" => Ok(CompatTag::A),
            "imprt" => Ok(CompatTag::Imprt),
            _ => Err(Error::parse(1, 1, format!("unknown compatibility tag `{s}`"))),
        }
    }
}

impl fmt::Display for CompatTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompatTag::Zero => "0",
            CompatTag::Ana => "ana",
            CompatTag::Ina => "ina",
            CompatTag::A => "a",
            CompatTag::Imprt => "imprt",
        })
    }
}

// ---------------------------------------------------------------------------
// Entries
// ---------------------------------------------------------------------------

/// One DEMA-VS line: an accented lemma with its stem class, affix class and
/// conjugation group. Part of speech is fixed to `V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DictEntry {
    pub lemma: String,
    pub stem_class: StemClass,
    pub affix_class: AffixClass,
    pub group: Group,
}

impl DictEntry {
    pub fn serialize_line(&self) -> String {
        format!(
            "{},V{}+{}+{}",
            self.lemma, self.stem_class, self.affix_class, self.group
        )
    }
}

/// One DEMA-VSflx line: a stem variant, the lemma it belongs to, the codes
/// it inherits and the suffix-compatibility tag. `surface_key` is the
/// stress-stripped form used for matching in text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AllomorphEntry {
    pub form: String,
    pub surface_key: String,
    pub lemma: String,
    pub affix_class: AffixClass,
    pub group: Group,
    pub compat_tag: CompatTag,
}

impl AllomorphEntry {
    pub fn new(
        form: String,
        lemma: String,
        affix_class: AffixClass,
        group: Group,
        compat_tag: CompatTag,
    ) -> Self {
        let surface_key = strip_stress(&form);
        AllomorphEntry {
            form,
            surface_key,
            lemma,
            affix_class,
            group,
            compat_tag,
        }
    }

    pub fn serialize_line(&self) -> String {
        format!(
            "{},{}.V+{}+{}+{}",
            self.form, self.lemma, self.affix_class, self.group, self.compat_tag
        )
    }
}

/// One DEMA-INVflx line: an invariable word with its part of speech, an
/// optional subcategory in parentheses, and feature tags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InvariableEntry {
    pub form: String,
    pub pos: String,
    pub subcat: Option<String>,
    pub features: Vec<String>,
}

impl InvariableEntry {
    pub fn serialize_line(&self) -> String {
        let mut out = format!("{},{}", self.form, self.pos);
        if let Some(sub) = &self.subcat {
            out.push('(');
            out.push_str(sub);
            out.push(')');
        }
        for feat in &self.features {
            out.push('+');
            out.push_str(feat);
        }
        out
    }

    /// First value of a `key:value` feature, e.g. `pers:1s` -> `1s`.
    pub fn feature(&self, key: &str) -> Option<&str> {
        self.features
            .iter()
            .find_map(|f| f.strip_prefix(key).and_then(|rest| rest.strip_prefix(':')))
    }
}

// ---------------------------------------------------------------------------
// Line parsers
// ---------------------------------------------------------------------------

fn split_comma(line: &str) -> Result<(&str, &str)> {
    let idx = line
        .find(',')
        .ok_or_else(|| Error::parse(1, line.chars().count().max(1), "missing comma"))?;
    let head = &line[..idx];
    // One space after the comma is tolerated on input.
    let tail = line[idx + 1..].strip_prefix(' ').unwrap_or(&line[idx + 1..]);
    Ok((head, tail))
}

fn check_lemma(lemma: &str, col: usize) -> Result<()> {
    if lemma.is_empty() {
        return Err(Error::parse(1, col, "empty lemma"));
    }
    if let Some(bad) = lemma.chars().find(|c| !is_lexical_char(*c)) {
        return Err(Error::parse(
            1,
            col,
            format!("character `{bad}` not allowed in lemma `{lemma}`"),
        ));
    }
    Ok(())
}

/// Parse one DEMA-VS line, e.g. `àndro,V0av(1)+a1ps20vAy+gc1`.
pub fn parse_dema_vs_line(line: &str) -> Result<DictEntry> {
    let line = nfc(line.trim_end());
    let (lemma, codes) = split_comma(&line)?;
    check_lemma(lemma, 1)?;
    let col = lemma.chars().count() + 2;
    let mut fields = codes.split('+');
    let first = fields.next().unwrap_or("");
    let stem_code = first
        .strip_prefix('V')
        .ok_or_else(|| Error::parse(1, col, format!("expected `V` + stem class, got `{first}`")))?;
    if stem_code.is_empty() {
        return Err(Error::parse(1, col, "empty stem class code"));
    }
    let stem_class = StemClass::parse(stem_code).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(1, col, message),
        other => other,
    })?;
    let affix_raw = fields
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::parse(1, col, "missing affix class field"))?;
    let affix_class = AffixClass::parse(affix_raw)?;
    let group_raw = fields
        .next()
        .ok_or_else(|| Error::parse(1, col, "missing conjugation group field"))?;
    let group: Group = group_raw
        .parse()
        .map_err(|_| Error::parse(1, col, format!("unknown conjugation group `{group_raw}`")))?;
    if let Some(extra) = fields.next() {
        return Err(Error::parse(1, col, format!("unexpected trailing field `{extra}`")));
    }
    Ok(DictEntry {
        lemma: lemma.to_string(),
        stem_class,
        affix_class,
        group,
    })
}

/// Parse one DEMA-VSflx line, e.g. `andró,àndro.V+a1ps20vAy+gc1+ana`.
pub fn parse_dema_vsflx_line(line: &str) -> Result<AllomorphEntry> {
    let line = nfc(line.trim_end());
    let (form, rest) = split_comma(&line)?;
    check_lemma(form, 1)?;
    let col = form.chars().count() + 2;
    let dot = rest
        .find(".V")
        .ok_or_else(|| Error::parse(1, col, "expected `lemma.V` after the comma"))?;
    let lemma = &rest[..dot];
    check_lemma(lemma, col)?;
    let codes = &rest[dot + 2..];
    let mut fields = codes.split('+');
    match fields.next() {
        Some("") => {}
        _ => return Err(Error::parse(1, col, "expected `+` after `.V`")),
    }
    let affix_raw = fields
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::parse(1, col, "missing affix class field"))?;
    let group_raw = fields
        .next()
        .ok_or_else(|| Error::parse(1, col, "missing conjugation group field"))?;
    let tag_raw = fields
        .next()
        .ok_or_else(|| Error::parse(1, col, "missing compatibility tag field"))?;
    if let Some(extra) = fields.next() {
        return Err(Error::parse(1, col, format!("unexpected trailing field `{extra}`")));
    }
    Ok(AllomorphEntry::new(
        form.to_string(),
        lemma.to_string(),
        AffixClass::parse(affix_raw)?,
        group_raw.parse()?,
        tag_raw.parse().map_err(|_| {
            Error::parse(1, col, format!("unknown compatibility tag `{tag_raw}`"))
        })?,
    ))
}

/// Parse one DEMA-INVflx line, e.g. `aho,PRO(NV)+pers:1s`.
pub fn parse_dema_invflx_line(line: &str) -> Result<InvariableEntry> {
    let line = nfc(line.trim_end());
    if line.is_empty() {
        return Err(Error::parse(1, 1, "empty line"));
    }
    let (form, rest) = split_comma(&line)?;
    if form.is_empty() {
        return Err(Error::parse(1, 1, "empty form"));
    }
    let col = form.chars().count() + 2;
    let mut fields = rest.split('+');
    let pos_field = fields.next().unwrap_or("");
    if pos_field.is_empty() {
        return Err(Error::parse(1, col, "empty part-of-speech field"));
    }
    let (pos, subcat) = match pos_field.find('(') {
        Some(open) => {
            let close = pos_field
                .rfind(')')
                .filter(|c| *c > open)
                .ok_or_else(|| Error::parse(1, col, "unclosed `(` in part-of-speech field"))?;
            (
                pos_field[..open].to_string(),
                Some(pos_field[open + 1..close].to_string()),
            )
        }
        None => (pos_field.to_string(), None),
    };
    if pos.is_empty() {
        return Err(Error::parse(1, col, "empty part-of-speech marker"));
    }
    let features: Vec<String> = fields.map(|f| f.to_string()).collect();
    if features.iter().any(|f| f.is_empty()) {
        return Err(Error::parse(1, col, "empty feature tag"));
    }
    Ok(InvariableEntry {
        form: form.to_string(),
        pos,
        subcat,
        features,
    })
}

// ---------------------------------------------------------------------------
// File parsers
// ---------------------------------------------------------------------------

fn parse_lines<T>(text: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse(line).map_err(|e| e.at_line(idx + 1))?);
    }
    Ok(out)
}

pub fn parse_dema_vs(text: &str) -> Result<Vec<DictEntry>> {
    parse_lines(text, parse_dema_vs_line)
}

pub fn parse_dema_vsflx(text: &str) -> Result<Vec<AllomorphEntry>> {
    parse_lines(text, parse_dema_vsflx_line)
}

pub fn parse_dema_invflx(text: &str) -> Result<Vec<InvariableEntry>> {
    parse_lines(text, parse_dema_invflx_line)
}

/// Canonical DEMA-VSflx text: one line per entry, no padding, LF endings.
pub fn serialize_dema_vsflx(entries: &[AllomorphEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.serialize_line());
        out.push('\n');
    }
    out
}
