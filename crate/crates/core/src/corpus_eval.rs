//! Corpus evaluation: tokenize text, run the analyzer over gold-annotated
//! verb occurrences, and report coverage.
//!
//! Gold files are TSV, one token per line:
//!
//! ```text
//! token<TAB>is_verb<TAB>lemma<TAB>in_dict<TAB>stem_known<TAB>affix_known
//! ```
//!
//! Booleans are `1`/`0`; an absent lemma is `-`. Verbs are marked by hand;
//! the evaluator never guesses which tokens are verbs.

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::morpho::CompiledResources;

/// One token with its byte span in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Lowercase, NFC, typographic apostrophe folded to the plain one.
pub fn normalize_token(raw: &str) -> String {
    raw.chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .flat_map(char::to_lowercase)
        .collect::<String>()
        .nfc()
        .collect()
}

/// Split text on whitespace and sentence punctuation. An apostrophe or
/// dash directly after word characters stays attached to them and closes
/// the token, so elided verb forms (`noraisin'`, `hanaovan-`) survive as
/// single tokens even when the next word follows without a space.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let flush = |from: &mut Option<usize>, upto: usize, text: &str, out: &mut Vec<Token>| {
        if let Some(s) = from.take() {
            if s < upto {
                out.push(Token {
                    text: normalize_token(&text[s..upto]),
                    start: s,
                    end: upto,
                });
            }
        }
    };
    for (idx, c) in text.char_indices() {
        if c.is_alphanumeric() {
            start.get_or_insert(idx);
        } else if c == '\'' || c == '\u{2019}' || c == '-' {
            // attach to a preceding word, otherwise treat as punctuation
            if start.is_some() {
                flush(&mut start, idx + c.len_utf8(), text, &mut tokens);
            }
        } else {
            flush(&mut start, idx, text, &mut tokens);
        }
    }
    flush(&mut start, text.len(), text, &mut tokens);
    tokens
}

/// One manually annotated token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldRecord {
    pub token: String,
    pub is_verb: bool,
    pub lemma: Option<String>,
    pub in_dictionary: bool,
    pub stem_class_known: bool,
    pub affix_class_known: bool,
}

fn parse_bool(field: &str, line: usize) -> Result<bool> {
    match field {
        "1" => Ok(true),
        "0" => Ok(false),
        other => Err(Error::parse(line, 1, format!("expected 0 or 1, got `{other}`"))),
    }
}

pub fn parse_gold_tsv(text: &str) -> Result<Vec<GoldRecord>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(Error::parse(
                line_no,
                1,
                format!("expected 6 tab-separated fields, got {}", fields.len()),
            ));
        }
        let lemma = match fields[2] {
            "-" | "" => None,
            s => Some(crate::lexicon::nfc(s)),
        };
        out.push(GoldRecord {
            token: normalize_token(fields[0]),
            is_verb: parse_bool(fields[1], line_no)?,
            lemma,
            in_dictionary: parse_bool(fields[3], line_no)?,
            stem_class_known: parse_bool(fields[4], line_no)?,
            affix_class_known: parse_bool(fields[5], line_no)?,
        });
    }
    Ok(out)
}

/// Coverage counts and the ratios they back. Class coverage counts
/// in-dictionary tokens as covered: an entry in the dictionary means its
/// classes are encoded by definition, and out-of-dictionary tokens count
/// when their class has been seen before.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub verb_tokens: usize,
    pub in_dictionary: usize,
    pub analyzed_with_gold_lemma: usize,
    pub stem_class_covered: usize,
    pub affix_class_covered: usize,
    pub lexical_coverage: f64,
    pub analyzer_success_rate: f64,
    pub stem_class_coverage: f64,
    pub affix_class_coverage: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Whole percent, rounded half-up, for side-by-side comparison with
/// hand-reported figures.
pub fn percent_rounded(r: f64) -> u32 {
    (r * 100.0).round() as u32
}

impl CoverageReport {
    fn new(
        verb_tokens: usize,
        in_dictionary: usize,
        analyzed_with_gold_lemma: usize,
        stem_class_covered: usize,
        affix_class_covered: usize,
    ) -> Self {
        CoverageReport {
            verb_tokens,
            in_dictionary,
            analyzed_with_gold_lemma,
            stem_class_covered,
            affix_class_covered,
            lexical_coverage: ratio(in_dictionary, verb_tokens),
            analyzer_success_rate: ratio(analyzed_with_gold_lemma, verb_tokens),
            stem_class_coverage: ratio(stem_class_covered, verb_tokens),
            affix_class_coverage: ratio(affix_class_covered, verb_tokens),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table: counts, one-decimal percentages, and the
    /// whole-percent rounding alongside.
    pub fn table(&self) -> String {
        let row = |name: &str, num: usize, r: f64| {
            format!(
                "{name:<24} {num:>4}/{den:<4} {pct:>6.1}%  (~{rounded}%)\n",
                den = self.verb_tokens,
                pct = r * 100.0,
                rounded = percent_rounded(r),
            )
        };
        let mut out = String::new();
        out.push_str(&format!("verb tokens              {:>4}\n", self.verb_tokens));
        out.push_str(&row("lexical coverage", self.in_dictionary, self.lexical_coverage));
        out.push_str(&row(
            "analyzer success rate",
            self.analyzed_with_gold_lemma,
            self.analyzer_success_rate,
        ));
        out.push_str(&row(
            "stem class coverage",
            self.stem_class_covered,
            self.stem_class_coverage,
        ));
        out.push_str(&row(
            "affix class coverage",
            self.affix_class_covered,
            self.affix_class_coverage,
        ));
        out
    }
}

/// Score the analyzer against gold annotations. A verb token counts as a
/// success when some analysis (contractions included) carries its gold
/// lemma. The gold flags are cross-checked against the loaded dictionary:
/// an in-dictionary mark whose lemma is absent from DEMA-VS (or the
/// reverse) means the gold file and resources are out of step.
pub fn evaluate(gold: &[GoldRecord], resources: &CompiledResources) -> Result<CoverageReport> {
    let mut verb_tokens = 0;
    let mut in_dictionary = 0;
    let mut analyzed = 0;
    let mut stem_covered = 0;
    let mut affix_covered = 0;

    for record in gold {
        if !record.is_verb {
            continue;
        }
        verb_tokens += 1;
        let lemma_in_dict = record
            .lemma
            .as_deref()
            .map(|l| resources.entry(l).is_some())
            .unwrap_or(false);
        if record.in_dictionary {
            let lemma = record.lemma.as_deref().ok_or_else(|| {
                Error::Gold(format!(
                    "token `{}`: marked in-dictionary but carries no lemma",
                    record.token
                ))
            })?;
            if !lemma_in_dict {
                return Err(Error::Gold(format!(
                    "token `{}`: lemma `{lemma}` is not in the root dictionary",
                    record.token
                )));
            }
        } else if lemma_in_dict {
            return Err(Error::Gold(format!(
                "token `{}`: marked out-of-dictionary but lemma `{}` is in the root dictionary",
                record.token,
                record.lemma.as_deref().unwrap_or("")
            )));
        }

        if record.in_dictionary {
            in_dictionary += 1;
            stem_covered += 1;
            affix_covered += 1;
            let gold_lemma = record.lemma.as_deref().unwrap_or("");
            if resources
                .analyze_token(&record.token)
                .iter()
                .any(|a| a.lemma == gold_lemma)
            {
                analyzed += 1;
            }
        } else {
            if record.stem_class_known {
                stem_covered += 1;
            }
            if record.affix_class_known {
                affix_covered += 1;
            }
        }
    }

    Ok(CoverageReport::new(
        verb_tokens,
        in_dictionary,
        analyzed,
        stem_covered,
        affix_covered,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_elided_forms_as_single_tokens() {
        let toks = tokenize("Noraisin'ny olona");
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["noraisin'", "ny", "olona"]);
        assert_eq!((toks[0].start, toks[0].end), (0, 9));
        assert_eq!((toks[1].start, toks[1].end), (9, 11));
    }

    #[test]
    fn tokenizes_empty_text() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenizer_drops_sentence_punctuation() {
        let toks = tokenize("Nojereny aho.");
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["nojereny", "aho"]);
    }

    #[test]
    fn dash_attaches_left_and_splits() {
        let toks = tokenize("hanaovan-dratsy");
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["hanaovan-", "dratsy"]);
    }

    #[test]
    fn standalone_marks_are_punctuation() {
        let toks = tokenize("- mandeha ' izy -");
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["mandeha", "izy"]);
    }

    #[test]
    fn gold_tsv_round_trip() {
        let text = "# corpus\nmandro\t1\tàndro\t1\t0\t0\nny\t0\t-\t0\t0\t0\n";
        let gold = parse_gold_tsv(text).unwrap();
        assert_eq!(gold.len(), 2);
        assert!(gold[0].is_verb);
        assert_eq!(gold[0].lemma.as_deref(), Some("àndro"));
        assert!(!gold[1].is_verb);
        assert_eq!(gold[1].lemma, None);
    }

    #[test]
    fn gold_tsv_rejects_bad_rows() {
        assert!(parse_gold_tsv("mandro\t1\tàndro\t1\t0\n").is_err());
        assert!(parse_gold_tsv("mandro\tmaybe\tàndro\t1\t0\t0\n").is_err());
    }

    #[test]
    fn report_ratios_recompute_from_counts() {
        let r = CoverageReport::new(43, 28, 25, 38, 32);
        assert!((r.lexical_coverage - 28.0 / 43.0).abs() < 1e-12);
        assert!((r.analyzer_success_rate - 25.0 / 43.0).abs() < 1e-12);
        assert_eq!(percent_rounded(r.lexical_coverage), 65);
        assert_eq!(percent_rounded(r.analyzer_success_rate), 58);
        assert_eq!(percent_rounded(r.stem_class_coverage), 88);
        assert_eq!(percent_rounded(r.affix_class_coverage), 74);
    }

    #[test]
    fn empty_gold_yields_zero_ratios() {
        let r = CoverageReport::new(0, 0, 0, 0, 0);
        assert_eq!(r.lexical_coverage, 0.0);
        assert_eq!(r.analyzer_success_rate, 0.0);
    }
}
