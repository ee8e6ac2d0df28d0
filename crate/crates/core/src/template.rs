//! Step one: route each title to exactly one of nine template categories.
//!
//! Rules are tried in a fixed order and the first match wins. The anchors
//! that triggered a rule (colon, "case study" span, ...) are recorded so
//! the typer can split the title without scanning it again.

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::ingest::Title;
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    SpecialWordColon,
    UsingPrefix,
    ColonCaseStudy,
    CaseStudyContained,
    ColonGeneric,
    AppliedTo,
    NonContentPrefix,
    DescriptionOf,
    Default,
}

impl TemplateKind {
    /// In precedence order.
    pub const ALL: [TemplateKind; 9] = [
        TemplateKind::SpecialWordColon,
        TemplateKind::UsingPrefix,
        TemplateKind::ColonCaseStudy,
        TemplateKind::CaseStudyContained,
        TemplateKind::ColonGeneric,
        TemplateKind::AppliedTo,
        TemplateKind::NonContentPrefix,
        TemplateKind::DescriptionOf,
        TemplateKind::Default,
    ];

    /// 1-based rule number; lower numbers take precedence.
    pub fn rule(self) -> usize {
        TemplateKind::ALL.iter().position(|k| *k == self).unwrap() + 1
    }

    pub fn from_rule(rule: usize) -> Option<TemplateKind> {
        rule.checked_sub(1)
            .and_then(|i| TemplateKind::ALL.get(i))
            .copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateKind::SpecialWordColon => "special_word_colon",
            TemplateKind::UsingPrefix => "using_prefix",
            TemplateKind::ColonCaseStudy => "colon_case_study",
            TemplateKind::CaseStudyContained => "case_study_contained",
            TemplateKind::ColonGeneric => "colon_generic",
            TemplateKind::AppliedTo => "applied_to",
            TemplateKind::NonContentPrefix => "non_content_prefix",
            TemplateKind::DescriptionOf => "description_of",
            TemplateKind::Default => "default",
        }
    }

    /// Short pattern description used in coverage reports.
    pub fn pattern(self) -> &'static str {
        match self {
            TemplateKind::SpecialWordColon => "hasSpecialCaseWord() :",
            TemplateKind::UsingPrefix => "Using ...",
            TemplateKind::ColonCaseStudy => "... : [a ]?case study",
            TemplateKind::CaseStudyContained => "contains [a ]?case study",
            TemplateKind::ColonGeneric => "contains :",
            TemplateKind::AppliedTo => "contains applied to",
            TemplateKind::NonContentPrefix => "nonContentPhrase()",
            TemplateKind::DescriptionOf => "Description of ...",
            TemplateKind::Default => "default",
        }
    }
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Byte spans of the text that triggered a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Anchor {
    None,
    /// Byte offset of the first colon.
    Colon(usize),
    /// End of the leading "Using" token.
    Using(usize),
    /// "case study" span (with any trailing "of/on/in"), and the colon
    /// before it when the rule was the colon variant.
    CaseStudy {
        colon: Option<usize>,
        start: usize,
        end: usize,
    },
    AppliedTo {
        start: usize,
        end: usize,
    },
    /// End of the non-content prefix.
    NonContent(usize),
    /// End of "Description of".
    DescriptionOf(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateClass {
    pub kind: TemplateKind,
    /// Character offsets of template-induced boundaries, strictly increasing.
    pub split_points: Vec<usize>,
    pub(crate) anchor: Anchor,
}

static USING: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)^using\s+\S").unwrap());
static CASE_STUDY: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?i)\b(?:a\s+)?case\s+study\b(?:\s+(?:of|on|in)\b)?").unwrap());
static APPLIED_TO: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\bapplied\s+to\b").unwrap());
static DESCRIPTION_OF: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)^description\s+of\b").unwrap());

fn char_offset(text: &str, byte: usize) -> usize {
    text[..byte].chars().count()
}

/// Classify a title. Total: anything unmatched is `Default`.
pub fn classify(title: &Title, lexicon: &Lexicon) -> TemplateClass {
    classify_text(&title.text, lexicon)
}

pub fn classify_text(text: &str, lexicon: &Lexicon) -> TemplateClass {
    let (kind, anchor) = route(text, lexicon);
    let bytes: Vec<usize> = match anchor {
        Anchor::None => vec![],
        Anchor::Colon(c) => vec![c],
        Anchor::Using(e) | Anchor::NonContent(e) | Anchor::DescriptionOf(e) => vec![e],
        Anchor::CaseStudy { colon, start, end } => colon.into_iter().chain([start, end]).collect(),
        Anchor::AppliedTo { start, end } => vec![start, end],
    };
    let mut split_points: Vec<usize> = bytes.into_iter().map(|b| char_offset(text, b)).collect();
    split_points.dedup();
    TemplateClass {
        kind,
        split_points,
        anchor,
    }
}

fn route(text: &str, lexicon: &Lexicon) -> (TemplateKind, Anchor) {
    let colon = text.find(':');

    if let Some(c) = colon {
        if lexicon.has_special_case_word(text) {
            return (TemplateKind::SpecialWordColon, Anchor::Colon(c));
        }
    }
    if let Some(m) = USING.find(text) {
        // end of the "Using" token itself
        let end = m.as_str().find(char::is_whitespace).unwrap_or(m.end());
        return (TemplateKind::UsingPrefix, Anchor::Using(m.start() + end));
    }
    if let Some(c) = colon {
        let after = &text[c + 1..];
        let lead = after.len() - after.trim_start().len();
        if let Some(m) = CASE_STUDY.find(&after[lead..]) {
            if m.start() == 0 {
                let base = c + 1 + lead;
                return (
                    TemplateKind::ColonCaseStudy,
                    Anchor::CaseStudy {
                        colon: Some(c),
                        start: base,
                        end: base + m.end(),
                    },
                );
            }
        }
    }
    if let Some(m) = CASE_STUDY.find(text) {
        return (
            TemplateKind::CaseStudyContained,
            Anchor::CaseStudy {
                colon: None,
                start: m.start(),
                end: m.end(),
            },
        );
    }
    if let Some(c) = colon {
        return (TemplateKind::ColonGeneric, Anchor::Colon(c));
    }
    if let Some(m) = APPLIED_TO.find(text) {
        return (
            TemplateKind::AppliedTo,
            Anchor::AppliedTo {
                start: m.start(),
                end: m.end(),
            },
        );
    }
    if let Some(end) = lexicon.non_content_prefix(text) {
        return (TemplateKind::NonContentPrefix, Anchor::NonContent(end));
    }
    if let Some(m) = DESCRIPTION_OF.find(text) {
        return (TemplateKind::DescriptionOf, Anchor::DescriptionOf(m.end()));
    }
    (TemplateKind::Default, Anchor::None)
}

/// Titles per template kind. Every kind is present, possibly with zero.
pub fn rule_coverage(corpus: &[Title], lexicon: &Lexicon) -> BTreeMap<TemplateKind, usize> {
    let mut counts: BTreeMap<TemplateKind, usize> =
        TemplateKind::ALL.iter().map(|k| (*k, 0)).collect();
    for title in corpus {
        *counts.entry(classify(title, lexicon).kind).or_default() += 1;
    }
    counts
}
