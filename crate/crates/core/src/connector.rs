//! Connector counting and phrase chunking.
//!
//! Connectors are eleven prepositions plus the verb "using". Matching is
//! whole-token and case-insensitive; a hyphenated token such as
//! "Grapheme-to-Phoneme" is a single token and never a connector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connector {
    To,
    Of,
    On,
    For,
    From,
    With,
    By,
    Via,
    Through,
    Using,
    In,
    As,
}

impl Connector {
    pub const ALL: [Connector; 12] = [
        Connector::To,
        Connector::Of,
        Connector::On,
        Connector::For,
        Connector::From,
        Connector::With,
        Connector::By,
        Connector::Via,
        Connector::Through,
        Connector::Using,
        Connector::In,
        Connector::As,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Connector::To => "to",
            Connector::Of => "of",
            Connector::On => "on",
            Connector::For => "for",
            Connector::From => "from",
            Connector::With => "with",
            Connector::By => "by",
            Connector::Via => "via",
            Connector::Through => "through",
            Connector::Using => "using",
            Connector::In => "in",
            Connector::As => "as",
        }
    }

    /// Recognize a raw token, ignoring case and surrounding punctuation.
    pub fn from_token(token: &str) -> Option<Connector> {
        token
            .trim_matches(|c: char| !c.is_alphanumeric())
            .parse()
            .ok()
    }
}

impl FromStr for Connector {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Connector::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

impl fmt::Display for Connector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A whitespace-delimited token and its byte span in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
}

pub(crate) fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &text[s..i],
                    start: s,
                    end: i,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &text[s..],
            start: s,
            end: text.len(),
        });
    }
    out
}

/// Number of connector tokens in `phrase`.
pub fn count_connectors(phrase: &str) -> usize {
    tokens(phrase)
        .iter()
        .filter(|t| Connector::from_token(t.text).is_some())
        .count()
}

/// A phrase split on its connectors.
///
/// `connectors[i]` sits between `segments[i]` and `segments[i + 1]`.
/// Connectors that would have bordered an empty segment (at either end of
/// the phrase, or doubled up) carry no phrase and are kept apart in
/// `dropped`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkedPhrase {
    pub segments: Vec<String>,
    pub connectors: Vec<Connector>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<Connector>,
}

impl ChunkedPhrase {
    /// `count_connectors` of the source phrase.
    pub fn total_connectors(&self) -> usize {
        self.connectors.len() + self.dropped.len()
    }

    /// Segments interleaved with their connectors, single-spaced.
    pub fn rejoin(&self) -> String {
        let mut out = String::new();
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                out.push(' ');
                out.push_str(self.connectors[i - 1].as_str());
                out.push(' ');
            }
            out.push_str(seg);
        }
        out
    }
}

/// A chunk that borrows its segments from the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Chunks<'a> {
    pub segments: Vec<&'a str>,
    pub connectors: Vec<Connector>,
    pub dropped: Vec<Connector>,
}

pub(crate) fn chunk<'a>(phrase: &'a str) -> Chunks<'a> {
    let mut segments: Vec<&'a str> = Vec::new();
    let mut connectors = Vec::new();
    let mut dropped = Vec::new();
    // connector waiting for the segment on its right
    let mut pending: Option<Connector> = None;
    let mut open: Option<(usize, usize)> = None;

    let mut close =
        |span: (usize, usize), pending: &mut Option<Connector>, segments: &mut Vec<&'a str>| {
            if let Some(p) = pending.take() {
                connectors.push(p);
            }
            segments.push(&phrase[span.0..span.1]);
        };

    for tok in tokens(phrase) {
        match Connector::from_token(tok.text) {
            Some(conn) => match open.take() {
                Some(span) => {
                    close(span, &mut pending, &mut segments);
                    pending = Some(conn);
                }
                // leading connector
                None if segments.is_empty() => dropped.push(conn),
                // doubled connector: the later one governs the next segment
                None => dropped.extend(pending.replace(conn)),
            },
            None => {
                open = Some(match open {
                    Some((s, _)) => (s, tok.end),
                    None => (tok.start, tok.end),
                });
            }
        }
    }
    match open {
        Some(span) => close(span, &mut pending, &mut segments),
        None => dropped.extend(pending),
    }
    Chunks {
        segments,
        connectors,
        dropped,
    }
}

/// Split `phrase` into connector-delimited segments.
pub fn split_on_connectors(phrase: &str) -> ChunkedPhrase {
    let c = chunk(phrase);
    ChunkedPhrase {
        segments: c.segments.into_iter().map(str::to_string).collect(),
        connectors: c.connectors,
        dropped: c.dropped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_whole_tokens() {
        assert_eq!(
            count_connectors("Using Multiple Knowledge Sources for Word Sense Discrimination"),
            2
        );
        assert_eq!(count_connectors("Neural Machine Translation"), 0);
        assert_eq!(
            count_connectors("Adding Pronunciation Information to Wordnets"),
            1
        );
        assert_eq!(count_connectors("Information Formalism"), 0);
        assert_eq!(
            count_connectors("A Grapheme-to-Phoneme Conversion System"),
            0
        );
        assert_eq!(count_connectors("Parsing (in Context)"), 1);
        assert_eq!(count_connectors("ON THE USE OF"), 2);
    }

    #[test]
    fn splits_on_single_connector() {
        let c = split_on_connectors("Adding Pronunciation Information to Wordnets");
        assert_eq!(c.segments, ["Adding Pronunciation Information", "Wordnets"]);
        assert_eq!(c.connectors, [Connector::To]);
        assert!(c.dropped.is_empty());
    }

    #[test]
    fn no_connector_yields_one_segment() {
        let c = split_on_connectors("Dutch");
        assert_eq!(c.segments, ["Dutch"]);
        assert!(c.connectors.is_empty());
    }

    #[test]
    fn leading_connector_is_dropped() {
        let c = split_on_connectors("Using WordNet for Building WordNets");
        assert_eq!(c.segments, ["WordNet", "Building WordNets"]);
        assert_eq!(c.connectors, [Connector::For]);
        assert_eq!(c.dropped, [Connector::Using]);
        assert_eq!(c.total_connectors(), 2);
    }

    #[test]
    fn adjacent_and_trailing_connectors() {
        let c = split_on_connectors("Parsing of the Use of Corpora for");
        assert_eq!(c.segments, ["Parsing", "the Use", "Corpora"]);
        assert_eq!(c.connectors, [Connector::Of, Connector::Of]);
        assert_eq!(c.dropped, [Connector::For]);

        let c = split_on_connectors("Learning from with Corpora");
        assert_eq!(c.segments, ["Learning", "Corpora"]);
        assert_eq!(c.connectors, [Connector::With]);
        assert_eq!(c.dropped, [Connector::From]);
    }

    #[test]
    fn segment_casing_is_preserved() {
        let c = split_on_connectors("Tools FOR Dutch");
        assert_eq!(c.segments, ["Tools", "Dutch"]);
        assert_eq!(c.connectors, [Connector::For]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = String> {
            prop_oneof![
                Just("to".to_string()),
                Just("Of".to_string()),
                Just("IN".to_string()),
                Just("using".to_string()),
                Just("information".to_string()),
                Just("formalism".to_string()),
                Just("Grapheme-to-Phoneme".to_string()),
                "[A-Za-z]{1,8}",
            ]
        }

        proptest! {
            #[test]
            fn chunking_invariants(words in proptest::collection::vec(word(), 1..12)) {
                let phrase = words.join(" ");
                let c = split_on_connectors(&phrase);
                prop_assert_eq!(count_connectors(&phrase), c.total_connectors());
                prop_assert!(c.segments.iter().all(|s| !s.is_empty()));
                if !c.segments.is_empty() {
                    prop_assert_eq!(c.connectors.len(), c.segments.len() - 1);
                }
                for s in &c.segments {
                    prop_assert!(phrase.contains(s.as_str()));
                }
                // rejoined tokens are an in-order subsequence of the source tokens
                let source: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
                let mut it = source.iter();
                for tok in c.rejoin().to_lowercase().split_whitespace() {
                    prop_assert!(it.any(|w| w == tok));
                }
            }
        }
    }
}
