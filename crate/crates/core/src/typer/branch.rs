//! Connector-specific typing rules and the slot machinery shared by the
//! one-connector, multi-connector and template paths.
//!
//! Each connector has a fixed set of concepts it may produce. Within that
//! set the right-hand phrase is typed first, then the left-hand phrase,
//! each by the sieve order restricted to the concepts still available.
//! A side that no predicate claims may fall back to the branch default;
//! solution defaults only apply to the leading segment of a phrase.

use crate::connector::{tokens, Connector};

use super::expression::{ConceptType, TitleExpression};
use super::ConceptTyper;

use ConceptType::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchRule {
    /// Concepts this connector may assign.
    pub allowed: &'static [ConceptType],
    pub left_default: Option<ConceptType>,
    pub right_default: Option<ConceptType>,
}

impl BranchRule {
    pub fn allows(&self, concept: ConceptType) -> bool {
        self.allowed.contains(&concept)
    }
}

/// The rule governing phrases joined by `connector`.
pub fn branch_rule(connector: Connector) -> BranchRule {
    match connector {
        Connector::For => BranchRule {
            allowed: &[Solution, ResearchProblem, Resource, Language],
            left_default: Some(Solution),
            right_default: Some(ResearchProblem),
        },
        Connector::Of => BranchRule {
            allowed: &[Solution, ResearchProblem, Resource, Language, Tool],
            left_default: None,
            right_default: None,
        },
        Connector::Using | Connector::With | Connector::By => BranchRule {
            allowed: &[Solution, Resource, Language, Tool, Method],
            left_default: Some(Solution),
            right_default: None,
        },
        Connector::On => BranchRule {
            allowed: &[Solution, ResearchProblem, Resource, Language],
            left_default: Some(Solution),
            right_default: Some(ResearchProblem),
        },
        Connector::From => BranchRule {
            allowed: &[Solution, Resource],
            left_default: Some(Solution),
            right_default: Some(Resource),
        },
        Connector::In => BranchRule {
            allowed: &[Resource, ResearchProblem, Solution, Language, Tool],
            left_default: Some(Solution),
            right_default: None,
        },
        Connector::Through | Connector::Via => BranchRule {
            allowed: &[Solution, ResearchProblem, Method, Resource],
            left_default: Some(Solution),
            right_default: Some(Method),
        },
        Connector::To => BranchRule {
            allowed: &[Resource, ResearchProblem, Solution, Language, Tool, Method],
            left_default: Some(Solution),
            right_default: None,
        },
        Connector::As => BranchRule {
            allowed: &[Resource, ResearchProblem, Solution, Method],
            left_default: Some(Solution),
            right_default: None,
        },
    }
}

const NOT_GERUNDS: &[&str] = &[
    "during",
    "string",
    "strings",
    "nothing",
    "something",
    "everything",
    "morning",
    "evening",
    "spring",
    "thing",
    "things",
    "ceiling",
    "wedding",
];

/// Phrase opens with an -ing verb form ("Adding", "Learning", "Building").
pub(crate) fn gerund_initial(phrase: &str) -> bool {
    let Some(first) = phrase.split_whitespace().next() else {
        return false;
    };
    let lower = first.to_lowercase();
    if lower.chars().count() < 6 || !lower.chars().all(|c| c.is_alphabetic()) {
        return false;
    }
    lower.ends_with("ing") && !NOT_GERUNDS.contains(&lower.as_str())
}

const EDGE_PUNCT: &[char] = &[
    ',', ';', ':', '.', '?', '!', '"', '\'', '\u{201c}', '\u{201d}', '\u{2018}', '\u{2019}', '-',
    '\u{2013}',
];

/// Strip whitespace and stray punctuation from both ends of a segment.
pub(crate) fn clean(segment: &str) -> &str {
    let mut s = segment;
    loop {
        let t = s.trim().trim_matches(EDGE_PUNCT);
        if t.len() == s.len() {
            return t;
        }
        s = t;
    }
}

fn word_count(phrase: &str) -> usize {
    phrase.split_whitespace().count()
}

/// Typing state of one segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Open,
    Typed(ConceptType),
    /// Decided elsewhere (possibly untyped); never revisited.
    Fixed,
}

impl Slot {
    fn concept(self) -> Option<ConceptType> {
        match self {
            Slot::Typed(c) => Some(c),
            _ => None,
        }
    }
}

/// Segments of a phrase with their connectors and typing state.
#[derive(Debug, Clone)]
pub(crate) struct Slots<'t> {
    pub segments: Vec<&'t str>,
    pub connectors: Vec<Connector>,
    pub state: Vec<Slot>,
}

impl<'t> Slots<'t> {
    pub fn new(segments: Vec<&'t str>, connectors: Vec<Connector>) -> Self {
        debug_assert!(segments.is_empty() || connectors.len() + 1 == segments.len());
        let segments: Vec<&'t str> = segments.into_iter().map(clean).collect();
        let state = segments
            .iter()
            .map(|s| {
                if s.is_empty() {
                    Slot::Fixed
                } else {
                    Slot::Open
                }
            })
            .collect();
        Slots {
            segments,
            connectors,
            state,
        }
    }

    /// Five-way sieve on every open segment.
    pub fn sieve_pass(&mut self, typer: &ConceptTyper<'_>) {
        for i in 0..self.segments.len() {
            self.sieve_one(typer, i);
        }
    }

    pub fn sieve_one(&mut self, typer: &ConceptTyper<'_>, i: usize) {
        if self.state[i] == Slot::Open {
            if let Some(c) = typer.sieve(self.segments[i]) {
                self.state[i] = Slot::Typed(c);
            }
        }
    }

    /// Connector rules, right to left.
    pub fn branch_pass(&mut self, typer: &ConceptTyper<'_>) {
        for i in (0..self.connectors.len()).rev() {
            self.type_pair(typer, i);
        }
    }

    /// Apply the rule of connector `i` to segments `i` and `i + 1`.
    pub fn type_pair(&mut self, typer: &ConceptTyper<'_>, i: usize) {
        let rule = branch_rule(self.connectors[i]);
        let (l, r) = (i, i + 1);

        if self.state[r] == Slot::Open {
            let exclude = self.state[l].concept();
            let phrase = self.segments[r];
            let found = typer
                .sieve_among(phrase, |c| rule.allows(c) && Some(c) != exclude)
                .or(rule
                    .right_default
                    .filter(|c| Some(*c) != exclude && (*c != Solution || word_count(phrase) > 1)));
            if let Some(c) = found {
                self.state[r] = Slot::Typed(c);
            }
        }

        if self.state[l] == Slot::Open {
            let exclude = self.state[r].concept();
            let phrase = self.segments[l];
            let leading = l == 0;
            let solution_ok = leading
                && rule.allows(Solution)
                && exclude != Some(Solution)
                && word_count(phrase) > 1;
            let found = if solution_ok && gerund_initial(phrase) {
                Some(Solution)
            } else {
                typer
                    .sieve_among(phrase, |c| rule.allows(c) && Some(c) != exclude)
                    .or(rule.left_default.filter(|c| {
                        leading && Some(*c) != exclude && (*c != Solution || solution_ok)
                    }))
            };
            if let Some(c) = found {
                self.state[l] = Slot::Typed(c);
            }
        }
    }

    /// Push typed segments, in order, into `expr`.
    pub fn emit(&self, expr: &mut TitleExpression) {
        for (seg, slot) in self.segments.iter().zip(&self.state) {
            if let Slot::Typed(c) = slot {
                expr.push(*c, *seg);
            }
        }
    }
}

/// Split a phrase with exactly one connector token into (left, connector,
/// right). Either side may be empty.
pub(crate) fn split_single(phrase: &str) -> Option<(&str, Connector, &str)> {
    let toks = tokens(phrase);
    let mut found = None;
    for (i, t) in toks.iter().enumerate() {
        if let Some(c) = Connector::from_token(t.text) {
            if found.is_some() {
                return None;
            }
            found = Some((i, c));
        }
    }
    let (i, conn) = found?;
    let left = match i {
        0 => "",
        _ => &phrase[toks[0].start..toks[i - 1].end],
    };
    let right = match toks.get(i + 1) {
        Some(first) => &phrase[first.start..toks[toks.len() - 1].end],
        None => "",
    };
    Some((left, conn, right))
}
