//! Step two: assign concept types to title segments.
//!
//! Phrases without connectors go through the five-way sieve
//! (language, tool, method, resource, research problem; first match wins).
//! Phrases with one connector are typed by that connector's rule, and
//! longer phrases by folding the rules right to left. Each template kind
//! orchestrates these over its own split of the title.

mod branch;
mod expression;
mod orchestrate;

use thiserror::Error;

pub use branch::{branch_rule, BranchRule};
pub use expression::{ConceptType, TitleExpression, UnknownConcept};
pub use orchestrate::type_template;

use crate::connector::{count_connectors, ChunkedPhrase};
use crate::lexicon::Lexicon;
use branch::{clean, split_single, Slots};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypingError {
    #[error("phrase is empty")]
    EmptyPhrase,
    #[error("expected {expected} connector(s), found {found}")]
    ConnectorCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TypingOptions {
    /// Type phrases no predicate claims as research problems.
    pub fallthrough_research_problem: bool,
}

/// Typing entry points bound to a lexicon.
#[derive(Debug, Clone, Copy)]
pub struct ConceptTyper<'a> {
    lexicon: &'a Lexicon,
    options: TypingOptions,
}

impl<'a> ConceptTyper<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        ConceptTyper {
            lexicon,
            options: TypingOptions::default(),
        }
    }

    pub fn with_options(mut self, options: TypingOptions) -> Self {
        self.options = options;
        self
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    pub fn options(&self) -> TypingOptions {
        self.options
    }

    /// The lexicon predicate for a concept. Solution has none.
    pub fn predicate(&self, concept: ConceptType, phrase: &str) -> bool {
        let lex = self.lexicon;
        match concept {
            ConceptType::Language => lex.is_language(phrase),
            ConceptType::Tool => lex.is_tool(phrase),
            ConceptType::Method => lex.is_method(phrase),
            ConceptType::Resource => lex.is_resource(phrase),
            ConceptType::ResearchProblem => lex.is_research_problem(phrase),
            ConceptType::Solution => false,
        }
    }

    /// First concept, in sieve order, whose predicate holds.
    pub fn sieve(&self, phrase: &str) -> Option<ConceptType> {
        self.sieve_among(phrase, |_| true).or_else(|| {
            self.options
                .fallthrough_research_problem
                .then_some(ConceptType::ResearchProblem)
        })
    }

    /// Sieve restricted to concepts accepted by `allowed`, order preserved.
    pub fn sieve_among(
        &self,
        phrase: &str,
        allowed: impl Fn(ConceptType) -> bool,
    ) -> Option<ConceptType> {
        if phrase.trim().is_empty() {
            return None;
        }
        ConceptType::SIEVE
            .into_iter()
            .filter(|c| allowed(*c))
            .find(|c| self.predicate(*c, phrase))
    }

    pub fn five_way(&self, phrase: &str) -> Result<TitleExpression, TypingError> {
        let phrase = clean(phrase);
        if phrase.is_empty() {
            return Err(TypingError::EmptyPhrase);
        }
        let found = count_connectors(phrase);
        if found != 0 {
            return Err(TypingError::ConnectorCount { expected: 0, found });
        }
        let mut expr = TitleExpression::new();
        if let Some(c) = self.sieve(phrase) {
            expr.push(c, phrase);
        }
        Ok(expr)
    }

    pub fn one_connector(&self, phrase: &str) -> Result<TitleExpression, TypingError> {
        let phrase = phrase.trim();
        if phrase.is_empty() {
            return Err(TypingError::EmptyPhrase);
        }
        let found = count_connectors(phrase);
        let Some((left, conn, right)) = split_single(phrase).filter(|_| found == 1) else {
            return Err(TypingError::ConnectorCount { expected: 1, found });
        };
        let mut slots = Slots::new(vec![left, right], vec![conn]);
        slots.type_pair(self, 0);
        let mut expr = TitleExpression::new();
        slots.emit(&mut expr);
        Ok(expr)
    }

    /// Right-to-left fold over a chunked phrase: the final segment goes
    /// through the sieve, then each connector's rule types whatever is still
    /// open on either side of it.
    pub fn multi_connector(&self, chunk: &ChunkedPhrase) -> TitleExpression {
        let segments: Vec<&str> = chunk.segments.iter().map(String::as_str).collect();
        let mut expr = TitleExpression::new();
        if segments.is_empty() {
            return expr;
        }
        let mut slots = Slots::new(segments, chunk.connectors.clone());
        let last = slots.segments.len() - 1;
        slots.sieve_one(self, last);
        slots.branch_pass(self);
        slots.emit(&mut expr);
        expr
    }

    /// Type a phrase by its connector count: none goes to the sieve, one to
    /// that connector's rule, more to the fold.
    pub fn by_connector_count(&self, phrase: &str) -> TitleExpression {
        let phrase = clean(phrase);
        if phrase.is_empty() {
            return TitleExpression::new();
        }
        match count_connectors(phrase) {
            0 => self.five_way(phrase).unwrap_or_default(),
            1 => self.one_connector(phrase).unwrap_or_default(),
            _ => {
                let chunk = crate::connector::chunk(phrase);
                let mut slots = Slots::new(chunk.segments, chunk.connectors);
                if let Some(last) = slots.segments.len().checked_sub(1) {
                    slots.sieve_one(self, last);
                }
                slots.branch_pass(self);
                let mut expr = TitleExpression::new();
                slots.emit(&mut expr);
                expr
            }
        }
    }
}

/// Five-way precedence-ordered typing of a phrase with no connectors.
pub fn five_way_concept_typing(
    phrase: &str,
    lexicon: &Lexicon,
) -> Result<TitleExpression, TypingError> {
    ConceptTyper::new(lexicon).five_way(phrase)
}

/// Connector-specific typing of a phrase with exactly one connector.
pub fn one_connector_heuristics(
    phrase: &str,
    lexicon: &Lexicon,
) -> Result<TitleExpression, TypingError> {
    ConceptTyper::new(lexicon).one_connector(phrase)
}

pub fn multi_connector_typing(chunk: &ChunkedPhrase, lexicon: &Lexicon) -> TitleExpression {
    ConceptTyper::new(lexicon).multi_connector(chunk)
}
