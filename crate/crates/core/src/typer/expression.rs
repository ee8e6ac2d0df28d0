use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConceptType {
    ResearchProblem,
    Solution,
    Resource,
    Language,
    Tool,
    Method,
}

impl ConceptType {
    /// Field order of a title expression.
    pub const ALL: [ConceptType; 6] = [
        ConceptType::ResearchProblem,
        ConceptType::Solution,
        ConceptType::Resource,
        ConceptType::Language,
        ConceptType::Tool,
        ConceptType::Method,
    ];

    /// Precedence of the regex-backed concepts; solution has no predicate.
    pub const SIEVE: [ConceptType; 5] = [
        ConceptType::Language,
        ConceptType::Tool,
        ConceptType::Method,
        ConceptType::Resource,
        ConceptType::ResearchProblem,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConceptType::ResearchProblem => "research_problem",
            ConceptType::Solution => "solution",
            ConceptType::Resource => "resource",
            ConceptType::Language => "language",
            ConceptType::Tool => "tool",
            ConceptType::Method => "method",
        }
    }

    /// Rank in the sieve; solution sorts last.
    pub fn sieve_rank(self) -> usize {
        ConceptType::SIEVE
            .iter()
            .position(|c| *c == self)
            .unwrap_or(ConceptType::SIEVE.len())
    }
}

impl fmt::Display for ConceptType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownConcept(pub String);

impl fmt::Display for UnknownConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown concept type `{}`", self.0)
    }
}

impl std::error::Error for UnknownConcept {}

impl FromStr for ConceptType {
    type Err = UnknownConcept;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
        ConceptType::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| UnknownConcept(s.to_string()))
    }
}

/// The six concept lists extracted from one title.
///
/// A phrase appears in at most one list; [`TitleExpression::push`] ignores
/// a phrase that has already been typed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleExpression {
    #[serde(default)]
    pub research_problem: Vec<String>,
    #[serde(default)]
    pub solution: Vec<String>,
    #[serde(default)]
    pub resource: Vec<String>,
    #[serde(default)]
    pub language: Vec<String>,
    #[serde(default)]
    pub tool: Vec<String>,
    #[serde(default)]
    pub method: Vec<String>,
}

impl TitleExpression {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, concept: ConceptType) -> &[String] {
        match concept {
            ConceptType::ResearchProblem => &self.research_problem,
            ConceptType::Solution => &self.solution,
            ConceptType::Resource => &self.resource,
            ConceptType::Language => &self.language,
            ConceptType::Tool => &self.tool,
            ConceptType::Method => &self.method,
        }
    }

    fn get_mut(&mut self, concept: ConceptType) -> &mut Vec<String> {
        match concept {
            ConceptType::ResearchProblem => &mut self.research_problem,
            ConceptType::Solution => &mut self.solution,
            ConceptType::Resource => &mut self.resource,
            ConceptType::Language => &mut self.language,
            ConceptType::Tool => &mut self.tool,
            ConceptType::Method => &mut self.method,
        }
    }

    /// The concept a phrase was typed as, if any.
    pub fn concept_of(&self, phrase: &str) -> Option<ConceptType> {
        ConceptType::ALL
            .into_iter()
            .find(|c| self.get(*c).iter().any(|p| p == phrase))
    }

    /// Add a phrase unless it is empty or already typed. Returns whether it
    /// was added.
    pub fn push(&mut self, concept: ConceptType, phrase: impl Into<String>) -> bool {
        let phrase = phrase.into();
        if phrase.is_empty() || self.concept_of(&phrase).is_some() {
            return false;
        }
        self.get_mut(concept).push(phrase);
        true
    }

    /// Fold another expression in; phrases already typed here win.
    pub fn merge(&mut self, other: TitleExpression) {
        for (concept, phrase) in other.into_pairs() {
            self.push(concept, phrase);
        }
    }

    pub fn is_empty(&self) -> bool {
        ConceptType::ALL.iter().all(|c| self.get(*c).is_empty())
    }

    pub fn len(&self) -> usize {
        ConceptType::ALL.iter().map(|c| self.get(*c).len()).sum()
    }

    /// Concepts with at least one phrase.
    pub fn populated(&self) -> Vec<ConceptType> {
        ConceptType::ALL
            .into_iter()
            .filter(|c| !self.get(*c).is_empty())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ConceptType, &str)> + '_ {
        ConceptType::ALL
            .into_iter()
            .flat_map(move |c| self.get(c).iter().map(move |p| (c, p.as_str())))
    }

    fn into_pairs(self) -> Vec<(ConceptType, String)> {
        let mut out = Vec::with_capacity(self.len());
        let TitleExpression {
            research_problem,
            solution,
            resource,
            language,
            tool,
            method,
        } = self;
        for (c, list) in [
            (ConceptType::ResearchProblem, research_problem),
            (ConceptType::Solution, solution),
            (ConceptType::Resource, resource),
            (ConceptType::Language, language),
            (ConceptType::Tool, tool),
            (ConceptType::Method, method),
        ] {
            out.extend(list.into_iter().map(|p| (c, p)));
        }
        out
    }
}
