//! Per-template typing of a whole title.

use once_cell::sync::Lazy;
use regex::Regex;

use crate::connector::{chunk, tokens, Connector};
use crate::ingest::Title;
use crate::lexicon::Lexicon;
use crate::template::{classify_text, Anchor, TemplateClass};

use super::branch::{clean, Slot, Slots};
use super::expression::{ConceptType, TitleExpression};
use super::ConceptTyper;

static SHARED_TASK: Lazy<Regex> = Lazy::new(|| {
    Regex::new(
        r"(?i)^(?:(?:semeval|senseval)-?\d{4}\s+task\s+\d+[a-z]?|conll-?\d{4}\s+shared\s+task)$",
    )
    .unwrap()
});

/// Type a classified title.
pub fn type_template(title: &Title, class: &TemplateClass, lexicon: &Lexicon) -> TitleExpression {
    ConceptTyper::new(lexicon).type_classified(&title.text, class)
}

impl ConceptTyper<'_> {
    /// Classify and type a title in one step.
    pub fn type_title(&self, text: &str) -> (TemplateClass, TitleExpression) {
        let class = classify_text(text, self.lexicon);
        let expr = self.type_classified(text, &class);
        (class, expr)
    }

    /// Type `text` along the split its template class prescribes.
    pub fn type_classified(&self, text: &str, class: &TemplateClass) -> TitleExpression {
        let mut expr = TitleExpression::new();
        match class.anchor {
            Anchor::None => expr = self.by_connector_count(text),
            Anchor::Colon(c) if class.kind == crate::template::TemplateKind::SpecialWordColon => {
                self.special_word(&text[..c], &text[c + 1..], &mut expr)
            }
            Anchor::Colon(c) => self.colon_generic(&text[..c], &text[c + 1..], &mut expr),
            Anchor::Using(e) => self.using_prefix(&text[e..], &mut expr),
            Anchor::CaseStudy { colon, start, end } => {
                self.parts(&text[..colon.unwrap_or(start)], &mut expr);
                let after = clean(&text[end..]);
                if !after.is_empty() {
                    let c = if self.lexicon.is_language(after) {
                        ConceptType::Language
                    } else {
                        ConceptType::ResearchProblem
                    };
                    expr.push(c, after);
                }
            }
            Anchor::AppliedTo { start, end } => {
                self.parts(&text[..start], &mut expr);
                let right = clean(&text[end..]);
                let c = if self.lexicon.is_research_problem(right) {
                    Some(ConceptType::ResearchProblem)
                } else {
                    self.sieve(right)
                };
                if let Some(c) = c {
                    expr.push(c, right);
                }
            }
            Anchor::NonContent(e) => {
                expr = self.by_connector_count(skip_leading_connectors(&text[e..]))
            }
            Anchor::DescriptionOf(e) => {
                let rest = chunk(&text[e..]);
                let mut slots = Slots::new(rest.segments, rest.connectors);
                if let Some(first) = slots.segments.first().copied().filter(|s| !s.is_empty()) {
                    slots.state[0] = Slot::Typed(if self.lexicon.is_tool(first) {
                        ConceptType::Tool
                    } else {
                        ConceptType::Solution
                    });
                }
                slots.branch_pass(self);
                slots.sieve_pass(self);
                slots.emit(&mut expr);
            }
        }
        expr
    }

    /// Sieve every connector-free piece, then let the connectors type the
    /// rest. Colons split pieces without joining them.
    fn parts(&self, text: &str, expr: &mut TitleExpression) {
        for piece in text.split(':') {
            let ch = chunk(piece);
            let mut slots = Slots::new(ch.segments, ch.connectors);
            slots.sieve_pass(self);
            slots.branch_pass(self);
            slots.emit(expr);
        }
    }

    fn colon_generic(&self, before: &str, after: &str, expr: &mut TitleExpression) {
        let before = clean(before);
        if SHARED_TASK.is_match(before) {
            expr.push(ConceptType::ResearchProblem, before);
        } else {
            self.parts(before, expr);
        }
        if !self.lexicon.non_content_phrase(clean(after)) {
            self.parts(after, expr);
        }
    }

    /// The system name before the colon is the solution. What follows up to
    /// the first connector other than "of" elaborates on it.
    fn special_word(&self, before: &str, after: &str, expr: &mut TitleExpression) {
        expr.push(ConceptType::Solution, clean(before));
        let after = after.trim();
        if self.lexicon.non_content_phrase(clean(after)) {
            return;
        }
        let toks = tokens(after);
        let split = toks.iter().find_map(|t| {
            Connector::from_token(t.text)
                .filter(|c| *c != Connector::Of)
                .map(|c| (t.start, t.end, c))
        });
        let Some((start, end, conn)) = split else {
            expr.push(ConceptType::Solution, clean(after));
            return;
        };
        let elaboration = clean(&after[..start]);
        expr.push(ConceptType::Solution, elaboration);
        let rest = chunk(&after[end..]);
        if rest.segments.is_empty() {
            return;
        }
        let mut segments = vec![elaboration];
        segments.extend(rest.segments);
        let mut connectors = vec![conn];
        connectors.extend(rest.connectors);
        let mut slots = Slots::new(segments, connectors);
        if !elaboration.is_empty() {
            slots.state[0] = Slot::Typed(ConceptType::Solution);
        }
        slots.branch_pass(self);
        slots.sieve_pass(self);
        slots.emit(expr);
    }

    /// What is used is a tool, method or resource; after "for" comes the
    /// problem it is used for.
    fn using_prefix(&self, after: &str, expr: &mut TitleExpression) {
        let toks = tokens(after);
        let split = toks
            .iter()
            .find_map(|t| Connector::from_token(t.text).map(|c| (t.start, t.end, c)));
        let (head, tail) = match split {
            Some((start, end, conn)) => (&after[..start], Some((conn, &after[end..]))),
            None => (after, None),
        };
        let head = clean(head);
        let used = self.sieve_among(head, |c| {
            matches!(
                c,
                ConceptType::Tool | ConceptType::Method | ConceptType::Resource
            )
        });

        let rest = tail.map(|(conn, t)| (conn, chunk(t)));
        let Some((conn, rest)) = rest.filter(|(_, r)| !r.segments.is_empty()) else {
            if let Some(c) = used {
                expr.push(c, head);
            }
            return;
        };
        let mut segments = vec![head];
        segments.extend(rest.segments);
        let mut connectors = vec![conn];
        connectors.extend(rest.connectors);
        let mut slots = Slots::new(segments, connectors);
        slots.state[0] = used.map_or(Slot::Fixed, Slot::Typed);
        if conn == Connector::For && slots.state.len() > 1 && slots.state[1] == Slot::Open {
            let goal = slots.segments[1];
            slots.state[1] = Slot::Typed(if self.lexicon.is_research_problem(goal) {
                ConceptType::ResearchProblem
            } else {
                ConceptType::Solution
            });
        }
        slots.branch_pass(self);
        slots.sieve_pass(self);
        slots.emit(expr);
    }
}

/// Drop punctuation and connector tokens left at the front of a phrase once
/// a prefix is removed ("An Overview of ...").
fn skip_leading_connectors(text: &str) -> &str {
    let mut rest = clean(text);
    loop {
        let toks = tokens(rest);
        match toks.first() {
            Some(t) if Connector::from_token(t.text).is_some() => rest = clean(&rest[t.end..]),
            _ => return rest,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::TemplateKind;

    fn typed(text: &str) -> (TemplateKind, TitleExpression) {
        let lex = Lexicon::bundled();
        let (class, expr) = ConceptTyper::new(&lex).type_title(text);
        (class.kind, expr)
    }

    #[test]
    fn shared_task_colon() {
        let (kind, e) = typed(
            "SemEval-2017 Task 5: Fine-Grained Sentiment Analysis on Financial Microblogs and News",
        );
        assert_eq!(kind, TemplateKind::ColonGeneric);
        assert_eq!(e.research_problem, ["SemEval-2017 Task 5"]);
        assert_eq!(e.method, ["Fine-Grained Sentiment Analysis"]);
        assert_eq!(e.resource, ["Financial Microblogs and News"]);
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn special_word_titles() {
        let (kind, e) = typed("GRAFON: A Grapheme-to-Phoneme Conversion System for Dutch");
        assert_eq!(kind, TemplateKind::SpecialWordColon);
        assert_eq!(
            e.solution,
            ["GRAFON", "A Grapheme-to-Phoneme Conversion System"]
        );
        assert_eq!(e.language, ["Dutch"]);

        let (_, e) = typed("MDWOZ: A Wizard of Oz Environment for Dialog Systems Development");
        assert_eq!(e.solution, ["MDWOZ", "A Wizard of Oz Environment"]);
        assert_eq!(e.research_problem, ["Dialog Systems Development"]);

        let (_, e) =
            typed("CIRCSIM-Tutor: An Intelligent Tutoring System Using Natural Language Dialogue");
        assert_eq!(e.solution[0], "CIRCSIM-Tutor");
        assert_eq!(e.resource, ["Natural Language Dialogue"]);

        let (_, e) = typed("SNOPAR: A Grammar Testing System");
        assert_eq!(e.solution, ["SNOPAR", "A Grammar Testing System"]);
    }

    #[test]
    fn using_titles() {
        let (kind, e) = typed("Using Multiple Knowledge Sources for Word Sense Discrimination");
        assert_eq!(kind, TemplateKind::UsingPrefix);
        assert_eq!(e.resource, ["Multiple Knowledge Sources"]);
        assert_eq!(e.research_problem, ["Word Sense Discrimination"]);
        assert_eq!(e.len(), 2);

        let (_, e) = typed("Using WordNet for Building WordNets");
        assert_eq!(e.resource, ["WordNet"]);
        assert_eq!(e.solution, ["Building WordNets"]);
    }

    #[test]
    fn dangling_connectors() {
        assert!(typed("Using for").1.is_empty());
        assert_eq!(
            typed("Using Parallel Corpora for").1.resource,
            ["Parallel Corpora"]
        );
        assert_eq!(typed("GRAFON: for").1.solution, ["GRAFON"]);
    }

    #[test]
    fn non_content_prefix_is_stripped() {
        let (kind, e) = typed("An Overview of Neural Machine Translation");
        assert_eq!(kind, TemplateKind::NonContentPrefix);
        assert_eq!(e.method, ["Neural Machine Translation"]);
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn description_of_leads_with_solution() {
        let (kind, e) = typed("Description of the Kent Ridge Digital Labs System for MUC-7");
        assert_eq!(kind, TemplateKind::DescriptionOf);
        assert_eq!(e.tool, ["the Kent Ridge Digital Labs System"]);
    }

    #[test]
    fn skip_leading_connector_tokens() {
        assert_eq!(skip_leading_connectors(" of the Lexicon"), "the Lexicon");
        assert_eq!(skip_leading_connectors(": on for X"), "X");
        assert_eq!(skip_leading_connectors("  "), "");
    }
}
