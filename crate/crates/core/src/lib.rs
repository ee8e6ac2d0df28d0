//! Rule-based extraction of typed scientific concepts from article titles.
//!
//! A title is classified into one of nine syntactic templates, split on
//! template anchors and connector words, and each segment is typed as a
//! research problem, solution, resource, language, tool or method using
//! lexicon predicates.

pub mod analytics;
pub mod connector;
pub mod ingest;
pub mod lexicon;
pub mod pipeline;
pub mod template;
pub mod typer;

pub use connector::{count_connectors, split_on_connectors, ChunkedPhrase, Connector};
pub use ingest::{
    ingest_bibtex, normalize_title, parse_bibtex, IngestError, IngestReport, RawRecord, Title,
};
pub use lexicon::{Lexicon, LexiconError, LexiconFile};

pub use pipeline::{parse_corpus, parse_title, ExtractionRecord, Parser};
pub use template::{classify, rule_coverage, TemplateClass, TemplateKind};
pub use typer::{
    five_way_concept_typing, multi_connector_typing, one_connector_heuristics, type_template,
    ConceptType, ConceptTyper, TitleExpression, TypingError, TypingOptions,
};
