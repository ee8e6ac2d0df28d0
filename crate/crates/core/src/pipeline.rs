//! Classify, chunk and type titles; serialize the results.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ingest::Title;
use crate::lexicon::Lexicon;
use crate::template::TemplateKind;
use crate::typer::{ConceptType, ConceptTyper, TitleExpression, TypingOptions};

/// One parsed title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "FlatRecord", into = "FlatRecord")]
pub struct ExtractionRecord {
    pub title: Title,
    pub template: TemplateKind,
    pub expression: TitleExpression,
}

// On the wire a record is one flat object: title fields first, then the
// template, then the six concept lists.
#[derive(Serialize, Deserialize)]
struct FlatRecord {
    title: String,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    source_key: String,
    template: TemplateKind,
    #[serde(flatten)]
    expression: TitleExpression,
}

impl From<FlatRecord> for ExtractionRecord {
    fn from(r: FlatRecord) -> Self {
        ExtractionRecord {
            title: Title {
                text: r.title,
                year: r.year,
                source_key: r.source_key,
            },
            template: r.template,
            expression: r.expression,
        }
    }
}

impl From<ExtractionRecord> for FlatRecord {
    fn from(r: ExtractionRecord) -> Self {
        FlatRecord {
            title: r.title.text,
            year: r.title.year,
            source_key: r.title.source_key,
            template: r.template,
            expression: r.expression,
        }
    }
}

impl ExtractionRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

/// Parse one title with the default typing options.
pub fn parse_title(title: &Title, lexicon: &Lexicon) -> ExtractionRecord {
    Parser::new(lexicon).parse(title)
}

/// Parse a corpus on the global thread pool. Output follows input order.
pub fn parse_corpus(titles: &[Title], lexicon: &Lexicon) -> Vec<ExtractionRecord> {
    Parser::new(lexicon).parse_corpus(titles)
}

#[derive(Debug, Clone, Copy)]
pub struct Parser<'a> {
    typer: ConceptTyper<'a>,
}

impl<'a> Parser<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Parser {
            typer: ConceptTyper::new(lexicon),
        }
    }

    pub fn with_options(self, options: TypingOptions) -> Self {
        Parser {
            typer: self.typer.with_options(options),
        }
    }

    pub fn parse(&self, title: &Title) -> ExtractionRecord {
        let (class, expression) = self.typer.type_title(&title.text);
        ExtractionRecord {
            title: title.clone(),
            template: class.kind,
            expression,
        }
    }

    pub fn parse_corpus(&self, titles: &[Title]) -> Vec<ExtractionRecord> {
        titles.par_iter().map(|t| self.parse(t)).collect()
    }

    /// Parse on a dedicated pool of `jobs` threads.
    pub fn parse_corpus_with_jobs(
        &self,
        titles: &[Title],
        jobs: usize,
    ) -> Result<Vec<ExtractionRecord>, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()?;
        Ok(pool.install(|| self.parse_corpus(titles)))
    }
}

/// Extracted phrases per concept, every concept present.
pub fn concept_totals(records: &[ExtractionRecord]) -> BTreeMap<ConceptType, usize> {
    let mut totals: BTreeMap<ConceptType, usize> =
        ConceptType::ALL.iter().map(|c| (*c, 0)).collect();
    for r in records {
        for c in ConceptType::ALL {
            *totals.get_mut(&c).unwrap() += r.expression.get(c).len();
        }
    }
    totals
}

pub fn write_ndjson<W: Write>(mut out: W, records: &[ExtractionRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Read records written by [`write_ndjson`]. Blank lines are skipped.
pub fn read_ndjson<R: BufRead>(input: R) -> Result<Vec<ExtractionRecord>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| RecordError::Json {
            line: i + 1,
            source,
        })?;
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_titles() {
        let lex = Lexicon::bundled();
        let r = parse_title(
            &Title::new("Adding Pronunciation Information to Wordnets"),
            &lex,
        );
        assert_eq!(r.template, TemplateKind::Default);
        assert_eq!(r.expression.solution, ["Adding Pronunciation Information"]);
        assert_eq!(r.expression.tool, ["Wordnets"]);
        assert_eq!(r.expression.len(), 2);

        let r = parse_title(&Title::new("Zq Vb"), &lex);
        assert_eq!(r.template, TemplateKind::Default);
        assert!(r.expression.is_empty());
    }

    #[test]
    fn flat_json_round_trip() {
        let lex = Lexicon::bundled();
        let title = Title::new("GRAFON: A Grapheme-to-Phoneme Conversion System for Dutch")
            .with_year(Some(1986))
            .with_source_key("daelemans-1986");
        let r = parse_title(&title, &lex);
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in [
            "title",
            "year",
            "source_key",
            "template",
            "research_problem",
            "solution",
            "resource",
            "language",
            "tool",
            "method",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["template"], "special_word_colon");
        assert_eq!(serde_json::from_str::<ExtractionRecord>(&json).unwrap(), r);
    }

    #[test]
    fn corpus_order_and_totals() {
        let lex = Lexicon::bundled();
        assert!(parse_corpus(&[], &lex).is_empty());
        let titles: Vec<Title> = ["Neural Machine Translation", "Zq Vb", "Parsing of Dutch"]
            .map(Title::new)
            .to_vec();
        let records = Parser::new(&lex)
            .parse_corpus_with_jobs(&titles, 3)
            .unwrap();
        let texts: Vec<_> = records.iter().map(|r| r.title.text.as_str()).collect();
        assert_eq!(
            texts,
            ["Neural Machine Translation", "Zq Vb", "Parsing of Dutch"]
        );
        let totals = concept_totals(&records);
        assert_eq!(totals.len(), 6);
        assert_eq!(totals[&ConceptType::Method], 1);

        let mut buf = Vec::new();
        write_ndjson(&mut buf, &records).unwrap();
        assert_eq!(read_ndjson(buf.as_slice()).unwrap(), records);
        assert!(matches!(
            read_ndjson("{\"title\": 3}\n".as_bytes()),
            Err(RecordError::Json { line: 1, .. })
        ));
    }
}
