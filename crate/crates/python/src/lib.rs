//! Python bindings: lexicon, template classification, concept typing,
//! BibTeX ingestion and the evaluation metrics.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use title_miner::analytics::{normalize_term, precision as precision_of, recall_eval};
use title_miner::ingest::{ingest_bibtex as ingest, normalize_text, Title};
use title_miner::lexicon::{Lexicon as CoreLexicon, LexiconError};
use title_miner::pipeline::{ExtractionRecord, Parser};
use title_miner::template::classify_text;
use title_miner::typer::{self, ConceptType, TitleExpression, TypingError, TypingOptions};

/// Concept lists keyed by concept name; every concept present.
pub fn expression_map(expr: &TitleExpression) -> HashMap<String, Vec<String>> {
    ConceptType::ALL
        .into_iter()
        .map(|c| (c.as_str().to_string(), expr.get(c).to_vec()))
        .collect()
}

fn typing_err(e: TypingError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lexicon_err(e: LexiconError) -> PyErr {
    match e {
        LexiconError::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Lexicon", frozen, skip_from_py_object)]
#[derive(Clone, Default)]
pub struct PyLexicon {
    inner: CoreLexicon,
}

#[pymethods]
impl PyLexicon {
    /// The bundled lexicon.
    #[new]
    fn new() -> Self {
        Self::default()
    }

    /// Load all list files from a lexicon directory.
    #[staticmethod]
    fn from_dir(path: PathBuf) -> PyResult<Self> {
        CoreLexicon::from_dir(path)
            .map(|inner| PyLexicon { inner })
            .map_err(lexicon_err)
    }

    fn is_language(&self, phrase: &str) -> bool {
        self.inner.is_language(phrase)
    }

    fn is_tool(&self, phrase: &str) -> bool {
        self.inner.is_tool(phrase)
    }

    fn is_method(&self, phrase: &str) -> bool {
        self.inner.is_method(phrase)
    }

    fn is_resource(&self, phrase: &str) -> bool {
        self.inner.is_resource(phrase)
    }

    fn is_research_problem(&self, phrase: &str) -> bool {
        self.inner.is_research_problem(phrase)
    }

    fn has_special_case_word(&self, title: &str) -> bool {
        self.inner.has_special_case_word(title)
    }

    fn non_content_phrase(&self, phrase: &str) -> bool {
        self.inner.non_content_phrase(phrase)
    }
}

/// One parsed title.
#[pyclass(name = "Record", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRecord {
    title: String,
    year: Option<i32>,
    source_key: String,
    template: String,
    rule: usize,
    research_problem: Vec<String>,
    solution: Vec<String>,
    resource: Vec<String>,
    language: Vec<String>,
    tool: Vec<String>,
    method: Vec<String>,
    json: String,
}

impl From<ExtractionRecord> for PyRecord {
    fn from(r: ExtractionRecord) -> Self {
        let json = r.to_json();
        let e = r.expression;
        PyRecord {
            title: r.title.text,
            year: r.title.year,
            source_key: r.title.source_key,
            template: r.template.as_str().to_string(),
            rule: r.template.rule(),
            research_problem: e.research_problem,
            solution: e.solution,
            resource: e.resource,
            language: e.language,
            tool: e.tool,
            method: e.method,
            json,
        }
    }
}

#[pymethods]
impl PyRecord {
    /// Concept lists keyed by concept name.
    fn concepts(&self) -> HashMap<String, Vec<String>> {
        [
            ("research_problem", &self.research_problem),
            ("solution", &self.solution),
            ("resource", &self.resource),
            ("language", &self.language),
            ("tool", &self.tool),
            ("method", &self.method),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Record(template={:?}, title={:?})",
            self.template, self.title
        )
    }
}

fn lexicon_or_bundled(lexicon: Option<&PyLexicon>) -> CoreLexicon {
    lexicon.map(|l| l.inner.clone()).unwrap_or_default()
}

fn options(fallthrough: bool) -> TypingOptions {
    TypingOptions {
        fallthrough_research_problem: fallthrough,
    }
}

#[pyfunction]
#[pyo3(signature = (text, year=None, lexicon=None, fallthrough_research_problem=false))]
fn parse_title(
    text: &str,
    year: Option<i32>,
    lexicon: Option<&PyLexicon>,
    fallthrough_research_problem: bool,
) -> PyRecord {
    let lex = lexicon_or_bundled(lexicon);
    let title = Title::new(text).with_year(year);
    Parser::new(&lex)
        .with_options(options(fallthrough_research_problem))
        .parse(&title)
        .into()
}

/// Parse many titles; the result follows input order.
#[pyfunction]
#[pyo3(signature = (texts, lexicon=None, jobs=None, fallthrough_research_problem=false))]
fn parse_corpus(
    py: Python<'_>,
    texts: Vec<String>,
    lexicon: Option<&PyLexicon>,
    jobs: Option<usize>,
    fallthrough_research_problem: bool,
) -> PyResult<Vec<PyRecord>> {
    let lex = lexicon_or_bundled(lexicon);
    let titles: Vec<Title> = texts.iter().map(Title::new).collect();
    let records = py.detach(|| {
        let parser = Parser::new(&lex).with_options(options(fallthrough_research_problem));
        match jobs {
            Some(n) => parser.parse_corpus_with_jobs(&titles, n),
            None => Ok(parser.parse_corpus(&titles)),
        }
    });
    let records = records.map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(records.into_iter().map(PyRecord::from).collect())
}

/// (template name, rule number, split points in characters).
#[pyfunction]
#[pyo3(signature = (text, lexicon=None))]
fn classify(text: &str, lexicon: Option<&PyLexicon>) -> (String, usize, Vec<usize>) {
    let lex = lexicon_or_bundled(lexicon);
    let class = classify_text(text, &lex);
    (
        class.kind.as_str().to_string(),
        class.kind.rule(),
        class.split_points,
    )
}

#[pyfunction]
fn count_connectors(text: &str) -> usize {
    title_miner::connector::count_connectors(text)
}

/// (segments, connectors, dropped connectors).
#[pyfunction]
fn split_on_connectors(text: &str) -> (Vec<String>, Vec<String>, Vec<String>) {
    let c = title_miner::connector::split_on_connectors(text);
    let names = |cs: Vec<title_miner::connector::Connector>| {
        cs.iter().map(|c| c.as_str().to_string()).collect()
    };
    (c.segments, names(c.connectors), names(c.dropped))
}

#[pyfunction]
#[pyo3(signature = (phrase, lexicon=None))]
fn five_way_concept_typing(
    phrase: &str,
    lexicon: Option<&PyLexicon>,
) -> PyResult<HashMap<String, Vec<String>>> {
    let lex = lexicon_or_bundled(lexicon);
    typer::five_way_concept_typing(phrase, &lex)
        .map(|e| expression_map(&e))
        .map_err(typing_err)
}

#[pyfunction]
#[pyo3(signature = (phrase, lexicon=None))]
fn one_connector_heuristics(
    phrase: &str,
    lexicon: Option<&PyLexicon>,
) -> PyResult<HashMap<String, Vec<String>>> {
    let lex = lexicon_or_bundled(lexicon);
    typer::one_connector_heuristics(phrase, &lex)
        .map(|e| expression_map(&e))
        .map_err(typing_err)
}

/// Resolve LaTeX markup and collapse whitespace in a raw title.
#[pyfunction]
fn normalize_title(raw: &str) -> String {
    normalize_text(raw)
}

/// Parse, normalize and deduplicate BibTeX source.
///
/// Returns a dict with `titles` as (text, year, key) tuples and the
/// `read`, `kept`, `duplicates`, `invalid` counts.
#[pyfunction]
fn ingest_bibtex(py: Python<'_>, source: &str) -> PyResult<Py<PyAny>> {
    let report = ingest(source.as_bytes()).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let titles: Vec<(String, Option<i32>, String)> = report
        .titles
        .iter()
        .map(|t| (t.text.clone(), t.year, t.source_key.clone()))
        .collect();
    let out = pyo3::types::PyDict::new(py);
    out.set_item("titles", titles)?;
    out.set_item("read", report.read)?;
    out.set_item("kept", report.kept())?;
    out.set_item("duplicates", report.duplicates)?;
    out.set_item("invalid", report.invalid)?;
    Ok(out.into_any().unbind())
}

fn term_set(terms: Vec<String>) -> BTreeSet<String> {
    terms
        .iter()
        .map(|t| normalize_term(t))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Distinct extracted terms found in `gold`, as a fraction; None without
/// extractions.
#[pyfunction]
fn precision(extracted: Vec<String>, gold: Vec<String>) -> Option<f64> {
    precision_of(&extracted, &term_set(gold))
}

/// Oracle terms that were extracted, as a fraction; None for an empty oracle.
#[pyfunction]
fn recall(extracted: Vec<String>, oracle: Vec<String>) -> Option<f64> {
    recall_eval(&extracted, &term_set(oracle))
}

#[pymodule]
#[pyo3(name = "title_miner")]
fn title_miner_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLexicon>()?;
    m.add_class::<PyRecord>()?;
    m.add_function(wrap_pyfunction!(parse_title, m)?)?;
    m.add_function(wrap_pyfunction!(parse_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(count_connectors, m)?)?;
    m.add_function(wrap_pyfunction!(split_on_connectors, m)?)?;
    m.add_function(wrap_pyfunction!(five_way_concept_typing, m)?)?;
    m.add_function(wrap_pyfunction!(one_connector_heuristics, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_title, m)?)?;
    m.add_function(wrap_pyfunction!(ingest_bibtex, m)?)?;
    m.add_function(wrap_pyfunction!(precision, m)?)?;
    m.add_function(wrap_pyfunction!(recall, m)?)?;
    Ok(())
}
