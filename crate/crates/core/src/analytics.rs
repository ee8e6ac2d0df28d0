//! Frequency tables, century trends, rule coverage and list-based metrics
//! over extraction records.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::lexicon::parse_list;
use crate::pipeline::ExtractionRecord;
use crate::template::TemplateKind;
use crate::typer::ConceptType;

/// Ranked (term, count) rows, highest count first, ties alphabetical.
pub type Ranking = Vec<(String, usize)>;

pub const PERIOD_20TH: &str = "20th";
pub const PERIOD_21ST: &str = "21st";

/// Lowercase and collapse whitespace; the form terms are counted and
/// compared in.
pub fn normalize_term(term: &str) -> String {
    term.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

fn rank(counts: HashMap<String, usize>) -> Ranking {
    let mut rows: Ranking = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

fn count_terms<'r>(
    records: impl IntoIterator<Item = &'r ExtractionRecord>,
) -> BTreeMap<ConceptType, HashMap<String, usize>> {
    let mut counts: BTreeMap<ConceptType, HashMap<String, usize>> = BTreeMap::new();
    for r in records {
        for (concept, phrase) in r.expression.iter() {
            let term = normalize_term(phrase);
            if !term.is_empty() {
                *counts.entry(concept).or_default().entry(term).or_default() += 1;
            }
        }
    }
    counts
}

/// Term frequencies per concept. Concepts with no terms are absent.
pub fn concept_frequencies(records: &[ExtractionRecord]) -> BTreeMap<ConceptType, Ranking> {
    count_terms(records)
        .into_iter()
        .map(|(c, counts)| (c, rank(counts)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrendTable {
    pub concept: ConceptType,
    /// Period label to ranking; both periods are always present.
    pub buckets: BTreeMap<String, Ranking>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenturySplit {
    /// One table per concept, in field order.
    pub tables: Vec<TrendTable>,
    /// Records per period.
    pub records: BTreeMap<String, usize>,
    /// Records without a year.
    pub excluded: usize,
}

pub fn period_of(year: i32) -> &'static str {
    if year <= 2000 {
        PERIOD_20TH
    } else {
        PERIOD_21ST
    }
}

/// Rankings for titles up to 2000 and from 2001 on. Year-less records are
/// only counted.
pub fn century_split(records: &[ExtractionRecord]) -> CenturySplit {
    let mut by_period: BTreeMap<&str, Vec<&ExtractionRecord>> =
        [(PERIOD_20TH, vec![]), (PERIOD_21ST, vec![])].into();
    let mut excluded = 0;
    for r in records {
        match r.title.year {
            Some(y) => by_period.get_mut(period_of(y)).unwrap().push(r),
            None => excluded += 1,
        }
    }
    let mut counted: BTreeMap<&str, BTreeMap<ConceptType, HashMap<String, usize>>> = by_period
        .iter()
        .map(|(p, rs)| (*p, count_terms(rs.iter().copied())))
        .collect();
    let tables = ConceptType::ALL
        .into_iter()
        .map(|concept| TrendTable {
            concept,
            buckets: counted
                .iter_mut()
                .map(|(p, counts)| {
                    (
                        p.to_string(),
                        rank(counts.remove(&concept).unwrap_or_default()),
                    )
                })
                .collect(),
        })
        .collect();
    CenturySplit {
        tables,
        records: by_period
            .iter()
            .map(|(p, rs)| (p.to_string(), rs.len()))
            .collect(),
        excluded,
    }
}

/// Records per template kind; every kind present.
pub fn coverage(records: &[ExtractionRecord]) -> BTreeMap<TemplateKind, usize> {
    let mut out: BTreeMap<TemplateKind, usize> =
        TemplateKind::ALL.iter().map(|k| (*k, 0)).collect();
    for r in records {
        *out.get_mut(&r.template).unwrap() += 1;
    }
    out
}

/// Curated terms for one concept, normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldList {
    pub concept: ConceptType,
    pub terms: BTreeSet<String>,
}

impl GoldList {
    pub fn new<I, S>(concept: ConceptType, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let terms = terms
            .into_iter()
            .map(|t| normalize_term(t.as_ref()))
            .filter(|t| !t.is_empty())
            .collect();
        GoldList { concept, terms }
    }

    /// One entry per line, `#` comments, as in the lexicon files.
    pub fn parse(concept: ConceptType, source: &str) -> Self {
        Self::new(concept, parse_list(source))
    }

    /// Load `<dir>/<concept>.txt` for every concept that has one.
    pub fn load_dir(dir: &Path) -> io::Result<BTreeMap<ConceptType, GoldList>> {
        if !dir.is_dir() {
            return Err(io::Error::new(
                io::ErrorKind::NotFound,
                format!("{} is not a directory", dir.display()),
            ));
        }
        let mut out = BTreeMap::new();
        for concept in ConceptType::ALL {
            let path = dir.join(format!("{concept}.txt"));
            if path.is_file() {
                out.insert(concept, Self::parse(concept, &fs::read_to_string(&path)?));
            }
        }
        Ok(out)
    }
}

fn distinct<S: AsRef<str>>(terms: &[S]) -> BTreeSet<String> {
    terms
        .iter()
        .map(|t| normalize_term(t.as_ref()))
        .filter(|t| !t.is_empty())
        .collect()
}

/// Share of distinct extracted terms found in `gold`; `None` without
/// extractions.
pub fn precision<S: AsRef<str>>(extracted: &[S], gold: &BTreeSet<String>) -> Option<f64> {
    let ext = distinct(extracted);
    if ext.is_empty() {
        return None;
    }
    let hit = ext.iter().filter(|t| gold.contains(*t)).count();
    Some(hit as f64 / ext.len() as f64)
}

/// Share of `oracle` terms that were extracted; `None` for an empty oracle.
pub fn recall_eval<S: AsRef<str>>(extracted: &[S], oracle: &BTreeSet<String>) -> Option<f64> {
    if oracle.is_empty() {
        return None;
    }
    let ext = distinct(extracted);
    let hit = oracle.iter().filter(|t| ext.contains(*t)).count();
    Some(hit as f64 / oracle.len() as f64)
}

/// Type-level precision per concept. A concept without a gold list or
/// without extractions is undefined.
pub fn precision_eval(
    extracted: &BTreeMap<ConceptType, Ranking>,
    gold: &BTreeMap<ConceptType, GoldList>,
) -> BTreeMap<ConceptType, Option<f64>> {
    ConceptType::ALL
        .into_iter()
        .map(|c| {
            let terms: Vec<&str> = extracted
                .get(&c)
                .map(|rows| rows.iter().map(|(t, _)| t.as_str()).collect())
                .unwrap_or_default();
            (c, gold.get(&c).and_then(|g| precision(&terms, &g.terms)))
        })
        .collect()
}

/// Recall per concept against oracle lists.
pub fn recall_by_concept(
    extracted: &BTreeMap<ConceptType, Ranking>,
    oracle: &BTreeMap<ConceptType, GoldList>,
) -> BTreeMap<ConceptType, Option<f64>> {
    ConceptType::ALL
        .into_iter()
        .map(|c| {
            let terms: Vec<&str> = extracted
                .get(&c)
                .map(|rows| rows.iter().map(|(t, _)| t.as_str()).collect())
                .unwrap_or_default();
            (
                c,
                oracle.get(&c).and_then(|g| recall_eval(&terms, &g.terms)),
            )
        })
        .collect()
}

fn truncated(rows: &Ranking, top: Option<usize>) -> &[(String, usize)] {
    &rows[..top.map_or(rows.len(), |n| n.min(rows.len()))]
}

fn ranking_lines(out: &mut String, rows: &[(String, usize)]) {
    if rows.is_empty() {
        out.push_str("  (none)\n");
    }
    for (term, count) in rows {
        let _ = writeln!(out, "  {count:>7}  {term}");
    }
}

pub fn render_frequencies_text(
    freqs: &BTreeMap<ConceptType, Ranking>,
    top: Option<usize>,
) -> String {
    let mut out = String::new();
    let empty = Ranking::new();
    for c in ConceptType::ALL {
        let rows = freqs.get(&c).unwrap_or(&empty);
        let _ = writeln!(out, "{c} ({} distinct)", rows.len());
        ranking_lines(&mut out, truncated(rows, top));
    }
    out
}

pub fn render_frequencies_ndjson(
    freqs: &BTreeMap<ConceptType, Ranking>,
    top: Option<usize>,
) -> String {
    let mut out = String::new();
    for (c, rows) in freqs {
        for (i, (term, count)) in truncated(rows, top).iter().enumerate() {
            let line = json!({"table": "frequency", "concept": c, "rank": i + 1, "term": term, "count": count});
            let _ = writeln!(out, "{line}");
        }
    }
    out
}

pub fn render_century_text(split: &CenturySplit, top: Option<usize>) -> String {
    let mut out = String::new();
    for (period, n) in &split.records {
        let _ = writeln!(out, "{period} century: {n} titles");
    }
    let _ = writeln!(out, "without year: {}", split.excluded);
    for table in &split.tables {
        for (period, rows) in &table.buckets {
            let _ = writeln!(out, "{} / {period}", table.concept);
            ranking_lines(&mut out, truncated(rows, top));
        }
    }
    out
}

pub fn render_century_ndjson(split: &CenturySplit, top: Option<usize>) -> String {
    let mut out = String::new();
    for (period, n) in &split.records {
        let line = json!({"table": "century_records", "period": period, "records": n});
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(
        out,
        "{}",
        json!({"table": "century_records", "period": null, "records": split.excluded})
    );
    for table in &split.tables {
        for (period, rows) in &table.buckets {
            for (i, (term, count)) in truncated(rows, top).iter().enumerate() {
                let line = json!({
                    "table": "century", "concept": table.concept, "period": period,
                    "rank": i + 1, "term": term, "count": count,
                });
                let _ = writeln!(out, "{line}");
            }
        }
    }
    out
}

pub fn render_coverage_text(cov: &BTreeMap<TemplateKind, usize>) -> String {
    let total: usize = cov.values().sum();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4}  {:<22}  {:>7}  {:>7}",
        "rule", "template", "titles", "share"
    );
    for (kind, n) in cov {
        let share = if total == 0 {
            0.0
        } else {
            100.0 * *n as f64 / total as f64
        };
        let _ = writeln!(
            out,
            "{:>4}  {:<22}  {n:>7}  {share:>6.2}%",
            kind.rule(),
            kind.as_str()
        );
    }
    let _ = writeln!(out, "{:>4}  {:<22}  {total:>7}", "", "total");
    out
}

pub fn render_coverage_ndjson(cov: &BTreeMap<TemplateKind, usize>) -> String {
    let mut out = String::new();
    for (kind, n) in cov {
        let line = json!({"table": "coverage", "rule": kind.rule(), "template": kind, "titles": n});
        let _ = writeln!(out, "{line}");
    }
    out
}

fn percent(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |p| format!("{:.2}%", 100.0 * p))
}

pub fn render_metrics_text(metric: &str, values: &BTreeMap<ConceptType, Option<f64>>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<16}  {metric:>9}", "concept");
    for (c, v) in values {
        let _ = writeln!(out, "{:<16}  {:>9}", c.as_str(), percent(*v));
    }
    out
}

pub fn render_metrics_ndjson(metric: &str, values: &BTreeMap<ConceptType, Option<f64>>) -> String {
    let mut out = String::new();
    for (c, v) in values {
        let _ = writeln!(
            out,
            "{}",
            json!({"table": metric, "concept": c, "value": v})
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Title;
    use crate::typer::TitleExpression;

    fn record(year: Option<i32>, pairs: &[(ConceptType, &str)]) -> ExtractionRecord {
        let mut expression = TitleExpression::new();
        for (c, p) in pairs {
            expression.push(*c, *p);
        }
        ExtractionRecord {
            title: Title::new("t").with_year(year),
            template: TemplateKind::Default,
            expression,
        }
    }

    #[test]
    fn frequencies_aggregate_lowercased() {
        assert!(concept_frequencies(&[]).is_empty());
        let rs = [
            record(
                None,
                &[(ConceptType::ResearchProblem, "Machine Translation")],
            ),
            record(
                None,
                &[(ConceptType::ResearchProblem, "machine  translation")],
            ),
            record(
                None,
                &[(ConceptType::Tool, "B"), (ConceptType::Method, "z")],
            ),
            record(None, &[(ConceptType::Tool, "a")]),
        ];
        let f = concept_frequencies(&rs);
        assert_eq!(
            f[&ConceptType::ResearchProblem],
            [("machine translation".to_string(), 2)]
        );
        // ties are alphabetical
        assert_eq!(
            f[&ConceptType::Tool],
            [("a".to_string(), 1), ("b".to_string(), 1)]
        );
    }

    #[test]
    fn century_buckets() {
        let rs = [
            record(Some(1995), &[(ConceptType::Resource, "WordNet")]),
            record(Some(2015), &[(ConceptType::Resource, "WordNet")]),
            record(Some(2000), &[]),
            record(None, &[(ConceptType::Resource, "WordNet")]),
        ];
        let s = century_split(&rs);
        assert_eq!(s.excluded, 1);
        assert_eq!(s.records[PERIOD_20TH], 2);
        assert_eq!(s.records[PERIOD_21ST], 1);
        let res = s
            .tables
            .iter()
            .find(|t| t.concept == ConceptType::Resource)
            .unwrap();
        assert_eq!(res.buckets[PERIOD_20TH], [("wordnet".to_string(), 1)]);
        assert_eq!(res.buckets[PERIOD_21ST], [("wordnet".to_string(), 1)]);

        let s = century_split(&[record(None, &[]), record(None, &[])]);
        assert_eq!(s.excluded, 2);
        assert!(s
            .tables
            .iter()
            .all(|t| t.buckets.values().all(Vec::is_empty)));
    }

    #[test]
    fn metric_definitions() {
        let gold: BTreeSet<String> = ["a".to_string()].into();
        assert_eq!(precision(&["a", "b"], &gold), Some(0.5));
        assert_eq!(precision(&["A", "a"], &gold), Some(1.0));
        assert_eq!(precision::<&str>(&[], &gold), None);
        let oracle: BTreeSet<String> = ["x".to_string(), "y".to_string()].into();
        assert_eq!(recall_eval(&["x"], &oracle), Some(0.5));
        assert_eq!(recall_eval(&["x", "y", "z"], &oracle), Some(1.0));
        assert_eq!(recall_eval(&["x"], &BTreeSet::new()), None);
    }

    #[test]
    fn per_concept_eval_marks_missing_lists() {
        let extracted: BTreeMap<ConceptType, Ranking> =
            [(ConceptType::Tool, vec![("weka".to_string(), 2)])].into();
        let gold: BTreeMap<ConceptType, GoldList> = [(
            ConceptType::Tool,
            GoldList::parse(ConceptType::Tool, "# tools\nWeka\n"),
        )]
        .into();
        let p = precision_eval(&extracted, &gold);
        assert_eq!(p[&ConceptType::Tool], Some(1.0));
        assert_eq!(p[&ConceptType::Method], None);
        assert!(render_metrics_text("precision", &p).contains("n/a"));
    }

    #[test]
    fn coverage_counts_every_kind() {
        let cov = coverage(&[record(None, &[])]);
        assert_eq!(cov.len(), 9);
        assert_eq!(cov.values().sum::<usize>(), 1);
        assert!(render_coverage_text(&cov).contains("total"));
    }
}
