//! BibTeX title ingestion: entry delimitation, title normalization and
//! corpus filtering.
//!
//! Only the subset of BibTeX needed to pull `title` and `year` out of each
//! entry is understood. String macros and crossrefs are not expanded; an
//! entry whose title is a bare macro is skipped with a warning.

use std::collections::HashSet;
use std::iter::Peekable;
use std::str::Chars;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("input is not valid UTF-8 (byte {offset})")]
    Utf8 { offset: usize },
    #[error("malformed BibTeX at byte {offset}: {message}")]
    Malformed { offset: usize, message: String },
    #[error("title of `{key}` is empty after normalization")]
    InvalidTitle { key: String },
}

/// An entry as found in the BibTeX source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub entry_key: String,
    pub title_raw: String,
    pub year: Option<i32>,
}

/// A normalized title with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Title {
    pub text: String,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub source_key: String,
}

impl Title {
    /// A title without provenance. Whitespace is collapsed.
    pub fn new(text: impl AsRef<str>) -> Self {
        Title {
            text: collapse_whitespace(text.as_ref()),
            year: None,
            source_key: String::new(),
        }
    }

    pub fn with_year(mut self, year: Option<i32>) -> Self {
        self.year = year;
        self
    }

    pub fn with_source_key(mut self, key: impl Into<String>) -> Self {
        self.source_key = key.into();
        self
    }
}

/// A non-fatal problem met while reading BibTeX.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BibWarning {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BibtexParse {
    pub records: Vec<RawRecord>,
    /// Entries that were delimited but yielded no usable title.
    pub skipped: usize,
    pub warnings: Vec<BibWarning>,
}

/// Read every entry carrying a `title` field.
pub fn parse_bibtex(input: &[u8]) -> Result<BibtexParse, IngestError> {
    let text = std::str::from_utf8(input).map_err(|e| IngestError::Utf8 {
        offset: e.valid_up_to(),
    })?;
    let mut out = BibtexParse::default();
    let bytes = text.as_bytes();
    let mut pos = 0;

    while let Some(rel) = text[pos..].find('@') {
        let at = pos + rel;
        let mut i = at + 1;
        while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
            i += 1;
        }
        let kind = text[at + 1..i].to_ascii_lowercase();
        if kind.is_empty() {
            pos = at + 1;
            continue;
        }
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let open = match bytes.get(i) {
            Some(b'{') => b'{',
            Some(b'(') => b'(',
            _ => {
                out.warnings.push(BibWarning {
                    offset: at,
                    message: format!("`@{kind}` is not followed by an entry body"),
                });
                pos = i;
                continue;
            }
        };
        let body_start = i + 1;
        let body_end =
            find_close(bytes, body_start, open).ok_or_else(|| IngestError::Malformed {
                offset: at,
                message: format!("unterminated `@{kind}` entry"),
            })?;
        pos = body_end + 1;

        if matches!(kind.as_str(), "comment" | "preamble" | "string") {
            continue;
        }
        match parse_entry_body(&text[body_start..body_end], body_start) {
            Ok(entry) => match entry.title {
                Some(title_raw) if !entry.key.is_empty() => out.records.push(RawRecord {
                    entry_key: entry.key,
                    title_raw,
                    year: entry.year,
                }),
                Some(_) => {
                    out.skipped += 1;
                    out.warnings.push(BibWarning {
                        offset: at,
                        message: "entry has no citation key".into(),
                    });
                }
                None => out.skipped += 1,
            },
            Err(w) => {
                out.skipped += 1;
                out.warnings.push(w);
            }
        }
    }
    Ok(out)
}

/// Index of the byte closing a body opened just before `start`.
fn find_close(bytes: &[u8], start: usize, open: u8) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        match b {
            b'{' => depth += 1,
            b'}' if depth == 0 => return (open == b'{').then_some(i),
            b'}' => depth -= 1,
            b')' if depth == 0 && open == b'(' => return Some(i),
            _ => {}
        }
    }
    None
}

struct EntryFields {
    key: String,
    title: Option<String>,
    year: Option<i32>,
}

fn parse_entry_body(body: &str, base: usize) -> Result<EntryFields, BibWarning> {
    let (key, rest, rest_off) = match body.find(',') {
        Some(c) => (body[..c].trim().to_string(), &body[c + 1..], c + 1),
        None => (body.trim().to_string(), "", body.len()),
    };
    let mut fields = FieldReader {
        src: rest,
        pos: 0,
        base: base + rest_off,
    };
    let mut entry = EntryFields {
        key,
        title: None,
        year: None,
    };
    while let Some((name, value)) = fields.next_field()? {
        match name.as_str() {
            "title" => match value {
                FieldValue::Text(t) => entry.title = Some(t),
                FieldValue::Macro(m) => {
                    return Err(BibWarning {
                        offset: fields.base,
                        message: format!("title of `{}` is the unexpanded macro `{m}`", entry.key),
                    })
                }
            },
            "year" => {
                let raw = match value {
                    FieldValue::Text(t) | FieldValue::Macro(t) => t,
                };
                entry.year = parse_year(&raw);
            }
            _ => {}
        }
    }
    Ok(entry)
}

fn parse_year(raw: &str) -> Option<i32> {
    let digits: String = raw
        .trim()
        .chars()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(char::is_ascii_digit)
        .collect();
    digits.parse().ok()
}

enum FieldValue {
    Text(String),
    Macro(String),
}

struct FieldReader<'a> {
    src: &'a str,
    pos: usize,
    base: usize,
}

impl FieldReader<'_> {
    fn warn(&self, message: impl Into<String>) -> BibWarning {
        BibWarning {
            offset: self.base + self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next_field(&mut self) -> Result<Option<(String, FieldValue)>, BibWarning> {
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(None),
                Some(b',') => self.pos += 1,
                Some(_) => break,
            }
        }
        let rest = &self.src[self.pos..];
        let name_len = rest
            .find(|c: char| c == '=' || c == ',' || c.is_whitespace())
            .unwrap_or(rest.len());
        let name = rest[..name_len].to_ascii_lowercase();
        self.pos += name_len;
        self.skip_ws();
        if self.peek() != Some(b'=') {
            return Err(self.warn(format!("field `{name}` has no value")));
        }
        self.pos += 1;

        let mut parts = Vec::new();
        let mut is_macro = false;
        loop {
            self.skip_ws();
            let part = match self.peek() {
                Some(b'{') => self.delimited(b'{', b'}')?,
                Some(b'"') => self.delimited(b'"', b'"')?,
                Some(_) => {
                    let rest = &self.src[self.pos..];
                    let len = rest
                        .find(|c: char| c == ',' || c == '#' || c.is_whitespace())
                        .unwrap_or(rest.len());
                    if len == 0 {
                        return Err(self.warn(format!("field `{name}` has an empty value")));
                    }
                    let word = rest[..len].to_string();
                    self.pos += len;
                    if !word.chars().all(|c| c.is_ascii_digit()) {
                        is_macro = true;
                    }
                    word
                }
                None => return Err(self.warn(format!("field `{name}` has no value"))),
            };
            parts.push(part);
            self.skip_ws();
            if self.peek() == Some(b'#') {
                self.pos += 1;
                continue;
            }
            break;
        }
        let joined = parts.concat();
        let value = if is_macro {
            FieldValue::Macro(joined)
        } else {
            FieldValue::Text(joined)
        };
        Ok(Some((name, value)))
    }

    fn delimited(&mut self, open: u8, close: u8) -> Result<String, BibWarning> {
        let bytes = self.src.as_bytes();
        let start = self.pos + 1;
        let mut depth = 0usize;
        let mut i = start;
        while i < bytes.len() {
            let b = bytes[i];
            if b == close && depth == 0 {
                self.pos = i + 1;
                return Ok(self.src[start..i].to_string());
            }
            match b {
                b'{' => depth += 1,
                b'}' => depth = depth.saturating_sub(1),
                _ => {}
            }
            i += 1;
        }
        Err(self.warn(format!("unterminated {} value", open as char)))
    }
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn combining_accent(cmd: &str) -> Option<char> {
    Some(match cmd {
        "'" => '\u{301}',
        "`" => '\u{300}',
        "^" => '\u{302}',
        "\"" => '\u{308}',
        "~" => '\u{303}',
        "=" => '\u{304}',
        "." => '\u{307}',
        "c" => '\u{327}',
        "v" => '\u{30C}',
        "u" => '\u{306}',
        "H" => '\u{30B}',
        "k" => '\u{328}',
        "r" => '\u{30A}',
        "d" => '\u{323}',
        "b" => '\u{331}',
        _ => return None,
    })
}

fn special_letter(cmd: &str) -> Option<&'static str> {
    Some(match cmd {
        "ss" => "ß",
        "o" => "ø",
        "O" => "Ø",
        "ae" => "æ",
        "AE" => "Æ",
        "oe" => "œ",
        "OE" => "Œ",
        "aa" => "å",
        "AA" => "Å",
        "l" => "ł",
        "L" => "Ł",
        // dotless i/j only ever appear under an accent
        "i" => "i",
        "j" => "j",
        "textendash" | "textemdash" => "-",
        _ => return None,
    })
}

/// Resolve LaTeX escapes and accent commands; braces are left in place.
fn resolve_latex(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\\' {
            resolve_command(&mut chars, &mut out);
        } else {
            out.push(c);
        }
    }
    out
}

fn resolve_command(chars: &mut Peekable<Chars<'_>>, out: &mut String) {
    let Some(&next) = chars.peek() else {
        return;
    };
    let name = if next.is_ascii_alphabetic() {
        let mut name = String::new();
        while let Some(&c) = chars.peek() {
            if !c.is_ascii_alphabetic() {
                break;
            }
            name.push(c);
            chars.next();
        }
        name
    } else {
        chars.next();
        next.to_string()
    };

    if let Some(mark) = combining_accent(&name) {
        if name.chars().all(|c| c.is_ascii_alphabetic()) {
            while chars.peek().is_some_and(|c| *c == ' ') {
                chars.next();
            }
        }
        let arg = accent_argument(chars);
        let mut arg_chars = arg.chars();
        if let Some(base) = arg_chars.next() {
            out.extend([base, mark].into_iter().nfc());
            out.extend(arg_chars);
        }
        return;
    }
    if let Some(letter) = special_letter(&name) {
        // a control word swallows the spaces that terminate it
        if name.starts_with(|c: char| c.is_ascii_alphabetic()) {
            while chars.peek().is_some_and(|c| *c == ' ') {
                chars.next();
            }
        }
        out.push_str(letter);
        return;
    }
    match name.as_str() {
        "&" | "%" | "$" | "#" | "_" => out.push_str(&name),
        "\\" | " " => out.push(' '),
        // escaped braces would unbalance the title
        "{" | "}" => {}
        // formatting commands (\emph, \textit, ...) keep only their argument
        _ => {}
    }
}

fn accent_argument(chars: &mut Peekable<Chars<'_>>) -> String {
    match chars.peek().copied() {
        Some('{') => {
            chars.next();
            let mut depth = 0usize;
            let mut inner = String::new();
            for c in chars.by_ref() {
                match c {
                    '{' => depth += 1,
                    '}' if depth == 0 => break,
                    '}' => depth -= 1,
                    _ => {}
                }
                inner.push(c);
            }
            resolve_latex(&inner).replace(['{', '}'], "")
        }
        Some('\\') => {
            chars.next();
            let mut s = String::new();
            resolve_command(chars, &mut s);
            s
        }
        Some(c) => {
            chars.next();
            c.to_string()
        }
        None => String::new(),
    }
}

fn is_dash(c: char) -> bool {
    matches!(
        c,
        '\u{2010}'..='\u{2015}' | '\u{2212}' | '\u{FE58}' | '\u{FE63}' | '\u{FF0D}'
    )
}

/// Normalize a raw BibTeX title: resolve LaTeX, strip braces, unify dashes
/// and collapse whitespace. Casing is preserved.
pub fn normalize_title(record: &RawRecord) -> Result<Title, IngestError> {
    let text = normalize_text(&record.title_raw);
    if text.is_empty() {
        return Err(IngestError::InvalidTitle {
            key: record.entry_key.clone(),
        });
    }
    Ok(Title {
        text,
        year: record.year,
        source_key: record.entry_key.clone(),
    })
}

/// The text transformation behind [`normalize_title`].
pub fn normalize_text(raw: &str) -> String {
    let resolved = resolve_latex(raw);
    let mut flat = String::with_capacity(resolved.len());
    for c in resolved.chars() {
        match c {
            '{' | '}' => {}
            '~' => flat.push(' '),
            c if is_dash(c) => flat.push('-'),
            c => flat.push(c),
        }
    }
    let mut text = collapse_whitespace(&flat);
    while text.contains("--") {
        text = text.replace("--", "-");
    }
    text.nfc().collect()
}

/// Validity predicate for corpus titles: at least two characters and at
/// least one letter.
pub fn is_valid_title(text: &str) -> bool {
    let text = text.trim();
    text.chars().count() >= 2 && text.chars().any(char::is_alphabetic)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub titles: Vec<Title>,
    pub duplicates: usize,
    pub invalid: usize,
}

/// Drop invalid titles and case-insensitive duplicates, keeping the first
/// occurrence and the input order.
pub fn dedup_and_filter(records: Vec<Title>) -> FilterOutcome {
    let mut seen = HashSet::new();
    let mut out = FilterOutcome::default();
    for title in records {
        if !is_valid_title(&title.text) {
            out.invalid += 1;
        } else if seen.insert(title.text.to_lowercase()) {
            out.titles.push(title);
        } else {
            out.duplicates += 1;
        }
    }
    out
}

/// Counts from a full BibTeX-to-corpus run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub titles: Vec<Title>,
    /// Entries carrying a title field.
    pub read: usize,
    /// Entries without a usable title.
    pub skipped_entries: usize,
    /// Titles empty after normalization or failing the validity predicate.
    pub invalid: usize,
    pub duplicates: usize,
    pub warnings: Vec<BibWarning>,
}

impl IngestReport {
    pub fn kept(&self) -> usize {
        self.titles.len()
    }

    pub fn dropped(&self) -> usize {
        self.invalid + self.duplicates
    }
}

/// parse → normalize → filter.
pub fn ingest_bibtex(input: &[u8]) -> Result<IngestReport, IngestError> {
    let parsed = parse_bibtex(input)?;
    let read = parsed.records.len();
    let mut invalid = 0;
    let titles: Vec<Title> = parsed
        .records
        .iter()
        .filter_map(|r| match normalize_title(r) {
            Ok(t) => Some(t),
            Err(_) => {
                invalid += 1;
                None
            }
        })
        .collect();
    let filtered = dedup_and_filter(titles);
    Ok(IngestReport {
        titles: filtered.titles,
        read,
        skipped_entries: parsed.skipped,
        invalid: invalid + filtered.invalid,
        duplicates: filtered.duplicates,
        warnings: parsed.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(title: &str) -> RawRecord {
        RawRecord {
            entry_key: "k".into(),
            title_raw: title.into(),
            year: None,
        }
    }

    #[test]
    fn parses_single_entry() {
        let src = b"@inproceedings{x, title = {Adding Pronunciation Information to Wordnets}, year = {2010}}";
        let p = parse_bibtex(src).unwrap();
        assert_eq!(
            p.records,
            vec![RawRecord {
                entry_key: "x".into(),
                title_raw: "Adding Pronunciation Information to Wordnets".into(),
                year: Some(2010),
            }]
        );
        assert_eq!(p.skipped, 0);
    }

    #[test]
    fn empty_stream() {
        assert_eq!(parse_bibtex(b"").unwrap(), BibtexParse::default());
    }

    #[test]
    fn entry_without_title_is_skipped() {
        let p = parse_bibtex(b"@misc{y, author = {Someone}, year = 1999}").unwrap();
        assert!(p.records.is_empty());
        assert_eq!(p.skipped, 1);
    }

    #[test]
    fn value_forms() {
        let src = br#"
            @string{acl = "ACL"}
            @comment{ ignored {nested} }
            @article(a1,
                title = "Quoted {T}itle",
                year = 1987,
            )
            @book{b2, title = {Nested {Braces} Here} # " and More", year = "2003"}
            @misc{c3, title = acl}
            junk text between entries
        "#;
        let p = parse_bibtex(src).unwrap();
        let titles: Vec<_> = p.records.iter().map(|r| r.title_raw.as_str()).collect();
        assert_eq!(titles, ["Quoted {T}itle", "Nested {Braces} Here and More"]);
        assert_eq!(p.records[0].year, Some(1987));
        assert_eq!(p.records[1].year, Some(2003));
        assert_eq!(p.skipped, 1);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn unterminated_entry_is_fatal() {
        let err = parse_bibtex(b"@misc{ok, title={A}}\n@article{x, title = {Broken}").unwrap_err();
        assert_eq!(
            err,
            IngestError::Malformed {
                offset: 21,
                message: "unterminated `@article` entry".into()
            }
        );
    }

    #[test]
    fn bad_field_syntax_is_a_warning() {
        let p = parse_bibtex(b"@misc{x, title {A}}\n@misc{y, title={B}}").unwrap();
        assert_eq!(p.records.len(), 1);
        assert_eq!(p.skipped, 1);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn normalizes_markup() {
        let t = normalize_title(&raw("{SNOPAR}: A Grammar Testing System")).unwrap();
        assert_eq!(t.text, "SNOPAR: A Grammar Testing System");
        assert_eq!(normalize_title(&raw("   X  ")).unwrap().text, "X");
        assert_eq!(
            normalize_title(&raw("{}")),
            Err(IngestError::InvalidTitle { key: "k".into() })
        );
        assert_eq!(
            normalize_text(r#"Sch{\"u}tze and G\"odel"#),
            "Schütze and Gödel"
        );
        assert_eq!(
            normalize_text(r"Fran\c{c}ais, \'{\i}ndice, \v Cech"),
            "Français, índice, Čech"
        );
        assert_eq!(normalize_text(r"Stra\ss e \& \emph{Co}"), "Straße & Co");
        assert_eq!(
            normalize_text("Grapheme\u{2013}to\u{2014}Phoneme -- Test"),
            "Grapheme-to-Phoneme - Test"
        );
        assert_eq!(normalize_text("A~B\n\tC"), "A B C");
    }

    #[test]
    fn filter_examples() {
        let titles = ["A", "a", "B"].map(Title::new).to_vec();
        // single letters fail the length check, so dedup is tested on words
        let out = dedup_and_filter(titles);
        assert!(out.titles.is_empty());
        assert_eq!(out.invalid, 3);

        let titles = ["Parsing", "parsing", "Tagging"].map(Title::new).to_vec();
        let out = dedup_and_filter(titles);
        let texts: Vec<_> = out.titles.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["Parsing", "Tagging"]);
        assert_eq!(out.duplicates, 1);

        let out = dedup_and_filter(["???", "Parsing"].map(Title::new).to_vec());
        let texts: Vec<_> = out.titles.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["Parsing"]);
        assert_eq!(out.invalid, 1);
    }

    #[test]
    fn validity_predicate() {
        assert!(!is_valid_title(""));
        assert!(!is_valid_title("X"));
        assert!(!is_valid_title("1999"));
        assert!(!is_valid_title("?!-"));
        assert!(is_valid_title("Go"));
        assert!(is_valid_title("3D"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn filter_is_idempotent(texts in proptest::collection::vec("[A-Ca-c?1 ]{0,4}", 0..20)) {
                let titles: Vec<Title> = texts.iter().map(Title::new).collect();
                let once = dedup_and_filter(titles.clone());
                let twice = dedup_and_filter(once.titles.clone());
                prop_assert_eq!(&once.titles, &twice.titles);
                prop_assert!(once.titles.len() <= titles.len());
                for t in &once.titles {
                    prop_assert!(titles.contains(t));
                }
            }

            #[test]
            fn normalization_is_clean(raw_title in r"[A-Za-z{}\\'~ \t-]{1,30}") {
                let text = normalize_text(&raw_title);
                prop_assert_eq!(text.trim(), text.as_str());
                prop_assert!(!text.contains("  "));
                let braced = text.contains('{') || text.contains('}');
                prop_assert!(!braced);
                prop_assert_eq!(normalize_text(&raw_title), text);
            }
        }
    }
}
