//! Gazetteers and suffix pattern families behind every concept predicate.
//!
//! A lexicon is a directory of plain-text lists, one entry per line, with
//! `#` comments. Suffix entries are regular-expression fragments that must
//! match the final token(s) of a phrase, case-insensitively. A copy of the
//! default lists is compiled into the crate (see [`Lexicon::bundled`]).

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use once_cell::sync::Lazy;
use regex::Regex;
use thiserror::Error;

/// The files making up a lexicon directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexiconFile {
    Languages,
    ToolSuffixes,
    ResourceSuffixes,
    MethodSuffixes,
    ResearchProblemSuffixes,
    SpecialMarkers,
    NonContent,
}

impl LexiconFile {
    pub const ALL: [LexiconFile; 7] = [
        LexiconFile::Languages,
        LexiconFile::ToolSuffixes,
        LexiconFile::ResourceSuffixes,
        LexiconFile::MethodSuffixes,
        LexiconFile::ResearchProblemSuffixes,
        LexiconFile::SpecialMarkers,
        LexiconFile::NonContent,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            LexiconFile::Languages => "languages.txt",
            LexiconFile::ToolSuffixes => "tool_suffixes.txt",
            LexiconFile::ResourceSuffixes => "resource_suffixes.txt",
            LexiconFile::MethodSuffixes => "method_suffixes.txt",
            LexiconFile::ResearchProblemSuffixes => "research_problem_suffixes.txt",
            LexiconFile::SpecialMarkers => "special_markers.txt",
            LexiconFile::NonContent => "non_content.txt",
        }
    }

    fn bundled_source(self) -> &'static str {
        match self {
            LexiconFile::Languages => include_str!("../lexicon/languages.txt"),
            LexiconFile::ToolSuffixes => include_str!("../lexicon/tool_suffixes.txt"),
            LexiconFile::ResourceSuffixes => include_str!("../lexicon/resource_suffixes.txt"),
            LexiconFile::MethodSuffixes => include_str!("../lexicon/method_suffixes.txt"),
            LexiconFile::ResearchProblemSuffixes => {
                include_str!("../lexicon/research_problem_suffixes.txt")
            }
            LexiconFile::SpecialMarkers => include_str!("../lexicon/special_markers.txt"),
            LexiconFile::NonContent => include_str!("../lexicon/non_content.txt"),
        }
    }
}

impl fmt::Display for LexiconFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon file {path} has no entries")]
    Empty { path: PathBuf },
    #[error("lexicon file {path}, line {line}: invalid pattern `{pattern}`: {source}")]
    Pattern {
        path: PathBuf,
        line: usize,
        pattern: String,
        #[source]
        source: Box<regex::Error>,
    },
}

impl LexiconError {
    /// The file that failed to load.
    pub fn path(&self) -> &Path {
        match self {
            LexiconError::Io { path, .. }
            | LexiconError::Empty { path }
            | LexiconError::Pattern { path, .. } => path,
        }
    }
}

/// `ending` was asked about an empty phrase.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("phrase is empty")]
pub struct EmptyPhrase;

/// One entry of a list file together with its 1-based line number.
#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    text: String,
}

/// Parse the one-entry-per-line list format shared by lexicon and gold files.
pub fn parse_list(source: &str) -> Vec<String> {
    list_entries(source).into_iter().map(|e| e.text).collect()
}

fn list_entries(source: &str) -> Vec<Entry> {
    source
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                None
            } else {
                Some(Entry {
                    line: i + 1,
                    text: text.to_string(),
                })
            }
        })
        .collect()
}

// Characters that may precede a matched final token.
const TOKEN_BOUNDARY: &str = r"(?:^|[\s\-/])";

/// An ordered family of suffix patterns compiled into a single end-anchored
/// alternation.
#[derive(Debug, Clone)]
pub struct SuffixSet {
    patterns: Vec<String>,
    regex: Regex,
}

impl SuffixSet {
    pub fn new<I, S>(patterns: I) -> Result<Self, regex::Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let patterns: Vec<String> = patterns.into_iter().map(Into::into).collect();
        for p in &patterns {
            Regex::new(p)?;
        }
        let alternation = patterns
            .iter()
            .map(|p| format!("(?:{p})"))
            .collect::<Vec<_>>()
            .join("|");
        let regex = Regex::new(&format!("(?i){TOKEN_BOUNDARY}(?:{alternation})$"))?;
        Ok(SuffixSet { patterns, regex })
    }

    /// A suffix set over literal words rather than pattern fragments.
    pub fn literal<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let escaped: Vec<String> = words
            .into_iter()
            .map(|w| regex::escape(w.as_ref()))
            .collect();
        SuffixSet::new(escaped).expect("escaped literals always compile")
    }

    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// True when the phrase ends with a token matched by any pattern.
    pub fn matches_end(&self, phrase: &str) -> bool {
        !self.patterns.is_empty() && self.regex.is_match(phrase.trim_end())
    }
}

/// Phrase ending check: does `phrase` end, case-insensitively, with a token
/// matching one of `patterns`?
pub fn ending(phrase: &str, patterns: &SuffixSet) -> Result<bool, EmptyPhrase> {
    if phrase.trim().is_empty() {
        return Err(EmptyPhrase);
    }
    Ok(patterns.matches_end(phrase))
}

#[derive(Debug, Clone)]
struct PhraseList {
    patterns: Vec<String>,
    whole: Regex,
    prefixes: Vec<Regex>,
}

impl PhraseList {
    fn new(patterns: Vec<String>) -> Result<Self, regex::Error> {
        let alternation = patterns
            .iter()
            .map(|p| format!("(?:{p})"))
            .collect::<Vec<_>>()
            .join("|");
        let whole = Regex::new(&format!("(?i)^(?:{alternation})$"))?;
        let prefixes = patterns
            .iter()
            .map(|p| Regex::new(&format!(r"(?i)^(?:{p})\b")))
            .collect::<Result<_, _>>()?;
        Ok(PhraseList {
            patterns,
            whole,
            prefixes,
        })
    }

    fn longest_prefix(&self, text: &str) -> Option<usize> {
        self.prefixes
            .iter()
            .filter_map(|re| re.find(text).map(|m| m.end()))
            .max()
    }
}

static BUNDLED: Lazy<Lexicon> = Lazy::new(|| {
    Lexicon::from_sources(|file| {
        Ok((
            PathBuf::from(file.file_name()),
            file.bundled_source().to_string(),
        ))
    })
    .expect("bundled lexicon is valid")
});

/// All gazetteers and suffix families. Immutable once loaded.
#[derive(Debug, Clone)]
pub struct Lexicon {
    language_names: BTreeSet<String>,
    languages: SuffixSet,
    tool_suffixes: SuffixSet,
    resource_suffixes: SuffixSet,
    method_suffixes: SuffixSet,
    research_problem_suffixes: SuffixSet,
    special_case_markers: BTreeSet<String>,
    non_content: PhraseList,
}

impl Lexicon {
    /// The default lexicon compiled into the crate.
    pub fn bundled() -> Self {
        BUNDLED.clone()
    }

    /// Load every list file from a lexicon directory.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let dir = dir.as_ref();
        Self::from_sources(|file| {
            let path = dir.join(file.file_name());
            fs::read_to_string(&path)
                .map(|text| (path.clone(), text))
                .map_err(|source| LexiconError::Io { path, source })
        })
    }

    fn from_sources<F>(mut read: F) -> Result<Self, LexiconError>
    where
        F: FnMut(LexiconFile) -> Result<(PathBuf, String), LexiconError>,
    {
        let mut load = |file: LexiconFile| -> Result<(PathBuf, Vec<Entry>), LexiconError> {
            let (path, text) = read(file)?;
            let entries = list_entries(&text);
            if entries.is_empty() {
                return Err(LexiconError::Empty { path });
            }
            Ok((path, entries))
        };

        let suffixes = |(path, entries): (PathBuf, Vec<Entry>)| -> Result<SuffixSet, LexiconError> {
            check_patterns(&path, &entries)?;
            SuffixSet::new(entries.into_iter().map(|e| e.text)).map_err(|source| {
                LexiconError::Pattern {
                    path,
                    line: 0,
                    pattern: String::new(),
                    source: Box::new(source),
                }
            })
        };

        let (_, languages) = load(LexiconFile::Languages)?;
        let language_names: BTreeSet<String> = languages.into_iter().map(|e| e.text).collect();
        let tool_suffixes = suffixes(load(LexiconFile::ToolSuffixes)?)?;
        let resource_suffixes = suffixes(load(LexiconFile::ResourceSuffixes)?)?;
        let method_suffixes = suffixes(load(LexiconFile::MethodSuffixes)?)?;
        let research_problem_suffixes = suffixes(load(LexiconFile::ResearchProblemSuffixes)?)?;
        let (_, markers) = load(LexiconFile::SpecialMarkers)?;
        let special_case_markers = markers.into_iter().map(|e| e.text.to_lowercase()).collect();
        let (nc_path, nc_entries) = load(LexiconFile::NonContent)?;
        check_patterns(&nc_path, &nc_entries)?;
        let non_content = PhraseList::new(nc_entries.into_iter().map(|e| e.text).collect())
            .map_err(|source| LexiconError::Pattern {
                path: nc_path,
                line: 0,
                pattern: String::new(),
                source: Box::new(source),
            })?;

        Ok(Lexicon {
            languages: SuffixSet::literal(&language_names),
            language_names,
            tool_suffixes,
            resource_suffixes,
            method_suffixes,
            research_problem_suffixes,
            special_case_markers,
            non_content,
        })
    }

    pub fn language_names(&self) -> &BTreeSet<String> {
        &self.language_names
    }

    pub fn tool_suffixes(&self) -> &SuffixSet {
        &self.tool_suffixes
    }

    pub fn resource_suffixes(&self) -> &SuffixSet {
        &self.resource_suffixes
    }

    pub fn method_suffixes(&self) -> &SuffixSet {
        &self.method_suffixes
    }

    pub fn research_problem_suffixes(&self) -> &SuffixSet {
        &self.research_problem_suffixes
    }

    pub fn special_case_markers(&self) -> &BTreeSet<String> {
        &self.special_case_markers
    }

    pub fn non_content_phrases(&self) -> &[String] {
        &self.non_content.patterns
    }

    /// A language name, optionally preceded by modifiers ("Ancient Accadian").
    pub fn is_language(&self, phrase: &str) -> bool {
        self.languages.matches_end(phrase)
    }

    pub fn is_tool(&self, phrase: &str) -> bool {
        self.tool_suffixes.matches_end(phrase)
    }

    pub fn is_resource(&self, phrase: &str) -> bool {
        self.resource_suffixes.matches_end(phrase)
    }

    pub fn is_method(&self, phrase: &str) -> bool {
        self.method_suffixes.matches_end(phrase)
    }

    pub fn is_research_problem(&self, phrase: &str) -> bool {
        self.research_problem_suffixes.matches_end(phrase)
    }

    /// Does the title open with a one-word solution name followed by a colon?
    ///
    /// The name qualifies when it is a listed special marker, or when it
    /// looks like a system name: an uppercase letter past the first
    /// character, a digit, or an internal hyphen. Casing matters here.
    pub fn has_special_case_word(&self, title: &str) -> bool {
        let Some(colon) = title.find(':') else {
            return false;
        };
        let name = title[..colon].trim();
        if name.is_empty()
            || name.chars().any(char::is_whitespace)
            || !name.chars().any(char::is_alphabetic)
        {
            return false;
        }
        if self.special_case_markers.contains(&name.to_lowercase()) {
            return true;
        }
        let inner_upper = name.chars().skip(1).any(char::is_uppercase);
        let all_caps = name
            .chars()
            .filter(|c| c.is_alphabetic())
            .all(char::is_uppercase);
        let digit = name.chars().any(|c| c.is_ascii_digit());
        let inner_hyphen = name.trim_matches('-').contains('-');
        inner_upper || all_caps || digit || inner_hyphen
    }

    /// Whole-phrase match against the non-content list.
    pub fn non_content_phrase(&self, phrase: &str) -> bool {
        self.non_content.whole.is_match(phrase.trim())
    }

    /// Byte length of the longest non-content phrase opening `text`, if any.
    pub fn non_content_prefix(&self, text: &str) -> Option<usize> {
        self.non_content.longest_prefix(text)
    }
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::bundled()
    }
}

fn check_patterns(path: &Path, entries: &[Entry]) -> Result<(), LexiconError> {
    for entry in entries {
        if let Err(source) = Regex::new(&entry.text) {
            return Err(LexiconError::Pattern {
                path: path.to_path_buf(),
                line: entry.line,
                pattern: entry.text.clone(),
                source: Box::new(source),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::bundled()
    }

    #[test]
    fn bundled_lists_are_populated() {
        let lex = lex();
        for name in [
            "Tigrigna",
            "Sundanese",
            "Balinese",
            "Dutch",
            "English",
            "Chinese",
            "Japanese",
            "German",
            "Arabic",
        ] {
            assert!(lex.language_names().contains(name), "{name}");
        }
        assert!(!lex.tool_suffixes().is_empty());
        assert!(!lex.resource_suffixes().is_empty());
        assert!(!lex.method_suffixes().is_empty());
        assert!(!lex.research_problem_suffixes().is_empty());
        assert!(lex.tool_suffixes().patterns().iter().all(|p| !p.is_empty()));
    }

    #[test]
    fn ending_checks_final_token() {
        let lex = lex();
        assert_eq!(
            ending(
                "Parallel Hinglish Social Media Code-Mixed Corpus",
                lex.resource_suffixes()
            ),
            Ok(true)
        );
        assert_eq!(
            ending("A Grammar Testing Workbench", lex.tool_suffixes()),
            Ok(true)
        );
        assert_eq!(ending("", lex.tool_suffixes()), Err(EmptyPhrase));
        // suffix must be a whole token
        assert_eq!(ending("Context", lex.resource_suffixes()), Ok(false));
        assert_eq!(
            ending("Corpus Annotation", lex.resource_suffixes()),
            Ok(false)
        );
    }

    #[test]
    fn language_gazetteer() {
        let lex = lex();
        assert!(lex.is_language("Tigrigna"));
        assert!(lex.is_language("Ancient Accadian"));
        assert!(lex.is_language("dutch"));
        assert!(!lex.is_language("Sentiment Analysis"));
        assert!(!lex.is_language("Natural Language Dialogue"));
        assert!(!lex.is_language("Italian Machine Dictionary"));
    }

    #[test]
    fn concept_predicates() {
        let lex = lex();
        assert!(lex.is_resource("Financial Microblogs and News"));
        assert!(lex.is_method("A Semantic Methodology"));
        assert!(lex.is_tool("Wordnets"));
        assert!(lex.is_resource("WordNet"));
        assert!(!lex.is_tool("WordNet"));
        assert!(lex.is_research_problem("Word Sense Discrimination"));
        assert!(lex.is_research_problem("SemEval-2017 Task 5"));
        assert!(lex.is_research_problem("CoNLL-2003 Shared Task"));
    }

    #[test]
    fn special_case_word() {
        let lex = lex();
        assert!(lex.has_special_case_word("SNOPAR: A Grammar Testing System"));
        assert!(lex.has_special_case_word("CIRCSIM-Tutor: An Intelligent Tutoring System"));
        assert!(lex.has_special_case_word("WordNet: A Lexical Database"));
        assert!(lex.has_special_case_word("Moses: Open Source Toolkit"));
        assert!(!lex.has_special_case_word(
            "Working on the Italian Machine Dictionary: A Semantic Approach"
        ));
        assert!(!lex.has_special_case_word("No Colon Here"));
        assert!(!lex.has_special_case_word("Introduction: Something"));
        assert!(!lex.has_special_case_word("2017: A Year"));
    }

    #[test]
    fn non_content_phrases() {
        let lex = lex();
        assert!(lex.non_content_phrase("A Semantic Approach"));
        assert!(lex.non_content_phrase("Recent Developments and Results"));
        assert!(lex.non_content_phrase("overview"));
        assert!(!lex.non_content_phrase("Neural Machine Translation"));
        assert!(!lex.non_content_phrase("A Semantic Approach to Parsing"));
        assert_eq!(lex.non_content_prefix("An Overview of Parsing"), Some(11));
        assert_eq!(lex.non_content_prefix("Overviews of Parsing"), None);
    }

    #[test]
    fn parse_list_skips_comments_and_blanks() {
        let entries = parse_list("# header\n\n alpha \n#beta\ngamma\n");
        assert_eq!(entries, vec!["alpha", "gamma"]);
    }

    #[test]
    fn from_dir_reports_offending_file() {
        let dir = tempfile::tempdir().unwrap();
        for file in LexiconFile::ALL {
            fs::write(dir.path().join(file.file_name()), file.bundled_source()).unwrap();
        }
        assert!(Lexicon::from_dir(dir.path()).is_ok());

        fs::write(dir.path().join("method_suffixes.txt"), "ok\nbad(\n").unwrap();
        let err = Lexicon::from_dir(dir.path()).unwrap_err();
        assert!(err.path().ends_with("method_suffixes.txt"));
        assert!(matches!(err, LexiconError::Pattern { line: 2, .. }));

        fs::write(dir.path().join("method_suffixes.txt"), "# nothing\n").unwrap();
        let err = Lexicon::from_dir(dir.path()).unwrap_err();
        assert!(matches!(err, LexiconError::Empty { .. }));

        fs::remove_file(dir.path().join("languages.txt")).unwrap();
        let err = Lexicon::from_dir(dir.path()).unwrap_err();
        assert!(matches!(err, LexiconError::Io { .. }));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn predicates_ignore_case(s in "[A-Za-z][A-Za-z -]{0,30}") {
                let lex = Lexicon::bundled();
                let lower = s.to_lowercase();
                prop_assert_eq!(lex.is_language(&s), lex.is_language(&lower));
                prop_assert_eq!(lex.is_tool(&s), lex.is_tool(&lower));
                prop_assert_eq!(lex.is_resource(&s), lex.is_resource(&lower));
                prop_assert_eq!(lex.is_method(&s), lex.is_method(&lower));
                prop_assert_eq!(lex.is_research_problem(&s), lex.is_research_problem(&lower));
                prop_assert_eq!(lex.non_content_phrase(&s), lex.non_content_phrase(&lower));
            }

            #[test]
            fn ending_ignores_leading_context(
                prefix in "[A-Za-z]{1,10}",
                idx in 0usize..64,
            ) {
                let lex = Lexicon::bundled();
                let words = ["Corpus", "Treebanks", "Web Corpora", "Word Embeddings",
                    "Parsers", "Methodology", "Domain Adaptation", "Tweets"];
                let s = words[idx % words.len()];
                for set in [lex.tool_suffixes(), lex.resource_suffixes(), lex.method_suffixes()] {
                    if ending(s, set).unwrap() {
                        let phrase = format!("{prefix} {s}");
                        prop_assert!(ending(&phrase, set).unwrap());
                    }
                }
            }
        }
    }
}
