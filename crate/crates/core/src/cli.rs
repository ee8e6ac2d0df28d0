use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use title_miner::analytics::{self, GoldList};
use title_miner::ingest::{ingest_bibtex, IngestReport, Title};
use title_miner::lexicon::{Lexicon, LexiconError};
use title_miner::pipeline::{self, concept_totals, ExtractionRecord, RecordError};
use title_miner::typer::TypingOptions;

#[derive(Debug, Parser)]
#[command(
    name = "title-miner",
    version,
    about = "Extract typed scientific concepts from paper titles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a BibTeX file and write a deduplicated title stream.
    Ingest {
        /// BibTeX file, or `-` for standard input.
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Type the concepts in a title stream.
    Parse {
        /// Title stream (JSON lines or one title per line); standard input if omitted.
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        parse: ParseArgs,
    },
    /// Frequency, trend and coverage tables over extraction records.
    Stats {
        /// Records file; standard input if omitted.
        input: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Score extracted terms against curated lists.
    Eval {
        /// Records file; standard input if omitted.
        input: Option<PathBuf>,
        /// Directory holding `<concept>.txt` lists.
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Precision)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Ingest, parse and report in one run.
    Pipeline {
        /// BibTeX file, or `-` for standard input.
        input: PathBuf,
        /// Also write the extraction records here.
        #[arg(long)]
        records: Option<PathBuf>,
        #[command(flatten)]
        parse: ParseArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// Lexicon directory; the bundled lexicon if unset.
    #[arg(long, env = "TITLE_MINER_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Worker threads; output order does not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Type phrases no predicate claims as research problems.
    #[arg(long)]
    fallthrough_research_problem: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Rows per ranking.
    #[arg(long)]
    top: Option<usize>,
    /// Split rankings into 20th and 21st century.
    #[arg(long)]
    century: bool,
    /// Titles per template rule.
    #[arg(long)]
    coverage: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Ndjson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Precision,
    Recall,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Input { path: String, message: String },
    #[error("{source}")]
    Lexicon { source: LexiconError },
    #[error("malformed records in {path}: {source}")]
    Records { path: String, source: RecordError },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Lexicon { .. } => 3,
            CliError::Records { .. } => 4,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

fn display(path: Option<&Path>) -> String {
    match path {
        Some(p) if p != Path::new("-") => p.display().to_string(),
        _ => "<stdin>".to_string(),
    }
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    let fail = |e: io::Error| CliError::Input {
        path: display(path),
        message: e.to_string(),
    };
    match path {
        Some(p) if p != Path::new("-") => fs::read(p).map_err(fail),
        _ => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).map_err(fail)?;
            Ok(buf)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(fs::File::create(p)?)),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_lexicon(dir: Option<&Path>) -> Result<Lexicon, CliError> {
    match dir {
        Some(d) => Lexicon::from_dir(d).map_err(|source| CliError::Lexicon { source }),
        None => Ok(Lexicon::bundled()),
    }
}

fn ingest(path: &Path) -> Result<IngestReport, CliError> {
    let bytes = read_input(Some(path))?;
    let report = ingest_bibtex(&bytes).map_err(|e| CliError::Input {
        path: display(Some(path)),
        message: e.to_string(),
    })?;
    for w in &report.warnings {
        eprintln!(
            "warning: {}: byte {}: {}",
            display(Some(path)),
            w.offset,
            w.message
        );
    }
    eprintln!(
        "read={} kept={} dropped={} (duplicates={} invalid={} skipped={})",
        report.read,
        report.kept(),
        report.dropped(),
        report.duplicates,
        report.invalid,
        report.skipped_entries
    );
    Ok(report)
}

/// Titles from JSON lines or plain lines. Lines that look like JSON but do
/// not parse are reported and skipped.
fn read_titles(bytes: &[u8], source: &str) -> Result<Vec<Title>, CliError> {
    let mut titles = Vec::new();
    for (i, line) in BufReader::new(bytes).lines().enumerate() {
        let line = line.map_err(|e| CliError::Input {
            path: source.to_string(),
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('{') {
            match serde_json::from_str::<Title>(trimmed) {
                Ok(t) => titles.push(t),
                Err(e) => eprintln!("warning: {source}:{}: skipped: {e}", i + 1),
            }
        } else {
            titles.push(Title::new(trimmed));
        }
    }
    Ok(titles)
}

fn parse_titles(titles: &[Title], args: &ParseArgs) -> Result<Vec<ExtractionRecord>, CliError> {
    let lexicon = load_lexicon(args.lexicon.as_deref())?;
    let parser = pipeline::Parser::new(&lexicon).with_options(TypingOptions {
        fallthrough_research_problem: args.fallthrough_research_problem,
    });
    let records = parser
        .parse_corpus_with_jobs(titles, args.jobs)
        .map_err(|e| CliError::Other(e.to_string()))?;
    let totals = concept_totals(&records);
    let summary: Vec<String> = totals.iter().map(|(c, n)| format!("{c}={n}")).collect();
    eprintln!("titles={} {}", records.len(), summary.join(" "));
    Ok(records)
}

fn report(records: &[ExtractionRecord], args: &ReportArgs) -> String {
    let freqs = analytics::concept_frequencies(records);
    let mut out = match args.format {
        Format::Text => analytics::render_frequencies_text(&freqs, args.top),
        Format::Ndjson => analytics::render_frequencies_ndjson(&freqs, args.top),
    };
    let gap = if args.format == Format::Text {
        "\n"
    } else {
        ""
    };
    if args.century {
        out.push_str(gap);
        let split = analytics::century_split(records);
        out.push_str(&match args.format {
            Format::Text => analytics::render_century_text(&split, args.top),
            Format::Ndjson => analytics::render_century_ndjson(&split, args.top),
        });
    }
    if args.coverage {
        out.push_str(gap);
        let cov = analytics::coverage(records);
        out.push_str(&match args.format {
            Format::Text => analytics::render_coverage_text(&cov),
            Format::Ndjson => analytics::render_coverage_ndjson(&cov),
        });
    }
    out
}

fn read_records(path: Option<&Path>) -> Result<Vec<ExtractionRecord>, CliError> {
    let bytes = read_input(path)?;
    pipeline::read_ndjson(bytes.as_slice()).map_err(|source| CliError::Records {
        path: display(path),
        source,
    })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest { input, output } => {
            let report = ingest(&input)?;
            let mut out = open_output(output.as_deref())?;
            for t in &report.titles {
                serde_json::to_writer(&mut out, t).map_err(io::Error::from)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        Command::Parse {
            input,
            output,
            parse,
        } => {
            // the lexicon must load before any input is touched
            load_lexicon(parse.lexicon.as_deref())?;
            let bytes = read_input(input.as_deref())?;
            let titles = read_titles(&bytes, &display(input.as_deref()))?;
            let records = parse_titles(&titles, &parse)?;
            let mut out = open_output(output.as_deref())?;
            pipeline::write_ndjson(&mut out, &records)?;
            out.flush()?;
        }
        Command::Stats {
            input,
            report: args,
        } => {
            let records = read_records(input.as_deref())?;
            let mut out = open_output(None)?;
            out.write_all(report(&records, &args).as_bytes())?;
            out.flush()?;
        }
        Command::Eval {
            input,
            gold,
            mode,
            format,
        } => {
            let records = read_records(input.as_deref())?;
            let lists = GoldList::load_dir(&gold).map_err(|e| CliError::Input {
                path: gold.display().to_string(),
                message: e.to_string(),
            })?;
            let freqs = analytics::concept_frequencies(&records);
            let (name, values) = match mode {
                Mode::Precision => ("precision", analytics::precision_eval(&freqs, &lists)),
                Mode::Recall => ("recall", analytics::recall_by_concept(&freqs, &lists)),
            };
            for (c, _) in values.iter().filter(|(c, _)| !lists.contains_key(*c)) {
                eprintln!("note: no list for {c}");
            }
            let text = match format {
                Format::Text => analytics::render_metrics_text(name, &values),
                Format::Ndjson => analytics::render_metrics_ndjson(name, &values),
            };
            let mut out = open_output(None)?;
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Command::Pipeline {
            input,
            records: records_path,
            parse,
            report: args,
        } => {
            load_lexicon(parse.lexicon.as_deref())?;
            let ingested = ingest(&input)?;
            let records = parse_titles(&ingested.titles, &parse)?;
            if let Some(p) = records_path {
                let mut f = BufWriter::new(fs::File::create(p)?);
                pipeline::write_ndjson(&mut f, &records)?;
                f.flush()?;
            }
            let mut out = open_output(None)?;
            out.write_all(report(&records, &args).as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
