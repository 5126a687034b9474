//! Command-line front end: annotate a corpus, evaluate predictions against
//! gold annotations, debug a single entity match, or print corpus statistics.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use person_tagger::evaluation::{
    compare_against_docs, shared_common_part_stats, surface_form_counts, title_breakdown, MatchMode,
};
use person_tagger::matcher::find_best_match_explained;
use person_tagger::pipeline::{annotate_corpus, parse_stopwords, render_inline, PipelineConfig};
use person_tagger::{
    standoff, DiminutiveLexicon, Document, GenderLexicon, MatchConfig, PrefixKind, ProtagonistList,
    RecognizerKind, TitleLexicon,
};
use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "person-tagger", version, about = "Link person mentions in text to full-name tags")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate a corpus directory and write a standoff JSON file
    Annotate(AnnotateArgs),
    /// Score a prediction file against a gold file
    Evaluate(EvaluateArgs),
    /// Disambiguate a single entity string (debugging aid)
    Match(MatchArgs),
    /// Corpus and tag-list statistics
    Stats(StatsArgs),
}

#[derive(Args)]
struct LexiconArgs {
    /// Diminutive CSV (canonical,dim1,dim2,...); bundled starter list by default
    #[arg(long)]
    diminutives: Option<PathBuf>,
    /// Gender TSV (name<TAB>female|male|unknown); bundled list by default
    #[arg(long)]
    genders: Option<PathBuf>,
    /// Title TSV (title<TAB>female|male); Mr./Mrs./Ms./Miss by default
    #[arg(long)]
    titles: Option<PathBuf>,
}

impl LexiconArgs {
    fn build(&self, threshold: u8, no_rules: bool) -> Result<MatchConfig> {
        if threshold > 100 {
            bail!("--threshold must be in 0..=100, got {threshold}");
        }
        let mut cfg = MatchConfig::new(threshold);
        cfg.rules_enabled = !no_rules;
        cfg.diminutives = match &self.diminutives {
            Some(path) => DiminutiveLexicon::load(open(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
            None => person_tagger::bundled_diminutives(),
        };
        cfg.genders = match &self.genders {
            Some(path) => GenderLexicon::load(open(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
            None => person_tagger::bundled_genders(),
        };
        cfg.titles = match &self.titles {
            Some(path) => TitleLexicon::load(open(path)?)
                .with_context(|| format!("parsing {}", path.display()))?,
            None => TitleLexicon::standard(),
        };
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NerChoice {
    Heuristic,
    Gazetteer,
    Import,
}

#[derive(Args)]
struct AnnotateArgs {
    /// Directory of .txt documents; the file stem is the doc id
    #[arg(long)]
    corpus: PathBuf,
    /// Protagonist list, one full-name tag per line, order significant
    #[arg(long)]
    protagonists: PathBuf,
    /// Output standoff JSON file
    #[arg(long)]
    out: PathBuf,
    /// Also write a .annotated.txt inline rendering next to each document
    #[arg(long)]
    inline: bool,
    /// Lower bound for partial similarity (0-100)
    #[arg(long, default_value_t = 75)]
    threshold: u8,
    /// Disable the title/"the"/diminutive rules (pure string matching)
    #[arg(long)]
    no_rules: bool,
    /// Keep "person"-sentinel annotations for unmatched mentions
    #[arg(long)]
    emit_unmatched: bool,
    #[arg(long, value_enum, default_value_t = NerChoice::Gazetteer)]
    ner: NerChoice,
    /// Standoff JSON with externally produced person spans (--ner import)
    #[arg(long)]
    import: Option<PathBuf>,
    /// Stopword list, one word per line (heuristic recognizer)
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[command(flatten)]
    lexicons: LexiconArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Span,
    SpanTag,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Gold standoff JSON
    #[arg(long)]
    gold: PathBuf,
    /// Predicted standoff JSON
    #[arg(long)]
    pred: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeChoice::SpanTag)]
    mode: ModeChoice,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    /// Entity string to disambiguate
    #[arg(long)]
    entity: String,
    #[arg(long)]
    protagonists: PathBuf,
    /// Preceding token: a personal title or "the"
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long, default_value_t = 75)]
    threshold: u8,
    #[arg(long)]
    no_rules: bool,
    /// Also print which branch of the matching procedure decided
    #[arg(long)]
    explain: bool,
    #[command(flatten)]
    lexicons: LexiconArgs,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Surface-form counts for one tag in a standoff file
    Surfaces {
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        tag: String,
    },
    /// Title breakdown for annotations ending in a surname
    Titles {
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        surname: String,
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        lexicons: LexiconArgs,
    },
    /// Tags sharing a common (non-title) name part
    SharedParts {
        #[arg(long)]
        protagonists: PathBuf,
    },
}

#[derive(Args)]
struct StatsArgs {
    #[command(subcommand)]
    command: StatsCommand,
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn load_corpus(dir: &Path) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let entries = fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))?;
    for entry in entries {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .context("non-UTF-8 file name")?
            .to_string();
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        docs.push(Document::new(id, text));
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

fn load_protagonists(path: &Path, titles: &TitleLexicon) -> Result<ProtagonistList> {
    ProtagonistList::load(open(path)?, titles).with_context(|| format!("parsing {}", path.display()))
}

fn run_annotate(args: AnnotateArgs) -> Result<()> {
    let match_config = args.lexicons.build(args.threshold, args.no_rules)?;
    let protagonists = load_protagonists(&args.protagonists, &match_config.titles)?;
    let recognizer = match args.ner {
        NerChoice::Heuristic => RecognizerKind::Heuristic,
        NerChoice::Gazetteer => RecognizerKind::Gazetteer,
        NerChoice::Import => {
            let path = args.import.clone().context("--ner import requires --import FILE")?;
            RecognizerKind::Import(path)
        }
    };
    let mut cfg = PipelineConfig::new(recognizer, match_config);
    cfg.emit_unmatched = args.emit_unmatched;
    if let Some(path) = &args.stopwords {
        let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.stopwords = parse_stopwords(&raw);
    }
    let docs = load_corpus(&args.corpus)?;
    let annotations = annotate_corpus(&docs, &protagonists, &cfg)?;
    standoff::write_file(&args.out, &annotations)?;
    if args.inline {
        for doc in &docs {
            let doc_annotations: Vec<_> = annotations
                .iter()
                .filter(|a| a.doc_id == doc.id)
                .cloned()
                .collect();
            let rendered = render_inline(doc, &doc_annotations)?;
            let path = args.corpus.join(format!("{}.annotated.txt", doc.id));
            fs::write(&path, rendered).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    eprintln!("wrote {} annotations to {}", annotations.len(), args.out.display());
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let gold = standoff::read_file(&args.gold)?;
    let pred = standoff::read_file(&args.pred)?;
    let mode = match args.mode {
        ModeChoice::Span => MatchMode::SpanOnly,
        ModeChoice::SpanTag => MatchMode::SpanAndTag,
    };
    let docs: HashSet<String> = gold.iter().chain(&pred).map(|a| a.doc_id.clone()).collect();
    let report = compare_against_docs(&gold, &pred, mode, &docs)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{json}"),
    }
    eprint!("{}", report.to_table());
    Ok(())
}

fn run_match(args: MatchArgs) -> Result<()> {
    let cfg = args.lexicons.build(args.threshold, args.no_rules)?;
    let protagonists = load_protagonists(&args.protagonists, &cfg.titles)?;
    let prefix = match args.prefix.as_deref() {
        None | Some("") => PrefixKind::None,
        Some(p) if person_tagger::normalize(p) == "the" => PrefixKind::TheArticle,
        Some(p) if cfg.titles.is_title(p) => PrefixKind::Title(p.to_string()),
        Some(p) => bail!("--prefix {p:?} is neither \"the\" nor a known title"),
    };
    let (outcome, branch) = find_best_match_explained(&args.entity, &prefix, &protagonists, &cfg);
    println!("{}", outcome.tag());
    if args.explain {
        eprintln!("branch: {}", branch.describe());
    }
    Ok(())
}

fn run_stats(args: StatsArgs) -> Result<()> {
    match args.command {
        StatsCommand::Surfaces { annotations, tag } => {
            let anns = standoff::read_file(&annotations)?;
            for (surface, count) in surface_form_counts(&anns, &tag) {
                println!("{surface}\t{count}");
            }
        }
        StatsCommand::Titles { annotations, surname, corpus, lexicons } => {
            let cfg = lexicons.build(75, false)?;
            let anns = standoff::read_file(&annotations)?;
            let docs = load_corpus(&corpus)?;
            for (bucket, count) in title_breakdown(&anns, &surname, &cfg.titles, &docs)? {
                println!("{bucket}\t{count}");
            }
        }
        StatsCommand::SharedParts { protagonists } => {
            let titles = TitleLexicon::standard();
            let list = load_protagonists(&protagonists, &titles)?;
            let (count, percent) = shared_common_part_stats(&list);
            println!("{}\t{}\t{:.0}%", list.len(), count, percent * 100.0);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Annotate(args) => run_annotate(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Match(args) => run_match(args),
        Command::Stats(args) => run_stats(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            // I/O failures exit 2, everything else (validation, parsing) 1.
            let io = err.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some());
            ExitCode::from(if io { 2 } else { 1 })
        }
    }
}
