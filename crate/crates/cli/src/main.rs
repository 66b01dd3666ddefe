use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use subjparse::annotate::annotate;
use subjparse::candidates::CandidateStats;
use subjparse::corpus::{load_corpus, parse_corpus, parse_id_list, split_corpus, validate_corpus};
use subjparse::eval::{EvalReport, ReportRow};
use subjparse::pipeline::{build_cases, parse_sentence, run_pipeline_train};
use subjparse::resources::SYNTHETIC_CORPUS;
use subjparse::stats::{
    entropy_report, extract_prohibition_candidates, prohibition_lines, rank_frequency, spearman,
    weight_frequency_report, weight_points, weight_report_csv,
};
use subjparse::{evaluate, AnnotatedCorpus, Config, Error, Model, Resources, SavedModel, SplitSpec, TupleMode};

/// Locates subject boundaries with candidate generation and single-layer nets.
#[derive(Parser, Debug)]
#[command(name = "subjparse", version)]
struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set threshold=98`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a model on an annotated corpus and save it.
    Train {
        #[command(flatten)]
        corpus: CorpusArg,
        /// Output model file.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Parse raw sentences (one per argument, else one per stdin line) and show each stage.
    Parse {
        #[arg(long, short)]
        model: PathBuf,
        /// Print only the bracketed sentence.
        #[arg(long, short)]
        quiet: bool,
        text: Vec<String>,
    },
    /// Score one or more models on an annotated test corpus.
    Eval {
        #[arg(long, short, required = true)]
        model: Vec<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Divide a corpus into training and test files.
    Split {
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, conflicts_with_all = ["train_ids", "test_ids"])]
        test_fraction: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma separated sentence ids for the training side.
        #[arg(long, requires = "test_ids")]
        train_ids: Option<String>,
        /// Comma separated sentence ids for the test side.
        #[arg(long, requires = "train_ids")]
        test_ids: Option<String>,
        #[arg(long)]
        train_out: PathBuf,
        #[arg(long)]
        test_out: PathBuf,
    },
    /// Tuple rank-frequency tables, tag n-gram entropy and weight reports.
    Analyze {
        #[command(flatten)]
        corpus: CorpusArg,
        /// Trained model for the weight/frequency report.
        #[arg(long, short)]
        model: Option<PathBuf>,
        /// Count tuples over every generated string instead of gold strings only.
        #[arg(long)]
        all_strings: bool,
        /// Directory for the CSV and text reports; stdout when absent.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Pick target strings interactively for raw sentences.
    Annotate {
        /// Raw sentences, one per line.
        #[arg(long)]
        texts: PathBuf,
        /// Annotated corpus to extend; created if missing.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// List tuples a trained Hodyne model only ever saw in wrong strings.
    ExtractRules {
        #[arg(long, short)]
        model: PathBuf,
        /// Write rule lines here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CorpusArg {
    /// Annotated corpus file; the bundled synthetic corpus when absent.
    #[arg(long, short)]
    corpus: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Csv,
}

/// Training stopped below the threshold.
#[derive(Debug)]
struct NotConverged(String);

impl std::fmt::Display for NotConverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NotConverged {}

/// Bad command-line values.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

/// The error chain, skipping causes already spelled out by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = e.to_string();
    let mut last = msg.clone();
    for cause in e.chain().skip(1) {
        let c = cause.to_string();
        if !last.contains(&c) {
            msg = format!("{msg}: {c}");
        }
        last = c;
    }
    msg
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<NotConverged>().is_some() {
        3
    } else if e.downcast_ref::<Usage>().is_some() {
        1
    } else {
        2
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    for s in &cli.overrides {
        cfg.set(s).map_err(|e| Usage(e.to_string()))?;
    }
    Ok(cfg)
}

fn resources(cfg: &Config) -> Result<Resources> {
    cfg.resources().map_err(|e| match e {
        Error::InvalidParam(msg) => Usage(msg).into(),
        other => anyhow::Error::new(other),
    })
}

fn corpus_name(arg: &CorpusArg) -> String {
    arg.corpus
        .as_deref()
        .and_then(Path::file_stem)
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bundled".into())
}

/// Loads and validates a corpus, reporting rejected sentences on stderr.
fn read_corpus(arg: &CorpusArg, res: &Resources) -> Result<AnnotatedCorpus> {
    let corpus = match &arg.corpus {
        Some(p) => load_corpus(p, &res.tagset)?,
        None => parse_corpus(SYNTHETIC_CORPUS, &res.tagset)?,
    };
    let (kept, rejected) = validate_corpus(corpus, &res.lexicon, &res.limits, &res.tagset);
    for r in &rejected {
        eprintln!("rejected: {r}");
    }
    if kept.is_empty() {
        bail!("no usable sentences in {}", corpus_name(arg));
    }
    Ok(kept)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli)?;
    let res = resources(&cfg)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Train { corpus, out: path } => {
            let data = read_corpus(corpus, &res)?;
            let mut run = run_pipeline_train(&data, &res, &cfg.train)?;
            for f in &run.failures {
                eprintln!("coverage failure: {f}");
            }
            run.saved.meta.insert("train_set".into(), corpus_name(corpus));
            run.saved.save(path)?;
            writeln!(out, "{run}")?;
            writeln!(out, "model written to {}", path.display())?;
            if !run.report.converged() {
                return Err(NotConverged(format!(
                    "training stopped at {:.2}% below the {}% threshold",
                    run.report.train_pct, cfg.train.params.threshold_pct
                ))
                .into());
            }
        }
        Command::Parse { model, quiet, text } => {
            let saved = SavedModel::load(model)?;
            let lines: Vec<String> = if text.is_empty() {
                io::stdin().lock().lines().collect::<io::Result<_>>()?
            } else {
                text.clone()
            };
            let mut failed = 0;
            for line in lines.iter().filter(|l| !l.trim().is_empty()) {
                let trace = parse_sentence(&saved, &res, line)?;
                match (quiet, trace.bracketed()) {
                    (true, Some(b)) => writeln!(out, "{b}")?,
                    (true, None) => writeln!(out, "unparseable: {line}")?,
                    (false, _) => writeln!(out, "{trace}\n")?,
                }
                if trace.winner.is_none() {
                    failed += 1;
                }
            }
            if failed > 0 {
                bail!("{failed} sentence(s) unparseable");
            }
        }
        Command::Eval { model, corpus, format } => {
            let data = read_corpus(corpus, &res)?;
            let mut report = EvalReport::default();
            for path in model {
                let saved = SavedModel::load(path)?;
                let prepared = build_cases(&data, &res, &saved.index)?;
                for f in &prepared.failures {
                    eprintln!("coverage failure: {f}");
                }
                let metrics = evaluate(&saved.model, &prepared.cases)?;
                let mode = saved.index.mode();
                report.rows.push(ReportRow {
                    model: saved.model.kind().to_string(),
                    train_set: saved.meta.get("train_set").cloned().unwrap_or_default(),
                    test_set: corpus_name(corpus),
                    pairs: mode.uses_pairs(),
                    triples: mode.uses_triples(),
                    threshold: saved
                        .meta
                        .get("threshold")
                        .and_then(|t| t.parse().ok())
                        .unwrap_or(f64::NAN),
                    metrics,
                });
            }
            match format {
                Format::Table => write!(out, "{report}")?,
                Format::Csv => write!(out, "{}", report.to_csv())?,
            }
        }
        Command::Split {
            corpus,
            test_fraction,
            seed,
            train_ids,
            test_ids,
            train_out,
            test_out,
        } => {
            let data = read_corpus(corpus, &res)?;
            let spec = match (test_fraction, train_ids, test_ids) {
                (Some(f), _, _) => SplitSpec::Fraction {
                    test_fraction: *f,
                    seed: *seed,
                },
                (None, Some(tr), Some(te)) => SplitSpec::Explicit {
                    train: parse_id_list(tr).map_err(|e| Usage(e.to_string()))?,
                    test: parse_id_list(te).map_err(|e| Usage(e.to_string()))?,
                },
                _ => return Err(Usage("give --test-fraction or both id lists".into()).into()),
            };
            let split = split_corpus(&data, &spec)?;
            split.train.save(train_out, &res.tagset)?;
            split.test.save(test_out, &res.tagset)?;
            let index = res.index(cfg.train.mode);
            let n_train = build_cases(&split.train, &res, &index)?.n_strings();
            let n_test = build_cases(&split.test, &res, &index)?.n_strings();
            writeln!(out, "side,sentences,strings")?;
            writeln!(out, "train,{},{n_train}", split.train.len())?;
            writeln!(out, "test,{},{n_test}", split.test.len())?;
            writeln!(
                out,
                "test/train string ratio {:.2}",
                n_test as f64 / n_train.max(1) as f64
            )?;
        }
        Command::Analyze {
            corpus,
            model,
            all_strings,
            out_dir,
        } => {
            let data = read_corpus(corpus, &res)?;
            let saved = model.as_ref().map(SavedModel::load).transpose()?;
            let index = match &saved {
                Some(s) => s.index,
                None => res.index(cfg.train.mode),
            };
            let prepared = build_cases(&data, &res, &index)?;
            let mut reports: Vec<(&str, String)> = Vec::new();

            let strings: Vec<Vec<_>> = if *all_strings {
                prepared
                    .cases
                    .iter()
                    .flat_map(|c| c.candidates.iter().map(|s| s.tags.clone()))
                    .collect()
            } else {
                prepared.cases.iter().map(|c| c.target().tags.clone()).collect()
            };
            let mut csv_for = |mode: TupleMode, name| -> Result<()> {
                let idx = res.index(mode);
                let table = rank_frequency(strings.iter().flat_map(|s| idx.tuples_of(s)))?;
                reports.push((name, table.to_csv(|t| t.render(&res.tagset))));
                Ok(())
            };
            csv_for(TupleMode::Pairs, "pairs_rank_frequency.csv")?;
            csv_for(TupleMode::Triples, "triples_rank_frequency.csv")?;

            let gold: Vec<Vec<_>> = data.sentences.iter().map(|s| s.gold_string(&res.tagset)).collect();
            let entropy = entropy_report(&gold)?;
            let counts: Vec<usize> = prepared.cases.iter().map(|c| c.candidates.len()).collect();
            reports.push((
                "summary.txt",
                format!(
                    "gold string n-gram entropy (bits)\n{entropy}\n{}\n",
                    CandidateStats::from_counts(&counts)
                ),
            ));

            if let Some(saved) = &saved {
                let ts = prepared.training_set(saved.index.dim())?;
                let rows = weight_frequency_report(&saved.model, &ts, &saved.index)?;
                let rho = spearman(&weight_points(&rows, &saved.model));
                reports.push(("weights.csv", weight_report_csv(&rows, &res.tagset)));
                let rho = rho.map_or("undefined".to_string(), |r| format!("{r:.4}"));
                reports.push(("weights_summary.txt", format!("spearman(freq, |weight|) = {rho}\n")));
            }

            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
                    for (name, body) in &reports {
                        let p = dir.join(name);
                        fs::write(&p, body).with_context(|| p.display().to_string())?;
                        writeln!(out, "wrote {}", p.display())?;
                    }
                }
                None => {
                    for (name, body) in &reports {
                        writeln!(out, "== {name}\n{body}")?;
                    }
                }
            }
        }
        Command::Annotate { texts, out: path } => {
            let raw = fs::read_to_string(texts).with_context(|| texts.display().to_string())?;
            let lines: Vec<&str> = raw
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect();
            let existing = if path.exists() {
                load_corpus(path, &res.tagset)?
            } else {
                AnnotatedCorpus::default()
            };
            let outcome = annotate(&lines, existing, &res, BufReader::new(io::stdin()), &mut out)?;
            outcome.corpus.save(path, &res.tagset)?;
            writeln!(
                out,
                "\n{} added, {} already annotated, {} unparseable{}",
                outcome.added,
                outcome.skipped_existing,
                outcome.unparseable.len(),
                if outcome.aborted {
                    "; stopped early, progress saved"
                } else {
                    ""
                }
            )?;
        }
        Command::ExtractRules { model, out: path } => {
            let saved = SavedModel::load(model)?;
            let Model::Hodyne(h) = &saved.model else {
                return Err(Usage(format!(
                    "rule extraction needs a hodyne model, got {}",
                    saved.model.kind()
                ))
                .into());
            };
            let tuples = extract_prohibition_candidates(h, &saved.index)?;
            let text = prohibition_lines(&tuples, &res.tagset);
            match path {
                Some(p) => {
                    fs::write(p, &text).with_context(|| p.display().to_string())?;
                    writeln!(out, "{} candidate rules written to {}", tuples.len(), p.display())?;
                }
                None => write!(out, "{text}")?,
            }
        }
    }
    Ok(())
}
