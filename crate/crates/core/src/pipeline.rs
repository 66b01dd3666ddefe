//! End-to-end wiring: corpus → candidates → labelled vectors → model, and
//! single-sentence parsing with a stage-by-stage trace.

use std::fmt::{self, Display};
use std::time::{Duration, Instant};

use crate::candidates::{generate_candidates, CandidateString, GenLimits, ProhibitionTable};
use crate::corpus::{AnnotatedCorpus, AnnotatedSentence};
use crate::error::{Error, Result};
use crate::eval::{argmax, SentenceCase};
use crate::lexicon::{tokenize, Lexicon, TagLattice};
use crate::nets::{self, ModelKind, SavedModel, TrainParams, TrainReport, TrainingItem, TrainingSet};
use crate::tagset::TagSet;
use crate::tuples::{TupleIndex, TupleMode};

/// Everything the rule-based front end needs.
#[derive(Clone, Debug)]
pub struct Resources {
    pub tagset: TagSet,
    pub lexicon: Lexicon,
    pub table: ProhibitionTable,
    pub limits: GenLimits,
}

impl Resources {
    /// The bundled tagset, lexicon and prohibition table with default limits.
    pub fn defaults() -> Result<Self> {
        let tagset = TagSet::default_set();
        Ok(Resources {
            lexicon: Lexicon::default_lexicon(&tagset)?,
            table: ProhibitionTable::default_table(&tagset)?,
            limits: GenLimits::default(),
            tagset,
        })
    }

    pub fn lattice<S: AsRef<str>>(&self, words: &[S]) -> TagLattice {
        self.lexicon.tag_sentence(words)
    }

    pub fn candidates(&self, lattice: &TagLattice) -> Result<Vec<CandidateString>> {
        generate_candidates(lattice, &self.limits, &self.table, &self.tagset)
    }

    pub fn index(&self, mode: TupleMode) -> TupleIndex {
        TupleIndex::new(mode, self.tagset.m())
    }
}

/// Locates the candidate matching a sentence's annotation.
pub fn find_target(candidates: &[CandidateString], sentence: &AnnotatedSentence) -> Option<usize> {
    candidates.iter().position(|c| {
        c.open_word == sentence.open
            && c.close_word == sentence.close
            && c.word_tags().as_slice() == &sentence.tags[..c.covered_words]
    })
}

/// A sentence whose annotated string could not be generated.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageFailure {
    pub sentence_id: usize,
    pub line: usize,
    pub reason: String,
}

impl Display for CoverageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sentence {} (line {}): {}", self.sentence_id, self.line, self.reason)
    }
}

#[derive(Clone, Debug, Default)]
pub struct PreparedCorpus {
    pub cases: Vec<SentenceCase>,
    pub failures: Vec<CoverageFailure>,
}

impl PreparedCorpus {
    pub fn n_strings(&self) -> usize {
        self.cases.iter().map(|c| c.candidates.len()).sum()
    }

    /// One labelled item per generated string; exactly one yes per sentence.
    pub fn training_set(&self, dim: usize) -> Result<TrainingSet> {
        let mut items = Vec::with_capacity(self.n_strings());
        for case in &self.cases {
            for (i, v) in case.vectors.iter().enumerate() {
                items.push(TrainingItem {
                    vector: v.clone(),
                    label: case.label(i),
                    sentence_id: case.sentence_id,
                });
            }
        }
        TrainingSet::new(dim, items)
    }
}

/// Generates, labels and encodes the strings of one sentence.
pub fn build_case(
    sentence: &AnnotatedSentence,
    res: &Resources,
    index: &TupleIndex,
) -> Result<std::result::Result<SentenceCase, String>> {
    let lattice = res.lattice(&sentence.words);
    let candidates = match res.candidates(&lattice) {
        Ok(c) => c,
        Err(Error::TooManyCandidates { cap }) => return Ok(Err(format!("more than {cap} candidate strings"))),
        Err(e) => return Err(e),
    };
    let Some(target_index) = find_target(&candidates, sentence) else {
        let gold = res.tagset.render(&sentence.gold_string(&res.tagset));
        let reason = if candidates.is_empty() {
            format!("every string was pruned (gold `{gold}`)")
        } else {
            format!("annotated string not generated (gold `{gold}`)")
        };
        return Ok(Err(reason));
    };
    let vectors = candidates
        .iter()
        .map(|c| index.phi(&c.tags))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ok(SentenceCase {
        sentence_id: sentence.id,
        candidates,
        vectors,
        target_index,
        gold_tags: sentence.tags.clone(),
    }))
}

pub fn build_cases(corpus: &AnnotatedCorpus, res: &Resources, index: &TupleIndex) -> Result<PreparedCorpus> {
    let mut out = PreparedCorpus::default();
    for s in &corpus.sentences {
        match build_case(s, res, index)? {
            Ok(case) => out.cases.push(case),
            Err(reason) => out.failures.push(CoverageFailure {
                sentence_id: s.id,
                line: s.line,
                reason,
            }),
        }
    }
    Ok(out)
}

/// Model choice and hyperparameters for one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub mode: TupleMode,
    pub kind: ModelKind,
    pub params: TrainParams,
    /// Additive smoothing for the Bayes baseline.
    pub smoothing: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            mode: TupleMode::Both,
            kind: ModelKind::Hodyne,
            params: TrainParams::default(),
            smoothing: 1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainRun {
    pub saved: SavedModel,
    pub report: TrainReport,
    pub failures: Vec<CoverageFailure>,
    pub n_sentences: usize,
    pub n_strings: usize,
    pub wall: Duration,
}

impl Display for TrainRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} on {} sentences, {} strings ({} coverage failures)",
            self.saved.model.kind(),
            self.n_sentences,
            self.n_strings,
            self.failures.len()
        )?;
        write!(f, "{}; {:.2?}", self.report, self.wall)
    }
}

pub fn run_pipeline_train(corpus: &AnnotatedCorpus, res: &Resources, cfg: &TrainConfig) -> Result<TrainRun> {
    let start = Instant::now();
    let index = res.index(cfg.mode);
    let prepared = build_cases(corpus, res, &index)?;
    if prepared.cases.is_empty() {
        return Err(Error::Empty("no sentence yielded its annotated string"));
    }
    let data = prepared.training_set(index.dim())?;
    let trained = nets::train(cfg.kind, &data, &cfg.params, cfg.smoothing)?;
    let mut saved = SavedModel::new(index, trained.model)?;
    let meta = [
        ("threshold", cfg.params.threshold_pct.to_string()),
        ("seed", cfg.params.seed.to_string()),
        ("epochs", trained.report.epochs.to_string()),
        ("train_pct", trained.report.train_pct.to_string()),
        ("sentences", prepared.cases.len().to_string()),
        ("strings", data.len().to_string()),
    ];
    for (k, v) in meta {
        saved.meta.insert(k.to_string(), v);
    }
    Ok(TrainRun {
        saved,
        report: trained.report,
        n_sentences: prepared.cases.len(),
        n_strings: data.len(),
        failures: prepared.failures,
        wall: start.elapsed(),
    })
}

/// Stages of parsing one sentence.
#[derive(Clone, Debug)]
pub struct ParseTrace {
    pub lattice: TagLattice,
    pub candidates: Vec<CandidateString>,
    pub scores: Vec<f64>,
    pub winner: Option<usize>,
    tagset: TagSet,
    index: TupleIndex,
}

impl ParseTrace {
    pub fn winner(&self) -> Option<&CandidateString> {
        self.winner.map(|i| &self.candidates[i])
    }

    /// The sentence with the winner's hypertags placed between words.
    pub fn bracketed(&self) -> Option<String> {
        let w = self.winner()?;
        let mut parts = Vec::new();
        for (i, word) in self.lattice.words.iter().enumerate() {
            if i == w.open_word {
                parts.push("[");
            }
            if i == w.close_word {
                parts.push("]");
            }
            parts.push(word);
        }
        if w.close_word == self.lattice.words.len() {
            parts.push("]");
        }
        Some(parts.join(" "))
    }
}

impl Display for ParseTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts = &self.tagset;
        writeln!(f, "A. tags")?;
        for (i, (w, slot)) in self.lattice.words.iter().zip(&self.lattice.slots).enumerate() {
            let names: Vec<&str> = slot.iter().map(|&t| ts.name(t)).collect();
            let flag = if self.lattice.unknown.contains(&i) {
                "  (unknown word)"
            } else {
                ""
            };
            writeln!(f, "  {w:<16} {}{flag}", names.join(" or "))?;
        }
        writeln!(f, "B. candidate strings")?;
        for (i, c) in self.candidates.iter().enumerate() {
            let mark = if Some(i) == self.winner { "  *** winner ***" } else { "" };
            writeln!(f, "  string no. {}{mark}", i + 1)?;
            writeln!(f, "  {}", c.render(ts))?;
        }
        writeln!(f, "C. tuples")?;
        for (i, c) in self.candidates.iter().enumerate() {
            let tuples: Vec<String> = self.index.tuples_of(&c.tags).iter().map(|t| t.render(ts)).collect();
            writeln!(f, "  string no. {}: {}", i + 1, tuples.join(" "))?;
        }
        writeln!(f, "D. gamma")?;
        for (i, g) in self.scores.iter().enumerate() {
            writeln!(f, "  string no. {:<4} {g:+.6}", i + 1)?;
        }
        match self.bracketed() {
            Some(b) => write!(f, "result: {b}"),
            None => write!(f, "result: unparseable, every candidate string was pruned"),
        }
    }
}

/// Tokenizes, tags, generates, encodes and scores one raw sentence.
pub fn parse_sentence(model: &SavedModel, res: &Resources, text: &str) -> Result<ParseTrace> {
    if model.index.m() != res.tagset.m() {
        return Err(Error::DimensionMismatch {
            expected: res.tagset.m(),
            got: model.index.m(),
        });
    }
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::Empty("sentence has no tokens"));
    }
    let lattice = res.lattice(&tokens);
    let candidates = res.candidates(&lattice)?;
    let n = candidates.len();
    let scores = candidates
        .iter()
        .map(|c| {
            let v = model.index.phi(&c.tags)?;
            nets::Classifier::score_in_sentence(&model.model, &v, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let winner = if n == 1 { Some(0) } else { argmax(&scores) };
    Ok(ParseTrace {
        lattice,
        candidates,
        scores,
        winner,
        tagset: res.tagset.clone(),
        index: model.index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::nets::Label;

    const ONE: &str = "[ it/pron ] rotates/verb ./endp";
    const DIRECTIONS: &str =
        "[ the/det directions/noun given/pastp below/prep ] must/aux be/aux carefully/adv followed/pastp ./endp";

    #[test]
    fn single_candidate_corpus_converges_at_once() {
        let res = Resources::defaults().unwrap();
        let corpus = parse_corpus(ONE, &res.tagset).unwrap();
        let index = res.index(TupleMode::Both);
        let prepared = build_cases(&corpus, &res, &index).unwrap();
        assert_eq!(prepared.cases[0].candidates.len(), 1);
        for kind in [ModelKind::Perceptron, ModelKind::Hodyne, ModelKind::Lms] {
            let cfg = TrainConfig {
                kind,
                ..TrainConfig::default()
            };
            let run = run_pipeline_train(&corpus, &res, &cfg).unwrap();
            assert!(run.report.converged(), "{kind}: {}", run.report);
            assert!(
                run.report.epochs <= if kind == ModelKind::Lms { 100 } else { 1 },
                "{kind}"
            );
        }
    }

    #[test]
    fn conflicting_rule_causes_coverage_failure() {
        let mut res = Resources::defaults().unwrap();
        let ts = res.tagset.clone();
        let text = format!("{ONE}\n{DIRECTIONS}\n");
        let corpus = parse_corpus(&text, &ts).unwrap();
        res.table
            .ban_pair(ts.require("noun").unwrap(), ts.require("pastp").unwrap())
            .unwrap();
        let prepared = build_cases(&corpus, &res, &res.index(TupleMode::Both)).unwrap();
        assert_eq!(prepared.cases.len(), 1);
        assert_eq!(prepared.failures.len(), 1);
        assert_eq!(prepared.failures[0].sentence_id, 1);
        assert!(prepared.failures[0].reason.contains("not generated"));
    }

    #[test]
    fn exactly_one_yes_per_case() {
        let res = Resources::defaults().unwrap();
        let corpus = parse_corpus(&format!("{ONE}\n{DIRECTIONS}\n"), &res.tagset).unwrap();
        let index = res.index(TupleMode::Both);
        let prepared = build_cases(&corpus, &res, &index).unwrap();
        let data = prepared.training_set(index.dim()).unwrap();
        assert_eq!(data.count(Label::Yes), 2);
        assert_eq!(data.len(), prepared.n_strings());
        let target = prepared.cases[1].target();
        assert_eq!(
            res.tagset.render(&target.tags),
            "strt [ det noun pastp prep ] aux aux adv"
        );
    }

    #[test]
    fn parse_trace_renders_winner() {
        let res = Resources::defaults().unwrap();
        let corpus = parse_corpus(ONE, &res.tagset).unwrap();
        let run = run_pipeline_train(&corpus, &res, &TrainConfig::default()).unwrap();
        let trace = parse_sentence(&run.saved, &res, "It rotates.").unwrap();
        assert_eq!(trace.bracketed().unwrap(), "[ It ] rotates .");
        let text = trace.to_string();
        assert!(text.contains("A. tags") && text.contains("D. gamma") && text.contains("*** winner ***"));

        let trace = parse_sentence(&run.saved, &res, "must must .").unwrap();
        assert!(trace.winner.is_none());
        assert!(trace.to_string().contains("unparseable"));
    }
}
