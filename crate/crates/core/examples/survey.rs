//! Trains every model kind on the bundled corpus and prints training and
//! held-out results.

use subjparse::candidates::CandidateStats;
use subjparse::corpus::{parse_corpus, split_corpus};
use subjparse::eval::evaluate;
use subjparse::lexicon::ambiguity_rate;
use subjparse::pipeline::{build_cases, run_pipeline_train};
use subjparse::resources::SYNTHETIC_CORPUS;
use subjparse::{ModelKind, Resources, SplitSpec, TrainConfig, TrainParams, TupleMode};

fn main() -> subjparse::Result<()> {
    let threshold: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(99.0);
    let max_epochs: usize = std::env::args().nth(2).and_then(|a| a.parse().ok()).unwrap_or(1000);
    let res = Resources::defaults()?;
    let corpus = parse_corpus(SYNTHETIC_CORPUS, &res.tagset)?;
    let lattices: Vec<_> = corpus.sentences.iter().map(|s| res.lattice(&s.words)).collect();
    println!("ambiguity rate {:.3}", ambiguity_rate(&lattices));
    let prepared = build_cases(&corpus, &res, &res.index(TupleMode::Both))?;
    let counts: Vec<usize> = prepared.cases.iter().map(|c| c.candidates.len()).collect();
    println!("{}", CandidateStats::from_counts(&counts));
    for f in &prepared.failures {
        println!("coverage failure: {f}");
    }

    let split = split_corpus(
        &corpus,
        &SplitSpec::Fraction {
            test_fraction: 0.2,
            seed: 7,
        },
    )?;
    for mode in [TupleMode::Pairs, TupleMode::Triples, TupleMode::Both] {
        for kind in [
            ModelKind::Perceptron,
            ModelKind::Hodyne,
            ModelKind::Lms,
            ModelKind::Bayes,
        ] {
            let cfg = TrainConfig {
                mode,
                kind,
                params: TrainParams {
                    threshold_pct: threshold,
                    max_epochs,
                    ..TrainParams::default()
                },
                smoothing: 1.0,
            };
            let run = run_pipeline_train(&corpus, &res, &cfg)?;
            let held = run_pipeline_train(&split.train, &res, &cfg)?;
            let test = build_cases(&split.test, &res, &held.saved.index)?;
            let m = evaluate(&held.saved.model, &test.cases)?;
            println!(
                "{mode:<8} {kind:<10} full: {} | held-out a {:.1} b {:.1} c {:.1} d {:.1}",
                run.report,
                m.pct_a(),
                m.pct_b(),
                m.pct_c(),
                m.pct_d()
            );
        }
    }
    Ok(())
}
