//! Winner selection and the four graded correctness measures.
//!
//! * correct-a: the hypertags of the winning string are in the right place;
//! * correct-b: additionally every word inside the subject is tagged correctly;
//! * correct-c: additionally every word in the processed region is tagged correctly;
//! * correct-d: per string rather than per sentence, the fraction of all
//!   generated strings whose Γ sign matches their yes/no label.

use std::fmt;

use crate::candidates::CandidateString;
use crate::error::Result;
use crate::nets::{Classifier, Label};
use crate::tagset::TagId;
use crate::tuples::SparseBinaryVector;

/// All generated strings for one sentence, with the annotated target.
#[derive(Clone, Debug, PartialEq)]
pub struct SentenceCase {
    pub sentence_id: usize,
    pub candidates: Vec<CandidateString>,
    pub vectors: Vec<SparseBinaryVector>,
    pub target_index: usize,
    /// Gold tag of every word of the sentence.
    pub gold_tags: Vec<TagId>,
}

impl SentenceCase {
    pub fn label(&self, i: usize) -> Label {
        if i == self.target_index {
            Label::Yes
        } else {
            Label::No
        }
    }

    pub fn target(&self) -> &CandidateString {
        &self.candidates[self.target_index]
    }
}

/// Γ of every candidate of a sentence.
pub fn score_case<C: Classifier + ?Sized>(model: &C, case: &SentenceCase) -> Result<Vec<f64>> {
    let n = case.vectors.len();
    case.vectors.iter().map(|v| model.score_in_sentence(v, n)).collect()
}

/// Index of the highest score; ties go to the lowest index. Negative winners are fine.
pub fn argmax(scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &s) in scores.iter().enumerate() {
        match best {
            Some(b) if scores[b] >= s => {}
            _ => best = Some(i),
        }
    }
    best
}

pub fn select_winner<C: Classifier + ?Sized>(model: &C, case: &SentenceCase) -> Result<usize> {
    if case.candidates.len() == 1 {
        return Ok(0);
    }
    Ok(argmax(&score_case(model, case)?).unwrap_or(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Judgement {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

/// Grades a winning candidate against the sentence's gold annotation.
/// Brackets are compared in word coordinates.
pub fn judge(case: &SentenceCase, winner: usize) -> Judgement {
    let w = &case.candidates[winner];
    let t = case.target();
    let a = w.open_word == t.open_word && w.close_word == t.close_word;
    if !a {
        return Judgement::default();
    }
    let words = w.word_tags();
    let gold = &case.gold_tags;
    let b = (w.open_word..w.close_word).all(|i| gold.get(i) == Some(&words[i]));
    let c = b && (0..w.covered_words).all(|i| gold.get(i) == Some(&words[i]));
    Judgement { a, b, c }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Metrics {
    pub n_sentences: usize,
    pub correct_a: usize,
    pub correct_b: usize,
    pub correct_c: usize,
    pub correct_d: usize,
    pub n_strings: usize,
}

impl Metrics {
    fn ratio(num: usize, den: usize) -> f64 {
        if den == 0 {
            0.0
        } else {
            100.0 * num as f64 / den as f64
        }
    }

    pub fn pct_a(&self) -> f64 {
        Self::ratio(self.correct_a, self.n_sentences)
    }

    pub fn pct_b(&self) -> f64 {
        Self::ratio(self.correct_b, self.n_sentences)
    }

    pub fn pct_c(&self) -> f64 {
        Self::ratio(self.correct_c, self.n_sentences)
    }

    pub fn pct_d(&self) -> f64 {
        Self::ratio(self.correct_d, self.n_strings)
    }
}

pub fn evaluate<C: Classifier + ?Sized>(model: &C, cases: &[SentenceCase]) -> Result<Metrics> {
    let mut m = Metrics::default();
    for case in cases {
        let scores = score_case(model, case)?;
        let winner = if case.candidates.len() == 1 {
            0
        } else {
            argmax(&scores).unwrap_or(0)
        };
        let j = judge(case, winner);
        m.n_sentences += 1;
        m.correct_a += j.a as usize;
        m.correct_b += j.b as usize;
        m.correct_c += j.c as usize;
        m.n_strings += scores.len();
        m.correct_d += scores
            .iter()
            .enumerate()
            .filter(|&(i, &g)| case.label(i).agrees(g))
            .count();
    }
    Ok(m)
}

/// One row of an evaluation report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub model: String,
    pub train_set: String,
    pub test_set: String,
    pub pairs: bool,
    pub triples: bool,
    pub threshold: f64,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
}

impl EvalReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("model,train_set,test_set,pairs,triples,threshold,correct_a,correct_b,correct_c,correct_d\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{:.1},{:.1},{:.1},{:.1}\n",
                r.model,
                r.train_set,
                r.test_set,
                yn(r.pairs),
                yn(r.triples),
                r.threshold,
                r.metrics.pct_a(),
                r.metrics.pct_b(),
                r.metrics.pct_c(),
                r.metrics.pct_d()
            ));
        }
        out
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "Y"
    } else {
        ""
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<11} {:<10} {:<10} {:>5} {:>7} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "model",
            "train",
            "test",
            "pairs",
            "triples",
            "threshold",
            "correct-a",
            "correct-b",
            "correct-c",
            "correct-d"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<11} {:<10} {:<10} {:>5} {:>7} {:>9.1} {:>9.1} {:>9.1} {:>9.1} {:>9.1}",
                r.model,
                r.train_set,
                r.test_set,
                yn(r.pairs),
                yn(r.triples),
                r.threshold,
                r.metrics.pct_a(),
                r.metrics.pct_b(),
                r.metrics.pct_c(),
                r.metrics.pct_d()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::{generate_candidates, GenLimits, ProhibitionTable};
    use crate::nets::PerceptronModel;
    use crate::tagset::TagSet;
    use crate::tuples::{TupleIndex, TupleMode};

    /// A linear model whose Γ is the sum of fixed per-index weights.
    struct Fixed(Vec<f64>);

    impl Classifier for Fixed {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn gamma(&self, v: &SparseBinaryVector) -> f64 {
            v.dot(&self.0)
        }
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax(&[-0.2, 0.5, 0.1]), Some(1));
        assert_eq!(argmax(&[-0.3, -0.1]), Some(1));
        assert_eq!(argmax(&[0.7]), Some(0));
        assert_eq!(argmax(&[0.2, 0.2, 0.1]), Some(0));
        assert_eq!(argmax(&[]), None);
    }

    fn case_from_listed_strings(ts: &TagSet, strings: &[&str], target: usize, gold: &str) -> SentenceCase {
        let idx = TupleIndex::new(TupleMode::Both, ts.m());
        let candidates: Vec<CandidateString> = strings
            .iter()
            .map(|s| {
                let tags = ts.parse_sequence(s).unwrap();
                let open = tags.iter().position(|&t| t == ts.open_id()).unwrap();
                let close = tags.iter().position(|&t| t == ts.close_id()).unwrap();
                CandidateString {
                    covered_words: tags.len() - 3,
                    open_word: open - 1,
                    close_word: close - 2,
                    truncated_at: None,
                    tags,
                }
            })
            .collect();
        let vectors = candidates.iter().map(|c| idx.phi(&c.tags).unwrap()).collect();
        SentenceCase {
            sentence_id: 0,
            candidates,
            vectors,
            target_index: target,
            gold_tags: ts.parse_sequence(gold).unwrap(),
        }
    }

    #[test]
    fn string_seven_is_correct_a_but_not_c() {
        let ts = TagSet::default_set();
        let case = case_from_listed_strings(
            &ts,
            &[
                "strt [ pred noun pastp prep prod noun ] aux pastp prep noun endp",
                "strt [ pred noun pastp adv prod noun ] aux pastp prep noun endp",
                "strt [ pred noun ] pastp adv prod noun aux pastp prep noun endp",
            ],
            0,
            "pred noun pastp prep prod noun aux pastp prep noun endp",
        );
        assert_eq!(
            judge(&case, 0),
            Judgement {
                a: true,
                b: true,
                c: true
            }
        );
        // the mistagged word (in → adv) lies inside the subject here
        assert_eq!(
            judge(&case, 1),
            Judgement {
                a: true,
                b: false,
                c: false
            }
        );
        assert_eq!(judge(&case, 2), Judgement::default());
    }

    #[test]
    fn tail_mistag_fails_only_c() {
        let ts = TagSet::default_set();
        let case = case_from_listed_strings(
            &ts,
            &["strt [ det noun ] aux pastp prep", "strt [ det noun ] aux pastp adv"],
            0,
            "det noun aux pastp prep noun endp",
        );
        assert_eq!(
            judge(&case, 1),
            Judgement {
                a: true,
                b: true,
                c: false
            }
        );
    }

    #[test]
    fn evaluate_hand_fixture() {
        let ts = TagSet::default_set();
        let idx = TupleIndex::new(TupleMode::Both, ts.m());
        let a = case_from_listed_strings(
            &ts,
            &["strt [ det noun ] aux pastp", "strt [ det ] noun aux pastp"],
            0,
            "det noun aux pastp",
        );
        let b = case_from_listed_strings(
            &ts,
            &["strt [ pron ] verb adv", "strt [ pron verb ] adv"],
            0,
            "pron verb adv",
        );
        // reward (noun, ]) and punish (pron, ])
        let mut w = vec![0.0; idx.dim()];
        let pair = |x: &str, y: &str| {
            idx.encode(crate::tuples::Tuple::Pair(
                ts.require(x).unwrap(),
                ts.require(y).unwrap(),
            ))
            .unwrap()
        };
        w[pair("noun", "]")] = 1.0;
        w[pair("det", "]")] = -1.0;
        w[pair("pron", "]")] = -2.0;
        w[pair("verb", "]")] = 0.5;
        let model = Fixed(w);
        // sentence a: Γ = [1, -1] → winner 0 correct; sentence b: Γ = [-2, 0.5] → winner 1 wrong
        let m = evaluate(&model, &[a, b]).unwrap();
        assert_eq!(
            m,
            Metrics {
                n_sentences: 2,
                correct_a: 1,
                correct_b: 1,
                correct_c: 1,
                correct_d: 2,
                n_strings: 4,
            }
        );
        assert_eq!(m.pct_a(), 50.0);
        assert_eq!(m.pct_d(), 50.0);
    }

    #[test]
    fn oracle_model_scores_perfectly() {
        let ts = TagSet::default_set();
        let table = ProhibitionTable::default_table(&ts).unwrap();
        let lex = crate::lexicon::Lexicon::default_lexicon(&ts).unwrap();
        let toks = crate::lexicon::tokenize("The directions given below must be carefully followed.");
        let lat = lex.tag_sentence(&toks);
        let cands = generate_candidates(&lat, &GenLimits::default(), &table, &ts).unwrap();
        let gold = ts.parse_sequence("det noun pastp prep aux aux adv pastp endp").unwrap();
        let target = cands
            .iter()
            .position(|c| c.open_word == 0 && c.close_word == 4 && c.word_tags()[..] == gold[..c.covered_words])
            .unwrap();
        let idx = TupleIndex::new(TupleMode::Both, ts.m());
        let vectors: Vec<_> = cands.iter().map(|c| idx.phi(&c.tags).unwrap()).collect();
        // perceptron whose weights are the target's indicator minus everything else
        let mut p = PerceptronModel::new(idx.dim());
        for (i, v) in vectors.iter().enumerate() {
            for &f in v.active() {
                p.w[f] += if i == target { 1.0 } else { -0.01 };
            }
        }
        let case = SentenceCase {
            sentence_id: 0,
            candidates: cands,
            vectors,
            target_index: target,
            gold_tags: gold,
        };
        let m = evaluate(&p, &[case]).unwrap();
        assert_eq!((m.correct_a, m.correct_b, m.correct_c), (1, 1, 1));
    }

    #[test]
    fn report_formats() {
        let report = EvalReport {
            rows: vec![ReportRow {
                model: "hodyne".into(),
                train_set: "Tr1".into(),
                test_set: "Ts1".into(),
                pairs: true,
                triples: true,
                threshold: 99.0,
                metrics: Metrics {
                    n_sentences: 42,
                    correct_a: 42,
                    correct_b: 42,
                    correct_c: 41,
                    correct_d: 78,
                    n_strings: 85,
                },
            }],
        };
        let csv = report.to_csv();
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "hodyne,Tr1,Ts1,Y,Y,99,100.0,100.0,97.6,91.8"
        );
        assert!(report.to_string().contains("correct-d"));
    }
}
