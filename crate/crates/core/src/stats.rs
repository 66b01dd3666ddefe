//! Distributional analysis of tag tuples and trained weights.

use std::collections::BTreeMap;
use std::fmt::{self, Display};

use crate::error::{Error, Result};
use crate::nets::{HodyneModel, Model, TrainingSet};
use crate::tagset::TagSet;
use crate::tuples::{Tuple, TupleIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct RankRow<T> {
    pub rank: usize,
    pub item: T,
    pub freq: usize,
    pub p: f64,
    /// `p · rank`; roughly constant under Zipf's law.
    pub p_times_n: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankFrequencyTable<T> {
    pub rows: Vec<RankRow<T>>,
    pub total: usize,
}

/// Counts items and ranks them by descending frequency; equal frequencies
/// are ordered by the item's own ordering (tuple index for tuples).
pub fn rank_frequency<T: Ord + Clone>(items: impl IntoIterator<Item = T>) -> Result<RankFrequencyTable<T>> {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for it in items {
        *counts.entry(it).or_default() += 1;
    }
    if counts.is_empty() {
        return Err(Error::Empty("rank-frequency input"));
    }
    let total: usize = counts.values().sum();
    let mut pairs: Vec<(T, usize)> = counts.into_iter().collect();
    // stable sort keeps the BTreeMap order among ties
    pairs.sort_by_key(|p| std::cmp::Reverse(p.1));
    let rows = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (item, freq))| {
            let p = freq as f64 / total as f64;
            RankRow {
                rank: i + 1,
                item,
                freq,
                p,
                p_times_n: p * (i + 1) as f64,
            }
        })
        .collect();
    Ok(RankFrequencyTable { rows, total })
}

impl<T> RankFrequencyTable<T> {
    /// `rank,item,freq,p,p_times_n` with items rendered by `show`.
    pub fn to_csv(&self, show: impl Fn(&T) -> String) -> String {
        let mut out = String::from("rank,item,freq,p,p_times_n\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.rank,
                csv_field(&show(&r.item)),
                r.freq,
                r.p,
                r.p_times_n
            ));
        }
        out
    }

    /// Fraction of distinct items seen at most `k` times.
    pub fn tail_fraction(&self, k: usize) -> f64 {
        self.rows.iter().filter(|r| r.freq <= k).count() as f64 / self.rows.len() as f64
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Plug-in entropy estimate for one block length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub n: usize,
    /// Block entropy `H_n` in bits.
    pub block: f64,
    /// `H_n / n`.
    pub per_symbol: f64,
    /// `H_n − H_{n−1}` (equals `H_1` for n = 1).
    pub conditional: f64,
    /// Number of n-grams counted.
    pub samples: usize,
}

pub const MAX_NGRAM: usize = 3;

fn block_entropy<T: Ord + Clone>(sequences: &[Vec<T>], n: usize) -> (f64, usize) {
    let mut counts: BTreeMap<&[T], usize> = BTreeMap::new();
    let mut total = 0;
    for s in sequences {
        for w in s.windows(n) {
            *counts.entry(w).or_default() += 1;
            total += 1;
        }
    }
    let h = counts
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0);
    (h, total)
}

/// Block and per-symbol entropy of the empirical n-gram distribution.
pub fn ngram_entropy<T: Ord + Clone>(sequences: &[Vec<T>], n: usize) -> Result<EntropyEstimate> {
    if n == 0 || n > MAX_NGRAM {
        return Err(Error::InvalidParam(format!("n-gram order must be in 1..={MAX_NGRAM}")));
    }
    if sequences.is_empty() {
        return Err(Error::Empty("entropy input"));
    }
    if let Some(s) = sequences.iter().find(|s| s.len() < n) {
        return Err(Error::SequenceTooShort {
            len: s.len(),
            mode: "n-gram",
        });
    }
    let (block, samples) = block_entropy(sequences, n);
    let prev = if n > 1 { block_entropy(sequences, n - 1).0 } else { 0.0 };
    Ok(EntropyEstimate {
        n,
        block,
        per_symbol: block / n as f64,
        conditional: block - prev,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub estimates: Vec<EntropyEstimate>,
    pub alphabet: usize,
}

pub fn entropy_report<T: Ord + Clone>(sequences: &[Vec<T>]) -> Result<EntropyReport> {
    let max_n = sequences.iter().map(Vec::len).min().unwrap_or(0).min(MAX_NGRAM);
    let estimates = (1..=max_n)
        .map(|n| ngram_entropy(sequences, n))
        .collect::<Result<Vec<_>>>()?;
    let alphabet = sequences
        .iter()
        .flatten()
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    Ok(EntropyReport { estimates, alphabet })
}

impl Display for EntropyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>2} {:>10} {:>10} {:>11} {:>9}",
            "n", "H_n", "H_n/n", "H_n-H_n-1", "samples"
        )?;
        for e in &self.estimates {
            writeln!(
                f,
                "{:>2} {:>10.4} {:>10.4} {:>11.4} {:>9}",
                e.n, e.block, e.per_symbol, e.conditional, e.samples
            )?;
        }
        write!(f, "alphabet size {}", self.alphabet)
    }
}

/// One tuple's occurrence counts and trained weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightRow {
    pub index: usize,
    pub tuple: Tuple,
    pub freq_yes: u32,
    pub freq_no: u32,
    pub weight_yes: f64,
    /// `None` for single-output models.
    pub weight_no: Option<f64>,
}

impl WeightRow {
    pub fn freq(&self) -> u32 {
        self.freq_yes + self.freq_no
    }
}

/// Frequency against weight for every tuple that occurs in `data`.
/// Hodyne rows carry both link weights (0.0 for a disabled link); other
/// models report their single weight in `weight_yes`.
pub fn weight_frequency_report(model: &Model, data: &TrainingSet, index: &TupleIndex) -> Result<Vec<WeightRow>> {
    let dim = index.dim();
    if data.dim() != dim || crate::nets::Classifier::dim(model) != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: data.dim(),
        });
    }
    let (yes, no) = data.occurrence_counts();
    let mut rows = Vec::new();
    for i in 0..dim {
        if yes[i] == 0 && no[i] == 0 {
            continue;
        }
        let (weight_yes, weight_no) = match model {
            Model::Hodyne(h) => (
                if h.enabled_yes[i] { h.w_yes[i] } else { 0.0 },
                Some(if h.enabled_no[i] { h.w_no[i] } else { 0.0 }),
            ),
            Model::Perceptron(p) => (p.w[i], None),
            Model::Lms(l) => (l.w[i], None),
            Model::Bayes(b) => (b.log_ratio(i), None),
        };
        rows.push(WeightRow {
            index: i,
            tuple: index.decode(i)?,
            freq_yes: yes[i],
            freq_no: no[i],
            weight_yes,
            weight_no,
        });
    }
    Ok(rows)
}

/// `tuple,freq_yes,freq_no,weight_yes,weight_no`.
pub fn weight_report_csv(rows: &[WeightRow], tagset: &TagSet) -> String {
    let mut out = String::from("tuple,freq_yes,freq_no,weight_yes,weight_no\n");
    for r in rows {
        let no = r.weight_no.map(|w| w.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&r.tuple.render(tagset)),
            r.freq_yes,
            r.freq_no,
            r.weight_yes,
            no
        ));
    }
    out
}

/// Link-level (frequency, |weight|) points: one per enabled Hodyne link, one
/// per tuple for single-output models.
pub fn weight_points(rows: &[WeightRow], model: &Model) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for r in rows {
        match (model, r.weight_no) {
            (Model::Hodyne(h), Some(wn)) => {
                if h.enabled_yes[r.index] {
                    pts.push((r.freq() as f64, r.weight_yes.abs()));
                }
                if h.enabled_no[r.index] {
                    pts.push((r.freq() as f64, wn.abs()));
                }
            }
            _ => pts.push((r.freq() as f64, r.weight_yes.abs())),
        }
    }
    pts
}

/// Ranks with ties sharing their average rank (1-based).
fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson correlation of average ranks).
/// `None` when fewer than two points or either variable is constant.
pub fn spearman(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let rx = average_ranks(&xs);
    let ry = average_ranks(&ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Tuples linked only to the "no" output: candidates for new prohibition rules.
pub fn extract_prohibition_candidates(model: &HodyneModel, index: &TupleIndex) -> Result<Vec<Tuple>> {
    model.no_only_links().into_iter().map(|i| index.decode(i)).collect()
}

/// Renders extracted tuples in the prohibition-table file format.
pub fn prohibition_lines(tuples: &[Tuple], tagset: &TagSet) -> String {
    let mut out = String::new();
    for t in tuples {
        out.push_str(&t.rule_line(tagset));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::{train_hodyne, Label, TrainParams, TrainingItem};
    use crate::tuples::TupleMode;

    #[test]
    fn ideal_zipf_has_constant_product() {
        // f(n) = 60 / n for n = 1..5
        let mut items = Vec::new();
        for (k, f) in [60, 30, 20, 15, 12].iter().enumerate() {
            items.extend(std::iter::repeat_n(k, *f));
        }
        let t = rank_frequency(items).unwrap();
        let c = t.rows[0].p_times_n;
        for r in &t.rows {
            assert!((r.p_times_n - c).abs() < 1e-12);
        }
        let sum: f64 = t.rows.iter().map(|r| r.p).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_is_anti_zipf() {
        let items: Vec<u32> = (0..4).flat_map(|k| std::iter::repeat_n(k, 5)).collect();
        let t = rank_frequency(items).unwrap();
        for r in &t.rows {
            assert!((r.p_times_n - r.rank as f64 / 4.0).abs() < 1e-12);
        }
        // ties keep item order
        assert_eq!(t.rows.iter().map(|r| r.item).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(rank_frequency(Vec::<u32>::new()).is_err());
    }

    #[test]
    fn constant_sequence_has_zero_entropy() {
        let seqs = vec![vec![7u8; 50], vec![7u8; 20]];
        for n in 1..=3 {
            let e = ngram_entropy(&seqs, n).unwrap();
            assert_eq!(e.block, 0.0);
        }
        assert!(ngram_entropy(&seqs, 4).is_err());
        assert!(ngram_entropy(&[vec![1u8]], 2).is_err());
    }

    #[test]
    fn entropy_bounds() {
        let seqs = vec![vec![0u8, 1, 2, 3, 0, 2, 1, 3, 3, 3, 0]];
        for n in 1..=3 {
            let e = ngram_entropy(&seqs, n).unwrap();
            assert!(e.block >= 0.0 && e.block <= n as f64 * 2.0 + 1e-12);
        }
    }

    #[test]
    fn markov_chain_rate_below_marginal() {
        use rand::{Rng, SeedableRng};
        // P = [[0.9, 0.1], [0.2, 0.8]], stationary (2/3, 1/3)
        let h = |p: &[f64]| -> f64 { p.iter().map(|&x| -x * x.log2()).sum() };
        let pi = [2.0 / 3.0, 1.0 / 3.0];
        let h1 = h(&pi);
        let h2 = h1 + pi[0] * h(&[0.9, 0.1]) + pi[1] * h(&[0.2, 0.8]);
        assert!(h2 / 2.0 < h1);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut state = 0u8;
        let seq: Vec<u8> = (0..200_000)
            .map(|_| {
                let stay = if state == 0 { 0.9 } else { 0.8 };
                if !rng.gen_bool(stay) {
                    state ^= 1;
                }
                state
            })
            .collect();
        let e1 = ngram_entropy(std::slice::from_ref(&seq), 1).unwrap();
        let e2 = ngram_entropy(&[seq], 2).unwrap();
        assert!((e1.block - h1).abs() < 0.02, "{} vs {h1}", e1.block);
        assert!((e2.block - h2).abs() < 0.02, "{} vs {h2}", e2.block);
        assert!(e2.per_symbol < e1.per_symbol);
        assert!((e2.conditional - (h2 - h1)).abs() < 0.02);
    }

    #[test]
    fn spearman_known_values() {
        let inc: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, (i * i) as f64)).collect();
        assert!((spearman(&inc).unwrap() - 1.0).abs() < 1e-12);
        let dec: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -(i as f64).exp())).collect();
        assert!((spearman(&dec).unwrap() + 1.0).abs() < 1e-12);
        // ties: x = [1,1,2,3], y = [1,2,3,4] → ranks x = [1.5,1.5,3,4]
        let r = spearman(&[(1.0, 1.0), (1.0, 2.0), (2.0, 3.0), (3.0, 4.0)]).unwrap();
        let expect = 4.5 / (4.5f64 * 5.0).sqrt();
        assert!((r - expect).abs() < 1e-12);
        assert_eq!(spearman(&[(1.0, 1.0), (1.0, 2.0)]), None);
    }

    #[test]
    fn extraction_and_weight_rows() {
        let ts = TagSet::default_set();
        let idx = TupleIndex::new(TupleMode::Pairs, ts.m());
        let seq = |s: &str| ts.parse_sequence(s).unwrap();
        let items = vec![
            TrainingItem {
                vector: idx.phi(&seq("strt [ pron ] verb noun")).unwrap(),
                label: Label::Yes,
                sentence_id: 0,
            },
            TrainingItem {
                vector: idx.phi(&seq("strt [ pron ] verb verb noun")).unwrap(),
                label: Label::No,
                sentence_id: 0,
            },
        ];
        let data = TrainingSet::new(idx.dim(), items).unwrap();
        let t = train_hodyne(&data, &TrainParams::default()).unwrap();

        let untrained = HodyneModel::new(idx.dim());
        assert!(extract_prohibition_candidates(&untrained, &idx).unwrap().is_empty());

        let extracted = extract_prohibition_candidates(&t.model, &idx).unwrap();
        let vv = Tuple::Pair(ts.require("verb").unwrap(), ts.require("verb").unwrap());
        assert!(extracted.contains(&vv));
        // (strt, [) occurs in both classes
        assert!(!extracted.contains(&Tuple::Pair(ts.start_id(), ts.open_id())));
        assert!(prohibition_lines(&extracted, &ts).contains("P verb verb\n"));

        let model = Model::Hodyne(t.model.clone());
        let rows = weight_frequency_report(&model, &data, &idx).unwrap();
        let vv_row = rows.iter().find(|r| r.tuple == vv).unwrap();
        assert_eq!((vv_row.freq_yes, vv_row.freq_no), (0, 1));
        assert_eq!(vv_row.weight_yes, 0.0);
        assert!(vv_row.weight_no.unwrap() > 0.0);
        // never-occurring tuples are absent
        assert_eq!(
            rows.len(),
            (0..idx.dim())
                .filter(|&i| data.items().iter().any(|it| it.vector.contains(i)))
                .count()
        );
        let csv = weight_report_csv(&rows, &ts);
        assert!(csv.starts_with("tuple,freq_yes,freq_no,weight_yes,weight_no\n"));
        assert!(csv.contains("\"(verb, verb)\",0,1,0,"));
    }
}
