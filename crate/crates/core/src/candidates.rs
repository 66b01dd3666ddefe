//! Candidate generation: every placement of the subject hypertags combined
//! with every tag disambiguation, pruned by the prohibition table while the
//! string is being built.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::TagLattice;
use crate::tagset::{strip_comment, TagId, TagSet};

/// Tag name of the sentence-final endpoint. A sentence-final token whose only
/// candidate is this tag stays outside the bracketed region.
pub const ENDPOINT_TAG: &str = "endp";

/// Banned adjacent pairs and triples over the full symbol set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProhibitionTable {
    m: usize,
    pairs: Vec<bool>,
    triples: Vec<bool>,
}

impl ProhibitionTable {
    pub fn empty(m: usize) -> Self {
        ProhibitionTable {
            m,
            pairs: vec![false; m * m],
            triples: vec![false; m * m * m],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ban_pair(&mut self, a: TagId, b: TagId) -> Result<()> {
        self.check_ids(&[a, b])?;
        let m = self.m;
        self.pairs[a.index() * m + b.index()] = true;
        Ok(())
    }

    pub fn ban_triple(&mut self, a: TagId, b: TagId, c: TagId) -> Result<()> {
        self.check_ids(&[a, b, c])?;
        let m = self.m;
        self.triples[(a.index() * m + b.index()) * m + c.index()] = true;
        Ok(())
    }

    fn check_ids(&self, ids: &[TagId]) -> Result<()> {
        for id in ids {
            if id.index() >= self.m {
                return Err(Error::TagOutOfRange {
                    id: id.index(),
                    m: self.m,
                });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn pair_banned(&self, a: TagId, b: TagId) -> bool {
        self.pairs[a.index() * self.m + b.index()]
    }

    #[inline]
    pub fn triple_banned(&self, a: TagId, b: TagId, c: TagId) -> bool {
        self.triples[(a.index() * self.m + b.index()) * self.m + c.index()]
    }

    /// True iff a window of two or three symbols is in the table. Other
    /// window lengths are never prohibited.
    pub fn check_prohibited(&self, window: &[TagId]) -> bool {
        match *window {
            [a, b] => self.pair_banned(a, b),
            [a, b, c] => self.triple_banned(a, b, c),
            _ => false,
        }
    }

    /// True iff any adjacent pair or triple of `seq` is banned.
    pub fn violates(&self, seq: &[TagId]) -> bool {
        seq.windows(2).any(|w| self.check_prohibited(w)) || seq.windows(3).any(|w| self.check_prohibited(w))
    }

    pub fn banned_pairs(&self) -> BTreeSet<(TagId, TagId)> {
        let m = self.m;
        (0..m * m)
            .filter(|&i| self.pairs[i])
            .map(|i| (TagId((i / m) as u16), TagId((i % m) as u16)))
            .collect()
    }

    pub fn banned_triples(&self) -> BTreeSet<(TagId, TagId, TagId)> {
        let m = self.m;
        (0..m * m * m)
            .filter(|&i| self.triples[i])
            .map(|i| {
                (
                    TagId((i / (m * m)) as u16),
                    TagId((i / m % m) as u16),
                    TagId((i % m) as u16),
                )
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.iter().filter(|&&b| b).count() + self.triples.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parses `P tag1 tag2` / `T tag1 tag2 tag3` rule lines.
    pub fn parse(text: &str, tagset: &TagSet) -> Result<Self> {
        let mut table = ProhibitionTable::empty(tagset.m());
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let ids = fields[1..]
                .iter()
                .map(|name| {
                    tagset
                        .id(name)
                        .ok_or_else(|| Error::format("prohibitions", lineno, format!("unknown tag `{name}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            match (fields[0], ids.as_slice()) {
                ("P", &[a, b]) => table.ban_pair(a, b)?,
                ("T", &[a, b, c]) => table.ban_triple(a, b, c)?,
                _ => {
                    return Err(Error::format(
                        "prohibitions",
                        lineno,
                        "expected `P tag tag` or `T tag tag tag`",
                    ))
                }
            }
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>, tagset: &TagSet) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ProhibitionTable::parse(&text, tagset)
    }

    /// The rule set shipped with the crate, resolved against `tagset`.
    pub fn default_table(tagset: &TagSet) -> Result<Self> {
        ProhibitionTable::parse(crate::resources::DEFAULT_PROHIBITIONS, tagset)
    }

    /// Serializes the table in the rule-file format.
    pub fn to_rules(&self, tagset: &TagSet) -> String {
        let mut out = String::new();
        for (a, b) in self.banned_pairs() {
            out.push_str(&format!("P {} {}\n", tagset.name(a), tagset.name(b)));
        }
        for (a, b, c) in self.banned_triples() {
            out.push_str(&format!("T {} {} {}\n", tagset.name(a), tagset.name(b), tagset.name(c)));
        }
        out
    }
}

/// Length restrictions on generated strings, all measured in words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenLimits {
    pub max_presubject: usize,
    pub max_subject: usize,
    /// Words kept after the closing hypertag.
    pub truncate_after: usize,
    pub max_candidates: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            max_presubject: 15,
            max_subject: 12,
            truncate_after: 3,
            max_candidates: 10_000,
        }
    }
}

impl GenLimits {
    pub fn validate(&self) -> Result<()> {
        if self.max_subject == 0 || self.truncate_after == 0 || self.max_candidates == 0 {
            return Err(Error::InvalidParam("generation limits must be positive".into()));
        }
        Ok(())
    }
}

/// One disambiguated tag string with one hypertag placement.
///
/// `tags` starts with the start symbol; the opening hypertag sits before word
/// `open_word` and the closing one before word `close_word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateString {
    pub tags: Vec<TagId>,
    pub open_word: usize,
    pub close_word: usize,
    /// Number of words represented in `tags`.
    pub covered_words: usize,
    /// `Some(covered_words)` when words past the truncation point were dropped.
    pub truncated_at: Option<usize>,
}

impl CandidateString {
    /// Token index for every position of `tags`; `None` for the start symbol and hypertags.
    pub fn word_span(&self) -> Vec<Option<usize>> {
        let mut word = 0;
        let mut span = Vec::with_capacity(self.tags.len());
        for i in 0..self.tags.len() {
            if i == 0 || i == self.open_pos() || i == self.close_pos() {
                span.push(None);
            } else {
                span.push(Some(word));
                word += 1;
            }
        }
        span
    }

    /// Position of the opening hypertag in `tags`.
    pub fn open_pos(&self) -> usize {
        1 + self.open_word
    }

    /// Position of the closing hypertag in `tags`.
    pub fn close_pos(&self) -> usize {
        2 + self.close_word
    }

    /// The chosen tag of each covered word, hypertags removed.
    pub fn word_tags(&self) -> Vec<TagId> {
        let (o, c) = (self.open_pos(), self.close_pos());
        self.tags
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != o && i != c)
            .map(|(_, &t)| t)
            .collect()
    }

    pub fn subject_tags(&self) -> &[TagId] {
        &self.tags[self.open_pos() + 1..self.close_pos()]
    }

    /// Checks the structural invariants against the symbol set and the lattice.
    pub fn check(&self, tagset: &TagSet, lattice: &TagLattice) -> std::result::Result<(), String> {
        if self.tags.first() != Some(&tagset.start_id()) {
            return Err("does not begin with the start symbol".into());
        }
        let opens: Vec<usize> = positions(&self.tags, tagset.open_id());
        let closes: Vec<usize> = positions(&self.tags, tagset.close_id());
        if opens != [self.open_pos()] || closes != [self.close_pos()] {
            return Err("hypertags missing, repeated or misplaced".into());
        }
        if self.close_word <= self.open_word {
            return Err("empty subject".into());
        }
        let words = self.word_tags();
        if words.len() != self.covered_words || self.covered_words > lattice.len() {
            return Err("covered word count mismatch".into());
        }
        for (i, t) in words.iter().enumerate() {
            if !lattice.slots[i].contains(t) {
                return Err(format!("tag of word {i} not in its lattice slot"));
            }
        }
        Ok(())
    }

    pub fn render(&self, tagset: &TagSet) -> String {
        tagset.render(&self.tags)
    }
}

fn positions(seq: &[TagId], id: TagId) -> Vec<usize> {
    seq.iter()
        .enumerate()
        .filter(|(_, &t)| t == id)
        .map(|(i, _)| i)
        .collect()
}

/// Number of leading words over which hypertags may be placed.
pub fn bracketable_words(lattice: &TagLattice, tagset: &TagSet) -> usize {
    let n = lattice.len();
    match (tagset.id(ENDPOINT_TAG), lattice.slots.last()) {
        (Some(end), Some(last)) if n > 1 && last.as_slice() == [end] => n - 1,
        _ => n,
    }
}

/// Generates all candidate strings for a lattice, in placement-major order
/// (opening position, then subject length) and then lexicographically by tag choice.
pub fn generate_candidates(
    lattice: &TagLattice,
    limits: &GenLimits,
    table: &ProhibitionTable,
    tagset: &TagSet,
) -> Result<Vec<CandidateString>> {
    if lattice.is_empty() {
        return Err(Error::Empty("lattice has no words"));
    }
    if table.m() != tagset.m() {
        return Err(Error::DimensionMismatch {
            expected: tagset.m(),
            got: table.m(),
        });
    }
    let n = lattice.len();
    let span = bracketable_words(lattice, tagset);
    let mut gen = Builder {
        lattice,
        table,
        open_id: tagset.open_id(),
        close_id: tagset.close_id(),
        cap: limits.max_candidates,
        seq: Vec::with_capacity(n + 3),
        out: Vec::new(),
    };
    for open in 0..=limits.max_presubject.min(span - 1) {
        for len in 1..=limits.max_subject.min(span - open) {
            let close = open + len;
            let covered = close + limits.truncate_after.min(n - close);
            let placement = Placement { open, close, covered };
            gen.seq.clear();
            gen.seq.push(tagset.start_id());
            gen.extend(&placement, 0)?;
        }
    }
    Ok(gen.out)
}

struct Placement {
    open: usize,
    close: usize,
    covered: usize,
}

struct Builder<'a> {
    lattice: &'a TagLattice,
    table: &'a ProhibitionTable,
    open_id: TagId,
    close_id: TagId,
    cap: usize,
    seq: Vec<TagId>,
    out: Vec<CandidateString>,
}

impl Builder<'_> {
    /// Pushes a symbol; returns false (and leaves it pushed) if a banned
    /// window now ends at the top of the sequence.
    fn push(&mut self, t: TagId) -> bool {
        self.seq.push(t);
        let n = self.seq.len();
        let s = &self.seq;
        !(n >= 2 && self.table.pair_banned(s[n - 2], s[n - 1])
            || n >= 3 && self.table.triple_banned(s[n - 3], s[n - 2], s[n - 1]))
    }

    fn extend(&mut self, p: &Placement, word: usize) -> Result<()> {
        let mark = self.seq.len();
        if word == p.open && !self.push(self.open_id) {
            self.seq.truncate(mark);
            return Ok(());
        }
        if word == p.close && !self.push(self.close_id) {
            self.seq.truncate(mark);
            return Ok(());
        }
        if word == p.covered {
            if self.out.len() >= self.cap {
                return Err(Error::TooManyCandidates { cap: self.cap });
            }
            self.out.push(CandidateString {
                tags: self.seq.clone(),
                open_word: p.open,
                close_word: p.close,
                covered_words: p.covered,
                truncated_at: (p.covered < self.lattice.len()).then_some(p.covered),
            });
        } else {
            let base = self.seq.len();
            for &tag in &self.lattice.slots[word] {
                if self.push(tag) {
                    self.extend(p, word + 1)?;
                }
                self.seq.truncate(base);
            }
        }
        self.seq.truncate(mark);
        Ok(())
    }
}

/// Summary of per-sentence candidate counts.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateStats {
    pub sentences: usize,
    pub total: usize,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// Fraction of sentences left with exactly one candidate.
    pub single_fraction: f64,
    /// Sentences with no surviving candidate.
    pub empty: usize,
}

impl CandidateStats {
    pub fn from_counts(counts: &[usize]) -> Self {
        let total: usize = counts.iter().sum();
        let n = counts.len().max(1) as f64;
        CandidateStats {
            sentences: counts.len(),
            total,
            min: counts.iter().copied().min().unwrap_or(0),
            max: counts.iter().copied().max().unwrap_or(0),
            mean: total as f64 / n,
            single_fraction: counts.iter().filter(|&&c| c == 1).count() as f64 / n,
            empty: counts.iter().filter(|&&c| c == 0).count(),
        }
    }
}

impl fmt::Display for CandidateStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "candidates per sentence: mean {:.2}, min {}, max {}, single {:.1}%, none {} ({} strings over {} sentences)",
            self.mean,
            self.min,
            self.max,
            100.0 * self.single_fraction,
            self.empty,
            self.total,
            self.sentences
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts() -> TagSet {
        TagSet::default_set()
    }

    fn t(ts: &TagSet, n: &str) -> TagId {
        ts.require(n).unwrap()
    }

    #[test]
    fn default_table_examples() {
        let ts = ts();
        let table = ProhibitionTable::default_table(&ts).unwrap();
        let (verb, aux) = (t(&ts, "verb"), t(&ts, "aux"));
        assert!(table.check_prohibited(&[verb, verb]));
        assert!(!table.check_prohibited(&[aux, verb]));
        assert!(!table.check_prohibited(&[verb, ts.close_id(), verb]));
        assert!(!table.check_prohibited(&[verb]));
    }

    #[test]
    fn rule_file_errors() {
        let ts = ts();
        assert!(ProhibitionTable::parse("P verb", &ts).is_err());
        let err = ProhibitionTable::parse("# c\nP verb nope\n", &ts).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
        let table = ProhibitionTable::parse("P CLOSE prep\nT verb ] verb\n", &ts).unwrap();
        assert_eq!(table.len(), 2);
        let again = ProhibitionTable::parse(&table.to_rules(&ts), &ts).unwrap();
        assert_eq!(table, again);
    }

    #[test]
    fn noun_endp_yields_single_candidate() {
        let ts = ts();
        let lat = TagLattice::from_slots(vec![vec![t(&ts, "noun")], vec![t(&ts, "endp")]]);
        let out = generate_candidates(&lat, &GenLimits::default(), &ProhibitionTable::empty(ts.m()), &ts).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].render(&ts), "strt [ noun ] endp");
        assert_eq!(out[0].truncated_at, None);
    }

    #[test]
    fn verb_verb_is_fully_pruned() {
        let ts = ts();
        let v = t(&ts, "verb");
        let lat = TagLattice::from_slots(vec![vec![v], vec![v]]);
        let table = ProhibitionTable::default_table(&ts).unwrap();
        let out = generate_candidates(&lat, &GenLimits::default(), &table, &ts).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn truncation_keeps_three_words() {
        let ts = ts();
        let n = t(&ts, "noun");
        let lat = TagLattice::from_slots(vec![vec![n]; 8]);
        let out = generate_candidates(&lat, &GenLimits::default(), &ProhibitionTable::empty(ts.m()), &ts).unwrap();
        for c in &out {
            let after = c.tags.len() - 1 - c.close_pos();
            assert!(after <= 3);
            assert_eq!(after, 3.min(8 - c.close_word));
            c.check(&ts, &lat).unwrap();
        }
        // open=0, len=1 covers 4 words of 8
        assert_eq!(out[0].truncated_at, Some(4));
        assert_eq!(
            out[0].word_span(),
            vec![None, None, Some(0), None, Some(1), Some(2), Some(3)]
        );
    }

    #[test]
    fn order_is_placement_major_then_lexicographic() {
        let ts = ts();
        let (noun, verb) = (t(&ts, "noun"), t(&ts, "verb"));
        let lat = TagLattice::from_slots(vec![vec![noun, verb], vec![noun]]);
        let out = generate_candidates(&lat, &GenLimits::default(), &ProhibitionTable::empty(ts.m()), &ts).unwrap();
        let rendered: Vec<String> = out.iter().map(|c| c.render(&ts)).collect();
        assert_eq!(
            rendered,
            vec![
                "strt [ noun ] noun",
                "strt [ verb ] noun",
                "strt [ noun noun ]",
                "strt [ verb noun ]",
                "strt noun [ noun ]",
                "strt verb [ noun ]",
            ]
        );
    }

    #[test]
    fn cap_aborts() {
        let ts = ts();
        let all: Vec<TagId> = ts.pos_ids().collect();
        let lat = TagLattice::from_slots(vec![all; 6]);
        let limits = GenLimits {
            max_candidates: 50,
            ..GenLimits::default()
        };
        let err = generate_candidates(&lat, &limits, &ProhibitionTable::empty(ts.m()), &ts).unwrap_err();
        assert!(matches!(err, Error::TooManyCandidates { cap: 50 }));
    }

    #[test]
    fn stats_summary() {
        let s = CandidateStats::from_counts(&[1, 3, 5, 0]);
        assert_eq!(s.total, 9);
        assert_eq!(s.min, 0);
        assert_eq!(s.max, 5);
        assert_eq!(s.mean, 2.25);
        assert_eq!(s.single_fraction, 0.25);
        assert_eq!(s.empty, 1);
    }
}
