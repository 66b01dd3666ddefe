//! Annotated corpus files and train/test splitting.
//!
//! One sentence per line, tokens written `word/TAG`, the subject enclosed in
//! standalone `[` and `]` tokens. `#` starts a comment; `#@ key value` lines
//! carry metadata.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::candidates::{bracketable_words, GenLimits};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::tagset::{strip_comment, TagId, TagSet};

#[derive(Clone, Debug)]
pub struct AnnotatedSentence {
    pub id: usize,
    /// 1-based source line (0 when built in memory).
    pub line: usize,
    pub words: Vec<String>,
    pub tags: Vec<TagId>,
    /// First subject word.
    pub open: usize,
    /// One past the last subject word.
    pub close: usize,
}

impl PartialEq for AnnotatedSentence {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.words == other.words
            && self.tags == other.tags
            && self.open == other.open
            && self.close == other.close
    }
}

impl AnnotatedSentence {
    pub fn subject_len(&self) -> usize {
        self.close - self.open
    }

    pub fn subject_words(&self) -> &[String] {
        &self.words[self.open..self.close]
    }

    /// Gold tag string with start symbol and hypertags, untruncated.
    pub fn gold_string(&self, tagset: &TagSet) -> Vec<TagId> {
        let mut s = Vec::with_capacity(self.tags.len() + 3);
        s.push(tagset.start_id());
        for (i, &t) in self.tags.iter().enumerate() {
            if i == self.open {
                s.push(tagset.open_id());
            }
            if i == self.close {
                s.push(tagset.close_id());
            }
            s.push(t);
        }
        if self.close == self.tags.len() {
            s.push(tagset.close_id());
        }
        s
    }

    /// The sentence as plain text.
    pub fn text(&self) -> String {
        self.words.join(" ")
    }

    pub fn to_line(&self, tagset: &TagSet) -> String {
        let mut parts = Vec::with_capacity(self.words.len() + 2);
        for (i, (w, &t)) in self.words.iter().zip(&self.tags).enumerate() {
            if i == self.open {
                parts.push("[".to_string());
            }
            if i == self.close {
                parts.push("]".to_string());
            }
            parts.push(format!("{w}/{}", tagset.name(t)));
        }
        if self.close == self.words.len() {
            parts.push("]".to_string());
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnnotatedCorpus {
    pub sentences: Vec<AnnotatedSentence>,
    pub meta: BTreeMap<String, String>,
}

/// A sentence excluded at load time.
#[derive(Clone, Debug, PartialEq)]
pub struct Rejection {
    pub sentence_id: usize,
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sentence {} (line {}): {}", self.sentence_id, self.line, self.reason)
    }
}

fn parse_line(line: &str, lineno: usize, id: usize, tagset: &TagSet) -> Result<AnnotatedSentence> {
    let err = |msg: String| Error::format("corpus", lineno, msg);
    let (mut words, mut tags) = (Vec::new(), Vec::new());
    let (mut open, mut close) = (None, None);
    for tok in line.split_whitespace() {
        match tok {
            "[" => {
                if open.is_some() {
                    return Err(err("more than one `[`".into()));
                }
                if close.is_some() {
                    return Err(err("`[` after `]`".into()));
                }
                open = Some(words.len());
            }
            "]" => {
                match open {
                    None => return Err(err("`]` before `[`".into())),
                    Some(o) if o == words.len() => return Err(err("empty subject".into())),
                    _ => {}
                }
                if close.is_some() {
                    return Err(err("more than one `]`".into()));
                }
                close = Some(words.len());
            }
            _ => {
                let (w, t) = tok
                    .rsplit_once('/')
                    .filter(|(w, t)| !w.is_empty() && !t.is_empty())
                    .ok_or_else(|| err(format!("malformed token `{tok}`, expected word/TAG")))?;
                let id = tagset.id(t).ok_or_else(|| err(format!("unknown tag `{t}`")))?;
                if !tagset.is_pos(id) {
                    return Err(err(format!("reserved symbol `{t}` used as a word tag")));
                }
                words.push(w.to_string());
                tags.push(id);
            }
        }
    }
    let open = open.ok_or_else(|| err("missing `[`".into()))?;
    let close = close.ok_or_else(|| err("missing `]`".into()))?;
    Ok(AnnotatedSentence {
        id,
        line: lineno,
        words,
        tags,
        open,
        close,
    })
}

/// Parses corpus text. Syntax errors abort with the offending line number;
/// content checks against a lexicon are done by [`validate_corpus`].
pub fn parse_corpus(text: &str, tagset: &TagSet) -> Result<AnnotatedCorpus> {
    let mut corpus = AnnotatedCorpus::default();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = raw.trim();
        if let Some(meta) = trimmed.strip_prefix("#@") {
            let meta = meta.trim();
            let (k, v) = meta.split_once(char::is_whitespace).unwrap_or((meta, ""));
            if !k.is_empty() {
                corpus.meta.insert(k.to_string(), v.trim().to_string());
            }
            continue;
        }
        let trimmed = strip_comment(trimmed).trim();
        if trimmed.is_empty() {
            continue;
        }
        let id = corpus.sentences.len();
        corpus.sentences.push(parse_line(trimmed, lineno, id, tagset)?);
    }
    Ok(corpus)
}

pub fn load_corpus(path: impl AsRef<Path>, tagset: &TagSet) -> Result<AnnotatedCorpus> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, tagset)
}

impl AnnotatedCorpus {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn to_text(&self, tagset: &TagSet) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("#@ {k} {v}\n"));
        }
        for s in &self.sentences {
            out.push_str(&s.to_line(tagset));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>, tagset: &TagSet) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text(tagset)).map_err(|e| Error::io(path, e))
    }

    pub fn total_words(&self) -> usize {
        self.sentences.iter().map(|s| s.words.len()).sum()
    }

    /// Sentences whose ids are in `ids`, in corpus order.
    pub fn select(&self, ids: &BTreeSet<usize>) -> AnnotatedCorpus {
        AnnotatedCorpus {
            sentences: self.sentences.iter().filter(|s| ids.contains(&s.id)).cloned().collect(),
            meta: self.meta.clone(),
        }
    }
}

/// Checks each sentence against the lexicon and limits, returning the
/// accepted corpus and the rejected sentences with reasons.
pub fn validate_corpus(
    corpus: AnnotatedCorpus,
    lexicon: &Lexicon,
    limits: &GenLimits,
    tagset: &TagSet,
) -> (AnnotatedCorpus, Vec<Rejection>) {
    let mut kept = AnnotatedCorpus {
        sentences: Vec::new(),
        meta: corpus.meta,
    };
    let mut rejected = Vec::new();
    for s in corpus.sentences {
        match check_sentence(&s, lexicon, limits, tagset) {
            Ok(()) => kept.sentences.push(s),
            Err(reason) => rejected.push(Rejection {
                sentence_id: s.id,
                line: s.line,
                reason,
            }),
        }
    }
    (kept, rejected)
}

fn check_sentence(
    s: &AnnotatedSentence,
    lexicon: &Lexicon,
    limits: &GenLimits,
    tagset: &TagSet,
) -> std::result::Result<(), String> {
    if s.subject_len() > limits.max_subject {
        return Err(format!(
            "subject has {} words, more than the limit of {}",
            s.subject_len(),
            limits.max_subject
        ));
    }
    if s.open > limits.max_presubject {
        return Err(format!(
            "pre-subject has {} words, more than the limit of {}",
            s.open, limits.max_presubject
        ));
    }
    let lattice = lexicon.tag_sentence(&s.words);
    for (i, (w, t)) in s.words.iter().zip(&s.tags).enumerate() {
        if !lattice.slots[i].contains(t) {
            return Err(format!(
                "gold tag `{}` of `{w}` is not among its candidate tags",
                tagset.name(*t)
            ));
        }
    }
    if s.close > bracketable_words(&lattice, tagset) {
        return Err("subject includes the sentence-final endpoint".into());
    }
    Ok(())
}

/// How to divide a corpus into training and test sentences.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitSpec {
    /// A seeded random selection of round(fraction · n) test sentences.
    Fraction { test_fraction: f64, seed: u64 },
    /// Explicit sentence ids for each side.
    Explicit { train: Vec<usize>, test: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub train: AnnotatedCorpus,
    pub test: AnnotatedCorpus,
}

/// Partitions the corpus; both sides keep corpus order.
pub fn split_corpus(corpus: &AnnotatedCorpus, spec: &SplitSpec) -> Result<Split> {
    let all: BTreeSet<usize> = corpus.sentences.iter().map(|s| s.id).collect();
    if all.len() != corpus.len() {
        return Err(Error::InvalidParam("duplicate sentence ids".into()));
    }
    let test: BTreeSet<usize> = match spec {
        SplitSpec::Fraction { test_fraction, seed } => {
            if !(*test_fraction > 0.0 && *test_fraction < 1.0) {
                return Err(Error::InvalidParam("test fraction must lie in (0, 1)".into()));
            }
            let n = corpus.len();
            if n < 2 {
                return Err(Error::InvalidParam("a split needs at least two sentences".into()));
            }
            let k = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
            let mut ids: Vec<usize> = all.iter().copied().collect();
            ids.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            ids.into_iter().take(k).collect()
        }
        SplitSpec::Explicit { train, test } => {
            let tr: BTreeSet<usize> = train.iter().copied().collect();
            let te: BTreeSet<usize> = test.iter().copied().collect();
            if tr.len() != train.len() || te.len() != test.len() {
                return Err(Error::InvalidParam("repeated id in split list".into()));
            }
            if let Some(id) = tr.intersection(&te).next() {
                return Err(Error::InvalidParam(format!("sentence {id} is on both sides")));
            }
            let union: BTreeSet<usize> = tr.union(&te).copied().collect();
            if union != all {
                return Err(Error::InvalidParam(
                    "split lists do not cover exactly the corpus ids".into(),
                ));
            }
            te
        }
    };
    let train: BTreeSet<usize> = all.difference(&test).copied().collect();
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidParam("degenerate split: one side is empty".into()));
    }
    Ok(Split {
        train: corpus.select(&train),
        test: corpus.select(&test),
    })
}

/// Parses a comma or whitespace separated id list.
pub fn parse_id_list(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidParam(format!("bad sentence id `{t}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIRECTIONS: &str =
        "[ the/det directions/noun given/pastp below/prep ] must/aux be/aux carefully/adv followed/pastp ./endp";

    fn setup() -> (TagSet, Lexicon) {
        let ts = TagSet::default_set();
        let lex = Lexicon::default_lexicon(&ts).unwrap();
        (ts, lex)
    }

    #[test]
    fn directions_sentence_brackets() {
        let (ts, lex) = setup();
        let c = parse_corpus(DIRECTIONS, &ts).unwrap();
        let s = &c.sentences[0];
        assert_eq!((s.open, s.close), (0, 4));
        assert_eq!(s.words.len(), 9);
        assert_eq!(
            ts.render(&s.gold_string(&ts)),
            "strt [ det noun pastp prep ] aux aux adv pastp endp"
        );
        let (kept, rej) = validate_corpus(c, &lex, &GenLimits::default(), &ts);
        assert!(rej.is_empty(), "{rej:?}");
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn long_subject_rejected() {
        let (ts, lex) = setup();
        let subj = vec!["valve/noun"; 13].join(" ");
        let text = format!("[ {subj} ] is/aux tight/adj ./endp\n{DIRECTIONS}\n");
        let c = parse_corpus(&text, &ts).unwrap();
        let (kept, rej) = validate_corpus(c, &lex, &GenLimits::default(), &ts);
        assert_eq!(kept.len(), 1);
        assert_eq!(rej.len(), 1);
        assert_eq!(rej[0].line, 1);
        assert!(rej[0].reason.contains("13 words"), "{}", rej[0].reason);
    }

    #[test]
    fn gold_tag_must_be_a_candidate() {
        let (ts, lex) = setup();
        let c = parse_corpus("[ the/det journal/verb ] is/aux new/adj ./endp", &ts).unwrap();
        let (_, rej) = validate_corpus(c, &lex, &GenLimits::default(), &ts);
        assert!(rej[0].reason.contains("journal"));
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let (ts, _) = setup();
        let text = format!("# header\n\n#@ source test data\n   \n{DIRECTIONS}  # trailing note\n");
        let c = parse_corpus(&text, &ts).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.sentences[0].line, 5);
        assert_eq!(c.meta.get("source").map(String::as_str), Some("test data"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let (ts, _) = setup();
        let cases = [
            ("the/det [ journal ] ./endp", "malformed"),
            ("[ the/det journal/noun ./endp", "missing `]`"),
            ("the/det ] journal/noun [ ./endp", "before `[`"),
            ("[ ] the/det ./endp", "empty subject"),
            ("[ the/xyz ] ./endp", "unknown tag"),
            ("[ the/OPEN ] ./endp", "reserved"),
            ("[ a/art [ b/noun ] ./endp", "more than one"),
        ];
        for (line, needle) in cases {
            let text = format!("{DIRECTIONS}\n{line}\n");
            match parse_corpus(&text, &ts) {
                Err(Error::Format { line: 2, msg, .. }) => assert!(msg.contains(needle), "{msg}"),
                other => panic!("{line}: {other:?}"),
            }
        }
    }

    #[test]
    fn serialize_round_trip() {
        let (ts, _) = setup();
        let text = format!("#@ k v\n{DIRECTIONS}\nin/prep use/noun ,/comma [ it/pron ] rotates/verb ./endp\n");
        let c = parse_corpus(&text, &ts).unwrap();
        assert_eq!(c.to_text(&ts), text);
        assert_eq!(parse_corpus(&c.to_text(&ts), &ts).unwrap(), c);
    }

    fn numbered(n: usize) -> AnnotatedCorpus {
        let (ts, _) = setup();
        let text = vec![DIRECTIONS; n].join("\n");
        parse_corpus(&text, &ts).unwrap()
    }

    #[test]
    fn fraction_split() {
        let c = numbered(2);
        let s = split_corpus(
            &c,
            &SplitSpec::Fraction {
                test_fraction: 0.5,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!((s.train.len(), s.test.len()), (1, 1));

        let c = numbered(40);
        let spec = SplitSpec::Fraction {
            test_fraction: 0.12,
            seed: 9,
        };
        let a = split_corpus(&c, &spec).unwrap();
        let b = split_corpus(&c, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.test.len(), 5);
        let mut ids: Vec<usize> = a
            .train
            .sentences
            .iter()
            .chain(&a.test.sentences)
            .map(|s| s.id)
            .collect();
        ids.sort();
        assert_eq!(ids, (0..40).collect::<Vec<_>>());
    }

    #[test]
    fn explicit_split_and_errors() {
        let c = numbered(4);
        let s = split_corpus(
            &c,
            &SplitSpec::Explicit {
                train: vec![0, 2, 3],
                test: vec![1],
            },
        )
        .unwrap();
        assert_eq!(s.test.sentences[0].id, 1);
        let bad = [
            SplitSpec::Explicit {
                train: vec![0, 1],
                test: vec![1, 2, 3],
            },
            SplitSpec::Explicit {
                train: vec![0, 1],
                test: vec![2],
            },
            SplitSpec::Explicit {
                train: vec![0, 1, 2, 3],
                test: vec![],
            },
            SplitSpec::Fraction {
                test_fraction: 1.0,
                seed: 0,
            },
        ];
        for spec in bad {
            assert!(split_corpus(&c, &spec).is_err(), "{spec:?}");
        }
        assert!(split_corpus(
            &numbered(1),
            &SplitSpec::Fraction {
                test_fraction: 0.5,
                seed: 0
            }
        )
        .is_err());
        assert_eq!(parse_id_list("1, 2 3").unwrap(), vec![1, 2, 3]);
        assert!(parse_id_list("1,x").is_err());
    }
}
