//! Word to candidate-tag mapping and ambiguous tagging.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tagset::{strip_comment, TagId, TagSet};

/// Tag names used for unknown words when present in the tagset.
pub const DEFAULT_FALLBACK: [&str; 3] = ["noun", "verb", "adj"];

#[derive(Clone, Debug)]
pub struct Lexicon {
    entries: HashMap<String, Vec<TagId>>,
    fallback: Vec<TagId>,
    fold_case: bool,
}

impl Lexicon {
    /// Empty lexicon with the default unknown-word fallback. If none of the
    /// default fallback names exist in `tagset`, every POS tag is used.
    pub fn empty(tagset: &TagSet) -> Self {
        let mut fallback: Vec<TagId> = DEFAULT_FALLBACK.iter().filter_map(|n| tagset.id(n)).collect();
        if fallback.is_empty() {
            fallback = tagset.pos_ids().collect();
        }
        fallback.sort();
        Lexicon {
            entries: HashMap::new(),
            fallback,
            fold_case: true,
        }
    }

    /// Parses `word<TAB>tag1,tag2,...` lines. Repeated words union their tag sets.
    pub fn parse(text: &str, tagset: &TagSet) -> Result<Self> {
        let mut lex = Lexicon::empty(tagset);
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            let (word, tags) = line
                .split_once('\t')
                .ok_or_else(|| Error::format("lexicon", lineno, "expected `word<TAB>tags`"))?;
            let word = word.trim();
            if word.is_empty() {
                return Err(Error::format("lexicon", lineno, "empty word"));
            }
            let mut ids = Vec::new();
            for name in tags.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let id = tagset
                    .id(name)
                    .ok_or_else(|| Error::format("lexicon", lineno, format!("unknown tag `{name}`")))?;
                if !tagset.is_pos(id) {
                    return Err(Error::format(
                        "lexicon",
                        lineno,
                        format!("`{name}` is reserved and cannot tag a word"),
                    ));
                }
                ids.push(id);
            }
            if ids.is_empty() {
                return Err(Error::format("lexicon", lineno, "empty tag list"));
            }
            lex.insert(word, &ids);
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>, tagset: &TagSet) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lexicon::parse(&text, tagset)
    }

    /// The lexicon shipped with the crate (covers the bundled corpus).
    pub fn default_lexicon(tagset: &TagSet) -> Result<Self> {
        Lexicon::parse(crate::resources::DEFAULT_LEXICON, tagset)
    }

    pub fn insert(&mut self, word: &str, tags: &[TagId]) {
        let key = self.key(word);
        let slot = self.entries.entry(key).or_default();
        slot.extend_from_slice(tags);
        slot.sort();
        slot.dedup();
    }

    pub fn set_fallback(&mut self, tags: Vec<TagId>) -> Result<()> {
        if tags.is_empty() {
            return Err(Error::InvalidParam("unknown-word fallback must not be empty".into()));
        }
        let mut tags = tags;
        tags.sort();
        tags.dedup();
        self.fallback = tags;
        Ok(())
    }

    pub fn fallback(&self) -> &[TagId] {
        &self.fallback
    }

    pub fn set_fold_case(&mut self, fold: bool) {
        self.fold_case = fold;
    }

    pub fn lookup(&self, word: &str) -> Option<&[TagId]> {
        self.entries.get(&self.key(word)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn key(&self, word: &str) -> String {
        if self.fold_case {
            word.to_lowercase()
        } else {
            word.to_string()
        }
    }

    /// Maps each token onto its candidate tags.
    pub fn tag_sentence<S: AsRef<str>>(&self, tokens: &[S]) -> TagLattice {
        let mut slots = Vec::with_capacity(tokens.len());
        let mut unknown = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            match self.lookup(tok.as_ref()) {
                Some(tags) => slots.push(tags.to_vec()),
                None => {
                    unknown.push(i);
                    slots.push(self.fallback.clone());
                }
            }
        }
        TagLattice {
            words: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
            slots,
            unknown,
        }
    }
}

/// Per-token candidate tag sets for one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagLattice {
    pub words: Vec<String>,
    /// Sorted, non-empty candidate sets, one per word.
    pub slots: Vec<Vec<TagId>>,
    /// Positions of words that were not in the lexicon.
    pub unknown: Vec<usize>,
}

impl TagLattice {
    /// Builds a lattice directly from tag sets (words are left as placeholders).
    pub fn from_slots(slots: Vec<Vec<TagId>>) -> Self {
        let words = (0..slots.len()).map(|i| format!("w{i}")).collect();
        let slots = slots
            .into_iter()
            .map(|mut s| {
                s.sort();
                s.dedup();
                s
            })
            .collect();
        TagLattice {
            words,
            slots,
            unknown: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn ambiguous_count(&self) -> usize {
        self.slots.iter().filter(|s| s.len() > 1).count()
    }
}

/// Fraction of tokens with more than one candidate tag over a set of lattices.
pub fn ambiguity_rate<'a>(lattices: impl IntoIterator<Item = &'a TagLattice>) -> f64 {
    let (mut amb, mut total) = (0usize, 0usize);
    for l in lattices {
        amb += l.ambiguous_count();
        total += l.len();
    }
    if total == 0 {
        0.0
    } else {
        amb as f64 / total as f64
    }
}

/// Whitespace tokenization with punctuation split off word edges.
/// Punctuation marks become tokens of their own.
pub fn tokenize(text: &str) -> Vec<String> {
    const PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '(', ')', '"'];
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let mut rest = chunk;
        let mut trailing = Vec::new();
        while let Some(c) = rest.chars().next().filter(|c| PUNCT.contains(c)) {
            out.push(c.to_string());
            rest = &rest[c.len_utf8()..];
        }
        while let Some(c) = rest.chars().last().filter(|c| PUNCT.contains(c)) {
            trailing.push(c.to_string());
            rest = &rest[..rest.len() - c.len_utf8()];
        }
        if !rest.is_empty() {
            out.push(rest.to_string());
        }
        out.extend(trailing.into_iter().rev());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts() -> TagSet {
        TagSet::default_set()
    }

    fn ids(ts: &TagSet, names: &[&str]) -> Vec<TagId> {
        let mut v: Vec<TagId> = names.iter().map(|n| ts.require(n).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn parses_entries_and_unions_duplicates() {
        let ts = ts();
        let lex = Lexicon::parse("papers\tnoun,verb\njournal\tnoun\nbelow\tprep,adv\nbelow\tadv\n", &ts).unwrap();
        assert_eq!(lex.lookup("papers").unwrap(), ids(&ts, &["noun", "verb"]).as_slice());
        assert_eq!(lex.lookup("journal").unwrap(), ids(&ts, &["noun"]).as_slice());
        assert_eq!(lex.lookup("below").unwrap(), ids(&ts, &["prep", "adv"]).as_slice());
    }

    #[test]
    fn unknown_tag_reports_line() {
        let err = Lexicon::parse("a\tpred\nb\tbogus\n", &ts()).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = Lexicon::parse("a\t\n", &ts()).unwrap_err();
        assert!(err.to_string().contains("empty tag list"));
        let err = Lexicon::parse("a\tOPEN\n", &ts()).unwrap_err();
        assert!(err.to_string().contains("reserved"));
    }

    #[test]
    fn tags_sentence_with_fallback() {
        let ts = ts();
        let lex = Lexicon::parse("all\tpred\npapers\tnoun,verb\njournal\tnoun\n", &ts).unwrap();
        let lat = lex.tag_sentence(&["All", "papers"]);
        assert_eq!(lat.slots, vec![ids(&ts, &["pred"]), ids(&ts, &["noun", "verb"])]);
        assert!(lat.unknown.is_empty());
        let lat = lex.tag_sentence(&["journal"]);
        assert_eq!(lat.slots, vec![ids(&ts, &["noun"])]);
        let lat = lex.tag_sentence(&["zzxq"]);
        assert_eq!(lat.unknown, vec![0]);
        assert_eq!(lat.slots[0], ids(&ts, &["noun", "verb", "adj"]));
    }

    #[test]
    fn ambiguity_rate_hand_count() {
        let ts = ts();
        let lex = Lexicon::default_lexicon(&ts).unwrap();
        // all papers published in this journal are protected by copyright .
        // ambiguous: papers, in -> 2 of 11
        let toks = tokenize("All papers published in this journal are protected by copyright.");
        let a = lex.tag_sentence(&toks);
        // the directions given below must be carefully followed .
        // ambiguous: below -> 1 of 9
        let toks = tokenize("The directions given below must be carefully followed.");
        let b = lex.tag_sentence(&toks);
        assert_eq!(a.ambiguous_count(), 2);
        assert_eq!(b.ambiguous_count(), 1);
        assert_eq!(ambiguity_rate([&a, &b]), 3.0 / 20.0);
    }

    #[test]
    fn tokenizer_detaches_punctuation() {
        assert_eq!(
            tokenize("When hot, the (main) oil-filter leaks."),
            vec!["When", "hot", ",", "the", "(", "main", ")", "oil-filter", "leaks", "."]
        );
    }

    #[test]
    fn tagging_is_deterministic() {
        let ts = ts();
        let lex = Lexicon::default_lexicon(&ts).unwrap();
        let toks = tokenize("The pump drives the fan.");
        assert_eq!(lex.tag_sentence(&toks), lex.tag_sentence(&toks));
    }
}
