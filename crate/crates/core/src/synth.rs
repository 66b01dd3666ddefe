//! A small grammar of technical-manual sentences used to build the bundled
//! annotated corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{AnnotatedCorpus, AnnotatedSentence};
use crate::error::Result;
use crate::tagset::TagSet;

/// Seed and size of the bundled corpus.
pub const BUNDLED_SEED: u64 = 1994;
pub const BUNDLED_SIZE: usize = 100;

const NOUNS: &[&str] = &[
    "valve", "pump", "cover", "housing", "shaft", "bearing", "gasket", "filter", "motor", "panel", "lever", "cable",
    "spring", "unit", "bracket", "wheel", "chain", "belt", "tank", "hose", "frame", "clamp",
];
const PLURALS: &[&str] = &[
    "parts",
    "seals",
    "bolts",
    "screws",
    "covers",
    "controls",
    "valves",
    "bearings",
    "cables",
    "instructions",
    "directions",
    "switches",
    "locks",
    "guides",
];
const MODIFIERS: &[&str] = &["pump", "motor", "engine", "safety", "pressure", "oil", "filter"];
const ADJS: &[&str] = &["new", "main", "small", "large", "upper", "lower", "worn", "hot"];
const STATES: &[&str] = &["tight", "loose", "clean", "dry", "secure", "correct", "hot"];
const REDUCED: &[&str] = &["shown", "given", "described", "supplied", "fitted", "mounted", "held"];
const LOCATIVE: &[&str] = &["below", "above", "inside", "behind"];
const PREPS: &[&str] = &[
    "to", "in", "on", "with", "into", "under", "behind", "inside", "above", "below", "at",
];
const OF_PREPS: &[&str] = &["of", "on", "in", "for"];
const AUX_FIN: &[&str] = &["is", "are"];
const MODALS: &[&str] = &["must", "should", "can", "will", "may"];
const ADVS: &[&str] = &["carefully", "regularly", "firmly", "fully", "always"];
const MANNER: &[&str] = &["freely", "slowly"];
const PARTICIPLES: &[&str] = &[
    "fitted",
    "mounted",
    "removed",
    "cleaned",
    "checked",
    "tightened",
    "replaced",
    "followed",
    "protected",
    "held",
    "supplied",
    "closed",
    "damaged",
];
const AGENT_PASTP: &[&str] = &["held", "protected", "supplied", "closed", "fitted", "replaced"];
const TRANSITIVE: &[&str] = &[
    "contains", "requires", "prevents", "connects", "operates", "moves", "holds", "supports", "drives", "controls",
    "covers", "guides", "locks", "seals",
];
const INTRANSITIVE: &[&str] = &["rotates", "moves", "operates", "turns"];
const LOC_VERBS: &[&str] = &["rests", "moves", "operates"];
const BARE: &[&str] = &[
    "hold", "support", "fit", "clean", "secure", "cover", "filter", "clamp", "lower", "oil",
];
const PREDS: &[&str] = &["all", "both", "each"];
const PRODS_SG: &[&str] = &["this", "that"];
const PRODS_PL: &[&str] = &["these", "those"];
const NUMS: &[&str] = &["two", "three", "four"];
const PRONS: &[&str] = &["it", "they"];

type Tok = (&'static str, &'static str);

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn pick(&mut self, words: &'static [&'static str]) -> &'static str {
        words.choose(&mut self.rng).copied().unwrap_or("")
    }

    fn w(&mut self, words: &'static [&'static str], tag: &'static str) -> Tok {
        (self.pick(words), tag)
    }

    fn noun(&mut self) -> Tok {
        if self.rng.gen_bool(0.5) {
            self.w(NOUNS, "noun")
        } else {
            self.w(PLURALS, "noun")
        }
    }

    fn det_np(&mut self) -> Vec<Tok> {
        let mut v = vec![("the", "det")];
        if self.rng.gen_bool(0.2) {
            v.push(self.w(ADJS, "adj"));
        }
        v.push(self.noun());
        v
    }

    fn subject(&mut self) -> Vec<Tok> {
        match self.rng.gen_range(0..16) {
            0 | 1 => vec![("the", "det"), self.noun()],
            2 => vec![("the", "det"), self.w(ADJS, "adj"), self.noun()],
            3 => vec![("the", "det"), self.w(MODIFIERS, "noun"), self.noun()],
            4 | 5 => {
                let mut v = vec![("the", "det"), self.noun(), self.w(OF_PREPS, "prep")];
                v.extend(self.det_np());
                v
            }
            6 | 7 => vec![
                ("the", "det"),
                self.noun(),
                self.w(REDUCED, "pastp"),
                self.w(LOCATIVE, "prep"),
            ],
            8 => {
                let mut v = vec![
                    ("the", "det"),
                    self.noun(),
                    self.w(REDUCED, "pastp"),
                    self.w(PREPS, "prep"),
                ];
                v.extend(self.det_np());
                v
            }
            9 => {
                if self.rng.gen_bool(0.5) {
                    vec![self.w(PREDS, "pred"), self.w(PLURALS, "noun")]
                } else {
                    vec![
                        self.w(PREDS, "pred"),
                        self.w(PLURALS, "noun"),
                        self.w(REDUCED, "pastp"),
                        self.w(PREPS, "prep"),
                        self.w(PRODS_SG, "prod"),
                        self.w(NOUNS, "noun"),
                    ]
                }
            }
            10 => {
                if self.rng.gen_bool(0.5) {
                    vec![self.w(PRODS_SG, "prod"), self.w(NOUNS, "noun")]
                } else {
                    vec![self.w(PRODS_PL, "prod"), self.w(ADJS, "adj"), self.w(PLURALS, "noun")]
                }
            }
            11 => {
                let n = self.w(NOUNS, "noun");
                let art = if n.0.starts_with(|c: char| "aeiou".contains(c)) {
                    "an"
                } else {
                    "a"
                };
                vec![(art, "art"), n]
            }
            12 => vec![self.w(NUMS, "num"), self.w(PLURALS, "noun")],
            13 => vec![self.w(PRONS, "pron")],
            14 => {
                let mut v = self.det_np();
                v.push(("and", "conj"));
                v.extend(self.det_np());
                v
            }
            _ => {
                let mut v = vec![
                    ("the", "det"),
                    self.noun(),
                    ("which", "wh"),
                    self.w(AUX_FIN, "aux"),
                    self.w(REDUCED, "pastp"),
                    self.w(PREPS, "prep"),
                ];
                v.extend(self.det_np());
                v
            }
        }
    }

    fn predicate(&mut self) -> Vec<Tok> {
        match self.rng.gen_range(0..10) {
            0 | 1 => vec![
                self.w(MODALS, "aux"),
                ("be", "aux"),
                self.w(ADVS, "adv"),
                self.w(PARTICIPLES, "pastp"),
            ],
            2 => vec![self.w(MODALS, "aux"), ("be", "aux"), self.w(PARTICIPLES, "pastp")],
            3 => {
                let mut v = vec![self.w(AUX_FIN, "aux"), self.w(AGENT_PASTP, "pastp"), ("by", "prep")];
                v.extend(self.det_np());
                v
            }
            4 => vec![
                self.w(AUX_FIN, "aux"),
                self.w(PARTICIPLES, "pastp"),
                self.w(LOCATIVE, "adv"),
            ],
            5 => {
                let mut v = vec![self.w(TRANSITIVE, "verb")];
                v.extend(self.det_np());
                v
            }
            6 => vec![self.w(INTRANSITIVE, "verb"), self.w(MANNER, "adv")],
            7 => {
                let mut v = vec![self.w(LOC_VERBS, "verb"), self.w(PREPS, "prep")];
                v.extend(self.det_np());
                v
            }
            8 => {
                if self.rng.gen_bool(0.5) {
                    vec![self.w(AUX_FIN, "aux"), self.w(STATES, "adj")]
                } else {
                    vec![self.w(MODALS, "aux"), ("be", "aux"), self.w(STATES, "adj")]
                }
            }
            _ => {
                let mut v = vec![self.w(MODALS, "aux"), self.w(BARE, "verb")];
                v.extend(self.det_np());
                v
            }
        }
    }

    fn presubject(&mut self) -> Vec<Tok> {
        match self.rng.gen_range(0..5) {
            0 => vec![("in", "prep"), ("use", "noun"), (",", "comma")],
            1 => vec![("for", "prep"), ("safety", "noun"), (",", "comma")],
            2 => vec![("after", "prep"), ("assembly", "noun"), (",", "comma")],
            3 => vec![("if", "conj"), ("necessary", "adj"), (",", "comma")],
            _ => vec![("when", "conj"), ("required", "pastp"), (",", "comma")],
        }
    }

    fn sentence(&mut self) -> (Vec<Tok>, usize, usize) {
        let mut toks = if self.rng.gen_bool(0.15) {
            self.presubject()
        } else {
            Vec::new()
        };
        let open = toks.len();
        toks.extend(self.subject());
        let close = toks.len();
        toks.extend(self.predicate());
        toks.push((".", "endp"));
        (toks, open, close)
    }
}

/// The two worked-example sentences, always placed first.
fn fixed_sentences() -> Vec<(Vec<Tok>, usize, usize)> {
    vec![
        (
            vec![
                ("all", "pred"),
                ("papers", "noun"),
                ("published", "pastp"),
                ("in", "prep"),
                ("this", "prod"),
                ("journal", "noun"),
                ("are", "aux"),
                ("protected", "pastp"),
                ("by", "prep"),
                ("copyright", "noun"),
                (".", "endp"),
            ],
            0,
            6,
        ),
        (
            vec![
                ("the", "det"),
                ("directions", "noun"),
                ("given", "pastp"),
                ("below", "prep"),
                ("must", "aux"),
                ("be", "aux"),
                ("carefully", "adv"),
                ("followed", "pastp"),
                (".", "endp"),
            ],
            0,
            4,
        ),
    ]
}

/// Generates `n` distinct annotated sentences (the two fixed examples first).
pub fn generate_corpus(n: usize, seed: u64, tagset: &TagSet) -> Result<AnnotatedCorpus> {
    let mut gen = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut seen = std::collections::HashSet::new();
    let mut raw = Vec::new();
    for s in fixed_sentences().into_iter().take(n) {
        seen.insert(s.0.clone());
        raw.push(s);
    }
    while raw.len() < n {
        let s = gen.sentence();
        if seen.insert(s.0.clone()) {
            raw.push(s);
        }
    }
    let mut corpus = AnnotatedCorpus::default();
    corpus
        .meta
        .insert("generator".into(), format!("synthetic grammar, seed {seed}"));
    for (id, (toks, open, close)) in raw.into_iter().enumerate() {
        let tags = toks
            .iter()
            .map(|(_, t)| tagset.require(t))
            .collect::<Result<Vec<_>>>()?;
        let mut words: Vec<String> = toks.iter().map(|(w, _)| w.to_string()).collect();
        if let Some(first) = words.first_mut() {
            *first = capitalize(first);
        }
        corpus.sentences.push(AnnotatedSentence {
            id,
            line: 0,
            words,
            tags,
            open,
            close,
        });
    }
    Ok(corpus)
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
