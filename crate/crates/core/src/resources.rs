//! Configuration files and the synthetic corpus bundled with the crate.

pub const DEFAULT_TAGSET: &str = include_str!("../data/tagset.txt");
pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");
pub const DEFAULT_PROHIBITIONS: &str = include_str!("../data/prohibitions.txt");
pub const SYNTHETIC_CORPUS: &str = include_str!("../data/synthetic_corpus.txt");
