//! Subject-boundary detection for declarative sentences.
//!
//! Words are mapped to sets of candidate part-of-speech tags, every placement
//! of the subject hypertags `[` and `]` over every tag choice is enumerated
//! and pruned by a table of prohibited tag pairs and triples, and each
//! surviving string is encoded as the set of adjacent tag pairs and triples
//! it contains. A trained single-layer network scores each string and the
//! highest score marks the subject.
//!
//! ```
//! use subjparse::{generate_candidates, GenLimits, Lexicon, ProhibitionTable, TagSet, TupleIndex, TupleMode};
//!
//! let tags = TagSet::default_set();
//! let lexicon = Lexicon::default_lexicon(&tags).unwrap();
//! let table = ProhibitionTable::default_table(&tags).unwrap();
//! let lattice = lexicon.tag_sentence(&["It", "rotates", "."]);
//! let strings = generate_candidates(&lattice, &GenLimits::default(), &table, &tags).unwrap();
//! assert_eq!(strings[0].render(&tags), "strt [ pron ] verb endp");
//!
//! let index = TupleIndex::new(TupleMode::Both, tags.m());
//! assert_eq!(index.dim(), 11132);
//! let v = index.phi(&strings[0].tags).unwrap();
//! assert_eq!(v.count(), 9);
//! ```

pub mod annotate;
pub mod candidates;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod nets;
pub mod pipeline;
pub mod resources;
pub mod stats;
pub mod synth;
pub mod tagset;
pub mod tuples;

pub use candidates::{generate_candidates, CandidateString, GenLimits, ProhibitionTable};
pub use config::Config;
pub use corpus::{AnnotatedCorpus, AnnotatedSentence, SplitSpec};
pub use error::{Error, Result};
pub use eval::{evaluate, Metrics, SentenceCase};
pub use lexicon::{tokenize, Lexicon, TagLattice};
pub use nets::{Classifier, Label, Model, ModelKind, SavedModel, TrainParams, TrainReport, TrainingSet};
pub use pipeline::{Resources, TrainConfig};
pub use tagset::{TagId, TagSet};
pub use tuples::{SparseBinaryVector, Tuple, TupleIndex, TupleMode};
