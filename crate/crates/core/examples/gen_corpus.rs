//! Regenerates the bundled synthetic corpus.
//!
//! `cargo run -p subjparse --example gen_corpus > crates/core/data/synthetic_corpus.txt`

use subjparse::synth::{generate_corpus, BUNDLED_SEED, BUNDLED_SIZE};
use subjparse::TagSet;

fn main() -> subjparse::Result<()> {
    let tags = TagSet::default_set();
    let corpus = generate_corpus(BUNDLED_SIZE, BUNDLED_SEED, &tags)?;
    println!("# Synthetic technical-manual sentences, one per line, word/TAG with the subject in [ ]");
    print!("{}", corpus.to_text(&tags));
    Ok(())
}
