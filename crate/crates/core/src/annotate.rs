//! Interactive selection of target strings for raw sentences.

use std::io::{BufRead, Write};

use crate::corpus::{AnnotatedCorpus, AnnotatedSentence};
use crate::error::{Error, Result};
use crate::lexicon::tokenize;
use crate::pipeline::Resources;

#[derive(Clone, Debug, PartialEq)]
pub struct AnnotateOutcome {
    /// Previously annotated sentences followed by the new ones.
    pub corpus: AnnotatedCorpus,
    pub added: usize,
    pub skipped_existing: usize,
    /// Sentences with no surviving candidate.
    pub unparseable: Vec<String>,
    pub aborted: bool,
}

enum Answer {
    Choice(usize),
    Quit,
}

fn ask(input: &mut impl BufRead, output: &mut impl Write, prompt: &str, n: usize) -> Result<Answer> {
    let io = |e| Error::io("<terminal>", e);
    loop {
        write!(output, "{prompt} [1-{n}, q to quit]: ").map_err(io)?;
        output.flush().map_err(io)?;
        let mut line = String::new();
        if input.read_line(&mut line).map_err(io)? == 0 {
            return Ok(Answer::Quit);
        }
        let line = line.trim();
        if line.eq_ignore_ascii_case("q") {
            return Ok(Answer::Quit);
        }
        match line.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => return Ok(Answer::Choice(k - 1)),
            _ => writeln!(output, "please enter a number between 1 and {n}").map_err(io)?,
        }
    }
}

/// Walks through `texts`, skipping sentences already in `existing`. For each
/// new sentence the candidate strings are listed and the user picks the
/// target; words past the processed region with several candidate tags are
/// asked for individually. Quitting (or end of input) keeps everything
/// annotated so far.
pub fn annotate<S: AsRef<str>>(
    texts: &[S],
    existing: AnnotatedCorpus,
    res: &Resources,
    mut input: impl BufRead,
    mut output: impl Write,
) -> Result<AnnotateOutcome> {
    let io = |e| Error::io("<terminal>", e);
    let ts = &res.tagset;
    let mut out = AnnotateOutcome {
        corpus: existing,
        added: 0,
        skipped_existing: 0,
        unparseable: Vec::new(),
        aborted: false,
    };
    'sentences: for text in texts {
        let words = tokenize(text.as_ref());
        if words.is_empty() {
            continue;
        }
        if out.corpus.sentences.iter().any(|s| s.words == words) {
            out.skipped_existing += 1;
            continue;
        }
        let lattice = res.lattice(&words);
        let candidates = res.candidates(&lattice)?;
        writeln!(output, "\n{}", words.join(" ")).map_err(io)?;
        let chosen = match candidates.len() {
            0 => {
                writeln!(output, "no candidate strings survive; skipped").map_err(io)?;
                out.unparseable.push(text.as_ref().to_string());
                continue;
            }
            1 => {
                writeln!(output, "single candidate: {}", candidates[0].render(ts)).map_err(io)?;
                0
            }
            n => {
                for (i, c) in candidates.iter().enumerate() {
                    writeln!(output, "string no. {}\n{}", i + 1, c.render(ts)).map_err(io)?;
                }
                match ask(&mut input, &mut output, "target string", n)? {
                    Answer::Choice(k) => k,
                    Answer::Quit => {
                        out.aborted = true;
                        break 'sentences;
                    }
                }
            }
        };
        let c = &candidates[chosen];
        let mut tags = c.word_tags();
        for (word, slot) in words.iter().zip(&lattice.slots).skip(c.covered_words) {
            if slot.len() == 1 {
                tags.push(slot[0]);
                continue;
            }
            let options: Vec<String> = slot
                .iter()
                .enumerate()
                .map(|(k, &t)| format!("{}={}", k + 1, ts.name(t)))
                .collect();
            let prompt = format!("tag for `{}` ({})", word, options.join(" "));
            match ask(&mut input, &mut output, &prompt, slot.len())? {
                Answer::Choice(k) => tags.push(slot[k]),
                Answer::Quit => {
                    out.aborted = true;
                    break 'sentences;
                }
            }
        }
        let id = out.corpus.sentences.len();
        out.corpus.sentences.push(AnnotatedSentence {
            id,
            line: 0,
            words,
            tags,
            open: c.open_word,
            close: c.close_word,
        });
        out.added += 1;
    }
    Ok(out)
}
