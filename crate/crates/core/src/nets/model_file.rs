//! Versioned plain-text model files.
//!
//! ```text
//! subjparse-model 1
//! kind hodyne
//! mode both
//! m 22
//! dim 11132
//! meta threshold_pct 99
//! section yes 2
//! 0<TAB>1.5
//! 17<TAB>0.25
//! section no 1
//! 17<TAB>1.25
//! end
//! ```
//!
//! Section rows are `index<TAB>weight`. Weights are written with Rust's shortest round-trip float formatting, so
//! loading a saved file reproduces every weight bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{BayesModel, Classifier, HodyneModel, LmsModel, Model, ModelKind, PerceptronModel};
use crate::error::{Error, Result};
use crate::tuples::{TupleIndex, TupleMode};

const MAGIC: &str = "subjparse-model";
const VERSION: u32 = 1;

/// A model together with the tuple encoding it was trained on.
#[derive(Clone, Debug, PartialEq)]
pub struct SavedModel {
    pub index: TupleIndex,
    pub model: Model,
    /// Free-form provenance (training parameters, file names).
    pub meta: BTreeMap<String, String>,
}

impl SavedModel {
    pub fn new(index: TupleIndex, model: Model) -> Result<Self> {
        if index.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: index.dim(),
                got: model.dim(),
            });
        }
        Ok(SavedModel {
            index,
            model,
            meta: BTreeMap::new(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC} {VERSION}");
        let _ = writeln!(out, "kind {}", self.model.kind());
        let _ = writeln!(out, "mode {}", self.index.mode());
        let _ = writeln!(out, "m {}", self.index.m());
        let _ = writeln!(out, "dim {}", self.index.dim());
        for (k, v) in &self.meta {
            let _ = writeln!(out, "meta {k} {v}");
        }
        match &self.model {
            Model::Perceptron(p) => {
                let _ = writeln!(out, "bias {}", p.bias);
                let rows: Vec<usize> = (0..p.w.len()).filter(|&i| p.visited[i]).collect();
                section(&mut out, "weights", rows.iter().map(|&i| format!("{i}\t{}", p.w[i])));
            }
            Model::Lms(l) => {
                let _ = writeln!(out, "bias {}", l.bias);
                let _ = writeln!(out, "theta {}", l.theta);
                let rows: Vec<usize> = (0..l.w.len()).filter(|&i| l.w[i] != 0.0).collect();
                section(&mut out, "weights", rows.iter().map(|&i| format!("{i}\t{}", l.w[i])));
            }
            Model::Hodyne(h) => {
                let yes: Vec<usize> = (0..h.w_yes.len()).filter(|&i| h.enabled_yes[i]).collect();
                let no: Vec<usize> = (0..h.w_no.len()).filter(|&i| h.enabled_no[i]).collect();
                section(&mut out, "yes", yes.iter().map(|&i| format!("{i}\t{}", h.w_yes[i])));
                section(&mut out, "no", no.iter().map(|&i| format!("{i}\t{}", h.w_no[i])));
            }
            Model::Bayes(b) => {
                let _ = writeln!(out, "smoothing {}", b.smoothing);
                let _ = writeln!(out, "n_yes {}", b.n_yes);
                let _ = writeln!(out, "n_no {}", b.n_no);
                let rows: Vec<usize> = (0..b.count_yes.len())
                    .filter(|&i| b.count_yes[i] > 0 || b.count_no[i] > 0)
                    .collect();
                section(
                    &mut out,
                    "counts",
                    rows.iter()
                        .map(|&i| format!("{i}\t{}\t{}", b.count_yes[i], b.count_no[i])),
                );
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let err = |line: usize, msg: &str| Error::format("model", line, msg.to_string());

        let (ln, first) = lines.next().ok_or_else(|| err(1, "empty model file"))?;
        match first.split_once(' ') {
            Some((MAGIC, v)) if v.trim().parse::<u32>().ok() == Some(VERSION) => {}
            Some((MAGIC, v)) => return Err(err(ln, &format!("unsupported format version `{v}`"))),
            _ => return Err(err(ln, "not a model file")),
        }

        let mut header: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut meta = BTreeMap::new();
        let mut sections: BTreeMap<String, Vec<(usize, Vec<String>)>> = BTreeMap::new();
        let mut ended = false;
        while let Some((ln, line)) = lines.next() {
            let line = line.trim_end();
            if line == "end" {
                ended = true;
                break;
            }
            let (key, rest) = line.split_once(' ').ok_or_else(|| err(ln, "expected `key value`"))?;
            match key {
                "meta" => {
                    let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                    meta.insert(k.to_string(), v.to_string());
                }
                "section" => {
                    let (name, count) = rest
                        .split_once(' ')
                        .ok_or_else(|| err(ln, "expected `section name count`"))?;
                    let count: usize = count.parse().map_err(|_| err(ln, "bad section length"))?;
                    let mut rows = Vec::with_capacity(count);
                    for _ in 0..count {
                        let (ln, row) = lines.next().ok_or_else(|| err(ln, "truncated section"))?;
                        rows.push((ln, row.split('\t').map(str::to_string).collect()));
                    }
                    sections.insert(name.to_string(), rows);
                }
                _ => {
                    header.insert(key.to_string(), (ln, rest.to_string()));
                }
            }
        }
        if !ended {
            return Err(err(text.lines().count(), "missing `end`"));
        }

        let get = |key: &str| -> Result<(usize, &str)> {
            header
                .get(key)
                .map(|(l, v)| (*l, v.as_str()))
                .ok_or_else(|| err(0, &format!("missing `{key}`")))
        };
        fn num<T: std::str::FromStr>(v: (usize, &str), what: &str) -> Result<T> {
            v.1.parse()
                .map_err(|_| Error::format("model", v.0, format!("bad {what} `{}`", v.1)))
        }

        let kind: ModelKind = get("kind")?.1.parse()?;
        let mode: TupleMode = get("mode")?.1.parse()?;
        let m: usize = num(get("m")?, "m")?;
        let index = TupleIndex::new(mode, m);
        let dim: usize = num(get("dim")?, "dim")?;
        if dim != index.dim() {
            return Err(err(get("dim")?.0, "dim does not match mode and m"));
        }

        let take = |name: &str| sections.get(name).cloned().unwrap_or_default();
        let weights = |name: &str| -> Result<Vec<(usize, f64)>> {
            take(name)
                .into_iter()
                .map(|(ln, row)| {
                    if row.len() != 2 {
                        return Err(err(ln, "expected `index<TAB>weight`"));
                    }
                    let i: usize = num((ln, &row[0]), "index")?;
                    if i >= dim {
                        return Err(err(ln, "index out of range"));
                    }
                    Ok((i, num((ln, &row[1]), "weight")?))
                })
                .collect()
        };

        let model = match kind {
            ModelKind::Perceptron => {
                let mut p = PerceptronModel::new(dim);
                p.bias = num(get("bias")?, "bias")?;
                for (i, w) in weights("weights")? {
                    p.w[i] = w;
                    p.visited[i] = true;
                }
                Model::Perceptron(p)
            }
            ModelKind::Lms => {
                let mut l = LmsModel::new(dim, num(get("theta")?, "theta")?);
                l.bias = num(get("bias")?, "bias")?;
                for (i, w) in weights("weights")? {
                    l.w[i] = w;
                }
                Model::Lms(l)
            }
            ModelKind::Hodyne => {
                let mut h = HodyneModel::new(dim);
                for (i, w) in weights("yes")? {
                    h.w_yes[i] = w;
                    h.enabled_yes[i] = true;
                }
                for (i, w) in weights("no")? {
                    h.w_no[i] = w;
                    h.enabled_no[i] = true;
                }
                Model::Hodyne(h)
            }
            ModelKind::Bayes => {
                let mut b = BayesModel {
                    count_yes: vec![0; dim],
                    count_no: vec![0; dim],
                    n_yes: num(get("n_yes")?, "n_yes")?,
                    n_no: num(get("n_no")?, "n_no")?,
                    smoothing: num(get("smoothing")?, "smoothing")?,
                };
                for (ln, row) in take("counts") {
                    if row.len() != 3 {
                        return Err(err(ln, "expected `index<TAB>yes<TAB>no`"));
                    }
                    let i: usize = num((ln, &row[0]), "index")?;
                    if i >= dim {
                        return Err(err(ln, "index out of range"));
                    }
                    b.count_yes[i] = num((ln, &row[1]), "count")?;
                    b.count_no[i] = num((ln, &row[2]), "count")?;
                }
                Model::Bayes(b)
            }
        };
        Ok(SavedModel { index, model, meta })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SavedModel::parse(&text)
    }
}

fn section(out: &mut String, name: &str, rows: impl ExactSizeIterator<Item = String>) {
    let _ = writeln!(out, "section {name} {}", rows.len());
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
}
