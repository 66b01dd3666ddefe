//! `key = value` run configuration. Relative paths are resolved against the
//! directory of the config file; unset resources fall back to the bundled ones.

use std::path::{Path, PathBuf};

use crate::candidates::{GenLimits, ProhibitionTable};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::pipeline::{Resources, TrainConfig};
use crate::tagset::{strip_comment, TagSet};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub tagset: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub prohibitions: Option<PathBuf>,
    /// Unknown-word tag names.
    pub fallback: Option<Vec<String>>,
    pub fold_case: Option<bool>,
    pub limits: GenLimits,
    pub train: TrainConfig,
}

/// Every recognised key.
pub const KEYS: &[&str] = &[
    "tagset",
    "lexicon",
    "prohibitions",
    "fallback",
    "fold_case",
    "max_presubject",
    "max_subject",
    "truncate_after",
    "max_candidates",
    "mode",
    "model",
    "threshold",
    "max_epochs",
    "learning_rate",
    "seed",
    "theta",
    "divergence_patience",
    "smoothing",
];

fn num<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("bad value `{value}` for `{key}`"))
}

impl Config {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::format("config", i + 1, "expected `key = value`"))?;
            cfg.apply(k.trim(), v.trim(), Some(base_dir))
                .map_err(|msg| Error::format("config", i + 1, msg))?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::parse(&text, base)
    }

    /// Applies a `key=value` override; paths are taken as given.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::InvalidParam(format!("override `{assignment}` is not key=value")))?;
        self.apply(k.trim(), v.trim(), None).map_err(Error::InvalidParam)
    }

    fn apply(&mut self, key: &str, value: &str, base: Option<&Path>) -> std::result::Result<(), String> {
        let path = |v: &str| match base {
            Some(b) if Path::new(v).is_relative() => b.join(v),
            _ => PathBuf::from(v),
        };
        let p = &mut self.train.params;
        match key {
            "tagset" => self.tagset = Some(path(value)),
            "lexicon" => self.lexicon = Some(path(value)),
            "prohibitions" => self.prohibitions = Some(path(value)),
            "fallback" => {
                self.fallback = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect(),
                )
            }
            "fold_case" => self.fold_case = Some(num(key, value)?),
            "max_presubject" => self.limits.max_presubject = num(key, value)?,
            "max_subject" => self.limits.max_subject = num(key, value)?,
            "truncate_after" => self.limits.truncate_after = num(key, value)?,
            "max_candidates" => self.limits.max_candidates = num(key, value)?,
            "mode" => self.train.mode = value.parse().map_err(|e: Error| e.to_string())?,
            "model" => self.train.kind = value.parse().map_err(|e: Error| e.to_string())?,
            "threshold" => p.threshold_pct = num(key, value)?,
            "max_epochs" => p.max_epochs = num(key, value)?,
            "learning_rate" => p.learning_rate = num(key, value)?,
            "seed" => p.seed = num(key, value)?,
            "theta" => p.theta = num(key, value)?,
            "divergence_patience" => p.divergence_patience = num(key, value)?,
            "smoothing" => self.train.smoothing = num(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Loads the configured resources.
    pub fn resources(&self) -> Result<Resources> {
        self.limits.validate()?;
        self.train.params.validate()?;
        let tagset = match &self.tagset {
            Some(p) => TagSet::load(p)?,
            None => TagSet::default_set(),
        };
        let mut lexicon = match &self.lexicon {
            Some(p) => Lexicon::load(p, &tagset)?,
            None => Lexicon::default_lexicon(&tagset)?,
        };
        if let Some(names) = &self.fallback {
            let ids = names.iter().map(|n| tagset.require(n)).collect::<Result<Vec<_>>>()?;
            lexicon.set_fallback(ids)?;
        }
        if let Some(fold) = self.fold_case {
            lexicon.set_fold_case(fold);
        }
        let table = match &self.prohibitions {
            Some(p) => ProhibitionTable::load(p, &tagset)?,
            None => ProhibitionTable::default_table(&tagset)?,
        };
        Ok(Resources {
            tagset,
            lexicon,
            table,
            limits: self.limits,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::ModelKind;
    use crate::tuples::TupleMode;

    #[test]
    fn parses_every_key() {
        let text = "\
# run settings
tagset = tags.txt
lexicon = /abs/lex.txt
prohibitions = rules.txt
fallback = noun, verb
fold_case = false
max_presubject = 4
max_subject = 6
truncate_after = 2
max_candidates = 500
mode = pairs
model = lms
threshold = 97.5
max_epochs = 20
learning_rate = 0.5
seed = 42
theta = 0.4
divergence_patience = 7
smoothing = 0.5
";
        let cfg = Config::parse(text, Path::new("/base")).unwrap();
        assert_eq!(cfg.tagset, Some(PathBuf::from("/base/tags.txt")));
        assert_eq!(cfg.lexicon, Some(PathBuf::from("/abs/lex.txt")));
        assert_eq!(cfg.fallback, Some(vec!["noun".into(), "verb".into()]));
        assert_eq!(cfg.fold_case, Some(false));
        assert_eq!(
            cfg.limits,
            GenLimits {
                max_presubject: 4,
                max_subject: 6,
                truncate_after: 2,
                max_candidates: 500
            }
        );
        assert_eq!(cfg.train.mode, TupleMode::Pairs);
        assert_eq!(cfg.train.kind, ModelKind::Lms);
        let p = &cfg.train.params;
        assert_eq!((p.threshold_pct, p.max_epochs, p.seed), (97.5, 20, 42));
        assert_eq!((p.learning_rate, p.theta, p.divergence_patience), (0.5, 0.4, 7));
        assert_eq!(cfg.train.smoothing, 0.5);
        assert_eq!(text.lines().filter(|l| l.contains('=')).count(), KEYS.len());
    }

    #[test]
    fn overrides_and_errors() {
        let mut cfg = Config::default();
        cfg.set("threshold=100").unwrap();
        assert_eq!(cfg.train.params.threshold_pct, 100.0);
        assert!(cfg.set("colour=red").is_err());
        assert!(cfg.set("seed").is_err());
        assert!(cfg.set("max_epochs=-1").is_err());
        match Config::parse("seed = 1\nbogus\n", Path::new(".")) {
            Err(Error::Format { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn default_resources_load() {
        let res = Config::default().resources().unwrap();
        assert_eq!(res.tagset.m(), 22);
        assert!(!res.table.is_empty());
    }
}
