//! Second-stage classifiers over tuple-encoded strings.
//!
//! All models map a [`SparseBinaryVector`] to the grammaticality measure Γ:
//! positive for strings judged correct, negative otherwise. Training is
//! decoupled from the tuple transform, which has no trainable parameters.

mod bayes;
mod hodyne;
mod lms;
mod model_file;
mod perceptron;

pub use bayes::{train_bayes, BayesModel};
pub use hodyne::{hodyne_update, train_hodyne, HodyneModel};
pub use lms::{bipolar, train_lms, LmsModel};
pub use model_file::SavedModel;
pub use perceptron::{train_perceptron, PerceptronModel};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tuples::SparseBinaryVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Yes,
    No,
}

impl Label {
    /// +1 for `Yes`, −1 for `No`.
    pub fn sign(self) -> f64 {
        match self {
            Label::Yes => 1.0,
            Label::No => -1.0,
        }
    }

    /// Whether a score lies strictly on this label's side of zero.
    pub fn agrees(self, gamma: f64) -> bool {
        match self {
            Label::Yes => gamma > 0.0,
            Label::No => gamma < 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingItem {
    pub vector: SparseBinaryVector,
    pub label: Label,
    pub sentence_id: usize,
}

/// All strings generated from a training text, taken as a whole.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    items: Vec<TrainingItem>,
}

impl TrainingSet {
    /// Validates that every vector has dimension `dim` and that every
    /// sentence contributes exactly one `Yes` item.
    pub fn new(dim: usize, items: Vec<TrainingItem>) -> Result<Self> {
        let mut yes: BTreeMap<usize, usize> = BTreeMap::new();
        for item in &items {
            if item.vector.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: item.vector.dim(),
                });
            }
            let c = yes.entry(item.sentence_id).or_default();
            if item.label == Label::Yes {
                *c += 1;
            }
        }
        if let Some((id, n)) = yes.iter().find(|(_, &n)| n != 1) {
            return Err(Error::InvalidParam(format!(
                "sentence {id} has {n} `yes` strings; exactly one is required"
            )));
        }
        Ok(TrainingSet { dim, items })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn items(&self) -> &[TrainingItem] {
        &self.items
    }

    /// Number of patterns.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.items.iter().filter(|i| i.label == label).count()
    }

    /// Per-index number of strings of each class containing it: `(yes, no)`.
    pub fn occurrence_counts(&self) -> (Vec<u32>, Vec<u32>) {
        let mut yes = vec![0u32; self.dim];
        let mut no = vec![0u32; self.dim];
        for item in &self.items {
            let target = match item.label {
                Label::Yes => &mut yes,
                Label::No => &mut no,
            };
            for &i in item.vector.active() {
                target[i] += 1;
            }
        }
        (yes, no)
    }
}

/// Training hyperparameters shared by the three networks.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainParams {
    /// Stop once this percentage of training strings is classified correctly.
    pub threshold_pct: f64,
    pub max_epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// LMS class target magnitude.
    pub theta: f64,
    /// LMS aborts after this many consecutive epochs of rising error.
    pub divergence_patience: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            threshold_pct: 99.0,
            max_epochs: 1000,
            learning_rate: 0.1,
            seed: 1,
            theta: 0.5,
            divergence_patience: 50,
        }
    }
}

impl TrainParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_pct > 0.0 && self.threshold_pct <= 100.0) {
            return Err(Error::InvalidParam("threshold_pct must be in (0, 100]".into()));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidParam("max_epochs must be at least 1".into()));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidParam("learning_rate must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    /// Ran out of epochs below the threshold.
    MaxEpochs,
    /// LMS error rose for `divergence_patience` consecutive epochs.
    Diverged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    pub epochs: usize,
    /// Percentage of training strings correct under the final weights.
    pub train_pct: f64,
    pub outcome: Outcome,
}

impl TrainReport {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }
}

impl fmt::Display for TrainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.outcome {
            Outcome::Converged => "converged",
            Outcome::MaxEpochs => "did not converge (epoch cap reached)",
            Outcome::Diverged => "diverged",
        };
        write!(
            f,
            "{status} after {} epochs, {:.2}% of training strings correct",
            self.epochs, self.train_pct
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trained<M> {
    pub model: M,
    pub report: TrainReport,
}

/// Anything that produces Γ for an encoded string.
pub trait Classifier {
    fn dim(&self) -> usize;

    /// Γ without the dimension check.
    fn gamma(&self, v: &SparseBinaryVector) -> f64;

    /// Additive per-sentence term for a sentence with `n` candidates.
    fn sentence_prior(&self, _n: usize) -> f64 {
        0.0
    }

    fn score(&self, v: &SparseBinaryVector) -> Result<f64> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        Ok(self.gamma(v))
    }

    /// Γ of one of `n` candidates generated for the same sentence.
    fn score_in_sentence(&self, v: &SparseBinaryVector, n: usize) -> Result<f64> {
        Ok(self.score(v)? + self.sentence_prior(n))
    }
}

/// Percentage of items whose Γ lies on the side of zero given by their label.
pub fn sign_accuracy<C: Classifier + ?Sized>(model: &C, data: &TrainingSet) -> f64 {
    pct(
        data.items()
            .iter()
            .filter(|i| i.label.agrees(model.gamma(&i.vector)))
            .count(),
        data.len(),
    )
}

pub(crate) fn pct(correct: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * correct as f64 / total as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Perceptron,
    Hodyne,
    Lms,
    Bayes,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Perceptron => "perceptron",
            ModelKind::Hodyne => "hodyne",
            ModelKind::Lms => "lms",
            ModelKind::Bayes => "bayes",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perceptron" => Ok(ModelKind::Perceptron),
            "hodyne" => Ok(ModelKind::Hodyne),
            "lms" => Ok(ModelKind::Lms),
            "bayes" => Ok(ModelKind::Bayes),
            _ => Err(Error::InvalidParam(format!("unknown model kind `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Perceptron(PerceptronModel),
    Hodyne(HodyneModel),
    Lms(LmsModel),
    Bayes(BayesModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Perceptron(_) => ModelKind::Perceptron,
            Model::Hodyne(_) => ModelKind::Hodyne,
            Model::Lms(_) => ModelKind::Lms,
            Model::Bayes(_) => ModelKind::Bayes,
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            Model::Perceptron(m) => m,
            Model::Hodyne(m) => m,
            Model::Lms(m) => m,
            Model::Bayes(m) => m,
        }
    }
}

impl Classifier for Model {
    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn gamma(&self, v: &SparseBinaryVector) -> f64 {
        self.inner().gamma(v)
    }

    fn sentence_prior(&self, n: usize) -> f64 {
        self.inner().sentence_prior(n)
    }
}

/// Trains the requested kind. Bayes ignores `params` apart from using
/// `smoothing` (the Perceptron/LMS learning rate has no meaning there).
pub fn train(kind: ModelKind, data: &TrainingSet, params: &TrainParams, smoothing: f64) -> Result<Trained<Model>> {
    Ok(match kind {
        ModelKind::Perceptron => {
            let t = train_perceptron(data, params)?;
            Trained {
                model: Model::Perceptron(t.model),
                report: t.report,
            }
        }
        ModelKind::Hodyne => {
            let t = train_hodyne(data, params)?;
            Trained {
                model: Model::Hodyne(t.model),
                report: t.report,
            }
        }
        ModelKind::Lms => {
            let t = train_lms(data, params)?;
            Trained {
                model: Model::Lms(t.model),
                report: t.report,
            }
        }
        ModelKind::Bayes => {
            let model = train_bayes(data, smoothing)?;
            let train_pct = sign_accuracy(&model, data);
            Trained {
                model: Model::Bayes(model),
                report: TrainReport {
                    epochs: 1,
                    train_pct,
                    outcome: Outcome::Converged,
                },
            }
        }
    })
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    pub fn item(dim: usize, bits: &[usize], label: Label, sentence_id: usize) -> TrainingItem {
        TrainingItem {
            vector: SparseBinaryVector::from_indices(dim, bits.to_vec()),
            label,
            sentence_id,
        }
    }
}
