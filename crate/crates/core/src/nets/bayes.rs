use super::{Classifier, Label, TrainingSet};
use crate::error::{Error, Result};
use crate::tuples::SparseBinaryVector;

/// Naive Bayes baseline over active tuples.
///
/// `P(f | c) = (count_c(f) + α) / (N_c + 2α)` where `count_c(f)` is the number of
/// class-`c` strings containing `f` and `N_c` the number of class-`c` strings.
/// Γ is the log posterior odds; within a sentence of `n` candidates the
/// prior odds are `1 : (n − 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesModel {
    pub count_yes: Vec<u32>,
    pub count_no: Vec<u32>,
    pub n_yes: u32,
    pub n_no: u32,
    pub smoothing: f64,
}

impl BayesModel {
    /// `ln P(f | yes) − ln P(f | no)` for one feature.
    pub fn log_ratio(&self, f: usize) -> f64 {
        let a = self.smoothing;
        let py = (self.count_yes[f] as f64 + a) / (self.n_yes as f64 + 2.0 * a);
        let pn = (self.count_no[f] as f64 + a) / (self.n_no as f64 + 2.0 * a);
        py.ln() - pn.ln()
    }
}

impl Classifier for BayesModel {
    fn dim(&self) -> usize {
        self.count_yes.len()
    }

    /// Log likelihood ratio of the active features (equal priors).
    fn gamma(&self, v: &SparseBinaryVector) -> f64 {
        v.active().iter().map(|&f| self.log_ratio(f)).sum()
    }

    /// `ln(1 / (n − 1))`; a lone candidate is certain.
    fn sentence_prior(&self, n: usize) -> f64 {
        if n <= 1 {
            f64::INFINITY
        } else {
            -((n - 1) as f64).ln()
        }
    }
}

pub fn train_bayes(data: &TrainingSet, smoothing: f64) -> Result<BayesModel> {
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if smoothing.is_nan() || smoothing <= 0.0 {
        return Err(Error::InvalidParam("smoothing must be positive".into()));
    }
    let (count_yes, count_no) = data.occurrence_counts();
    Ok(BayesModel {
        count_yes,
        count_no,
        n_yes: data.count(Label::Yes) as u32,
        n_no: data.count(Label::No) as u32,
        smoothing,
    })
}
