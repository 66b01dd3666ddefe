//! Gradient-descent network with a bipolar output and the threshold
//! interpretation of error: a string whose output has already passed its
//! class threshold (`+θ` for yes, `−θ` for no) counts as correct and produces
//! no error and no update. Overshoot is never penalized. Below the threshold
//! the error is measured against the class extreme `±1`.

use super::{pct, Classifier, Label, Outcome, TrainParams, TrainReport, Trained, TrainingSet};
use crate::error::{Error, Result};
use crate::tuples::SparseBinaryVector;

/// Bipolar logistic squashing `2 / (1 + e^−x) − 1`, with range (−1, 1).
#[inline]
pub fn bipolar(x: f64) -> f64 {
    2.0 / (1.0 + (-x).exp()) - 1.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmsModel {
    pub w: Vec<f64>,
    pub bias: f64,
    pub theta: f64,
}

impl LmsModel {
    pub fn new(dim: usize, theta: f64) -> Self {
        LmsModel {
            w: vec![0.0; dim],
            bias: 0.0,
            theta,
        }
    }

    pub fn net_input(&self, v: &SparseBinaryVector) -> f64 {
        v.dot(&self.w) + self.bias
    }

    /// One gradient step on a single string. Returns the recorded squared
    /// error, which is zero (and no weight changes) once the output has
    /// passed its class target.
    pub fn step(&mut self, v: &SparseBinaryVector, label: Label, learning_rate: f64) -> f64 {
        let o = bipolar(self.net_input(v));
        if self.passed(o, label) {
            return 0.0;
        }
        let err = label.sign() - o;
        // d/dx bipolar(x) = (1 − o²) / 2
        let delta = learning_rate * err * 0.5 * (1.0 - o * o);
        for &i in v.active() {
            self.w[i] += delta;
        }
        self.bias += delta;
        0.5 * err * err
    }

    fn passed(&self, o: f64, label: Label) -> bool {
        match label {
            Label::Yes => o >= self.theta,
            Label::No => o <= -self.theta,
        }
    }

    /// Whether the output has passed the class threshold in the right direction.
    pub fn passes(&self, v: &SparseBinaryVector, label: Label) -> bool {
        self.passed(bipolar(self.net_input(v)), label)
    }
}

impl Classifier for LmsModel {
    fn dim(&self) -> usize {
        self.w.len()
    }

    fn gamma(&self, v: &SparseBinaryVector) -> f64 {
        bipolar(self.net_input(v))
    }
}

pub fn train_lms(data: &TrainingSet, params: &TrainParams) -> Result<Trained<LmsModel>> {
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    params.validate()?;
    if !(params.theta > 0.0 && params.theta < 1.0) {
        return Err(Error::InvalidParam("theta must lie in (0, 1)".into()));
    }
    let mut net = LmsModel::new(data.dim(), params.theta);
    let mut epochs = 0;
    let mut achieved = 0.0;
    let mut outcome = Outcome::MaxEpochs;
    let mut last_error = f64::INFINITY;
    let mut rising = 0;

    while epochs < params.max_epochs {
        epochs += 1;
        let mut epoch_error = 0.0;
        for item in data.items() {
            epoch_error += net.step(&item.vector, item.label, params.learning_rate);
        }

        let correct = data
            .items()
            .iter()
            .filter(|it| net.passes(&it.vector, it.label))
            .count();
        achieved = pct(correct, data.len());
        if achieved >= params.threshold_pct {
            outcome = Outcome::Converged;
            break;
        }
        if epoch_error > last_error {
            rising += 1;
            if rising >= params.divergence_patience {
                outcome = Outcome::Diverged;
                break;
            }
        } else {
            rising = 0;
        }
        last_error = epoch_error;
    }

    Ok(Trained {
        model: net,
        report: TrainReport {
            epochs,
            train_pct: achieved,
            outcome,
        },
    })
}
