use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{pct, Classifier, Outcome, TrainParams, TrainReport, Trained, TrainingSet};
use crate::error::{Error, Result};
use crate::tuples::SparseBinaryVector;

/// Initial weight magnitude bound for guided initialization.
const INIT_BOUND: f64 = 0.3;

/// Single-output perceptron; Γ = w·y + bias.
#[derive(Clone, Debug, PartialEq)]
pub struct PerceptronModel {
    pub w: Vec<f64>,
    pub bias: f64,
    /// Inputs seen during training. All other weights are exactly 0.0.
    pub visited: Vec<bool>,
}

impl PerceptronModel {
    pub fn new(dim: usize) -> Self {
        PerceptronModel {
            w: vec![0.0; dim],
            bias: 0.0,
            visited: vec![false; dim],
        }
    }
}

impl Classifier for PerceptronModel {
    fn dim(&self) -> usize {
        self.w.len()
    }

    fn gamma(&self, v: &SparseBinaryVector) -> f64 {
        v.dot(&self.w) + self.bias
    }
}

/// Classic mistake-driven training.
///
/// A previously unseen input gets a random initial weight in (0, 0.3] if it
/// first shows up in a "yes" string and in [−0.3, 0) for a "no" string. On a
/// misclassification every active weight, and the bias, moves by
/// `±learning_rate / |active|` (the L1-normalized input).
pub fn train_perceptron(data: &TrainingSet, params: &TrainParams) -> Result<Trained<PerceptronModel>> {
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut net = PerceptronModel::new(data.dim());
    let mut epochs = 0;
    let mut achieved = 0.0;
    let mut outcome = Outcome::MaxEpochs;

    while epochs < params.max_epochs {
        epochs += 1;
        for item in data.items() {
            let v = &item.vector;
            for &i in v.active() {
                if !net.visited[i] {
                    net.visited[i] = true;
                    // gen::<f64>() is in [0, 1), so the magnitude is in (0, INIT_BOUND].
                    let magnitude = INIT_BOUND * (1.0 - rng.gen::<f64>());
                    net.w[i] = item.label.sign() * magnitude;
                }
            }
            if item.label.agrees(net.gamma(v)) || v.count() == 0 {
                continue;
            }
            let step = params.learning_rate * item.label.sign() / v.count() as f64;
            for &i in v.active() {
                net.w[i] += step;
            }
            net.bias += step;
        }
        let correct = data
            .items()
            .iter()
            .filter(|it| it.label.agrees(net.gamma(&it.vector)))
            .count();
        achieved = pct(correct, data.len());
        if achieved >= params.threshold_pct {
            outcome = Outcome::Converged;
            break;
        }
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
