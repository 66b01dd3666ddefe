//! Two-output network with lazily enabled, asymmetric connectivity and a
//! weight-proportional saturating update.
//!
//! Output `z0` stands for "yes" and `z1` for "no"; Γ is `z0 - z1`. A link from
//! input `i` to an output exists only once `i` has been active in a training
//! string of that output's class. New links start at 1.0. When a string is
//! misclassified, links to the output that should have won are pushed up
//! (δ = +1) and links to the other output are pushed down (δ = −1), over the
//! active inputs only.

use super::{pct, Classifier, Label, Outcome, TrainParams, TrainReport, Trained, TrainingSet};
use crate::error::{Error, Result};
use crate::tuples::SparseBinaryVector;

/// `w · (1 + δw / (1 + (δw)⁴))`.
///
/// For `w > 0` the result stays positive: increments saturate as `w` grows
/// and decrements shrink toward zero.
#[inline]
pub fn hodyne_update(w: f64, delta: f64) -> f64 {
    let dw = delta * w;
    (1.0 + dw / (1.0 + dw.powi(4))) * w
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodyneModel {
    pub w_yes: Vec<f64>,
    pub w_no: Vec<f64>,
    pub enabled_yes: Vec<bool>,
    pub enabled_no: Vec<bool>,
}

impl HodyneModel {
    pub fn new(dim: usize) -> Self {
        HodyneModel {
            w_yes: vec![0.0; dim],
            w_no: vec![0.0; dim],
            enabled_yes: vec![false; dim],
            enabled_no: vec![false; dim],
        }
    }

    /// `(z0, z1)` over enabled links; disabled links contribute 0.
    pub fn outputs(&self, v: &SparseBinaryVector) -> (f64, f64) {
        let mut z0 = 0.0;
        let mut z1 = 0.0;
        for &i in v.active() {
            if self.enabled_yes[i] {
                z0 += self.w_yes[i];
            }
            if self.enabled_no[i] {
                z1 += self.w_no[i];
            }
        }
        (z0, z1)
    }

    /// Indices linked to the "no" output only.
    pub fn no_only_links(&self) -> Vec<usize> {
        (0..self.w_yes.len())
            .filter(|&i| self.enabled_no[i] && !self.enabled_yes[i])
            .collect()
    }

    fn correct(&self, v: &SparseBinaryVector, label: Label) -> bool {
        let (z0, z1) = self.outputs(v);
        match label {
            Label::Yes => z0 > z1,
            Label::No => z1 > z0,
        }
    }
}

impl Classifier for HodyneModel {
    fn dim(&self) -> usize {
        self.w_yes.len()
    }

    fn gamma(&self, v: &SparseBinaryVector) -> f64 {
        let (z0, z1) = self.outputs(v);
        z0 - z1
    }
}

pub fn train_hodyne(data: &TrainingSet, params: &TrainParams) -> Result<Trained<HodyneModel>> {
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    params.validate()?;
    let mut net = HodyneModel::new(data.dim());
    let mut epochs = 0;
    let mut achieved = 0.0;
    let mut outcome = Outcome::MaxEpochs;

    while epochs < params.max_epochs {
        epochs += 1;
        for item in data.items() {
            let v = &item.vector;
            let (weights, enabled) = match item.label {
                Label::Yes => (&mut net.w_yes, &mut net.enabled_yes),
                Label::No => (&mut net.w_no, &mut net.enabled_no),
            };
            for &i in v.active() {
                if !enabled[i] {
                    enabled[i] = true;
                    weights[i] = 1.0;
                }
            }
            if net.correct(v, item.label) {
                continue;
            }
            // Ties count as errors: the desired output's links are raised.
            let (d_yes, d_no) = match item.label {
                Label::Yes => (1.0, -1.0),
                Label::No => (-1.0, 1.0),
            };
            for &i in v.active() {
                if net.enabled_yes[i] {
                    net.w_yes[i] = hodyne_update(net.w_yes[i], d_yes);
                }
                if net.enabled_no[i] {
                    net.w_no[i] = hodyne_update(net.w_no[i], d_no);
                }
            }
        }
        let correct = data
            .items()
            .iter()
            .filter(|it| net.correct(&it.vector, it.label))
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
