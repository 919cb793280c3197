//! Bias-corrected Adam.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath::sqrt;

use super::{Gradients, Mlp};

/// First/second moment accumulators shaped like the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub step: u64,
    m_weights: Vec<Vec<f64>>,
    v_weights: Vec<Vec<f64>>,
    m_biases: Vec<Vec<f64>>,
    v_biases: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(net: &Mlp, learning_rate: f64) -> Self {
        let (w, b) = net.params();
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step: 0,
            m_weights: w.iter().map(|l| vec![0.0; l.len()]).collect(),
            v_weights: w.iter().map(|l| vec![0.0; l.len()]).collect(),
            m_biases: b.iter().map(|l| vec![0.0; l.len()]).collect(),
            v_biases: b.iter().map(|l| vec![0.0; l.len()]).collect(),
        }
    }

    /// One optimizer step: updates the network in place and advances the
    /// moment estimates.
    pub fn apply(&mut self, net: &mut Mlp, grads: &Gradients) {
        self.step += 1;
        let step = self.step as i32;
        let bc1 = 1.0 - crate::fmath::powi(self.beta1, step);
        let bc2 = 1.0 - crate::fmath::powi(self.beta2, step);
        let lr = self.learning_rate;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.epsilon);
        let (weights, biases) = net.params_mut();
        for l in 0..weights.len() {
            update_slice(
                &mut weights[l],
                &grads.weights[l],
                &mut self.m_weights[l],
                &mut self.v_weights[l],
                lr,
                b1,
                b2,
                eps,
                bc1,
                bc2,
            );
            update_slice(
                &mut biases[l],
                &grads.biases[l],
                &mut self.m_biases[l],
                &mut self.v_biases[l],
                lr,
                b1,
                b2,
                eps,
                bc1,
                bc2,
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn update_slice(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    b1: f64,
    b2: f64,
    eps: f64,
    bc1: f64,
    bc2: f64,
) {
    assert_eq!(params.len(), grads.len());
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v[i] = b2 * v[i] + (1.0 - b2) * g * g;
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        params[i] -= lr * m_hat / (sqrt(v_hat) + eps);
    }
}
