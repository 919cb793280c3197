//! Minimal dense-network substrate: deterministic initialization, batched
//! forward, exact reverse-mode gradients, Adam, soft target updates and a
//! self-describing binary parameter format.
//!
//! Networks are ReLU-hidden multilayer perceptrons with either an identity
//! output or a tanh output scaled to a symmetric bound. Sizes here are
//! small (six-input actors, eight-input critics, 256-wide hidden layers),
//! so weights live in flat `Vec<f64>`s and the heavy lifting is done by the
//! kernels in [`linalg`].

pub mod adam;
pub mod codec;
pub mod linalg;

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::fmath::{sqrt, tanh};
use linalg::{add_bias_rows, col_sums_acc, gemm_acc, transpose, Lhs};

pub use adam::AdamState;
pub use codec::CodecError;
pub use linalg::{force_portable_kernels, kernel_mode};

/// Output nonlinearity of the last layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutputActivation {
    Identity,
    /// `bound · tanh(z)`: squashes into (−bound, bound).
    TanhScaled(f64),
}

/// Feed-forward network with ReLU hidden layers.
///
/// Layer `l` maps `sizes[l]` inputs to `sizes[l + 1]` outputs; weights are
/// stored input-major (`w[input * out + output]`) which is the layout the
/// forward kernel wants.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    out_act: OutputActivation,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Per-parameter partials, shaped like the network they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(net: &Mlp) -> Self {
        Self {
            weights: net.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: net.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for w in &mut self.weights {
            for v in w {
                *v *= factor;
            }
        }
        for b in &mut self.biases {
            for v in b {
                *v *= factor;
            }
        }
    }
}

/// Post-activation values of every layer for one batched forward pass;
/// feeds the backward pass.
pub struct ForwardCache {
    batch: usize,
    /// `activations[0]` is the input, `activations[L]` the output.
    activations: Vec<Vec<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("cache always has layers")
    }

    /// Activation rows of one layer; 0 is the input, the last index the
    /// output.
    pub fn layer_activation(&self, layer: usize) -> &[f64] {
        &self.activations[layer]
    }
}

impl Mlp {
    /// Uniform init in ±1/√fan_in per layer; the final layer is drawn from
    /// ±3e-3 so fresh actors start near zero output and fresh critics near
    /// zero value.
    pub fn new<R: Rng>(sizes: &[usize], out_act: OutputActivation, rng: &mut R) -> Self {
        assert!(sizes.len() >= 2, "need at least input and output sizes");
        assert!(sizes.iter().all(|&s| s > 0), "zero-width layer");
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        let last = sizes.len() - 2;
        for (l, pair) in sizes.windows(2).enumerate() {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let bound = if l == last {
                3e-3
            } else {
                1.0 / sqrt(fan_in as f64)
            };
            let w = (0..fan_in * fan_out)
                .map(|_| rng.gen_range(-bound..bound))
                .collect();
            let b = (0..fan_out).map(|_| rng.gen_range(-bound..bound)).collect();
            weights.push(w);
            biases.push(b);
        }
        Self {
            sizes: sizes.to_vec(),
            out_act,
            weights,
            biases,
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn output_activation(&self) -> OutputActivation {
        self.out_act
    }

    pub fn input_len(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_len(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    fn layer_count(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().map(Vec::len).sum::<usize>()
            + self.biases.iter().map(Vec::len).sum::<usize>()
    }

    /// Batched forward pass over `batch` rows laid out contiguously.
    pub fn forward_batch(&self, input: &[f64], batch: usize) -> Vec<f64> {
        self.forward_batch_cached(input, batch)
            .activations
            .pop()
            .unwrap()
    }

    /// Single-sample forward pass.
    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        self.forward_batch(input, 1)
    }

    pub fn forward_batch_cached(&self, input: &[f64], batch: usize) -> ForwardCache {
        assert_eq!(
            input.len(),
            batch * self.input_len(),
            "input is {} values, expected {} rows of {}",
            input.len(),
            batch,
            self.input_len()
        );
        let layers = self.layer_count();
        let mut activations = Vec::with_capacity(layers + 1);
        activations.push(input.to_vec());
        for l in 0..layers {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let mut out = vec![0.0; batch * n_out];
            gemm_acc(
                Lhs::Normal,
                batch,
                n_in,
                n_out,
                &activations[l],
                &self.weights[l],
                &mut out,
            );
            add_bias_rows(batch, n_out, &mut out, &self.biases[l]);
            if l + 1 < layers {
                for v in &mut out {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            } else {
                match self.out_act {
                    OutputActivation::Identity => {}
                    OutputActivation::TanhScaled(bound) => {
                        for v in &mut out {
                            *v = bound * tanh(*v);
                        }
                    }
                }
            }
            activations.push(out);
        }
        ForwardCache { batch, activations }
    }

    /// Exact reverse-mode pass for the scalar `Σ output · upstream`.
    ///
    /// Returns parameter gradients (unless skipped) and, on request, the
    /// gradient with respect to the input rows — the latter is what the
    /// deterministic policy gradient needs from the critic. ReLU uses
    /// subgradient 0 at exactly zero pre-activation.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        upstream: &[f64],
        want_param_grads: bool,
        want_input_grad: bool,
    ) -> (Option<Gradients>, Option<Vec<f64>>) {
        let batch = cache.batch;
        let layers = self.layer_count();
        assert_eq!(upstream.len(), batch * self.output_len());

        // dz for the output layer.
        let mut dz: Vec<f64> = match self.out_act {
            OutputActivation::Identity => upstream.to_vec(),
            OutputActivation::TanhScaled(bound) => cache.activations[layers]
                .iter()
                .zip(upstream)
                .map(|(&y, &u)| {
                    let t = y / bound;
                    u * bound * (1.0 - t * t)
                })
                .collect(),
        };

        let mut grads = want_param_grads.then(|| Gradients::zeros_like(self));
        let mut input_grad = None;

        for l in (0..layers).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            if let Some(g) = grads.as_mut() {
                // dW = act_{l}ᵀ · dz, db = column sums of dz.
                gemm_acc(
                    Lhs::Transposed,
                    n_in,
                    batch,
                    n_out,
                    &cache.activations[l],
                    &dz,
                    &mut g.weights[l],
                );
                col_sums_acc(batch, n_out, &dz, &mut g.biases[l]);
            }
            let need_below = l > 0 || want_input_grad;
            if !need_below {
                break;
            }
            // d(act_l) = dz · Wᵀ; the kernel wants the transpose materialized.
            let mut w_t = vec![0.0; n_in * n_out];
            transpose(n_in, n_out, &self.weights[l], &mut w_t);
            let mut da = vec![0.0; batch * n_in];
            gemm_acc(Lhs::Normal, batch, n_out, n_in, &dz, &w_t, &mut da);
            if l > 0 {
                // Through the ReLU: zero where the activation was zero.
                for (d, &a) in da.iter_mut().zip(&cache.activations[l]) {
                    if a <= 0.0 {
                        *d = 0.0;
                    }
                }
                dz = da;
            } else {
                input_grad = Some(da);
            }
        }
        (grads, input_grad)
    }

    /// `θ_target ← τ·θ_source + (1−τ)·θ_target` for every parameter.
    pub fn soft_update_from(&mut self, source: &Mlp, tau: f64) {
        assert_eq!(
            self.sizes, source.sizes,
            "soft update across different architectures"
        );
        assert!((0.0..=1.0).contains(&tau));
        for (wt, ws) in self.weights.iter_mut().zip(&source.weights) {
            for (t, s) in wt.iter_mut().zip(ws) {
                *t = tau * s + (1.0 - tau) * *t;
            }
        }
        for (bt, bs) in self.biases.iter_mut().zip(&source.biases) {
            for (t, s) in bt.iter_mut().zip(bs) {
                *t = tau * s + (1.0 - tau) * *t;
            }
        }
    }

    pub(crate) fn params_mut(&mut self) -> (&mut Vec<Vec<f64>>, &mut Vec<Vec<f64>>) {
        (&mut self.weights, &mut self.biases)
    }

    pub(crate) fn params(&self) -> (&Vec<Vec<f64>>, &Vec<Vec<f64>>) {
        (&self.weights, &self.biases)
    }

    pub(crate) fn from_parts(
        sizes: Vec<usize>,
        out_act: OutputActivation,
        weights: Vec<Vec<f64>>,
        biases: Vec<Vec<f64>>,
    ) -> Self {
        Self {
            sizes,
            out_act,
            weights,
            biases,
        }
    }

    /// Flat view of all parameters, weights then biases per layer. Test
    /// and finite-difference helper.
    pub fn flatten_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for l in 0..self.layer_count() {
            out.extend_from_slice(&self.weights[l]);
            out.extend_from_slice(&self.biases[l]);
        }
        out
    }

    /// Inverse of [`flatten_params`]; panics on length mismatch.
    pub fn set_flat_params(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.parameter_count());
        let mut at = 0;
        for l in 0..self.layer_count() {
            let wl = self.weights[l].len();
            self.weights[l].copy_from_slice(&flat[at..at + wl]);
            at += wl;
            let bl = self.biases[l].len();
            self.biases[l].copy_from_slice(&flat[at..at + bl]);
            at += bl;
        }
    }

    /// Gradients in the same order as [`flatten_params`].
    pub fn flatten_grads(grads: &Gradients) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in grads.weights.iter().zip(&grads.biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }
}
