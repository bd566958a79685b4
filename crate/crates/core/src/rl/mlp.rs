//! 3 → H (tanh) → 1 networks over a flat parameter vector.
//!
//! Layout: input weights `W₁` (H×3, row-major), hidden biases `b₁` (H),
//! output weights `w₂` (H), output bias `b₂`. The policy appends one
//! log-std coordinate.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub const FEATURES: usize = 3;
pub const LOG_STD_MIN: f64 = -5.0;
pub const LOG_STD_MAX: f64 = 2.0;

/// Activations saved by [`Mlp::forward`] for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpCache {
    features: [f64; FEATURES],
    hidden: Vec<f64>,
}

/// Shape of a one-hidden-layer network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mlp {
    hidden: usize,
}

impl Mlp {
    pub fn new(hidden: usize) -> Self {
        assert!(hidden > 0, "hidden width must be positive");
        Self { hidden }
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    /// `3H + H + H + 1`.
    pub fn param_len(&self) -> usize {
        5 * self.hidden + 1
    }

    /// Scaled-uniform fan-in initialization: `U(±1/√fan_in)` per layer.
    pub fn init<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let h = self.hidden;
        let a1 = 1.0 / (FEATURES as f64).sqrt();
        let a2 = 1.0 / (h as f64).sqrt();
        let mut p = Vec::with_capacity(self.param_len());
        p.extend((0..4 * h).map(|_| rng.random_range(-a1..a1)));
        p.extend((0..h + 1).map(|_| rng.random_range(-a2..a2)));
        p
    }

    pub fn forward(&self, params: &[f64], features: &[f64; FEATURES]) -> (f64, MlpCache) {
        let h = self.hidden;
        let (w1, rest) = params.split_at(FEATURES * h);
        let (b1, rest) = rest.split_at(h);
        let (w2, rest) = rest.split_at(h);
        let b2 = rest[0];
        let hidden: Vec<f64> = (0..h)
            .map(|j| {
                let row = &w1[FEATURES * j..FEATURES * (j + 1)];
                (row[0] * features[0] + row[1] * features[1] + row[2] * features[2] + b1[j]).tanh()
            })
            .collect();
        let out = b2 + hidden.iter().zip(w2).map(|(a, w)| a * w).sum::<f64>();
        (
            out,
            MlpCache {
                features: *features,
                hidden,
            },
        )
    }

    /// Adds `out_grad · ∂output/∂params` into `grad`.
    pub fn backward_into(&self, params: &[f64], cache: &MlpCache, out_grad: f64, grad: &mut [f64]) {
        let h = self.hidden;
        let w2 = &params[4 * h..5 * h];
        let x = &cache.features;
        for j in 0..h {
            let a = cache.hidden[j];
            grad[4 * h + j] += out_grad * a;
            let dz = out_grad * w2[j] * (1.0 - a * a);
            grad[FEATURES * j] += dz * x[0];
            grad[FEATURES * j + 1] += dz * x[1];
            grad[FEATURES * j + 2] += dz * x[2];
            grad[3 * h + j] += dz;
        }
        grad[5 * h] += out_grad;
    }

    /// Gradient of `output · out_grad` with respect to the parameters.
    pub fn backward(&self, params: &[f64], cache: &MlpCache, out_grad: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.param_len()];
        self.backward_into(params, cache, out_grad, &mut g);
        g
    }
}

/// Gaussian policy: the network gives the action mean, plus a learned
/// log-std clamped to `[−5, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyNet {
    net: Mlp,
    params: Vec<f64>,
}

impl PolicyNet {
    /// Fan-in initialized network with log-std 0.
    pub fn new<R: Rng + ?Sized>(hidden: usize, rng: &mut R) -> Self {
        Self::with_log_std(hidden, 0.0, rng)
    }

    pub fn with_log_std<R: Rng + ?Sized>(hidden: usize, log_std: f64, rng: &mut R) -> Self {
        let net = Mlp::new(hidden);
        let mut params = net.init(rng);
        params.push(log_std);
        let mut p = Self { net, params };
        p.clamp_log_std();
        p
    }

    pub fn from_params(hidden: usize, params: Vec<f64>) -> Self {
        let net = Mlp::new(hidden);
        assert_eq!(params.len(), net.param_len() + 1, "policy parameter length");
        let mut p = Self { net, params };
        p.clamp_log_std();
        p
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn param_len(&self) -> usize {
        self.params.len()
    }

    pub fn hidden(&self) -> usize {
        self.net.hidden()
    }

    pub fn log_std(&self) -> f64 {
        self.params[self.params.len() - 1]
    }

    pub fn set_log_std(&mut self, v: f64) {
        let last = self.params.len() - 1;
        self.params[last] = v;
        self.clamp_log_std();
    }

    fn clamp_log_std(&mut self) {
        let last = self.params.len() - 1;
        self.params[last] = self.params[last].clamp(LOG_STD_MIN, LOG_STD_MAX);
    }

    pub fn mean(&self, features: &[f64; FEATURES]) -> f64 {
        self.net.forward(&self.params, features).0
    }

    /// Draw an unclipped action and its log-density.
    pub fn sample<R: Rng + ?Sized>(&self, features: &[f64; FEATURES], rng: &mut R) -> (f64, f64) {
        let mean = self.mean(features);
        let z: f64 = StandardNormal.sample(rng);
        let action = mean + self.log_std().exp() * z;
        (action, gaussian_log_density(z, self.log_std()))
    }

    pub fn log_prob(&self, features: &[f64; FEATURES], action: f64) -> f64 {
        let log_std = self.log_std();
        gaussian_log_density((action - self.mean(features)) / log_std.exp(), log_std)
    }

    /// Adds `scale · ∇ log π(action | features)` into `grad`; returns the
    /// log-density.
    pub fn grad_log_prob_into(&self, features: &[f64; FEATURES], action: f64, scale: f64, grad: &mut [f64]) -> f64 {
        let (mean, cache) = self.net.forward(&self.params, features);
        let log_std = self.log_std();
        let sigma = log_std.exp();
        let z = (action - mean) / sigma;
        self.net.backward_into(&self.params, &cache, scale * z / sigma, grad);
        let last = grad.len() - 1;
        grad[last] += scale * (z * z - 1.0);
        gaussian_log_density(z, log_std)
    }

    /// `params += step · direction`, then re-clamp the log-std.
    pub fn apply(&mut self, step: f64, direction: &[f64]) {
        for (p, d) in self.params.iter_mut().zip(direction) {
            *p += step * d;
        }
        self.clamp_log_std();
    }

    pub fn is_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }
}

fn gaussian_log_density(z: f64, log_std: f64) -> f64 {
    -0.5 * z * z - log_std - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// State-value network.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueNet {
    net: Mlp,
    params: Vec<f64>,
}

impl ValueNet {
    pub fn new<R: Rng + ?Sized>(hidden: usize, rng: &mut R) -> Self {
        let net = Mlp::new(hidden);
        let params = net.init(rng);
        Self { net, params }
    }

    pub fn from_params(hidden: usize, params: Vec<f64>) -> Self {
        let net = Mlp::new(hidden);
        assert_eq!(params.len(), net.param_len(), "value parameter length");
        Self { net, params }
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn param_len(&self) -> usize {
        self.params.len()
    }

    pub fn value(&self, features: &[f64; FEATURES]) -> f64 {
        self.net.forward(&self.params, features).0
    }

    /// Adds `scale · ∇V(features)` into `grad`; returns `V(features)`.
    pub fn grad_into(&self, features: &[f64; FEATURES], scale: f64, grad: &mut [f64]) -> f64 {
        let (v, cache) = self.net.forward(&self.params, features);
        self.net.backward_into(&self.params, &cache, scale, grad);
        v
    }

    pub fn apply(&mut self, step: f64, direction: &[f64]) {
        for (p, d) in self.params.iter_mut().zip(direction) {
            *p += step * d;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn layout_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for h in [1, 8, 64] {
            assert_eq!(Mlp::new(h).param_len(), 3 * h + h + h + 1);
            assert_eq!(PolicyNet::new(h, &mut rng).param_len(), 5 * h + 2);
            assert_eq!(ValueNet::new(h, &mut rng).param_len(), 5 * h + 1);
        }
    }

    #[test]
    fn zero_network_outputs_zero() {
        let net = Mlp::new(6);
        let zeros = vec![0.0; net.param_len()];
        for x in [[1.0, 0.0, 0.0], [-0.3, 0.9, -1.0], [0.0, 0.0, 0.0]] {
            assert_eq!(net.forward(&zeros, &x).0, 0.0);
        }
    }

    #[test]
    fn init_respects_fan_in_bounds() {
        let net = Mlp::new(16);
        let p = net.init(&mut ChaCha8Rng::seed_from_u64(3));
        let a1 = 1.0 / 3f64.sqrt();
        assert!(p[..64].iter().all(|w| w.abs() <= a1));
        assert!(p[64..].iter().all(|w| w.abs() <= 0.25));
    }

    #[test]
    fn output_varies_continuously_with_weight_scale() {
        let net = Mlp::new(8);
        let p = net.init(&mut ChaCha8Rng::seed_from_u64(4));
        let x = [0.2, -0.5, 0.7];
        let at = |s: f64| net.forward(&p.iter().map(|w| w * s).collect::<Vec<_>>(), &x).0;
        let mut prev = at(0.0);
        assert_eq!(prev, 0.0);
        for i in 1..=100 {
            let cur = at(i as f64 / 100.0);
            assert!((cur - prev).abs() < 0.05);
            prev = cur;
        }
    }

    #[test]
    fn mode_log_density_and_tiny_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pi = PolicyNet::new(4, &mut rng);
        let x = [0.1, 0.2, 0.3];
        pi.set_log_std(0.7);
        let expected = -(0.7f64.exp() * (2.0 * std::f64::consts::PI).sqrt()).ln();
        assert!((pi.log_prob(&x, pi.mean(&x)) - expected).abs() < 1e-12);

        pi.set_log_std(-9.0);
        assert_eq!(pi.log_std(), LOG_STD_MIN);
        let mean = pi.mean(&x);
        for _ in 0..1000 {
            let (a, _) = pi.sample(&x, &mut rng);
            assert!((a - mean).abs() < 6.0 * (-5f64).exp());
        }
        pi.set_log_std(10.0);
        assert_eq!(pi.log_std(), LOG_STD_MAX);
    }

    #[test]
    fn sampled_log_prob_matches_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pi = PolicyNet::new(5, &mut rng);
        let x = [0.5, -0.5, 0.1];
        for _ in 0..50 {
            let (a, lp) = pi.sample(&x, &mut rng);
            assert!((lp - pi.log_prob(&x, a)).abs() < 1e-12);
        }
    }

    #[test]
    fn empirical_action_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pi = PolicyNet::new(8, &mut rng);
        let x = [0.9, 0.1, -0.2];
        let n = 100_000;
        let mean = (0..n).map(|_| pi.sample(&x, &mut rng).0).sum::<f64>() / n as f64;
        let sigma = pi.log_std().exp();
        assert!((mean - pi.mean(&x)).abs() < 3.0 * sigma / (n as f64).sqrt());
    }
}
