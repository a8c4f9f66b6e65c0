//! Sigmoid threshold units and their knockout modalities.
//!
//! Inputs and output are spins: state index 0 is `−1`, index 1 is `+1`.

use crate::error::{Error, Result};
use crate::gibbs::softmax;
use crate::kernels::{FunctionalModalities, StochasticMap};
use crate::space::{NodeSet, StateSpace};

/// Inverse temperature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdParams {
    pub weights: Vec<f64>,
    pub eta: f64,
    pub beta: Beta,
}

impl ThresholdParams {
    pub fn new(weights: Vec<f64>, eta: f64, beta: Beta) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("need at least one weight".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) || !eta.is_finite() {
            return Err(Error::InvalidParameter("weights and threshold must be finite".into()));
        }
        if let Beta::Finite(b) = beta {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::InvalidParameter(format!("beta must be positive, got {b}")));
            }
        }
        Ok(ThresholdParams { weights, eta, beta })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn space(&self) -> StateSpace {
        neuron_space(self.n())
    }
}

/// Binary output and `n` binary inputs.
pub fn neuron_space(n: usize) -> StateSpace {
    StateSpace::binary(n)
}

pub fn spin(index: usize) -> f64 {
    if index == 0 {
        -1.0
    } else {
        1.0
    }
}

pub fn spin_index(s: i8) -> usize {
    usize::from(s > 0)
}

/// `Σ_{i ∈ A} w_i x_i` for an assignment `x_A` given as state indices.
pub fn field(weights: &[f64], set: NodeSet, values: &[usize]) -> f64 {
    set.nodes().zip(values).map(|(i, &v)| weights[i - 1] * spin(v)).sum()
}

/// `(κ(−1), κ(+1))` with `κ(x_0) ∝ exp(β/2 · h · x_0)`.
fn sigmoid_row(beta: f64, h: f64) -> Vec<f64> {
    softmax(&[-0.5 * beta * h, 0.5 * beta * h]).expect("finite logits")
}

/// `θ(h)`: 1 above zero, 0 below, 1/2 at ties (within `scale · 1e-12`).
fn step_row(h: f64, scale: f64) -> Vec<f64> {
    let p = if h.abs() <= 1e-12 * scale {
        0.5
    } else if h > 0.0 {
        1.0
    } else {
        0.0
    };
    vec![1.0 - p, p]
}

fn scale(weights: &[f64], eta: f64) -> f64 {
    1.0 + weights.iter().map(|w| w.abs()).sum::<f64>() + eta.abs()
}

fn build(
    params: &ThresholdParams,
    argument: impl Fn(NodeSet, &[usize]) -> Option<f64>,
) -> Result<FunctionalModalities<f64>> {
    let space = params.space();
    let sc = scale(&params.weights, params.eta) * params.n() as f64;
    FunctionalModalities::from_fn(&space, |a| {
        StochasticMap::from_fn(&space, a, |values| match argument(a, values) {
            None => vec![0.5, 0.5],
            Some(h) => match params.beta {
                Beta::Finite(b) => sigmoid_row(b, h),
                Beta::Infinite => step_row(h, sc),
            },
        })
    })
}

/// `κ_A(x_A; x_0) ∝ exp(β/2 (Σ_{i ∈ A} w_i x_i − η) x_0)`: knocked-out
/// inputs simply drop out of the sum. With `β = ∞` this is the threshold limit.
pub fn threshold_modalities(params: &ThresholdParams) -> Result<FunctionalModalities<f64>> {
    build(params, |a, values| Some(field(&params.weights, a, values) - params.eta))
}

/// `κ_A(x_A; x_0) ∝ exp(β/2 ((n/|A|) Σ_{i ∈ A} w_i x_i − η) x_0)` with `κ_∅`
/// uniform: the remaining weights are amplified by `n/|A|`.
pub fn renormalized_threshold_modalities(params: &ThresholdParams) -> Result<FunctionalModalities<f64>> {
    let n = params.n() as f64;
    build(params, |a, values| {
        (!a.is_empty()).then(|| n / a.len() as f64 * field(&params.weights, a, values) - params.eta)
    })
}

/// Pointwise `β → ∞` limit with `θ(0) = 1/2`, of the plain or renormalized family.
pub fn threshold_limit(weights: &[f64], eta: f64, renormalized: bool) -> Result<FunctionalModalities<f64>> {
    let params = ThresholdParams::new(weights.to_vec(), eta, Beta::Infinite)?;
    if renormalized {
        renormalized_threshold_modalities(&params)
    } else {
        threshold_modalities(&params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::{
        delta_interaction_check, interaction_order, is_in_tilde_k, max_deviation, GIBBS_TOL,
    };
    use crate::robustness::RobustnessSpec;

    fn p(weights: &[f64], eta: f64, beta: f64) -> ThresholdParams {
        ThresholdParams::new(weights.to_vec(), eta, Beta::Finite(beta)).unwrap()
    }

    #[test]
    fn zero_weights_are_uniform() {
        let m = threshold_modalities(&p(&[0.0, 0.0, 0.0], 0.0, 3.0)).unwrap();
        assert!(m.maps().iter().all(|k| k.rows().iter().all(|r| r == &vec![0.5, 0.5])));
    }

    #[test]
    fn single_input_value() {
        let m = threshold_modalities(&p(&[2.0], 0.0, 1.0)).unwrap();
        let up = m.full().row(spin_index(1))[1];
        assert!((up - 1.0 / (1.0 + (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn renormalized_weights() {
        let params = p(&[1.0, 1.0], 0.0, 1.0);
        let r = renormalized_threshold_modalities(&params).unwrap();
        let up = r.get(NodeSet::singleton(1)).row(1)[1];
        assert!((up - 1.0 / (1.0 + (-2.0f64).exp())).abs() < 1e-15);
        let plain = threshold_modalities(&params).unwrap();
        assert_eq!(r.full(), plain.full());
        assert_eq!(r.get(NodeSet::EMPTY).row(0), &[0.5, 0.5]);
    }

    #[test]
    fn families_and_orders() {
        let params = p(&[0.7, -1.3, 0.4], 0.2, 1.5);
        let plain = threshold_modalities(&params).unwrap();
        let renorm = renormalized_threshold_modalities(&params).unwrap();
        let s = params.space();
        let r1 = RobustnessSpec::r_k(&s, 1).unwrap();
        assert_eq!(interaction_order(plain.full(), GIBBS_TOL).unwrap(), 1);
        assert!(delta_interaction_check(&plain, &r1, GIBBS_TOL).unwrap());
        assert!(!is_in_tilde_k(&plain, 1, 1e-9).unwrap());
        assert!(is_in_tilde_k(&renorm, 1, 1e-12).unwrap());
        assert!(delta_interaction_check(&renorm, &r1, GIBBS_TOL).unwrap());
    }

    #[test]
    fn majority_and_ties() {
        let lim = threshold_limit(&[1.0; 3], 0.0, false).unwrap();
        let s = neuron_space(3);
        for x in 0..8 {
            let ups = s.coords_of(x).iter().filter(|&&v| v == 1).count();
            assert_eq!(lim.full().row(x)[1], if ups >= 2 { 1.0 } else { 0.0 });
        }
        let pair = lim.get(NodeSet::from_nodes([1, 2]));
        assert_eq!(pair.row(s.sub_index(NodeSet::from_nodes([1, 2]), &[0, 1])), &[0.5, 0.5]);
        let renorm = threshold_limit(&[1.0; 3], 0.0, true).unwrap();
        assert_eq!(renorm.get(NodeSet::EMPTY).row(0), &[0.5, 0.5]);
    }

    #[test]
    fn beta_sweep_converges() {
        let w = [0.9, -0.4, 0.3];
        let eta = 0.1;
        for renormalized in [false, true] {
            let lim = threshold_limit(&w, eta, renormalized).unwrap();
            let mut last = f64::INFINITY;
            for beta in [1.0, 10.0, 100.0, 1000.0] {
                let params = p(&w, eta, beta);
                let m = if renormalized {
                    renormalized_threshold_modalities(&params).unwrap()
                } else {
                    threshold_modalities(&params).unwrap()
                };
                let dev = max_deviation(&m, &lim);
                assert!(dev < last);
                last = dev;
            }
            assert!(last < 1e-3);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(ThresholdParams::new(vec![], 0.0, Beta::Finite(1.0)).is_err());
        assert!(ThresholdParams::new(vec![1.0], 0.0, Beta::Finite(0.0)).is_err());
        assert!(ThresholdParams::new(vec![f64::NAN], 0.0, Beta::Infinite).is_err());
    }
}
