//! A sigmoid threshold unit with knocked-out inputs, with and without
//! renormalized weights, and its zero-temperature limit.
//!
//! ```text
//! cargo run --example threshold_neuron -- 0.9 -0.4 0.3
//! ```

use knockout::gibbs::{interaction_order, is_in_tilde_k, max_deviation};
use knockout::neural::{renormalized_threshold_modalities, threshold_limit, threshold_modalities, Beta, ThresholdParams};
use knockout::space::NodeSet;

fn main() -> knockout::Result<()> {
    let mut weights: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if weights.is_empty() {
        weights = vec![0.9, -0.4, 0.3];
    }
    let eta = 0.1;
    let params = ThresholdParams::new(weights.clone(), eta, Beta::Finite(2.0))?;
    let plain = threshold_modalities(&params)?;
    let renorm = renormalized_threshold_modalities(&params)?;
    println!("interaction order {}", interaction_order(plain.full(), 1e-10)?);
    println!("plain family geometric-mean closed: {}", is_in_tilde_k(&plain, 1, 1e-9)?);
    println!("renormalized family geometric-mean closed: {}", is_in_tilde_k(&renorm, 1, 1e-12)?);

    let first = NodeSet::singleton(1);
    println!("P(+1 | x1 = +1, rest knocked out): plain {:.4}, renormalized {:.4}",
        plain.get(first).row(1)[1], renorm.get(first).row(1)[1]);

    for renormalized in [false, true] {
        let limit = threshold_limit(&weights, eta, renormalized)?;
        let devs: Vec<String> = [1.0, 10.0, 100.0, 1000.0]
            .iter()
            .map(|&b| {
                let p = ThresholdParams::new(weights.clone(), eta, Beta::Finite(b))?;
                let m = if renormalized { renormalized_threshold_modalities(&p)? } else { threshold_modalities(&p)? };
                Ok(format!("{:.1e}", max_deviation(&m, &limit)))
            })
            .collect::<knockout::Result<_>>()?;
        println!("renormalized = {renormalized}: distance to the step limit {}", devs.join(" "));
    }
    Ok(())
}
