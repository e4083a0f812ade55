#![allow(dead_code)]

use dynstore_core::model::{FailureModel, NetworkConfig};
use dynstore_core::rational::{int, ratio, Rational};

pub fn cfg_a() -> NetworkConfig {
    NetworkConfig::new(10, 10, int(2), int(1), 13)
}

pub fn cfg_b() -> NetworkConfig {
    NetworkConfig::new(2, 3, int(2), int(1), 4)
}

pub fn cfg_c() -> NetworkConfig {
    NetworkConfig::new(1, 19, int(2), int(1), 13).with_failure_model(FailureModel::TwoClass {
        p: ratio(4, 95),
        q: ratio(1, 5),
    })
}

/// n1 ∈ {1,2,3}, n2 ∈ {2,3,4}, n ≤ 6, every valid k′, β1/β2 ∈ {1, 2, 5/2}.
pub fn small_grid() -> Vec<NetworkConfig> {
    let mut out = Vec::new();
    for n1 in 1..=3usize {
        for n2 in 2..=4usize {
            if n1 + n2 > 6 {
                continue;
            }
            for k in n1 + 1..=n1 + n2 {
                for b1 in [int(1), int(2), ratio(5, 2)] {
                    out.push(NetworkConfig::new(n1, n2, b1, int(1), k));
                }
            }
        }
    }
    out
}

pub fn beta_gap(cfg: &NetworkConfig) -> Rational {
    &cfg.beta1 - &cfg.beta2
}
