//! Shared fixtures for the criterion benches.

use plaurent_core::granger::ARModel;
use plaurent_core::mat::{c64, CMat, CVec};
use plaurent_core::synth::{conjugated_diagonal, SyntheticPencil};

/// A second-order instance of the given dimension (first two directions
/// carry the pole, the rest are regular).
pub fn second_order_instance(dim: usize, seed: u64) -> SyntheticPencil {
    let mut exps = vec![0usize; dim];
    exps[0] = 2;
    if dim > 1 {
        exps[1] = 1;
    }
    conjugated_diagonal(&exps, seed)
}

/// Mixed I(1) model: one unit-root direction, the rest stationary.
pub fn mixed_model(dim: usize) -> ARModel {
    let phi = CMat::from_diagonal(&CVec::from_vec(
        (0..dim)
            .map(|i| if i == 0 { c64(1.0, 0.0) } else { c64(0.5, 0.0) })
            .collect(),
    ));
    ARModel::new(vec![phi]).expect("valid model")
}
