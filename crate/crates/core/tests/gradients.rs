mod support;

use support::checks::{layer_gradient_errors, model_gradient_errors};

#[test]
fn every_layer_matches_central_differences() {
    for seed in 0..3 {
        for (name, err) in layer_gradient_errors(seed) {
            assert!(err < 1e-6, "{name} (seed {seed}): relative error {err:e}");
        }
    }
}

#[test]
fn desk_model_matches_central_differences() {
    for (name, err) in model_gradient_errors(11) {
        assert!(err < 1e-4, "{name}: relative error {err:e}");
    }
}
