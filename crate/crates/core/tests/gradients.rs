mod common;

use common::gradient_fd_errors;

#[test]
fn analytic_gradients_match_central_differences() {
    let mut worst = (0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let n_spatial = 2 + (seed % 3) as usize;
        let (t, c) = gradient_fd_errors(seed, n_spatial);
        worst = (worst.0.max(t), worst.1.max(c));
    }
    eprintln!("worst {worst:?}");
    assert!(worst.0 <= 1e-6 && worst.1 <= 1e-6, "worst {worst:?}");
}
