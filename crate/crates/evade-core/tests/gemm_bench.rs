use std::time::Instant;
use evade_core::nn::{Mlp, OutputActivation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
#[ignore]
fn bench_pieces() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let critic = Mlp::new(&[8, 256, 256, 1], OutputActivation::Identity, &mut rng);
    let x: Vec<f64> = (0..256 * 8).map(|_| rng.gen_range(-1.0..1.0)).collect();

    // forward only
    let t0 = Instant::now();
    let n = 100;
    for _ in 0..n {
        let _ = critic.forward_batch(&x, 256);
    }
    let fwd = t0.elapsed().as_secs_f64() / n as f64;
    println!("critic forward(256): {:.3} ms  ({:.1} GFLOP/s)", fwd * 1e3, 2.0 * 256.0 * (8.0*256.0 + 256.0*256.0 + 256.0) / fwd / 1e9);

    // forward + backward with param grads
    let t0 = Instant::now();
    for _ in 0..n {
        let cache = critic.forward_batch_cached(&x, 256);
        let ones = vec![1.0; 256];
        let _ = critic.backward(&cache, &ones, true, true);
    }
    let fb = t0.elapsed().as_secs_f64() / n as f64;
    println!("critic fwd+bwd(256): {:.3} ms", fb * 1e3);
}
