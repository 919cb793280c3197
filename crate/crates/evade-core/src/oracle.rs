//! Test-support oracles, compiled only with the `test-oracles` feature.
//!
//! The collision oracle simulates the actual rectangles forward under
//! constant velocities and reports the first time step at which they
//! strictly overlap, independently of the closed-form TTC path it is used
//! to check.

use alloc::vec::Vec;

use rand::Rng;

use crate::fmath::abs;
use crate::nn::Mlp;
use crate::ssm::{PairState, VehicleDims};

/// Outcome of a rectangle sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepOutcome {
    /// No overlap within the horizon.
    Clear,
    /// First overlap at this time, entering through this face.
    Contact { time: f64, face: ContactFace },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactFace {
    Longitudinal,
    Lateral,
    /// Both axes entered overlap within the same step.
    Corner,
}

/// Steps both rectangles at `dt` up to `horizon` seconds and returns the
/// first strict-overlap step. The ego front bumper starts at the origin;
/// the leader front is `s0_lon` ahead with lateral center offset `s0_lat`.
pub fn rectangle_sweep(p: &PairState, dims: &VehicleDims, dt: f64, horizon: f64) -> SweepOutcome {
    let steps = (horizon / dt) as u64;
    let mut lon_overlap_prev = false;
    let mut lat_overlap_prev = false;
    for k in 0..=steps {
        let t = k as f64 * dt;
        let ego_front = p.v_lon * t;
        let ego_rear = ego_front - dims.length;
        let leader_front = p.s0_lon + p.v0_lon * t;
        let leader_rear = leader_front - dims.length;
        let lon_overlap = ego_front > leader_rear && ego_rear < leader_front;
        let dy = p.s0_lat + (p.v0_lat - p.v_lat) * t;
        let lat_overlap = abs(dy) < dims.width;
        if lon_overlap && lat_overlap {
            let face = match (lon_overlap_prev, lat_overlap_prev) {
                (true, false) => ContactFace::Lateral,
                (false, true) => ContactFace::Longitudinal,
                _ => ContactFace::Corner,
            };
            return SweepOutcome::Contact { time: t, face };
        }
        lon_overlap_prev = lon_overlap;
        lat_overlap_prev = lat_overlap;
    }
    SweepOutcome::Clear
}

/// States where the closed-form measure is known to diverge from the
/// geometric sweep: the one-sided remaining-distance tests in the formulas
/// do not notice when the other axis has already crossed fully past the
/// vehicle footprint by contact time. Grazing contacts (remaining distance
/// within `margin` of the footprint boundary) are also flagged because a
/// discrete sweep cannot resolve them reliably.
pub fn is_formula_divergent(p: &PairState, dims: &VehicleDims, margin: f64) -> bool {
    // Canonicalize laterally, mirroring what the measure does.
    let (s0_lat, v_lat, v0_lat) = if p.s0_lat < 0.0 {
        (-p.s0_lat, -p.v_lat, -p.v0_lat)
    } else {
        (p.s0_lat, p.v_lat, p.v0_lat)
    };
    let dv_lon = p.v_lon - p.v0_lon;
    let dv_lat = v_lat - v0_lat;

    if p.s0_lon > dims.length && dv_lon > 0.0 {
        let t = (p.s0_lon - dims.length) / dv_lon;
        let s1_lat = s0_lat - dv_lat * t;
        if s1_lat <= -(dims.width - margin) {
            return true;
        }
        if abs(abs(s1_lat) - dims.width) < margin {
            return true;
        }
    }
    if s0_lat > dims.width && dv_lat > 0.0 {
        let t = (s0_lat - dims.width) / dv_lat;
        let s1_lon = p.s0_lon - dv_lon * t;
        if s1_lon <= -(dims.length - margin) {
            return true;
        }
        if abs(abs(s1_lon) - dims.length) < margin {
            return true;
        }
    }
    false
}

/// Random pair states over lane-change-scale kinematics, longitudinally
/// separated at t0. Divergence-corner states (see
/// [`is_formula_divergent`]) are resampled.
pub fn random_pair_states<R: Rng>(
    rng: &mut R,
    dims: &VehicleDims,
    count: usize,
) -> Vec<PairState> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = PairState {
            s0_lon: rng.gen_range(dims.length + 0.2..90.0),
            s0_lat: rng.gen_range(-7.0..7.0),
            v_lon: rng.gen_range(0.0..40.0),
            v_lat: rng.gen_range(-1.5..1.5),
            v0_lon: rng.gen_range(0.0..40.0),
            v0_lat: rng.gen_range(-1.5..1.5),
        };
        if !is_formula_divergent(&p, dims, 0.05) {
            out.push(p);
        }
    }
    out
}

/// Central finite differences of `Σ output·upstream` over every parameter,
/// returning the maximum relative error against the provided analytic
/// gradient.
pub fn gradient_max_rel_error(net: &Mlp, input: &[f64], upstream: &[f64], h: f64) -> f64 {
    let cache = net.forward_batch_cached(input, 1);
    let (grads, _) = net.backward(&cache, upstream, true, false);
    let analytic = Mlp::flatten_grads(&grads.expect("param grads requested"));

    let loss = |m: &Mlp| -> f64 {
        m.forward(input)
            .iter()
            .zip(upstream)
            .map(|(y, u)| y * u)
            .sum()
    };
    let theta = net.flatten_params();
    let mut probe = net.clone();
    let mut worst = 0.0f64;
    for (i, &g) in analytic.iter().enumerate() {
        let mut t = theta.clone();
        t[i] += h;
        probe.set_flat_params(&t);
        let up = loss(&probe);
        t[i] -= 2.0 * h;
        probe.set_flat_params(&t);
        let down = loss(&probe);
        let fd = (up - down) / (2.0 * h);
        let denom = abs(g).max(abs(fd)).max(1e-6);
        worst = worst.max(abs(g - fd) / denom);
    }
    worst
}

/// True when any hidden pre-activation sits within `eps` of the ReLU kink
/// for this input; finite differences are unreliable there.
pub fn near_relu_kink(net: &Mlp, input: &[f64], eps: f64) -> bool {
    let sizes = net.sizes();
    let (weights, biases) = net.params();
    let layers = sizes.len() - 1;
    let mut act = input.to_vec();
    for l in 0..layers - 1 {
        let (n_in, n_out) = (sizes[l], sizes[l + 1]);
        let mut pre = biases[l].clone();
        for (k, &x) in act.iter().enumerate().take(n_in) {
            for o in 0..n_out {
                pre[o] += x * weights[l][k * n_out + o];
            }
        }
        if pre.iter().any(|&z| abs(z) < eps) {
            return true;
        }
        for z in &mut pre {
            if *z < 0.0 {
                *z = 0.0;
            }
        }
        act = pre;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssm::{ttc_2d, Ttc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sweep_agrees_with_plain_car_following() {
        let dims = VehicleDims::DEFAULT_CAR;
        let p = PairState {
            s0_lon: 30.0,
            s0_lat: 0.0,
            v_lon: 20.0,
            v_lat: 0.0,
            v0_lon: 10.0,
            v0_lat: 0.0,
        };
        match rectangle_sweep(&p, &dims, 0.001, 60.0) {
            SweepOutcome::Contact { time, face } => {
                assert!((time - 2.52).abs() <= 0.002);
                assert_eq!(face, ContactFace::Longitudinal);
            }
            SweepOutcome::Clear => panic!("expected contact"),
        }
    }

    #[test]
    fn divergent_corner_is_flagged_and_formula_disagrees_there() {
        let dims = VehicleDims::DEFAULT_CAR;
        // Lateral crossing completes long before longitudinal contact, but
        // the one-sided test in the formula still fires.
        let p = PairState {
            s0_lon: 14.8,
            s0_lat: 0.5,
            v_lon: 20.0,
            v_lat: 5.0,
            v0_lon: 10.0,
            v0_lat: 0.0,
        };
        assert!(is_formula_divergent(&p, &dims, 0.05));
        assert!(matches!(ttc_2d(&p, &dims).ttc_2d, Ttc::Seconds(_)));
        assert_eq!(rectangle_sweep(&p, &dims, 0.001, 60.0), SweepOutcome::Clear);
    }

    #[test]
    fn generator_avoids_divergent_states() {
        let dims = VehicleDims::DEFAULT_CAR;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in random_pair_states(&mut rng, &dims, 200) {
            assert!(!is_formula_divergent(&p, &dims, 0.05));
            assert!(p.s0_lon > dims.length);
        }
    }
}
