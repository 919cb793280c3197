//! Kinematic environment for evasive-behavior learning.
//!
//! The agent observes a six-component state (longitudinal and lateral
//! distance to the leader, own speed, relative speed on both axes) and
//! outputs a two-component acceleration. The environment advances the ego
//! vehicle with a trapezoidal speed update while the leader is assumed to
//! hold its speed within one 0.1 s step; rewards penalize the normalized
//! mismatch between the simulated and the observed next state.

use alloc::vec::Vec;

use crate::fmath::abs;

/// Simulation step length in seconds; the native cadence of the data.
pub const DT: f64 = 0.1;

/// Acceleration magnitude ceiling applied to both axes, in m/s². Matches
/// the feasibility limit used when filtering implausible sensor records.
pub const ACTION_BOUND: f64 = 7.0;

/// The observed state: distances to the leader, ego speeds and relative
/// speeds (leader minus ego) on the longitudinal and lateral axes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnvState {
    pub d_lon: f64,
    pub v_lon: f64,
    pub dv_lon: f64,
    pub d_lat: f64,
    pub v_lat: f64,
    pub dv_lat: f64,
}

impl EnvState {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.d_lon, self.v_lon, self.dv_lon, self.d_lat, self.v_lat, self.dv_lat,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            d_lon: a[0],
            v_lon: a[1],
            dv_lon: a[2],
            d_lat: a[3],
            v_lat: a[4],
            dv_lat: a[5],
        }
    }

    /// Leader speeds implied by the state.
    pub fn leader_speeds(&self) -> (f64, f64) {
        (self.v_lon + self.dv_lon, self.v_lat + self.dv_lat)
    }
}

/// Longitudinal and lateral acceleration command, clamped to the bound.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Action {
    pub a_lon: f64,
    pub a_lat: f64,
}

impl Action {
    pub fn clamped(a_lon: f64, a_lat: f64) -> Self {
        Self {
            a_lon: a_lon.clamp(-ACTION_BOUND, ACTION_BOUND),
            a_lat: a_lat.clamp(-ACTION_BOUND, ACTION_BOUND),
        }
    }

    pub fn to_array(&self) -> [f64; 2] {
        [self.a_lon, self.a_lat]
    }
}

/// One replay-buffer experience.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub state: EnvState,
    pub action: Action,
    pub reward: f64,
    pub next_state: EnvState,
    pub terminal: bool,
}

/// Advances the state one step: trapezoidal ego displacement, constant
/// leader speed within the step.
pub fn step_kinematics(s: &EnvState, a: &Action, dt: f64) -> EnvState {
    let v_lon_next = s.v_lon + a.a_lon * dt;
    let dv_lon_next = s.dv_lon - a.a_lon * dt;
    let d_lon_next = s.d_lon + (s.v_lon + s.dv_lon) * dt - (s.v_lon + v_lon_next) / 2.0 * dt;
    let v_lat_next = s.v_lat + a.a_lat * dt;
    let dv_lat_next = s.dv_lat - a.a_lat * dt;
    let d_lat_next = s.d_lat + (s.v_lat + s.dv_lat) * dt - (s.v_lat + v_lat_next) / 2.0 * dt;
    EnvState {
        d_lon: d_lon_next,
        v_lon: v_lon_next,
        dv_lon: dv_lon_next,
        d_lat: d_lat_next,
        v_lat: v_lat_next,
        dv_lat: dv_lat_next,
    }
}

/// Which of the three reward variants a model trains against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewardKind {
    /// Distance mismatch ("d" model).
    Distance,
    /// Speed mismatch ("v" model).
    Speed,
    /// Relative-speed mismatch ("Δv" model).
    SpeedDiff,
}

impl RewardKind {
    pub fn label(&self) -> &'static str {
        match self {
            RewardKind::Distance => "d",
            RewardKind::Speed => "v",
            RewardKind::SpeedDiff => "dv",
        }
    }
}

/// Denominator guard for the normalized reward terms.
pub const REWARD_EPSILON: f64 = 1e-7;

/// Reward shaping knobs. The raw terms are unbounded near zero denominators
/// (a lateral distance crossing zero mid-lane-change can make one term
/// explode), which destabilizes the critic; the per-term clip bounds them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardConfig {
    pub kind: RewardKind,
    /// Per-term lower clip (a positive magnitude); `None` disables it.
    pub term_clip: Option<f64>,
}

impl RewardConfig {
    pub fn new(kind: RewardKind) -> Self {
        Self {
            kind,
            term_clip: Some(100.0),
        }
    }

    fn term(&self, sim: f64, obs: f64) -> f64 {
        let raw = -abs(sim - obs) / (abs(obs) + REWARD_EPSILON);
        match self.term_clip {
            Some(clip) => raw.max(-clip),
            None => raw,
        }
    }

    pub fn reward(&self, sim: &EnvState, obs: &EnvState) -> f64 {
        match self.kind {
            RewardKind::Distance => self.term(sim.d_lon, obs.d_lon) + self.term(sim.d_lat, obs.d_lat),
            RewardKind::Speed => self.term(sim.v_lon, obs.v_lon) + self.term(sim.v_lat, obs.v_lat),
            RewardKind::SpeedDiff => {
                self.term(sim.dv_lon, obs.dv_lon) + self.term(sim.dv_lat, obs.dv_lat)
            }
        }
    }
}

/// Distance reward: normalized absolute error of both simulated distances
/// against the observed next state (unclipped form).
pub fn reward_distance(sim: &EnvState, obs: &EnvState) -> f64 {
    RewardConfig {
        kind: RewardKind::Distance,
        term_clip: None,
    }
    .reward(sim, obs)
}

/// Speed reward over the ego speed components (unclipped form).
pub fn reward_speed(sim: &EnvState, obs: &EnvState) -> f64 {
    RewardConfig {
        kind: RewardKind::Speed,
        term_clip: None,
    }
    .reward(sim, obs)
}

/// Relative-speed reward over both axes (unclipped form).
pub fn reward_speed_diff(sim: &EnvState, obs: &EnvState) -> f64 {
    RewardConfig {
        kind: RewardKind::SpeedDiff,
        term_clip: None,
    }
    .reward(sim, obs)
}

/// A conflict reduced to what the learning stack needs: the observed state
/// sequence at 0.1 s cadence and the driver's recorded accelerations
/// (longitudinal from the CAN bus, lateral differentiated from the smoothed
/// lateral speed). `human_accel[t]` is the action taken between `states[t]`
/// and `states[t + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictEpisode {
    pub conflict_id: u64,
    pub event_id: u64,
    pub states: Vec<EnvState>,
    pub human_accel: Vec<[f64; 2]>,
}

impl ConflictEpisode {
    pub fn transition_count(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    /// Leader speed profile implied by the observed states.
    pub fn leader_profile(&self) -> Vec<(f64, f64)> {
        self.states.iter().map(|s| s.leader_speeds()).collect()
    }
}

/// Teacher-forced experience generation: actions come from the policy (plus
/// exploration noise), the simulated state only feeds the reward, and the
/// stored next state is the observed one.
pub fn make_transitions<F>(
    conflict: &ConflictEpisode,
    mut policy_action_with_noise: F,
    reward: &RewardConfig,
) -> Vec<Transition>
where
    F: FnMut(&EnvState) -> Action,
{
    let n = conflict.states.len();
    debug_assert!(n >= 2, "a conflict needs at least two records");
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for t in 0..n.saturating_sub(1) {
        let state = conflict.states[t];
        let raw = policy_action_with_noise(&state);
        let action = Action::clamped(raw.a_lon, raw.a_lat);
        let sim = step_kinematics(&state, &action, DT);
        let next_state = conflict.states[t + 1];
        out.push(Transition {
            state,
            action,
            reward: reward.reward(&sim, &next_state),
            next_state,
            terminal: t + 2 == n,
        });
    }
    out
}

/// Closed-loop rollout: only the initial state is observed; afterwards the
/// policy acts on its own simulated state. The relative-speed components
/// are re-anchored to the recorded leader profile each step so the leader
/// stays authentic while the ego evolves freely.
pub fn rollout<F>(
    initial: &EnvState,
    leader_profile: &[(f64, f64)],
    mut policy: F,
    dt: f64,
) -> Vec<EnvState>
where
    F: FnMut(&EnvState) -> Action,
{
    if leader_profile.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(leader_profile.len());
    let mut state = *initial;
    out.push(state);
    for profile in leader_profile.iter().skip(1) {
        let action = policy(&state);
        let mut next = step_kinematics(&state, &action, dt);
        next.dv_lon = profile.0 - next.v_lon;
        next.dv_lat = profile.1 - next.v_lat;
        state = next;
        out.push(state);
    }
    out
}
