//! Two-dimensional time-to-collision (2D-TTC).
//!
//! Both vehicles are extrapolated at constant speed and direction. A
//! longitudinal collision is the follower's front reaching the leader's
//! rear while the rectangles overlap laterally; a lateral collision is one
//! side reaching the other side while the rectangles overlap
//! longitudinally. The combined measure is the minimum of the two and the
//! smaller component decides the conflict kind (rear-end vs sideswipe).
//!
//! All quantities describe an ego (following) vehicle and a single sensed
//! leader. `s0_lat` is the signed center-to-center lateral offset of the
//! leader; before evaluation the lateral axis is mirrored so the leader
//! offset is non-negative, which lets one set of formulas cover leaders on
//! either side.

/// Rectangle footprint shared by both vehicles of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleDims {
    /// Vehicle length in meters.
    pub length: f64,
    /// Vehicle width in meters.
    pub width: f64,
}

impl VehicleDims {
    /// Average sedan footprint used when nothing better is known.
    pub const DEFAULT_CAR: VehicleDims = VehicleDims {
        length: 4.8,
        width: 1.6,
    };

    pub fn new(length: f64, width: f64) -> Self {
        debug_assert!(length > 0.0 && width > 0.0);
        Self { length, width }
    }
}

/// Instantaneous relative geometry and kinematics of an ego–leader pair.
///
/// `s0_lon` is the front-to-front longitudinal spacing (sensor range plus
/// leader length); `s0_lat` the signed center-to-center lateral offset of
/// the leader. Speeds are in m/s, ego (`v_*`) and leader (`v0_*`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairState {
    pub s0_lon: f64,
    pub s0_lat: f64,
    pub v_lon: f64,
    pub v_lat: f64,
    pub v0_lon: f64,
    pub v0_lat: f64,
}

impl PairState {
    /// Mirrors the lateral axis so the leader offset is non-negative.
    fn canonical(self) -> Self {
        if self.s0_lat < 0.0 {
            Self {
                s0_lat: -self.s0_lat,
                v_lat: -self.v_lat,
                v0_lat: -self.v0_lat,
                ..self
            }
        } else {
            self
        }
    }
}

/// A time-to-collision component; `NoCollision` plays the role of the
/// infinite branch and never compares smaller than a finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ttc {
    Seconds(f64),
    NoCollision,
}

impl Ttc {
    pub fn is_finite(self) -> bool {
        matches!(self, Ttc::Seconds(_))
    }

    pub fn seconds(self) -> Option<f64> {
        match self {
            Ttc::Seconds(t) => Some(t),
            Ttc::NoCollision => None,
        }
    }

    fn min(self, other: Ttc) -> Ttc {
        match (self, other) {
            (Ttc::Seconds(a), Ttc::Seconds(b)) => Ttc::Seconds(if b < a { b } else { a }),
            (Ttc::Seconds(a), Ttc::NoCollision) => Ttc::Seconds(a),
            (Ttc::NoCollision, b) => b,
        }
    }
}

/// Which collision face the combined measure predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictKind {
    None,
    RearEnd,
    Sideswipe,
}

/// Longitudinal, lateral and combined TTC plus the conflict classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtcResult {
    pub ttc_lon: Ttc,
    pub ttc_lat: Ttc,
    pub ttc_2d: Ttc,
    pub conflict_kind: ConflictKind,
}

/// Time for the follower's front to reach the leader's rear, provided the
/// rectangles still overlap laterally at that moment.
///
/// Finite exactly when the longitudinal gap is open (`s0_lon > l`), the
/// follower closes on the leader (`v_lon > v0_lon`) and the remaining
/// lateral distance at contact stays below the vehicle width.
pub fn ttc_longitudinal(p: &PairState, dims: &VehicleDims) -> Ttc {
    let p = p.canonical();
    if p.s0_lon > dims.length && p.v_lon > p.v0_lon {
        let t = (p.s0_lon - dims.length) / (p.v_lon - p.v0_lon);
        let s1_lat = p.s0_lat - (p.v_lat - p.v0_lat) * t;
        if s1_lat < dims.width {
            return Ttc::Seconds(t);
        }
    }
    Ttc::NoCollision
}

/// Time for one side of the follower to reach the other side of the
/// leader, provided the rectangles still overlap longitudinally then.
pub fn ttc_lateral(p: &PairState, dims: &VehicleDims) -> Ttc {
    let p = p.canonical();
    if p.s0_lat > dims.width && p.v_lat > p.v0_lat {
        let t = (p.s0_lat - dims.width) / (p.v_lat - p.v0_lat);
        let s1_lon = p.s0_lon - (p.v_lon - p.v0_lon) * t;
        if s1_lon < dims.length {
            return Ttc::Seconds(t);
        }
    }
    Ttc::NoCollision
}

/// Combined 2D-TTC: minimum of the two components, with the smaller one
/// deciding the kind. A longitudinal/lateral tie counts as rear-end.
pub fn ttc_2d(p: &PairState, dims: &VehicleDims) -> TtcResult {
    let lon = ttc_longitudinal(p, dims);
    let lat = ttc_lateral(p, dims);
    let combined = lon.min(lat);
    let conflict_kind = match (lon, lat) {
        (Ttc::NoCollision, Ttc::NoCollision) => ConflictKind::None,
        (Ttc::Seconds(tl), Ttc::Seconds(tt)) if tt < tl => ConflictKind::Sideswipe,
        (Ttc::Seconds(_), _) => ConflictKind::RearEnd,
        (Ttc::NoCollision, Ttc::Seconds(_)) => ConflictKind::Sideswipe,
    };
    TtcResult {
        ttc_lon: lon,
        ttc_lat: lat,
        ttc_2d: combined,
        conflict_kind,
    }
}

/// A pair is involved in a conflict when its 2D-TTC is strictly below the
/// threshold; a value exactly at the threshold is safe.
pub fn classify_risk(t: &TtcResult, threshold: f64) -> bool {
    debug_assert!(threshold > 0.0);
    match t.ttc_2d {
        Ttc::Seconds(s) => s < threshold,
        Ttc::NoCollision => false,
    }
}

/// Conventional one-dimensional TTC (same-lane car following). Kept for the
/// reduction checks: with zero lateral offset and zero lateral speeds the
/// 2D measure collapses to this.
pub fn ttc_conventional(s0: f64, length: f64, v: f64, v0: f64) -> Ttc {
    if v > v0 && s0 > length {
        Ttc::Seconds((s0 - length) / (v - v0))
    } else {
        Ttc::NoCollision
    }
}

/// Lateral reflection used by the symmetry property tests.
pub fn mirror_lateral(p: &PairState) -> PairState {
    PairState {
        s0_lat: -p.s0_lat,
        v_lat: -p.v_lat,
        v0_lat: -p.v0_lat,
        ..*p
    }
}
