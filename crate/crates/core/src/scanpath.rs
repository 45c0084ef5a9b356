//! Laser toolpaths: segment plans, discretization into timed scan points,
//! residual heat factor (RHF) history, and the bundled AFRL case presets.
//!
//! Symbol housing: the RHF time threshold (`t_thresh`) is a duration in
//! seconds; it is unrelated to temperature.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 3D position in meters.
pub type Vec3 = [f64; 3];

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("unknown case id '{0}'; valid ids are A1..A11, B1, B2, C1..C6")]
    UnknownCase(String),
    #[error("invalid scan segment: {0}")]
    InvalidSegment(String),
}

/// One straight segment of the toolpath.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanSegment {
    /// Segment start (m).
    pub start: Vec3,
    /// Segment end (m).
    pub end: Vec3,
    /// Scan speed (m/s).
    pub speed: f64,
    /// Laser power (W).
    pub power: f64,
    /// Whether the laser is on over this segment.
    pub laser_on: bool,
}

impl ScanSegment {
    pub fn length(&self) -> f64 {
        let dx = self.end[0] - self.start[0];
        let dy = self.end[1] - self.start[1];
        let dz = self.end[2] - self.start[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if !(self.speed > 0.0) {
            return Err(ScanError::InvalidSegment(format!(
                "speed must be positive, got {}",
                self.speed
            )));
        }
        if self.laser_on && self.length() == 0.0 {
            return Err(ScanError::InvalidSegment(
                "laser-on segment must have distinct start and end".into(),
            ));
        }
        Ok(())
    }
}

/// Full toolpath: ordered segments plus layer/hatch/dwell bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanPlan {
    pub segments: Vec<ScanSegment>,
    /// Powder layer thickness (m); 0 for single-layer plans.
    pub layer_thickness: f64,
    /// Hatch spacing between adjacent tracks (m); 0 for single tracks.
    pub hatch_spacing: f64,
    /// Laser-off dwell between tracks or layers (s).
    pub dwell_time: f64,
    /// Number of layers; segments are repeated per layer by the solver.
    pub n_layers: usize,
}

impl ScanPlan {
    /// Single straight track along +x at z = 0.
    pub fn single_track(length: f64, power: f64, speed: f64) -> Self {
        Self {
            segments: vec![ScanSegment {
                start: [0.0, 0.0, 0.0],
                end: [length, 0.0, 0.0],
                speed,
                power,
                laser_on: true,
            }],
            layer_thickness: 0.0,
            hatch_spacing: 0.0,
            dwell_time: 0.0,
            n_layers: 1,
        }
    }

    /// Serpentine multi-track raster in the xy-plane: `n_tracks` tracks of
    /// `track_length` along x, stepping `hatch` in +y, alternating direction.
    pub fn serpentine(
        track_length: f64,
        n_tracks: usize,
        hatch: f64,
        power: f64,
        speed: f64,
        dwell_time: f64,
    ) -> Self {
        let mut segments = Vec::with_capacity(n_tracks);
        for i in 0..n_tracks {
            let y = i as f64 * hatch;
            let (x0, x1) = if i % 2 == 0 {
                (0.0, track_length)
            } else {
                (track_length, 0.0)
            };
            segments.push(ScanSegment {
                start: [x0, y, 0.0],
                end: [x1, y, 0.0],
                speed,
                power,
                laser_on: true,
            });
        }
        Self {
            segments,
            layer_thickness: 0.0,
            hatch_spacing: hatch,
            dwell_time,
            n_layers: 1,
        }
    }

    /// Unidirectional thin-wall plan: the same track re-scanned on every layer.
    pub fn thin_wall(
        track_length: f64,
        power: f64,
        speed: f64,
        layer_thickness: f64,
        n_layers: usize,
        dwell_time: f64,
    ) -> Self {
        let mut plan = Self::single_track(track_length, power, speed);
        plan.layer_thickness = layer_thickness;
        plan.n_layers = n_layers;
        plan.dwell_time = dwell_time;
        plan
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        for seg in &self.segments {
            seg.validate()?;
        }
        if self.dwell_time < 0.0 {
            return Err(ScanError::InvalidSegment("dwell_time must be >= 0".into()));
        }
        if self.n_layers > 1 && !(self.layer_thickness > 0.0) {
            return Err(ScanError::InvalidSegment(
                "multi-layer plan needs positive layer_thickness".into(),
            ));
        }
        Ok(())
    }

    /// Total laser-on path length per layer (m).
    pub fn scan_length(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.laser_on)
            .map(|s| s.length())
            .sum()
    }

    /// Wall-clock duration of one layer including inter-segment dwell (s).
    pub fn layer_duration(&self) -> f64 {
        let scan: f64 = self.segments.iter().map(|s| s.length() / s.speed).sum();
        let dwells = self.segments.len().saturating_sub(1) as f64 * self.dwell_time;
        scan + dwells
    }
}

/// One discretized point of the toolpath.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanPoint {
    /// Beam position (m).
    pub position: Vec3,
    /// Elapsed time since the start of the build (s).
    pub time: f64,
    /// Normalized laser power: 1 when the laser is on, 0 otherwise.
    pub normalized_power: u8,
    /// Power of the owning segment (W).
    pub segment_power: f64,
    /// Speed of the owning segment (m/s).
    pub segment_speed: f64,
    /// Layer index this point belongs to.
    pub layer: usize,
}

/// RHF thresholds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct RhfConfig {
    /// Distance threshold R (m).
    pub r: f64,
    /// Time threshold (s).
    pub t_thresh: f64,
}

impl Default for RhfConfig {
    fn default() -> Self {
        Self { r: 2e-4, t_thresh: 2e-3 }
    }
}

/// Discretize a plan into timed points spaced `speed * dt` along each
/// segment. Dwell periods emit laser-off points held at the next segment's
/// start position so elapsed-time bookkeeping stays uniform. For multi-layer
/// plans the segment list repeats per layer with a dwell between layers.
pub fn discretize(plan: &ScanPlan, dt: f64) -> Vec<ScanPoint> {
    assert!(dt > 0.0, "dt must be positive");
    let mut points = Vec::new();
    if plan.segments.is_empty() {
        return points;
    }
    let mut time = 0.0;
    let mut first = true;
    for layer in 0..plan.n_layers.max(1) {
        for seg in &plan.segments {
            // dwell precedes every segment except the very first of the build
            if !first && plan.dwell_time > 0.0 {
                let n_dwell = (plan.dwell_time / dt).round() as usize;
                for _ in 0..n_dwell {
                    time += dt;
                    points.push(ScanPoint {
                        position: seg.start,
                        time,
                        normalized_power: 0,
                        segment_power: seg.power,
                        segment_speed: seg.speed,
                        layer,
                    });
                }
            }
            let len = seg.length();
            let step = seg.speed * dt;
            let n_steps = if len == 0.0 { 0 } else { ((len / step).round() as usize).max(1) };
            let dir = if len > 0.0 {
                [
                    (seg.end[0] - seg.start[0]) / len,
                    (seg.end[1] - seg.start[1]) / len,
                    (seg.end[2] - seg.start[2]) / len,
                ]
            } else {
                [0.0, 0.0, 0.0]
            };
            // the segment start shares its tick with the previous emission;
            // only the very first point of the build emits at k = 0
            let k0 = usize::from(!first);
            for k in k0..=n_steps {
                let s = (k as f64 * step).min(len);
                if k > 0 {
                    time += dt;
                }
                points.push(ScanPoint {
                    position: [
                        seg.start[0] + dir[0] * s,
                        seg.start[1] + dir[1] * s,
                        seg.start[2] + dir[2] * s,
                    ],
                    time,
                    normalized_power: u8::from(seg.laser_on),
                    segment_power: seg.power,
                    segment_speed: seg.speed,
                    layer,
                });
            }
            first = false;
        }
    }
    points
}

/// Raw residual heat factor at point `i`: the sum over earlier points within
/// the distance and time thresholds of the quadratic-linear falloff kernel,
/// weighted by the normalized laser power of the earlier point.
pub fn rhf_raw(i: usize, points: &[ScanPoint], cfg: &RhfConfig) -> f64 {
    let pi = &points[i];
    let mut acc = 0.0;
    // walk backwards; points older than the time threshold never re-enter
    for k in (0..i).rev() {
        let pk = &points[k];
        let t_ik = pi.time - pk.time;
        if t_ik >= cfg.t_thresh {
            break;
        }
        if pk.normalized_power == 0 {
            continue;
        }
        let dx = pi.position[0] - pk.position[0];
        let dy = pi.position[1] - pk.position[1];
        let dz = pi.position[2] - pk.position[2];
        let d_ik = (dx * dx + dy * dy + dz * dz).sqrt();
        if d_ik >= cfg.r {
            continue;
        }
        let wd = (cfg.r - d_ik) / cfg.r;
        let wt = (cfg.t_thresh - t_ik) / cfg.t_thresh;
        acc += wd * wd * wt;
    }
    acc
}

/// Normalized RHF for every point: raw values divided by the raw value at
/// the laser-on point nearest the midpoint of the total scan duration. A
/// degenerate path with zero normalization constant yields all ones.
pub fn rhf_normalized(points: &[ScanPoint], cfg: &RhfConfig) -> Vec<f64> {
    if points.is_empty() {
        return Vec::new();
    }
    let raw: Vec<f64> = (0..points.len()).map(|i| rhf_raw(i, points, cfg)).collect();
    let t_mid = 0.5 * (points[0].time + points[points.len() - 1].time);
    let mut anchor = None;
    let mut best = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        if p.normalized_power == 0 {
            continue;
        }
        let d = (p.time - t_mid).abs();
        if d < best {
            best = d;
            anchor = Some(i);
        }
    }
    let rhf_c = anchor.map(|i| raw[i]).unwrap_or(0.0);
    if rhf_c == 0.0 {
        return vec![1.0; points.len()];
    }
    raw.iter().map(|v| v / rhf_c).collect()
}

/// AFRL case presets.
///
/// Single tracks (A1..A11) carry the tabulated power and speed on a 1 mm
/// track (the source tables give no track length; 1 mm reaches steady state).
/// Thin walls (B1, B2) are 10 unidirectional 5 mm layers of 40 um. Multi-track
/// planes (C1..C6) are serpentine rasters with a 0.5 ms dwell.
pub fn afrl_preset(case_id: &str) -> Result<ScanPlan, ScanError> {
    const A_TRACK_LEN: f64 = 1.0e-3;
    const B_DWELL: f64 = 1.0e-3;
    const C_DWELL: f64 = 0.5e-3;
    let mm_s = 1e-3;
    let plan = match case_id {
        "A1" | "A2" | "A9" => ScanPlan::single_track(A_TRACK_LEN, 300.0, 1230.0 * mm_s),
        "A3" => ScanPlan::single_track(A_TRACK_LEN, 290.0, 953.0 * mm_s),
        "A4" => ScanPlan::single_track(A_TRACK_LEN, 370.0, 1230.0 * mm_s),
        "A5" => ScanPlan::single_track(A_TRACK_LEN, 225.0, 1230.0 * mm_s),
        "A6" => ScanPlan::single_track(A_TRACK_LEN, 290.0, 1588.0 * mm_s),
        "A7" => ScanPlan::single_track(A_TRACK_LEN, 241.0, 990.0 * mm_s),
        "A8" => ScanPlan::single_track(A_TRACK_LEN, 349.0, 1430.0 * mm_s),
        "A10" => ScanPlan::single_track(A_TRACK_LEN, 349.0, 1058.0 * mm_s),
        "A11" => ScanPlan::single_track(A_TRACK_LEN, 241.0, 1529.0 * mm_s),
        "B1" => ScanPlan::thin_wall(5.0e-3, 300.0, 1230.0 * mm_s, 40e-6, 10, B_DWELL),
        "B2" => ScanPlan::thin_wall(5.0e-3, 241.0, 1529.0 * mm_s, 40e-6, 10, B_DWELL),
        "C1" => ScanPlan::serpentine(3.0e-3, 30, 0.1e-3, 300.0, 1230.0 * mm_s, C_DWELL),
        "C2" => ScanPlan::serpentine(10.0e-3, 30, 0.1e-3, 300.0, 1230.0 * mm_s, C_DWELL),
        "C3" => ScanPlan::serpentine(10.0e-3, 40, 0.075e-3, 300.0, 1230.0 * mm_s, C_DWELL),
        "C4" => ScanPlan::serpentine(10.0e-3, 24, 0.125e-3, 300.0, 1230.0 * mm_s, C_DWELL),
        "C5" => ScanPlan::serpentine(10.0e-3, 30, 0.1e-3, 300.0, 1230.0 * mm_s, C_DWELL),
        "C6" => ScanPlan::serpentine(15.0e-3, 30, 0.1e-3, 290.0, 953.0 * mm_s, C_DWELL),
        other => return Err(ScanError::UnknownCase(other.to_string())),
    };
    Ok(plan)
}

/// Laser power and scan speed (W, mm/s) for the single-track cases.
pub fn afrl_case_power_speed(case_id: &str) -> Option<(f64, f64)> {
    let pv = match case_id {
        "A1" | "A2" | "A9" | "B1" | "C1" | "C2" | "C3" | "C4" | "C5" => (300.0, 1230.0),
        "A3" | "C6" => (290.0, 953.0),
        "A4" => (370.0, 1230.0),
        "A5" => (225.0, 1230.0),
        "A6" => (290.0, 1588.0),
        "A7" => (241.0, 990.0),
        "A8" => (349.0, 1430.0),
        "A10" => (349.0, 1058.0),
        "A11" | "B2" => (241.0, 1529.0),
        _ => return None,
    };
    Some(pv)
}

/// All valid preset ids.
pub const ALL_CASE_IDS: [&str; 19] = [
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "B1", "B2", "C1", "C2",
    "C3", "C4", "C5", "C6",
];
