//! Contact-interval detection and keypoint extraction from 6-DoF pose + force
//! streams, plus conversion into simulation step configurations.

mod filter;

pub use filter::{butterworth_lowpass, prominent_extrema, Peak};

use nalgebra::{Isometry3, Matrix3, Point3, Rotation3, Translation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default contact-initiation force threshold, N.
pub const F_CONTACT: f64 = 1.5;
/// Default detachment force threshold, N.
pub const F_DETACH: f64 = 1.1;
/// Default pre-contact rewind window, s.
pub const PRE_WINDOW: f64 = 0.3;
/// Default cap on keypoints per interval.
pub const MAX_KEYPOINTS: usize = 12;
/// Default peak prominence as a fraction of a channel's peak-to-peak range.
pub const PROMINENCE_FRACTION: f64 = 0.1;

/// One sample of a tracked indenter's pose and wrench.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoseSample {
    /// Timestamp, s. Strictly increasing within a stream.
    pub t: f64,
    /// Position, mm.
    pub position: Point3<f64>,
    /// Orientation (unit quaternion).
    pub rotation: UnitQuaternion<f64>,
    /// Force, N.
    pub force: Vector3<f64>,
    /// Torque, N·mm.
    pub torque: Vector3<f64>,
    pub indenter_id: u32,
}

impl PoseSample {
    pub fn pose(&self) -> Isometry3<f64> {
        Isometry3::from_parts(Translation3::from(self.position.coords), self.rotation)
    }
}

/// Half-open sample range `[start, end)` of one indenter's contact episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactInterval {
    pub start: usize,
    pub end: usize,
    pub indenter_id: u32,
}

/// Hysteresis contact detection over `‖force‖` for a single-indenter stream.
///
/// Contact begins when the magnitude reaches `f_contact` and ends at the first
/// sample below `f_detach`; each interval start is then rewound by
/// `pre_window` seconds (clamped to the stream start and to the previous
/// interval's end).
pub fn detect_contact_intervals(
    stream: &[PoseSample],
    f_contact: f64,
    f_detach: f64,
    pre_window: f64,
) -> Result<Vec<ContactInterval>> {
    if f_detach >= f_contact {
        return Err(Error::InvalidInput(format!(
            "hysteresis requires f_detach < f_contact, got {f_detach} >= {f_contact}"
        )));
    }
    if stream.is_empty() {
        return Ok(Vec::new());
    }
    let id = stream[0].indenter_id;
    if stream.iter().any(|s| s.indenter_id != id) {
        return Err(Error::InvalidInput(
            "detect_contact_intervals expects a single-indenter stream; split by id first".into(),
        ));
    }
    let mut intervals = Vec::new();
    let mut open: Option<usize> = None;
    for (i, s) in stream.iter().enumerate() {
        let mag = s.force.norm();
        match open {
            None if mag >= f_contact => open = Some(i),
            Some(start) if mag < f_detach => {
                intervals.push((start, i));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        intervals.push((start, stream.len()));
    }

    let mut out: Vec<ContactInterval> = Vec::with_capacity(intervals.len());
    for (start, end) in intervals {
        let t_min = stream[start].t - pre_window;
        let mut s = start;
        while s > 0 && stream[s - 1].t >= t_min {
            s -= 1;
        }
        if let Some(prev) = out.last() {
            s = s.max(prev.end);
        }
        out.push(ContactInterval {
            start: s,
            end,
            indenter_id: id,
        });
    }
    Ok(out)
}

/// Splits a mixed stream by indenter id (original order preserved) and runs
/// interval detection on each substream.
pub fn detect_contact_intervals_multi(
    stream: &[PoseSample],
    f_contact: f64,
    f_detach: f64,
    pre_window: f64,
) -> Result<Vec<(u32, Vec<PoseSample>, Vec<ContactInterval>)>> {
    let mut ids: Vec<u32> = stream.iter().map(|s| s.indenter_id).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut out = Vec::new();
    for id in ids {
        let sub: Vec<PoseSample> = stream
            .iter()
            .filter(|s| s.indenter_id == id)
            .copied()
            .collect();
        let intervals = detect_contact_intervals(&sub, f_contact, f_detach, pre_window)?;
        out.push((id, sub, intervals));
    }
    Ok(out)
}

/// Time spans `[t0, t1)` where all listed indenters are in contact at once,
/// computed as the pairwise overlap of their interval time ranges.
pub fn simultaneous_contact_spans(
    streams: &[(u32, Vec<PoseSample>, Vec<ContactInterval>)],
) -> Vec<(f64, f64, Vec<u32>)> {
    let mut spans: Vec<(f64, f64, u32)> = Vec::new();
    for (id, samples, intervals) in streams {
        for iv in intervals {
            let t0 = samples[iv.start].t;
            let t1 = if iv.end < samples.len() {
                samples[iv.end].t
            } else {
                samples.last().map(|s| s.t).unwrap_or(t0)
            };
            spans.push((t0, t1, *id));
        }
    }
    let mut out = Vec::new();
    for (i, a) in spans.iter().enumerate() {
        for b in spans.iter().skip(i + 1) {
            if a.2 == b.2 {
                continue;
            }
            let lo = a.0.max(b.0);
            let hi = a.1.min(b.1);
            if lo < hi {
                out.push((lo, hi, vec![a.2.min(b.2), a.2.max(b.2)]));
            }
        }
    }
    out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    out
}

/// A salient trajectory sample selected for simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Keypoint {
    /// Index of the source sample within its interval.
    pub sample_index: usize,
    pub t: f64,
    pub position: Point3<f64>,
    pub rotation: UnitQuaternion<f64>,
    /// Displacement from the interval's first sample, mm.
    pub delta_position: Vector3<f64>,
    /// Orientation change from the first sample as intrinsic XYZ Euler, deg.
    pub delta_euler_deg: Vector3<f64>,
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
    /// Optional reference to an associated tactile image.
    pub image_id: Option<u64>,
    /// Scale-free motion magnitude used for prioritization.
    pub motion_magnitude: f64,
}

/// Intrinsic XYZ Euler angles (radians) of a rotation matrix:
/// `R = Rx(a) · Ry(b) · Rz(c)`.
pub fn euler_xyz_intrinsic(r: &Matrix3<f64>) -> (f64, f64, f64) {
    let sb = r[(0, 2)].clamp(-1.0, 1.0);
    let b = sb.asin();
    if sb.abs() < 1.0 - 1e-12 {
        let a = (-r[(1, 2)]).atan2(r[(2, 2)]);
        let c = (-r[(0, 1)]).atan2(r[(0, 0)]);
        (a, b, c)
    } else {
        // Gimbal lock: fold the lost degree of freedom into `a`.
        let a = r[(1, 0)].atan2(r[(1, 1)]);
        (a, b, 0.0)
    }
}

/// Rotation from intrinsic XYZ Euler angles in degrees.
pub fn rotation_from_euler_deg(e: &Vector3<f64>) -> Rotation3<f64> {
    let (a, b, c) = (
        e.x.to_radians(),
        e.y.to_radians(),
        e.z.to_radians(),
    );
    Rotation3::from_axis_angle(&Vector3::x_axis(), a)
        * Rotation3::from_axis_angle(&Vector3::y_axis(), b)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), c)
}

/// Extracts keypoints from one contact interval.
///
/// The six relative-motion channels (Δp, intrinsic-XYZ Euler of ΔR) are
/// low-pass filtered (first-order Butterworth at `fs/3`, zero phase), then
/// prominent extrema are detected per channel with a minimum spacing of
/// `1.5 / f_image` seconds. Channel peaks are unioned with the interval
/// endpoints, deduplicated within that same spacing, and capped at
/// `max_count` by dropping the smallest motion magnitudes (never endpoints).
pub fn extract_keypoints(
    interval: &[PoseSample],
    f_image: f64,
    max_count: Option<usize>,
) -> Result<Vec<Keypoint>> {
    if interval.is_empty() {
        return Err(Error::InvalidInput("empty keypoint interval".into()));
    }
    if !(f_image > 0.0) {
        return Err(Error::InvalidInput(format!(
            "image rate must be positive, got {f_image}"
        )));
    }
    let n = interval.len();
    let max_count = max_count.unwrap_or(MAX_KEYPOINTS).max(2);
    if n == 1 {
        return Ok(vec![make_keypoint(interval, 0, &[0.0; 6])]);
    }

    let fs = estimate_sample_rate(interval);
    let min_dt = 1.5 / f_image;
    let min_spacing = ((min_dt * fs).ceil() as usize).max(1);

    // Six relative-motion channels against the interval's first sample.
    let p0 = interval[0].position;
    let r0 = interval[0].rotation;
    let mut channels: Vec<Vec<f64>> = vec![Vec::with_capacity(n); 6];
    for s in interval {
        let dp = s.position - p0;
        let dr = (r0.inverse() * s.rotation).to_rotation_matrix();
        let (a, b, c) = euler_xyz_intrinsic(dr.matrix());
        for (k, v) in [
            dp.x,
            dp.y,
            dp.z,
            a.to_degrees(),
            b.to_degrees(),
            c.to_degrees(),
        ]
        .into_iter()
        .enumerate()
        {
            channels[k].push(v);
        }
    }

    let mut filtered = Vec::with_capacity(6);
    let mut ranges = [0.0f64; 6];
    for (k, ch) in channels.iter().enumerate() {
        let f = if n >= 8 {
            butterworth_lowpass(ch, fs, fs / 3.0)?
        } else {
            ch.clone()
        };
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ranges[k] = hi - lo;
        filtered.push(f);
    }

    // Scale-free per-sample motion magnitude over normalized channels.
    let magnitude = |i: usize| -> f64 {
        let mut acc = 0.0;
        for k in 0..6 {
            if ranges[k] > 0.0 {
                let v = filtered[k][i] / ranges[k];
                acc += v * v;
            }
        }
        acc.sqrt()
    };
    let magnitudes: Vec<f64> = (0..n).map(magnitude).collect();

    let mut candidates: Vec<usize> = Vec::new();
    for k in 0..6 {
        if ranges[k] <= 0.0 {
            continue;
        }
        for peak in prominent_extrema(&filtered[k], PROMINENCE_FRACTION * ranges[k], min_spacing) {
            candidates.push(peak.index);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&i| i != 0 && i != n - 1);

    // Endpoints are always present; interior candidates compete by magnitude
    // under the spacing constraint.
    let mut selected: Vec<usize> = vec![0, n - 1];
    let mut by_magnitude = candidates.clone();
    by_magnitude.sort_by(|&a, &b| {
        magnitudes[b]
            .partial_cmp(&magnitudes[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    for idx in by_magnitude {
        if selected.iter().all(|&s| s.abs_diff(idx) >= min_spacing) {
            selected.push(idx);
        }
    }
    // Cap the total, dropping the weakest interior keypoints first.
    while selected.len() > max_count {
        let weakest = selected
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0 && s != n - 1)
            .min_by(|a, b| magnitudes[*a.1].partial_cmp(&magnitudes[*b.1]).unwrap())
            .map(|(pos, _)| pos);
        match weakest {
            Some(pos) => {
                selected.remove(pos);
            }
            None => break,
        }
    }
    selected.sort_unstable();
    selected.dedup();

    let deltas: Vec<[f64; 6]> = (0..n)
        .map(|i| {
            [
                channels[0][i],
                channels[1][i],
                channels[2][i],
                channels[3][i],
                channels[4][i],
                channels[5][i],
            ]
        })
        .collect();
    Ok(selected
        .into_iter()
        .map(|i| {
            let mut kp = make_keypoint(interval, i, &deltas[i]);
            kp.motion_magnitude = magnitudes[i];
            kp
        })
        .collect())
}

fn make_keypoint(interval: &[PoseSample], i: usize, delta: &[f64; 6]) -> Keypoint {
    let s = &interval[i];
    Keypoint {
        sample_index: i,
        t: s.t,
        position: s.position,
        rotation: s.rotation,
        delta_position: Vector3::new(delta[0], delta[1], delta[2]),
        delta_euler_deg: Vector3::new(delta[3], delta[4], delta[5]),
        force: s.force,
        torque: s.torque,
        image_id: None,
        motion_magnitude: 0.0,
    }
}

fn estimate_sample_rate(interval: &[PoseSample]) -> f64 {
    let mut dts: Vec<f64> = interval.windows(2).map(|w| w[1].t - w[0].t).collect();
    dts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dt = dts[dts.len() / 2].max(1e-9);
    1.0 / dt
}

/// One rigid-motion step between consecutive keypoints: translation in mm and
/// intrinsic XYZ Euler rotation in degrees, both expressed in the gel frame.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
pub struct MotionStep {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl MotionStep {
    pub fn translation(&self) -> Vector3<f64> {
        Vector3::new(self.dx, self.dy, self.dz)
    }

    pub fn rotation(&self) -> Rotation3<f64> {
        rotation_from_euler_deg(&Vector3::new(self.rx, self.ry, self.rz))
    }
}

/// Serializable rigid pose (translation mm + unit quaternion, xyzw).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoseSpec {
    pub translation: [f64; 3],
    pub quaternion_xyzw: [f64; 4],
}

impl PoseSpec {
    pub fn from_isometry(iso: &Isometry3<f64>) -> Self {
        let q = iso.rotation.coords;
        Self {
            translation: [iso.translation.x, iso.translation.y, iso.translation.z],
            quaternion_xyzw: [q.x, q.y, q.z, q.w],
        }
    }

    pub fn to_isometry(&self) -> Isometry3<f64> {
        let [x, y, z, w] = self.quaternion_xyzw;
        Isometry3::from_parts(
            Translation3::new(
                self.translation[0],
                self.translation[1],
                self.translation[2],
            ),
            UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(w, x, y, z)),
        )
    }
}

/// Motion plan for one indenter: initial pose in the gel frame plus ordered
/// per-step displacement vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndenterMotion {
    pub indenter_id: u32,
    pub initial_pose: PoseSpec,
    pub steps: Vec<MotionStep>,
}

/// Input configuration for a keypoint-stepped simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub indenters: Vec<IndenterMotion>,
}

impl SimConfig {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Converts a keypoint sequence into per-step displacement vectors in the gel
/// frame. `gel_frame` is the gel coordinate system expressed in the keypoints'
/// (world) frame.
pub fn to_sim_config(
    keypoints: &[Keypoint],
    gel_frame: &Isometry3<f64>,
    indenter_id: u32,
) -> Result<IndenterMotion> {
    if keypoints.is_empty() {
        return Err(Error::InvalidInput("need at least one keypoint".into()));
    }
    let inv = gel_frame.inverse();
    let poses: Vec<Isometry3<f64>> = keypoints
        .iter()
        .map(|k| {
            inv * Isometry3::from_parts(Translation3::from(k.position.coords), k.rotation)
        })
        .collect();
    for p in &poses {
        if !p.translation.vector.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("non-finite keypoint pose".into()));
        }
    }
    let steps = poses
        .windows(2)
        .map(|w| {
            let dp = w[1].translation.vector - w[0].translation.vector;
            let dr = (w[1].rotation * w[0].rotation.inverse()).to_rotation_matrix();
            let (a, b, c) = euler_xyz_intrinsic(dr.matrix());
            MotionStep {
                dx: dp.x,
                dy: dp.y,
                dz: dp.z,
                rx: a.to_degrees(),
                ry: b.to_degrees(),
                rz: c.to_degrees(),
            }
        })
        .collect();
    Ok(IndenterMotion {
        indenter_id,
        initial_pose: PoseSpec::from_isometry(&poses[0]),
        steps,
    })
}

/// Replays a motion plan: returns the pose after every step, starting with the
/// initial pose (length = steps + 1). Pure rigid-body bookkeeping.
pub fn apply_motion(motion: &IndenterMotion) -> Vec<Isometry3<f64>> {
    let mut poses = vec![motion.initial_pose.to_isometry()];
    for step in &motion.steps {
        let prev = poses.last().unwrap();
        let rot = UnitQuaternion::from_rotation_matrix(&step.rotation());
        let next = Isometry3::from_parts(
            Translation3::from(prev.translation.vector + step.translation()),
            rot * prev.rotation,
        );
        poses.push(next);
    }
    poses
}

/// Reads pose samples from CSV with header
/// `t,px,py,pz,qx,qy,qz,qw,fx,fy,fz,tx,ty,tz,indenter_id`.
pub fn read_pose_csv<R: std::io::Read>(reader: R) -> Result<Vec<PoseSample>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out: Vec<PoseSample> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != 15 {
            return Err(Error::Format(format!(
                "expected 15 columns, got {}",
                record.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            record[i]
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("bad number {:?}: {e}", &record[i])))
        };
        let q = nalgebra::Quaternion::new(num(7)?, num(4)?, num(5)?, num(6)?);
        if (q.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "quaternion at t={} is not unit norm ({})",
                &record[0],
                q.norm()
            )));
        }
        let sample = PoseSample {
            t: num(0)?,
            position: Point3::new(num(1)?, num(2)?, num(3)?),
            rotation: UnitQuaternion::from_quaternion(q),
            force: Vector3::new(num(8)?, num(9)?, num(10)?),
            torque: Vector3::new(num(11)?, num(12)?, num(13)?),
            indenter_id: record[14]
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("bad indenter id: {e}")))?,
        };
        if let Some(prev) = out.iter().rev().find(|s| s.indenter_id == sample.indenter_id) {
            if sample.t <= prev.t {
                return Err(Error::InvalidInput(format!(
                    "timestamps must be strictly increasing per stream (t={} after {})",
                    sample.t, prev.t
                )));
            }
        }
        out.push(sample);
    }
    Ok(out)
}

/// Writes pose samples in the same CSV schema accepted by [`read_pose_csv`].
pub fn write_pose_csv<W: std::io::Write>(samples: &[PoseSample], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "t", "px", "py", "pz", "qx", "qy", "qz", "qw", "fx", "fy", "fz", "tx", "ty", "tz",
        "indenter_id",
    ])?;
    for s in samples {
        let q = s.rotation.coords;
        wtr.write_record(
            [
                s.t, s.position.x, s.position.y, s.position.z, q.x, q.y, q.z, q.w, s.force.x,
                s.force.y, s.force.z, s.torque.x, s.torque.y, s.torque.z,
            ]
            .iter()
            .map(|v| format!("{v}"))
            .chain([format!("{}", s.indenter_id)]),
        )?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t: f64, f: f64) -> PoseSample {
        PoseSample {
            t,
            position: Point3::origin(),
            rotation: UnitQuaternion::identity(),
            force: Vector3::new(0.0, 0.0, f),
            torque: Vector3::zeros(),
            indenter_id: 0,
        }
    }

    fn moving_sample(t: f64, p: Point3<f64>) -> PoseSample {
        PoseSample {
            t,
            position: p,
            rotation: UnitQuaternion::identity(),
            force: Vector3::new(0.0, 0.0, 2.0),
            torque: Vector3::zeros(),
            indenter_id: 0,
        }
    }

    #[test]
    fn hand_traced_hysteresis() {
        let stream: Vec<_> = [0.5, 1.6, 2.0, 1.2, 1.0]
            .iter()
            .enumerate()
            .map(|(i, &f)| sample(i as f64, f))
            .collect();
        let intervals = detect_contact_intervals(&stream, 1.5, 1.1, 0.0).unwrap();
        assert_eq!(
            intervals,
            vec![ContactInterval {
                start: 1,
                end: 4,
                indenter_id: 0
            }]
        );
    }

    #[test]
    fn all_below_threshold_no_intervals() {
        let stream: Vec<_> = (0..10).map(|i| sample(i as f64, 1.4)).collect();
        assert!(detect_contact_intervals(&stream, 1.5, 1.1, 0.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dip_above_detach_does_not_split() {
        let forces = [0.2, 1.8, 1.2, 1.9, 0.5];
        let stream: Vec<_> = forces
            .iter()
            .enumerate()
            .map(|(i, &f)| sample(i as f64, f))
            .collect();
        let intervals = detect_contact_intervals(&stream, 1.5, 1.1, 0.0).unwrap();
        assert_eq!(intervals.len(), 1);
        assert_eq!((intervals[0].start, intervals[0].end), (1, 4));
    }

    #[test]
    fn pre_window_rewinds_start() {
        let stream: Vec<_> = [0.1, 0.2, 0.3, 1.7, 1.8, 0.4]
            .iter()
            .enumerate()
            .map(|(i, &f)| sample(0.1 * i as f64, f))
            .collect();
        let intervals = detect_contact_intervals(&stream, 1.5, 1.1, 0.25).unwrap();
        assert_eq!(intervals[0].start, 1); // 0.3 s back from t = 0.3 clamps to t >= 0.05
        assert_eq!(intervals[0].end, 5);
    }

    #[test]
    fn noise_below_hysteresis_gap_is_invariant() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        // Clean crossing profile: rise, hold, fall.
        let clean: Vec<f64> = (0..100)
            .map(|i| match i {
                0..=19 => 0.3,
                20..=69 => 2.5,
                _ => 0.2,
            })
            .collect();
        let base: Vec<_> = clean
            .iter()
            .enumerate()
            .map(|(i, &f)| sample(i as f64, f))
            .collect();
        let reference = detect_contact_intervals(&base, 1.5, 1.1, 0.0).unwrap();
        for _ in 0..20 {
            let noisy: Vec<_> = clean
                .iter()
                .enumerate()
                .map(|(i, &f)| sample(i as f64, f + rng.gen_range(-0.19..0.19)))
                .collect();
            let got = detect_contact_intervals(&noisy, 1.5, 1.1, 0.0).unwrap();
            assert_eq!(got.len(), reference.len());
        }
    }

    #[test]
    fn linear_motion_keeps_only_endpoints() {
        let stream: Vec<_> = (0..100)
            .map(|i| moving_sample(i as f64 * 0.01, Point3::new(0.0, 0.0, -0.05 * i as f64)))
            .collect();
        let kps = extract_keypoints(&stream, 30.0, None).unwrap();
        assert_eq!(kps.len(), 2);
        assert_eq!(kps[0].sample_index, 0);
        assert_eq!(kps[1].sample_index, 99);
    }

    #[test]
    fn triangle_wave_yields_three_keypoints() {
        let n = 121;
        let apex = 60;
        let stream: Vec<_> = (0..n)
            .map(|i| {
                let z = if i <= apex {
                    -(i as f64) * 0.05
                } else {
                    -(apex as f64) * 0.05 + (i - apex) as f64 * 0.05
                };
                moving_sample(i as f64 * 0.01, Point3::new(0.0, 0.0, z))
            })
            .collect();
        let kps = extract_keypoints(&stream, 30.0, None).unwrap();
        assert_eq!(kps.len(), 3, "keypoints: {:?}", kps.iter().map(|k| k.sample_index).collect::<Vec<_>>());
        assert!(kps[1].sample_index.abs_diff(apex) <= 1);
    }

    #[test]
    fn single_sample_interval() {
        let stream = vec![moving_sample(0.0, Point3::origin())];
        let kps = extract_keypoints(&stream, 30.0, None).unwrap();
        assert_eq!(kps.len(), 1);
    }

    #[test]
    fn keypoints_shift_equivariant_in_interior() {
        let wave = |i: usize| {
            let t = i as f64 / 30.0;
            (t * 2.2).sin() * 3.0
        };
        let n = 400;
        let base: Vec<_> = (0..n)
            .map(|i| moving_sample(i as f64 / 120.0, Point3::new(wave(i), 0.0, 0.0)))
            .collect();
        let k = 40;
        let delayed: Vec<_> = (0..n)
            .map(|i| {
                let src = i.saturating_sub(k);
                moving_sample(i as f64 / 120.0, Point3::new(wave(src), 0.0, 0.0))
            })
            .collect();
        let kp_base = extract_keypoints(&base, 30.0, Some(100)).unwrap();
        let kp_delayed = extract_keypoints(&delayed, 30.0, Some(100)).unwrap();
        let interior_base: Vec<usize> = kp_base
            .iter()
            .map(|p| p.sample_index)
            .filter(|&i| i > 60 && i + k < n - 60)
            .collect();
        for i in &interior_base {
            assert!(
                kp_delayed
                    .iter()
                    .any(|p| p.sample_index.abs_diff(i + k) <= 1),
                "peak at {i} did not shift by {k}: {:?}",
                kp_delayed.iter().map(|p| p.sample_index).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn keypoint_timestamps_strictly_increase() {
        let stream: Vec<_> = (0..200)
            .map(|i| {
                let t = i as f64 / 100.0;
                moving_sample(
                    t,
                    Point3::new((t * 7.0).sin(), (t * 4.0).cos() - 1.0, -t),
                )
            })
            .collect();
        let kps = extract_keypoints(&stream, 30.0, Some(8)).unwrap();
        assert!(kps.len() <= 8);
        assert_eq!(kps.first().unwrap().sample_index, 0);
        assert_eq!(kps.last().unwrap().sample_index, 199);
        for w in kps.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }

    #[test]
    fn sim_config_direct_difference() {
        let kps = vec![
            Keypoint {
                sample_index: 0,
                t: 0.0,
                position: Point3::new(1.0, 2.0, 3.0),
                rotation: UnitQuaternion::identity(),
                delta_position: Vector3::zeros(),
                delta_euler_deg: Vector3::zeros(),
                force: Vector3::zeros(),
                torque: Vector3::zeros(),
                image_id: None,
                motion_magnitude: 0.0,
            },
            Keypoint {
                sample_index: 1,
                t: 1.0,
                position: Point3::new(1.0, 1.0, 3.0),
                rotation: UnitQuaternion::identity(),
                delta_position: Vector3::new(0.0, -1.0, 0.0),
                delta_euler_deg: Vector3::zeros(),
                force: Vector3::zeros(),
                torque: Vector3::zeros(),
                image_id: None,
                motion_magnitude: 0.0,
            },
        ];
        let motion = to_sim_config(&kps, &Isometry3::identity(), 0).unwrap();
        assert_eq!(motion.steps.len(), 1);
        let s = motion.steps[0];
        assert!((s.dy + 1.0).abs() < 1e-12 && s.dx.abs() < 1e-12 && s.dz.abs() < 1e-12);
    }

    #[test]
    fn sim_config_rotated_gel_frame_composes() {
        use std::f64::consts::FRAC_PI_2;
        let gel = Isometry3::from_parts(
            Translation3::new(5.0, 0.0, 0.0),
            UnitQuaternion::from_axis_angle(&Vector3::z_axis(), FRAC_PI_2),
        );
        let wiggle = UnitQuaternion::from_axis_angle(&Vector3::x_axis(), 0.3);
        let kps: Vec<Keypoint> = [
            (Point3::new(1.0, 2.0, 3.0), UnitQuaternion::identity()),
            (Point3::new(2.0, 1.0, 3.5), wiggle),
            (
                Point3::new(2.5, 0.5, 3.0),
                wiggle * UnitQuaternion::from_axis_angle(&Vector3::y_axis(), -0.4),
            ),
        ]
        .iter()
        .enumerate()
        .map(|(i, (p, r))| Keypoint {
            sample_index: i,
            t: i as f64,
            position: *p,
            rotation: *r,
            delta_position: Vector3::zeros(),
            delta_euler_deg: Vector3::zeros(),
            force: Vector3::zeros(),
            torque: Vector3::zeros(),
            image_id: None,
            motion_magnitude: 0.0,
        })
        .collect();

        let motion = to_sim_config(&kps, &gel, 0).unwrap();
        let replayed = apply_motion(&motion);
        assert_eq!(replayed.len(), kps.len());
        for (pose, kp) in replayed.iter().zip(&kps) {
            let expected = gel.inverse()
                * Isometry3::from_parts(Translation3::from(kp.position.coords), kp.rotation);
            assert!((pose.translation.vector - expected.translation.vector).norm() < 1e-9);
            let rot_diff = (pose.rotation.to_rotation_matrix().matrix()
                - expected.rotation.to_rotation_matrix().matrix())
            .norm();
            assert!(rot_diff < 1e-9);
        }
    }

    #[test]
    fn single_keypoint_zero_steps() {
        let kp = Keypoint {
            sample_index: 0,
            t: 0.0,
            position: Point3::origin(),
            rotation: UnitQuaternion::identity(),
            delta_position: Vector3::zeros(),
            delta_euler_deg: Vector3::zeros(),
            force: Vector3::zeros(),
            torque: Vector3::zeros(),
            image_id: None,
            motion_magnitude: 0.0,
        };
        let motion = to_sim_config(&[kp], &Isometry3::identity(), 3).unwrap();
        assert!(motion.steps.is_empty());
    }

    #[test]
    fn euler_round_trip() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let e = Vector3::new(
                rng.gen_range(-80.0..80.0),
                rng.gen_range(-80.0..80.0),
                rng.gen_range(-80.0..80.0),
            );
            let r = rotation_from_euler_deg(&e);
            let (a, b, c) = euler_xyz_intrinsic(r.matrix());
            let back = rotation_from_euler_deg(&Vector3::new(
                a.to_degrees(),
                b.to_degrees(),
                c.to_degrees(),
            ));
            assert!((r.matrix() - back.matrix()).norm() < 1e-9, "e={e:?} rec=({a},{b},{c})");
        }
    }

    #[test]
    fn pose_csv_round_trip() {
        let samples = vec![
            sample(0.0, 1.0),
            sample(0.5, 2.0),
            moving_sample(1.0, Point3::new(1.0, -2.0, 3.0)),
        ];
        let mut buf = Vec::new();
        write_pose_csv(&samples, &mut buf).unwrap();
        let back = read_pose_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[2].position, samples[2].position);
    }

    #[test]
    fn csv_rejects_non_monotone_timestamps() {
        let text = "t,px,py,pz,qx,qy,qz,qw,fx,fy,fz,tx,ty,tz,indenter_id\n1.0,0,0,0,0,0,0,1,0,0,0,0,0,0,0\n0.5,0,0,0,0,0,0,1,0,0,0,0,0,0,0\n";
        assert!(read_pose_csv(text.as_bytes()).is_err());
    }
}
