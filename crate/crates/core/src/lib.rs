//! Calibration and quasi-static simulation toolkit for optical tactile sensors.
//!
//! The crate covers the full physics pipeline used to turn gel-sensor hardware
//! into dense force/deformation imagery, without requiring any hardware:
//!
//! - [`material`] — hyperelastic constitutive models (Neo-Hookean, Mooney-Rivlin,
//!   Ogden, Yeoh) plus a linear-elastic reference, invariants, Cauchy stress, and
//!   Yeoh parameter fitting from uniaxial/equibiaxial stress-strain data.
//! - [`fem`] — quasi-static nonlinear finite-element indentation of a gel volume
//!   by rigid indenters with frictional penalty contact, stepped through keypoint
//!   displacement sequences.
//! - [`geometry`] — indenter patch generation from arbitrary surface meshes,
//!   STL I/O, and spatial search (k-d tree, closest point on triangle).
//! - [`trajectory`] — contact-interval detection, Butterworth filtering, and
//!   keypoint extraction from dense 6-DoF pose + force streams.
//! - [`projection`] — learned 2D image ↔ 3D gel-surface correspondence and
//!   rasterization of simulation fields into five 2D tensor images.
//! - [`calibration`] — baseline-image adaptation, sensor-frame force transforms,
//!   sim-to-real offset ratios, and a tree-ensemble residual force corrector.
//! - [`contact`] — thresholding, 8-connected clustering, and tracking of contact
//!   regions in per-pixel force fields.
//! - [`planning`] — two-finger kinematics, manipulability, contact-graph
//!   construction with Dijkstra planning, RANSAC axis fitting, and the fingertip
//!   pose sweep.
//! - [`synth`] — synthetic generators standing in for motion-capture and
//!   force/torque hardware.
//! - [`pipeline`] — the end-to-end demo tying the stages together.
//!
//! Units are mm / N / MPa throughout (tonne-mm-s consistent system), so typical
//! published constants for silicone gels can be used verbatim.
//!
//! Each major capability has a runnable example under `examples/`; start with
//! `cargo run --release --example full_pipeline`.

pub mod calibration;
pub mod contact;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod material;
pub mod pipeline;
pub mod planning;
pub mod projection;
pub mod synth;
pub mod trajectory;

pub use error::{Error, Result};
