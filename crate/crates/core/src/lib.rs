//! # gripkit
//!
//! Toolkit for a two-finger soft gripper whose Fin-Ray style fingers are
//! driven by a single motor through a slider-crank linkage.
//!
//! - [`geometry`]: closed-form forward/inverse kinematics of the linkage and
//!   fingers, analytic Jacobian, motor trajectory sampling.
//! - [`perception`]: point cloud I/O, multi-view merging, region cropping,
//!   object sizing and approach-direction choice.
//! - [`planner`]: envelope and pinch grasp plans with arm compensation, and
//!   validation against payload/deflection capacity data.
//! - [`sim`]: backlash/bias deviations in free motion, and sliding contact
//!   with a synthetic flex sensor.
//! - [`synth`]: seeded synthetic scenes.
//! - [`app`]: the batch commands behind the `gripkit` binary.
//!
//! Gripper quantities are millimetres and radians; point clouds are metres.
//!
//! ```
//! use gripkit::geometry::{forward_kinematics, inverse_kinematics, GripperGeometry};
//!
//! let geom = GripperGeometry::default();
//! let open = forward_kinematics(&geom, geom.theta_open).unwrap();
//! let theta = inverse_kinematics(&geom, 75.0).unwrap();
//! assert!(theta < geom.theta_open);
//! assert!(open.aperture() > 75.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod geometry;
pub mod perception;
pub mod planner;
pub mod sim;
pub mod synth;
