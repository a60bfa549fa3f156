//! Quasi-static simulation of how the physical gripper departs from the
//! ideal kinematic model.

mod flex;
mod free;
mod slide;

use thiserror::Error;

pub use flex::{flex_feedback_direction, FeedbackDirection, FlexFeedbackConfig};
pub use free::{
    open_close_cycle, simulate_free, Direction, FreeRecord, FreeTrace, PerturbationModel, FREE_CSV_HEADER,
    X_BIAS_CAP_MM,
};
pub use slide::{simulate_slide, Phase, SlideConfig, SlideRecord, SlideSummary, SlideTrace, SLIDE_CSV_HEADER};

use crate::geometry::GeometryError;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("fingertips never reach the surface")]
    NoContact,
    #[error("need at least two trace records")]
    InsufficientData,
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
