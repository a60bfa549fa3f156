//! Close onto a flat surface in sliding mode and watch the flex sensor.

use gripkit::geometry::GripperGeometry;
use gripkit::sim::{flex_feedback_direction, simulate_slide, FlexFeedbackConfig, SlideConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = GripperGeometry::default();
    let cfg = SlideConfig { flex_gain: 0.6, flex_offset: 2.0, ..SlideConfig::closing_on_surface(&geom)? };
    let trace = simulate_slide(&geom, &cfg)?;

    print!("{}", trace.to_csv());
    let summary = trace.summary();
    eprintln!(
        "surface at y = {:.3} mm: contact from {:?} rad, closed at {} rad, peak bend {:.3} mm",
        cfg.surface_y, summary.contact_onset_theta, summary.closure_theta, summary.peak_bend
    );

    let feedback = FlexFeedbackConfig { offset: cfg.flex_offset, ..Default::default() };
    let tail = &trace.records[trace.records.len() - 5..];
    eprintln!("arm feedback at the end: {:?}", flex_feedback_direction(tail, &feedback)?);
    Ok(())
}
