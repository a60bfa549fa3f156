//! Sweep the motor across the operating window and print the finger state
//! as CSV. Pass a geometry JSON path to use something other than the default.
//!
//!     cargo run --example forward_kinematics [geometry.json]

use gripkit::geometry::{forward_kinematics, sample_trajectory, GripperGeometry, DEFAULT_STEP, FK_CSV_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = match std::env::args().nth(1) {
        Some(path) => GripperGeometry::load(path)?,
        None => GripperGeometry::default(),
    };

    println!("{FK_CSV_HEADER}");
    for theta in sample_trajectory(geom.theta_open, geom.theta_closed, DEFAULT_STEP)?.iter() {
        println!("{}", forward_kinematics(&geom, theta)?);
    }

    let (closed, open) = geom.aperture_range()?;
    eprintln!("aperture {open:.2} mm open, {closed:.2} mm closed");
    Ok(())
}
