//! Motor angle for a requested fingertip aperture, with the fingertip
//! velocity at that angle.
//!
//!     cargo run --example inverse_kinematics -- 75

use gripkit::geometry::{fingertip_jacobian, forward_kinematics, inverse_kinematics, GripperGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let target: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(75.0);
    let geom = GripperGeometry::default();

    let theta = inverse_kinematics(&geom, target)?;
    let state = forward_kinematics(&geom, theta)?;
    let jac = fingertip_jacobian(&geom, theta)?;

    println!("target aperture  {target:.3} mm");
    println!("motor angle      {theta:.9} rad");
    println!("reached          {:.9} mm", state.aperture());
    println!("fingertip y      {:.3} mm", state.y_tip);
    // mm of aperture per rad of motor
    println!("d aperture/dθ    {:.3} mm/rad", jac.d_aperture());
    println!("d y_tip/dθ       {:.3} mm/rad", jac.dy_tip);
    Ok(())
}
