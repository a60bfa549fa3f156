//! Open-close cycle through a drive with backlash and a fingertip X bias.
//! The closing and opening branches separate by the dead band. The bias is
//! mirrored, so a negative value spreads both fingertips outward.

use gripkit::geometry::{forward_kinematics, GripperGeometry, DEFAULT_STEP};
use gripkit::sim::{open_close_cycle, simulate_free, Direction, PerturbationModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = GripperGeometry::default();
    let cmds = open_close_cycle(&geom, DEFAULT_STEP)?;
    let model = PerturbationModel { x_bias: -8.0, backlash_width: 0.04, noise_sd: 0.2, seed: 7 };
    let trace = simulate_free(&geom, &cmds, &model)?;
    print!("{}", trace.to_csv());

    let mut gap = 0.0f64;
    for open in trace.with_direction(Direction::Opening) {
        if let Some(close) = trace.with_direction(Direction::Closing).find(|c| c.theta == open.theta) {
            gap = gap.max((close.x_right - close.x_left) - (open.x_right - open.x_left));
        }
    }
    let ideal = forward_kinematics(&geom, geom.theta_open)?.x_left;
    eprintln!("largest closing/opening aperture gap {gap:.2} mm");
    eprintln!("left fingertip offset at open {:.2} mm", trace.records[0].x_left - ideal);
    Ok(())
}
