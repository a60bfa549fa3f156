//! Pinch a coin lying on a table. The fingertips rise as the fingers close,
//! so the arm descends by the same amount to keep the cushions at the coin.

use gripkit::geometry::{forward_kinematics, GripperGeometry};
use gripkit::perception::ObjectEstimate;
use gripkit::planner::{plan_pinch_grasp, PlannerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = GripperGeometry::default();
    let coin = ObjectEstimate::from_extents([0.4, 0.1, 0.0015], [0.024, 0.024, 0.003]);

    let plan = plan_pinch_grasp(&geom, &coin, 0.0, &PlannerConfig::default())?;
    println!("{:?} grasp, {:?} approach", plan.kind, plan.approach);
    println!("theta,arm_mm,tip_height_mm");
    for &(theta, arm) in &plan.arm_compensation {
        let tip = forward_kinematics(&geom, theta)?.y_tip + arm;
        println!("{theta:.3},{arm:.4},{tip:.6}");
    }
    Ok(())
}
