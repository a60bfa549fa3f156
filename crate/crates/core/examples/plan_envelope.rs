//! Envelope grasp on a 90 mm can: the arm backs off by the slider travel so
//! the object stays at the root of the fingers while they close.

use gripkit::geometry::GripperGeometry;
use gripkit::perception::{Approach, ObjectEstimate};
use gripkit::planner::{plan_envelope_grasp, validate_plan, CapacityModel, PlannerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = GripperGeometry::default();
    let can = ObjectEstimate::from_extents([0.5, 0.0, 0.06], [0.09, 0.09, 0.12]);

    let plan = plan_envelope_grasp(&geom, &can, Approach::Horizontal, &PlannerConfig::default())?;
    println!("close to {:.4} rad over {} steps", plan.target_theta, plan.motor_trajectory.len());
    print!("{}", plan.to_csv());

    let capacity = CapacityModel::default();
    for hinged in [true, false] {
        let report = validate_plan(&plan, &geom, 0.35, &capacity, hinged)?;
        println!(
            "hinged={hinged}: capacity {:.3} kg, margin {:+.3} kg, deflection {:.1} mm, passed {}",
            report.payload_capacity_kg,
            report.payload_margin_kg,
            report.predicted_deflection_mm.unwrap_or(f64::NAN),
            report.passed
        );
    }
    Ok(())
}
