//! Print the shipped payload table, the hinge gains and the deflection
//! curves it encodes.

use gripkit::perception::Approach;
use gripkit::planner::CapacityModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = CapacityModel::default();
    println!("{}", model.label());

    for approach in [Approach::Vertical, Approach::Horizontal] {
        for hinged in [false, true] {
            let row: Vec<String> = model
                .entries(approach, hinged)
                .iter()
                .map(|(d, kg)| match kg {
                    Some(kg) => format!("{d:.0}mm={kg:.3}"),
                    None => format!("{d:.0}mm=-"),
                })
                .collect();
            println!("{approach:?} hinged={hinged}: {}", row.join(" "));
        }
        println!("  hinge gain at {} mm: {:.3}", model.reference_diameter_mm(), model.hinged_gain(approach)?);
    }

    println!("payload_kg,deflection_hinged_mm,deflection_plain_mm");
    for i in 0..=10 {
        let kg = i as f64 * 0.1;
        println!("{kg:.1},{:.2},{:.2}", model.predict_deflection(true, kg)?, model.predict_deflection(false, kg)?);
    }
    Ok(())
}
