//! Run the shipped scenario files and print their energy breakdown.
//!
//!     cargo run --example scenario_files

use std::path::Path;

use nodesim::perf::Calibration;
use nodesim::sim::Scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/scenarios");
    let cal = Calibration::default();
    for name in ["secure_tile.json", "sponge_then_sleep.json", "tile_too_big.json"] {
        let sc = Scenario::from_path(&dir.join(name))?;
        match sc.run_phases(&cal) {
            Ok(r) => {
                println!(
                    "{name}: {:.3} ms, {:.3} uJ, {} switches, {:.2} us stalled",
                    r.total_seconds * 1e3,
                    r.total_joules * 1e6,
                    r.mode_switches,
                    r.stall_seconds * 1e6
                );
                for p in &r.phases {
                    println!("    {:<10} {:>9.3} .. {:>9.3} us {:>9.4} uJ", p.name, p.start_s * 1e6, p.end_s * 1e6, p.joules * 1e6);
                }
            }
            Err(e) => println!("{name}: {e}"),
        }
    }
    Ok(())
}
