//! Time and energy of every optimization level for the three use cases.
//!
//!     cargo run --release --example usecase_progression

use nodesim::perf::Calibration;
use nodesim::workloads::{summarize, UseCaseId, UseCaseSpecs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cal = Calibration::default();
    let specs = UseCaseSpecs::default();
    for id in UseCaseId::ALL {
        let s = summarize(id, 0.8, &cal, &specs)?;
        println!("{id}");
        for l in &s.levels {
            println!(
                "  {:<13} {:>10.4} s {:>10.4} mJ {:>8.2} pJ/op  peak {:>6.2} mW  switches {}",
                l.level.to_string(),
                l.seconds,
                l.joules * 1e3,
                l.pj_per_op,
                l.peak_power_mw,
                l.mode_switches
            );
        }
        println!("  speedup {:.1}x, energy {:.1}x", s.speedup, s.energy_ratio);
        for (c, j) in &s.best.breakdown {
            println!("    {:<10} {:>9.4} mJ", c.name(), j * 1e3);
        }
        let b = &s.battery;
        println!(
            "  battery: {} iterations, {:.3} J ({:.3}% of {:.0} J), {:.2} days, avg {:.3} mW",
            b.iterations,
            b.total_joules,
            b.battery_fraction * 100.0,
            b.battery_joules,
            b.lifetime_days,
            b.average_power_mw
        );
    }
    Ok(())
}
