//! How long a battery lasts at different duty cycles, for the seizure
//! detector.
//!
//!     cargo run --release --example battery_budget

use nodesim::perf::Calibration;
use nodesim::sim::SleepState;
use nodesim::workloads::{battery_projection, simulate, Duty, OptLevel, UseCaseId, UseCaseSpecs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cal = Calibration::default();
    let r = simulate(UseCaseId::EegSeizure, OptLevel::PlusHwcrypt, 0.8, &cal, &UseCaseSpecs::default())?;
    // 2 Ah at 3.3 V
    let joules = 2.0 * 3600.0 * 3.3;
    println!("one window: {:.3} ms, {:.2} uJ", r.total_seconds * 1e3, r.total_joules * 1e6);
    for period_s in [0.05, 0.25, 0.5, 2.0] {
        for state in [SleepState::DeepSleep, SleepState::IdleFllOff] {
            let b = battery_projection(&cal, &r, joules, Duty::Periodic { period_s, state })?;
            println!(
                "  every {period_s:>4} s, {state:?}: {:>7.1} uW average, {:>8.1} days",
                b.average_power_mw * 1e3,
                b.lifetime_days
            );
        }
    }
    Ok(())
}
