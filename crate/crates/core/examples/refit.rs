//! Refit the calibration against different per-iteration energy targets
//! and show what moved.
//!
//!     cargo run --release --example refit

use nodesim::perf::Calibration;
use nodesim::workloads::fit::{calibrate, FitTargets};
use nodesim::workloads::{simulate, OptLevel, UseCaseId, UseCaseSpecs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cal = Calibration::default();
    let specs = UseCaseSpecs::default();
    let mut targets = FitTargets::default();
    // pretend the board measured 10% more on every use case
    for t in [&mut targets.uav_joules, &mut targets.face_joules, &mut targets.eeg_joules] {
        *t *= 1.1;
    }
    let (fitted, results) = calibrate(&cal, &specs, &targets)?;
    for r in &results {
        println!(
            "{:?}: x{:.3}, {:.4} mJ for a {:.4} mJ target in {} runs",
            r.knob,
            r.factor,
            r.achieved_joules * 1e3,
            r.target_joules * 1e3,
            r.evaluations
        );
    }
    for id in UseCaseId::ALL {
        let before = simulate(id, OptLevel::PlusHwcrypt, 0.8, &cal, &specs)?;
        let after = simulate(id, OptLevel::PlusHwcrypt, 0.8, &fitted, &specs)?;
        println!("{id}: {:.4} -> {:.4} mJ", before.total_joules * 1e3, after.total_joules * 1e3);
    }
    Ok(())
}
