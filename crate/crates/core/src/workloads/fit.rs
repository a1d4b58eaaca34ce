//! Refitting of the `fitted` calibration entries.
//!
//! Each knob scales a group of entries by one factor, solved by bisection
//! in log space so that the fully optimized level of one use case hits its
//! energy target. Knobs are solved in order; later use cases barely depend
//! on earlier knobs, so one pass suffices.

use serde::{Deserialize, Serialize};

use super::{simulate, OptLevel, UseCaseId, UseCaseSpecs, WorkloadError};
use crate::perf::{Calibration, Entry, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Knob {
    /// Dense layer cost, all core configurations.
    DenseCost,
    /// PCA, DWT and SVM costs together.
    BiosignalCost,
    FramActiveCurrent,
}

impl Knob {
    pub const ALL: [Knob; 3] = [Knob::DenseCost, Knob::BiosignalCost, Knob::FramActiveCurrent];

    pub fn use_case(self) -> UseCaseId {
        match self {
            Knob::DenseCost => UseCaseId::FaceDetect,
            Knob::BiosignalCost => UseCaseId::EegSeizure,
            Knob::FramActiveCurrent => UseCaseId::UavResnet20,
        }
    }

    fn entries(self, cal: &mut Calibration) -> Vec<&mut Entry> {
        let k = &mut cal.cost_table.sw_kernels;
        match self {
            Knob::DenseCost => k.dense.entries_mut().into(),
            Knob::BiosignalCost => {
                let mut v: Vec<&mut Entry> = Vec::new();
                v.extend(k.pca.entries_mut());
                v.extend(k.dwt.entries_mut());
                v.extend(k.svm.entries_mut());
                v
            }
            Knob::FramActiveCurrent => vec![&mut cal.power_table.fram.active_ma],
        }
    }

    fn scaled(self, cal: &Calibration, factor: f64) -> Calibration {
        let mut c = cal.clone();
        for e in self.entries(&mut c) {
            *e = Entry::new(e.value * factor, Provenance::Fitted);
        }
        c
    }
}

/// Energy per iteration of each use case at its fully optimized level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitTargets {
    pub uav_joules: f64,
    pub face_joules: f64,
    pub eeg_joules: f64,
    pub vdd: f64,
}

impl Default for FitTargets {
    fn default() -> Self {
        FitTargets {
            uav_joules: 27e-3,
            face_joules: 0.57e-3,
            eeg_joules: 0.18e-3,
            vdd: 0.8,
        }
    }
}

impl FitTargets {
    fn of(&self, id: UseCaseId) -> f64 {
        match id {
            UseCaseId::UavResnet20 => self.uav_joules,
            UseCaseId::FaceDetect => self.face_joules,
            UseCaseId::EegSeizure => self.eeg_joules,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub knob: Knob,
    pub factor: f64,
    pub target_joules: f64,
    pub achieved_joules: f64,
    pub evaluations: usize,
}

const LEVEL: OptLevel = OptLevel::PlusHwcrypt;

fn solve(
    knob: Knob,
    cal: &Calibration,
    specs: &UseCaseSpecs,
    targets: &FitTargets,
) -> Result<(Calibration, FitResult), WorkloadError> {
    let id = knob.use_case();
    let goal = targets.of(id);
    let energy = |f: f64| -> Result<f64, WorkloadError> {
        Ok(simulate(id, LEVEL, targets.vdd, &knob.scaled(cal, f), specs)?.total_joules)
    };
    let (mut lo, mut hi) = (1e-2f64.ln(), 1e2f64.ln());
    let mut evaluations = 0;
    if energy(lo.exp())? > goal || energy(hi.exp())? < goal {
        return Err(WorkloadError::InvalidSpec(format!(
            "{id}: energy target {goal} J unreachable by scaling {knob:?}"
        )));
    }
    evaluations += 2;
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        evaluations += 1;
        if energy(mid.exp())? < goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let factor = (0.5 * (lo + hi)).exp();
    let fitted = knob.scaled(cal, factor);
    let achieved = simulate(id, LEVEL, targets.vdd, &fitted, specs)?.total_joules;
    Ok((
        fitted,
        FitResult {
            knob,
            factor,
            target_joules: goal,
            achieved_joules: achieved,
            evaluations,
        },
    ))
}

/// Solve every knob in turn, returning the refitted calibration.
pub fn calibrate(
    cal: &Calibration,
    specs: &UseCaseSpecs,
    targets: &FitTargets,
) -> Result<(Calibration, Vec<FitResult>), WorkloadError> {
    let mut cal = cal.clone();
    let mut results = Vec::new();
    for knob in Knob::ALL {
        let (next, r) = solve(knob, &cal, specs, targets)?;
        cal = next;
        results.push(r);
    }
    Ok((cal, results))
}
