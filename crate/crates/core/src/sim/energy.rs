use std::collections::BTreeMap;

use super::{ActivityKind, Category, ExtMemKind, Lane, PhaseRow, PlatformConfig, SimReport, SleepState, Timeline};
use crate::perf::{base_mw, dynamic_mw, power_mw, Calibration, OperatingMode, PowerState};

fn sleep_power(cal: &Calibration, state: SleepState) -> f64 {
    let p = &cal.power_table;
    match state {
        SleepState::DeepSleep => p.deep_sleep_mw.value,
        SleepState::IdleFllOn => p.idle_cluster_mw.value + p.fll_mw.value,
        SleepState::IdleFllOff => p.idle_cluster_mw.value,
    }
}

/// Integrate power over the timeline.
///
/// Cluster power is swept interval by interval. The shared part (SoC,
/// leakage, cluster clock tree) is split evenly among whatever runs in the
/// interval; each activity adds its own units on top. Time with nothing on
/// the cluster is charged as idle with the FLL locked. External memories
/// draw active power while transferring, pad power for the SPI link, and
/// standby for the rest of the span.
pub fn run(timeline: &Timeline, platform: &PlatformConfig, cal: &Calibration) -> SimReport {
    let n_phases = timeline.phases.len();
    let mut by_cat: BTreeMap<Category, f64> = Category::ALL.iter().map(|&c| (c, 0.0)).collect();
    let mut by_phase = vec![0.0f64; n_phases];
    let idle_mw = power_mw(cal, timeline.point(timeline.initial_mode), &PowerState::Idle { fll_on: true })
        .expect("idle power has no range check");
    let base: BTreeMap<OperatingMode, f64> = timeline
        .points
        .iter()
        .map(|pt| (pt.mode, base_mw(cal, pt).expect("point was validated by schedule")))
        .collect();

    // per-activity dynamic power, computed once
    let cluster: Vec<usize> = (0..timeline.activities.len())
        .filter(|&k| !matches!(timeline.activities[k].lane, Lane::Ext(_)))
        .collect();
    let dyn_mw: Vec<f64> = timeline
        .activities
        .iter()
        .map(|a| match a.kind {
            ActivityKind::Work(u) => dynamic_mw(cal, timeline.point(a.mode), &u),
            _ => 0.0,
        })
        .collect();

    let mut events: Vec<(f64, bool, usize)> = Vec::with_capacity(cluster.len() * 2);
    for &k in &cluster {
        let a = &timeline.activities[k];
        if a.end > a.start {
            events.push((a.start, true, k));
            events.push((a.end, false, k));
        }
    }
    // ends before starts at equal times, then by index for determinism
    events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut active: Vec<usize> = Vec::new();
    let mut t = 0.0f64;
    let mut peak = 0.0f64;
    let mut total_cycles = 0.0f64;
    let mut charge = |from: f64, to: f64, active: &[usize], peak: &mut f64, cycles: &mut f64| {
        let dt = to - from;
        if dt <= 0.0 {
            return;
        }
        let acts: Vec<_> = active.iter().map(|&k| (k, &timeline.activities[k])).collect();
        if let Some((_, a)) = acts.iter().find(|(_, a)| matches!(a.kind, ActivityKind::Sleep(_))) {
            let ActivityKind::Sleep(state) = a.kind else { unreachable!() };
            let p = sleep_power(cal, state);
            *by_cat.get_mut(&a.category).expect("category") += p * 1e-3 * dt;
            if let Some(ph) = a.phase {
                by_phase[ph] += p * 1e-3 * dt;
            }
            *peak = peak.max(p);
            return;
        }
        if let Some((_, a)) = acts.iter().find(|(_, a)| matches!(a.kind, ActivityKind::Switch { .. })) {
            *by_cat.get_mut(&Category::DmaOther).expect("category") += idle_mw * 1e-3 * dt;
            if let Some(ph) = a.phase {
                by_phase[ph] += idle_mw * 1e-3 * dt;
            }
            *peak = peak.max(idle_mw);
            return;
        }
        if acts.is_empty() {
            *by_cat.get_mut(&Category::DmaOther).expect("category") += idle_mw * 1e-3 * dt;
            *peak = peak.max(idle_mw);
            *cycles += timeline.point(timeline.initial_mode).freq_hz * dt;
            return;
        }
        let mode = acts[0].1.mode;
        let share = base[&mode] / acts.len() as f64;
        let mut p_total = 0.0;
        for (k, a) in &acts {
            let p = share + dyn_mw[*k];
            p_total += p;
            *by_cat.get_mut(&a.category).expect("category") += p * 1e-3 * dt;
            if let Some(ph) = a.phase {
                by_phase[ph] += p * 1e-3 * dt;
            }
        }
        *peak = peak.max(p_total);
        *cycles += timeline.point(mode).freq_hz * dt;
    };

    for (time, is_start, k) in events {
        if time > t {
            charge(t, time, &active, &mut peak, &mut total_cycles);
            t = time;
        }
        if is_start {
            active.push(k);
        } else if let Some(pos) = active.iter().position(|&x| x == k) {
            active.remove(pos);
        }
    }
    charge(t, timeline.makespan, &active, &mut peak, &mut total_cycles);

    // external memories
    let mut busy = [0.0f64; 2];
    for a in &timeline.activities {
        if let ActivityKind::Ext { mem, .. } = a.kind {
            let m = platform.mem(mem);
            let dt = a.duration();
            let e_mem = m.active_mw() * 1e-3 * dt;
            let e_pad = platform.spi_io_mw * 1e-3 * dt;
            *by_cat.get_mut(&Category::of_mem(mem)).expect("category") += e_mem;
            *by_cat.get_mut(&Category::SpiIo).expect("category") += e_pad;
            if let Some(ph) = a.phase {
                by_phase[ph] += e_mem + e_pad;
            }
            busy[(mem == ExtMemKind::Fram) as usize] += dt;
        }
    }
    for mem in ExtMemKind::ALL {
        let m = platform.mem(mem);
        let idle = (timeline.makespan - busy[(mem == ExtMemKind::Fram) as usize]).max(0.0);
        *by_cat.get_mut(&Category::of_mem(mem)).expect("category") += m.standby_mw() * 1e-3 * idle;
    }

    let total_joules: f64 = Category::ALL.iter().map(|c| by_cat[c]).sum();
    let stall_seconds = timeline
        .activities
        .iter()
        .filter(|a| matches!(a.kind, ActivityKind::Stall))
        .map(|a| a.duration())
        .fold(0.0, |a, b| a + b);
    let phases = timeline
        .phases
        .iter()
        .enumerate()
        .map(|(i, p)| PhaseRow {
            index: i,
            name: p.name.clone(),
            kind: p.kind.to_string(),
            mode: p.mode.map(|m| m.name().to_string()),
            category: p.category,
            start_s: p.start,
            end_s: p.end,
            cycles: p.cycles,
            joules: by_phase[i],
        })
        .collect();
    SimReport {
        version: super::REPORT_VERSION.to_string(),
        calibration_sha256: cal.digest(),
        label: String::new(),
        vdd: timeline.vdd,
        policy: timeline.policy.to_string(),
        initial_mode: timeline.initial_mode.name().to_string(),
        total_cycles,
        total_seconds: timeline.makespan,
        total_joules,
        breakdown: by_cat,
        peak_power_mw: peak,
        mode_switches: timeline.switches,
        stall_seconds,
        equivalent_ops: None,
        pj_per_op: None,
        phases,
    }
}
