use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{mode_list, Category, Direction, ExtMemKind, PhaseGraph, PhaseKind, PlatformConfig, SimError, SleepState};
use crate::perf::{
    cycles_dma, cycles_hwce, cycles_hwcrypt, cycles_sw, mode_switch_cost, Calibration, HwcryptUnit, OperatingMode,
    OperatingPoint, UnitSet,
};

/// Which operating modes the scheduler may use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModePolicy {
    Fixed(OperatingMode),
    /// Greedy: every compute phase runs in the fastest permitted mode able
    /// to run it, switching when that differs from the current mode. DMA
    /// transfers never trigger a switch.
    Dynamic(Vec<OperatingMode>),
}

impl ModePolicy {
    pub fn allowed(&self) -> Vec<OperatingMode> {
        match self {
            ModePolicy::Fixed(m) => vec![*m],
            ModePolicy::Dynamic(v) => v.clone(),
        }
    }
}

impl std::fmt::Display for ModePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModePolicy::Fixed(m) => write!(f, "fixed:{m}"),
            ModePolicy::Dynamic(v) => write!(f, "dynamic:{}", mode_list(v)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lane {
    Cores,
    /// The accelerator port shared by HWCRYPT and HWCE.
    Accel,
    Dma,
    /// Mode switches and sleep occupy the whole cluster.
    Cluster,
    Ext(ExtMemKind),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActivityKind {
    Work(UnitSet),
    /// Issuer waiting for a queue slot.
    Stall,
    Switch { from: OperatingMode, to: OperatingMode },
    Sleep(SleepState),
    Ext { mem: ExtMemKind, dir: Direction, bytes: u64 },
}

/// A busy interval on one lane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activity {
    pub phase: Option<usize>,
    pub lane: Lane,
    pub kind: ActivityKind,
    pub start: f64,
    pub end: f64,
    pub mode: OperatingMode,
    pub category: Category,
}

impl Activity {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTiming {
    pub name: String,
    pub kind: &'static str,
    pub category: Category,
    pub mode: Option<OperatingMode>,
    pub start: f64,
    pub end: f64,
    pub cycles: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    pub vdd: f64,
    pub policy: ModePolicy,
    pub initial_mode: OperatingMode,
    /// Operating point of every permitted mode at `vdd`.
    pub points: Vec<OperatingPoint>,
    pub activities: Vec<Activity>,
    /// Indexed like the input graph.
    pub phases: Vec<PhaseTiming>,
    pub switches: usize,
    pub makespan: f64,
}

impl Timeline {
    pub fn point(&self, mode: OperatingMode) -> &OperatingPoint {
        self.points.iter().find(|p| p.mode == mode).expect("mode permitted by policy")
    }
}

/// Dependency users and in-degrees, rejecting unknown ids and cycles.
fn dependency_graph(graph: &PhaseGraph) -> Result<(Vec<usize>, Vec<Vec<usize>>), SimError> {
    let n = graph.len();
    let mut indeg = vec![0usize; n];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in graph.phases.iter().enumerate() {
        for d in &p.deps {
            if d.0 >= n {
                return Err(SimError::UnknownDependency {
                    phase: p.name.clone(),
                    dep: d.0,
                });
            }
            indeg[i] += 1;
            users[d.0].push(i);
        }
    }
    let mut left = indeg.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&i| left[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = stack.pop() {
        seen += 1;
        for &u in &users[i] {
            left[u] -= 1;
            if left[u] == 0 {
                stack.push(u);
            }
        }
    }
    if seen < n {
        let stuck = (0..n).find(|&i| left[i] > 0).expect("some phase left");
        return Err(SimError::CyclicDependency(graph.phases[stuck].name.clone()));
    }
    Ok((indeg, users))
}

struct Lanes {
    cores: f64,
    accel: f64,
    dma: f64,
    ext: [f64; 2],
}

impl Lanes {
    fn cluster_drain(&self) -> f64 {
        self.cores.max(self.accel).max(self.dma)
    }

    fn block_cluster_until(&mut self, t: f64) {
        self.cores = t;
        self.accel = t;
        self.dma = t;
    }
}

fn ext_index(m: ExtMemKind) -> usize {
    match m {
        ExtMemKind::Flash => 0,
        ExtMemKind::Fram => 1,
    }
}

/// List-schedule `graph`. Phases are placed in the order their inputs
/// become available, ties broken by index, so a lane serves requests
/// first come first served.
pub fn schedule(
    graph: &PhaseGraph,
    platform: &PlatformConfig,
    cal: &Calibration,
    vdd: f64,
    policy: &ModePolicy,
) -> Result<Timeline, SimError> {
    platform.validate()?;
    let allowed = policy.allowed();
    if allowed.is_empty() {
        return Err(SimError::InvalidScenario("mode policy permits no mode".into()));
    }
    let points = allowed
        .iter()
        .map(|&m| OperatingPoint::new(cal, m, vdd))
        .collect::<Result<Vec<_>, _>>()?;
    let freq = |m: OperatingMode| points.iter().find(|p| p.mode == m).map(|p| p.freq_hz).unwrap_or(0.0);
    let fastest = |cands: &[OperatingMode]| {
        let mut best = cands[0];
        for &m in &cands[1..] {
            if freq(m) > freq(best) {
                best = m;
            }
        }
        best
    };

    let (mut indeg, users) = dependency_graph(graph)?;
    // keyed by (time all dependencies end, index); times are non-negative
    // so their bit patterns order like the values
    let mut ready_q: BinaryHeap<Reverse<(u64, usize)>> =
        (0..graph.len()).filter(|&i| indeg[i] == 0).map(|i| Reverse((0, i))).collect();
    let mut mode: Option<OperatingMode> = match policy {
        ModePolicy::Fixed(m) => Some(*m),
        ModePolicy::Dynamic(_) => None,
    };
    let mut initial_mode = mode;
    let mut lanes = Lanes {
        cores: 0.0,
        accel: 0.0,
        dma: 0.0,
        ext: [0.0; 2],
    };
    let mut barrier = 0.0f64;
    let mut max_end = 0.0f64;
    let mut crypt_q: VecDeque<f64> = VecDeque::new();
    let mut hwce_q: VecDeque<f64> = VecDeque::new();
    let mut acts: Vec<Activity> = Vec::new();
    let mut switches = 0usize;
    let mut timings: Vec<Option<PhaseTiming>> = vec![None; graph.len()];

    let mut switch_to = |to: OperatingMode,
                         at: f64,
                         mode: &mut Option<OperatingMode>,
                         lanes: &mut Lanes,
                         acts: &mut Vec<Activity>,
                         phase: Option<usize>|
     -> (f64, f64) {
        let from = mode.expect("mode set before switching");
        let start = at.max(lanes.cluster_drain());
        let end = start + mode_switch_cost(cal, from, to);
        if from != to {
            acts.push(Activity {
                phase,
                lane: Lane::Cluster,
                kind: ActivityKind::Switch { from, to },
                start,
                end,
                mode: to,
                category: Category::DmaOther,
            });
            switches += 1;
        }
        lanes.block_cluster_until(end);
        *mode = Some(to);
        (start, end)
    };

    while let Some(Reverse((_, i))) = ready_q.pop() {
        let p = &graph.phases[i];
        if p.footprint.tcdm > platform.tcdm_bytes {
            return Err(SimError::CapacityExceeded {
                phase: p.name.clone(),
                memory: "TCDM",
                needed: p.footprint.tcdm,
                available: platform.tcdm_bytes,
            });
        }
        if p.footprint.l2 > platform.l2_bytes {
            return Err(SimError::CapacityExceeded {
                phase: p.name.clone(),
                memory: "L2",
                needed: p.footprint.l2,
                available: platform.l2_bytes,
            });
        }
        let category = p.category();
        let mut ready = p
            .deps
            .iter()
            .map(|d| timings[d.0].as_ref().expect("dependencies scheduled first").end)
            .fold(barrier, f64::max);
        if !p.overlappable {
            ready = ready.max(max_end);
        }

        let timing = match &p.kind {
            PhaseKind::ExtMem { mem, bytes, dir } => {
                let m = platform.mem(*mem);
                let k = ext_index(*mem);
                let start = ready.max(lanes.ext[k]);
                let end = start + *bytes as f64 / m.bandwidth_bytes_s;
                lanes.ext[k] = end;
                acts.push(Activity {
                    phase: Some(i),
                    lane: Lane::Ext(*mem),
                    kind: ActivityKind::Ext {
                        mem: *mem,
                        dir: *dir,
                        bytes: *bytes,
                    },
                    start,
                    end,
                    mode: mode.unwrap_or(allowed[0]),
                    category,
                });
                (start, end, None, 0.0)
            }
            PhaseKind::ModeSwitch { to } => {
                if !allowed.contains(to) {
                    return Err(SimError::ModeUnavailable {
                        phase: p.name.clone(),
                        allowed: mode_list(&allowed),
                    });
                }
                if mode.is_none() {
                    mode = Some(*to);
                    initial_mode = Some(*to);
                }
                let (s, e) = switch_to(*to, ready, &mut mode, &mut lanes, &mut acts, Some(i));
                (s, e, Some(*to), 0.0)
            }
            PhaseKind::Sleep { seconds, state } => {
                let m = *mode.get_or_insert(allowed[0]);
                initial_mode.get_or_insert(m);
                let start = ready.max(lanes.cluster_drain());
                let end = start + seconds.max(0.0);
                lanes.block_cluster_until(end);
                acts.push(Activity {
                    phase: Some(i),
                    lane: Lane::Cluster,
                    kind: ActivityKind::Sleep(*state),
                    start,
                    end,
                    mode: m,
                    category,
                });
                (start, end, Some(m), 0.0)
            }
            kind => {
                let capable = kind.capable_modes().expect("cluster phase");
                let want: Vec<OperatingMode> = allowed
                    .iter()
                    .copied()
                    .filter(|m| capable.contains(m) && p.mode.is_none_or(|pin| pin == *m))
                    .collect();
                if want.is_empty() {
                    return Err(SimError::ModeUnavailable {
                        phase: p.name.clone(),
                        allowed: mode_list(&allowed),
                    });
                }
                // compute phases want the fastest capable clock; transfers
                // are indifferent and ride along in whatever mode is active
                let indifferent = matches!(kind, PhaseKind::Dma { .. });
                let target = fastest(&want);
                match mode {
                    Some(m) if m == target || (indifferent && want.contains(&m)) => {}
                    Some(_) => {
                        switch_to(target, barrier, &mut mode, &mut lanes, &mut acts, None);
                    }
                    None => {
                        mode = Some(target);
                        initial_mode = mode;
                    }
                }
                let m = mode.expect("mode chosen");
                let f = freq(m);
                let work = |lane, units, start: f64, end: f64| Activity {
                    phase: Some(i),
                    lane,
                    kind: ActivityKind::Work(units),
                    start,
                    end,
                    mode: m,
                    category,
                };
                match kind {
                    PhaseKind::Sw { kernel, units, cores } => {
                        let cyc = cycles_sw(cal, *kernel, *units, *cores);
                        let start = ready.max(lanes.cores);
                        let end = start + cyc / f;
                        lanes.cores = end;
                        acts.push(work(Lane::Cores, UnitSet::cores(kernel.busy_cores(cal, *cores)), start, end));
                        (start, end, Some(m), cyc)
                    }
                    PhaseKind::Dma { bytes } => {
                        let cyc = cycles_dma(cal, *bytes);
                        let start = ready.max(lanes.dma);
                        let end = start + cyc / f;
                        lanes.dma = end;
                        acts.push(work(Lane::Dma, UnitSet::dma(), start, end));
                        (start, end, Some(m), cyc)
                    }
                    PhaseKind::Hwcrypt { .. } | PhaseKind::Hwce { .. } => {
                        let (setup, engine, units, queue, depth) = match kind {
                            PhaseKind::Hwcrypt { op, bytes } => {
                                let c = cycles_hwcrypt(cal, *op, *bytes);
                                let u = if op.is_aes() { HwcryptUnit::Aes } else { HwcryptUnit::Sponge };
                                (c.setup, c.data, UnitSet::hwcrypt(u), &mut crypt_q, platform.hwcrypt_queue_depth)
                            }
                            PhaseKind::Hwce {
                                pixels,
                                fs,
                                precision,
                                jobs,
                            } => {
                                let c = cycles_hwce(cal, *pixels, 1, *fs, *precision);
                                let jobs = (*jobs).max(1) as f64;
                                // later jobs are programmed while earlier ones run
                                let engine = jobs * c.total() - c.setup;
                                (c.setup, engine, UnitSet::hwce(*precision), &mut hwce_q, platform.hwce_queue_depth)
                            }
                            _ => unreachable!(),
                        };
                        let mut issue = ready.max(lanes.cores);
                        while queue.front().is_some_and(|&e| e <= issue) {
                            queue.pop_front();
                        }
                        if queue.len() >= depth {
                            let free_at = queue[queue.len() - depth];
                            acts.push(Activity {
                                phase: Some(i),
                                lane: Lane::Cores,
                                kind: ActivityKind::Stall,
                                start: issue,
                                end: free_at,
                                mode: m,
                                category: Category::DmaOther,
                            });
                            issue = free_at;
                            while queue.front().is_some_and(|&e| e <= issue) {
                                queue.pop_front();
                            }
                        }
                        let issued = issue + setup / f;
                        acts.push(work(Lane::Cores, UnitSet::cores(1.0), issue, issued));
                        lanes.cores = issued;
                        let start = issued.max(lanes.accel);
                        let end = start + engine / f;
                        lanes.accel = end;
                        queue.push_back(end);
                        acts.push(work(Lane::Accel, units, start, end));
                        (issue, end, Some(m), setup + engine)
                    }
                    _ => unreachable!(),
                }
            }
        };
        let (start, end, m, cycles) = timing;
        max_end = max_end.max(end);
        if !p.overlappable {
            barrier = barrier.max(end);
        }
        timings[i] = Some(PhaseTiming {
            name: p.name.clone(),
            kind: p.kind.tag(),
            category,
            mode: m,
            start,
            end,
            cycles,
        });
        for &u in &users[i] {
            indeg[u] -= 1;
            if indeg[u] == 0 {
                let at = graph.phases[u]
                    .deps
                    .iter()
                    .map(|d| timings[d.0].as_ref().expect("dependency placed").end)
                    .fold(0.0, f64::max);
                ready_q.push(Reverse((at.to_bits(), u)));
            }
        }
    }

    let makespan = acts.iter().map(|a| a.end).fold(0.0, f64::max);
    let initial_mode = initial_mode.unwrap_or_else(|| fastest(&allowed));
    Ok(Timeline {
        vdd,
        policy: policy.clone(),
        initial_mode,
        points,
        activities: acts,
        phases: timings.into_iter().map(|t| t.expect("every phase scheduled")).collect(),
        switches,
        makespan,
    })
}
