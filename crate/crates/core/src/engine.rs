//! Slotted simulation loop, multi-trial aggregation and parameter sweeps.
//!
//! One slot is one transmission period. Every vehicle transmits once per
//! slot on its current block. At slot `t >= 1`, every vehicle whose
//! decision epoch falls on `t` decides from the occupancy of slot `t - 1`,
//! then all moves apply at once and slot `t` is resolved. Slot 0 transmits
//! the initial placement.
//!
//! Targets draw independent epoch offsets. Attackers act as one fleet and
//! share a single offset, so under cooperation all of them reassign in the
//! same slot; cooperative deciders ignore their own transmissions when
//! looking for loners, which lets an attacker keep the target it jams.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::attack::{self, ClaimRegistry};
use crate::model::{
    AttackType, ConfigError, Rb, Role, SimConfig, SlotOccupancy, TrialResult, UtilizationRow,
    VehicleId, VehicleState,
};
use crate::protocol;
use crate::stats;

/// splitmix64 finalizer.
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial: `mix64(mix64(mix64(base) ^ sweep_index) ^ trial_index)`.
pub fn trial_seed(base_seed: u64, sweep_index: u64, trial_index: u64) -> u64 {
    mix64(mix64(mix64(base_seed) ^ sweep_index) ^ trial_index)
}

/// Outcome of one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotOutcome {
    /// Targets alone on their block.
    pub received_targets: u32,
    /// Blocks carrying two or more transmitters.
    pub collided_rbs: BTreeSet<Rb>,
}

/// Collision resolution. A broadcast is either heard by everybody or lost.
pub fn resolve_slot(occupancy: &SlotOccupancy) -> SlotOutcome {
    let mut received_targets = 0;
    let mut collided_rbs = BTreeSet::new();
    for (rb, txs) in occupancy.blocks() {
        match txs {
            [only] if only.role == Role::Target => received_targets += 1,
            [] | [_] => {}
            _ => {
                collided_rbs.insert(rb);
            }
        }
    }
    SlotOutcome { received_targets, collided_rbs }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    received: u64,
    attacker_jammed: u64,
}

fn tally(occupancy: &SlotOccupancy) -> Tally {
    let mut t = Tally::default();
    for (_, txs) in occupancy.blocks() {
        match txs {
            [] => {}
            [only] => {
                if only.role == Role::Target {
                    t.received += 1;
                }
            }
            _ => {
                if txs.iter().any(|x| x.role == Role::Attacker) {
                    t.attacker_jammed +=
                        txs.iter().filter(|x| x.role == Role::Target).count() as u64;
                }
            }
        }
    }
    t
}

/// Initial placement: blocks uniform and independent (initial collisions
/// possible) for vehicles in id order, then target offsets in id order, then
/// one offset shared by the whole attacker fleet.
fn initial_vehicles<R: Rng>(config: &SimConfig, rng: &mut R) -> Vec<VehicleState> {
    let mut vehicles: Vec<VehicleState> = (0..config.n_vehicles())
        .map(|i| {
            let role = if i < config.n_targets { Role::Target } else { Role::Attacker };
            VehicleState {
                id: i as VehicleId,
                role,
                current_rb: rng.random_range(0..config.n_rb),
                offset: 0,
            }
        })
        .collect();
    if !config.synchronized {
        for v in vehicles.iter_mut().filter(|v| v.role == Role::Target) {
            v.offset = rng.random_range(0..config.t_s);
        }
        if config.n_attackers > 0 {
            let fleet_offset = rng.random_range(0..config.attack_period_slots);
            for v in vehicles.iter_mut().filter(|v| v.role == Role::Attacker) {
                v.offset = fleet_offset;
            }
        }
    }
    vehicles
}

/// Runs one trial of a validated config from `seed`.
pub fn run_trial(config: &SimConfig, seed: u64) -> Result<TrialResult, ConfigError> {
    let config = config.clone().validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vehicles = initial_vehicles(&config, &mut rng);
    let n_rb = config.n_rb;

    let mut snapshot = SlotOccupancy::from_vehicles(n_rb, &vehicles);
    let mut next = SlotOccupancy::empty(n_rb);
    let mut registry = ClaimRegistry::new();
    let mut moves: Vec<Rb> = vec![0; vehicles.len()];
    let mut deciders: Vec<(VehicleId, Rb)> = Vec::new();
    let mut decider_ids: Vec<VehicleId> = Vec::new();
    let mut was_loner = vec![false; vehicles.len()];

    let mut utilization = config.record_utilization.then(Vec::new);
    let mut jammed_loners = config.record_utilization.then(Vec::new);
    let record = |occ: &SlotOccupancy, slot: u64, rows: &mut Vec<UtilizationRow>| {
        for v in &vehicles_view(occ) {
            rows.push(UtilizationRow {
                slot,
                vehicle_id: v.0,
                role: v.1,
                rb: v.2,
                collided: occ.on(v.2).len() > 1,
            });
        }
    };

    let first = tally(&snapshot);
    let mut received = first.received;
    let mut attacker_jammed = first.attacker_jammed;
    if let Some(rows) = utilization.as_mut() {
        record(&snapshot, 0, rows);
    }
    if let Some(j) = jammed_loners.as_mut() {
        j.push(0);
    }

    for slot in 1..config.sim_slots {
        for (m, v) in moves.iter_mut().zip(&vehicles) {
            *m = v.current_rb;
        }
        for v in vehicles.iter().filter(|v| v.role == Role::Target) {
            if v.decides_at(slot, config.t_s) {
                moves[v.id as usize] = protocol::target_update(v, &snapshot, config.p, &mut rng);
            }
        }

        deciders.clear();
        deciders.extend(
            vehicles
                .iter()
                .filter(|v| v.role == Role::Attacker && v.decides_at(slot, config.attack_period_slots))
                .map(|v| (v.id, v.current_rb)),
        );
        if !deciders.is_empty() {
            match config.attack_type {
                AttackType::Baseline => {}
                AttackType::Oblivious => {
                    for &(id, _) in &deciders {
                        let v = &vehicles[id as usize];
                        moves[id as usize] =
                            attack::oblivious_update(v, config.p_prime, n_rb, &mut rng);
                    }
                }
                AttackType::Smart => {
                    let loners = attack::find_loner_rbs(&snapshot);
                    for &(id, _) in &deciders {
                        let v = &vehicles[id as usize];
                        moves[id as usize] = attack::smart_update(v, &loners, n_rb, &mut rng);
                    }
                }
                AttackType::Cooperative => {
                    decider_ids.clear();
                    decider_ids.extend(deciders.iter().map(|d| d.0));
                    let loners = attack::loner_rbs_seen_by(&snapshot, &decider_ids);
                    let assigned = attack::cooperative_assign(
                        &deciders,
                        &loners,
                        &mut registry,
                        n_rb,
                        &mut rng,
                    );
                    for (id, rb) in assigned {
                        moves[id as usize] = rb;
                    }
                }
            }
        }

        if jammed_loners.is_some() {
            for v in &vehicles {
                was_loner[v.id as usize] =
                    v.role == Role::Target && snapshot.on(v.current_rb).len() == 1;
            }
        }
        for (v, &m) in vehicles.iter_mut().zip(&moves) {
            v.current_rb = m;
        }
        next.fill(&vehicles);
        let t = tally(&next);
        received += t.received;
        attacker_jammed += t.attacker_jammed;
        if let Some(rows) = utilization.as_mut() {
            record(&next, slot, rows);
        }
        if let Some(j) = jammed_loners.as_mut() {
            let count = vehicles
                .iter()
                .filter(|v| was_loner[v.id as usize] && next.on(v.current_rb).len() > 1)
                .count();
            j.push(count as u32);
        }
        std::mem::swap(&mut snapshot, &mut next);
    }

    let sent = config.n_targets as u64 * config.sim_slots;
    let prr = stats::prr(sent, received).expect("received never exceeds sent");
    Ok(TrialResult {
        sent,
        received,
        attacker_jammed,
        prr,
        jammed_loners_per_slot: jammed_loners,
        utilization,
    })
}

/// (id, role, rb) of every transmitter, ordered by vehicle id.
fn vehicles_view(occ: &SlotOccupancy) -> Vec<(VehicleId, Role, Rb)> {
    let mut all: Vec<(VehicleId, Role, Rb)> = occ
        .blocks()
        .flat_map(|(rb, txs)| txs.iter().map(move |t| (t.id, t.role, rb)))
        .collect();
    all.sort_unstable_by_key(|x| x.0);
    all
}

/// Aggregate over the trials of one experiment point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: SimConfig,
    pub trial_prrs: Vec<f64>,
    pub prr_mean: f64,
    pub prr_ci_half_width: f64,
    /// Summed over trials.
    pub sent: u64,
    pub received: u64,
    pub attacker_jammed: u64,
    /// Trace of the first trial, when utilization recording is on.
    pub utilization: Option<Vec<UtilizationRow>>,
    pub jammed_loners_per_slot: Option<Vec<u32>>,
}

impl ExperimentResult {
    /// Fraction of target transmissions that shared a block with an attacker.
    pub fn attacker_jam_fraction(&self) -> f64 {
        if self.sent == 0 {
            0.0
        } else {
            self.attacker_jammed as f64 / self.sent as f64
        }
    }
}

fn run_trials(config: &SimConfig, sweep_index: u64) -> Vec<TrialResult> {
    let one = |trial: u32| {
        run_trial(config, trial_seed(config.base_seed, sweep_index, u64::from(trial)))
            .expect("config validated by caller")
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..config.trials).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..config.trials).map(one).collect()
    }
}

/// Runs all trials of one point; trial seeds come from [`trial_seed`] with
/// sweep index 0.
pub fn run_experiment(config: &SimConfig) -> Result<ExperimentResult, ConfigError> {
    run_experiment_at(config, 0)
}

pub fn run_experiment_at(
    config: &SimConfig,
    sweep_index: u64,
) -> Result<ExperimentResult, ConfigError> {
    let config = config.clone().validate()?;
    let mut trials = run_trials(&config, sweep_index);
    let trial_prrs: Vec<f64> = trials.iter().map(|t| t.prr).collect();
    let (prr_mean, prr_ci_half_width) =
        stats::mean_ci(&trial_prrs).expect("at least one trial");
    Ok(ExperimentResult {
        sent: trials.iter().map(|t| t.sent).sum(),
        received: trials.iter().map(|t| t.received).sum(),
        attacker_jammed: trials.iter().map(|t| t.attacker_jammed).sum(),
        utilization: trials[0].utilization.take(),
        jammed_loners_per_slot: trials[0].jammed_loners_per_slot.take(),
        config,
        trial_prrs,
        prr_mean,
        prr_ci_half_width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// `n_targets + n_attackers`, with `n_attackers` held fixed.
    TotalVehicles,
    PPrime,
    P,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::TotalVehicles => "total_vehicles",
            SweepAxis::PPrime => "p_prime",
            SweepAxis::P => "p",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep needs at least one value")]
    Empty,
    #[error("sweep values must be strictly increasing ({prev} then {next})")]
    NotIncreasing { prev: f64, next: f64 },
    #[error("total_vehicles = {total} must be an integer no smaller than n_attackers = {n_attackers}")]
    InvalidTotal { total: f64, n_attackers: usize },
    #[error("sweep point {value}: {source}")]
    Config {
        value: f64,
        #[source]
        source: ConfigError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: ExperimentResult,
}

/// Config of one sweep point, `base` with the swept parameter replaced.
pub fn sweep_config(base: &SimConfig, axis: SweepAxis, value: f64) -> Result<SimConfig, SweepError> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::TotalVehicles => {
            if value.fract() != 0.0 || value < cfg.n_attackers as f64 {
                return Err(SweepError::InvalidTotal { total: value, n_attackers: cfg.n_attackers });
            }
            cfg.n_targets = value as usize - cfg.n_attackers;
        }
        SweepAxis::PPrime => cfg.p_prime = value,
        SweepAxis::P => cfg.p = value,
    }
    cfg.validate().map_err(|source| SweepError::Config { value, source })
}

/// One experiment per value, in the given order. All points reuse
/// `base.base_seed`; the point index is mixed into the trial seeds.
pub fn run_sweep(
    base: &SimConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepPoint>, SweepError> {
    if values.is_empty() {
        return Err(SweepError::Empty);
    }
    for w in values.windows(2) {
        if !(w[1] > w[0]) {
            return Err(SweepError::NotIncreasing { prev: w[0], next: w[1] });
        }
    }
    let configs = values
        .iter()
        .map(|&v| sweep_config(base, axis, v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(configs
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (cfg, &value))| SweepPoint {
            value,
            result: run_experiment_at(cfg, i as u64).expect("validated above"),
        })
        .collect())
}
