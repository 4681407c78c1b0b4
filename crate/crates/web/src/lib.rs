//! WebAssembly bindings for the browser demo in `www/`.

use cv2x_dos::analysis::{pi1_derivative, stationary_pi1};
use cv2x_dos::engine::{run_sweep, SweepAxis};
use cv2x_dos::model::{AttackType, Role, SimConfig};
use cv2x_dos::run_trial;
use wasm_bindgen::prelude::*;

pub const CELL_IDLE: u8 = 0;
pub const CELL_TARGET: u8 = 1;
pub const CELL_TARGET_COLLIDED: u8 = 2;
pub const CELL_ATTACKER: u8 = 3;
pub const CELL_JAMMED: u8 = 4;

fn attack_config(
    attack: &str,
    n_rb: usize,
    n_targets: usize,
    n_attackers: usize,
    deniable: bool,
    slots: u32,
) -> Result<SimConfig, String> {
    let attack_type: AttackType = attack.parse().map_err(|e| format!("{e}"))?;
    let t_s = SimConfig::default().t_s;
    let cfg = SimConfig {
        n_rb,
        n_targets,
        n_attackers: if attack_type == AttackType::Baseline { 0 } else { n_attackers },
        attack_type,
        attack_period_slots: if deniable { t_s } else { 1 },
        sim_slots: slots as u64,
        ..SimConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())
}

/// Resource-block occupancy of one trial, one byte per (slot, block).
#[derive(Debug)]
#[wasm_bindgen]
pub struct Trace {
    n_rb: usize,
    slots: usize,
    cells: Vec<u8>,
    prr: f64,
}

#[wasm_bindgen]
impl Trace {
    #[wasm_bindgen(getter)]
    pub fn n_rb(&self) -> usize {
        self.n_rb
    }

    #[wasm_bindgen(getter)]
    pub fn slots(&self) -> usize {
        self.slots
    }

    #[wasm_bindgen(getter)]
    pub fn prr(&self) -> f64 {
        self.prr
    }

    /// Row-major by slot; see the `CELL_*` codes.
    pub fn cells(&self) -> Vec<u8> {
        self.cells.clone()
    }
}

/// Runs one trial and classifies every block in every slot.
#[wasm_bindgen]
pub fn utilization_trace(
    attack: &str,
    n_rb: usize,
    n_targets: usize,
    n_attackers: usize,
    deniable: bool,
    slots: u32,
    seed: u64,
) -> Result<Trace, String> {
    let mut cfg = attack_config(attack, n_rb, n_targets, n_attackers, deniable, slots)?;
    cfg.record_utilization = true;
    let result = run_trial(&cfg, seed).map_err(|e| e.to_string())?;
    let slots = slots as usize;
    let mut targets = vec![0u16; n_rb * slots];
    let mut attackers = vec![0u16; n_rb * slots];
    for row in result.utilization.unwrap_or_default() {
        let i = row.slot as usize * n_rb + row.rb;
        match row.role {
            Role::Target => targets[i] += 1,
            Role::Attacker => attackers[i] += 1,
        }
    }
    let cells = targets
        .iter()
        .zip(&attackers)
        .map(|(&t, &a)| match (t, a) {
            (0, 0) => CELL_IDLE,
            (1, 0) => CELL_TARGET,
            (0, _) => CELL_ATTACKER,
            (_, 0) => CELL_TARGET_COLLIDED,
            _ => CELL_JAMMED,
        })
        .collect();
    Ok(Trace { n_rb, slots, cells, prr: result.prr })
}

/// Mean PRR at each total vehicle count, attackers held fixed.
#[wasm_bindgen]
pub fn prr_curve(
    attack: &str,
    n_rb: usize,
    n_attackers: usize,
    deniable: bool,
    totals: Vec<u32>,
    slots: u32,
    trials: u32,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let first = totals.first().copied().unwrap_or(0) as usize;
    let mut base = attack_config(
        attack,
        n_rb,
        first.saturating_sub(n_attackers),
        n_attackers,
        deniable,
        slots,
    )?;
    base.trials = trials;
    base.base_seed = seed;
    let values: Vec<f64> = totals.iter().map(|&v| v as f64).collect();
    let points = run_sweep(&base, SweepAxis::TotalVehicles, &values).map_err(|e| e.to_string())?;
    Ok(points.iter().map(|pt| pt.result.prr_mean).collect())
}

/// Stationary jamming probability and its slope at `points` evenly spaced attacker switching probabilities in [0, 1].
/// Returned flat as `[p', pi1, dpi1/dp', ...]`.
#[wasm_bindgen]
pub fn pi1_curve(p: f64, n_rb: usize, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least two points".into());
    }
    let mut out = Vec::with_capacity(points * 3);
    for i in 0..points {
        let q = i as f64 / (points - 1) as f64;
        out.push(q);
        out.push(stationary_pi1(p, q, n_rb).map_err(|e| e.to_string())?);
        out.push(pi1_derivative(p, q, n_rb).map_err(|e| e.to_string())?);
    }
    Ok(out)
}
