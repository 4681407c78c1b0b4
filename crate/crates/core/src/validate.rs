//! Oracle checks: closed forms against independent computations and
//! against the simulator.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis;
use crate::attack::{cooperative_assign, ClaimRegistry};
use crate::engine::run_experiment;
use crate::model::{AttackType, Rb, SimConfig, VehicleId};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Check { name: name.into(), passed, detail }
    }
}

/// p and p' in {0.05, ..., 1}, N_r in {2, 10, 200}.
pub fn analysis_grid() -> Vec<(f64, f64, usize)> {
    let probs: Vec<f64> = (1..=20).map(|i| f64::from(i) * 0.05).collect();
    let mut out = Vec::with_capacity(3 * probs.len() * probs.len());
    for n in [2, 10, 200] {
        for &p in &probs {
            for &q in &probs {
                out.push((p, q, n));
            }
        }
    }
    out
}

/// Largest gap between the closed-form collision probability and the
/// balance-equation solution over the grid.
pub fn stationary_max_error() -> f64 {
    analysis_grid()
        .into_iter()
        .map(|(p, q, n)| {
            let closed = analysis::stationary_pi1(p, q, n).expect("grid avoids p = p' = 0");
            let chain = analysis::transition_matrix(p, q, n).expect("n >= 2");
            let (_, numeric) = analysis::stationary_numeric(&chain).expect("irreducible");
            (closed - numeric).abs()
        })
        .fold(0.0, f64::max)
}

/// Collision fraction of a synchronized one-target, one-oblivious-attacker
/// run where both decide every slot.
pub fn one_on_one_collision_fraction(p: f64, p_prime: f64, sim_slots: u64, seed: u64) -> f64 {
    let cfg = SimConfig {
        n_targets: 1,
        n_attackers: 1,
        p,
        p_prime,
        t_s: 1,
        attack_period_slots: 1,
        attack_type: AttackType::Oblivious,
        sim_slots,
        trials: 10,
        base_seed: seed,
        synchronized: true,
        ..SimConfig::default()
    };
    let r = run_experiment(&cfg).expect("valid config");
    1.0 - r.received as f64 / r.sent as f64
}

/// Fraction of target transmissions hit by an attacker when targets never
/// move (`p = 0`) and five oblivious attackers roam.
pub fn static_target_jam_fraction(p_prime: f64, n_targets: usize, sim_slots: u64, seed: u64) -> f64 {
    let cfg = SimConfig {
        n_targets,
        n_attackers: 5,
        p: 0.0,
        p_prime,
        attack_type: AttackType::Oblivious,
        sim_slots,
        trials: 10,
        base_seed: seed,
        ..SimConfig::default()
    };
    run_experiment(&cfg).expect("valid config").attacker_jam_fraction()
}

/// One random cooperative assignment. Returns a description of the first
/// violated property, if any.
pub fn cooperative_instance<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n_rb = rng.random_range(2..=40usize);
    let n_attackers = rng.random_range(1..=n_rb.min(12));
    let n_deciders = rng.random_range(1..=n_attackers);

    // non-deciders sit on distinct claimed blocks
    let mut registry = ClaimRegistry::new();
    let held = sample(rng, n_rb, n_attackers - n_deciders);
    for (i, rb) in held.iter().enumerate() {
        registry.claim(100 + i as VehicleId, rb);
    }
    let mut deciders: Vec<(VehicleId, Rb)> = (0..n_deciders)
        .map(|i| (i as VehicleId, rng.random_range(0..n_rb)))
        .collect();
    // deciders need not arrive sorted
    if rng.random::<bool>() {
        deciders.reverse();
    }
    let loners: BTreeSet<Rb> = (0..n_rb).filter(|_| rng.random::<f64>() < 0.4).collect();

    let before: BTreeSet<Rb> = registry.claimed();
    let available = loners.difference(&before).count();
    let assignment = cooperative_assign(&deciders, &loners, &mut registry, n_rb, rng);

    if assignment.len() != n_deciders {
        return Err(format!("{} of {n_deciders} deciders assigned", assignment.len()));
    }
    let all: Vec<Rb> = registry.iter().map(|(_, rb)| rb).collect();
    let distinct: BTreeSet<Rb> = all.iter().copied().collect();
    if distinct.len() != all.len() || all.len() != n_attackers {
        return Err(format!("claims not disjoint: {all:?}"));
    }
    let covered = assignment.values().filter(|rb| loners.contains(rb)).count();
    let expected = analysis::max_jammed_loners(available, n_deciders);
    if covered != expected {
        return Err(format!(
            "covered {covered} loners, expected min({available}, {n_deciders}) = {expected}"
        ));
    }
    for (&id, &rb) in &assignment {
        let current = deciders.iter().find(|d| d.0 == id).unwrap().1;
        if !loners.contains(&rb) && rb == current && distinct.len() < n_rb {
            return Err(format!("decider {id} fell back onto its own block {rb}"));
        }
    }
    Ok(())
}

/// Runs `instances` random assignments; returns the failures.
pub fn cooperative_failures(instances: u32, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..instances)
        .filter_map(|_| cooperative_instance(&mut rng).err())
        .collect()
}

/// The oracle suite behind `cv2x-dos validate`. `fast` cuts horizons
/// tenfold and widens the statistical tolerances by sqrt(10).
pub fn run_checks(fast: bool) -> Vec<Check> {
    let shrink: u64 = if fast { 10 } else { 1 };
    let widen = if fast { 10f64.sqrt() } else { 1.0 };
    let mut checks = Vec::new();

    let err = stationary_max_error();
    checks.push(Check::new(
        "closed-form vs numeric stationary",
        err <= 1e-12,
        format!("max |diff| = {err:.3e} (tol 1e-12)"),
    ));

    let tol = 0.05 * widen;
    let mut worst: f64 = 0.0;
    for (p, q) in [(0.2, 1.0), (0.2, 0.5), (0.5, 0.5)] {
        let sim = one_on_one_collision_fraction(p, q, 100_000 / shrink, 7);
        let exact = analysis::stationary_pi1(p, q, 200).expect("p > 0");
        worst = worst.max((sim - exact).abs() / exact);
    }
    checks.push(Check::new(
        "synchronized 1v1 simulation vs stationary collision probability",
        worst <= tol,
        format!("worst relative error {worst:.4} (tol {tol:.4})"),
    ));

    let tol = 0.10 * widen;
    let exact = analysis::static_target_jam_prob(200, 5);
    let fractions: Vec<f64> = [0.25, 0.5, 1.0]
        .into_iter()
        .map(|q| static_target_jam_fraction(q, 100, 100_000 / shrink, 11))
        .collect();
    let worst = fractions.iter().map(|f| (f - exact).abs() / exact).fold(0.0, f64::max);
    checks.push(Check::new(
        "static targets: jam probability independent of p'",
        worst <= tol,
        format!("fractions {fractions:.5?} vs {exact:.5} (tol {tol:.3})"),
    ));

    let instances = if fast { 1_000 } else { 10_000 };
    let failures = cooperative_failures(instances, 13);
    checks.push(Check::new(
        "cooperative assignment covers min(loners, attackers)",
        failures.is_empty(),
        match failures.first() {
            None => format!("{instances} instances"),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        },
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        assert_eq!(analysis_grid().len(), 1200);
    }

    #[test]
    fn cooperative_instances_hold() {
        assert_eq!(cooperative_failures(2_000, 99), Vec::<String>::new());
    }

    #[test]
    fn fast_suite_passes() {
        let checks = run_checks(true);
        assert_eq!(checks.len(), 4);
        for c in checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
