//! Attacker resource-block selection: oblivious, smart and cooperative.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::model::{Rb, Role, SlotOccupancy, VehicleId, VehicleState};

/// Uniform draw over the `n_rb - 1` blocks other than `current`.
fn uniform_other<R: Rng + ?Sized>(current: Rb, n_rb: usize, rng: &mut R) -> Rb {
    let pick = rng.random_range(0..n_rb - 1);
    if pick >= current {
        pick + 1
    } else {
        pick
    }
}

/// Type 1. Does not sense the channel: with probability `p_prime` the new
/// block is uniform over every block except the current one, busy or not.
pub fn oblivious_update<R: Rng + ?Sized>(
    state: &VehicleState,
    p_prime: f64,
    n_rb: usize,
    rng: &mut R,
) -> Rb {
    if rng.random::<f64>() >= p_prime {
        return state.current_rb;
    }
    uniform_other(state.current_rb, n_rb, rng)
}

/// Blocks whose only transmitter is a target.
pub fn find_loner_rbs(snapshot: &SlotOccupancy) -> BTreeSet<Rb> {
    loner_rbs_seen_by(snapshot, &[])
}

/// Loner blocks as perceived by attackers that know their own
/// transmissions: transmitters in `observers` are ignored, so a target an
/// observer is already jamming still counts as a loner.
pub fn loner_rbs_seen_by(snapshot: &SlotOccupancy, observers: &[VehicleId]) -> BTreeSet<Rb> {
    snapshot
        .blocks()
        .filter_map(|(rb, txs)| {
            let mut others = txs.iter().filter(|t| !observers.contains(&t.id));
            match (others.next(), others.next()) {
                (Some(only), None) if only.role == Role::Target => Some(rb),
                _ => None,
            }
        })
        .collect()
}

/// Type 2. Uniform over the loner blocks (re-drawing the block it already
/// jams is allowed); with no loners, uniform over the other blocks.
pub fn smart_update<R: Rng + ?Sized>(
    state: &VehicleState,
    loners: &BTreeSet<Rb>,
    n_rb: usize,
    rng: &mut R,
) -> Rb {
    if loners.is_empty() {
        return uniform_other(state.current_rb, n_rb, rng);
    }
    let pick = rng.random_range(0..loners.len());
    *loners.iter().nth(pick).expect("pick < loner count")
}

/// Blocks claimed by cooperative attackers. At most one attacker per block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClaimRegistry {
    claims: BTreeMap<VehicleId, Rb>,
}

impl ClaimRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn claim_of(&self, attacker: VehicleId) -> Option<Rb> {
        self.claims.get(&attacker).copied()
    }

    pub fn is_claimed(&self, rb: Rb) -> bool {
        self.claims.values().any(|&c| c == rb)
    }

    pub fn claimed(&self) -> BTreeSet<Rb> {
        self.claims.values().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VehicleId, Rb)> + '_ {
        self.claims.iter().map(|(&id, &rb)| (id, rb))
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    /// Records a claim. Panics if another attacker already holds `rb`.
    pub fn claim(&mut self, attacker: VehicleId, rb: Rb) {
        assert!(
            self.claims.iter().all(|(&id, &c)| c != rb || id == attacker),
            "block {rb} already claimed"
        );
        self.claims.insert(attacker, rb);
    }

    pub fn release(&mut self, attacker: VehicleId) -> Option<Rb> {
        self.claims.remove(&attacker)
    }
}

/// Type 3. Assigns every decider a block, visiting deciders in ascending id
/// order.
///
/// `deciders` pairs each deciding attacker with its current block. Old claims
/// of the deciders are released first; each decider then draws uniformly
/// from the loners nobody has claimed yet, or, when none are left, uniformly
/// from the unclaimed blocks other than its current one.
pub fn cooperative_assign<R: Rng + ?Sized>(
    deciders: &[(VehicleId, Rb)],
    loners: &BTreeSet<Rb>,
    registry: &mut ClaimRegistry,
    n_rb: usize,
    rng: &mut R,
) -> BTreeMap<VehicleId, Rb> {
    let mut order: Vec<(VehicleId, Rb)> = deciders.to_vec();
    order.sort_unstable_by_key(|&(id, _)| id);
    for &(id, _) in &order {
        registry.release(id);
    }

    let mut claimed = registry.claimed();
    let mut free_loners: Vec<Rb> = loners.difference(&claimed).copied().collect();
    let mut assignment = BTreeMap::new();
    for (id, current) in order {
        let rb = if free_loners.is_empty() {
            let candidates: Vec<Rb> = (0..n_rb)
                .filter(|rb| *rb != current && !claimed.contains(rb))
                .collect();
            if candidates.is_empty() {
                // every other block is claimed; stay put
                current
            } else {
                candidates[rng.random_range(0..candidates.len())]
            }
        } else {
            // order of the remaining loners is irrelevant to the draw's law
            free_loners.swap_remove(rng.random_range(0..free_loners.len()))
        };
        claimed.insert(rb);
        registry.claim(id, rb);
        assignment.insert(id, rb);
    }
    assignment
}
