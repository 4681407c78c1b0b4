//! Honest vehicle behavior: keep the current resource block, or with
//! probability `p` move to one that was sensed idle in the previous slot.

use rand::Rng;

use crate::model::{Rb, SlotOccupancy, VehicleId, VehicleState};

fn is_idle_for(snapshot: &SlotOccupancy, rb: Rb, self_id: VehicleId) -> bool {
    snapshot.on(rb).iter().all(|t| t.id == self_id)
}

/// Blocks with no transmitter other than `self_id`, ascending. The vehicle's
/// own block is included when it was alone on it.
pub fn idle_rbs(snapshot: &SlotOccupancy, self_id: VehicleId) -> Vec<Rb> {
    (0..snapshot.n_rb())
        .filter(|&rb| is_idle_for(snapshot, rb, self_id))
        .collect()
}

/// Semi-persistent epoch decision of a target.
///
/// One uniform draw decides keep/switch; when switching, one more draw picks
/// among the idle blocks other than the current one. If there is no such
/// block the vehicle keeps its block.
pub fn target_update<R: Rng + ?Sized>(
    state: &VehicleState,
    snapshot: &SlotOccupancy,
    p: f64,
    rng: &mut R,
) -> Rb {
    if rng.random::<f64>() >= p {
        return state.current_rb;
    }
    let candidates: Vec<Rb> = (0..snapshot.n_rb())
        .filter(|&rb| rb != state.current_rb && is_idle_for(snapshot, rb, state.id))
        .collect();
    if candidates.is_empty() {
        return state.current_rb;
    }
    candidates[rng.random_range(0..candidates.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Role;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn target(id: VehicleId, rb: Rb) -> VehicleState {
        VehicleState { id, role: Role::Target, current_rb: rb, offset: 0 }
    }

    #[test]
    fn idle_includes_own_sole_block() {
        let mut snap = SlotOccupancy::empty(4);
        snap.push(0, 1, Role::Target);
        snap.push(1, 2, Role::Target);
        snap.push(1, 3, Role::Target);
        assert_eq!(idle_rbs(&snap, 1), vec![0, 2, 3]);
    }

    #[test]
    fn empty_snapshot_is_all_idle() {
        assert_eq!(idle_rbs(&SlotOccupancy::empty(3), 9), vec![0, 1, 2]);
    }

    /// Exhaustive 3-block, 3-vehicle enumeration against a direct count.
    #[test]
    fn idle_matches_enumeration_when_blocks_are_crowded() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let placement = [a, b, c];
                    let mut snap = SlotOccupancy::empty(3);
                    for (id, &rb) in placement.iter().enumerate() {
                        snap.push(rb, id as VehicleId, Role::Target);
                    }
                    for me in 0..3u32 {
                        let expected: Vec<Rb> = (0..3)
                            .filter(|&rb| {
                                placement
                                    .iter()
                                    .enumerate()
                                    .all(|(id, &r)| r != rb || id as u32 == me)
                            })
                            .collect();
                        assert_eq!(idle_rbs(&snap, me), expected, "{placement:?} me={me}");
                    }
                }
            }
        }
        // every block holds someone else: only vehicle 0's own block is left
        let mut snap = SlotOccupancy::empty(3);
        snap.push(0, 0, Role::Target);
        snap.push(1, 1, Role::Target);
        snap.push(2, 2, Role::Attacker);
        assert_eq!(idle_rbs(&snap, 0), vec![0]);
        snap.push(0, 3, Role::Attacker);
        assert!(idle_rbs(&snap, 0).is_empty());
    }

    #[test]
    fn p_zero_never_moves() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let snap = SlotOccupancy::empty(10);
        for _ in 0..1000 {
            assert_eq!(target_update(&target(0, 4), &snap, 0.0, &mut rng), 4);
        }
    }

    #[test]
    fn p_one_with_single_candidate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let snap = SlotOccupancy::empty(2);
        for _ in 0..1000 {
            assert_eq!(target_update(&target(0, 0), &snap, 1.0, &mut rng), 1);
        }
    }

    #[test]
    fn no_candidates_keeps_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut snap = SlotOccupancy::empty(2);
        snap.push(0, 0, Role::Target);
        snap.push(1, 1, Role::Attacker);
        assert_eq!(target_update(&target(0, 0), &snap, 1.0, &mut rng), 0);
    }

    #[test]
    fn switch_is_uniform_over_idle_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut snap = SlotOccupancy::empty(200);
        snap.push(7, 1, Role::Attacker);
        snap.push(3, 0, Role::Target);
        let me = target(0, 3);
        let draws = 1_000_000u32;
        let mut counts = vec![0u32; 200];
        for _ in 0..draws {
            counts[target_update(&me, &snap, 1.0, &mut rng)] += 1;
        }
        assert_eq!(counts[3], 0);
        assert_eq!(counts[7], 0);
        let q = 1.0 / 198.0;
        let mean = f64::from(draws) * q;
        let sigma = (f64::from(draws) * q * (1.0 - q)).sqrt();
        for (rb, &c) in counts.iter().enumerate().filter(|(rb, _)| *rb != 3 && *rb != 7) {
            // 4 sigma per cell keeps the family-wise false alarm rate small
            assert!((f64::from(c) - mean).abs() < 4.0 * sigma, "rb {rb}: {c}");
        }
    }

    #[test]
    fn switching_consumes_a_fixed_number_of_draws() {
        let mut snap = SlotOccupancy::empty(50);
        snap.push(0, 0, Role::Target);
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = a.clone();
        target_update(&target(0, 0), &snap, 1.0, &mut a);
        let _: f64 = b.random();
        let _ = b.random_range(0..49usize);
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }
}
