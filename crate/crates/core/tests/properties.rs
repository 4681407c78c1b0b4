use proptest::prelude::*;

use cv2x_dos::attack::{find_loner_rbs, loner_rbs_seen_by, smart_update};
use cv2x_dos::model::{AttackType, Role, SimConfig, SlotOccupancy, VehicleState};
use cv2x_dos::protocol::{idle_rbs, target_update};
use cv2x_dos::run_trial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_config() -> impl Strategy<Value = SimConfig> {
    (2usize..25, 0usize..4, 0.0f64..=1.0, 0.0f64..=1.0, 1u32..5, any::<bool>(), any::<bool>())
        .prop_flat_map(|(n_rb, kind, p, q, t_s, deniable, sync)| {
            let attack_type = AttackType::ALL[kind];
            let max_attackers = if attack_type == AttackType::Baseline { 0 } else { n_rb };
            (0..=max_attackers).prop_flat_map(move |na| {
                (0..=(n_rb - na)).prop_map(move |nv| SimConfig {
                    n_rb,
                    n_targets: nv,
                    n_attackers: na,
                    p,
                    p_prime: q,
                    t_s,
                    attack_period_slots: if deniable { t_s } else { 1 },
                    attack_type,
                    sim_slots: 40,
                    trials: 1,
                    synchronized: sync,
                    record_utilization: true,
                    ..SimConfig::default()
                })
            })
        })
}

fn arb_snapshot() -> impl Strategy<Value = SlotOccupancy> {
    prop::collection::vec((0usize..10, any::<bool>()), 0..12).prop_map(|placed| {
        let mut s = SlotOccupancy::empty(10);
        for (id, (rb, attacker)) in placed.into_iter().enumerate() {
            let role = if attacker { Role::Attacker } else { Role::Target };
            s.push(rb, id as u32, role);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trials_conserve_and_keep_occupancy(cfg in arb_config(), seed in any::<u64>()) {
        let r = run_trial(&cfg, seed).unwrap();
        prop_assert_eq!(r.sent, cfg.n_targets as u64 * cfg.sim_slots);
        prop_assert!(r.received <= r.sent);
        prop_assert!((0.0..=1.0).contains(&r.prr));
        let rows = r.utilization.unwrap();
        let n = cfg.n_vehicles();
        prop_assert_eq!(rows.len(), n * cfg.sim_slots as usize);
        for slot in 1..cfg.sim_slots as usize {
            let prev = &rows[(slot - 1) * n..slot * n];
            let cur = &rows[slot * n..(slot + 1) * n];
            for t in cur.iter().filter(|r| r.role == Role::Target) {
                let before = prev[t.vehicle_id as usize].rb;
                if t.rb != before {
                    prop_assert!(prev.iter().all(|o| o.vehicle_id == t.vehicle_id || o.rb != t.rb));
                }
            }
        }
        prop_assert_eq!(&run_trial(&cfg, seed).unwrap().utilization.unwrap(), &rows);
    }

    #[test]
    fn loners_match_brute_force(snap in arb_snapshot()) {
        let expected: Vec<usize> = (0..10)
            .filter(|&rb| snap.on(rb).len() == 1 && snap.on(rb)[0].role == Role::Target)
            .collect();
        prop_assert_eq!(find_loner_rbs(&snap).into_iter().collect::<Vec<_>>(), expected);
        prop_assert_eq!(loner_rbs_seen_by(&snap, &[]), find_loner_rbs(&snap));
    }

    #[test]
    fn targets_only_move_to_idle_blocks(snap in arb_snapshot(), seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for id in 0..snap.total_transmitters() as u32 {
            let rb = snap.rb_of(id).unwrap();
            let me = VehicleState { id, role: Role::Target, current_rb: rb, offset: 0 };
            let next = target_update(&me, &snap, p, &mut rng);
            prop_assert!(next == rb || idle_rbs(&snap, id).contains(&next));
        }
    }

    #[test]
    fn smart_picks_a_loner_when_one_exists(snap in arb_snapshot(), seed in any::<u64>(), current in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let loners = find_loner_rbs(&snap);
        let me = VehicleState { id: 99, role: Role::Attacker, current_rb: current, offset: 0 };
        let next = smart_update(&me, &loners, 10, &mut rng);
        if loners.is_empty() {
            prop_assert_ne!(next, current);
        } else {
            prop_assert!(loners.contains(&next));
        }
    }
}
