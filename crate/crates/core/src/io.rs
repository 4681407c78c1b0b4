//! Flat `key = value` experiment configs, the figure presets, and CSV output.
//!
//! Config keys: `n_rb`, `n_targets` (required), `n_attackers`, `p`,
//! `p_prime`, `t_s`, `attack_period_slots`, `attack_type`, `sim_slots`,
//! `trials`, `base_seed`, `synchronized`, `record_utilization`. `#` starts a
//! comment. `attack_period_slots` defaults to `t_s`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::engine::{ExperimentResult, SweepAxis};
use crate::model::{AttackType, ConfigError, SimConfig, UtilizationRow};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: cannot parse `{value}` for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("missing required key {0}")]
    MissingKey(&'static str),
    #[error("{}: {source}", location(*.line, .key))]
    Invalid {
        key: &'static str,
        /// 0 when the offending value came from a default.
        line: usize,
        #[source]
        source: ConfigError,
    },
    #[error("unknown preset `{name}`; available: {}", PRESET_NAMES.join(", "))]
    UnknownPreset { name: String },
}

fn location(line: usize, key: &str) -> String {
    if line == 0 {
        format!("default for `{key}`")
    } else {
        format!("line {line}, key `{key}`")
    }
}

const KEYS: [&str; 13] = [
    "n_rb",
    "n_targets",
    "n_attackers",
    "p",
    "p_prime",
    "t_s",
    "attack_period_slots",
    "attack_type",
    "sim_slots",
    "trials",
    "base_seed",
    "synchronized",
    "record_utilization",
];

fn offending_key(err: &ConfigError) -> &'static str {
    match err {
        ConfigError::TooFewResourceBlocks(_) => "n_rb",
        ConfigError::Overload { .. } | ConfigError::BaselineWithAttackers(_) => "n_attackers",
        ConfigError::ProbabilityOutOfRange { name, .. } | ConfigError::NotPositive(name) => name,
        ConfigError::InvalidAttackPeriod { .. } => "attack_period_slots",
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, IoError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| IoError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

pub fn parse_config(text: &str) -> Result<SimConfig, IoError> {
    let mut cfg = SimConfig::default();
    let mut lines: HashMap<&'static str, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| IoError::Syntax {
            line,
            text: content.to_string(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let key: &'static str = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| IoError::UnknownKey { line, key: key.to_string() })?;
        if lines.insert(key, line).is_some() {
            return Err(IoError::DuplicateKey { line, key: key.to_string() });
        }
        match key {
            "n_rb" => cfg.n_rb = parse_value(line, key, value)?,
            "n_targets" => cfg.n_targets = parse_value(line, key, value)?,
            "n_attackers" => cfg.n_attackers = parse_value(line, key, value)?,
            "p" => cfg.p = parse_value(line, key, value)?,
            "p_prime" => cfg.p_prime = parse_value(line, key, value)?,
            "t_s" => cfg.t_s = parse_value(line, key, value)?,
            "attack_period_slots" => cfg.attack_period_slots = parse_value(line, key, value)?,
            "attack_type" => cfg.attack_type = parse_value(line, key, value)?,
            "sim_slots" => cfg.sim_slots = parse_value(line, key, value)?,
            "trials" => cfg.trials = parse_value(line, key, value)?,
            "base_seed" => cfg.base_seed = parse_value(line, key, value)?,
            "synchronized" => cfg.synchronized = parse_value(line, key, value)?,
            "record_utilization" => cfg.record_utilization = parse_value(line, key, value)?,
            _ => unreachable!("key list and match arms agree"),
        }
    }
    if !lines.contains_key("attack_period_slots") {
        cfg.attack_period_slots = cfg.t_s;
    }

    let cfg = cfg.validate().map_err(|source| {
        let key = offending_key(&source);
        IoError::Invalid { key, line: lines.get(key).copied().unwrap_or(0), source }
    })?;
    if !lines.contains_key("n_targets") {
        return Err(IoError::MissingKey("n_targets"));
    }
    Ok(cfg)
}

/// Every key, one per line, in the order `parse_config` documents.
pub fn serialize_config(cfg: &SimConfig) -> String {
    format!(
        "n_rb = {}\nn_targets = {}\nn_attackers = {}\np = {}\np_prime = {}\nt_s = {}\n\
         attack_period_slots = {}\nattack_type = {}\nsim_slots = {}\ntrials = {}\n\
         base_seed = {}\nsynchronized = {}\nrecord_utilization = {}\n",
        cfg.n_rb,
        cfg.n_targets,
        cfg.n_attackers,
        cfg.p,
        cfg.p_prime,
        cfg.t_s,
        cfg.attack_period_slots,
        cfg.attack_type,
        cfg.sim_slots,
        cfg.trials,
        cfg.base_seed,
        cfg.synchronized,
        cfg.record_utilization,
    )
}

/// One curve of a figure: `base` swept along `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub base: SimConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub series: Vec<Series>,
}

pub const PRESET_NAMES: [&str; 10] = [
    "fig5-oblivious-p0",
    "fig6-oblivious-p1",
    "fig7-vary-pprime",
    "fig9-vary-pprime-fixed-na",
    "fig10-vary-p",
    "fig11-smart",
    "fig12-cooperative",
    "fig13-compare",
    "fig15-attack-period-low",
    "fig16-attack-period-high",
];

const LOW_TOTALS: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
const HIGH_TOTALS: [f64; 5] = [60.0, 80.0, 100.0, 120.0, 140.0];

fn grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|i| ((from + i as f64 * step) * 1e9).round() / 1e9).collect()
}

fn attack(attack_type: AttackType, n_attackers: usize) -> SimConfig {
    SimConfig { attack_type, n_attackers, ..SimConfig::default() }
}

fn over_totals(label: impl Into<String>, base: SimConfig, totals: &[f64]) -> Series {
    Series {
        label: label.into(),
        base,
        axis: SweepAxis::TotalVehicles,
        values: totals.to_vec(),
    }
}

/// Baseline plus one curve per attacker count.
fn attacker_count_figure(base: SimConfig, sim_slots: u64) -> Vec<Series> {
    let mut out = vec![over_totals(
        "baseline",
        SimConfig { sim_slots, ..SimConfig::default() },
        &LOW_TOTALS,
    )];
    for na in [1, 5] {
        out.push(over_totals(
            format!("{} N_a={na}", base.attack_type),
            SimConfig { n_attackers: na, sim_slots, ..base.clone() },
            &LOW_TOTALS,
        ));
    }
    out
}

fn attack_period_figure(totals: &[f64], sim_slots: u64) -> Vec<Series> {
    let mut out = Vec::new();
    for t in [AttackType::Oblivious, AttackType::Smart, AttackType::Cooperative] {
        for (tag, period) in [("deniable", 10), ("non-deniable", 1)] {
            let base = SimConfig { attack_period_slots: period, sim_slots, ..attack(t, 5) };
            out.push(over_totals(format!("{t} {tag}"), base, totals));
        }
    }
    out
}

pub fn preset(name: &str) -> Result<Preset, IoError> {
    let (name, description, series) = match name {
        "fig5-oblivious-p0" => (
            "fig5-oblivious-p0",
            "oblivious attack, p' = 0, against baseline; 3000 s",
            attacker_count_figure(SimConfig { p_prime: 0.0, ..attack(AttackType::Oblivious, 0) }, 30_000),
        ),
        "fig6-oblivious-p1" => (
            "fig6-oblivious-p1",
            "oblivious attack, p' = 1, against baseline; 3000 s",
            attacker_count_figure(SimConfig { p_prime: 1.0, ..attack(AttackType::Oblivious, 0) }, 30_000),
        ),
        "fig7-vary-pprime" => (
            "fig7-vary-pprime",
            "oblivious attack, N_a = 5, p' in {0, 0.5, 1}",
            [0.0, 0.5, 1.0]
                .into_iter()
                .map(|q| {
                    over_totals(
                        format!("p'={q}"),
                        SimConfig { p_prime: q, ..attack(AttackType::Oblivious, 5) },
                        &LOW_TOTALS,
                    )
                })
                .collect(),
        ),
        "fig9-vary-pprime-fixed-na" => (
            "fig9-vary-pprime-fixed-na",
            "oblivious attack, PRR versus p', N_a = 5, N_v in {5, 25, 45}; 30000 s",
            [5, 25, 45]
                .into_iter()
                .map(|nv| Series {
                    label: format!("N_v={nv}"),
                    base: SimConfig { n_targets: nv, sim_slots: 300_000, ..attack(AttackType::Oblivious, 5) },
                    axis: SweepAxis::PPrime,
                    values: grid(0.0, 1.0, 0.1),
                })
                .collect(),
        ),
        "fig10-vary-p" => (
            "fig10-vary-p",
            "oblivious attack, PRR versus p, N_v = 45, N_a = 5, p' = 0.5; 120000 s",
            vec![Series {
                label: "N_v=45".into(),
                base: SimConfig {
                    n_targets: 45,
                    p_prime: 0.5,
                    sim_slots: 1_200_000,
                    ..attack(AttackType::Oblivious, 5)
                },
                axis: SweepAxis::P,
                values: grid(0.05, 1.0, 0.05),
            }],
        ),
        "fig11-smart" => (
            "fig11-smart",
            "smart attack, N_a in {1, 5}, against baseline",
            attacker_count_figure(attack(AttackType::Smart, 0), 3000),
        ),
        "fig12-cooperative" => (
            "fig12-cooperative",
            "cooperative attack, N_a in {1, 5}, against baseline",
            attacker_count_figure(attack(AttackType::Cooperative, 0), 3000),
        ),
        "fig13-compare" => (
            "fig13-compare",
            "all attack types at N_a = 5 (oblivious with p' = 1), deniable",
            {
                let mut s = vec![over_totals("baseline", SimConfig::default(), &LOW_TOTALS)];
                for t in [AttackType::Oblivious, AttackType::Smart, AttackType::Cooperative] {
                    s.push(over_totals(t.as_str(), attack(t, 5), &LOW_TOTALS));
                }
                s
            },
        ),
        "fig15-attack-period-low" => (
            "fig15-attack-period-low",
            "all attack types, deniable and non-deniable, N_a = 5, low density",
            attack_period_figure(&LOW_TOTALS, 3000),
        ),
        "fig16-attack-period-high" => (
            "fig16-attack-period-high",
            "all attack types, deniable and non-deniable, N_a = 5, high density; 3000 s",
            attack_period_figure(&HIGH_TOTALS, 30_000),
        ),
        other => return Err(IoError::UnknownPreset { name: other.to_string() }),
    };
    Ok(Preset { name, description, series })
}

pub const RESULTS_HEADER: &str = "total_vehicles,n_targets,n_attackers,attack_type,p,p_prime,attack_period_slots,trials,prr_mean,prr_ci_half_width";

/// One row per result, in the order given.
pub fn write_results_csv(results: &[ExperimentResult]) -> String {
    let mut out = String::with_capacity(64 * (results.len() + 1));
    out.push_str(RESULTS_HEADER);
    out.push('\n');
    for r in results {
        let c = &r.config;
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{},{},{:.6},{:.6}",
            c.n_vehicles(),
            c.n_targets,
            c.n_attackers,
            c.attack_type,
            c.p,
            c.p_prime,
            c.attack_period_slots,
            c.trials,
            r.prr_mean,
            r.prr_ci_half_width,
        );
    }
    out
}

pub const UTILIZATION_HEADER: &str = "slot,vehicle_id,role,rb,collided";

/// Rows are written as given; the engine emits them by (slot, vehicle_id).
pub fn write_utilization_csv(trace: &[UtilizationRow]) -> String {
    let mut out = String::with_capacity(24 * (trace.len() + 1));
    out.push_str(UTILIZATION_HEADER);
    out.push('\n');
    for row in trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.slot,
            row.vehicle_id,
            row.role,
            row.rb,
            u8::from(row.collided)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_experiment, run_sweep, run_trial};
    use crate::model::Role;
    use proptest::prelude::*;

    #[test]
    fn cooperative_example_uses_defaults() {
        let cfg = parse_config("attack_type = cooperative\nn_targets = 5\nn_attackers = 5").unwrap();
        assert_eq!(
            cfg,
            SimConfig {
                attack_type: AttackType::Cooperative,
                n_targets: 5,
                n_attackers: 5,
                ..SimConfig::default()
            }
        );
        assert!(cfg.is_deniable());
        assert_eq!((cfg.n_rb, cfg.t_s, cfg.sim_slots, cfg.trials), (200, 10, 3000, 10));
    }

    #[test]
    fn empty_text_needs_targets() {
        assert_eq!(parse_config(""), Err(IoError::MissingKey("n_targets")));
        assert_eq!(
            parse_config("").unwrap_err().to_string(),
            "missing required key n_targets"
        );
    }

    #[test]
    fn out_of_range_probability() {
        let err = parse_config("p = 1.5").unwrap_err();
        assert!(matches!(
            err,
            IoError::Invalid { key: "p", line: 1, source: ConfigError::ProbabilityOutOfRange { .. } }
        ));
        assert!(err.to_string().contains("line 1, key `p`"));
    }

    #[test]
    fn attack_period_follows_t_s() {
        let cfg = parse_config("n_targets = 3\nt_s = 5").unwrap();
        assert_eq!(cfg.attack_period_slots, 5);
        let err = parse_config("n_targets = 3\nt_s = 5\nattack_period_slots = 10").unwrap_err();
        assert!(matches!(err, IoError::Invalid { key: "attack_period_slots", line: 3, .. }));
    }

    #[test]
    fn syntax_errors_name_their_line() {
        let text = "# comment\nn_targets = 3 # trailing\nbogus = 1";
        assert_eq!(
            parse_config(text),
            Err(IoError::UnknownKey { line: 3, key: "bogus".into() })
        );
        assert!(matches!(
            parse_config("n_targets = three"),
            Err(IoError::BadValue { line: 1, .. })
        ));
        assert!(matches!(parse_config("n_targets 3"), Err(IoError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_config("n_targets = 1\nn_targets = 2"),
            Err(IoError::DuplicateKey { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("n_targets = 1\nattack_type = jammer"),
            Err(IoError::BadValue { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("n_targets = 4\nn_attackers = 1\nn_rb = 4\nattack_type = smart"),
            Err(IoError::Invalid { key: "n_attackers", line: 2, source: ConfigError::Overload { .. } })
        ));
    }

    fn arb_config() -> impl Strategy<Value = SimConfig> {
        (
            2usize..300,
            0.0f64..=1.0,
            0.0f64..=1.0,
            1u32..20,
            any::<bool>(),
            0usize..4,
            (1u64..100_000, 1u32..50, any::<u64>(), any::<bool>(), any::<bool>()),
        )
            .prop_flat_map(|(n_rb, p, q, t_s, deniable, kind, rest)| {
                (0..=n_rb, Just((n_rb, p, q, t_s, deniable, kind, rest)))
            })
            .prop_flat_map(|(nv, params)| (Just(nv), 0..=(params.0 - nv), Just(params)))
            .prop_map(|(nv, na, (n_rb, p, q, t_s, deniable, kind, rest))| {
                let attack_type = AttackType::ALL[kind];
                SimConfig {
                    n_rb,
                    n_targets: nv,
                    n_attackers: if attack_type == AttackType::Baseline { 0 } else { na },
                    p,
                    p_prime: q,
                    t_s,
                    attack_period_slots: if deniable { t_s } else { 1 },
                    attack_type,
                    sim_slots: rest.0,
                    trials: rest.1,
                    base_seed: rest.2,
                    synchronized: rest.3,
                    record_utilization: rest.4,
                }
            })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(cfg in arb_config()) {
            let cfg = cfg.validate().unwrap();
            prop_assert_eq!(parse_config(&serialize_config(&cfg)), Ok(cfg));
        }
    }

    #[test]
    fn every_preset_is_valid() {
        for name in PRESET_NAMES {
            let preset = preset(name).unwrap();
            assert_eq!(preset.name, name);
            assert!(!preset.series.is_empty());
            for s in &preset.series {
                for &v in &s.values {
                    crate::engine::sweep_config(&s.base, s.axis, v).unwrap();
                }
            }
        }
    }

    #[test]
    fn preset_parameterizations() {
        let p = preset("fig10-vary-p").unwrap();
        let s = &p.series[0];
        assert_eq!((s.base.n_targets, s.base.n_attackers, s.base.p_prime), (45, 5, 0.5));
        assert_eq!(s.axis, SweepAxis::P);
        assert_eq!(s.values.len(), 20);
        assert_eq!((s.values[0], s.values[19]), (0.05, 1.0));

        let p = preset("fig12-cooperative").unwrap();
        let attackers: Vec<usize> = p.series.iter().map(|s| s.base.n_attackers).collect();
        assert_eq!(attackers, vec![0, 1, 5]);
        for s in &p.series[1..] {
            assert_eq!(s.base.attack_type, AttackType::Cooperative);
            assert!(s.base.is_deniable());
            assert_eq!(s.axis, SweepAxis::TotalVehicles);
            assert_eq!(s.values[0], 10.0);
        }

        let p = preset("fig16-attack-period-high").unwrap();
        assert_eq!(p.series.len(), 6);
        assert!(p.series.iter().any(|s| s.base.attack_period_slots == 1));
    }

    #[test]
    fn unknown_preset_lists_catalog() {
        let err = preset("nonexistent").unwrap_err();
        let msg = err.to_string();
        for name in PRESET_NAMES {
            assert!(msg.contains(name));
        }
    }

    fn small(attack_type: AttackType, na: usize) -> SimConfig {
        SimConfig { attack_type, n_attackers: na, n_targets: 5, sim_slots: 200, trials: 2, ..SimConfig::default() }
    }

    #[test]
    fn results_csv_shape() {
        let r = run_experiment(&small(AttackType::Baseline, 0)).unwrap();
        let csv = write_results_csv(&[r.clone()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], RESULTS_HEADER);
        assert!(lines[1].starts_with("5,5,0,baseline,0.200000,1.000000,10,2,"));
        assert!(csv.ends_with('\n'));
        assert_eq!(csv, write_results_csv(&[r]));

        let pts = run_sweep(
            &small(AttackType::Smart, 5),
            SweepAxis::TotalVehicles,
            &LOW_TOTALS,
        )
        .unwrap();
        let results: Vec<ExperimentResult> = pts.into_iter().map(|p| p.result).collect();
        let csv = write_results_csv(&results);
        let totals: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(totals, ["10", "20", "30", "40", "50"]);
    }

    #[test]
    fn utilization_csv_shape() {
        let rows = [
            UtilizationRow { slot: 0, vehicle_id: 0, role: Role::Target, rb: 3, collided: true },
            UtilizationRow { slot: 0, vehicle_id: 1, role: Role::Attacker, rb: 3, collided: true },
        ];
        assert_eq!(
            write_utilization_csv(&rows),
            "slot,vehicle_id,role,rb,collided\n0,0,target,3,1\n0,1,attacker,3,1\n"
        );

        let cfg = SimConfig { n_targets: 1, sim_slots: 2, record_utilization: true, ..small(AttackType::Baseline, 0) };
        let trace = run_trial(&cfg, 1).unwrap().utilization.unwrap();
        let csv = write_utilization_csv(&trace);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));
    }
}
