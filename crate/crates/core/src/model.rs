//! Domain types shared by the simulator, the attack strategies and the
//! file formats.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Index of a resource block, always in `[0, n_rb)`.
pub type Rb = usize;

/// Vehicle identifier. Targets are numbered `0..n_targets`, attackers
/// follow at `n_targets..n_targets + n_attackers`.
pub type VehicleId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Target,
    Attacker,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Target => "target",
            Role::Attacker => "attacker",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Resource-block selection strategy of the attacker fleet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackType {
    /// No attackers at all.
    Baseline,
    /// Reselect a uniformly random block with probability `p_prime`, without sensing.
    Oblivious,
    /// Jam a randomly chosen loner block, no coordination.
    Smart,
    /// Jam loner blocks, never two attackers on the same one.
    Cooperative,
}

impl AttackType {
    pub const ALL: [AttackType; 4] = [
        AttackType::Baseline,
        AttackType::Oblivious,
        AttackType::Smart,
        AttackType::Cooperative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackType::Baseline => "baseline",
            AttackType::Oblivious => "oblivious",
            AttackType::Smart => "smart",
            AttackType::Cooperative => "cooperative",
        }
    }
}

impl fmt::Display for AttackType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown attack type `{0}` (expected baseline, oblivious, smart or cooperative)")]
pub struct ParseAttackTypeError(pub String);

impl FromStr for AttackType {
    type Err = ParseAttackTypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttackType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| ParseAttackTypeError(s.to_string()))
    }
}

/// A violated configuration invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("n_rb: need at least 2 resource blocks, got {0}")]
    TooFewResourceBlocks(usize),
    #[error("overload: n_targets + n_attackers = {vehicles} exceeds n_rb = {n_rb}")]
    Overload { vehicles: usize, n_rb: usize },
    #[error("{name}: probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("{0}: must be positive")]
    NotPositive(&'static str),
    #[error("invalid attack period: attack_period_slots = {attack_period_slots} must be 1 or t_s = {t_s}")]
    InvalidAttackPeriod { attack_period_slots: u32, t_s: u32 },
    #[error("baseline requires n_attackers = 0, got {0}")]
    BaselineWithAttackers(usize),
}

/// One fully specified experiment point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_rb: usize,
    pub n_targets: usize,
    pub n_attackers: usize,
    /// Target reselection probability at each semi-persistent epoch.
    pub p: f64,
    /// Oblivious attacker reselection probability at each attack epoch.
    pub p_prime: f64,
    /// Transmission periods per semi-persistent period.
    pub t_s: u32,
    /// Attack period in transmission periods: `t_s` is deniable, `1` is not.
    pub attack_period_slots: u32,
    pub attack_type: AttackType,
    pub sim_slots: u64,
    pub trials: u32,
    pub base_seed: u64,
    /// All decision-epoch offsets are zero.
    pub synchronized: bool,
    pub record_utilization: bool,
}

impl Default for SimConfig {
    /// 200 blocks, p = 0.2, 1 s semi-persistent period of ten 100 ms slots,
    /// 300 s horizon, 10 trials, no vehicles.
    fn default() -> Self {
        SimConfig {
            n_rb: 200,
            n_targets: 0,
            n_attackers: 0,
            p: 0.2,
            p_prime: 1.0,
            t_s: 10,
            attack_period_slots: 10,
            attack_type: AttackType::Baseline,
            sim_slots: 3000,
            trials: 10,
            base_seed: 0,
            synchronized: false,
            record_utilization: false,
        }
    }
}

impl SimConfig {
    pub fn n_vehicles(&self) -> usize {
        self.n_targets + self.n_attackers
    }

    /// Attacks that switch no faster than the protocol allows.
    pub fn is_deniable(&self) -> bool {
        self.attack_period_slots == self.t_s
    }

    /// Checks every invariant, reporting the first one violated.
    pub fn validate(self) -> Result<SimConfig, ConfigError> {
        if self.n_rb < 2 {
            return Err(ConfigError::TooFewResourceBlocks(self.n_rb));
        }
        if self.n_vehicles() > self.n_rb {
            return Err(ConfigError::Overload {
                vehicles: self.n_vehicles(),
                n_rb: self.n_rb,
            });
        }
        for (name, value) in [("p", self.p), ("p_prime", self.p_prime)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::ProbabilityOutOfRange { name, value });
            }
        }
        if self.t_s == 0 {
            return Err(ConfigError::NotPositive("t_s"));
        }
        if self.attack_period_slots == 0 {
            return Err(ConfigError::NotPositive("attack_period_slots"));
        }
        if self.attack_period_slots != 1 && self.attack_period_slots != self.t_s {
            return Err(ConfigError::InvalidAttackPeriod {
                attack_period_slots: self.attack_period_slots,
                t_s: self.t_s,
            });
        }
        if self.sim_slots == 0 {
            return Err(ConfigError::NotPositive("sim_slots"));
        }
        if self.trials == 0 {
            return Err(ConfigError::NotPositive("trials"));
        }
        if self.attack_type == AttackType::Baseline && self.n_attackers != 0 {
            return Err(ConfigError::BaselineWithAttackers(self.n_attackers));
        }
        Ok(self)
    }
}

/// Free-function form of [`SimConfig::validate`].
pub fn validate_config(raw: SimConfig) -> Result<SimConfig, ConfigError> {
    raw.validate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VehicleState {
    pub id: VehicleId,
    pub role: Role,
    pub current_rb: Rb,
    /// Decision epochs are the slots `t` with `t % period == offset`.
    pub offset: u32,
}

impl VehicleState {
    pub fn decides_at(&self, slot: u64, period: u32) -> bool {
        slot % u64::from(period) == u64::from(self.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transmitter {
    pub id: VehicleId,
    pub role: Role,
}

/// Who transmits on which resource block during one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotOccupancy {
    blocks: Vec<Vec<Transmitter>>,
}

impl SlotOccupancy {
    pub fn empty(n_rb: usize) -> Self {
        SlotOccupancy {
            blocks: vec![Vec::new(); n_rb],
        }
    }

    /// Builds the occupancy of a vehicle population. Transmitters on each
    /// block are kept in the order the vehicles are given.
    pub fn from_vehicles(n_rb: usize, vehicles: &[VehicleState]) -> Self {
        let mut occ = SlotOccupancy::empty(n_rb);
        occ.fill(vehicles);
        occ
    }

    /// Refills in place, reusing the per-block allocations.
    pub fn fill(&mut self, vehicles: &[VehicleState]) {
        for block in &mut self.blocks {
            block.clear();
        }
        for v in vehicles {
            self.blocks[v.current_rb].push(Transmitter {
                id: v.id,
                role: v.role,
            });
        }
    }

    /// Adds one transmitter; mostly useful to hand-build snapshots.
    pub fn push(&mut self, rb: Rb, id: VehicleId, role: Role) {
        self.blocks[rb].push(Transmitter { id, role });
    }

    pub fn n_rb(&self) -> usize {
        self.blocks.len()
    }

    pub fn on(&self, rb: Rb) -> &[Transmitter] {
        &self.blocks[rb]
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Rb, &[Transmitter])> {
        self.blocks.iter().enumerate().map(|(rb, b)| (rb, b.as_slice()))
    }

    pub fn total_transmitters(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn rb_of(&self, id: VehicleId) -> Option<Rb> {
        self.blocks
            .iter()
            .position(|b| b.iter().any(|t| t.id == id))
    }
}

/// One row of the time/resource-block utilization trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UtilizationRow {
    pub slot: u64,
    pub vehicle_id: VehicleId,
    pub role: Role,
    pub rb: Rb,
    pub collided: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Target BSMs transmitted.
    pub sent: u64,
    /// Target BSMs alone on their block.
    pub received: u64,
    /// Target BSMs sharing their block with at least one attacker.
    pub attacker_jammed: u64,
    pub prr: f64,
    pub jammed_loners_per_slot: Option<Vec<u32>>,
    pub utilization: Option<Vec<UtilizationRow>>,
}
