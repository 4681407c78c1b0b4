//! Closed forms for the one-target/one-attacker oblivious chain, the
//! static-target jam probability, and the cooperative coverage bound.
//!
//! The two-state chain tracks whether the target and the attacker share a
//! block (state 1) or not (state 0) under synchronized epochs. Its self-loop
//! at state 1 is `(1-p)(1-p') + p p'/(N_r-1)`: both keep the block, or both
//! move and land on the same new block.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("need at least 2 resource blocks, got {0}")]
    TooFewResourceBlocks(usize),
    #[error("reducible chain: stationary distribution depends on initial state")]
    ReducibleChain,
}

/// Two-state chain over {0: different blocks, 1: same block}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chain2 {
    pub p: f64,
    pub p_prime: f64,
    pub n_rb: usize,
    /// Row-stochastic; `matrix[i][j]` is the probability of moving from i to j.
    pub matrix: [[f64; 2]; 2],
}

impl Chain2 {
    pub fn p01(&self) -> f64 {
        self.matrix[0][1]
    }

    pub fn p10(&self) -> f64 {
        self.matrix[1][0]
    }
}

pub fn transition_matrix(p: f64, p_prime: f64, n_rb: usize) -> Result<Chain2, AnalysisError> {
    if n_rb < 2 {
        return Err(AnalysisError::TooFewResourceBlocks(n_rb));
    }
    let others = (n_rb - 1) as f64;
    let p01 = p_prime / others;
    let p11 = (1.0 - p) * (1.0 - p_prime) + p * p_prime / others;
    Ok(Chain2 {
        p,
        p_prime,
        n_rb,
        matrix: [[1.0 - p01, p01], [1.0 - p11, p11]],
    })
}

/// Balance plus normalization, solved directly:
/// `pi1 = P(0->1) / (P(0->1) + P(1->0))`.
pub fn stationary_numeric(chain: &Chain2) -> Result<(f64, f64), AnalysisError> {
    let (a, b) = (chain.p01(), chain.p10());
    let flow = a + b;
    if flow <= 0.0 {
        return Err(AnalysisError::ReducibleChain);
    }
    let pi1 = a / flow;
    Ok((1.0 - pi1, pi1))
}

/// `p + p'(1-p) + p'(1-p)/(N_r-1)`
fn bracket(p: f64, p_prime: f64, others: f64) -> f64 {
    p + p_prime * (1.0 - p) + p_prime * (1.0 - p) / others
}

/// Long-run probability that the target and the attacker collide.
pub fn stationary_pi1(p: f64, p_prime: f64, n_rb: usize) -> Result<f64, AnalysisError> {
    if n_rb < 2 {
        return Err(AnalysisError::TooFewResourceBlocks(n_rb));
    }
    if p == 0.0 && p_prime == 0.0 {
        return Err(AnalysisError::ReducibleChain);
    }
    if p_prime == 0.0 {
        return Ok(0.0);
    }
    let others = (n_rb - 1) as f64;
    Ok(p_prime / (others * bracket(p, p_prime, others)))
}

/// `d pi1 / d p'`. Positive for `p > 0`, and falling in `p'`.
pub fn pi1_derivative(p: f64, p_prime: f64, n_rb: usize) -> Result<f64, AnalysisError> {
    if n_rb < 2 {
        return Err(AnalysisError::TooFewResourceBlocks(n_rb));
    }
    let others = (n_rb - 1) as f64;
    let d = bracket(p, p_prime, others);
    if d == 0.0 {
        return Err(AnalysisError::ReducibleChain);
    }
    Ok(p / (others * d * d))
}

/// Chance that a target that never moves shares its block with at least one
/// of `n_attackers` independently uniform attackers.
pub fn static_target_jam_prob(n_rb: usize, n_attackers: u32) -> f64 {
    let miss = 1.0 - 1.0 / n_rb as f64;
    1.0 - miss.powi(n_attackers as i32)
}

/// Most loners that can be jammed in one slot.
pub fn max_jammed_loners(n_loners: usize, n_attackers: usize) -> usize {
    n_loners.min(n_attackers)
}
