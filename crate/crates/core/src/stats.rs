//! Packet reception ratio and Student-t confidence intervals.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("received ({received}) exceeds sent ({sent})")]
    ReceivedExceedsSent { sent: u64, received: u64 },
    #[error("cannot summarize an empty sample")]
    EmptySample,
}

/// Fraction of sent packets that were received; 1 when nothing was sent.
pub fn prr(sent: u64, received: u64) -> Result<f64, StatsError> {
    if received > sent {
        return Err(StatsError::ReceivedExceedsSent { sent, received });
    }
    if sent == 0 {
        return Ok(1.0);
    }
    Ok(received as f64 / sent as f64)
}

/// Two-sided 97.5% quantiles of Student's t for 1..=30 degrees of freedom.
const T_975: [f64; 30] = [
    12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912, 2.364624, 2.306004, 2.262157,
    2.228139, 2.200985, 2.178813, 2.160369, 2.144787, 2.131450, 2.119905, 2.109816, 2.100922,
    2.093024, 2.085963, 2.079614, 2.073873, 2.068658, 2.063899, 2.059539, 2.055529, 2.051831,
    2.048407, 2.045230, 2.042272,
];

/// Normal 97.5% quantile, used past the table.
const Z_975: f64 = 1.959964;

pub fn t_quantile_975(df: usize) -> f64 {
    match df {
        0 => f64::NAN,
        1..=30 => T_975[df - 1],
        _ => Z_975,
    }
}

/// Sample mean and 95% half-width `t(n-1) * s / sqrt(n)`. A single value
/// has half-width 0.
pub fn mean_ci(values: &[f64]) -> Result<(f64, f64), StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if values.iter().all(|v| *v == values[0]) {
        return Ok((values[0], 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let half = t_quantile_975(n - 1) * var.sqrt() / (n as f64).sqrt();
    // keep the mean inside the sample range despite rounding
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((mean.clamp(lo, hi), half))
}
