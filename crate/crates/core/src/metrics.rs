//! Mission metrics, improvement ratios and the analytic confirmation
//! probabilities of single-sensor versus localized search.

use serde::{Deserialize, Serialize};

use crate::engine::RunRecord;
use crate::error::MetricsError;

/// The two per-run numbers everything is aggregated from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub targets_confirmed: usize,
    pub completion_time: Option<f64>,
}

impl From<&RunRecord> for Outcome {
    fn from(r: &RunRecord) -> Self {
        Self { targets_confirmed: r.targets_confirmed, completion_time: r.completion_time }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub mean_tnc: f64,
    pub sd_tnc: f64,
    /// Runs that confirmed every real target.
    pub completed: usize,
    pub censored: usize,
    /// `None` when every run is censored.
    pub mean_ts: Option<f64>,
    pub sd_ts: Option<f64>,
}

/// Mean and sample standard deviation of T_nc over all runs, and of T_S
/// over the uncensored runs.
pub fn aggregate(records: &[RunRecord]) -> Result<Summary, MetricsError> {
    let outcomes: Vec<Outcome> = records.iter().map(Outcome::from).collect();
    aggregate_outcomes(&outcomes)
}

pub fn aggregate_outcomes(outcomes: &[Outcome]) -> Result<Summary, MetricsError> {
    if outcomes.is_empty() {
        return Err(MetricsError::Empty);
    }
    let tnc: Vec<f64> = outcomes.iter().map(|o| o.targets_confirmed as f64).collect();
    let ts: Vec<f64> = outcomes.iter().filter_map(|o| o.completion_time).collect();
    let (mean_tnc, sd_tnc) = mean_sd(&tnc).expect("non-empty");
    let ts_stats = mean_sd(&ts);
    Ok(Summary {
        runs: outcomes.len(),
        mean_tnc,
        sd_tnc,
        completed: ts.len(),
        censored: outcomes.len() - ts.len(),
        mean_ts: ts_stats.map(|s| s.0),
        sd_ts: ts_stats.map(|s| s.1),
    })
}

/// Mean and sample standard deviation. Values are summed in sorted order so
/// the result does not depend on the order runs finished in.
pub fn mean_sd(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let mut dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    dev.sort_by(f64::total_cmp);
    let sd = if v.len() > 1 { (dev.iter().sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    Some((mean, sd))
}

/// Linear-interpolation quantile of already sorted data, `q` in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `(min, Q1, median, Q3, max)`.
pub fn five_number_summary(values: &[f64]) -> Result<[f64; 5], MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok([0.0, 0.25, 0.5, 0.75, 1.0].map(|q| quantile_sorted(&v, q)))
}

/// Average improvement in search efficiency, relative to the baseline:
/// `(mu_mdm - mu_sss) / mu_sss * 100`.
pub fn aise(mu_mdm: f64, mu_sss: f64) -> Result<f64, MetricsError> {
    if mu_sss == 0.0 {
        return Err(MetricsError::ZeroDenominator);
    }
    Ok((mu_mdm - mu_sss) / mu_sss * 100.0)
}

/// Efficiency improvement normalized by the MDM mean instead:
/// `(mu_mdm - mu_sss) / mu_mdm * 100`.
pub fn aise_alt(mu_mdm: f64, mu_sss: f64) -> Result<f64, MetricsError> {
    if mu_mdm == 0.0 {
        return Err(MetricsError::ZeroDenominator);
    }
    Ok((mu_mdm - mu_sss) / mu_mdm * 100.0)
}

/// Average improvement in search completeness:
/// `(muS_sss - muS_mdm) / muS_sss * 100`.
pub fn aisc(mu_s_sss: f64, mu_s_mdm: f64) -> Result<f64, MetricsError> {
    if mu_s_sss == 0.0 {
        return Err(MetricsError::ZeroDenominator);
    }
    Ok((mu_s_sss - mu_s_mdm) / mu_s_sss * 100.0)
}

fn positive(name: &'static str, value: f64) -> Result<(), MetricsError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(MetricsError::Domain { name, value })
    }
}

/// Area swept by a sensor disk of radius `r`.
pub fn sensing_area(r: f64) -> f64 {
    std::f64::consts::PI * r * r
}

/// Probability that a single-sensor continuous random search of area `area`
/// has confirmed a given target by time `t`: `1 - exp(-2 r_n V_U t / A)`.
pub fn analytic_pcs(t: f64, r_n: f64, speed: f64, area: f64) -> Result<f64, MetricsError> {
    positive("t", t)?;
    positive("r_n", r_n)?;
    positive("speed", speed)?;
    positive("area", area)?;
    Ok(-(-(2.0 * r_n * speed * t) / area).exp_m1())
}

/// Confirmation probability for localized search, given that the last
/// detection level fired at `t_d`:
/// `1 - (1 - P_CS(t_d)) exp(-2 r_n V_U (t - t_d) / A_prev)`,
/// with `A_prev` the sensing area of the last detection sensor. Before
/// `t_d` the two searches coincide and `P_CS(t)` is returned.
///
/// The product is evaluated as a single exponential of the summed rates,
/// which is algebraically identical and keeps `P_CM(t_d) == P_CS(t_d)`
/// exact in floating point.
pub fn analytic_pcm(t: f64, t_d: f64, r_n: f64, speed: f64, area: f64, area_prev: f64) -> Result<f64, MetricsError> {
    positive("t_d", t_d)?;
    positive("area_prev", area_prev)?;
    let pcs_t = analytic_pcs(t, r_n, speed, area)?;
    if t <= t_d {
        return Ok(pcs_t);
    }
    let before = 2.0 * r_n * speed * t_d / area;
    let after = 2.0 * r_n * speed * (t - t_d) / area_prev;
    Ok(-(-(before + after)).exp_m1())
}
