//! Exact joint outcome distributions of commuting detectors and seeded
//! Monte Carlo sampling of finite ensembles.

use crate::linalg::{Operator, StateVector};
use crate::rng::SplitMix64;
use crate::scenario::Scenario;
use crate::{Error, Result, ToleranceConfig};

/// Sampler configuration; identical configurations give identical counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_trials: u64,
}

impl SamplerConfig {
    pub fn generator_id(&self) -> &'static str {
        SplitMix64::GENERATOR_ID
    }
}

/// Trials per sampling shard; shard `k` draws from the substream
/// `SplitMix64::substream(seed, k)`, so merged counts are independent of
/// how shards are scheduled.
pub const SHARD_SIZE: u64 = 1 << 16;

/// How a distribution was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Sampled { n_trials: u64, seed: u64 },
}

/// Joint outcome distribution over detector bit patterns.
///
/// Outcomes are ordered lexicographically with outcome 1 before outcome 0
/// in every bit position: (1,1,1), (1,1,0), (1,0,1), ... for three
/// detectors. Sampled distributions carry integer counts summing to the
/// trial count.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    /// bit pattern per outcome, one bool per detector (true = outcome 1)
    pub outcomes: Vec<Vec<bool>>,
    pub probabilities: Vec<f64>,
    /// raw counts (sampled provenance only)
    pub counts: Option<Vec<u64>>,
    pub provenance: Provenance,
}

impl OutcomeDistribution {
    /// Total-variation distance to another distribution on the same
    /// outcome set.
    pub fn tv_distance(&self, other: &OutcomeDistribution) -> f64 {
        assert_eq!(self.outcomes, other.outcomes);
        0.5 * self
            .probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn probability_of(&self, bits: &[bool]) -> Option<f64> {
        self.outcomes
            .iter()
            .position(|o| o == bits)
            .map(|i| self.probabilities[i])
    }
}

/// Outcome patterns in the documented order (1 sorts before 0).
fn outcome_patterns(k: usize) -> Vec<Vec<bool>> {
    let n = 1usize << k;
    (0..n)
        .map(|code| (0..k).map(|b| (code >> (k - 1 - b)) & 1 == 0).collect())
        .collect()
}

/// Exact joint distribution of commuting projectors on a state.
///
/// The state is normalized internally; detectors must pairwise commute
/// within tolerance. Probabilities come from the joint spectral projectors
/// `Π = Π_k (P_k or I - P_k)`.
pub fn exact_joint_distribution(
    psi: &StateVector,
    detectors: &[&Operator],
    tol: &ToleranceConfig,
) -> Result<OutcomeDistribution> {
    let psi = psi.normalized(tol.abs_tol)?;
    for (i, a) in detectors.iter().enumerate() {
        for (j, b) in detectors.iter().enumerate().skip(i + 1) {
            let norm = a.commutator(b)?.frobenius_norm();
            if norm > tol.operator_bound(a.frobenius_norm() * b.frobenius_norm()) {
                return Err(Error::NonCommutingDetectors { i, j, norm });
            }
        }
    }
    let patterns = outcome_patterns(detectors.len());
    let mut probabilities = Vec::with_capacity(patterns.len());
    for pattern in &patterns {
        // apply the joint spectral projector factor by factor
        let mut v = psi.clone();
        for (bit, det) in pattern.iter().zip(detectors) {
            let dv = det.apply(&v)?;
            v = if *bit { dv } else { v.sub(&dv) };
        }
        probabilities.push(v.norm_squared());
    }
    Ok(OutcomeDistribution {
        outcomes: patterns,
        probabilities,
        counts: None,
        provenance: Provenance::Exact,
    })
}

/// Draw `cfg.n_trials` i.i.d. outcomes from the exact distribution by
/// inverse CDF over the documented outcome order, sharded into
/// substreams of [`SHARD_SIZE`] trials.
pub fn sample(
    psi: &StateVector,
    detectors: &[&Operator],
    cfg: &SamplerConfig,
    tol: &ToleranceConfig,
) -> Result<OutcomeDistribution> {
    let exact = exact_joint_distribution(psi, detectors, tol)?;
    let mut cdf = Vec::with_capacity(exact.probabilities.len());
    let mut acc = 0.0;
    for p in &exact.probabilities {
        acc += p;
        cdf.push(acc);
    }
    let mut counts = vec![0u64; exact.probabilities.len()];
    let mut remaining = cfg.n_trials;
    let mut shard = 0u64;
    while remaining > 0 {
        let batch = remaining.min(SHARD_SIZE);
        let mut rng = SplitMix64::substream(cfg.seed, shard);
        for _ in 0..batch {
            let u = rng.next_f64() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(counts.len() - 1);
            counts[idx] += 1;
        }
        remaining -= batch;
        shard += 1;
    }
    let probabilities = counts
        .iter()
        .map(|&c| {
            if cfg.n_trials == 0 {
                0.0
            } else {
                c as f64 / cfg.n_trials as f64
            }
        })
        .collect();
    Ok(OutcomeDistribution {
        outcomes: exact.outcomes,
        probabilities,
        counts: Some(counts),
        provenance: Provenance::Sampled {
            n_trials: cfg.n_trials,
            seed: cfg.seed,
        },
    })
}

/// One row of the detection inference table.
#[derive(Debug, Clone)]
pub struct InferenceRow {
    pub detector: &'static str,
    pub property: &'static str,
    /// P(detector outcome 1) on the normalized state
    pub p_detector: f64,
    /// P(property outcome 1) on the normalized state
    pub p_property: f64,
    /// `‖Sψ - Rψ‖/‖ψ‖`
    pub residual: f64,
    /// inference is justified: the probabilities are forced equal
    pub inference_valid: bool,
}

/// Tabulate, per detector/property pair, the outcome-1 probabilities and
/// the detection residual that justifies inferring one from the other.
pub fn detection_inference_table(scn: &Scenario, tol: &ToleranceConfig) -> Result<Vec<InferenceRow>> {
    let psi = scn.psi.normalized(tol.abs_tol)?;
    let mut rows = Vec::new();
    for i in 0..3 {
        let det = scn.detector(i);
        let prop = scn.lifted_property(i);
        let p_detector = det.apply(&psi)?.norm_squared();
        let p_property = prop.apply(&psi)?.norm_squared();
        let residual = det.apply(&psi)?.sub(&prop.apply(&psi)?).norm();
        rows.push(InferenceRow {
            detector: Scenario::detector_names()[i],
            property: Scenario::property_names()[i],
            p_detector,
            p_property,
            residual,
            inference_valid: residual <= tol.abs_tol,
        });
    }
    Ok(rows)
}
