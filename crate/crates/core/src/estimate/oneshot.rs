//! Bias-corrected one-shot estimator.
//!
//! Observed degrees exist in the snapshot by construction, so the plain
//! tail ratio implicitly conditions on `n_k(T) > 0` and overestimates the
//! expected count at large `k`. The correction divides by an estimate of
//! the existence probability `p_k = P(n_k(T) > 0)`, obtained by simulating
//! the growth model with the current attachment estimate, counting in how
//! many simulated networks each observed degree appears, and iterating the
//! estimate/simulate loop for a few rounds. The whole loop is repeated and
//! the existence probabilities averaged for stability.

use rayon::prelude::*;

use super::{AttachmentEstimate, BinningScheme, EstimateRecord, OneshotConfig};
use crate::net::{DegreeHistogram, Snapshot};
use crate::sim::{derive_seed, grow_histogram, hat_p, AttachmentFunction, Schedule};
use crate::{Error, Result};

/// Simulate `simulations` networks with the reference attachment function
/// and return, per observed degree, the fraction of networks in which the
/// degree exists at the final step.
pub fn estimate_existence_round(
    reference: &AttachmentFunction,
    observed_degrees: &[u64],
    time_steps: u64,
    schedule: &Schedule,
    simulations: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let presences: Vec<Vec<bool>> = (0..simulations)
        .into_par_iter()
        .map(|i| -> Result<Vec<bool>> {
            let hist = grow_histogram(time_steps, schedule, derive_seed(seed, i as u64), reference)?;
            Ok(observed_degrees.iter().map(|&k| hist.count(k) > 0).collect())
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; observed_degrees.len()];
    for presence in &presences {
        for (count, &seen) in counts.iter_mut().zip(presence) {
            *count += seen as u64;
        }
    }
    Ok(counts
        .iter()
        .map(|&c| c as f64 / simulations as f64)
        .collect())
}

/// Existence probabilities accumulated over all repetitions and rounds.
struct ExistenceRuns {
    /// Observed degrees, ascending.
    observed: Vec<u64>,
    /// Per repetition, the round-averaged probabilities (raw, may be 0).
    per_repetition: Vec<Vec<f64>>,
    /// Grand mean across repetitions, floored where never observed.
    p_final: Vec<f64>,
    floored: Vec<bool>,
    /// Floor applied to zero entries of a repetition mean when taking logs.
    repetition_floor: f64,
}

/// Run the repetition/round loop. `round_update` maps the current
/// per-observed-degree existence probabilities (floored away from zero) to
/// positive reference attachment values for the next round's simulations;
/// the initial reference uses probabilities identically 1, which reduces to
/// the plain tail-ratio estimate.
fn run_existence_rounds(
    snapshot: &Snapshot,
    cfg: &OneshotConfig,
    round_update: &dyn Fn(&[f64]) -> Vec<(u64, f64)>,
) -> Result<ExistenceRuns> {
    cfg.validate()?;
    if snapshot.histogram.distinct_degrees() < 2 {
        return Err(Error::InsufficientData(
            "one-shot estimation needs a snapshot with at least 2 distinct degrees".into(),
        ));
    }
    let observed: Vec<u64> = snapshot.histogram.degrees().collect();
    let time_steps = cfg
        .time_steps
        .unwrap_or(snapshot.node_count + snapshot.edge_count - 1);
    let schedule = match &cfg.schedule {
        Some(s) => s.clone(),
        None => Schedule::Constant(hat_p(snapshot.node_count, snapshot.edge_count)?),
    };
    let m = cfg.simulations_per_round;
    let rounds = cfg.rounds;
    let repetitions = cfg.repetitions;
    let round_floor = 1.0 / (m as f64 + 1.0);

    let ones = vec![1.0; observed.len()];
    let initial_reference = dense_reference(&round_update(&ones))?;

    let mut per_repetition = Vec::with_capacity(repetitions);
    for rep in 0..repetitions {
        let rep_seed = derive_seed(cfg.seed, rep as u64);
        let mut reference = initial_reference.clone();
        let mut acc = vec![0.0f64; observed.len()];
        for round in 0..rounds {
            let p_round = estimate_existence_round(
                &reference,
                &observed,
                time_steps,
                &schedule,
                m,
                derive_seed(rep_seed, round as u64),
            )?;
            for (a, &p) in acc.iter_mut().zip(&p_round) {
                *a += p;
            }
            if round + 1 < rounds {
                let floored: Vec<f64> = p_round
                    .iter()
                    .map(|&p| if p == 0.0 { round_floor } else { p })
                    .collect();
                reference = dense_reference(&round_update(&floored))?;
            }
        }
        per_repetition.push(acc.iter().map(|a| a / rounds as f64).collect());
    }

    let total = (repetitions * rounds * m) as f64;
    let final_floor = 1.0 / (total + 1.0);
    let mut p_final = vec![0.0f64; observed.len()];
    let mut floored = vec![false; observed.len()];
    for rep in &per_repetition {
        for (f, &p) in p_final.iter_mut().zip(rep) {
            *f += p;
        }
    }
    for (i, f) in p_final.iter_mut().enumerate() {
        *f /= repetitions as f64;
        if *f == 0.0 {
            *f = final_floor;
            floored[i] = true;
        }
    }
    Ok(ExistenceRuns {
        observed,
        per_repetition,
        p_final,
        floored,
        repetition_floor: 1.0 / ((rounds * m) as f64 + 1.0),
    })
}

/// Build a dense tabulated attachment function from sparse positive
/// per-degree values: gaps carry the nearest lower value forward, the first
/// value backfills the head, and degrees beyond the table hold the last
/// value.
fn dense_reference(values: &[(u64, f64)]) -> Result<AttachmentFunction> {
    let max_degree = values
        .iter()
        .filter(|(_, v)| *v > 0.0 && v.is_finite())
        .map(|&(k, _)| k)
        .max()
        .ok_or_else(|| {
            Error::Numeric("round update produced no positive attachment values".into())
        })?;
    let mut table = vec![f64::NAN; max_degree as usize + 1];
    for &(k, v) in values {
        if k <= max_degree && v > 0.0 && v.is_finite() {
            table[k as usize] = v;
        }
    }
    let first = table
        .iter()
        .copied()
        .find(|v| !v.is_nan())
        .expect("at least one positive value");
    let mut carry = first;
    for v in table.iter_mut() {
        if v.is_nan() {
            *v = carry;
        } else {
            carry = *v;
        }
    }
    Ok(AttachmentFunction::Tabulated(table))
}

fn sample_sd(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 2 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Some(var.sqrt())
}

/// Assemble per-degree records from final existence probabilities: for each
/// observed degree with a positive tail, `a_hat = tail_k / (n_k · p_k)`.
/// With all probabilities equal to 1 this reproduces the baseline estimate
/// exactly.
pub(crate) fn estimate_from_existence(
    histogram: &DegreeHistogram,
    observed: &[u64],
    p_final: &[f64],
    floored: &[bool],
    sd: &[Option<f64>],
) -> AttachmentEstimate {
    let tails = histogram.tail_counts();
    let records = observed
        .iter()
        .enumerate()
        .filter_map(|(i, &degree)| {
            let n_k = histogram.count(degree);
            let tail_k = tails[&degree];
            (tail_k > 0).then(|| EstimateRecord {
                degree,
                n_k,
                tail_k,
                a_hat: tail_k as f64 / (n_k as f64 * p_final[i]),
                sd: sd[i],
                p_hat: Some(p_final[i]),
                floored: floored[i],
            })
        })
        .collect();
    AttachmentEstimate {
        records,
        reference_degree: None,
    }
}

/// One-shot estimate of the attachment function from a single snapshot.
///
/// Starts from the tail-ratio estimate, runs `rounds` rounds of
/// `simulations_per_round` model simulations per repetition to estimate the
/// per-degree existence probabilities, repeats the loop `repetitions` times
/// with fresh seeds, averages the probabilities, and corrects the tail
/// ratio by them. The per-record `sd` is the sample standard deviation of
/// `ln a_hat` across repetitions. Simulations run for
/// `N + E - 1` steps with node probability `hat_p(N, E)` unless overridden.
pub fn estimate_oneshot(snapshot: &Snapshot, cfg: &OneshotConfig) -> Result<AttachmentEstimate> {
    let histogram = &snapshot.histogram;
    let tails = histogram.tail_counts();
    let observed: Vec<u64> = histogram.degrees().collect();
    let n_by_index: Vec<u64> = observed.iter().map(|&k| histogram.count(k)).collect();
    let tail_by_index: Vec<u64> = observed.iter().map(|&k| tails[&k]).collect();

    let update = {
        let observed = observed.clone();
        let n_by_index = n_by_index.clone();
        let tail_by_index = tail_by_index.clone();
        move |p: &[f64]| -> Vec<(u64, f64)> {
            observed
                .iter()
                .enumerate()
                .filter_map(|(i, &k)| {
                    (tail_by_index[i] > 0).then(|| {
                        (k, tail_by_index[i] as f64 / (n_by_index[i] as f64 * p[i]))
                    })
                })
                .collect()
        }
    };

    let runs = run_existence_rounds(snapshot, cfg, &update)?;
    let sd: Vec<Option<f64>> = (0..runs.observed.len())
        .map(|i| {
            let logs: Vec<f64> = runs
                .per_repetition
                .iter()
                .map(|rep| {
                    let p = if rep[i] == 0.0 { runs.repetition_floor } else { rep[i] };
                    (tail_by_index[i] as f64 / (n_by_index[i] as f64 * p)).ln()
                })
                .collect();
            sample_sd(&logs)
        })
        .collect();
    Ok(estimate_from_existence(
        histogram,
        &runs.observed,
        &runs.p_final,
        &runs.floored,
        &sd,
    ))
}

/// Binned one-shot estimate: attachment values are constrained to a common
/// value per degree bin, `θ_g = Σ_{k∈B_g} tail_k / Σ_{k∈B_g, n_k>0} n_k·p_k`,
/// with the same existence-probability machinery and the binned function
/// used as the simulation reference. Bins with no observed degree (or an
/// all-zero tail sum) are omitted. Records are emitted per observed degree,
/// carrying the bin value; width-1 bins reproduce the unbinned estimator
/// exactly under the same seed.
pub fn estimate_oneshot_binned(
    snapshot: &Snapshot,
    cfg: &OneshotConfig,
    bins: &BinningScheme,
) -> Result<AttachmentEstimate> {
    let histogram = &snapshot.histogram;
    let max_degree = histogram.max_degree().unwrap_or(0);
    bins.validate_for(max_degree)?;

    let observed: Vec<u64> = histogram.degrees().collect();
    let n_by_index: Vec<u64> = observed.iter().map(|&k| histogram.count(k)).collect();

    // Tail counts for every integer degree covered by the bins.
    let tails_all = dense_tails(histogram, bins.max_degree());
    // Numerators are fixed by the observed snapshot.
    let numerators: Vec<u64> = (0..bins.len())
        .map(|g| {
            let (start, end) = bins.range(g);
            (start..=end.min(max_degree))
                .map(|k| tails_all[k as usize])
                .sum()
        })
        .collect();
    // Observed-degree indices per bin, for denominators.
    let members: Vec<Vec<usize>> = (0..bins.len())
        .map(|g| {
            let (start, end) = bins.range(g);
            observed
                .iter()
                .enumerate()
                .filter(|(_, &k)| k >= start && k <= end)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let bin_values = {
        let numerators = numerators.clone();
        let members = members.clone();
        let n_by_index = n_by_index.clone();
        move |p: &[f64]| -> Vec<f64> {
            (0..numerators.len())
                .map(|g| {
                    let den: f64 = members[g]
                        .iter()
                        .map(|&i| n_by_index[i] as f64 * p[i])
                        .sum();
                    if numerators[g] > 0 && den > 0.0 {
                        numerators[g] as f64 / den
                    } else {
                        0.0
                    }
                })
                .collect()
        }
    };

    let update = {
        let bin_values = bin_values.clone();
        let bins = bins.clone();
        move |p: &[f64]| -> Vec<(u64, f64)> {
            let theta = bin_values(p);
            let mut out = Vec::new();
            for (g, &value) in theta.iter().enumerate() {
                if value > 0.0 {
                    let (start, end) = bins.range(g);
                    for k in start..=end {
                        out.push((k, value));
                    }
                }
            }
            out
        }
    };

    let runs = run_existence_rounds(snapshot, cfg, &update)?;

    let theta_final = bin_values(&runs.p_final);
    let theta_reps: Vec<Vec<f64>> = runs
        .per_repetition
        .iter()
        .map(|rep| {
            let floored: Vec<f64> = rep
                .iter()
                .map(|&p| if p == 0.0 { runs.repetition_floor } else { p })
                .collect();
            bin_values(&floored)
        })
        .collect();
    let sd_by_bin: Vec<Option<f64>> = (0..bins.len())
        .map(|g| {
            if theta_final[g] <= 0.0 {
                return None;
            }
            let logs: Vec<f64> = theta_reps.iter().map(|t| t[g].ln()).collect();
            sample_sd(&logs)
        })
        .collect();

    let records = observed
        .iter()
        .enumerate()
        .filter_map(|(i, &degree)| {
            let g = bins.bin_of(degree).expect("validated coverage");
            (theta_final[g] > 0.0).then(|| EstimateRecord {
                degree,
                n_k: n_by_index[i],
                tail_k: tails_all[degree as usize],
                a_hat: theta_final[g],
                sd: sd_by_bin[g],
                p_hat: Some(runs.p_final[i]),
                floored: runs.floored[i],
            })
        })
        .collect();
    Ok(AttachmentEstimate {
        records,
        reference_degree: None,
    })
}

/// Tail counts for every integer degree `0..=max_degree`.
fn dense_tails(histogram: &DegreeHistogram, max_degree: u64) -> Vec<u64> {
    let mut tails = vec![0u64; max_degree as usize + 1];
    let mut above = 0u64;
    let mut stored = histogram.iter().collect::<Vec<_>>();
    stored.reverse();
    let mut iter = stored.into_iter().peekable();
    for k in (0..=max_degree).rev() {
        tails[k as usize] = above;
        if let Some(&(degree, count)) = iter.peek() {
            if degree == k {
                above += count;
                iter.next();
            }
        }
    }
    tails
}
