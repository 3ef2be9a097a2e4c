//! Sliding-window estimate of the node-arrival rate.

use crate::net::{EventSequence, EventToken};
use crate::{Error, Result};

/// For each step `t` (1-based), the fraction of node tokens among steps in
/// `[max(1, t-w), min(T-1, t+w)]`. Windows are truncated at the ends of the
/// sequence.
pub fn estimate_pt_window(sequence: &EventSequence, half_width: u64) -> Result<Vec<f64>> {
    if half_width < 1 {
        return Err(Error::InvalidParameter(
            "window half-width must be at least 1".into(),
        ));
    }
    let n = sequence.len() as u64;
    // prefix[i] = node tokens among the first i steps
    let mut prefix = Vec::with_capacity(n as usize + 1);
    prefix.push(0u64);
    let mut acc = 0u64;
    for token in sequence.tokens() {
        acc += matches!(token, EventToken::Node) as u64;
        prefix.push(acc);
    }
    Ok((1..=n)
        .map(|t| {
            let lo = t.saturating_sub(half_width).max(1);
            let hi = (t + half_width).min(n);
            let nodes = prefix[hi as usize] - prefix[lo as usize - 1];
            nodes as f64 / (hi - lo + 1) as f64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(tokens: &[EventToken]) -> EventSequence {
        EventSequence::new(tokens.to_vec())
    }

    #[test]
    fn all_node_tokens_give_one() {
        let s = seq(&[EventToken::Node; 40]);
        let p = estimate_pt_window(&s, 5).unwrap();
        assert_eq!(p.len(), 40);
        assert!(p.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn alternating_interior_is_half() {
        let tokens: Vec<EventToken> = (0..101)
            .map(|i| if i % 2 == 0 { EventToken::Node } else { EventToken::Edge })
            .collect();
        let p = estimate_pt_window(&seq(&tokens), 10).unwrap();
        // Interior windows hold 21 steps: 10 or 11 node tokens.
        for (i, &v) in p.iter().enumerate().skip(10).take(80) {
            assert!(
                (v - 0.5).abs() <= 0.5 / 21.0 + 1e-12,
                "t = {}, p = {v}",
                i + 1
            );
        }
    }

    #[test]
    fn window_truncates_at_edges() {
        let tokens = [EventToken::Node, EventToken::Edge, EventToken::Edge];
        let p = estimate_pt_window(&seq(&tokens), 1).unwrap();
        assert_eq!(p[0], 0.5); // steps 1..=2
        assert!((p[1] - 1.0 / 3.0).abs() < 1e-15); // steps 1..=3
        assert_eq!(p[2], 0.0); // steps 2..=3
    }

    #[test]
    fn bernoulli_sequence_tracks_rate() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let rate = 0.3;
        let tokens: Vec<EventToken> = (0..20_000)
            .map(|_| {
                if rng.random::<f64>() < rate {
                    EventToken::Node
                } else {
                    EventToken::Edge
                }
            })
            .collect();
        let w = 500u64;
        let p = estimate_pt_window(&seq(&tokens), w).unwrap();
        // Interior windows hold 2w+1 draws; 4 sigma of the binomial mean
        // should cover 99% of steps.
        let sigma = (rate * (1.0 - rate) / (2.0 * w as f64 + 1.0)).sqrt();
        let in_band = p
            .iter()
            .filter(|&&v| (v - rate).abs() <= 4.0 * sigma)
            .count();
        assert!(
            in_band as f64 >= 0.99 * p.len() as f64,
            "only {in_band} of {} in band",
            p.len()
        );
    }
}
