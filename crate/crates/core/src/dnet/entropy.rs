//! Entropy-driven question utilities, in bits.

use crate::belief::PropertyDistribution;

/// Shannon entropy of `probs` (zero entries contribute nothing).
///
/// Terms are summed in ascending order of probability so that distributions
/// that are permutations of each other produce bit-identical results. Ties
/// between properties are then decided purely by schema order.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    let mut ps: Vec<f64> = probs.iter().copied().filter(|&p| p > 0.0).collect();
    ps.sort_by(f64::total_cmp);
    let h: f64 = ps.iter().map(|&p| -p * p.log2()).sum();
    h.max(0.0)
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Utility of asking "what is the value of this property?".
pub fn wh_entropy(dist: &PropertyDistribution) -> f64 {
    shannon_entropy(&dist.probs)
}

/// Expected entropy of a yes/no question about one value of the property,
/// averaged over values weighted by their probability.
pub fn yn_expected_entropy(dist: &PropertyDistribution) -> f64 {
    let mut terms: Vec<f64> = dist
        .probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * binary_entropy(p))
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}
