//! Mean estimation of bounded samples.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::config::Constants;
use crate::error::TesterError;

/// Empirical mean of `⌈8/ε² · ln(4/δ)⌉` draws from `sampler` (the factor 8
/// is [`Constants::estimator_factor`]). With samples in the unit disk the
/// result is within `ε` of the true mean with probability at least `1 − δ`.
pub fn estimate_mean<R: Rng + ?Sized>(
    mut sampler: impl FnMut(&mut R) -> Complex64,
    accuracy: f64,
    confidence: f64,
    rng: &mut R,
) -> Result<Complex64, TesterError> {
    let samples = Constants::DEFAULT.estimator_samples(accuracy, confidence)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..samples {
        sum += sampler(rng);
    }
    Ok(sum / samples as f64)
}

/// Splits `trials` uniform draws over `categories` outcomes into multinomial
/// counts, writing `(category, count)` for every nonzero count into `out` in
/// increasing category order. Equivalent in distribution to tallying
/// `trials` independent uniform draws, in `O(categories)` time.
pub fn multinomial_uniform<R: Rng + ?Sized>(rng: &mut R, trials: u64, categories: usize, out: &mut Vec<(usize, u64)>) {
    assert!(categories > 0, "no categories");
    out.clear();
    let mut remaining = trials;
    for i in 0..categories - 1 {
        if remaining == 0 {
            return;
        }
        let p = 1.0 / (categories - i) as f64;
        let count = Binomial::new(remaining, p).expect("valid binomial").sample(rng);
        if count > 0 {
            out.push((i, count));
            remaining -= count;
        }
    }
    if remaining > 0 {
        out.push((categories - 1, remaining));
    }
}

/// Multinomial counts of `trials` draws where category `i` has probability
/// proportional to `weights[i]`; same output convention as
/// [`multinomial_uniform`].
pub fn multinomial_weighted<R: Rng + ?Sized>(
    rng: &mut R,
    trials: u64,
    weights: impl Iterator<Item = u64> + Clone,
    out: &mut Vec<(usize, u64)>,
) {
    let mut rest: u64 = weights.clone().sum();
    assert!(rest > 0, "no categories");
    out.clear();
    let mut remaining = trials;
    for (i, w) in weights.enumerate() {
        if remaining == 0 {
            return;
        }
        if w == rest {
            out.push((i, remaining));
            return;
        }
        let count = Binomial::new(remaining, w as f64 / rest as f64).expect("valid binomial").sample(rng);
        if count > 0 {
            out.push((i, count));
            remaining -= count;
        }
        rest -= w;
    }
}
