//! Small summary statistics and the one-sided sign test.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean (sample standard deviation over sqrt n).
pub fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    libm::sqrt(var / n as f64)
}

/// Outcome of a paired comparison "x better than y" (smaller is better).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignTest {
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    /// P(at least `wins` wins out of `wins + losses` fair coin flips).
    pub p_value: f64,
}

/// One-sided sign test that `x` tends to be smaller than `y`. Ties are
/// dropped.
pub fn sign_test_one_sided(x: &[f64], y: &[f64]) -> SignTest {
    let mut wins = 0;
    let mut losses = 0;
    let mut ties = 0;
    for (a, b) in x.iter().zip(y) {
        if a < b {
            wins += 1;
        } else if a > b {
            losses += 1;
        } else {
            ties += 1;
        }
    }
    SignTest {
        wins,
        losses,
        ties,
        p_value: binomial_upper_tail(wins + losses, wins),
    }
}

/// P(X >= k) for X ~ Binomial(n, 1/2).
pub fn binomial_upper_tail(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    // C(n, j) / 2^n accumulated in log space to stay finite for large n
    let ln_half_n = n as f64 * libm::log(0.5);
    let mut ln_c = 0.0;
    let mut tail = 0.0;
    for j in 0..=n {
        if j > 0 {
            ln_c += libm::log((n - j + 1) as f64) - libm::log(j as f64);
        }
        if j >= k {
            tail += libm::exp(ln_c + ln_half_n);
        }
    }
    tail.min(1.0)
}
