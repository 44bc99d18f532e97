use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Solution counts grow combinatorially, so they are never machine words.
pub type Count = BigUint;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{i=0}^{min(k, pool)} C(pool, i)`: the number of admissible actions.
pub fn total_actions(pool: usize, budget: usize) -> Count {
    (0..=budget.min(pool)).map(|i| binomial(pool, i)).sum()
}
