//! Exact even-index Bernoulli numbers.

use std::sync::OnceLock;

use rug::{Integer, Rational};

/// Largest `k` for which `B_{2k}` is tabulated.
pub(crate) const MAX_HALF_INDEX: usize = 160;

/// `B_0, B_1, …, B_{2·MAX_HALF_INDEX}` from the recurrence
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 2 * MAX_HALF_INDEX + 1;
        let mut b: Vec<Rational> = Vec::with_capacity(n);
        b.push(Rational::from(1));
        for m in 1..n {
            if m > 1 && m % 2 == 1 {
                b.push(Rational::new());
                continue;
            }
            let mut acc = Rational::new();
            let mut binom = Integer::from(1); // C(m+1, 0)
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += Rational::from(&binom * bj.numer()) / bj.denom();
                }
                binom = binom * (m + 1 - j) as u32 / (j + 1) as u32;
            }
            // C(m+1, m) = m+1
            b.push(-acc / Integer::from(m + 1));
        }
        b
    })
}

/// `B_{2k}` for `1 ≤ k ≤ MAX_HALF_INDEX`.
pub(crate) fn bernoulli_even(k: usize) -> &'static Rational {
    &table()[2 * k]
}
