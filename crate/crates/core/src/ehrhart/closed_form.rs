//! Closed-form counts and volumes for arithmetic progressions and
//! `B_h[g]` systems.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::Rational;

/// `C(a, b)` for any integer `a`; zero unless `0 <= b <= a`.
fn binomial(a: i128, b: u32) -> i128 {
    if a < 0 || a < i128::from(b) {
        return 0;
    }
    let mut out: i128 = 1;
    for i in 0..i128::from(b) {
        out = out * (a - i) / (i + 1);
    }
    out
}

/// Number of `k`-term progressions `(a, a + d, ..)` inside `{0..n}` with
/// `d >= 0`.
pub fn kap_closed_form(k: usize, n: u64) -> u128 {
    assert!(k >= 3, "k-AP needs k >= 3");
    let step = (k - 1) as u128;
    let n = u128::from(n);
    let q = n / step;
    (n + 1) * (q + 1) - step * (q * q + q) / 2
}

/// Number of `x ∈ {0..n}^h` with `x_1 + .. + x_h = k`, by inclusion and
/// exclusion over `k = k1 n + k2` with `1 <= k2 <= n` (or `k1 = k2 = 0`).
/// `None` when `k > h n`.
pub fn bhg_representation_count(h: usize, n: u64, k: u64) -> Option<u128> {
    assert!(h >= 1, "needs h >= 1");
    if k > h as u64 * n {
        return None;
    }
    if k == 0 {
        return Some(1);
    }
    let (k1, k2) = ((k - 1) / n, (k - 1) % n + 1);
    let (n, k1, k2) = (i128::from(n), i128::from(k1), i128::from(k2));
    let top = h as u32 - 1;
    let total: i128 = (0..=k1)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binomial(h as i128, j as u32)
                * binomial((k1 - j) * n + k2 - j + h as i128 - 1, top)
        })
        .sum();
    Some(u128::try_from(total).expect("a count is non-negative"))
}

/// `(a)_{len} = a (a - 1) .. (a - len + 1)`, zero once a factor vanishes.
fn falling(a: u128, len: usize) -> u128 {
    (0..len as u128)
        .map(|i| a.saturating_sub(i))
        .fold(1u128, |acc, f| {
            acc.checked_mul(f).expect("falling factorial fits u128")
        })
}

/// `f_{h,g}(n) = 1 + Σ_{k1 < h} Σ_{k2 = 1..n} (a(k1 n + k2))_{g+1}`: ordered
/// `(g+1)`-tuples of distinct representations of a common sum, plus one.
pub fn bhg_f(h: usize, g: usize, n: u64) -> u128 {
    assert!(h >= 2 && g >= 1, "B_h[g] needs h >= 2 and g >= 1");
    let mut total = 1u128;
    for k1 in 0..h as u64 {
        for k2 in 1..=n {
            let a = bhg_representation_count(h, n, k1 * n + k2).expect("k <= h n");
            total += falling(a, g + 1);
        }
    }
    total
}

/// `Vol(P_{B_h[1]}) = Σ_{j < h} (-1)^j C(2h, j) (h - j)^{2h-1} / (2h-1)!`.
pub fn bh1_volume_closed_form(h: usize) -> Rational {
    assert!(h >= 2, "needs h >= 2");
    let mut sum = BigInt::zero();
    let mut choose = BigInt::one();
    for j in 0..h {
        if j > 0 {
            choose = choose * BigInt::from(2 * h - j + 1) / BigInt::from(j);
        }
        let term = &choose * BigInt::from(h - j).pow(2 * h as u32 - 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let factorial: BigInt = (1..2 * h).map(BigInt::from).product();
    Rational::new(sum, factorial)
}

/// `Vol = 1 / (k - 1)` for `k`-term progressions.
pub fn kap_volume(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(k - 1))
}

/// Library value for the Hilbert `k`-cube, `2^k / (k+1)!`.
pub fn kcube_volume(k: usize) -> Rational {
    let factorial: BigInt = (1..=k + 1).map(BigInt::from).product();
    Rational::new(BigInt::one() << k, factorial)
}
