//! Exact counting: cardinalities, layer sizes, idempotent counts and ranks.
//!
//! Everything here is big-integer arithmetic — no floating point. Formulas
//! with a `1/n` or `1/(n+1)` prefactor perform exact division and panic if
//! the division ever leaves a remainder, since that would mean the formula
//! itself is wrong.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact non-negative count.
pub type Count = BigUint;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Count {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `2^e`.
pub fn pow2(e: u64) -> Count {
    BigUint::one() << e as usize
}

fn exact_div(value: BigUint, divisor: u64, what: &str) -> Count {
    let d = BigUint::from(divisor);
    assert!(
        (&value % &d).is_zero(),
        "inexact division by {divisor} in {what}"
    );
    value / d
}

/// Fibonacci number `f_k` with `f_0 = 0`, `f_1 = 1`.
pub fn fib(k: u64) -> Count {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

fn q_memo() -> &'static Mutex<HashMap<(u64, u64), BigUint>> {
    static MEMO: OnceLock<Mutex<HashMap<(u64, u64), BigUint>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn q_rec(n: u64, m: u64, memo: &mut HashMap<(u64, u64), BigUint>) -> BigUint {
    if m == 0 || m == n {
        return BigUint::one();
    }
    if m == 1 {
        return pow2(n) - BigUint::one();
    }
    if let Some(v) = memo.get(&(n, m)) {
        return v.clone();
    }
    // q(n,m) = 2 q(n-1,m) + q(n-1,m-1) - q(n-2,m-1), valid for 2 <= m <= n-1.
    let a = q_rec(n - 1, m, memo);
    let b = q_rec(n - 1, m - 1, memo);
    let c = q_rec(n - 2, m - 1, memo);
    let value: BigUint = (a << 1u32) + b - c;
    memo.insert((n, m), value.clone());
    value
}

/// Number of order-reversing decreasing partial maps with maximal image
/// point `m` (the layer `Q(n, m)`, with `Q(n, 0) = {0_n}`).
pub fn q(n: u64, m: u64) -> Result<Count> {
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "q(n, m) needs 0 <= m <= n, got n={n}, m={m}"
        )));
    }
    let mut memo = q_memo().lock().expect("q memo poisoned");
    Ok(q_rec(n, m, &mut memo))
}

/// `|PRD_n|`, the number of order-reversing decreasing partial maps.
/// Equals the Fibonacci number `f_{2n+1}`.
pub fn card_prd(n: u64) -> Count {
    fib(2 * n + 1)
}

/// `|PRD*_n|`: order-reversing decreasing maps with image size at least 2,
/// i.e. `f_{2n+1} + n + 1 - 2^{n+1}`.
pub fn card_prd_star(n: u64) -> Count {
    let value = BigInt::from(fib(2 * n + 1)) + BigInt::from(n + 1)
        - BigInt::from(pow2(n + 1));
    assert!(!value.is_negative(), "card_prd_star must be non-negative");
    value.to_biguint().expect("non-negative")
}

/// `|PC_n| = (1/n) Σ_{r=0}^{n} C(n,r) C(n+r, n-1)`.
pub fn card_pc(n: u64) -> Count {
    assert!(n >= 1);
    let sum: BigUint = (0..=n)
        .map(|r| binomial(n, r) * binomial(n + r, n - 1))
        .sum();
    exact_div(sum, n, "card_pc")
}

/// `|PMD_n| = |PRD*_n| + |PC_n|`.
pub fn card_pmd(n: u64) -> Count {
    card_prd_star(n) + card_pc(n)
}

/// Upper end of the nonempty range for the `K_r` layers.
pub fn k_layer_bound(n: u64) -> u64 {
    (n + 1) / 2
}

/// Whether `K_r` (equivalently `K_r^i`) is nonempty.
pub fn k_layer_nonempty(n: u64, r: u64) -> bool {
    2 <= r && r <= k_layer_bound(n)
}

/// `|K_r|`: order-reversing decreasing maps of image size exactly `r >= 2`.
/// Zero outside the nonempty range.
pub fn card_k(n: u64, r: u64) -> Count {
    if !k_layer_nonempty(n, r) {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    for s in r..=(n - r + 1) {
        let inner: BigUint = (r..=(n - s + 1))
            .map(|t| binomial(n - s + 1, t) * binomial(t - 1, r - 1))
            .sum();
        total += binomial(s - 1, r - 1) * inner;
    }
    total
}

/// `|K_r^i|`: the injective members of `K_r`.
pub fn card_k_inj(n: u64, r: u64) -> Count {
    if !k_layer_nonempty(n, r) {
        return BigUint::zero();
    }
    (r..=(n - r + 1))
        .map(|s| binomial(n - s + 1, r) * binomial(s - 1, r - 1))
        .sum()
}

/// Narayana number `N(n, r) = (1/n) C(n, r-1) C(n, r)`.
pub fn narayana(n: u64, r: u64) -> Result<Count> {
    if !(1 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "narayana(n, r) needs 1 <= r <= n, got n={n}, r={r}"
        )));
    }
    Ok(exact_div(
        binomial(n, r - 1) * binomial(n, r),
        n,
        "narayana",
    ))
}

/// Catalan number `C_n = (1/(n+1)) C(2n, n)`.
pub fn catalan(n: u64) -> Count {
    exact_div(binomial(2 * n, n), n + 1, "catalan")
}

/// `|J_r^i| = N(n+1, r+1)`: injective order-preserving decreasing maps of
/// image size exactly `r`.
pub fn card_j_inj(n: u64, r: u64) -> Result<Count> {
    if r > n {
        return Err(Error::InvalidParameter(format!(
            "card_j_inj(n, r) needs 0 <= r <= n, got n={n}, r={r}"
        )));
    }
    narayana(n + 1, r + 1)
}

/// `|IC(n, r)| = Σ_{k=1}^{r+1} N(n+1, k)`; for `r = n` this is `C_{n+1}`.
pub fn card_ic(n: u64, r: u64) -> Result<Count> {
    if r > n {
        return Err(Error::InvalidParameter(format!(
            "card_ic(n, r) needs 0 <= r <= n, got n={n}, r={r}"
        )));
    }
    let mut total = BigUint::zero();
    for k in 1..=(r + 1) {
        total += narayana(n + 1, k)?;
    }
    Ok(total)
}

/// `|IO(n, r)| = Σ_{k=0}^{r} C(n, k)^2`.
pub fn card_io(n: u64, r: u64) -> Count {
    (0..=r.min(n)).map(|k| {
        let b = binomial(n, k);
        &b * &b
    }).sum()
}

/// `|IMD(n, r)|` for `2 <= r <= n`: the injective order-preserving part plus
/// the reversing layers of height up to `min(r, ⌊(n+1)/2⌋)`.
pub fn card_imd(n: u64, r: u64) -> Result<Count> {
    if !(2 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "card_imd(n, r) needs 2 <= r <= n, got n={n}, r={r}"
        )));
    }
    let m = k_layer_bound(n);
    let mut total = card_ic(n, r)?;
    for k in 2..=r.min(m) {
        total += card_k_inj(n, k);
    }
    Ok(total)
}

/// `|IMD_n| = C_{n+1} + Σ_{k=2}^{m} |K_k^i|`.
pub fn card_imd_full(n: u64) -> Count {
    let mut total = catalan(n + 1);
    for k in 2..=k_layer_bound(n) {
        total += card_k_inj(n, k);
    }
    total
}

/// `rank(PMD(n, r))` for `2 <= r <= n-1`, and `3n - 2` for `r = n`.
pub fn rank_pmd(n: u64, r: u64) -> Result<Count> {
    if !(2 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "rank_pmd(n, r) needs 2 <= r <= n, got n={n}, r={r}"
        )));
    }
    if r == n {
        return Ok(BigUint::from(3 * n - 2));
    }
    let sum: BigUint = (r..=n)
        .map(|k| binomial(n, k) * binomial(k - 1, r - 1))
        .sum();
    Ok(BigUint::from(n - 2) + sum)
}

/// `rank(IMD(n, r)) = C(n, r) + r C(n-1, r) + n - 2` for `2 <= r <= n-1`,
/// and `3n - 2` for `r = n`.
pub fn rank_imd(n: u64, r: u64) -> Result<Count> {
    if !(2 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "rank_imd(n, r) needs 2 <= r <= n, got n={n}, r={r}"
        )));
    }
    if r == n {
        return Ok(BigUint::from(3 * n - 2));
    }
    Ok(binomial(n, r) + BigUint::from(r) * binomial(n - 1, r) + BigUint::from(n - 2))
}

/// `C(n, r) = Σ_{s=r}^{n} C(n, s) C(s-1, r-1)`: the number of
/// order-preserving decreasing idempotents of image size exactly `r`.
/// Satisfies `C(n, r) = 2 C(n-1, r) + C(n-1, r-1)` with `C(n, 1) = 2^n - 1`.
pub fn c_table(n: u64, r: u64) -> Count {
    if r == 0 || r > n {
        return BigUint::zero();
    }
    (r..=n)
        .map(|s| binomial(n, s) * binomial(s - 1, r - 1))
        .sum()
}

/// `|E(PMD(n, r))| = 1 + Σ_{q=1}^{r} C(n, q)`.
pub fn card_e_pmd(n: u64, r: u64) -> Count {
    let mut total = BigUint::one();
    for q in 1..=r.min(n) {
        total += c_table(n, q);
    }
    total
}

/// Convenience: exact value as `usize`, for desk-scale cardinalities.
pub fn to_usize(count: &Count) -> usize {
    count.to_usize().expect("count fits in usize")
}
