//! Exact integer and rational kernels.
//!
//! Everything here is either exact (`BigUint`/`BigRational`) or a thin
//! floating-point companion of an exact routine that tests compare against.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distributions::roots;
use crate::error::{check_pair_params, domain, Error, Result};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Limit of the second-order harmonic numbers.
pub const PI_SQ_OVER_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Largest `n` for which [`harmonic`] computes exact rationals.
pub const EXACT_HARMONIC_LIMIT: u64 = 1_000_000;

/// `C(r, s)`, zero when `s > r`.
pub fn binomial(r: u64, s: u64) -> BigUint {
    if s > r {
        return BigUint::zero();
    }
    let s = s.min(r - s);
    let mut acc = BigUint::one();
    for i in 0..s {
        // acc * (r - i) is always divisible by (i + 1) at this point
        acc = acc * BigUint::from(r - i) / BigUint::from(i + 1);
    }
    acc
}

/// `sum_{s=0}^{floor(r/2)} C(r - s, s) x^s`, evaluated exactly.
pub fn chebyshev_sum(r: u64, x: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    let mut power = BigRational::one();
    for s in 0..=r / 2 {
        let c = BigInt::from(binomial(r - s, s));
        total += &power * BigRational::from_integer(c);
        power *= x;
    }
    total
}

/// Closed form of [`chebyshev_sum`] with `alpha = sqrt(1 + 4x)`:
/// `(1/alpha) * (((1 + alpha)/2)^(r+1) - ((1 - alpha)/2)^(r+1))`.
pub fn chebyshev_closed(r: u64, x: f64) -> Result<f64> {
    let disc = 1.0 + 4.0 * x;
    if !(disc > 0.0) {
        return domain(format!("chebyshev_closed needs 1 + 4x > 0, got x = {x}"));
    }
    let alpha = disc.sqrt();
    let hi = powu((1.0 + alpha) / 2.0, r + 1);
    let lo = powu((1.0 - alpha) / 2.0, r + 1);
    Ok((hi - lo) / alpha)
}

/// Binary exponentiation for a non-negative integer exponent.
pub(crate) fn powu(mut base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// Exact harmonic numbers `H_n` and `H_n^(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Harmonic {
    pub h: BigRational,
    pub h2: BigRational,
}

/// Exact `H_n = sum 1/k` and `H_n^(2) = sum 1/k^2` for `1 <= n <= 10^6`.
pub fn harmonic(n: u64) -> Result<Harmonic> {
    if n == 0 {
        return domain("harmonic numbers need n >= 1");
    }
    if n > EXACT_HARMONIC_LIMIT {
        return Err(Error::SizeGuard(format!(
            "exact harmonic numbers are limited to n <= {EXACT_HARMONIC_LIMIT}, got {n}"
        )));
    }
    Ok(Harmonic {
        h: harmonic_range(1, n, 1),
        h2: harmonic_range(1, n, 2),
    })
}

/// `sum_{k=lo}^{hi} 1/k^power` exactly; empty ranges give zero.
pub fn harmonic_range(lo: u64, hi: u64, power: u32) -> BigRational {
    if lo > hi {
        return BigRational::zero();
    }
    let (p, q) = split_sum(lo, hi + 1, power);
    BigRational::new(p, q)
}

// Binary splitting keeps the intermediate numerators and denominators balanced
// and defers the single gcd reduction to the end.
fn split_sum(lo: u64, hi: u64, power: u32) -> (BigInt, BigInt) {
    if hi - lo == 1 {
        return (BigInt::one(), BigInt::from(lo).pow(power));
    }
    let mid = lo + (hi - lo) / 2;
    let (p1, q1) = split_sum(lo, mid, power);
    let (p2, q2) = split_sum(mid, hi, power);
    (p1 * &q2 + p2 * &q1, q1 * q2)
}

/// Asymptotic forms of `H_n` and `H_n^(2)` together with the magnitudes of the
/// dropped remainders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicAsym {
    /// `ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4)`.
    pub h: f64,
    /// `pi^2/6 - 1/n`.
    pub h2: f64,
    /// `(1/(252 n^6), 1/(n(n+1)))`: the exact values sit in
    /// `(h - bound.0, h)` and `(h2, h2 + bound.1)` respectively.
    pub remainder_bounds: (f64, f64),
}

pub fn harmonic_asym(n: u64) -> Result<HarmonicAsym> {
    if n == 0 {
        return domain("harmonic numbers need n >= 1");
    }
    let x = n as f64;
    let h =
        x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x) + 1.0 / (120.0 * x.powi(4));
    let h2 = PI_SQ_OVER_6 - 1.0 / x;
    Ok(HarmonicAsym {
        h,
        h2,
        remainder_bounds: (1.0 / (252.0 * x.powi(6)), 1.0 / (x * (x + 1.0))),
    })
}

/// `sum_{k=lo}^{hi} 1/k^power` in floating point.
///
/// Sums directly (smallest terms first) when the range is at most
/// [`EXACT_HARMONIC_LIMIT`] long and falls back to differences of the
/// Euler-Maclaurin expansions otherwise.
pub fn harmonic_range_f64(lo: u64, hi: u64, power: u32) -> f64 {
    if lo > hi {
        return 0.0;
    }
    let lo = lo.max(1);
    if hi - lo < EXACT_HARMONIC_LIMIT {
        return (lo..=hi)
            .rev()
            .map(|k| (k as f64).powi(-(power as i32)))
            .sum();
    }
    harmonic_f64(hi, power) - harmonic_f64(lo - 1, power)
}

/// `H_n` (power 1) or `H_n^(2)` (power 2) in floating point.
pub fn harmonic_f64(n: u64, power: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= EXACT_HARMONIC_LIMIT {
        return (1..=n)
            .rev()
            .map(|k| (k as f64).powi(-(power as i32)))
            .sum();
    }
    let x = n as f64;
    match power {
        1 => {
            x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x)
                + 1.0 / (120.0 * x.powi(4))
        }
        2 => PI_SQ_OVER_6 - 1.0 / x + 1.0 / (2.0 * x * x) - 1.0 / (6.0 * x.powi(3)),
        _ => unimplemented!("only first and second order harmonic numbers are supported"),
    }
}

/// Counts of words over `{1..n}` avoiding every square `aa` with `a` in a
/// fixed `j`-element set `A`, split by whether the last letter lies in `A`.
///
/// Index `l` holds the counts for words of length `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunCounts {
    pub n: u64,
    pub j: u64,
    /// Words whose last letter is outside `A`.
    pub a: Vec<BigUint>,
    /// Words whose last letter is in `A`.
    pub b: Vec<BigUint>,
    /// `a[l] + b[l]`.
    pub s: Vec<BigUint>,
}

/// Streaming evaluation of the coupled `(a_l, b_l)` recurrence.
///
/// Holds only the current pair, so memory does not grow with the length.
#[derive(Debug, Clone)]
pub struct RunCountIter {
    outside: BigUint,
    inside: BigUint,
    a: BigUint,
    b: BigUint,
    started: bool,
}

impl RunCountIter {
    pub fn new(n: u64, j: u64) -> Result<Self> {
        check_pair_params(n, j)?;
        Ok(Self {
            outside: BigUint::from(n - j),
            inside: BigUint::from(j),
            a: BigUint::one(),
            b: BigUint::zero(),
            started: false,
        })
    }
}

impl Iterator for RunCountIter {
    /// `(a_l, b_l)` for `l = 0, 1, 2, ...`.
    type Item = (BigUint, BigUint);

    fn next(&mut self) -> Option<Self::Item> {
        if self.started {
            let next_a = &self.outside * (&self.a + &self.b);
            let next_b = &self.inside * &self.a + (&self.inside - 1u32) * &self.b;
            self.a = next_a;
            self.b = next_b;
        }
        self.started = true;
        Some((self.a.clone(), self.b.clone()))
    }
}

/// Exact `a_l`, `b_l`, `s_l` for `l = 0..=max_len`.
pub fn run_counts(n: u64, j: u64, max_len: usize) -> Result<RunCounts> {
    let iter = RunCountIter::new(n, j)?;
    let mut counts = RunCounts {
        n,
        j,
        a: Vec::with_capacity(max_len + 1),
        b: Vec::with_capacity(max_len + 1),
        s: Vec::with_capacity(max_len + 1),
    };
    for (a, b) in iter.take(max_len + 1) {
        counts.s.push(&a + &b);
        counts.a.push(a);
        counts.b.push(b);
    }
    Ok(counts)
}

/// Closed form `s_l = c1 t1^l + c2 t2^l` of the total counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCounts {
    pub c1: f64,
    pub c2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl ClosedFormCounts {
    pub fn new(n: u64, j: u64) -> Result<Self> {
        let r = roots(n, j)?;
        let ratio = (n as f64 + 1.0) / r.d;
        Ok(Self {
            c1: 0.5 * (1.0 + ratio),
            c2: 0.5 * (1.0 - ratio),
            t1: r.t1,
            t2: r.t2,
        })
    }

    pub fn s(&self, l: u64) -> f64 {
        self.c1 * powu(self.t1, l) + self.c2 * powu(self.t2, l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(60, 30), BigUint::from(118_264_581_564_861_424u64));
    }

    #[test]
    fn chebyshev_sum_examples() {
        assert_eq!(chebyshev_sum(2, &rat(1, 1)), rat(2, 1));
        assert_eq!(chebyshev_sum(0, &rat(7, 3)), rat(1, 1));
        assert_eq!(chebyshev_sum(4, &rat(1, 1)), rat(5, 1));
        // Fibonacci numbers at x = 1
        assert_eq!(chebyshev_sum(10, &rat(1, 1)), rat(89, 1));
    }

    #[test]
    fn chebyshev_closed_matches_sum() {
        assert!((chebyshev_closed(2, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((chebyshev_closed(4, 1.0).unwrap() - 5.0).abs() < 1e-12);
        let exact = chebyshev_sum(6, &rat(1, 2)).to_f64().unwrap();
        assert!((chebyshev_closed(6, 0.5).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_closed_rejects_small_x() {
        assert!(matches!(chebyshev_closed(3, -0.25), Err(Error::Domain(_))));
        assert!(matches!(chebyshev_closed(3, -1.0), Err(Error::Domain(_))));
        assert!(chebyshev_closed(3, -0.2).is_ok());
    }

    #[test]
    fn chebyshev_identity_grid() {
        let mut xs = vec![rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1)];
        xs.extend((2..=10).map(|n| rat(1, n - 1)));
        for x in &xs {
            let xf = x.to_f64().unwrap();
            for r in 0..=30 {
                let sum = chebyshev_sum(r, x).to_f64().unwrap();
                let closed = chebyshev_closed(r, xf).unwrap();
                assert!(
                    (closed - sum).abs() <= 1e-10 * sum.abs().max(1.0),
                    "r = {r}, x = {x}: {closed} vs {sum}"
                );
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        let h = harmonic(1).unwrap();
        assert_eq!((h.h, h.h2), (rat(1, 1), rat(1, 1)));
        let h = harmonic(2).unwrap();
        assert_eq!((h.h, h.h2), (rat(3, 2), rat(5, 4)));
        let h = harmonic(4).unwrap();
        assert_eq!((h.h, h.h2), (rat(25, 12), rat(205, 144)));
        assert!(matches!(harmonic(0), Err(Error::Domain(_))));
        assert!(matches!(
            harmonic(EXACT_HARMONIC_LIMIT + 1),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn harmonic_increments() {
        let mut prev = harmonic(1).unwrap().h;
        for n in 2..=1000u64 {
            let cur = harmonic_range(1, n, 1);
            assert_eq!(&cur - &prev, rat(1, n as i64));
            prev = cur;
        }
    }

    #[test]
    fn harmonic_asym_bounds() {
        let exact = harmonic(10).unwrap();
        let (h, h2) = (exact.h.to_f64().unwrap(), exact.h2.to_f64().unwrap());
        let asym = harmonic_asym(10).unwrap();
        assert!((h - asym.h).abs() < 1.0 / (252.0 * 1e6));
        assert!(asym.h2 < h2 && h2 < asym.h2 + 1.0 / 110.0);
        assert_eq!(asym.remainder_bounds, (1.0 / (252.0 * 1e6), 1.0 / 110.0));

        let one = harmonic_asym(1).unwrap();
        let expected = EULER_GAMMA + 0.5 - 1.0 / 12.0 + 1.0 / 120.0;
        assert!((one.h - expected).abs() < 1e-15);
        assert!((one.h - 1.0).abs() < 1.0 / 252.0);
    }

    #[test]
    fn harmonic_float_paths_agree() {
        let exact = harmonic(2000).unwrap();
        assert!((harmonic_f64(2000, 1) - exact.h.to_f64().unwrap()).abs() < 1e-13);
        assert!((harmonic_f64(2000, 2) - exact.h2.to_f64().unwrap()).abs() < 1e-14);
        // across the switch to the asymptotic form
        let below = harmonic_f64(EXACT_HARMONIC_LIMIT, 1) + 1.0 / (EXACT_HARMONIC_LIMIT + 1) as f64;
        assert!((harmonic_f64(EXACT_HARMONIC_LIMIT + 1, 1) - below).abs() < 1e-12);
        let below2 =
            harmonic_f64(EXACT_HARMONIC_LIMIT, 2) + ((EXACT_HARMONIC_LIMIT + 1) as f64).powi(-2);
        assert!((harmonic_f64(EXACT_HARMONIC_LIMIT + 1, 2) - below2).abs() < 1e-14);
    }

    #[test]
    fn run_counts_examples() {
        let c = run_counts(3, 2, 2).unwrap();
        let s: Vec<u32> = c.s.iter().map(|v| v.to_u32().unwrap()).collect();
        assert_eq!(s, vec![1, 3, 7]);
        assert_eq!(c.b[2], BigUint::from(4u32));

        let c = run_counts(2, 2, 1).unwrap();
        assert_eq!(c.a[1], BigUint::zero());
        assert_eq!(c.b[1], BigUint::from(2u32));
        assert_eq!(c.s[1], BigUint::from(2u32));

        assert!(matches!(run_counts(1, 1, 3), Err(Error::Domain(_))));
        assert!(matches!(run_counts(4, 5, 3), Err(Error::Domain(_))));
        assert!(matches!(run_counts(4, 0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn run_counts_satisfy_invariants() {
        for n in 2..=6u64 {
            for j in 1..=n {
                let c = run_counts(n, j, 30).unwrap();
                assert_eq!(c.a[0], BigUint::one());
                assert_eq!(c.b[0], BigUint::zero());
                assert_eq!(c.s[1], BigUint::from(n));
                for l in 0..=30usize {
                    assert!(c.b[l] <= c.s[l]);
                    assert!(c.s[l] <= BigUint::from(n).pow(l as u32));
                }
                for l in 2..=30usize {
                    let rhs =
                        BigUint::from(n - 1) * &c.s[l - 1] + BigUint::from(n - j) * &c.s[l - 2];
                    assert_eq!(c.s[l], rhs);
                }
            }
        }
    }

    // Direct count of words over {0..n-1} with no `aa`, a < j.
    fn brute_force_count(n: u64, j: u64, len: u32) -> u64 {
        let total = n.pow(len);
        (0..total)
            .filter(|&code| {
                let mut word = Vec::with_capacity(len as usize);
                let mut c = code;
                for _ in 0..len {
                    word.push(c % n);
                    c /= n;
                }
                !word.windows(2).any(|w| w[0] == w[1] && w[0] < j)
            })
            .count() as u64
    }

    #[test]
    fn run_counts_match_brute_force() {
        for n in 2..=4u64 {
            for j in 1..=n {
                let c = run_counts(n, j, 10).unwrap();
                for l in 0..=10u32 {
                    assert_eq!(
                        c.s[l as usize],
                        BigUint::from(brute_force_count(n, j, l)),
                        "n={n} j={j} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_counts_match() {
        for n in 2..=6u64 {
            for j in 1..=n {
                let cf = ClosedFormCounts::new(n, j).unwrap();
                assert!((cf.c1 + cf.c2 - 1.0).abs() < 1e-12);
                assert!((cf.c1 * cf.t1 + cf.c2 * cf.t2 - n as f64).abs() < 1e-12 * n as f64);
                let c = run_counts(n, j, 20).unwrap();
                for l in 0..=20usize {
                    let exact = c.s[l].to_f64().unwrap();
                    assert!(
                        (cf.s(l as u64) - exact).abs() <= 1e-10 * exact,
                        "n={n} j={j} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn run_count_iter_streams_long_sequences() {
        let (a, b) = RunCountIter::new(3, 1).unwrap().nth(10_000).unwrap();
        assert!(a.bits() > 10_000);
        assert!(b < a);
    }
}
