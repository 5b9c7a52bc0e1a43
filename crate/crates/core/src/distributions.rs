//! Laws of the waiting times `X`, `Y`, `S` and `M`.
//!
//! Two numeric paths are provided. The floating-point path evaluates the
//! two-root closed form in log space. The exact path evaluates the same closed
//! form as a rational number: `(t1^m - t2^m) / (t1 - t2)` is the Lucas sequence
//! `U_m(n - 1, j - n)`, so `P{Y = k} = j U_(k-1) / n^k` needs no square roots.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::combinatorics::{binomial, harmonic_range, harmonic_range_f64, EULER_GAMMA};
use crate::error::{check_pair_params, domain, Error, Result};
use crate::precise::Fixed;

/// Largest alphabet size served by the exact rational path.
pub const EXACT_MAX_N: u64 = 50;
/// Largest waiting time served by the exact rational path.
pub const EXACT_MAX_K: u64 = 10_000;

/// The urn: uniform draws from `{1..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairModel {
    n: u64,
}

impl PairModel {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return domain(format!("alphabet size n = {n} must be at least 2"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn roots(&self, j: u64) -> Result<Roots> {
        roots(self.n, j)
    }
}

/// Roots of `t^2 - (n - 1) t - (n - j) = 0` and the derived ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roots {
    pub n: u64,
    pub j: u64,
    /// `sqrt((n + 1)^2 - 4j)`.
    pub d: f64,
    pub t1: f64,
    pub t2: f64,
    pub q1: f64,
    pub q2: f64,
    // n - t1 and n - t2, both computed without cancellation
    gap1: f64,
    gap2: f64,
    ln_q1: f64,
    ln_abs_q2: f64,
}

pub fn roots(n: u64, j: u64) -> Result<Roots> {
    check_pair_params(n, j)?;
    let (nf, jf) = (n as f64, j as f64);
    let d = ((nf + 1.0) * (nf + 1.0) - 4.0 * jf).sqrt();
    let gap1 = 2.0 * jf / (nf + 1.0 + d);
    let gap2 = (nf + 1.0 + d) / 2.0;
    let t1 = nf - gap1;
    let t2 = -((n - j) as f64) / t1;
    let ln_abs_q2 = if n == j {
        f64::NEG_INFINITY
    } else {
        ((n - j) as f64).ln() - t1.ln() - nf.ln()
    };
    Ok(Roots {
        n,
        j,
        d,
        t1,
        t2,
        q1: t1 / nf,
        q2: t2 / nf,
        gap1,
        gap2,
        ln_q1: (-gap1 / nf).ln_1p(),
        ln_abs_q2,
    })
}

impl Roots {
    /// `q1^e` evaluated as `exp(e ln q1)`.
    pub fn q1_pow(&self, e: u64) -> f64 {
        if e == 0 {
            return 1.0;
        }
        (e as f64 * self.ln_q1).exp()
    }

    /// `q2^e` with the sign restored from the parity of `e`.
    pub fn q2_pow(&self, e: u64) -> f64 {
        if e == 0 {
            return 1.0;
        }
        let mag = (e as f64 * self.ln_abs_q2).exp();
        if e % 2 == 1 {
            -mag
        } else {
            mag
        }
    }

    /// `P{Y = k}`, zero below the support.
    pub fn pmf(&self, k: u64) -> f64 {
        if k < 2 {
            return 0.0;
        }
        let pref = self.j as f64 / (self.n as f64 * self.d);
        pref * (self.q1_pow(k - 1) - self.q2_pow(k - 1))
    }

    /// `P{Y > m}`; equal to one for `m <= 1`.
    pub fn tail(&self, m: u64) -> f64 {
        if m <= 1 {
            return 1.0;
        }
        let pref = self.j as f64 / self.d;
        pref * (self.q1_pow(m) / self.gap1 - self.q2_pow(m) / self.gap2)
    }

    /// `P{Y <= m}`.
    pub fn cdf(&self, m: u64) -> f64 {
        1.0 - self.tail(m)
    }

    /// `E exp(itY)`.
    pub fn charfn(&self, t: f64) -> Complex64 {
        let nf = self.n as f64;
        let pref = self.j as f64 / (nf * self.d);
        let e1 = Complex64::from_polar(1.0, t);
        let e2 = e1 * e1;
        // 1 - q e^{it} = (1 - q) + q (1 - cos t) - i q sin t
        let half = (t / 2.0).sin();
        let one_minus_cos = 2.0 * half * half;
        let denom = |q: f64, one_minus_q: f64| {
            Complex64::new(one_minus_q + q * one_minus_cos, -q * t.sin())
        };
        let first = e2 * self.q1 / denom(self.q1, self.gap1 / nf);
        let second = e2 * self.q2 / denom(self.q2, self.gap2 / nf);
        (first - second) * pref
    }
}

fn check_exact_size(n: u64, k: u64) -> Result<()> {
    if n > EXACT_MAX_N || k > EXACT_MAX_K {
        return Err(Error::SizeGuard(format!(
            "exact path limited to n <= {EXACT_MAX_N} and k <= {EXACT_MAX_K}, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

fn check_support(k: u64) -> Result<()> {
    if k < 2 {
        return domain(format!("waiting times are at least 2, got k = {k}"));
    }
    Ok(())
}

fn check_tail_arg(m: u64) -> Result<()> {
    if m < 1 {
        return domain("tail argument m must be at least 1");
    }
    Ok(())
}

/// `P{Y_nj = k}` in floating point.
pub fn pmf_y(n: u64, j: u64, k: u64) -> Result<f64> {
    check_support(k)?;
    Ok(roots(n, j)?.pmf(k))
}

/// `P{Y_nj > m}` in floating point.
pub fn tail_y(n: u64, j: u64, m: u64) -> Result<f64> {
    check_tail_arg(m)?;
    Ok(roots(n, j)?.tail(m))
}

/// Lucas sequence `U_0 = 0, U_1 = 1, U_m = (n - 1) U_(m-1) + (n - j) U_(m-2)`,
/// i.e. `(t1^m - t2^m) / (t1 - t2)`.
struct Lucas {
    p: BigInt,
    q: BigInt,
    prev: BigInt,
    cur: BigInt,
}

impl Lucas {
    fn new(n: u64, j: u64) -> Self {
        Self {
            p: BigInt::from(n - 1),
            q: BigInt::from(n - j),
            prev: BigInt::zero(),
            cur: BigInt::one(),
        }
    }
}

impl Iterator for Lucas {
    /// `U_1, U_2, ...`
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let out = self.cur.clone();
        let next = &self.p * &self.cur + &self.q * &self.prev;
        self.prev = std::mem::replace(&mut self.cur, next);
        Some(out)
    }
}

/// Exact `P{Y_nj = k}` from the closed form.
pub fn pmf_y_exact(n: u64, j: u64, k: u64) -> Result<BigRational> {
    check_pair_params(n, j)?;
    check_support(k)?;
    check_exact_size(n, k)?;
    let u = Lucas::new(n, j)
        .nth((k - 2) as usize)
        .expect("infinite sequence");
    Ok(BigRational::new(
        BigInt::from(j) * u,
        BigInt::from(n).pow(k as u32),
    ))
}

/// Exact `P{Y_nj = k}` for `k = 2..=kmax`.
pub fn pmf_y_exact_range(n: u64, j: u64, kmax: u64) -> Result<Vec<BigRational>> {
    check_pair_params(n, j)?;
    check_exact_size(n, kmax)?;
    let nb = BigInt::from(n);
    let mut denom = &nb * &nb;
    let mut out = Vec::new();
    for (k, u) in (2..=kmax).zip(Lucas::new(n, j)) {
        if k > 2 {
            denom *= &nb;
        }
        out.push(BigRational::new(BigInt::from(j) * u, denom.clone()));
    }
    Ok(out)
}

/// Exact `P{Y_nj > m}`.
pub fn tail_y_exact(n: u64, j: u64, m: u64) -> Result<BigRational> {
    check_tail_arg(m)?;
    let mass: BigRational = pmf_y_exact_range(n, j, m)?.into_iter().sum();
    Ok(BigRational::one() - mass)
}

/// `P{X_n = k}` in floating point, summed term by term for `k <= 10^4` and
/// taken from the `j = 1` closed form beyond that.
pub fn pmf_x(n: u64, k: u64) -> Result<f64> {
    PairModel::new(n)?;
    check_support(k)?;
    if k > EXACT_MAX_K {
        return pmf_y(n, 1, k);
    }
    let nf = n as f64;
    // term_s = C(k-s-2, s) (1 - 1/n)^(k-s-2) n^-(s+2)
    let mut term = ((k - 2) as f64 * (-1.0 / nf).ln_1p()).exp() / (nf * nf);
    let mut total = 0.0;
    for s in 0..k / 2 {
        total += term;
        let r = (k - s - 2) as f64;
        let sf = s as f64;
        if r <= sf + 1.0 {
            break;
        }
        term *= (r - sf) * (r - sf - 1.0) / ((sf + 1.0) * r) / (nf - 1.0);
    }
    Ok(total)
}

/// Exact `P{X_n = k} = sum_s C(k-s-2, s) (n-1)^(k-s-2) / n^k`.
pub fn pmf_x_exact(n: u64, k: u64) -> Result<BigRational> {
    PairModel::new(n)?;
    check_support(k)?;
    check_exact_size(n, k)?;
    let nm1 = BigInt::from(n - 1);
    let numer: BigInt = (0..k / 2)
        .map(|s| BigInt::from(binomial(k - s - 2, s)) * Pow::pow(&nm1, (k - s - 2) as u32))
        .sum();
    Ok(BigRational::new(numer, BigInt::from(n).pow(k as u32)))
}

/// `P{X_n > m}`, via the roots at `j = 1`.
pub fn tail_x(n: u64, m: u64) -> Result<f64> {
    tail_y(n, 1, m)
}

/// `E exp(itY_nj)`.
pub fn charfn_y(n: u64, j: u64, t: f64) -> Result<Complex64> {
    Ok(roots(n, j)?.charfn(t))
}

/// Which waiting time a [`MomentSummary`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentTarget {
    Y { n: u64, j: u64 },
    S { n: u64, a: u64 },
    M { n: u64 },
}

impl fmt::Display for MomentTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentTarget::Y { n, j } => write!(f, "Y(n={n},j={j})"),
            MomentTarget::S { n, a } => write!(f, "S(n={n},a={a})"),
            MomentTarget::M { n } => write!(f, "M(n={n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSummary<T> {
    pub mean: T,
    pub variance: T,
    pub target: MomentTarget,
}

impl MomentSummary<BigRational> {
    pub fn to_f64(&self) -> MomentSummary<f64> {
        MomentSummary {
            mean: self.mean.to_f64().unwrap_or(f64::NAN),
            variance: self.variance.to_f64().unwrap_or(f64::NAN),
            target: self.target,
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn check_count(n: u64, a: u64) -> Result<()> {
    PairModel::new(n)?;
    if a == 0 || a > n {
        return domain(format!(
            "number of pairs a = {a} must satisfy 1 <= a <= n = {n}"
        ));
    }
    Ok(())
}

/// Exact mean `(n^2 + n)/j` and variance
/// `(n^4 + 2n^3 - (3j - 1)n^2 - jn) / j^2` of `Y_nj`.
pub fn moments_y(n: u64, j: u64) -> Result<MomentSummary<BigRational>> {
    check_pair_params(n, j)?;
    let (nb, jb) = (big(n), big(j));
    let n2 = &nb * &nb;
    let mean = BigRational::new(&n2 + &nb, jb.clone());
    let var_numer = &n2 * &n2 + big(2) * &n2 * &nb - (big(3) * &jb - 1) * &n2 - &jb * &nb;
    let variance = BigRational::new(var_numer, &jb * &jb);
    Ok(MomentSummary {
        mean,
        variance,
        target: MomentTarget::Y { n, j },
    })
}

/// Exact moments of `S_{n,a} = Y_nn + ... + Y_(n,n-a+1)`.
pub fn moments_s(n: u64, a: u64) -> Result<MomentSummary<BigRational>> {
    check_count(n, a)?;
    let nb = big(n);
    let n2 = &nb * &nb;
    let lo = n - a + 1;
    let h1 = harmonic_range(lo, n, 1);
    let h2 = harmonic_range(lo, n, 2);
    // var Y_nj = (n^4 + 2n^3 + n^2)/j^2 - (3n^2 + n)/j
    let c2 = &n2 * &n2 + big(2) * &n2 * &nb + &n2;
    let c1 = big(3) * &n2 + &nb;
    let mean = &h1 * BigRational::from_integer(&n2 + &nb);
    let variance = &h2 * BigRational::from_integer(c2) - &h1 * BigRational::from_integer(c1);
    Ok(MomentSummary {
        mean,
        variance,
        target: MomentTarget::S { n, a },
    })
}

/// Floating-point moments of `S_{n,a}`, cheap for large `n`.
pub fn moments_s_f64(n: u64, a: u64) -> Result<MomentSummary<f64>> {
    check_count(n, a)?;
    let nf = n as f64;
    let lo = n - a + 1;
    let h1 = harmonic_range_f64(lo, n, 1);
    let h2 = harmonic_range_f64(lo, n, 2);
    let c2 = nf * nf * (nf + 1.0) * (nf + 1.0);
    let c1 = nf * (3.0 * nf + 1.0);
    Ok(MomentSummary {
        mean: nf * (nf + 1.0) * h1,
        variance: c2 * h2 - c1 * h1,
        target: MomentTarget::S { n, a },
    })
}

/// The three central-limit regimes for `S_{n,a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CltRegime {
    /// `a -> inf`, `a/n -> 0`.
    Sublinear,
    /// `a/n -> lambda` in `(0, 1)`.
    Proportional,
    /// `a/n -> 1`, `n - a -> inf`.
    NearComplete,
}

/// Main terms of the mean and variance of `S_{n,a}` in a declared regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SAsymptotics {
    pub main_mean: f64,
    pub main_variance: f64,
    pub regime: CltRegime,
}

/// `main_mean = -n^2 ln(1 - a/n)`; `main_variance` is `n^2 a`, `lambda0 n^3`
/// with `lambda0 = a/(n - a)`, or `n^4/(n - a)` depending on `regime`.
pub fn moments_s_asym(n: u64, a: u64, regime: CltRegime) -> Result<SAsymptotics> {
    check_count(n, a)?;
    if a == n {
        return domain("a = n has no central-limit main terms; use moments_m");
    }
    let (nf, af) = (n as f64, a as f64);
    let main_mean = -nf * nf * (-af / nf).ln_1p();
    let main_variance = match regime {
        CltRegime::Sublinear => nf * nf * af,
        CltRegime::Proportional => af / (nf - af) * nf.powi(3),
        CltRegime::NearComplete => nf.powi(4) / (nf - af),
    };
    Ok(SAsymptotics {
        main_mean,
        main_variance,
        regime,
    })
}

/// Exact and asymptotic moments of the full collection time `M_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxMoments {
    pub exact: MomentSummary<BigRational>,
    pub asym_mean: f64,
    pub asym_var: f64,
}

pub fn moments_m(n: u64) -> Result<MaxMoments> {
    let mut exact = moments_s(n, n)?;
    exact.target = MomentTarget::M { n };
    let nf = n as f64;
    let pi2 = std::f64::consts::PI.powi(2);
    let asym_mean = (nf * nf + nf) * (nf.ln() + EULER_GAMMA) + nf / 2.0 + 5.0 / 12.0
        - 1.0 / (12.0 * nf)
        + 1.0 / (120.0 * nf * nf);
    let asym_var =
        pi2 * nf.powi(4) / 6.0 + (pi2 / 3.0 - 1.0) * nf.powi(3) - 3.0 * nf * nf * nf.ln();
    Ok(MaxMoments {
        exact,
        asym_mean,
        asym_var,
    })
}

/// `EM_n - asym_mean`, with the logarithm and Euler's constant carried in
/// 320-bit fixed point so the `o(1/n^2)` remainder is not lost to rounding.
pub fn max_mean_asym_gap(n: u64) -> Result<f64> {
    PairModel::new(n)?;
    let nb = big(n);
    let factor = &nb * &nb + &nb;
    let exact = harmonic_range(1, n, 1) * BigRational::from_integer(factor.clone());
    // n/2 + 5/12 - 1/(12n) + 1/(120 n^2)
    let rational_part = BigRational::new(nb.clone(), big(2)) + BigRational::new(big(5), big(12))
        - BigRational::new(BigInt::one(), big(12) * &nb)
        + BigRational::new(BigInt::one(), big(120) * &nb * &nb);
    let log_part = Fixed::ln_u64(n) + Fixed::euler_gamma();
    let gap = Fixed::from_ratio(&(exact - rational_part)) - &log_part * &Fixed::from_int(factor);
    Ok(gap.to_f64())
}
