//! Limit laws, regime normalizations and convergence diagnostics.

use std::fmt;

use num_complex::Complex64;

use crate::distributions::{moments_s_f64, tail_x, tail_y, PairModel};
use crate::error::{domain, Error, Result};
use crate::simulate::EmpiricalSample;

/// Asymptotic class of the number of collected pairs `a_n`.
///
/// The regime is a property of the whole sequence `a_n` and is never inferred
/// from a single `(n, a)`; callers declare it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `a_n = k` for every `n`.
    FixedK(u64),
    /// `a_n -> inf`, `a_n / n -> 0`.
    Sublinear,
    /// `a_n / n -> lambda` in `(0, 1)`.
    Proportional(f64),
    /// `a_n / n -> 1`, `n - a_n -> inf`.
    NearComplete,
    /// `a_n = n - k + 1`: the k-th largest single-pair waiting time.
    KthMax(u64),
    /// `a_n = n`.
    FullMax,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::FixedK(k) => write!(f, "fixedk({k})"),
            Regime::Sublinear => f.write_str("sublinear"),
            Regime::Proportional(l) => write!(f, "proportional({l})"),
            Regime::NearComplete => f.write_str("nearcomplete"),
            Regime::KthMax(k) => write!(f, "kthmax({k})"),
            Regime::FullMax => f.write_str("fullmax"),
        }
    }
}

impl Regime {
    /// Checks that `(n, a)` can be a member of a sequence in this regime.
    pub fn check(&self, n: u64, a: u64) -> Result<()> {
        PairModel::new(n)?;
        let ok = match *self {
            Regime::FixedK(k) => k >= 1 && a == k && k <= n,
            Regime::Sublinear | Regime::NearComplete => a >= 1 && a < n,
            Regime::Proportional(lambda) => a >= 1 && a < n && lambda > 0.0 && lambda < 1.0,
            Regime::KthMax(k) => k >= 1 && k <= n && a == n - k + 1,
            Regime::FullMax => a == n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InconsistentRegime {
                regime: self.to_string(),
                n,
                a,
            })
        }
    }

    /// The limit law of the normalized `S_{n,a_n}` in this regime.
    pub fn limit_law(&self) -> LimitLaw {
        match *self {
            Regime::FixedK(k) => LimitLaw::ErlangK(k),
            Regime::Sublinear | Regime::Proportional(_) | Regime::NearComplete => {
                LimitLaw::StdNormal
            }
            Regime::KthMax(k) => LimitLaw::GumbelKth(k),
            Regime::FullMax => LimitLaw::GumbelKth(1),
        }
    }
}

/// Affine standardization `(v - center) / scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub center: f64,
    pub scale: f64,
    pub regime: Regime,
}

/// Main-term centering and scaling of `S_{n,a}` for a declared regime.
pub fn normalization_for(n: u64, a: u64, regime: Regime) -> Result<Normalization> {
    regime.check(n, a)?;
    let (nf, af) = (n as f64, a as f64);
    let n2 = nf * nf;
    let clt_center = || -n2 * (-af / nf).ln_1p();
    let (center, scale) = match regime {
        Regime::FixedK(_) => (0.0, nf),
        Regime::Sublinear => (clt_center(), nf * af.sqrt()),
        // lambda0 from the concrete a/n rather than the limit lambda
        Regime::Proportional(_) => (clt_center(), (af / (nf - af)).sqrt() * nf.powf(1.5)),
        Regime::NearComplete => (clt_center(), n2 / (nf - af).sqrt()),
        Regime::KthMax(_) | Regime::FullMax => (n2 * nf.ln(), n2),
    };
    Ok(Normalization {
        center,
        scale,
        regime,
    })
}

/// Standardization by the exact mean and standard deviation of `S_{n,a}`.
pub fn exact_normalization(n: u64, a: u64, regime: Regime) -> Result<Normalization> {
    regime.check(n, a)?;
    let m = moments_s_f64(n, a)?;
    Ok(Normalization {
        center: m.mean,
        scale: m.variance.sqrt(),
        regime,
    })
}

/// Limit distributions reached by the normalized waiting times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitLaw {
    /// Sum of `k` independent unit exponentials.
    ErlangK(u64),
    StdNormal,
    /// Limit of the normalized k-th largest of `n` pair waiting times.
    GumbelKth(u64),
}

impl LimitLaw {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            LimitLaw::ErlangK(k) => cdf_erlang(k, x),
            LimitLaw::StdNormal => cdf_std_normal(x),
            LimitLaw::GumbelKth(k) => cdf_gumbel_kth(k, x),
        }
    }
}

impl fmt::Display for LimitLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitLaw::ErlangK(k) => write!(f, "erlang({k})"),
            LimitLaw::StdNormal => f.write_str("normal"),
            LimitLaw::GumbelKth(k) => write!(f, "gumbel({k})"),
        }
    }
}

// P{Poisson(mean) <= k - 1}, summed from the terms themselves
fn poisson_lower(mean: f64, k: u64) -> f64 {
    if mean == 0.0 {
        return 1.0;
    }
    if !mean.is_finite() {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_fact = 0.0;
    let mut total = 0.0;
    for s in 0..k {
        if s > 0 {
            ln_fact += (s as f64).ln();
        }
        total += (-mean + s as f64 * ln_mean - ln_fact).exp();
    }
    total
}

// P{Poisson(mean) >= k}; accurate when mean is small relative to k
fn poisson_upper(mean: f64, k: u64) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_fact: f64 = (1..=k).map(|s| (s as f64).ln()).sum();
    let mut term = (-mean + k as f64 * mean.ln() - ln_fact).exp();
    let mut total = 0.0;
    let mut s = k;
    while term > total * 1e-17 {
        total += term;
        s += 1;
        term *= mean / s as f64;
    }
    total
}

/// `exp(-exp(-x)) * sum_{s<k} exp(-s x) / s!`.
pub fn cdf_gumbel_kth(k: u64, x: f64) -> f64 {
    assert!(k >= 1, "k must be positive");
    let mean = (-x).exp();
    if mean < k as f64 {
        1.0 - poisson_upper(mean, k)
    } else {
        poisson_lower(mean, k)
    }
}

/// `(1 + t^2)^(-k/2) exp(i k atan t)`.
pub fn cf_limit_fixed_k(k: u64, t: f64) -> Complex64 {
    let kf = k as f64;
    Complex64::from_polar((1.0 + t * t).powf(-kf / 2.0), kf * t.atan())
}

/// `1 - exp(-x) sum_{s<k} x^s / s!` for `x >= 0`, zero below.
pub fn cdf_erlang(k: u64, x: f64) -> f64 {
    assert!(k >= 1, "k must be positive");
    if !(x > 0.0) {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x < k as f64 {
        poisson_upper(x, k)
    } else {
        1.0 - poisson_lower(x, k)
    }
}

/// Standard normal distribution function.
pub fn cdf_std_normal(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Second-order asymptote of `P{Y_nj > n^2 (x + ln n)}`:
/// `exp(-jx) n^-j (1 + j (x + ln n)/n)`.
pub fn tail_asym_y(n: u64, j: u64, x: f64) -> f64 {
    let (nf, jf) = (n as f64, j as f64);
    let level = x + nf.ln();
    (-jf * level).exp() * (1.0 + jf * level / nf)
}

/// `floor(n^2 (x + ln n))`, the discretized extreme-value threshold.
pub fn threshold_index(n: u64, x: f64) -> Result<u64> {
    PairModel::new(n)?;
    let nf = n as f64;
    let u = nf * nf * (x + nf.ln());
    if !(u >= 1.0) || !u.is_finite() {
        return domain(format!(
            "threshold n^2 (x + ln n) = {u} is below 1 for n = {n}, x = {x}"
        ));
    }
    Ok(u.floor() as u64)
}

/// `n P{X_n > u_n}`, which tends to `exp(-x)`.
pub fn scaled_tail_limit(n: u64, x: f64) -> Result<f64> {
    let m = threshold_index(n, x)?;
    Ok(n as f64 * tail_x(n, m)?)
}

/// `n (floor(n/k) - 1) P{Y_n2 > u_n}`, the sum in the anti-clustering
/// condition; tends to `exp(-2x)/k`.
pub fn dprime_diagnostic(n: u64, k: u64, x: f64) -> Result<f64> {
    if k == 0 {
        return domain("block count k must be positive");
    }
    let m = threshold_index(n, x)?;
    let pairs = (n / k).saturating_sub(1) as f64;
    Ok(n as f64 * pairs * tail_y(n, 2, m)?)
}

/// Result of comparing a sample with a limit law.
#[derive(Debug, Clone, PartialEq)]
pub struct KsReport {
    pub distance: f64,
    pub sample_size: usize,
    pub law: LimitLaw,
    pub normalization: Option<Normalization>,
    pub master_seed: Option<u64>,
}

/// Sup distance between the empirical distribution of sorted `values` and `cdf`.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let len = values.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / len - f;
        let below = f - i as f64 / len;
        sup = sup.max(above.abs()).max(below.abs());
    }
    Ok(sup)
}

pub fn ks_distance(sample: &EmpiricalSample, law: LimitLaw) -> Result<KsReport> {
    let distance = ks_statistic(sample.values(), |x| law.cdf(x))?;
    Ok(KsReport {
        distance,
        sample_size: sample.len(),
        law,
        normalization: sample.normalization,
        master_seed: sample.config.as_ref().map(|c| c.master_seed),
    })
}

/// Two-sample statistic `sup |F_a - F_b|` for sorted inputs; ties are
/// stepped over together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut k) = (0, 0);
    let mut sup: f64 = 0.0;
    while i < a.len() && k < b.len() {
        let x = a[i].min(b[k]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while k < b.len() && b[k] <= x {
            k += 1;
        }
        sup = sup.max((i as f64 / na - k as f64 / nb).abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::tail_y;
    use std::f64::consts::{E, FRAC_PI_4, LN_2};

    #[test]
    fn normalization_examples() {
        let p = normalization_for(100, 50, Regime::Proportional(0.5)).unwrap();
        assert!((p.center - 6931.471805599453).abs() < 1e-8);
        assert!((p.scale - 1000.0).abs() < 1e-9);
        for n in [2u64, 7, 100, 12345] {
            let m = normalization_for(n, n, Regime::FullMax).unwrap();
            let nf = n as f64;
            assert_eq!(m.center, nf * nf * nf.ln());
            assert_eq!(m.scale, nf * nf);
            let f = normalization_for(n, 2.min(n), Regime::FixedK(2.min(n))).unwrap();
            assert_eq!((f.center, f.scale), (0.0, nf));
        }
        let s = normalization_for(10_000, 100, Regime::Sublinear).unwrap();
        assert!((s.scale - 1e5).abs() < 1e-6);
        let c = normalization_for(100, 96, Regime::NearComplete).unwrap();
        assert!((c.scale - 5000.0).abs() < 1e-9);
        let k = normalization_for(50, 48, Regime::KthMax(3)).unwrap();
        assert_eq!(k.scale, 2500.0);
    }

    #[test]
    fn normalization_rejects_inconsistent_regimes() {
        let bad = [
            (10, 3, Regime::FixedK(2)),
            (10, 9, Regime::FullMax),
            (10, 9, Regime::KthMax(3)),
            (10, 10, Regime::Sublinear),
            (10, 0, Regime::NearComplete),
            (10, 5, Regime::Proportional(1.0)),
            (10, 5, Regime::Proportional(0.0)),
            (10, 0, Regime::KthMax(0)),
        ];
        for (n, a, r) in bad {
            assert!(
                matches!(
                    normalization_for(n, a, r),
                    Err(Error::InconsistentRegime { .. })
                ),
                "{r}"
            );
        }
        assert!(matches!(
            normalization_for(1, 1, Regime::FullMax),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn normalization_scale_positive() {
        for n in 2..60u64 {
            for a in 1..n {
                for r in [
                    Regime::Sublinear,
                    Regime::Proportional(0.5),
                    Regime::NearComplete,
                ] {
                    assert!(normalization_for(n, a, r).unwrap().scale > 0.0);
                }
                assert!(normalization_for(n, a, Regime::FixedK(a)).unwrap().scale > 0.0);
                assert!(
                    normalization_for(n, a, Regime::KthMax(n - a + 1))
                        .unwrap()
                        .scale
                        > 0.0
                );
                assert!(exact_normalization(n, a, Regime::Sublinear).unwrap().scale > 0.0);
            }
        }
    }

    #[test]
    fn gumbel_examples() {
        assert!((cdf_gumbel_kth(1, 0.0) - 1.0 / E).abs() < 1e-15);
        assert!((cdf_gumbel_kth(2, 0.0) - 2.0 / E).abs() < 1e-15);
        for k in 1..=5 {
            assert!((cdf_gumbel_kth(k, 50.0) - 1.0).abs() < 1e-15);
            assert_eq!(cdf_gumbel_kth(k, -800.0), 0.0);
        }
    }

    #[test]
    fn gumbel_monotone_and_ordered() {
        for k in 1..=5u64 {
            let mut prev = 0.0;
            for i in 0..1000 {
                let x = -5.0 + 20.0 * i as f64 / 999.0;
                let f = cdf_gumbel_kth(k, x);
                assert!(f >= prev);
                assert!(cdf_gumbel_kth(k + 1, x) >= f);
                prev = f;
            }
        }
    }

    #[test]
    fn fixed_k_cf_examples() {
        assert_eq!(cf_limit_fixed_k(1, 0.0), Complex64::new(1.0, 0.0));
        let v = cf_limit_fixed_k(1, 1.0);
        assert!((v.norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((v.arg() - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn fixed_k_cf_is_erlang_cf() {
        for k in 1..=5u64 {
            for i in 0..=4000 {
                let t = -20.0 + 0.01 * i as f64;
                let erlang = Complex64::new(1.0, -t).powi(-(k as i32));
                assert!((cf_limit_fixed_k(k, t) - erlang).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn erlang_examples() {
        assert!((cdf_erlang(1, LN_2) - 0.5).abs() < 1e-15);
        assert_eq!(cdf_erlang(2, 0.0), 0.0);
        assert_eq!(cdf_erlang(2, -1.0), 0.0);
        // both summation branches agree around x = k
        for k in 1..=6u64 {
            let kf = k as f64;
            let below = cdf_erlang(k, kf * (1.0 - 1e-12));
            let above = cdf_erlang(k, kf);
            assert!((below - above).abs() < 1e-11);
        }
    }

    // Gil-Pelaez inversion: F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} f(t)) / t dt
    fn invert_cf(k: u64, x: f64) -> f64 {
        let (upper, steps) = (2000.0, 2_000_000usize);
        let h = upper / steps as f64;
        let integrand = |t: f64| {
            if t == 0.0 {
                // limit of Im(...)/t at zero: E[Y] - x
                return k as f64 - x;
            }
            (Complex64::from_polar(1.0, -t * x) * cf_limit_fixed_k(k, t)).im / t
        };
        let mut sum = integrand(0.0) + integrand(upper);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * integrand(i as f64 * h);
        }
        0.5 - sum * h / 3.0 / std::f64::consts::PI
    }

    #[test]
    fn erlang_matches_cf_inversion() {
        for x in [1.0, 3.0, 5.0] {
            let inv = invert_cf(3, x);
            assert!((inv - cdf_erlang(3, x)).abs() < 1e-3, "x={x}: {inv}");
        }
    }

    #[test]
    fn normal_cdf_reference_values() {
        // reference values from 90-digit evaluation
        let refs = [
            (-1.96, 0.024997895148220436),
            (1.0, 0.8413447460685429),
            (-5.0, 2.866515718791939e-7),
            (3.3, 0.9995165758576162),
            (-0.5, 0.3085375387259869),
        ];
        for (x, want) in refs {
            assert!((cdf_std_normal(x) - want).abs() < 1e-12, "x={x}");
        }
        assert_eq!(cdf_std_normal(0.0), 0.5);
        assert_eq!(cdf_std_normal(f64::INFINITY), 1.0);
        assert_eq!(cdf_std_normal(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn monotone_cdfs() {
        let mut prev = (0.0, 0.0);
        for i in 0..1000 {
            let x = -10.0 + 0.03 * i as f64;
            let cur = (cdf_std_normal(x), cdf_erlang(3, x));
            assert!(cur.0 >= prev.0 && cur.1 >= prev.1);
            prev = cur;
        }
        assert!(cdf_std_normal(-40.0) < 1e-300);
        assert!((cdf_erlang(3, 200.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tail_asym_examples() {
        let n = 1000u64;
        let want = 1e-6 * (1.0 + 2.0 * (1000f64).ln() / 1000.0);
        assert!((tail_asym_y(n, 2, 0.0) - want).abs() < 1e-18);
        for x in [-1.0f64, 0.0, 2.0] {
            let lead = (-x).exp() / 1e6;
            assert!((tail_asym_y(1_000_000, 1, x) / lead - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn tail_asym_ratio_tends_to_one() {
        for j in 1..=3u64 {
            for x in [0.0, 1.0] {
                let errs: Vec<f64> = [100u64, 1000, 10_000]
                    .iter()
                    .map(|&n| {
                        let m = threshold_index(n, x).unwrap();
                        (tail_y(n, j, m).unwrap() / tail_asym_y(n, j, x) - 1.0).abs()
                    })
                    .collect();
                assert!(errs[2] < errs[0] && errs[2] < 1e-3, "j={j} x={x}: {errs:?}");
            }
        }
    }

    #[test]
    fn scaled_tail_examples() {
        assert!((scaled_tail_limit(10_000, 0.0).unwrap() - 1.0).abs() < 0.05);
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let v = scaled_tail_limit(50, -1.0 + 0.1 * i as f64).unwrap();
            assert!(v <= prev);
            prev = v;
        }
        let errs: Vec<f64> = [100u64, 1000, 10_000]
            .iter()
            .map(|&n| (scaled_tail_limit(n, 1.0).unwrap() / (-1f64).exp() - 1.0).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(matches!(scaled_tail_limit(10, -3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn dprime_examples() {
        let v = dprime_diagnostic(1000, 10, 0.0).unwrap();
        assert!((v - 0.1).abs() < 0.01, "{v}");
        for k in [5u64, 10, 20] {
            let v = dprime_diagnostic(1000, k, 0.0).unwrap() * k as f64;
            assert!((v - 1.0).abs() < 0.1);
        }
        let v = dprime_diagnostic(100, 5, 1.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert_eq!(dprime_diagnostic(10, 20, 0.0).unwrap(), 0.0);
        assert!(matches!(
            dprime_diagnostic(10, 0, 0.0),
            Err(Error::Domain(_))
        ));
    }

    fn quantile(law: LimitLaw, p: f64) -> f64 {
        let (mut lo, mut hi) = (-50.0, 100.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if law.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn ks_examples() {
        for law in [
            LimitLaw::StdNormal,
            LimitLaw::GumbelKth(2),
            LimitLaw::ErlangK(3),
        ] {
            let values: Vec<f64> = (0..1000)
                .map(|i| quantile(law, (i as f64 + 0.5) / 1000.0))
                .collect();
            let r = ks_distance(&EmpiricalSample::from_values(values), law).unwrap();
            assert!(r.distance <= 1e-3 + 1e-12, "{law}: {}", r.distance);
            assert_eq!(r.sample_size, 1000);
            assert_eq!(r.master_seed, None);
        }
        let median = EmpiricalSample::from_values(vec![0.0]);
        assert!((ks_distance(&median, LimitLaw::StdNormal).unwrap().distance - 0.5).abs() < 1e-15);
        let constant = EmpiricalSample::from_values(vec![3.0; 50]);
        assert!(
            ks_distance(&constant, LimitLaw::StdNormal)
                .unwrap()
                .distance
                >= 0.5
        );
        let empty = EmpiricalSample::from_values(vec![]);
        assert_eq!(
            ks_distance(&empty, LimitLaw::StdNormal),
            Err(Error::EmptySample)
        );
    }

    #[test]
    fn two_sample_handles_ties() {
        let a = [1.0, 1.0, 2.0, 3.0];
        let b = [1.0, 2.0, 2.0, 3.0];
        assert!((ks_two_sample(&a, &b).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0], &[1.0]).unwrap(), 1.0);
        assert_eq!(ks_two_sample(&[], &[1.0]), Err(Error::EmptySample));
    }
}
