//! Rules `n -> a_n` for convergence studies. A regime describes a whole
//! sequence, so the sequence rule rather than a single `a` is the input.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ARule {
    /// `a_n = k`
    Const(u64),
    /// `a_n = floor(n * num / den)`
    FloorFrac(u64, u64),
    /// `a_n = n - m`
    NMinus(u64),
    /// `a_n = floor(sqrt(n))`
    FloorSqrt,
    /// `a_n = n - floor(sqrt(n))`
    NMinusSqrt,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl ARule {
    pub fn apply(&self, n: u64) -> Result<u64, String> {
        let a = match *self {
            ARule::Const(k) => k,
            ARule::FloorFrac(p, q) => (u128::from(n) * u128::from(p) / u128::from(q)) as u64,
            ARule::NMinus(m) => n
                .checked_sub(m)
                .ok_or_else(|| format!("rule {self} is negative at n = {n}"))?,
            ARule::FloorSqrt => isqrt(n),
            ARule::NMinusSqrt => n - isqrt(n),
        };
        if a == 0 || a > n {
            return Err(format!(
                "rule {self} gives a = {a} outside 1..={n} at n = {n}"
            ));
        }
        Ok(a)
    }

    /// The limit of `a_n / n` when it lies strictly between 0 and 1.
    pub fn proportion(&self) -> Option<f64> {
        match *self {
            ARule::FloorFrac(p, q) if p > 0 && p < q => Some(p as f64 / q as f64),
            _ => None,
        }
    }
}

impl fmt::Display for ARule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ARule::Const(k) => write!(f, "k:{k}"),
            ARule::FloorFrac(p, q) => write!(f, "floor-frac:{p}/{q}"),
            ARule::NMinus(m) => write!(f, "n-minus:{m}"),
            ARule::FloorSqrt => f.write_str("floor-sqrt"),
            ARule::NMinusSqrt => f.write_str("n-minus-sqrt"),
        }
    }
}

impl FromStr for ARule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad integer {v:?} in a-rule: {e}"))
        };
        match s.split_once(':') {
            Some(("k", v)) => Ok(ARule::Const(int(v)?)),
            Some(("n-minus", v)) => Ok(ARule::NMinus(int(v)?)),
            Some(("floor-frac", v)) => {
                let (p, q) = v.split_once('/').ok_or_else(|| format!("floor-frac needs num/den, got {v:?}"))?;
                let (p, q) = (int(p)?, int(q)?);
                if q == 0 {
                    return Err("floor-frac denominator must be positive".into());
                }
                Ok(ARule::FloorFrac(p, q))
            }
            None if s == "floor-sqrt" => Ok(ARule::FloorSqrt),
            None if s == "n-minus-sqrt" => Ok(ARule::NMinusSqrt),
            _ => Err(format!(
                "unknown a-rule {s:?}; expected k:<int>, floor-frac:<num>/<den>, n-minus:<int>, floor-sqrt or n-minus-sqrt"
            )),
        }
    }
}
