//! Ground truth by brute force.
//!
//! [`enumerate_laws`] walks every draw sequence of a fixed length and counts
//! events; [`recurrence_pmf_y`] evaluates the word-counting recurrence. Neither
//! touches the closed forms in [`crate::distributions`].

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::combinatorics::RunCountIter;
use crate::distributions::{EXACT_MAX_K, EXACT_MAX_N};
use crate::error::{check_pair_params, Error, Result};

pub const ENUMERATION_MAX_N: u64 = 4;
pub const ENUMERATION_MAX_LEN: usize = 12;

/// Exact laws read off all `n^len` sequences of draws.
///
/// Events that have not happened within `len` draws are reported as the
/// residual mass `P{T > len}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedLaws {
    pub n: u64,
    pub len: usize,
    // x[symbol][k] for k in 0..=len
    x: Vec<Vec<BigRational>>,
    x_beyond: Vec<BigRational>,
    // indexed by subset bitmask
    y: Vec<Vec<BigRational>>,
    y_beyond: Vec<BigRational>,
    joint_tail: Vec<Vec<BigRational>>,
}

impl EnumeratedLaws {
    /// `P{X_n,symbol = k}` for `symbol` in `0..n`.
    pub fn x_pmf(&self, symbol: usize, k: usize) -> &BigRational {
        &self.x[symbol][k]
    }

    pub fn x_beyond(&self, symbol: usize) -> &BigRational {
        &self.x_beyond[symbol]
    }

    /// `P{Y~_A = k}` where bit `i` of `mask` marks symbol `i` as a member of `A`.
    pub fn y_pmf(&self, mask: usize, k: usize) -> &BigRational {
        &self.y[mask][k]
    }

    pub fn y_beyond(&self, mask: usize) -> &BigRational {
        &self.y_beyond[mask]
    }

    /// `P{Y~_A > m}` for `m <= len`.
    pub fn y_tail(&self, mask: usize, m: usize) -> BigRational {
        self.y[mask][m + 1..].iter().sum::<BigRational>() + &self.y_beyond[mask]
    }

    /// `P{X_n,i > m for every i in A}` for `m <= len`.
    pub fn joint_tail(&self, mask: usize, m: usize) -> &BigRational {
        &self.joint_tail[mask][m]
    }
}

#[derive(Clone)]
struct Counts {
    x: Vec<Vec<u64>>,
    y: Vec<Vec<u64>>,
    joint_min: Vec<Vec<u64>>,
}

impl Counts {
    // index len + 1 holds "not within the horizon"
    fn new(n: usize, len: usize) -> Self {
        let masks = 1usize << n;
        Self {
            x: vec![vec![0; len + 2]; n],
            y: vec![vec![0; len + 2]; masks],
            joint_min: vec![vec![0; len + 2]; masks],
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        for (dst, src) in [
            (&mut self.x, &other.x),
            (&mut self.y, &other.y),
            (&mut self.joint_min, &other.joint_min),
        ] {
            for (d, s) in dst.iter_mut().zip(src) {
                for (a, b) in d.iter_mut().zip(s) {
                    *a += b;
                }
            }
        }
        self
    }

    fn record(&mut self, word: &[u8], n: usize, events: &mut Vec<(usize, u8)>) {
        let beyond = word.len() + 1;
        events.clear();
        let mut first = vec![beyond; n];
        for k in 1..word.len() {
            if word[k - 1] == word[k] {
                let sym = word[k] as usize;
                // draws are numbered from 1, so this pair completes at draw k + 1
                events.push((k + 1, word[k]));
                if first[sym] == beyond {
                    first[sym] = k + 1;
                }
            }
        }
        for (sym, &t) in first.iter().enumerate() {
            self.x[sym][t] += 1;
        }
        for mask in 1..(1usize << n) {
            let hit = events
                .iter()
                .find(|(_, sym)| mask >> *sym & 1 == 1)
                .map_or(beyond, |&(k, _)| k);
            self.y[mask][hit] += 1;
            let min = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| first[i])
                .min()
                .unwrap_or(beyond);
            self.joint_min[mask][min] += 1;
        }
    }
}

fn count_with_prefix(n: usize, len: usize, head: u8) -> Counts {
    let mut counts = Counts::new(n, len);
    let mut word = vec![0u8; len];
    word[0] = head;
    let mut events = Vec::with_capacity(len);
    loop {
        counts.record(&word, n, &mut events);
        // odometer over positions 1..len
        let mut pos = len;
        loop {
            if pos == 1 {
                return counts;
            }
            pos -= 1;
            word[pos] += 1;
            if (word[pos] as usize) < n {
                break;
            }
            word[pos] = 0;
        }
    }
}

/// Exhaustive enumeration of all draw sequences of length `len` over `n`
/// symbols, for `2 <= n <= 4` and `1 <= len <= 12`.
pub fn enumerate_laws(n: u64, len: usize) -> Result<EnumeratedLaws> {
    check_pair_params(n, 1)?;
    if n > ENUMERATION_MAX_N || len > ENUMERATION_MAX_LEN {
        return Err(Error::SizeGuard(format!(
            "enumeration limited to n <= {ENUMERATION_MAX_N}, len <= {ENUMERATION_MAX_LEN}; got n = {n}, len = {len}"
        )));
    }
    if len == 0 {
        return Err(Error::Domain(
            "enumeration horizon must be at least 1".into(),
        ));
    }
    let nu = n as usize;
    let counts = (0..nu as u8)
        .into_par_iter()
        .map(|head| count_with_prefix(nu, len, head))
        .reduce(|| Counts::new(nu, len), Counts::merge);

    let total = BigInt::from(n).pow(len as u32);
    let to_prob = |rows: Vec<Vec<u64>>| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut probs = Vec::with_capacity(rows.len());
        let mut beyond = Vec::with_capacity(rows.len());
        for row in rows {
            let mut p: Vec<BigRational> = row
                .into_iter()
                .map(|c| BigRational::new(BigInt::from(c), total.clone()))
                .collect();
            beyond.push(p.pop().expect("beyond slot"));
            probs.push(p);
        }
        (probs, beyond)
    };
    let (x, x_beyond) = to_prob(counts.x);
    let (y, y_beyond) = to_prob(counts.y);
    let (min_pmf, min_beyond) = to_prob(counts.joint_min);
    let joint_tail = min_pmf
        .iter()
        .zip(&min_beyond)
        .map(|(row, beyond)| {
            (0..=len)
                .map(|m| row[m + 1..].iter().sum::<BigRational>() + beyond)
                .collect()
        })
        .collect();
    Ok(EnumeratedLaws {
        n,
        len,
        x,
        x_beyond,
        y,
        y_beyond,
        joint_tail,
    })
}

/// `P{Y_nj = k} = b_(k-1) / n^k` for `k = 2..=kmax`, with `b` from the
/// word-counting recurrence.
pub fn recurrence_pmf_y(n: u64, j: u64, kmax: u64) -> Result<Vec<BigRational>> {
    check_pair_params(n, j)?;
    if kmax < 2 {
        return Err(Error::Domain(format!("kmax = {kmax} must be at least 2")));
    }
    if n > EXACT_MAX_N || kmax > EXACT_MAX_K {
        return Err(Error::SizeGuard(format!(
            "recurrence oracle limited to n <= {EXACT_MAX_N}, kmax <= {EXACT_MAX_K}"
        )));
    }
    let nb = BigInt::from(n);
    let mut denom = nb.clone();
    let mut out = Vec::with_capacity(kmax as usize - 1);
    // b_l for l = 1.. pairs with k = l + 1
    for (_, b) in RunCountIter::new(n, j)?.skip(1).take(kmax as usize - 1) {
        denom *= &nb;
        out.push(BigRational::new(BigInt::from(b), denom.clone()));
    }
    Ok(out)
}
