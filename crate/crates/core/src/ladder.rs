//! Per-level constants `d(n)`, `kappa(n)` and `sigma_n`, computed exactly.
//!
//! `kappa(n)` is the greatest `k` with `2^k < 3^n`. Since `3^n` is never a
//! power of two for `n >= 1`, that is exactly one less than the bit length of
//! `3^n`, so every constant here reduces to big-integer bit counting and no
//! logarithm is ever evaluated in floating point.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;

/// Exact constants for one level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderRow {
    pub n: u32,
    /// Number of powers of two strictly between `3^(n-1)` and `3^n`; 1 or 2.
    pub d: u32,
    pub kappa: u32,
    /// The admissible stopping time for `n` odd steps, `kappa(n+1) + 1`.
    pub sigma: u32,
}

struct Memo {
    kappas: Vec<u32>,
    pow3: BigUint,
}

impl Memo {
    fn extend_to(&mut self, n: u32) {
        while self.kappas.len() <= n as usize {
            self.pow3 *= 3u32;
            self.kappas.push((self.pow3.bits() - 1) as u32);
        }
    }
}

fn memo() -> &'static RwLock<Memo> {
    static MEMO: OnceLock<RwLock<Memo>> = OnceLock::new();
    MEMO.get_or_init(|| {
        // kappa(0) = 0 so that d(1) = 1.
        RwLock::new(Memo {
            kappas: vec![0],
            pow3: BigUint::from(1u32),
        })
    })
}

/// Greatest `k` with `2^k < 3^n`; `kappa(0)` is defined as 0.
pub fn kappa(n: u32) -> u32 {
    {
        let m = memo().read().expect("ladder memo poisoned");
        if let Some(&k) = m.kappas.get(n as usize) {
            return k;
        }
    }
    let mut m = memo().write().expect("ladder memo poisoned");
    m.extend_to(n);
    m.kappas[n as usize]
}

/// `sigma_n = kappa(n+1) + 1 = floor(1 + (n+1) log2 3)`.
pub fn sigma_n(n: u32) -> u32 {
    kappa(n + 1) + 1
}

/// `d(n) = kappa(n) - kappa(n-1)`, always 1 or 2 for `n >= 1`.
pub fn d(n: u32) -> u32 {
    assert!(n >= 1, "d(n) is defined for n >= 1");
    kappa(n) - kappa(n - 1)
}

pub fn row(n: u32) -> LadderRow {
    LadderRow {
        n,
        d: d(n),
        kappa: kappa(n),
        sigma: sigma_n(n),
    }
}

/// Rows `1..=max_n`.
pub fn rows(max_n: u32) -> Vec<LadderRow> {
    kappa(max_n + 1);
    (1..=max_n).map(row).collect()
}

/// `floor(1 + k log3 2)`: the least level `t` with `3^t > 2^k`.
///
/// This is the lowest odd-step count a residue modulo `2^k` can carry and
/// still be unstopped after `k` steps.
pub fn first_surviving_level(k: u32) -> u32 {
    // For t >= 1, 3^t > 2^k  <=>  kappa(t) >= k. The answer lies in [1, k+1].
    let (mut lo, mut hi) = (1u32, k + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if kappa(mid) >= k {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn kappa_by_comparison(n: u32) -> u32 {
        let p3 = BigUint::from(3u32).pow(n);
        let mut k = 0u32;
        while (BigUint::one() << (k + 1)) < p3 {
            k += 1;
        }
        k
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(1), 1);
        assert_eq!(kappa(3), 4);
        assert_eq!(kappa(5), 7);
        assert_eq!(kappa(0), 0);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_n(1), 4);
        assert_eq!(sigma_n(3), 7);
        assert_eq!(sigma_n(4), 8);
    }

    #[test]
    fn d_examples() {
        assert_eq!(d(1), 1);
        assert_eq!(d(2), 2);
        assert_eq!(d(7), 2);
        assert_eq!(d(8), 1);
    }

    #[test]
    fn kappa_matches_direct_comparison() {
        for n in 1..200 {
            assert_eq!(kappa(n), kappa_by_comparison(n), "n={n}");
        }
    }

    #[test]
    fn telescoping_sum_of_d() {
        let mut acc = 0;
        for n in 1..=10_000 {
            let dn = d(n);
            assert!(dn == 1 || dn == 2);
            acc += dn;
            assert_eq!(acc, kappa(n));
        }
    }

    #[test]
    fn first_surviving_level_small() {
        // 1, 1, 2, 2, 3, 4, 4 for k = 0..6
        let got: Vec<u32> = (0..7).map(first_surviving_level).collect();
        assert_eq!(got, vec![1, 1, 2, 2, 3, 4, 4]);
        for k in 0..300u32 {
            let t = first_surviving_level(k);
            let two_k = BigUint::one() << k;
            assert!(BigUint::from(3u32).pow(t) > two_k);
            assert!(BigUint::from(3u32).pow(t - 1) <= two_k);
        }
    }

    #[test]
    fn concurrent_readers_agree() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || (1..2000 + i * 100).map(kappa).collect::<Vec<_>>()))
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for r in &results {
            assert_eq!(&r[..1999], &results[0][..1999]);
        }
    }
}
