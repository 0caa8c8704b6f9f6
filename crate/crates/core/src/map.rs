//! The map `T(x) = x/2` (x even), `(3x+1)/2` (x odd), its trajectories,
//! stopping times and parity vectors. All arithmetic is exact.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ladder;
use crate::parity::ParityVector;

pub fn t_step(x: &BigUint) -> BigUint {
    if x.is_even() {
        x >> 1u32
    } else {
        (x * 3u32 + 1u32) >> 1u32
    }
}

fn t_step_in_place(x: &mut BigUint) {
    if x.is_odd() {
        *x *= 3u32;
        *x += 1u32;
    }
    *x >>= 1u32;
}

/// `(T^0(x), ..., T^a(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub start: BigUint,
    pub terms: Vec<BigUint>,
}

impl Trajectory {
    pub fn last(&self) -> &BigUint {
        self.terms.last().expect("trajectory always holds T^0")
    }

    pub fn parities(&self) -> ParityVector {
        self.terms.iter().map(|t| t.is_odd()).collect()
    }
}

pub fn trajectory(x: &BigUint, steps: u32) -> Trajectory {
    let mut terms = Vec::with_capacity(steps as usize + 1);
    let mut y = x.clone();
    terms.push(y.clone());
    for _ in 0..steps {
        t_step_in_place(&mut y);
        terms.push(y.clone());
    }
    Trajectory {
        start: x.clone(),
        terms,
    }
}

/// Outcome of a budgeted stopping-time search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StoppingTime {
    /// Least `s` with `T^s(x) < x`.
    Found(u32),
    /// No drop below `x` within the step budget.
    Unknown,
}

impl StoppingTime {
    pub fn found(self) -> Option<u32> {
        match self {
            StoppingTime::Found(s) => Some(s),
            StoppingTime::Unknown => None,
        }
    }
}

/// Least `s <= cap` with `T^s(x) < x`. Rejects `x < 2`.
pub fn stopping_time(x: &BigUint, cap: u32) -> Result<StoppingTime> {
    if *x < BigUint::from(2u32) {
        return Err(Error::StoppingTimeUndefined(x.clone()));
    }
    let mut y = x.clone();
    for s in 1..=cap {
        t_step_in_place(&mut y);
        if y < *x {
            return Ok(StoppingTime::Found(s));
        }
    }
    Ok(StoppingTime::Unknown)
}

/// Same contract as [`stopping_time`], iterating in machine words and
/// continuing in big integers only if `3y+1` would overflow.
pub fn stopping_time_u64(x: u64, cap: u32) -> Result<StoppingTime> {
    if x < 2 {
        return Err(Error::StoppingTimeUndefined(BigUint::from(x)));
    }
    let mut y = x;
    for s in 1..=cap {
        if y & 1 == 0 {
            y >>= 1;
        } else {
            match y.checked_mul(3).and_then(|v| v.checked_add(1)) {
                Some(v) => y = v >> 1,
                None => {
                    let mut big = BigUint::from(y) * 3u32 + 1u32;
                    big >>= 1u32;
                    let xb = BigUint::from(x);
                    if big < xb {
                        return Ok(StoppingTime::Found(s));
                    }
                    for s2 in s + 1..=cap {
                        t_step_in_place(&mut big);
                        if big < xb {
                            return Ok(StoppingTime::Found(s2));
                        }
                    }
                    return Ok(StoppingTime::Unknown);
                }
            }
        }
        if y < x {
            return Ok(StoppingTime::Found(s));
        }
    }
    Ok(StoppingTime::Unknown)
}

/// Parities of `T^0(x) ... T^kappa(n)(x)`.
pub fn parity_vector_of(x: &BigUint, n: u32) -> ParityVector {
    let len = ladder::kappa(n) as usize + 1;
    let mut v = ParityVector::with_len(len);
    let mut y = x.clone();
    for s in 0..len {
        v.set(s, y.is_odd());
        if s + 1 < len {
            t_step_in_place(&mut y);
        }
    }
    v
}

/// The residue class `r (mod 2^k)`, with `0 <= r < 2^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueClass {
    r: BigUint,
    k: u32,
}

impl ResidueClass {
    pub fn new(r: BigUint, k: u32) -> Result<Self> {
        if k == 0 || r.bits() > u64::from(k) {
            return Err(Error::Inconsistent(format!(
                "residue {r} is not canonical modulo 2^{k}"
            )));
        }
        Ok(Self { r, k })
    }

    pub fn residue(&self) -> &BigUint {
        &self.r
    }

    pub fn bits(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::one() << self.k
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        let mask = self.modulus() - 1u32;
        (x & mask) == self.r
    }
}

/// Image of a residue class after `k` steps: `T^k(r + m 2^k) = q + m 3^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardImage {
    pub q: BigUint,
    /// Odd terms among `T^0(r) ... T^(k-1)(r)`.
    pub odd_steps: u32,
}

pub fn forward_map(r: &BigUint, k: u32) -> ForwardImage {
    let mut y = r.clone();
    let mut odd = 0;
    for _ in 0..k {
        if y.is_odd() {
            odd += 1;
        }
        t_step_in_place(&mut y);
    }
    ForwardImage { q: y, odd_steps: odd }
}

impl ForwardImage {
    /// `T^k` evaluated at `r + m 2^k` through the affine shift rule.
    pub fn shifted(&self, m: &BigUint) -> BigUint {
        if m.is_zero() {
            return self.q.clone();
        }
        &self.q + m * BigUint::from(3u32).pow(self.odd_steps)
    }
}
