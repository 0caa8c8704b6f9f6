//! One linear Diophantine equation per parity vector.
//!
//! For a vector with odd positions `a_1 < ... < a_(n+1)` the stopping term is
//! `T^sigma_n(x) = (3^(n+1) x + S) / 2^sigma_n` with
//! `S = sum 3^(n+1-i) 2^(a_i)`. The unique odd `x < 2^sigma_n` making that
//! integral is found by inverting `3^(n+1)` modulo `2^sigma_n`.
//!
//! The recurrences between neighbouring solutions in the tree (the `lambda`
//! step-1 rule, the `delta` step-2 rule, the last-vector doubling rule) live
//! here as validators.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ladder;
use crate::map::{self, StoppingTime};
use crate::parity::ParityVector;
use crate::tree::{self, Parent, VSetEntry};

/// Odd positions of a well-formed vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaProfile {
    pub n: u32,
    pub alphas: Vec<u32>,
}

fn malformed(v: &ParityVector, reason: &'static str) -> Error {
    Error::MalformedVector {
        vector: v.to_string(),
        reason,
    }
}

/// Level `n` of a vector with `n+1` ones, leading `1,1` and length
/// `kappa(n)+1`.
pub fn level_of(v: &ParityVector) -> Result<u32> {
    if v.len() < 2 || !v.get(0) || !v.get(1) {
        return Err(malformed(v, "must start with 1, 1"));
    }
    let n = v.count_ones() as u32 - 1;
    if v.len() != ladder::kappa(n) as usize + 1 {
        return Err(malformed(v, "length must be kappa(n) + 1 for n + 1 ones"));
    }
    Ok(n)
}

pub fn alphas(v: &ParityVector) -> Result<AlphaProfile> {
    let n = level_of(v)?;
    Ok(AlphaProfile {
        n,
        alphas: v.ones().map(|i| i as u32).collect(),
    })
}

impl AlphaProfile {
    /// `S = sum 3^(n+1-i) 2^(a_i)`, accumulated Horner-style.
    pub fn offset(&self) -> BigUint {
        self.alphas
            .iter()
            .fold(BigUint::zero(), |acc, &a| acc * 3u32 + (BigUint::one() << a))
    }

    pub fn sigma(&self) -> u32 {
        ladder::sigma_n(self.n)
    }

    fn numerator(&self, x: &BigUint) -> BigUint {
        BigUint::from(3u32).pow(self.n + 1) * x + self.offset()
    }
}

/// `T^sigma_n(x)` by the closed form. `x` must follow `v`.
pub fn stopping_term(v: &ParityVector, x: &BigUint) -> Result<BigUint> {
    let profile = alphas(v)?;
    if map::parity_vector_of(x, profile.n) != *v {
        return Err(Error::ParityMismatch {
            x: x.clone(),
            vector: v.to_string(),
        });
    }
    let (y, rem) = profile.numerator(x).div_rem(&(BigUint::one() << profile.sigma()));
    if !rem.is_zero() {
        return Err(Error::Inconsistent(format!(
            "{x} follows {v} but the stopping term is not integral"
        )));
    }
    Ok(y)
}

/// Inverse of an odd `a` modulo `2^bits` by Newton lifting.
pub fn inverse_mod_pow2(a: &BigUint, bits: u32) -> BigUint {
    assert!(a.is_odd(), "only odd numbers are invertible modulo 2^k");
    let mut inv = BigUint::one();
    let mut precision = 1u32;
    while precision < bits {
        precision = (precision * 2).min(bits);
        let modulus = BigUint::one() << precision;
        let t = (a * &inv) % &modulus;
        // inv * (2 - a inv) mod 2^precision, kept non-negative
        let factor = (&modulus + 2u32 - t) % &modulus;
        inv = (inv * factor) % &modulus;
    }
    inv % (BigUint::one() << bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub vector: ParityVector,
    pub n: u32,
    pub x: BigUint,
    pub y: BigUint,
    /// `sigma(x) == sigma_n`.
    pub member: bool,
}

impl Solution {
    pub fn h(&self) -> u32 {
        self.vector.leading_ones() as u32
    }
}

pub fn solve_vector(v: &ParityVector) -> Result<Solution> {
    let profile = alphas(v)?;
    let sigma = profile.sigma();
    let modulus = BigUint::one() << sigma;
    let s = profile.offset();
    let inv = inverse_mod_pow2(&BigUint::from(3u32).pow(profile.n + 1), sigma);
    let x = (&modulus - (s * inv) % &modulus) % &modulus;

    let (y, rem) = profile.numerator(&x).div_rem(&modulus);
    if !rem.is_zero() || x.is_even() {
        return Err(Error::Inconsistent(format!(
            "solver produced a non-solution {x} for {v}"
        )));
    }
    if map::parity_vector_of(&x, profile.n) != *v {
        return Err(Error::Inconsistent(format!("solution {x} does not follow {v}")));
    }
    let member = map::stopping_time(&x, sigma + 1)? == StoppingTime::Found(sigma);
    Ok(Solution {
        vector: v.clone(),
        n: profile.n,
        x,
        y,
        member,
    })
}

/// `x = 2^h - 1 (mod 2^(h+1))`.
pub fn check_leading_ones_congruence(x: &BigUint, h: u32) -> bool {
    let modulus = BigUint::one() << (h + 1);
    x % modulus == (BigUint::one() << h) - 1u32
}

/// A solved step-1 edge `x = x_prev + lambda 2^kappa(n)`, reduced by
/// `2^sigma_n` when that overshoots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaStep {
    pub x: BigUint,
    pub lambda: u32,
    pub reduced: bool,
}

/// Scans `lambda` in `1, 3, 5, 7` for the step-1 child `child` of the vector
/// solved by `x_prev`. The least `lambda` that lands on the canonical
/// solution is reported.
pub fn lambda_step(x_prev: &BigUint, child: &ParityVector) -> Result<LambdaStep> {
    let profile = alphas(child)?;
    if child.last() != Some(true) || profile.n < 2 {
        return Err(malformed(child, "a step-1 child of level >= 2 ends in 1"));
    }
    let sigma_mod = BigUint::one() << profile.sigma();
    let step = BigUint::one() << ladder::kappa(profile.n);
    for lambda in [1u32, 3, 5, 7] {
        let mut x = x_prev + &step * lambda;
        let reduced = x > sigma_mod;
        if reduced {
            x -= &sigma_mod;
        }
        if x >= sigma_mod || !(profile.numerator(&x) % &sigma_mod).is_zero() {
            continue;
        }
        let solved = solve_vector(child)?;
        if solved.x != x {
            return Err(Error::Inconsistent(format!(
                "lambda scan gave {x}, solver gave {} for {child}",
                solved.x
            )));
        }
        return Ok(LambdaStep { x, lambda, reduced });
    }
    Err(Error::NoLambda {
        x_prev: x_prev.clone(),
        vector: child.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCheck {
    pub delta: BigInt,
    pub ok: bool,
}

/// `delta = (x_child - x_parent) / 2^(kappa(n) - j)` for a step-2 edge whose
/// child ends in `j` zeros; `ok` is `delta = 1 (mod 8)` for odd `n` and
/// `delta = 3 (mod 8)` for even `n`.
pub fn check_step2_delta(x_parent: &BigUint, x_child: &BigUint, n: u32, j: u32) -> Result<DeltaCheck> {
    let shift = ladder::kappa(n).checked_sub(j).ok_or(Error::Inconsistent(format!(
        "trailing zero run {j} longer than kappa({n})"
    )))?;
    let diff = BigInt::from_biguint(Sign::Plus, x_child.clone()) - BigInt::from_biguint(Sign::Plus, x_parent.clone());
    let (delta, rem) = diff.div_rem(&(BigInt::one() << shift));
    if !rem.is_zero() {
        return Err(Error::InexactDelta {
            parent: x_parent.clone(),
            child: x_child.clone(),
            shift,
        });
    }
    let class = if n % 2 == 1 { 1 } else { 3 };
    let ok = delta.mod_floor(&BigInt::from(8)) == BigInt::from(class);
    Ok(DeltaCheck { delta, ok })
}

/// Outcome of the closed-form step-2 rule stated for `2 <= n <= 8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPrediction {
    pub n: u32,
    pub j: u32,
    pub d: u32,
    pub parent: BigUint,
    pub predicted: BigUint,
    pub actual: BigUint,
}

impl ExplicitPrediction {
    pub fn matches(&self) -> bool {
        self.predicted == self.actual
    }
}

/// Evaluates `x_parent + 2^(kappa-j) + (2 - d) 2^(kappa-j+3)`, plus
/// `2^(kappa-j+1)` for even `n` and less `2^sigma_n` on overshoot, and pairs
/// it with the true child solution.
pub fn predict_step2_closed_form(
    x_parent: &BigUint,
    x_child: &BigUint,
    n: u32,
    j: u32,
    d_n: u32,
) -> Result<ExplicitPrediction> {
    if !(2..=8).contains(&n) {
        return Err(Error::ExplicitRuleRange(n));
    }
    let base = ladder::kappa(n) - j;
    let mut predicted = x_parent + (BigUint::one() << base) + BigUint::from(2 - d_n) * (BigUint::one() << (base + 3));
    if n.is_multiple_of(2) {
        predicted += BigUint::one() << (base + 1);
    }
    let sigma_mod = BigUint::one() << ladder::sigma_n(n);
    if predicted > sigma_mod {
        predicted -= sigma_mod;
    }
    Ok(ExplicitPrediction {
        n,
        j,
        d: d_n,
        parent: x_parent.clone(),
        predicted,
        actual: x_child.clone(),
    })
}

/// A tree entry together with its solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedEntry {
    pub entry: VSetEntry,
    pub solution: Solution,
}

/// `V(n)` in emission order, each entry solved. Solving runs in parallel.
pub fn solve_vset(n: u32) -> Result<Vec<SolvedEntry>> {
    solve_entries(tree::generate_vset(n))
}

pub fn solve_entries(entries: Vec<VSetEntry>) -> Result<Vec<SolvedEntry>> {
    entries
        .into_par_iter()
        .map(|entry| {
            let solution = solve_vector(&entry.vector)?;
            Ok(SolvedEntry { entry, solution })
        })
        .collect()
}

/// The last vector's solution is `2 x + 1` (less `2^sigma_n` on overshoot)
/// where `x` solves the last vector with `h = n`.
pub fn check_last_vector_rule(vset: &[SolvedEntry]) -> bool {
    let Some(last) = vset.last() else {
        return false;
    };
    let n = last.entry.n;
    let Some(prev) = vset.iter().rev().find(|e| e.entry.h == n) else {
        return false;
    };
    let sigma_mod = BigUint::one() << ladder::sigma_n(n);
    let mut x = &prev.solution.x * 2u32 + 1u32;
    if x > sigma_mod {
        x -= sigma_mod;
    }
    x == last.solution.x
}

/// Every step-2 edge of `V(n)` as `(parent solution, child solution,
/// trailing zero run of the child)`.
pub fn step2_edges(vset: &[SolvedEntry]) -> impl Iterator<Item = (&SolvedEntry, &SolvedEntry, u32)> {
    vset.iter().filter_map(move |child| match child.entry.parent {
        Parent::Step2 { index } => {
            let parent = &vset[index as usize];
            Some((parent, child, child.entry.vector.trailing_zeros() as u32))
        }
        _ => None,
    })
}

/// Explicit step-2 predictions over `2 <= n <= max_n` (at most 8), in tree
/// order, with the mismatching ones singled out.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Step2Report {
    pub predictions: Vec<ExplicitPrediction>,
}

impl Step2Report {
    pub fn mismatches(&self) -> impl Iterator<Item = &ExplicitPrediction> {
        self.predictions.iter().filter(|p| !p.matches())
    }
}

pub fn step2_report(max_n: u32) -> Result<Step2Report> {
    let mut predictions = Vec::new();
    for n in 2..=max_n.min(8) {
        let vset = solve_vset(n)?;
        for (parent, child, j) in step2_edges(&vset) {
            predictions.push(predict_step2_closed_form(
                &parent.solution.x,
                &child.solution.x,
                n,
                j,
                ladder::d(n),
            )?);
        }
    }
    Ok(Step2Report { predictions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str) -> ParityVector {
        s.parse().unwrap()
    }

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alphas(&pv("11011")).unwrap().alphas, vec![0, 1, 3, 4]);
        assert_eq!(alphas(&pv("11")).unwrap().alphas, vec![0, 1]);
        assert_eq!(alphas(&pv("11110")).unwrap().alphas, vec![0, 1, 2, 3]);
        assert!(alphas(&pv("1011")).is_err());
        assert!(alphas(&pv("110110")).is_err());
    }

    #[test]
    fn stopping_term_examples() {
        assert_eq!(stopping_term(&pv("11011"), &b(59)).unwrap(), b(38));
        assert_eq!(stopping_term(&pv("11"), &b(3)).unwrap(), b(2));
        assert_eq!(stopping_term(&pv("1101"), &b(11)).unwrap(), b(10));
        assert!(matches!(
            stopping_term(&pv("11011"), &b(7)),
            Err(Error::ParityMismatch { .. })
        ));
    }

    #[test]
    fn inverse_is_an_inverse() {
        for bits in 1..200 {
            for a in [1u64, 3, 9, 27, 81, 12345, 3u64.pow(39)] {
                let inv = inverse_mod_pow2(&b(a), bits);
                assert_eq!(
                    (b(a) * inv) % (BigUint::one() << bits),
                    BigUint::one() % (BigUint::one() << bits)
                );
            }
        }
    }

    #[test]
    fn solve_examples() {
        let s = solve_vector(&pv("11011")).unwrap();
        assert_eq!((s.x, s.y, s.member), (b(59), b(38), true));
        let s = solve_vector(&pv("1111111000")).unwrap();
        assert_eq!((s.x, s.y, s.member), (b(383), b(205), true));
        let s = solve_vector(&pv("11001111")).unwrap();
        assert_eq!((s.x.clone(), s.y, s.member), (b(595), b(425), false));
        assert_eq!(map::stopping_time(&s.x, 100).unwrap(), StoppingTime::Found(4));
    }

    #[test]
    fn leading_ones_congruence_examples() {
        assert!(check_leading_ones_congruence(&b(59), 2));
        assert!(check_leading_ones_congruence(&b(383), 7));
        assert!(!check_leading_ones_congruence(&b(9), 2));
    }

    #[test]
    fn lambda_examples() {
        let s = lambda_step(&b(3), &pv("1101")).unwrap();
        assert_eq!((s.x, s.lambda, s.reduced), (b(11), 1, false));
        let s = lambda_step(&b(11), &pv("11011")).unwrap();
        assert_eq!((s.x, s.lambda), (b(59), 3));
        // V(5) first child of (1,1,1,1,1,0,0) ... solved by 95 in V(4)
        let s = lambda_step(&b(95), &pv("11111001")).unwrap();
        assert_eq!((s.x, s.lambda), (b(735), 5));
        assert!(lambda_step(&b(11), &pv("11110")).is_err());
    }

    #[test]
    fn delta_examples() {
        let c = check_step2_delta(&b(7), &b(15), 3, 1).unwrap();
        assert_eq!((c.delta, c.ok), (BigInt::from(1), true));
        let c = check_step2_delta(&b(175), &b(95), 4, 2).unwrap();
        assert_eq!((c.delta, c.ok), (BigInt::from(-5), true));
        let c = check_step2_delta(&b(815), &b(367), 5, 1).unwrap();
        assert_eq!((c.delta, c.ok), (BigInt::from(-7), true));
        assert!(matches!(
            check_step2_delta(&b(7), &b(11), 3, 1),
            Err(Error::InexactDelta { .. })
        ));
    }

    #[test]
    fn explicit_rule_examples() {
        let p = predict_step2_closed_form(&b(11), &b(23), 2, 1, 2).unwrap();
        assert_eq!(p.predicted, b(23));
        assert!(p.matches());
        let p = predict_step2_closed_form(&b(123), &b(219), 4, 1, 2).unwrap();
        assert_eq!(p.predicted, b(219));
        let p = predict_step2_closed_form(&b(7), &b(15), 3, 1, 1).unwrap();
        assert_eq!(p.predicted, b(79));
        assert!(!p.matches());
        let p = predict_step2_closed_form(&b(175), &b(95), 4, 2, 2).unwrap();
        assert_eq!(p.predicted, b(223));
        assert_eq!(
            predict_step2_closed_form(&b(1), &b(1), 9, 1, 2),
            Err(Error::ExplicitRuleRange(9))
        );
    }

    #[test]
    fn last_vector_rule_examples() {
        for n in 2..=8 {
            assert!(check_last_vector_rule(&solve_vset(n).unwrap()), "n={n}");
        }
        let v4 = solve_vset(4).unwrap();
        assert_eq!(v4.last().unwrap().solution.x, b(95));
    }

    #[test]
    fn every_candidate_has_one_odd_solution() {
        for n in 1..=4 {
            let sigma = ladder::sigma_n(n);
            for v in tree::lex_tuples(n) {
                let profile = alphas(&v).unwrap();
                let modulus = BigUint::one() << sigma;
                let found: Vec<u64> = (1..1u64 << sigma)
                    .step_by(2)
                    .filter(|&x| (profile.numerator(&b(x)) % &modulus).is_zero())
                    .collect();
                assert_eq!(found.len(), 1, "{v}");
                assert_eq!(solve_vector(&v).unwrap().x, b(found[0]));
            }
        }
    }
}
