//! Brute-force oracles: the residue survival sieve, residue tables built
//! from solved parity vectors, and direct stopping-time simulation over
//! integer ranges.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::diophantine;
use crate::error::{Error, Result};
use crate::ladder;
use crate::map::{self, ResidueClass};
use crate::triangle;

/// One residue examined by the sieve at depth `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivalRecord {
    pub residue: ResidueClass,
    /// `T^k(r)` for the canonical representative.
    pub q: BigUint,
    /// Odd steps among the first `k`.
    pub n: u32,
    /// `2^k < 3^n`: the class has not stopped yet.
    pub surviving: bool,
}

/// All residues examined at one depth, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveLevel {
    pub k: u32,
    pub records: Vec<SurvivalRecord>,
}

impl SieveLevel {
    pub fn survivors(&self) -> impl Iterator<Item = &SurvivalRecord> {
        self.records.iter().filter(|r| r.surviving)
    }

    /// Residues that stopped exactly at this depth.
    pub fn stopped(&self) -> impl Iterator<Item = &SurvivalRecord> {
        self.records.iter().filter(|r| !r.surviving)
    }
}

pub const DEFAULT_SIEVE_LIMIT: u64 = 20_000_000;
/// Keeps `3q + 1` inside 128 bits.
pub const MAX_SIEVE_DEPTH: u32 = 64;

#[derive(Clone, Copy)]
struct Cell {
    r: u128,
    q: u128,
    n: u32,
}

/// Depths `2..=k`, each from doubling the survivors of the depth before.
pub fn sieve_levels(k: u32, limit: u64) -> Result<Vec<SieveLevel>> {
    if k < 2 {
        return Err(Error::LevelTooSmall { got: k, min: 2 });
    }
    let w = triangle::build_triangle(k)?.w(k)?;
    if k > MAX_SIEVE_DEPTH || w > BigUint::from(limit) {
        return Err(Error::SieveTooLarge { k, records: w, limit });
    }

    let survives = |depth: u32, n: u32| depth < ladder::kappa(n) + 1;
    let mut levels = Vec::with_capacity(k as usize - 1);
    // 3 (mod 4) -> 8 (mod 9) is the only class not settled by depth 2.
    let mut current = vec![Cell { r: 3, q: 8, n: 2 }];
    let mut records = current.clone();
    for depth in 2..=k {
        if depth > 2 {
            let half = 1u128 << (depth - 1);
            let mut low = Vec::with_capacity(current.len());
            let mut high = Vec::with_capacity(current.len());
            for c in &current {
                let shift = 3u128.pow(c.n);
                low.push(advance(Cell { r: c.r, q: c.q, n: c.n }));
                high.push(advance(Cell {
                    r: c.r + half,
                    q: c.q + shift,
                    n: c.n,
                }));
            }
            low.extend(high);
            records = low;
        }
        levels.push(SieveLevel {
            k: depth,
            records: records
                .iter()
                .map(|c| SurvivalRecord {
                    residue: ResidueClass::new(BigUint::from(c.r), depth).expect("canonical by construction"),
                    q: BigUint::from(c.q),
                    n: c.n,
                    surviving: survives(depth, c.n),
                })
                .collect(),
        });
        current = records.iter().copied().filter(|c| survives(depth, c.n)).collect();
    }
    Ok(levels)
}

fn advance(mut c: Cell) -> Cell {
    if c.q & 1 == 1 {
        c.q = (3 * c.q + 1) >> 1;
        c.n += 1;
    } else {
        c.q >>= 1;
    }
    c
}

pub fn sieve(k: u32) -> Result<SieveLevel> {
    sieve_with_limit(k, DEFAULT_SIEVE_LIMIT)
}

pub fn sieve_with_limit(k: u32, limit: u64) -> Result<SieveLevel> {
    Ok(sieve_levels(k, limit)?.pop().expect("at least depth 2"))
}

/// Survivors of each depth in the expansion layout:
/// running index, `r (mod 2^k) -> q (mod 3^n)`.
pub fn render_sieve(levels: &[SieveLevel]) -> String {
    let mut out = String::from("w(k) | r (mod 2^k) -> q (mod 3^n)\n");
    for level in levels {
        out.push('\n');
        for (i, rec) in level.survivors().enumerate() {
            writeln!(
                out,
                "{:>6} | {:>8} (mod 2^{}) -> {:>10} (mod 3^{})",
                i + 1,
                rec.residue.residue(),
                level.k,
                rec.q,
                rec.n
            )
            .unwrap();
        }
    }
    out
}

pub fn sieve_csv(levels: &[SieveLevel]) -> String {
    let mut out = String::from("k,index,r,q,n\n");
    for level in levels {
        for (i, rec) in level.survivors().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                level.k,
                i + 1,
                rec.residue.residue(),
                rec.q,
                rec.n
            )
            .unwrap();
        }
    }
    out
}

/// Residues modulo `2^bits` whose stopping time is `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueBlock {
    pub sigma: u32,
    pub modulus_bits: u32,
    pub residues: Vec<BigUint>,
}

/// Sorted member solutions of `V(n)`.
pub fn residue_block(n: u32) -> Result<ResidueBlock> {
    let mut residues: Vec<BigUint> = diophantine::solve_vset(n)?
        .into_iter()
        .filter(|e| e.solution.member)
        .map(|e| e.solution.x)
        .collect();
    residues.sort();
    let sigma = ladder::sigma_n(n);
    Ok(ResidueBlock {
        sigma,
        modulus_bits: sigma,
        residues,
    })
}

/// The two even/`1 (mod 4)` classes followed by one block per level.
pub fn residue_table(n_max: u32) -> Result<Vec<ResidueBlock>> {
    let mut blocks = vec![
        ResidueBlock {
            sigma: 1,
            modulus_bits: 1,
            residues: vec![BigUint::from(0u32)],
        },
        ResidueBlock {
            sigma: 2,
            modulus_bits: 2,
            residues: vec![BigUint::from(1u32)],
        },
    ];
    for n in 1..=n_max {
        blocks.push(residue_block(n)?);
    }
    Ok(blocks)
}

/// `sigma(x)=7` / `if x ≡ 7, 15, 59 (mod 128)` blocks, blank-line separated.
pub fn render_blocks(blocks: &[ResidueBlock]) -> String {
    let mut out = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let list: Vec<String> = b.residues.iter().map(|r| r.to_string()).collect();
        writeln!(out, "sigma(x)={}", b.sigma).unwrap();
        writeln!(
            out,
            "if x ≡ {} (mod {})",
            list.join(", "),
            BigUint::from(1u32) << b.modulus_bits
        )
        .unwrap();
    }
    out
}

/// Residue sets per admissible stopping time, for membership lookups.
#[derive(Debug, Clone)]
pub struct PredictionTable {
    n_max: u32,
    levels: Vec<(u32, u64, HashSet<u64>)>,
}

impl PredictionTable {
    pub fn build(n_max: u32) -> Result<Self> {
        let mut levels = Vec::new();
        for n in 1..=n_max {
            let sigma = ladder::sigma_n(n);
            if sigma > 63 {
                return Err(Error::PredictionTableTooWide(sigma));
            }
            let block = residue_block(n)?;
            let set = block
                .residues
                .iter()
                .map(|r| u64::try_from(r).expect("below 2^63"))
                .collect();
            levels.push((sigma, (1u64 << sigma) - 1, set));
        }
        Ok(Self { n_max, levels })
    }

    /// Stopping time implied by class membership, if any class holds `x`.
    pub fn predict(&self, x: u64) -> Option<u32> {
        if x.is_multiple_of(2) {
            return Some(1);
        }
        if x % 4 == 1 {
            return Some(2);
        }
        self.levels
            .iter()
            .find(|(_, mask, set)| set.contains(&(x & mask)))
            .map(|(sigma, _, _)| *sigma)
    }

    pub fn budget(&self) -> u32 {
        ladder::sigma_n(self.n_max) + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub x: u64,
    pub predicted: Option<u32>,
    pub simulated: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub x_lo: u64,
    pub x_hi: u64,
    pub n_max: u32,
    pub mismatches: Vec<Mismatch>,
    /// Simulated stopping time -> how many `x` had it.
    pub counts: BTreeMap<u32, u64>,
    /// `x` whose stopping time lies past the table.
    pub beyond_table: u64,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn merge(&mut self, other: VerificationReport) {
        self.mismatches.extend(other.mismatches);
        for (s, c) in other.counts {
            *self.counts.entry(s).or_insert(0) += c;
        }
        self.beyond_table += other.beyond_table;
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "checked [{}, {}) against n <= {}: {} mismatches, {} beyond table",
            self.x_lo,
            self.x_hi,
            self.n_max,
            self.mismatches.len(),
            self.beyond_table
        )
        .unwrap();
        for (s, c) in &self.counts {
            writeln!(out, "sigma={s}: {c}").unwrap();
        }
        for m in &self.mismatches {
            writeln!(
                out,
                "mismatch x={} predicted={:?} simulated={:?}",
                m.x, m.predicted, m.simulated
            )
            .unwrap();
        }
        out
    }
}

const BLOCK: u64 = 1 << 16;

fn check_block(table: &PredictionTable, lo: u64, hi: u64) -> Result<VerificationReport> {
    let budget = table.budget();
    let top = ladder::sigma_n(table.n_max);
    let mut report = VerificationReport {
        x_lo: lo,
        x_hi: hi,
        n_max: table.n_max,
        mismatches: Vec::new(),
        counts: BTreeMap::new(),
        beyond_table: 0,
    };
    for x in lo..hi {
        let predicted = table.predict(x);
        let simulated = map::stopping_time_u64(x, budget)?.found();
        match (predicted, simulated) {
            (None, None) => report.beyond_table += 1,
            (None, Some(s)) if s > top => report.beyond_table += 1,
            (Some(p), Some(s)) if p == s => *report.counts.entry(s).or_insert(0) += 1,
            _ => report.mismatches.push(Mismatch {
                x,
                predicted,
                simulated,
            }),
        }
    }
    Ok(report)
}

/// Checks every `x` in `[x_lo, x_hi)` on the global thread pool.
pub fn verify_range(x_lo: u64, x_hi: u64, n_max: u32) -> Result<VerificationReport> {
    verify_range_with_jobs(x_lo, x_hi, n_max, None)
}

/// As [`verify_range`], on a dedicated pool of `jobs` threads when given.
/// The report does not depend on the thread count.
pub fn verify_range_with_jobs(x_lo: u64, x_hi: u64, n_max: u32, jobs: Option<usize>) -> Result<VerificationReport> {
    if x_lo < 2 || x_lo > x_hi {
        return Err(Error::StoppingTimeUndefined(BigUint::from(x_lo)));
    }
    let table = PredictionTable::build(n_max.max(1))?;
    let starts: Vec<u64> = (x_lo..x_hi).step_by(BLOCK as usize).collect();
    let run = || -> Result<Vec<VerificationReport>> {
        starts
            .par_iter()
            .map(|&lo| check_block(&table, lo, (lo + BLOCK).min(x_hi)))
            .collect()
    };
    let parts = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let mut report = VerificationReport {
        x_lo,
        x_hi,
        n_max,
        mismatches: Vec::new(),
        counts: BTreeMap::new(),
        beyond_table: 0,
    };
    for part in parts {
        report.merge(part);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residues(level: &SieveLevel) -> Vec<u64> {
        level
            .survivors()
            .map(|r| u64::try_from(r.residue.residue()).unwrap())
            .collect()
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(residues(&sieve(6).unwrap()), vec![7, 15, 27, 31, 39, 47, 59, 63]);
        let k7 = sieve(7).unwrap();
        let r123 = k7
            .survivors()
            .find(|r| r.residue.residue() == &BigUint::from(123u32))
            .unwrap();
        assert_eq!((r123.q.clone(), r123.n), (BigUint::from(236u32), 5));
        let k2 = sieve(2).unwrap();
        assert_eq!(k2.records.len(), 1);
        assert_eq!((k2.records[0].q.clone(), k2.records[0].n), (BigUint::from(8u32), 2));
    }

    #[test]
    fn sieve_records_agree_with_forward_map() {
        for level in sieve_levels(12, DEFAULT_SIEVE_LIMIT).unwrap() {
            for rec in &level.records {
                let img = map::forward_map(rec.residue.residue(), level.k);
                assert_eq!((img.q, img.odd_steps), (rec.q.clone(), rec.n));
            }
        }
    }

    #[test]
    fn sieve_refuses_past_limit() {
        let err = sieve_with_limit(20, 1000).unwrap_err();
        let Error::SieveTooLarge { k, records, .. } = err else {
            panic!("wrong error {err}");
        };
        assert_eq!(k, 20);
        assert_eq!(records, triangle::build_triangle(20).unwrap().w(20).unwrap());
        assert!(sieve(1).is_err());
    }

    #[test]
    fn residue_table_examples() {
        let t = residue_table(5).unwrap();
        assert_eq!((t[0].sigma, t[1].sigma), (1, 2));
        let b2 = &t[3];
        assert_eq!(b2.sigma, 5);
        assert_eq!(b2.residues, vec![BigUint::from(11u32), BigUint::from(23u32)]);
        let b4 = &t[5];
        assert_eq!(b4.sigma, 8);
        let want: Vec<BigUint> = [39u32, 79, 95, 123, 175, 199, 219].map(BigUint::from).to_vec();
        assert_eq!(b4.residues, want);
        let b5 = &t[6];
        assert_eq!((b5.sigma, b5.residues.len()), (10, 12));
        assert_eq!(b5.residues[..3], [287u32, 347, 367].map(BigUint::from));
        let text = render_blocks(&t[..3]);
        assert_eq!(
            text,
            "sigma(x)=1\nif x ≡ 0 (mod 2)\n\nsigma(x)=2\nif x ≡ 1 (mod 4)\n\nsigma(x)=4\nif x ≡ 3 (mod 16)\n"
        );
    }

    #[test]
    fn small_range_counts() {
        // brute-force enumeration of each class below 100
        let r = verify_range(2, 100, 4).unwrap();
        assert!(r.is_clean());
        assert_eq!(
            r.counts,
            BTreeMap::from([(1, 49), (2, 24), (4, 7), (5, 6), (7, 3), (8, 3)])
        );
        assert_eq!(r.beyond_table, 6);
    }

    #[test]
    fn twenty_seven_is_beyond_a_small_table() {
        let r = verify_range(27, 28, 9).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.beyond_table, 1);
    }

    #[test]
    fn report_independent_of_jobs() {
        let a = verify_range_with_jobs(2, 1 << 17, 8, Some(1)).unwrap();
        let b = verify_range_with_jobs(2, 1 << 17, 8, Some(4)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_clean());
    }

    #[test]
    fn broken_table_is_caught() {
        let mut table = PredictionTable::build(4).unwrap();
        table.levels[0].2.clear();
        let r = check_block(&table, 2, 100).unwrap();
        assert_eq!(
            r.mismatches.iter().map(|m| m.x).collect::<Vec<_>>(),
            vec![3, 19, 35, 51, 67, 83, 99]
        );
        assert!(r
            .mismatches
            .iter()
            .all(|m| m.simulated == Some(4) && m.predicted.is_none()));
    }
}
