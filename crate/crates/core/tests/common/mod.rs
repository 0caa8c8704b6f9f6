#![allow(dead_code)]

use std::path::PathBuf;

use collatz_core::ParityVector;
use num_bigint::BigUint;

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Whitespace-split fields of every non-comment line.
pub fn rows(name: &str) -> Vec<Vec<String>> {
    fixture(name)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

pub fn big(s: &str) -> BigUint {
    s.parse().unwrap_or_else(|_| panic!("not an integer: {s}"))
}

pub fn num(s: &str) -> u64 {
    s.parse().unwrap_or_else(|_| panic!("not an integer: {s}"))
}

pub fn bits(s: &str) -> ParityVector {
    s.parse().unwrap_or_else(|_| panic!("not a parity string: {s}"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub sigma: u32,
    pub modulus: BigUint,
    pub residues: Vec<BigUint>,
}

pub fn residue_blocks() -> Vec<Block> {
    rows("residue_blocks.txt")
        .into_iter()
        .map(|r| Block {
            sigma: num(&r[0]) as u32,
            modulus: big(&r[1]),
            residues: r[2].split(',').map(big).collect(),
        })
        .collect()
}

/// `(index, value)` pairs of a vendored sequence.
pub fn sequence(id: &str) -> Vec<(i64, BigUint)> {
    rows(&format!("oeis/{id}.txt"))
        .into_iter()
        .map(|r| (r[0].parse().unwrap(), big(&r[1])))
        .collect()
}
