//! Integer sequences produced by the other modules, with b-file output.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::{ladder, tree, triangle, verify};

/// Identifiers understood by [`generate`].
pub const SEQUENCE_IDS: [&str; 8] = [
    "A020914", "A020915", "A022921", "A056576", "A076227", "A100982", "A177789", "A293308",
];

const LADDER_LIMIT: usize = 100_000;
const TRIANGLE_LIMIT: usize = 600;
const BINOMIAL_LIMIT: usize = 20_000;
/// Deepest level of the residue listing.
const RESIDUE_LEVEL_LIMIT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub id: &'static str,
    /// Index of the first term.
    pub offset: i64,
    pub values: Vec<BigUint>,
}

impl Sequence {
    pub fn indexed(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        (self.offset..).zip(self.values.iter())
    }

    /// `index value` lines.
    pub fn to_bfile(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.indexed() {
            writeln!(out, "{i} {v}").unwrap();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("{}\n", vals.join(" "))
    }

    pub fn with_offset(mut self, offset: i64) -> Self {
        self.offset = offset;
        self
    }
}

fn canonical(id: &str) -> Result<&'static str> {
    SEQUENCE_IDS
        .iter()
        .copied()
        .find(|s| s.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownSequence(id.to_string()))
}

fn bounded(id: &'static str, terms: usize, limit: usize) -> Result<()> {
    if terms > limit {
        return Err(Error::TooManyTerms {
            id,
            requested: terms,
            limit,
        });
    }
    Ok(())
}

fn small(values: impl Iterator<Item = u32>) -> Vec<BigUint> {
    values.map(BigUint::from).collect()
}

/// First `terms` values of `id`, at its default index origin.
pub fn generate(id: &str, terms: usize) -> Result<Sequence> {
    let id = canonical(id)?;
    let count = terms as u32;
    let (offset, values) = match id {
        "A020914" => {
            bounded(id, terms, LADDER_LIMIT)?;
            (1, small((1..=count).map(ladder::sigma_n)))
        }
        "A022921" => {
            bounded(id, terms, LADDER_LIMIT)?;
            (1, small((1..=count).map(ladder::d)))
        }
        "A056576" => {
            bounded(id, terms, LADDER_LIMIT)?;
            (1, small((1..=count).map(ladder::kappa)))
        }
        "A020915" => {
            bounded(id, terms, LADDER_LIMIT)?;
            (0, small((0..count).map(ladder::first_surviving_level)))
        }
        "A076227" => {
            bounded(id, terms, TRIANGLE_LIMIT)?;
            let t = triangle::build_triangle(count + 1)?;
            (2, (2..count + 2).map(|k| t.w(k)).collect::<Result<_>>()?)
        }
        "A100982" => {
            bounded(id, terms, TRIANGLE_LIMIT)?;
            let t = triangle::build_triangle(count.max(2))?;
            let mut v = vec![BigUint::from(1u32)];
            for n in 2..=count {
                v.push(t.z(n)?);
            }
            v.truncate(terms);
            (1, v)
        }
        "A293308" => {
            bounded(id, terms, BINOMIAL_LIMIT)?;
            (1, (1..=count).map(tree::ln_count).collect())
        }
        "A177789" => {
            let limit = tree::node_count(1, RESIDUE_LEVEL_LIMIT) as usize;
            bounded(id, terms, limit)?;
            let mut v = Vec::with_capacity(terms);
            for n in 1..=RESIDUE_LEVEL_LIMIT {
                if v.len() >= terms {
                    break;
                }
                v.extend(verify::residue_block(n)?.residues);
            }
            v.truncate(terms);
            (1, v)
        }
        _ => unreachable!("id was canonicalised"),
    };
    Ok(Sequence { id, offset, values })
}

/// Reads `index value` lines, skipping blanks and `#` comments.
pub fn parse_bfile(text: &str) -> Result<Vec<(i64, BigUint)>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parsed = match (parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(v), None) => i.parse::<i64>().ok().zip(v.parse::<BigUint>().ok()),
            _ => None,
        };
        out.push(parsed.ok_or_else(|| Error::Inconsistent(format!("bad b-file line: {line}")))?);
    }
    Ok(out)
}
