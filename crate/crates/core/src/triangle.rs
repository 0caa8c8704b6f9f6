//! The count triangle `R(k, n)`: surviving residues modulo `2^k` whose
//! `k`-step image lies in a class modulo `3^n`.
//!
//! Seeded with `R(2,2) = 1, R(2,1) = 0` and grown with
//! `R(k+1, n) = R(k, n) + R(k, n-1)`. Column `n` only holds rows
//! `n <= k <= kappa(n)`; everything left of that is cut off because
//! `2^k > 3^n` means the residue has already stopped. Row sums are `w(k)`,
//! column sums are `z(n)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ladder;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleTable {
    max_n: u32,
    /// Keyed by `(k, n)`; absent keys are cut cells.
    cells: BTreeMap<(u32, u32), BigUint>,
}

pub fn build_triangle(max_n: u32) -> Result<TriangleTable> {
    if max_n < 2 {
        return Err(Error::LevelTooSmall { got: max_n, min: 2 });
    }
    let mut cells: BTreeMap<(u32, u32), BigUint> = BTreeMap::new();
    cells.insert((2, 2), BigUint::from(1u32));
    let zero = BigUint::zero();
    for n in 2..=max_n {
        for k in n..=ladder::kappa(n) {
            if (k, n) == (2, 2) {
                continue;
            }
            let even = cells.get(&(k - 1, n)).unwrap_or(&zero);
            let odd = cells.get(&(k - 1, n - 1)).unwrap_or(&zero);
            let v = even + odd;
            cells.insert((k, n), v);
        }
    }
    Ok(TriangleTable { max_n, cells })
}

impl TriangleTable {
    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    /// Deepest row holding any cell.
    pub fn max_k(&self) -> u32 {
        ladder::kappa(self.max_n)
    }

    /// `R(k, n)`, or `None` where the cell is cut or outside the table.
    pub fn cell(&self, k: u32, n: u32) -> Option<&BigUint> {
        self.cells.get(&(k, n))
    }

    /// All present cells in `(k, n)` order.
    pub fn cells(&self) -> impl Iterator<Item = ((u32, u32), &BigUint)> + '_ {
        self.cells.iter().map(|(&key, v)| (key, v))
    }

    /// Rows whose cells are all inside the table.
    pub fn complete_rows(&self) -> std::ops::RangeInclusive<u32> {
        2..=self.max_n
    }

    /// Row sum `w(k)` over `n` from `floor(1 + k log3 2)` to `k`.
    pub fn w(&self, k: u32) -> Result<BigUint> {
        if !self.complete_rows().contains(&k) {
            return Err(Error::RowOutOfRange { k, max_n: self.max_n });
        }
        let lo = ladder::first_surviving_level(k);
        Ok((lo..=k).filter_map(|n| self.cell(k, n)).sum())
    }

    /// Column sum `z(n)` over `k` from `n` to `kappa(n)`.
    pub fn z(&self, n: u32) -> Result<BigUint> {
        if n < 2 || n > self.max_n {
            return Err(Error::ColumnOutOfRange { n, max_n: self.max_n });
        }
        Ok((n..=ladder::kappa(n)).filter_map(|k| self.cell(k, n)).sum())
    }

    /// `k,n,R` lines with a header, every present cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n,count\n");
        for ((k, n), v) in self.cells() {
            writeln!(out, "{k},{n},{v}").unwrap();
        }
        out
    }

    /// Aligned layout: a `d(n)` header, one line per complete row with its
    /// `w(k)`, and a closing `z(n)` line.
    pub fn render(&self) -> String {
        let cols: Vec<u32> = (1..=self.max_n).collect();
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut head = vec!["d(n)".to_string()];
        head.extend(cols.iter().map(|&n| ladder::d(n).to_string()));
        head.push(String::new());
        grid.push(head);
        let mut ns = vec!["n".to_string()];
        ns.extend(cols.iter().map(|n| n.to_string()));
        ns.push("w(k)".to_string());
        grid.push(ns);
        for k in self.complete_rows() {
            let mut line = vec![format!("k={k}")];
            line.extend(
                cols.iter()
                    .map(|&n| self.cell(k, n).map(|v| v.to_string()).unwrap_or_default()),
            );
            line.push(self.w(k).expect("complete row").to_string());
            grid.push(line);
        }
        let mut zs = vec!["z(n)".to_string()];
        zs.extend(cols.iter().map(|&n| match n {
            1 => String::new(),
            _ => self.z(n).expect("column in range").to_string(),
        }));
        zs.push(String::new());
        grid.push(zs);

        let width = grid.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for line in &grid {
            let row: Vec<String> = line.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(out, "{}", row.join(" ").trim_end()).unwrap();
        }
        out
    }
}
