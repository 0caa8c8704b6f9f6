//! Generation of the parity vector sets `V(n)` as a directed rooted tree.
//!
//! Every vector of `V(n-1)` spawns a step-1 child (append `1` when
//! `d(n) = 1`, `0,1` when `d(n) = 2`). If that child has zeros directly left
//! of its final `1`, the `1` walks left over them one position at a time and
//! each position is emitted as a step-2 child of the vector before it. A
//! level is finished once it has emitted `1^(n+1) 0^(kappa(n)-n)`.
//!
//! Because `V(n)` in emission order is the concatenation of the children of
//! `V(n-1)` in emission order, a depth-first walk streams any level while
//! only holding one pending batch per level.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::diophantine;
use crate::error::{Error, Result};
use crate::ladder;
use crate::parity::ParityVector;
use crate::triangle;

/// Where an entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parent {
    /// The single vector of `V(1)`.
    Root,
    /// Step-1 edge from entry `index` (0-based) of `V(n-1)`.
    Step1 { index: u64 },
    /// Step-2 edge from entry `index` (0-based) of the same level.
    Step2 { index: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VSetEntry {
    pub vector: ParityVector,
    pub n: u32,
    /// Leading consecutive ones.
    pub h: u32,
    /// 1-based rank among the entries of this level sharing `h`.
    pub p: u64,
    /// 0-based position in emission order.
    pub index: u64,
    pub parent: Parent,
}

/// Step-1 child of `parent` at level `m` followed by its step-2 chain.
fn children(parent: &ParityVector, m: u32) -> Vec<ParityVector> {
    let kappa = ladder::kappa(m) as usize;
    let mut child = parent.clone();
    if ladder::d(m) == 2 {
        child.push(false);
    }
    child.push(true);
    debug_assert_eq!(child.len(), kappa + 1);

    let mut out = vec![child.clone()];
    if !child.get(kappa - 1) {
        let mut pos = kappa;
        for _ in 0..kappa - m as usize {
            child.set(pos - 1, true);
            child.set(pos, false);
            pos -= 1;
            out.push(child.clone());
            if pos == 0 || child.get(pos - 1) {
                break;
            }
        }
    }
    out
}

struct Batch {
    nodes: std::vec::IntoIter<ParityVector>,
    started: bool,
    parent_index: u64,
}

/// Depth-first walk over the tree yielding entries of levels `lo..=hi`
/// in preorder. Entries of a single level come out in emission order.
pub struct TreeWalk {
    lo: u32,
    hi: u32,
    stack: Vec<Batch>,
    emitted: Vec<u64>,
    finished: Vec<bool>,
    h_counts: Vec<Vec<u64>>,
}

impl TreeWalk {
    pub fn new(lo: u32, hi: u32) -> Self {
        assert!(1 <= lo && lo <= hi, "need 1 <= lo <= hi");
        let levels = hi as usize + 2;
        Self {
            lo,
            hi,
            stack: vec![Batch {
                nodes: vec![ParityVector::from_bits(&[1, 1])].into_iter(),
                started: false,
                parent_index: 0,
            }],
            emitted: vec![0; levels],
            finished: vec![false; levels],
            h_counts: vec![Vec::new(); levels],
        }
    }
}

impl Iterator for TreeWalk {
    type Item = VSetEntry;

    fn next(&mut self) -> Option<VSetEntry> {
        loop {
            let level = self.stack.len() as u32;
            let top = self.stack.last_mut()?;
            let Some(vector) = top.nodes.next() else {
                self.stack.pop();
                continue;
            };
            let lv = level as usize;
            let index = self.emitted[lv];
            self.emitted[lv] += 1;
            let parent = if level == 1 {
                Parent::Root
            } else if top.started {
                Parent::Step2 { index: index - 1 }
            } else {
                Parent::Step1 {
                    index: top.parent_index,
                }
            };
            top.started = true;
            let h = vector.leading_ones() as u32;
            if h == level + 1 {
                self.finished[lv] = true;
            }
            if level < self.hi && !self.finished[lv + 1] {
                self.stack.push(Batch {
                    nodes: children(&vector, level + 1).into_iter(),
                    started: false,
                    parent_index: index,
                });
            }
            if level >= self.lo {
                let counts = &mut self.h_counts[lv];
                if counts.len() <= h as usize {
                    counts.resize(h as usize + 1, 0);
                }
                counts[h as usize] += 1;
                return Some(VSetEntry {
                    vector,
                    n: level,
                    h,
                    p: counts[h as usize],
                    index,
                    parent,
                });
            }
        }
    }
}

/// Streams `V(n)` in emission order.
pub fn stream_vset(n: u32) -> TreeWalk {
    TreeWalk::new(n, n)
}

pub fn generate_vset(n: u32) -> Vec<VSetEntry> {
    stream_vset(n).collect()
}

/// One column of the `P(h, n)` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhnColumn {
    pub n: u32,
    /// `h -> P(h, n)`.
    pub counts: BTreeMap<u32, u64>,
}

impl PhnColumn {
    pub fn get(&self, h: u32) -> u64 {
        self.counts.get(&h).copied().unwrap_or(0)
    }

    /// `z(n)`: the column total.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn phn_counts(n: u32) -> PhnColumn {
    let mut counts = BTreeMap::new();
    for e in stream_vset(n) {
        *counts.entry(e.h).or_insert(0) += 1;
    }
    PhnColumn { n, counts }
}

/// `P(h, n)` for `1 <= n <= max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhnTable {
    pub columns: Vec<PhnColumn>,
}

impl PhnTable {
    pub fn build(max_n: u32) -> Self {
        let mut columns: Vec<PhnColumn> = (1..=max_n)
            .map(|n| PhnColumn {
                n,
                counts: BTreeMap::new(),
            })
            .collect();
        for e in TreeWalk::new(1, max_n) {
            *columns[e.n as usize - 1].counts.entry(e.h).or_insert(0) += 1;
        }
        Self { columns }
    }

    pub fn get(&self, h: u32, n: u32) -> u64 {
        self.column(n).map_or(0, |c| c.get(h))
    }

    pub fn column(&self, n: u32) -> Option<&PhnColumn> {
        n.checked_sub(1).and_then(|i| self.columns.get(i as usize))
    }
}

/// Lexicographic successor of a 0/1 sequence; `false` once it is the last.
fn next_permutation(a: &mut [bool]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| !a[i - 1] & a[i]).map(|i| i - 1) else {
        return false;
    };
    let j = (i + 1..a.len())
        .rev()
        .find(|&j| a[j] & !a[i])
        .expect("pivot has a larger suffix element");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Candidate tuples for level `n` in lexicographic order: all arrangements of
/// `kappa(n) - n` zeros and `n - 1` ones, each prefixed with `1, 1`.
pub struct LexTuples {
    tuple: Option<Vec<bool>>,
}

impl Iterator for LexTuples {
    type Item = ParityVector;

    fn next(&mut self) -> Option<ParityVector> {
        let tuple = self.tuple.as_mut()?;
        let v = [true, true].into_iter().chain(tuple.iter().copied()).collect();
        if !next_permutation(tuple) {
            self.tuple = None;
        }
        Some(v)
    }
}

pub fn lex_tuples(n: u32) -> LexTuples {
    assert!(n >= 1, "levels start at 1");
    let zeros = (ladder::kappa(n) - n) as usize;
    let ones = (n - 1) as usize;
    let mut tuple = vec![false; zeros];
    tuple.extend(std::iter::repeat_n(true, ones));
    LexTuples { tuple: Some(tuple) }
}

/// `L(n) = binomial(kappa(n) - 1, n - 1)`.
pub fn ln_count(n: u32) -> BigUint {
    assert!(n >= 1, "levels start at 1");
    num_integer::binomial(BigUint::from(ladder::kappa(n) - 1), BigUint::from(n - 1))
}

#[derive(Debug, Clone, Copy)]
pub struct DotOptions {
    /// Add the solved residue `x` to each label.
    pub with_solutions: bool,
    pub max_nodes: u64,
}

impl Default for DotOptions {
    fn default() -> Self {
        Self {
            with_solutions: false,
            max_nodes: 10_000,
        }
    }
}

/// Number of vectors in `V(1) ... V(n_hi)` restricted to levels `>= n_lo`.
pub fn node_count(n_lo: u32, n_hi: u32) -> u64 {
    let mut total = u64::from(n_lo <= 1);
    if n_hi >= 2 {
        let t = triangle::build_triangle(n_hi).expect("n_hi >= 2");
        for n in n_lo.max(2)..=n_hi {
            let z = t.z(n).expect("column in range");
            total = total.saturating_add(u64::try_from(z).unwrap_or(u64::MAX));
        }
    }
    total
}

fn node_id(n: u32, index: u64) -> String {
    format!("v{n}_{index}")
}

/// Graphviz document for levels `n_lo..=n_hi`. Step-1 edges run left to
/// right between levels; step-2 edges join vectors stacked in one level.
pub fn export_tree(n_lo: u32, n_hi: u32, opts: DotOptions) -> Result<String> {
    if n_lo < 1 || n_lo > n_hi {
        return Err(Error::LevelTooSmall { got: n_lo, min: 1 });
    }
    let nodes = node_count(n_lo, n_hi);
    if nodes > opts.max_nodes {
        return Err(Error::TreeTooLarge {
            nodes,
            limit: opts.max_nodes,
        });
    }
    let mut levels: BTreeMap<u32, Vec<VSetEntry>> = BTreeMap::new();
    for e in TreeWalk::new(n_lo, n_hi) {
        levels.entry(e.n).or_default().push(e);
    }

    let mut out = String::from("digraph vset {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut edges = String::new();
    for (n, entries) in &levels {
        writeln!(out, "  subgraph level_{n} {{\n    rank=same;").unwrap();
        for e in entries {
            let mut label = e.vector.to_digits();
            if opts.with_solutions {
                let sol = diophantine::solve_vector(&e.vector)?;
                write!(label, "\\nx={}", sol.x).unwrap();
            }
            writeln!(out, "    {} [label=\"{label}\"];", node_id(e.n, e.index)).unwrap();
            match e.parent {
                Parent::Step1 { index } if e.n > n_lo => {
                    writeln!(edges, "  {} -> {};", node_id(e.n - 1, index), node_id(e.n, e.index)).unwrap();
                }
                Parent::Step2 { index } => {
                    writeln!(
                        edges,
                        "  {} -> {} [style=dashed];",
                        node_id(e.n, index),
                        node_id(e.n, e.index)
                    )
                    .unwrap();
                }
                _ => {}
            }
        }
        out.push_str("  }\n");
    }
    out.push_str(&edges);
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str) -> ParityVector {
        s.parse().unwrap()
    }

    fn vecs(n: u32) -> Vec<ParityVector> {
        generate_vset(n).into_iter().map(|e| e.vector).collect()
    }

    #[test]
    fn first_levels() {
        assert_eq!(vecs(1), vec![pv("11")]);
        assert_eq!(vecs(2), vec![pv("1101"), pv("1110")]);
        assert_eq!(vecs(3), vec![pv("11011"), pv("11101"), pv("11110")]);
        let v6 = generate_vset(6);
        assert_eq!(v6.len(), 30);
        let last = v6.last().unwrap();
        assert_eq!(last.vector, pv("1111111000"));
        assert_eq!((last.h, last.p), (7, 1));
    }

    #[test]
    fn parent_links_follow_figure_two() {
        let v4 = generate_vset(4);
        // (1,1,1,1,0,0,1) -> (1,1,1,1,0,1,0) -> (1,1,1,1,1,0,0)
        assert_eq!(v4[4].vector, pv("1111001"));
        assert_eq!(v4[4].parent, Parent::Step1 { index: 2 });
        assert_eq!(v4[5].parent, Parent::Step2 { index: 4 });
        assert_eq!(v4[6].parent, Parent::Step2 { index: 5 });
        let v3 = generate_vset(3);
        assert_eq!(v3[0].parent, Parent::Step1 { index: 0 });
        assert_eq!(v3[1].parent, Parent::Step1 { index: 1 });
        assert_eq!(v3[2].parent, Parent::Step2 { index: 1 });
        assert_eq!(generate_vset(1)[0].parent, Parent::Root);
    }

    #[test]
    fn entries_are_well_formed() {
        for n in 1..=12 {
            let kappa = ladder::kappa(n) as usize;
            let entries = generate_vset(n);
            for e in &entries {
                assert_eq!(e.vector.len(), kappa + 1);
                assert_eq!(e.vector.count_ones(), n as usize + 1);
                assert!(e.vector.get(0) && e.vector.get(1));
                assert!(e.h >= 2 && e.h <= n + 1);
            }
            let last = entries.last().unwrap();
            assert_eq!((last.h, last.p), (n + 1, 1));
        }
    }

    #[test]
    fn histogram_examples() {
        let c6 = phn_counts(6);
        assert_eq!(
            c6.counts,
            BTreeMap::from([(2, 7), (3, 7), (4, 7), (5, 5), (6, 3), (7, 1)])
        );
        assert_eq!(phn_counts(7).get(2), 19);
        assert_eq!(phn_counts(1).counts, BTreeMap::from([(2, 1)]));
        let table = PhnTable::build(11);
        assert_eq!(table.get(2, 11), 525);
        assert_eq!(table.column(6).unwrap(), &c6);
    }

    #[test]
    fn lex_examples() {
        let t5: Vec<_> = lex_tuples(5).collect();
        assert_eq!(t5.len(), 15);
        assert_eq!(t5[0], pv("11001111"));
        assert_eq!(t5[11], pv("11110110"));
        assert_eq!(t5[14], pv("11111100"));
        assert_eq!(lex_tuples(1).collect::<Vec<_>>(), vec![pv("11")]);
        let mut sorted = t5.clone();
        sorted.sort();
        assert_eq!(sorted, t5);
    }

    #[test]
    fn ln_examples() {
        assert_eq!(ln_count(5), BigUint::from(15u32));
        assert_eq!(ln_count(11), BigUint::from(8008u32));
        assert_eq!(ln_count(1), BigUint::from(1u32));
        for n in 1..=12 {
            assert_eq!(BigUint::from(lex_tuples(n).count()), ln_count(n));
        }
    }

    #[test]
    fn dot_export() {
        let count = |s: &str| s.matches("[label=").count();
        assert_eq!(count(&export_tree(1, 4, DotOptions::default()).unwrap()), 13);
        assert_eq!(count(&export_tree(1, 1, DotOptions::default()).unwrap()), 1);
        assert_eq!(count(&export_tree(1, 6, DotOptions::default()).unwrap()), 55);
        let dot = export_tree(
            1,
            2,
            DotOptions {
                with_solutions: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(dot.contains("v1_0 -> v2_0;"));
        assert!(dot.contains("v2_0 -> v2_1 [style=dashed];"));
        assert!(dot.contains("x=11"));
        let err = export_tree(
            1,
            12,
            DotOptions {
                max_nodes: 100,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::TreeTooLarge {
                nodes: 1 + 2 + 3 + 7 + 12 + 30 + 85 + 173 + 476 + 961 + 2652 + 8045,
                limit: 100
            }
        );
    }
}
