//! Residue classes of finite stopping time for the 3x+1 map.
//!
//! The crate builds the count triangle `R(k, n)`, generates the parity
//! vector sets `V(n)` as a rooted tree, solves each vector for its residue
//! class modulo `2^sigma`, and checks all of it against direct simulation.
//!
//! ```
//! use collatz_core::{diophantine, ParityVector};
//!
//! let v: ParityVector = "1,1,0,1,1".parse().unwrap();
//! let s = diophantine::solve_vector(&v).unwrap();
//! assert_eq!((s.x.to_string(), s.y.to_string()), ("59".into(), "38".into()));
//! ```

pub mod diophantine;
pub mod error;
pub mod ladder;
pub mod map;
pub mod oeis;
pub mod parity;
pub mod tree;
pub mod triangle;
pub mod verify;

pub use diophantine::{Solution, SolvedEntry};
pub use error::{Error, Result};
pub use ladder::LadderRow;
pub use map::{ResidueClass, StoppingTime};
pub use oeis::Sequence;
pub use parity::ParityVector;
pub use tree::{Parent, VSetEntry};
pub use triangle::TriangleTable;
pub use verify::{ResidueBlock, SurvivalRecord, VerificationReport};
