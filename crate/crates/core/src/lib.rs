//! Exact arithmetic in finitely generated subgroups of elliptic curves and
//! the unit circle: group law, coset algebra, polynomial decompositions and a
//! three-valued formula evaluator.

pub mod cache;
pub mod cli;
pub mod coset;
pub mod error;
pub mod fg;
pub mod formula;
pub mod group;
pub mod ml;
pub mod num;
pub mod poly;
pub mod snf;
pub mod specfile;

pub use error::{Error, Result};
