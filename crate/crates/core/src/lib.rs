//! Promise equations over finite monoids and groups: tractability classification,
//! LP and affine-integer relaxations, monoidal minions, and digraph reductions.

pub mod algebra;
pub mod classify;
pub mod corpus;
pub mod eqsys;
pub mod error;
pub mod minion;
pub mod reduce;
pub mod solve;
pub mod relax;

pub use error::{Error, Result};
