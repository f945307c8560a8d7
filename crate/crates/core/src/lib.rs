//! Non-commuting cliques in finite groups.

pub mod bitset;
pub mod clique;
pub mod field;
pub mod formulas;
pub mod group;
pub mod harness;
pub mod ncgraph;
pub mod structure;
