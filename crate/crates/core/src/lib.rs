//! Exact computations around finite groups of plane Cremona maps:
//! Picard lattices of Del Pezzo surfaces, Weyl-group matrices, explicit
//! birational maps, and de Jonquières elements.

pub mod cremaps;
pub mod exactmath;
pub mod jonquieres;
pub mod piclattice;
pub mod weylaction;

use serde::Serialize;

/// Outcome of an order search with a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Order {
    Finite(u64),
    OverCap,
}
