//! Boundary strata of moduli of marked bordered Riemann surfaces as
//! isomorphism classes of decorated dual graphs, their enumeration and the
//! degeneration order between them.

mod canonical;
mod enumerate;
mod graph;
mod moves;

pub use canonical::{canonical_key, canonicalize, CanonicalKey};
pub use enumerate::{
    degeneration_poset, enumerate_closed_strata, enumerate_strata, top_cyclic_orderings, top_strata, Cover,
    DegenerationPoset,
};
pub use graph::{
    is_piece_stable, BoundaryCircle, BoundaryPoint, BoundarySlot, InteriorSlot, NodeCensus, Piece, PieceKind,
    ResolvedCircle, StratumGraph,
};
pub use moves::{degenerations, MoveKind};
