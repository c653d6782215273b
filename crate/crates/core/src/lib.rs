#![forbid(unsafe_code)]

//! Decision and construction algorithms for extending partial latin
//! rectangles: completion to latin squares of a prescribed order,
//! extension of frequency rectangles to frequency squares, saturation
//! of `(r, s, t)`-rectangles, and quasi-embeddings driven by partial
//! k-plexes. The constructive pipelines are backed by reusable
//! combinatorial engines (bipartite matching, systems of distinct
//! representatives, König decompositions, and flows with lower bounds)
//! and checked against an independent brute-force oracle.

pub mod cells;
pub mod conjugate;
pub mod cruse;
pub mod engines;
pub mod format;
pub mod frequency;
pub mod gapfill;
pub mod kplex;
pub mod oracle;
pub mod rect;
pub mod report;
pub mod samples;
pub mod saturated;
pub mod shuffle;

pub use cells::CellSet;
pub use conjugate::{conjugate, Role, RolePermutation};
pub use format::{parse_rect, serialize_rect, ParseError};
pub use rect::{Entry, LatinSquare, PartialLatinRectangle, ValidationError};
pub use report::{ConditionCheck, ConditionReport};
