//! Proper circular-arc models whose digraph powers are represented by
//! multiples of a single uniform model.
//!
//! The library decides, for a model `M` and an order `k`, whether some
//! uniform model `U` has `i×U` equivalent to `M^i` for every `i ≤ k`, builds
//! such a `U` when it exists, and otherwise returns a pair of disjoint greedy
//! cycles as a certificate. All arithmetic is exact.

pub mod batch;
pub mod construct;
pub mod decide;
pub mod drawing;
pub mod error;
pub mod gen;
pub mod io;
pub mod labeling;
pub mod model;
pub mod oracle;
pub mod power;
pub mod solver;
pub mod syngraph;

pub use construct::{construct, Construction, LexValue, Rational};
pub use decide::{authenticate_negative, decide, Decision, NegCert};
pub use error::{Error, Result};
pub use model::{Arc, ArcId, Circle, Coord, NavTables, PcaModel};
pub use power::{equivalent, power, EpsPoint, PowerModel};
pub use syngraph::{build_syn, build_syn_incremental, build_syn_star, EdgeKind, SynEdge, SynGraph};

/// Fixtures used throughout the tests and documentation.
pub mod fixtures {
    use crate::model::{Circle, PcaModel};

    /// Five arcs of length 3 on a circle of 10.
    pub fn e5() -> PcaModel {
        PcaModel::new(Circle::Finite(10), [(0, 3), (2, 5), (4, 7), (6, 9), (8, 1)]).unwrap()
    }

    /// Three intervals with no external arc.
    pub fn p3() -> PcaModel {
        PcaModel::new(Circle::Finite(100), [(0, 3), (2, 5), (4, 7)]).unwrap()
    }

    /// `(2i, 2(i+k)+1 mod 2n)` for `i < n`.
    pub fn power_cycle(n: usize, k: usize) -> PcaModel {
        let c = 2 * n as i128;
        PcaModel::new(
            Circle::Finite(c),
            (0..n as i128).map(|i| (2 * i, (2 * (i + k as i128) + 1).rem_euclid(c))),
        )
        .unwrap()
    }
}
