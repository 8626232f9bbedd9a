//! Inputs shared by the benchmarks.

use reflex_core::polytope::standard;
use reflex_core::LatticePolytope;

/// Reflexive polytopes of increasing size, labelled for reports.
pub fn corpus() -> Vec<(&'static str, LatticePolytope)> {
    vec![
        ("cube3", standard::cube(3)),
        ("fermat3", standard::fermat(3)),
        ("p2xp2", standard::p2xp2_fan()),
        ("fermat4", standard::fermat(4)),
    ]
}
