//! The bundled example polytopes and graph.
//!
//! Each dataset exists twice: as the constants below and as a JSON file under
//! `data/`. The tests check that the two copies agree.

use crate::digraph::{figure1_graph, Digraph};
use crate::polytope::{lattice_point, Polytope};

/// `e_1, ..., e_7` and two further vertices in `Z^7`.
pub const THEOREM1_POINTS: [[i64; 7]; 9] = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1],
    [1, -1, -1, -1, -1, 0, 0],
    [-1, -1, 0, 0, 0, -1, -1],
];

/// `0, e_2, ..., e_12` and three further 0/1 vectors in `Z^12`.
pub const THEOREM2_POINTS: [[i64; 12]; 15] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
];

pub const FIGURE1_ARCS: [(usize, usize); 15] = [
    (1, 8),
    (1, 12),
    (1, 14),
    (2, 8),
    (3, 9),
    (4, 11),
    (5, 12),
    (6, 13),
    (7, 14),
    (9, 2),
    (10, 3),
    (10, 4),
    (10, 6),
    (11, 5),
    (13, 7),
];

pub const THEOREM1_JSON: &str = include_str!("../data/theorem1.json");
pub const THEOREM2_JSON: &str = include_str!("../data/theorem2.json");
pub const FIGURE1_JSON: &str = include_str!("../data/figure1.json");

pub fn theorem1() -> Polytope {
    Polytope::new(7, THEOREM1_POINTS.iter().map(|p| lattice_point(p)).collect()).expect("bundled data")
}

pub fn theorem2() -> Polytope {
    Polytope::new(12, THEOREM2_POINTS.iter().map(|p| lattice_point(p)).collect()).expect("bundled data")
}

pub fn figure1() -> Digraph {
    figure1_graph()
}
