//! JSON interchange formats.
//!
//! Coordinates travel as JSON integers and must fit in `i64`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::polytope::{lattice_point, point_to_i64, AffineUnimodularMap, Polytope};

/// `{ "ambient_dim": n, "points": [[...], ...] }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub ambient_dim: usize,
    pub points: Vec<Vec<i64>>,
}

impl PolytopeJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("polytope JSON: {e}")))
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        Polytope::new(self.ambient_dim, self.points.iter().map(|p| lattice_point(p)).collect())
    }

    /// The generators of `p` as given.
    pub fn from_generators(p: &Polytope) -> Result<Self> {
        Ok(PolytopeJson {
            ambient_dim: p.ambient_dim(),
            points: p.generators().iter().map(|g| point_to_i64(g)).collect::<Result<_>>()?,
        })
    }

    pub fn from_vertices(p: &Polytope) -> Result<Self> {
        Ok(PolytopeJson {
            ambient_dim: p.ambient_dim(),
            points: p.vertices().iter().map(|g| point_to_i64(g)).collect::<Result<_>>()?,
        })
    }
}

/// `{ "n": 14, "arcs": [[1, 8], ...] }`, vertices numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphJson {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl DigraphJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("digraph JSON: {e}")))
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        Digraph::new(self.n, self.arcs.iter().map(|a| (a[0], a[1])).collect())
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        DigraphJson {
            n: g.vertex_count(),
            arcs: g.arcs().iter().map(|&(t, h)| [t, h]).collect(),
        }
    }
}

/// `{ "matrix": [[...]], "translation": [...] }` for `x -> U x + t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl MapJson {
    pub fn from_map(m: &AffineUnimodularMap) -> Result<Self> {
        Ok(MapJson {
            matrix: m.matrix.to_i64_rows()?,
            translation: point_to_i64(&m.translation)?,
        })
    }
}

pub fn bigints_to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    point_to_i64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytope_round_trip() {
        let text = r#"{ "ambient_dim": 2, "points": [[0, 0], [1, 0], [0, 1]] }"#;
        let j = PolytopeJson::parse(text).unwrap();
        let p = j.to_polytope().unwrap();
        assert_eq!(PolytopeJson::from_generators(&p).unwrap(), j);
    }

    #[test]
    fn malformed_inputs() {
        assert!(PolytopeJson::parse("{").is_err());
        assert!(PolytopeJson::parse(r#"{ "ambient_dim": 2, "points": [[0.5, 0]] }"#).is_err());
        assert!(PolytopeJson::parse(r#"{ "ambient_dim": 2, "points": [], "extra": 1 }"#).is_err());
        let short = PolytopeJson::parse(r#"{ "ambient_dim": 2, "points": [[0]] }"#).unwrap();
        assert!(short.to_polytope().is_err());
        let empty = PolytopeJson::parse(r#"{ "ambient_dim": 2, "points": [] }"#).unwrap();
        assert!(empty.to_polytope().is_err());
    }

    #[test]
    fn digraph_round_trip() {
        let j = DigraphJson::parse(r#"{ "n": 3, "arcs": [[1, 2], [2, 3]] }"#).unwrap();
        let g = j.to_digraph().unwrap();
        assert_eq!(DigraphJson::from_digraph(&g), j);
        assert!(DigraphJson::parse(r#"{ "n": 3, "arcs": [[1, 1]] }"#).unwrap().to_digraph().is_err());
    }
}
