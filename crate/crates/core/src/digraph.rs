//! Directed graphs and their arc polytopes.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::polytope::Polytope;

/// Vertices `1..=n` and an ordered list of arcs `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(t, h) in &arcs {
            if t == 0 || h == 0 || t > n || h > n {
                return Err(Error::InvalidInput(format!("arc ({t}, {h}) outside vertices 1..={n}")));
            }
            if t == h {
                return Err(Error::InvalidInput(format!("loop at vertex {t}")));
            }
            if !seen.insert((t, h)) {
                return Err(Error::InvalidInput(format!("duplicate arc ({t}, {h})")));
            }
        }
        Ok(Digraph { n, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Two-colouring of the underlying undirected graph, as the sorted colour
    /// classes (the class of vertex 1 first), if it exists.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(t, h) in &self.arcs {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut colour = vec![None; self.n + 1];
        for start in 1..=self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u]?;
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let side = |c: bool| (1..=self.n).filter(|&v| colour[v] == Some(c)).collect();
        Some((side(false), side(true)))
    }
}

/// `n x |A|` matrix; the column of arc `(u, v)` has `-1` in row `u` and `+1` in row `v`.
pub fn incidence_matrix(g: &Digraph) -> IntMatrix {
    let mut m = IntMatrix::zeros(g.n, g.arcs.len());
    for (j, &(t, h)) in g.arcs.iter().enumerate() {
        m[(t - 1, j)] = BigInt::from(-1);
        m[(h - 1, j)] = BigInt::from(1);
    }
    m
}

/// Convex hull of the incidence matrix columns in `Z^n`.
pub fn arc_polytope(g: &Digraph) -> Result<Polytope> {
    if g.arcs.is_empty() {
        return Err(Error::Empty("arc polytope of a graph without arcs"));
    }
    let m = incidence_matrix(g);
    Polytope::new(g.n, (0..g.arcs.len()).map(|j| m.column(j)).collect())
}

/// The directed bipartite graph on 14 vertices of the bundled example.
pub fn figure1_graph() -> Digraph {
    Digraph::new(14, crate::data::FIGURE1_ARCS.to_vec()).expect("bundled graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn single_arc() {
        let g = Digraph::new(2, vec![(1, 2)]).unwrap();
        assert_eq!(incidence_matrix(&g), IntMatrix::from_i64(&[&[-1], &[1]]));
        assert_eq!(arc_polytope(&g).unwrap().dim(), 0);
    }

    #[test]
    fn empty_arc_list() {
        let g = Digraph::new(3, vec![]).unwrap();
        let m = incidence_matrix(&g);
        assert_eq!((m.rows(), m.cols()), (3, 0));
        assert!(arc_polytope(&g).is_err());
    }

    #[test]
    fn invalid_graphs() {
        assert!(Digraph::new(2, vec![(1, 3)]).is_err());
        assert!(Digraph::new(2, vec![(0, 1)]).is_err());
        assert!(Digraph::new(2, vec![(2, 2)]).is_err());
        assert!(Digraph::new(2, vec![(1, 2), (1, 2)]).is_err());
    }

    #[test]
    fn directed_path_gives_a_primitive_segment() {
        let g = Digraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let p = arc_polytope(&g).unwrap();
        let (q, _) = p.normalized();
        assert_eq!(q.ambient_dim(), 1);
        let v = q.vertices();
        assert_eq!((&v[1][0] - &v[0][0]), BigInt::from(1));
    }

    #[test]
    fn figure1_shape() {
        let g = figure1_graph();
        assert_eq!(g.arcs().len(), 15);
        assert_eq!(g.arcs()[0], (1, 8));
        let (a, b) = g.bipartition().unwrap();
        assert_eq!(a, (1..=7).collect::<Vec<_>>());
        assert_eq!(b, (8..=14).collect::<Vec<_>>());
        let m = incidence_matrix(&g);
        for j in 0..m.cols() {
            let col = m.column(j);
            assert!(col.iter().sum::<BigInt>().is_zero());
            assert_eq!(col.iter().filter(|x| **x == BigInt::from(1)).count(), 1);
            assert_eq!(col.iter().filter(|x| **x == BigInt::from(-1)).count(), 1);
        }
        assert_eq!(m.column(0)[0], BigInt::from(-1));
        assert_eq!(m.column(0)[7], BigInt::from(1));
    }

    #[test]
    fn odd_cycle_is_not_bipartite() {
        let g = Digraph::new(3, vec![(1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(g.bipartition().is_none());
    }
}
