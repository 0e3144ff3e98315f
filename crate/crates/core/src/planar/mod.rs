//! Planar perfect-matching machinery and the holographic algorithm for
//! `Holant([0,1,1,0] | =3)` on planar instances.
//!
//! Graphs carry their embedding as a rotation system: each vertex lists its
//! outgoing darts in cyclic order. Dart `2e` runs from `ends[0]` to
//! `ends[1]` of edge `e`, dart `2e + 1` the other way. Faces are the orbits
//! of `d ↦ succ_{head(d)}(rev(d))`.

pub mod generate;
pub mod holographic;
pub mod kasteleyn;
pub mod matchgate;
pub mod pfaffian;

use std::collections::VecDeque;

use thiserror::Error;

use crate::arith::Rat;
use crate::grid::GridError;

pub use holographic::{holographic_reduce, solve_planar_moderate_cover, PlanarGrid};
pub use kasteleyn::{count_pm, count_pm_bruteforce, kasteleyn_orient, Orientation, TreeStrategy};
pub use matchgate::{matchgate_signature, mg_a, mg_b, Matchgate};
pub use pfaffian::pfaffian;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarError {
    #[error("rotation system is not planar: component with {vertices} vertices, {edges} edges and {faces} faces")]
    NotGenusZero {
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("instance is not planar under the given rotation: {0}")]
    NotPlanarInstance(String),
    #[error("wrong signatures: {0}")]
    WrongSignatures(String),
    #[error("orientation violates the face parity condition")]
    BadOrientation,
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarEdge {
    pub ends: [usize; 2],
    pub weight: Rat,
}

/// Weighted multigraph with a rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarGraph {
    edges: Vec<PlanarEdge>,
    rotation: Vec<Vec<usize>>,
}

impl PlanarGraph {
    /// `n` isolated vertices.
    pub fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            rotation: vec![Vec::new(); n],
        }
    }

    /// Builds from per-vertex cyclic lists of incident edge indices.
    pub fn from_rotation(n: usize, edges: Vec<PlanarEdge>, rotation: Vec<Vec<usize>>) -> Result<Self, PlanarError> {
        if rotation.len() != n {
            return Err(PlanarError::InvalidRotation(format!(
                "{} rotation lists for {n} vertices",
                rotation.len()
            )));
        }
        let mut seen = vec![[false; 2]; edges.len()];
        let mut darts = vec![Vec::new(); n];
        for (v, list) in rotation.iter().enumerate() {
            for &e in list {
                let edge = edges
                    .get(e)
                    .ok_or_else(|| PlanarError::InvalidRotation(format!("vertex {v} lists unknown edge {e}")))?;
                if edge.ends[0] == edge.ends[1] {
                    return Err(PlanarError::SelfLoop(e));
                }
                let side = edge
                    .ends
                    .iter()
                    .position(|&x| x == v)
                    .ok_or_else(|| PlanarError::InvalidRotation(format!("edge {e} does not touch vertex {v}")))?;
                if seen[e][side] {
                    return Err(PlanarError::InvalidRotation(format!("edge {e} listed twice at vertex {v}")));
                }
                seen[e][side] = true;
                darts[v].push(2 * e + side);
            }
        }
        if let Some(e) = seen.iter().position(|s| !(s[0] && s[1])) {
            return Err(PlanarError::InvalidRotation(format!("edge {e} missing from a rotation")));
        }
        for (e, edge) in edges.iter().enumerate() {
            if edge.ends.iter().any(|&x| x >= n) {
                return Err(PlanarError::InvalidRotation(format!("edge {e} has an endpoint out of range")));
            }
        }
        Ok(Self {
            edges,
            rotation: darts,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edges(&self) -> &[PlanarEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &PlanarEdge {
        &self.edges[e]
    }

    /// Outgoing darts of `v` in cyclic order.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    /// Rotation as edge indices, the file representation.
    pub fn edge_rotation(&self) -> Vec<Vec<usize>> {
        self.rotation
            .iter()
            .map(|r| r.iter().map(|d| d / 2).collect())
            .collect()
    }

    pub fn tail(&self, d: usize) -> usize {
        self.edges[d / 2].ends[d % 2]
    }

    pub fn head(&self, d: usize) -> usize {
        self.edges[d / 2].ends[1 - d % 2]
    }

    /// Appends a copy of `other` with its vertices shifted past ours;
    /// returns the shift.
    pub fn append(&mut self, other: &PlanarGraph) -> usize {
        let shift = self.vertex_count();
        let base = self.edges.len();
        self.edges.extend(other.edges.iter().map(|e| PlanarEdge {
            ends: [e.ends[0] + shift, e.ends[1] + shift],
            weight: e.weight.clone(),
        }));
        self.rotation
            .extend(other.rotation.iter().map(|r| r.iter().map(|d| d + 2 * base).collect::<Vec<_>>()));
        shift
    }

    /// Appends a vertex with no edges.
    pub fn add_vertex(&mut self) -> usize {
        self.rotation.push(Vec::new());
        self.rotation.len() - 1
    }

    /// Adds edge `u–v`, placing its darts at rotation positions `pu` and `pv`
    /// (clamped to the list length). Returns the edge index.
    pub fn insert_edge(&mut self, u: usize, pu: usize, v: usize, pv: usize, weight: Rat) -> usize {
        assert_ne!(u, v, "self-loops are not supported");
        let e = self.edges.len();
        self.edges.push(PlanarEdge { ends: [u, v], weight });
        let pu = pu.min(self.rotation[u].len());
        self.rotation[u].insert(pu, 2 * e);
        let pv = pv.min(self.rotation[v].len());
        self.rotation[v].insert(pv, 2 * e + 1);
        e
    }

    /// Adds edge `u–v` at the end of both rotations.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: Rat) -> usize {
        self.insert_edge(u, usize::MAX, v, usize::MAX, weight)
    }

    pub fn set_weight(&mut self, e: usize, weight: Rat) {
        self.edges[e].weight = weight;
    }

    /// Splits edge `e` with a new degree-2 vertex adjacent to `ends[0]`;
    /// returns the vertex and the new edge running from it to the old
    /// `ends[1]`. Both halves keep the weight.
    pub fn subdivide_edge(&mut self, e: usize) -> (usize, usize) {
        let [_, v] = self.edges[e].ends;
        let x = self.add_vertex();
        let f = self.edges.len();
        self.edges.push(PlanarEdge {
            ends: [x, v],
            weight: self.edges[e].weight.clone(),
        });
        self.edges[e].ends[1] = x;
        let at = self.rotation[v]
            .iter()
            .position(|&d| d == 2 * e + 1)
            .expect("edge end is in the rotation");
        self.rotation[v][at] = 2 * f + 1;
        self.rotation[x] = vec![2 * e + 1, 2 * f];
        (x, f)
    }

    /// First dart of `u` whose head is `v`.
    pub fn dart_towards(&self, u: usize, v: usize) -> usize {
        *self.rotation[u]
            .iter()
            .find(|&&d| self.head(d) == v)
            .expect("vertices are adjacent")
    }

    /// Position of dart `d` in its tail's rotation.
    pub fn position(&self, d: usize) -> usize {
        self.rotation[self.tail(d)]
            .iter()
            .position(|&x| x == d)
            .expect("dart is in its tail's rotation")
    }

    /// The dart following `d` around the face on its left.
    pub fn next_in_face(&self, d: usize) -> usize {
        let r = d ^ 1;
        let w = self.tail(r);
        let rot = &self.rotation[w];
        let i = self.position(r);
        rot[(i + 1) % rot.len()]
    }

    /// Face walks as dart lists; every dart lies in exactly one walk.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut used = vec![false; 2 * self.edges.len()];
        let mut out = Vec::new();
        for start in 0..used.len() {
            if used[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !used[d] {
                used[d] = true;
                walk.push(d);
                d = self.next_in_face(d);
            }
            out.push(walk);
        }
        out
    }

    /// Face index of every dart.
    pub fn face_of_darts(&self, faces: &[Vec<usize>]) -> Vec<usize> {
        let mut f = vec![usize::MAX; 2 * self.edges.len()];
        for (i, walk) in faces.iter().enumerate() {
            for &d in walk {
                f[d] = i;
            }
        }
        f
    }

    /// Connected components, each a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &d in &self.rotation[u] {
                    let w = self.head(d);
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        q.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Checks `V − E + F = 2` on every component (an isolated vertex has one
    /// face).
    pub fn check_genus_zero(&self) -> Result<(), PlanarError> {
        let faces = self.faces();
        let comps = self.components();
        let mut comp_of = vec![0; self.vertex_count()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut counts = vec![(0usize, 0usize, 0usize); comps.len()];
        for (i, c) in comps.iter().enumerate() {
            counts[i].0 = c.len();
            if c.len() == 1 && self.rotation[c[0]].is_empty() {
                counts[i].2 = 1;
            }
        }
        for e in &self.edges {
            counts[comp_of[e.ends[0]]].1 += 1;
        }
        for walk in &faces {
            counts[comp_of[self.tail(walk[0])]].2 += 1;
        }
        for (v, e, f) in counts {
            if v + f != e + 2 {
                return Err(PlanarError::NotGenusZero {
                    vertices: v,
                    edges: e,
                    faces: f,
                });
            }
        }
        Ok(())
    }

    /// Subgraph on the vertices with `keep[v]`, renumbered in order; the
    /// rotation of each kept vertex is restricted, which keeps planarity.
    pub fn induced(&self, keep: &[bool]) -> PlanarGraph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        let mut n = 0;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                index[v] = n;
                n += 1;
            }
        }
        let mut edge_index = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if keep[edge.ends[0]] && keep[edge.ends[1]] {
                edge_index[e] = edges.len();
                edges.push(PlanarEdge {
                    ends: [index[edge.ends[0]], index[edge.ends[1]]],
                    weight: edge.weight.clone(),
                });
            }
        }
        let mut rotation = vec![Vec::new(); n];
        for (v, rot) in self.rotation.iter().enumerate() {
            if !keep[v] {
                continue;
            }
            for &d in rot {
                let e = edge_index[d / 2];
                if e != usize::MAX {
                    rotation[index[v]].push(2 * e + d % 2);
                }
            }
        }
        PlanarGraph { edges, rotation }
    }

    /// Removes edge `e`, keeping the remaining rotation order.
    pub fn remove_edge(&mut self, e: usize) {
        let last = self.edges.len() - 1;
        for rot in &mut self.rotation {
            rot.retain(|&d| d / 2 != e);
        }
        self.edges.swap_remove(e);
        if e != last {
            for rot in &mut self.rotation {
                for d in rot.iter_mut() {
                    if *d / 2 == last {
                        *d = 2 * e + *d % 2;
                    }
                }
            }
        }
    }

    /// Exact total weight incident to each unordered vertex pair, as a
    /// symmetric adjacency table.
    pub fn weight_matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.vertex_count();
        let mut m = vec![vec![Rat::from_integer(0.into()); n]; n];
        for e in &self.edges {
            let [u, v] = e.ends;
            m[u][v] += &e.weight;
            m[v][u] += &e.weight;
        }
        m
    }
}

/// Face walks of a genus-0 rotation system.
pub fn trace_faces(g: &PlanarGraph) -> Result<Vec<Vec<usize>>, PlanarError> {
    g.check_genus_zero()?;
    Ok(g.faces())
}
