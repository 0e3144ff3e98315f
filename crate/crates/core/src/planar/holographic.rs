//! Holographic reduction of planar `Holant([0,1,1,0] | =3)` to weighted
//! perfect matchings.
//!
//! Under the Hadamard basis change `[0,1,1,0]` becomes `¼[3,0,−1,0]` and
//! `=3` becomes `[2,0,2,0]`, both realized by matchgates. Substituting a
//! matchgate for every vertex and joining external vertices along the grid
//! edges gives a planar graph whose matching sum is the Holant value up to
//! the matchgate scalars.

use num::One;

use super::{count_pm, mg_a, mg_b, Matchgate, PlanarEdge, PlanarError, PlanarGraph};
use crate::arith::{int, Rat};
use crate::grid::gadgets::equality_tensor;
use crate::grid::rx3c::SetSystem;
use crate::grid::{GridError, Polarity, SignatureGrid};
use crate::sig::{SymSig, Tensor};

/// A signature grid with a cyclic slot order at every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarGrid {
    grid: SignatureGrid,
    rotation: Vec<Vec<usize>>,
}

impl PlanarGrid {
    /// `rotation[v]` must be a permutation of `v`'s slots.
    pub fn new(grid: SignatureGrid, rotation: Vec<Vec<usize>>) -> Result<Self, PlanarError> {
        grid.validate()?;
        if !grid.dangling().is_empty() {
            return Err(GridError::DanglingPorts(grid.dangling().len()).into());
        }
        if rotation.len() != grid.vertices().len() {
            return Err(PlanarError::InvalidRotation("one rotation per vertex expected".into()));
        }
        for (v, rot) in rotation.iter().enumerate() {
            let arity = grid.vertex(v).signature.arity();
            let mut seen = vec![false; arity];
            for &s in rot {
                if s >= arity || std::mem::replace(&mut seen[s], true) {
                    return Err(PlanarError::InvalidRotation(format!("vertex {v}: bad slot list {rot:?}")));
                }
            }
            if seen.iter().any(|&b| !b) {
                return Err(PlanarError::InvalidRotation(format!("vertex {v}: bad slot list {rot:?}")));
            }
        }
        Ok(Self { grid, rotation })
    }

    /// Slots in order `0, 1, …` at every vertex.
    pub fn with_slot_order(grid: SignatureGrid) -> Result<Self, PlanarError> {
        let rotation = grid
            .vertices()
            .iter()
            .map(|v| (0..v.signature.arity()).collect())
            .collect();
        Self::new(grid, rotation)
    }

    pub fn grid(&self) -> &SignatureGrid {
        &self.grid
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// The underlying unit-weight multigraph with the given rotations.
    pub fn embedding(&self) -> Result<PlanarGraph, PlanarError> {
        let n = self.grid.vertices().len();
        let mut slot_edge: Vec<Vec<usize>> = self
            .grid
            .vertices()
            .iter()
            .map(|v| vec![usize::MAX; v.signature.arity()])
            .collect();
        let mut edges = Vec::new();
        for (e, (a, b)) in self.grid.edges().iter().enumerate() {
            if a.vertex == b.vertex {
                return Err(PlanarError::SelfLoop(e));
            }
            slot_edge[a.vertex][a.slot] = e;
            slot_edge[b.vertex][b.slot] = e;
            edges.push(PlanarEdge {
                ends: [a.vertex, b.vertex],
                weight: int(1),
            });
        }
        let rotation = (0..n)
            .map(|v| self.rotation[v].iter().map(|&s| slot_edge[v][s]).collect())
            .collect();
        PlanarGraph::from_rotation(n, edges, rotation)
    }

    /// Checks the embedding has genus 0.
    pub fn check_planar(&self) -> Result<(), PlanarError> {
        self.embedding()?.check_genus_zero().map_err(|e| match e {
            PlanarError::NotGenusZero { .. } => PlanarError::NotPlanarInstance(e.to_string()),
            other => other,
        })
    }
}

/// The grid of a cubic bipartite embedded graph: `f` on the `L` side, `=3`
/// on the `R` side, slots numbered in rotation order.
pub fn planar_grid_from_graph(g: &PlanarGraph, side: &[Polarity], f: &SymSig) -> Result<PlanarGrid, PlanarError> {
    let mut grid = SignatureGrid::new();
    for (v, s) in side.iter().enumerate() {
        let arity = g.rotation(v).len();
        match s {
            Polarity::L => grid.add_left(f.to_tensor()),
            Polarity::R => grid.add_right(equality_tensor(arity)),
        };
    }
    for e in 0..g.edges().len() {
        let (u, v) = (g.tail(2 * e), g.head(2 * e));
        let (su, sv) = (g.position(2 * e), g.position(2 * e + 1));
        grid.link(u, su, v, sv);
    }
    PlanarGrid::with_slot_order(grid)
}

/// Replaces each `L` vertex by MG_A and each `R` vertex by MG_B. Returns
/// `G′` and the scalar with `scalar · #PM(G′) = Holant`.
pub fn holographic_reduce(pg: &PlanarGrid) -> Result<(PlanarGraph, Rat), PlanarError> {
    let f = SymSig::from_ints(&[0, 1, 1, 0]).to_tensor();
    let eq: Tensor = equality_tensor(3);
    let grid = pg.grid();
    for (v, vert) in grid.vertices().iter().enumerate() {
        let ok = if vert.polarity.iter().all(|&p| p == Polarity::L) {
            vert.signature == f
        } else if vert.polarity.iter().all(|&p| p == Polarity::R) {
            vert.signature == eq
        } else {
            false
        };
        if !ok {
            return Err(PlanarError::WrongSignatures(format!(
                "vertex {v} must be [0,1,1,0] on the left or =3 on the right"
            )));
        }
    }
    pg.check_planar()?;
    let (a, b) = (mg_a(), mg_b());
    let mut out = PlanarGraph::new(0);
    let mut scalar = Rat::one();
    // terminal[v][slot] = (vertex of G′, stub position)
    let mut terminal: Vec<Vec<(usize, usize)>> = Vec::new();
    for (v, vert) in grid.vertices().iter().enumerate() {
        let mg: &Matchgate = if vert.polarity[0] == Polarity::L { &a } else { &b };
        scalar *= mg.scalar();
        let shift = out.append(mg.graph());
        let mut t = vec![(0, 0); 3];
        for (i, &slot) in pg.rotation()[v].iter().enumerate() {
            t[slot] = (mg.external()[i] + shift, mg.stub_positions()[i]);
        }
        terminal.push(t);
    }
    for (p, q) in grid.edges() {
        let (x, px) = terminal[p.vertex][p.slot];
        let (y, py) = terminal[q.vertex][q.slot];
        out.insert_edge(x, px, y, py, int(1));
    }
    out.check_genus_zero()
        .map_err(|e| PlanarError::NotPlanarInstance(format!("reduced graph: {e}")))?;
    Ok((out, scalar))
}

/// `Holant([0,1,1,0] | =3)` of a planar grid through matchings.
pub fn solve_holographic(pg: &PlanarGrid) -> Result<Rat, PlanarError> {
    let (g, scalar) = holographic_reduce(pg)?;
    Ok(scalar * count_pm(&g)?)
}

/// A 3-uniform 3-regular hypergraph with, per element, the cyclic order of
/// its incidences as `(set index, position in set)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedHypergraph {
    pub system: SetSystem,
    pub rotation: Vec<Vec<(usize, usize)>>,
}

impl EmbeddedHypergraph {
    /// Without an explicit rotation, each element lists its incidences in
    /// order of appearance.
    pub fn new(system: SetSystem, rotation: Option<Vec<Vec<(usize, usize)>>>) -> Result<Self, PlanarError> {
        system.validate_incidence(false)?;
        let rotation = match rotation {
            Some(r) => r,
            None => {
                let mut r = vec![Vec::new(); system.ground.len()];
                for (j, s) in system.sets.iter().enumerate() {
                    for (p, x) in s.iter().enumerate() {
                        let i = system.ground.iter().position(|g| g == x).expect("validated");
                        r[i].push((j, p));
                    }
                }
                r
            }
        };
        let h = Self { system, rotation };
        h.check_rotation()?;
        Ok(h)
    }

    fn check_rotation(&self) -> Result<(), PlanarError> {
        let bad = |m: String| Err(PlanarError::InvalidRotation(m));
        if self.rotation.len() != self.system.ground.len() {
            return bad("one rotation per element expected".into());
        }
        let mut used = vec![[false; 3]; self.system.sets.len()];
        for (i, rot) in self.rotation.iter().enumerate() {
            if rot.len() != 3 {
                return bad(format!("element {} needs three incidences", self.system.ground[i]));
            }
            for &(j, p) in rot {
                if j >= self.system.sets.len() || p >= 3 || used[j][p] {
                    return bad(format!("bad incidence ({j}, {p})"));
                }
                if self.system.sets[j][p] != self.system.ground[i] {
                    return bad(format!("set {j} position {p} is not element {}", self.system.ground[i]));
                }
                used[j][p] = true;
            }
        }
        Ok(())
    }

    /// Incidence grid with `f` on elements (rotation order = slot order)
    /// and `=3` on sets (slot = position in the set).
    pub fn to_planar_grid(&self, f: &SymSig) -> Result<PlanarGrid, PlanarError> {
        let ne = self.system.ground.len();
        let mut grid = SignatureGrid::new();
        for _ in 0..ne {
            grid.add_left(f.to_tensor());
        }
        for _ in &self.system.sets {
            grid.add_right(equality_tensor(3));
        }
        for (i, rot) in self.rotation.iter().enumerate() {
            for (k, &(j, p)) in rot.iter().enumerate() {
                grid.link(i, k, ne + j, p);
            }
        }
        PlanarGrid::with_slot_order(grid)
    }
}

/// Number of hyperedge subsets covering every element once or twice.
pub fn solve_planar_moderate_cover(h: &EmbeddedHypergraph) -> Result<Rat, PlanarError> {
    solve_holographic(&h.to_planar_grid(&SymSig::from_ints(&[0, 1, 1, 0]))?)
}

/// The hypergraph read off a cubic bipartite embedded graph: `L` vertices
/// become elements `0, 1, …` and `R` vertices become sets.
pub fn hypergraph_from_graph(g: &PlanarGraph, side: &[Polarity]) -> EmbeddedHypergraph {
    let mut element = vec![usize::MAX; side.len()];
    let mut set = vec![usize::MAX; side.len()];
    let (mut ne, mut ns) = (0, 0);
    for (v, s) in side.iter().enumerate() {
        if *s == Polarity::L {
            element[v] = ne;
            ne += 1;
        } else {
            set[v] = ns;
            ns += 1;
        }
    }
    let mut sets = vec![[0i64; 3]; ns];
    let mut rotation = vec![Vec::new(); ne];
    for (v, s) in side.iter().enumerate() {
        if *s != Polarity::L {
            continue;
        }
        for &d in g.rotation(v) {
            let w = g.head(d);
            let p = g.position(d ^ 1);
            sets[set[w]][p] = element[v] as i64;
            rotation[element[v]].push((set[w], p));
        }
    }
    let system = SetSystem::new((0..ne as i64).collect(), sets);
    EmbeddedHypergraph { system, rotation }
}
