//! Port-explicit bipartite signature grids and gadgets.
//!
//! Every vertex carries a dense [`Tensor`] and a polarity per slot. An edge
//! always joins an `L` port to an `R` port; `f`-vertices have all-`L` ports,
//! `=3`-vertices all-`R` ports, and straddled vertices (binary gadgets such
//! as G1 or the interpolated `D`) mix the two. A grid with dangling ports is
//! a gadget: its [`contract`](SignatureGrid::contract)ion is a tensor over
//! the dangling list, in list order.

mod eval;
pub mod gadgets;
pub mod rx3c;
pub mod search;
pub mod topology;

use std::collections::VecDeque;

use thiserror::Error;

use crate::arith::{QuadExt, Rat, Scalar};
use crate::sig::{SigError, SymSig, Tensor};

pub use eval::{EvalOptions, DEFAULT_MAX_EDGES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    /// Port of an LHS vertex; connects to `R` ports.
    L,
    /// Port of an RHS vertex; connects to `L` ports.
    R,
}

impl Polarity {
    pub fn opposite(self) -> Self {
        match self {
            Polarity::L => Polarity::R,
            Polarity::R => Polarity::L,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub vertex: usize,
    pub slot: usize,
}

impl Port {
    pub fn new(vertex: usize, slot: usize) -> Self {
        Self { vertex, slot }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex<T = Rat> {
    pub signature: Tensor<T>,
    pub polarity: Vec<Polarity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid has {0} dangling ports; close them before evaluating")]
    DanglingPorts(usize),
    #[error("vertex {vertex}: slot {slot} out of range for arity {arity}")]
    ArityMismatch {
        vertex: usize,
        slot: usize,
        arity: usize,
    },
    #[error("vertex {vertex}: {found} polarities for arity {arity}")]
    PolarityCount {
        vertex: usize,
        arity: usize,
        found: usize,
    },
    #[error("edge {edge} joins two {polarity:?} ports")]
    PolarityViolation { edge: usize, polarity: Polarity },
    #[error("port {0:?} is used more than once")]
    PortReused(Port),
    #[error("port {0:?} is neither connected nor dangling")]
    PortUnused(Port),
    #[error("no vertex {0}")]
    NoSuchVertex(usize),
    #[error("{found} enumerated edges exceed the brute-force cap of {cap}")]
    TooManyEdges { found: usize, cap: usize },
    #[error("vertex {0} is not ternary")]
    NonTernaryVertex(usize),
    #[error("replacement does not fit vertex {vertex}: {reason}")]
    BadReplacement { vertex: usize, reason: String },
    #[error("set system is not 3-regular: element {element} occurs {count} times")]
    NotThreeRegular { element: i64, count: usize },
    #[error("set {index} is not a 3-element subset of the ground set")]
    InvalidSet { index: usize },
    #[error("grid is not a pure f / =3 instance: {0}")]
    NotPureInstance(String),
    #[error("no gadget within the size bounds realizes the target")]
    NotFound,
    #[error(transparent)]
    Sig(#[from] SigError),
}

/// Bipartite signature grid; a gadget when `dangling` is nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureGrid<T = Rat> {
    vertices: Vec<Vertex<T>>,
    edges: Vec<(Port, Port)>,
    dangling: Vec<Port>,
}

/// A signature grid with dangling ports.
pub type Gadget<T = Rat> = SignatureGrid<T>;

impl<T: Scalar> Default for SignatureGrid<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> SignatureGrid<T> {
    pub fn new() -> Self {
        Self {
            vertices: Vec::new(),
            edges: Vec::new(),
            dangling: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, signature: Tensor<T>, polarity: Vec<Polarity>) -> usize {
        self.vertices.push(Vertex {
            signature,
            polarity,
        });
        self.vertices.len() - 1
    }

    /// Vertex whose ports are all `L`.
    pub fn add_left(&mut self, signature: Tensor<T>) -> usize {
        let p = vec![Polarity::L; signature.arity()];
        self.add_vertex(signature, p)
    }

    /// Vertex whose ports are all `R`.
    pub fn add_right(&mut self, signature: Tensor<T>) -> usize {
        let p = vec![Polarity::R; signature.arity()];
        self.add_vertex(signature, p)
    }

    pub fn connect(&mut self, a: Port, b: Port) {
        self.edges.push((a, b));
    }

    pub fn link(&mut self, u: usize, su: usize, v: usize, sv: usize) {
        self.connect(Port::new(u, su), Port::new(v, sv));
    }

    pub fn add_dangling(&mut self, p: Port) {
        self.dangling.push(p);
    }

    /// Removes and returns the dangling list, leaving those ports unused.
    pub fn take_dangling(&mut self) -> Vec<Port> {
        std::mem::take(&mut self.dangling)
    }

    pub fn vertices(&self) -> &[Vertex<T>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex<T> {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[(Port, Port)] {
        &self.edges
    }

    pub fn dangling(&self) -> &[Port] {
        &self.dangling
    }

    pub fn polarity(&self, p: Port) -> Polarity {
        self.vertices[p.vertex].polarity[p.slot]
    }

    pub fn dangling_polarity(&self) -> Vec<Polarity> {
        self.dangling.iter().map(|&p| self.polarity(p)).collect()
    }

    /// Checks slots, polarities and that every port is used exactly once.
    pub fn validate(&self) -> Result<(), GridError> {
        let mut used: Vec<Vec<bool>> = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let arity = v.signature.arity();
            if v.polarity.len() != arity {
                return Err(GridError::PolarityCount {
                    vertex: i,
                    arity,
                    found: v.polarity.len(),
                });
            }
            used.push(vec![false; arity]);
        }
        let mut mark = |p: Port| -> Result<(), GridError> {
            let slots = used.get_mut(p.vertex).ok_or(GridError::NoSuchVertex(p.vertex))?;
            let arity = slots.len();
            let flag = slots.get_mut(p.slot).ok_or(GridError::ArityMismatch {
                vertex: p.vertex,
                slot: p.slot,
                arity,
            })?;
            if *flag {
                return Err(GridError::PortReused(p));
            }
            *flag = true;
            Ok(())
        };
        for &(a, b) in &self.edges {
            mark(a)?;
            mark(b)?;
        }
        for &p in &self.dangling {
            mark(p)?;
        }
        for (i, (a, b)) in self.edges.iter().enumerate() {
            let pa = self.polarity(*a);
            if pa == self.polarity(*b) {
                return Err(GridError::PolarityViolation {
                    edge: i,
                    polarity: pa,
                });
            }
        }
        for (v, slots) in used.iter().enumerate() {
            if let Some(slot) = slots.iter().position(|u| !u) {
                return Err(GridError::PortUnused(Port::new(v, slot)));
            }
        }
        Ok(())
    }

    /// Exact Holant value of a closed grid by exhaustive enumeration.
    pub fn holant(&self) -> Result<T, GridError> {
        self.holant_with(&EvalOptions::default())
    }

    pub fn holant_with(&self, opts: &EvalOptions) -> Result<T, GridError> {
        if !self.dangling.is_empty() {
            return Err(GridError::DanglingPorts(self.dangling.len()));
        }
        let t = self.contract_with(opts)?;
        Ok(t.get(0).clone())
    }

    /// Signature of the gadget over its dangling ports, with the polarity of
    /// each dangling port.
    pub fn contract(&self) -> Result<(Tensor<T>, Vec<Polarity>), GridError> {
        let t = self.contract_with(&EvalOptions::default())?;
        Ok((t, self.dangling_polarity()))
    }

    pub fn contract_with(&self, opts: &EvalOptions) -> Result<Tensor<T>, GridError> {
        self.validate()?;
        eval::contract(self, opts)
    }

    /// Replaces the signature of vertex `v`, keeping arity and polarity.
    pub fn with_signature(&self, v: usize, signature: Tensor<T>) -> Result<Self, GridError> {
        let old = self.vertices.get(v).ok_or(GridError::NoSuchVertex(v))?;
        if old.signature.arity() != signature.arity() {
            return Err(GridError::BadReplacement {
                vertex: v,
                reason: format!("arity {} vs {}", old.signature.arity(), signature.arity()),
            });
        }
        let mut g = self.clone();
        g.vertices[v].signature = signature;
        Ok(g)
    }

    /// Replaces vertex `v` by a gadget whose dangling ports, in order, take
    /// over the vertex's slots. Dangling polarities must match.
    pub fn replace_with_gadget(&self, v: usize, gadget: &SignatureGrid<T>) -> Result<Self, GridError> {
        let old = self.vertices.get(v).ok_or(GridError::NoSuchVertex(v))?;
        if gadget.dangling_polarity() != old.polarity {
            return Err(GridError::BadReplacement {
                vertex: v,
                reason: format!(
                    "gadget exposes {:?}, vertex has {:?}",
                    gadget.dangling_polarity(),
                    old.polarity
                ),
            });
        }
        let mut out = SignatureGrid::new();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for (i, vert) in self.vertices.iter().enumerate() {
            if i != v {
                remap[i] = out.add_vertex(vert.signature.clone(), vert.polarity.clone());
            }
        }
        let offset = out.vertices.len();
        for vert in &gadget.vertices {
            out.add_vertex(vert.signature.clone(), vert.polarity.clone());
        }
        let shift = |p: Port| Port::new(p.vertex + offset, p.slot);
        let route = |p: Port| {
            if p.vertex == v {
                shift(gadget.dangling[p.slot])
            } else {
                Port::new(remap[p.vertex], p.slot)
            }
        };
        for &(a, b) in &self.edges {
            out.connect(route(a), route(b));
        }
        for &(a, b) in &gadget.edges {
            out.connect(shift(a), shift(b));
        }
        for &p in &self.dangling {
            out.add_dangling(route(p));
        }
        Ok(out)
    }

    /// Replaces a binary straddled vertex by the identity, joining its two
    /// neighbours directly. A vertex wired to itself becomes the trace of
    /// the identity, a scalar factor 2.
    pub fn splice_identity(&self, v: usize) -> Result<Self, GridError> {
        let old = self.vertices.get(v).ok_or(GridError::NoSuchVertex(v))?;
        if old.polarity.len() != 2 || old.polarity[0] == old.polarity[1] {
            return Err(GridError::BadReplacement {
                vertex: v,
                reason: "identity splice needs a binary vertex with one L and one R port".into(),
            });
        }
        // Partner of each slot: Some(port) for an edge, None when dangling.
        let mut partner: [Option<Option<Port>>; 2] = [None, None];
        let mut self_loop = false;
        for &(a, b) in &self.edges {
            if a.vertex == v && b.vertex == v {
                self_loop = true;
            } else if a.vertex == v {
                partner[a.slot] = Some(Some(b));
            } else if b.vertex == v {
                partner[b.slot] = Some(Some(a));
            }
        }
        for &p in &self.dangling {
            if p.vertex == v {
                partner[p.slot] = Some(None);
            }
        }
        let mut out = SignatureGrid::new();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for (i, vert) in self.vertices.iter().enumerate() {
            if i != v {
                remap[i] = out.add_vertex(vert.signature.clone(), vert.polarity.clone());
            }
        }
        let re = |p: Port| Port::new(remap[p.vertex], p.slot);
        for &(a, b) in &self.edges {
            if a.vertex != v && b.vertex != v {
                out.connect(re(a), re(b));
            }
        }
        if self_loop {
            let two = T::one() + T::one();
            out.add_vertex(Tensor::scalar(two), vec![]);
        } else {
            match (partner[0].flatten(), partner[1].flatten()) {
                (Some(p), Some(q)) => out.connect(re(p), re(q)),
                // one end dangling: the partner of the other end inherits
                // the dangling slot
                (Some(p), None) | (None, Some(p)) => {
                    let mut dangling = Vec::new();
                    for &d in &self.dangling {
                        if d.vertex == v {
                            dangling.push(re(p));
                        } else {
                            dangling.push(re(d));
                        }
                    }
                    out.dangling = dangling;
                    return Ok(out);
                }
                (None, None) => {
                    return Err(GridError::BadReplacement {
                        vertex: v,
                        reason: "both ends dangling".into(),
                    })
                }
            }
        }
        for &d in &self.dangling {
            out.add_dangling(re(d));
        }
        Ok(out)
    }

    /// Inserts a binary vertex into edge `e`: its slot 0 (L) takes the edge's
    /// R end and its slot 1 (R) the L end. Returns the new vertex.
    pub fn subdivide_edge(&mut self, e: usize, signature: Tensor<T>) -> usize {
        let (a, b) = self.edges[e];
        let (l, r) = if self.polarity(a) == Polarity::L { (a, b) } else { (b, a) };
        let v = self.add_vertex(signature, vec![Polarity::L, Polarity::R]);
        self.edges[e] = (r, Port::new(v, 0));
        self.edges.push((Port::new(v, 1), l));
        v
    }

    /// Disjoint union; `other`'s vertices are appended after `self`'s and its
    /// dangling ports follow `self`'s.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        let offset = out.vertices.len();
        out.vertices.extend(other.vertices.iter().cloned());
        let shift = |p: Port| Port::new(p.vertex + offset, p.slot);
        out.edges
            .extend(other.edges.iter().map(|&(a, b)| (shift(a), shift(b))));
        out.dangling.extend(other.dangling.iter().map(|&p| shift(p)));
        out
    }

    /// Converts every signature entry.
    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SignatureGrid<U> {
        SignatureGrid {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    signature: v.signature.map(&f),
                    polarity: v.polarity.clone(),
                })
                .collect(),
            edges: self.edges.clone(),
            dangling: self.dangling.clone(),
        }
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a.vertex].push(b.vertex);
            adj[b.vertex].push(a.vertex);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Closes dangling port `i` of the gadget with a unary vertex of the
    /// opposite polarity. The remaining dangling ports keep their order.
    pub fn close_dangling(&self, i: usize, unary: Tensor<T>) -> Self {
        let mut g = self.clone();
        let p = g.dangling.remove(i);
        let pol = self.polarity(p).opposite();
        let u = g.add_vertex(unary, vec![pol]);
        g.connect(p, Port::new(u, 0));
        g
    }
}

impl SignatureGrid<Rat> {
    pub fn to_quad(&self) -> SignatureGrid<QuadExt> {
        self.map_scalars(|v| QuadExt::from_rat(v.clone()))
    }
}

/// Residues of the dangling counts of a gadget built from ternary vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArityResidues {
    /// `#L dangling mod 3`.
    pub left: usize,
    /// `#R dangling mod 3`.
    pub right: usize,
}

impl ArityResidues {
    pub fn consistent(&self) -> bool {
        self.left == self.right
    }
}

/// `(#L dangling mod 3, #R dangling mod 3)`; the two agree for every
/// well-formed gadget over ternary signatures.
pub fn check_arity_mod3<T: Scalar>(g: &SignatureGrid<T>) -> Result<ArityResidues, GridError> {
    if let Some(v) = g.vertices.iter().position(|v| v.signature.arity() != 3) {
        return Err(GridError::NonTernaryVertex(v));
    }
    let pols = g.dangling_polarity();
    let l = pols.iter().filter(|&&p| p == Polarity::L).count();
    Ok(ArityResidues {
        left: l % 3,
        right: (pols.len() - l) % 3,
    })
}

/// Unary `[u0, u1]` as a tensor.
pub fn unary<T: Scalar>(u0: T, u1: T) -> Tensor<T> {
    Tensor::new(1, vec![u0, u1]).expect("two entries")
}

/// Grid of a single symmetric signature: all ports dangling.
pub fn single_vertex_gadget(f: &SymSig, polarity: Polarity) -> SignatureGrid {
    let mut g = SignatureGrid::new();
    let v = g.add_vertex(f.to_tensor(), vec![polarity; f.arity()]);
    for s in 0..f.arity() {
        g.add_dangling(Port::new(v, s));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::topology::{random_gadget, random_mixed_gadget, random_pure_grid, random_rat};
    use super::*;
    use crate::arith::int;
    use crate::grid::gadgets::equality_tensor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_by_two(f: &SymSig) -> SignatureGrid {
        let mut g = SignatureGrid::new();
        let u1 = g.add_left(f.to_tensor());
        let u2 = g.add_left(f.to_tensor());
        let v1 = g.add_right(equality_tensor(3));
        let v2 = g.add_right(equality_tensor(3));
        g.link(u1, 0, v1, 0);
        g.link(u1, 1, v1, 1);
        g.link(u1, 2, v2, 0);
        g.link(u2, 0, v1, 2);
        g.link(u2, 1, v2, 1);
        g.link(u2, 2, v2, 2);
        g
    }

    #[test]
    fn triple_edge_is_end_sum() {
        let mut g = SignatureGrid::new();
        let u = g.add_left(SymSig::from_ints(&[3, 5, 7, 11]).to_tensor());
        let v = g.add_right(equality_tensor(3));
        for s in 0..3 {
            g.link(u, s, v, s);
        }
        assert_eq!(g.holant().unwrap(), int(14));
    }

    #[test]
    fn two_plus_two_multigraph() {
        assert_eq!(two_by_two(&SymSig::from_ints(&[0, 1, 1, 0])).holant().unwrap(), int(2));
        assert_eq!(two_by_two(&SymSig::from_ints(&[1, 1, 1, 1])).holant().unwrap(), int(4));
    }

    #[test]
    fn structural_errors() {
        let f = SymSig::from_ints(&[1, 0, 0, 1]).to_tensor();
        let mut g = SignatureGrid::new();
        let a = g.add_left(f.clone());
        let b = g.add_left(f.clone());
        for s in 0..3 {
            g.link(a, s, b, s);
        }
        assert!(matches!(g.holant(), Err(GridError::PolarityViolation { .. })));

        let mut g = SignatureGrid::new();
        let a = g.add_left(f.clone());
        let e = g.add_right(equality_tensor(3));
        g.link(a, 0, e, 0);
        g.link(a, 0, e, 1);
        assert!(matches!(g.holant(), Err(GridError::PortReused(_))));

        let mut g = SignatureGrid::new();
        let a = g.add_left(f.clone());
        let e = g.add_right(equality_tensor(3));
        g.link(a, 0, e, 0);
        g.link(a, 5, e, 1);
        assert!(matches!(g.holant(), Err(GridError::ArityMismatch { slot: 5, .. })));

        let g = single_vertex_gadget(&SymSig::from_ints(&[1, 2, 3, 4]), Polarity::L);
        assert!(matches!(g.holant(), Err(GridError::DanglingPorts(3))));
        let (t, pol) = g.contract().unwrap();
        assert_eq!(t, SymSig::from_ints(&[1, 2, 3, 4]).to_tensor());
        assert_eq!(pol, vec![Polarity::L; 3]);
        assert_eq!(
            check_arity_mod3(&g).unwrap(),
            ArityResidues { left: 0, right: 0 }
        );
    }

    #[test]
    fn edge_cap_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_pure_grid(&mut rng, 3, &SymSig::from_ints(&[1, 1, 0, 1]).to_tensor());
        assert!(matches!(
            g.holant_with(&EvalOptions::with_max_edges(8)),
            Err(GridError::TooManyEdges { found: 9, cap: 8 })
        ));
    }

    /// Sum over closings of all dangling ports by basis unaries, weighted by
    /// the contracted entry, reproduces the value of the grid closed by the
    /// given unaries.
    #[test]
    fn contraction_matches_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..60 {
            let nv = rng.gen_range(1..5);
            let ne = rng.gen_range(0..6);
            let g = random_mixed_gadget(&mut rng, nv, ne);
            let (t, _) = g.contract().unwrap();
            let d = g.dangling().len();
            let unaries: Vec<Tensor> = (0..d)
                .map(|_| unary(random_rat(&mut rng, 3), random_rat(&mut rng, 3)))
                .collect();
            let mut closed = g.clone();
            for u in &unaries {
                closed = closed.close_dangling(0, u.clone());
            }
            let mut want = int(0);
            for pattern in 0..1usize << d {
                let mut w = t.get(pattern).clone();
                for (i, u) in unaries.iter().enumerate() {
                    w *= u.get(t.bit(pattern, i) as usize);
                }
                want += w;
            }
            assert_eq!(closed.holant().unwrap(), want);
        }
    }

    #[test]
    fn ternary_gadgets_keep_residues_equal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = SymSig::from_ints(&[1, 2, 3, 4]).to_tensor();
        for _ in 0..200 {
            let nf = rng.gen_range(0..5);
            let ne = rng.gen_range(0..5);
            let edges = rng.gen_range(0..12);
            let g = random_gadget(&mut rng, nf, ne, edges, &f);
            if g.dangling().is_empty() && nf + ne == 0 {
                continue;
            }
            assert!(check_arity_mod3(&g).unwrap().consistent());
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let f: Vec<Rat> = (0..4).map(|_| random_rat(&mut rng, 3)).collect();
            let f = SymSig::new(f).to_tensor();
            let (na, nb) = (rng.gen_range(1..3), rng.gen_range(1..3));
            let a = random_pure_grid(&mut rng, na, &f);
            let b = random_pure_grid(&mut rng, nb, &f);
            let u = a.disjoint_union(&b);
            assert!(u.components().len() >= 2);
            assert_eq!(u.holant().unwrap(), a.holant().unwrap() * b.holant().unwrap());
        }
    }

    #[test]
    fn value_ignores_edge_order_and_workers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f: Vec<Rat> = (0..4).map(|_| random_rat(&mut rng, 4)).collect();
        let f = SymSig::new(f).to_tensor();
        let g = random_pure_grid(&mut rng, 3, &f);
        let base = g.holant().unwrap();
        let mut shuffled = g.clone();
        use rand::seq::SliceRandom;
        shuffled.edges.shuffle(&mut rng);
        for e in shuffled.edges.iter_mut() {
            if rng.gen_bool(0.5) {
                *e = (e.1, e.0);
            }
        }
        assert_eq!(shuffled.holant().unwrap(), base);
        let big = random_pure_grid(&mut rng, 6, &f);
        let serial = big
            .holant_with(&EvalOptions { workers: Some(1), ..Default::default() })
            .unwrap();
        let parallel = big
            .holant_with(&EvalOptions { workers: Some(4), ..Default::default() })
            .unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn gadget_replacement_and_identity_splice() {
        let f = SymSig::from_ints(&[1, 2, 0, 3]);
        let g = two_by_two(&f);
        let want = g.holant().unwrap();
        // replacing an f by a one-vertex gadget of f changes nothing
        let r = g
            .replace_with_gadget(0, &single_vertex_gadget(&f, Polarity::L))
            .unwrap();
        assert_eq!(r.holant().unwrap(), want);

        // an identity binary inserted into an edge and spliced out again
        let mut h = SignatureGrid::new();
        let u = h.add_left(f.to_tensor());
        let v = h.add_right(equality_tensor(3));
        let id = h.add_vertex(
            Tensor::from_mat2(&crate::linalg::Mat2::identity()),
            vec![Polarity::R, Polarity::L],
        );
        h.link(u, 0, v, 0);
        h.link(u, 1, v, 1);
        h.link(u, 2, id, 0);
        h.link(id, 1, v, 2);
        let spliced = h.splice_identity(id).unwrap();
        assert_eq!(spliced.vertices().len(), 2);
        assert_eq!(spliced.holant().unwrap(), h.holant().unwrap());
        assert_eq!(h.holant().unwrap(), int(4));

        let mut loop_grid: SignatureGrid = SignatureGrid::new();
        let d = loop_grid.add_vertex(
            Tensor::from_mat2(&crate::linalg::Mat2::new(int(5), int(1), int(1), int(5))),
            vec![Polarity::L, Polarity::R],
        );
        loop_grid.link(d, 0, d, 1);
        assert_eq!(loop_grid.holant().unwrap(), int(10));
        assert_eq!(loop_grid.splice_identity(d).unwrap().holant().unwrap(), int(2));
    }
}
