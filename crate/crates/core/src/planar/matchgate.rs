use super::{count_pm, PlanarEdge, PlanarError, PlanarGraph};
use crate::arith::{int, rat, Rat};
use crate::sig::Tensor;

/// Planar gadget whose signature entry for a set `S` of external vertices
/// is `scalar · #PM(graph − S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matchgate {
    graph: PlanarGraph,
    external: Vec<usize>,
    scalar: Rat,
    corners: Vec<usize>,
}

impl Matchgate {
    /// Requires a genus-0 embedding with a face whose walk meets the
    /// external vertices in the listed cyclic order.
    pub fn new(graph: PlanarGraph, external: Vec<usize>, scalar: Rat) -> Result<Self, PlanarError> {
        graph.check_genus_zero()?;
        let mut sorted = external.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != external.len() || sorted.last().is_some_and(|&v| v >= graph.vertex_count()) {
            return Err(PlanarError::InvalidRotation("external vertices must be distinct and in range".into()));
        }
        let corners = outer_corners(&graph, &external)
            .ok_or_else(|| PlanarError::InvalidRotation("external vertices are not on one face in order".into()))?;
        Ok(Self {
            graph,
            external,
            scalar,
            corners,
        })
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn external(&self) -> &[usize] {
        &self.external
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    /// Rotation position at each external vertex where a stub leaving
    /// through the outer face goes.
    pub fn stub_positions(&self) -> &[usize] {
        &self.corners
    }
}

/// For a face meeting `external` in order, the insertion point of each
/// external vertex's corner on that face.
fn outer_corners(g: &PlanarGraph, external: &[usize]) -> Option<Vec<usize>> {
    if external.is_empty() {
        return Some(Vec::new());
    }
    for walk in g.faces() {
        let k = walk.len();
        // corner at tail(walk[i]) sits after rev(walk[i-1])
        let mut first: Vec<Option<usize>> = vec![None; external.len()];
        let mut order = Vec::new();
        for i in 0..k {
            let v = g.tail(walk[i]);
            if let Some(j) = external.iter().position(|&x| x == v) {
                if first[j].is_none() {
                    first[j] = Some(g.position(walk[(i + k - 1) % k] ^ 1) + 1);
                    order.push(j);
                }
            }
        }
        if order.len() != external.len() {
            continue;
        }
        let s = order.iter().position(|&j| j == 0).unwrap();
        if (0..order.len()).all(|i| order[(s + i) % order.len()] == i) {
            return Some(first.into_iter().map(Option::unwrap).collect());
        }
    }
    // a lone vertex has no face walk
    (g.edges().is_empty() && external.len() == 1).then(|| vec![0])
}

/// Signature over the external vertices; pattern bit 1 at slot `i` means
/// external vertex `i` is matched from outside and removed.
pub fn matchgate_signature(mg: &Matchgate) -> Result<Tensor, PlanarError> {
    let k = mg.external.len();
    let n = mg.graph.vertex_count();
    let mut entries = Vec::with_capacity(1 << k);
    for p in 0..1usize << k {
        let mut keep = vec![true; n];
        for (i, &v) in mg.external.iter().enumerate() {
            if (p >> (k - 1 - i)) & 1 == 1 {
                keep[v] = false;
            }
        }
        entries.push(&mg.scalar * count_pm(&mg.graph.induced(&keep))?);
    }
    Ok(Tensor::new(k, entries).expect("2^k entries"))
}

/// K4 on `t1, t2, t3, u` (vertices 0..4), every edge weight −1, scalar ¼;
/// signature ¼[3, 0, −1, 0].
pub fn mg_a() -> Matchgate {
    let e = |u, v| PlanarEdge {
        ends: [u, v],
        weight: int(-1),
    };
    // t1,t2,t3 counterclockwise around u
    let edges = vec![e(0, 1), e(1, 2), e(2, 0), e(0, 3), e(1, 3), e(2, 3)];
    let rotation = vec![vec![0, 3, 2], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
    let g = PlanarGraph::from_rotation(4, edges, rotation).expect("K4 rotation");
    Matchgate::new(g, vec![0, 1, 2], rat(1, 4)).expect("K4 is planar")
}

/// Edge `t1t2` of weight 1 plus spokes `t_i u` of weight 2; signature
/// [2, 0, 2, 0].
pub fn mg_b() -> Matchgate {
    let e = |u, v, w| PlanarEdge {
        ends: [u, v],
        weight: int(w),
    };
    let edges = vec![e(0, 1, 1), e(0, 3, 2), e(1, 3, 2), e(2, 3, 2)];
    let rotation = vec![vec![0, 1], vec![2, 0], vec![3], vec![1, 2, 3]];
    let g = PlanarGraph::from_rotation(4, edges, rotation).expect("star rotation");
    Matchgate::new(g, vec![0, 1, 2], int(1)).expect("star plus edge is planar")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::count_pm_bruteforce;
    use crate::sig::SymSig;

    fn brute_signature(mg: &Matchgate) -> Vec<Rat> {
        let k = mg.external().len();
        (0..1usize << k)
            .map(|p| {
                let mut keep = vec![true; mg.graph().vertex_count()];
                for (i, &v) in mg.external().iter().enumerate() {
                    if (p >> (k - 1 - i)) & 1 == 1 {
                        keep[v] = false;
                    }
                }
                mg.scalar() * count_pm_bruteforce(&mg.graph().induced(&keep))
            })
            .collect()
    }

    #[test]
    fn mg_a_signature() {
        let mg = mg_a();
        let t = matchgate_signature(&mg).unwrap();
        assert!(t.is_symmetric());
        let want = SymSig::from_ints(&[3, 0, -1, 0]).scale(&rat(1, 4));
        assert_eq!(t.to_symsig().unwrap(), want);
        assert_eq!(t.entries(), &brute_signature(&mg)[..]);
        // relative to the empty-set entry the pair entries are −1/3
        assert_eq!(t.get(0b011) / t.get(0), rat(-1, 3));
    }

    #[test]
    fn mg_b_signature() {
        let mg = mg_b();
        let t = matchgate_signature(&mg).unwrap();
        assert!(t.is_symmetric());
        assert_eq!(t.to_symsig().unwrap(), SymSig::from_ints(&[2, 0, 2, 0]));
        assert_eq!(t.entries(), &brute_signature(&mg)[..]);
    }

    #[test]
    fn odd_remainders_vanish() {
        for mg in [mg_a(), mg_b()] {
            let t = matchgate_signature(&mg).unwrap();
            for p in 0..8usize {
                if p.count_ones() % 2 == 1 {
                    assert_eq!(t.get(p), &int(0));
                }
            }
        }
    }

    #[test]
    fn external_order_is_checked() {
        let g = mg_a().graph().clone();
        assert!(Matchgate::new(g.clone(), vec![0, 2, 1], int(1)).is_err());
        assert!(Matchgate::new(g.clone(), vec![1, 2, 0], int(1)).is_ok());
        assert!(Matchgate::new(g, vec![0, 0], int(1)).is_err());
    }
}
