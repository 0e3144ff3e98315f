//! Seeded generators of embedded planar graphs.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use super::PlanarGraph;
use crate::arith::{int, rat, Rat};
use crate::grid::Polarity;

fn random_weight<R: Rng + ?Sized>(rng: &mut R, weights: &RangeInclusive<i64>) -> Rat {
    let n = rng.gen_range(weights.clone());
    if rng.gen_bool(0.2) {
        rat(n, rng.gen_range(2..=3))
    } else {
        int(n)
    }
}

/// Random triangulation on `n` vertices (grown by vertex insertion into
/// faces), with occasional doubled edges, after which each edge survives
/// with probability `keep`.
pub fn random_planar_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    keep: f64,
    weights: RangeInclusive<i64>,
) -> PlanarGraph {
    let mut g = PlanarGraph::new(n.min(3));
    match n {
        0 | 1 => return g,
        2 => {
            g.add_edge(0, 1, int(1));
        }
        _ => {
            g.add_edge(0, 1, int(1));
            g.add_edge(1, 2, int(1));
            g.add_edge(2, 0, int(1));
            for _ in 3..n {
                let faces = g.faces();
                let walk = faces[rng.gen_range(0..faces.len())].clone();
                let w = g.add_vertex();
                let k = walk.len();
                for i in 0..k {
                    let d = walk[i];
                    let prev = walk[(i + k - 1) % k];
                    let v = g.tail(d);
                    let at = g.position(prev ^ 1) + 1;
                    g.insert_edge(v, at, w, 0, int(1));
                }
            }
        }
    }
    for e in 0..g.edges().len() {
        if rng.gen_bool(0.15) {
            let d = 2 * e;
            let (u, v) = (g.tail(d), g.head(d));
            let pu = g.position(d) + 1;
            let pv = g.position(d ^ 1);
            g.insert_edge(u, pu, v, pv, int(1));
        }
    }
    let mut e = 0;
    while e < g.edges().len() {
        if rng.gen_bool(keep) {
            e += 1;
        } else {
            g.remove_edge(e);
        }
    }
    for e in 0..g.edges().len() {
        let w = random_weight(rng, &weights);
        g.set_weight(e, w);
    }
    g
}

/// Random connected planar cubic bipartite multigraph with `pairs` vertices
/// on each side (`pairs ≥ 1`), grown from the theta graph by two
/// planarity-preserving moves: an edge is stretched into a path carrying a
/// digon, or two same-direction edges of one face are subdivided twice and
/// cross-linked inside it. Returns the graph and each vertex's side.
pub fn random_cubic_bipartite<R: Rng + ?Sized>(rng: &mut R, pairs: usize) -> (PlanarGraph, Vec<Polarity>) {
    assert!(pairs >= 1);
    let mut g = PlanarGraph::new(2);
    let mut side = vec![Polarity::L, Polarity::R];
    for _ in 0..3 {
        g.insert_edge(0, usize::MAX, 1, 0, int(1));
    }
    let mut have = 1;
    while have < pairs {
        if pairs - have >= 2 && rng.gen_bool(0.5) {
            let faces = g.faces();
            let mut candidates: Vec<(usize, Vec<usize>)> = faces
                .iter()
                .enumerate()
                .map(|(i, walk)| {
                    let darts = walk.iter().copied().filter(|&d| side[g.tail(d)] == Polarity::L).collect();
                    (i, darts)
                })
                .filter(|(_, d): &(usize, Vec<usize>)| d.len() >= 2)
                .collect();
            if candidates.is_empty() {
                continue;
            }
            candidates.shuffle(rng);
            let mut darts = candidates.swap_remove(0).1;
            darts.shuffle(rng);
            let (d1, d2) = (darts[0], darts[1]);
            let (l1, l2) = (g.tail(d1), g.tail(d2));
            let (a1, b1) = stretch(&mut g, &mut side, d1);
            let (a2, b2) = stretch(&mut g, &mut side, d2);
            let out_a1 = g.dart_towards(a1, l1);
            let out_b2 = g.dart_towards(b2, a2);
            let out_b1 = g.dart_towards(b1, a1);
            let out_a2 = g.dart_towards(a2, l2);
            let (p, q) = (g.position(out_a1) + 1, g.position(out_b2) + 1);
            g.insert_edge(a1, p, b2, q, int(1));
            let (p, q) = (g.position(out_b1) + 1, g.position(out_a2) + 1);
            g.insert_edge(b1, p, a2, q, int(1));
            have += 2;
        } else {
            let e = rng.gen_range(0..g.edges().len());
            let d = if rng.gen_bool(0.5) { 2 * e } else { 2 * e + 1 };
            let (a, b) = stretch(&mut g, &mut side, d);
            let ab = g.dart_towards(a, b);
            let pa = g.position(ab) + 1;
            let pb = g.position(ab ^ 1);
            g.insert_edge(a, pa, b, pb, int(1));
            have += 1;
        }
    }
    (g, side)
}

/// Subdivides the edge of dart `d` twice; returns the new vertices ordered
/// from `tail(d)` towards `head(d)`, with sides continuing the alternation.
fn stretch(g: &mut PlanarGraph, side: &mut Vec<Polarity>, d: usize) -> (usize, usize) {
    let e = d / 2;
    let (x1, rest) = g.subdivide_edge(e);
    let (x2, _) = g.subdivide_edge(rest);
    let s0 = side[g.edge(e).ends[0]];
    side.push(s0.opposite());
    side.push(s0);
    if d % 2 == 0 {
        (x1, x2)
    } else {
        (x2, x1)
    }
}
