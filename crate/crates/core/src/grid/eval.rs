//! Exhaustive evaluation: one boolean variable per edge and per dangling
//! port, depth-first with per-vertex pruning.

use rayon::prelude::*;

use super::{GridError, SignatureGrid};
use crate::arith::Scalar;
use crate::sig::Tensor;

/// Default cap on enumerated variables (edges plus dangling ports).
pub const DEFAULT_MAX_EDGES: usize = 24;

/// Prefix bits split across worker threads.
const SPLIT_BITS: usize = 6;
/// Below this many variables the serial walk always wins.
const PARALLEL_THRESHOLD: usize = 16;

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub max_edges: usize,
    /// Worker threads; `None` reads `HOLANT_WORKERS`, falling back to rayon's
    /// default pool. Results do not depend on this value.
    pub workers: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_MAX_EDGES,
            workers: None,
        }
    }
}

impl EvalOptions {
    pub fn with_max_edges(max_edges: usize) -> Self {
        Self {
            max_edges,
            ..Self::default()
        }
    }

    fn resolved_workers(&self) -> Option<usize> {
        self.workers.or_else(|| {
            std::env::var("HOLANT_WORKERS")
                .ok()
                .and_then(|s| s.trim().parse().ok())
        })
    }
}

struct Plan {
    /// Number of variables; the first `dangling` are the output bits.
    vars: usize,
    dangling: usize,
    /// Variable of each (vertex, slot).
    port_var: Vec<Vec<usize>>,
    /// Vertices whose last port variable is `k`, by `k`.
    completes_at: Vec<Vec<usize>>,
    /// Vertices with no ports.
    nullary: Vec<usize>,
}

fn plan<T: Scalar>(g: &SignatureGrid<T>) -> Plan {
    let nv = g.vertices.len();
    let mut port_var: Vec<Vec<usize>> = g
        .vertices
        .iter()
        .map(|v| vec![usize::MAX; v.signature.arity()])
        .collect();
    let mut next = 0;
    for &p in &g.dangling {
        port_var[p.vertex][p.slot] = next;
        next += 1;
    }
    let dangling = next;

    // Greedy edge order: repeatedly take an edge at the vertex with the
    // fewest unassigned ports, so vertices complete (and prune) early.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        incident[a.vertex].push(i);
        if b.vertex != a.vertex {
            incident[b.vertex].push(i);
        }
    }
    let mut open: Vec<usize> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(v, vert)| {
            (0..vert.signature.arity())
                .filter(|&s| port_var[v][s] == usize::MAX)
                .count()
        })
        .collect();
    let mut taken = vec![false; g.edges.len()];
    let mut remaining = g.edges.len();
    let mut touched = vec![false; nv];
    for &p in &g.dangling {
        touched[p.vertex] = true;
    }
    while remaining > 0 {
        let pick = (0..nv)
            .filter(|&v| open[v] > 0)
            .min_by_key(|&v| (!touched[v], open[v], v))
            .expect("an open vertex remains while edges remain");
        let e = *incident[pick]
            .iter()
            .find(|&&e| !taken[e])
            .expect("open vertex has an untaken edge");
        taken[e] = true;
        remaining -= 1;
        let (a, b) = g.edges[e];
        port_var[a.vertex][a.slot] = next;
        port_var[b.vertex][b.slot] = next;
        next += 1;
        open[a.vertex] -= 1;
        open[b.vertex] -= 1;
        touched[a.vertex] = true;
        touched[b.vertex] = true;
    }

    let mut completes_at = vec![Vec::new(); next];
    let mut nullary = Vec::new();
    for (v, vars) in port_var.iter().enumerate() {
        match vars.iter().max() {
            Some(&k) => completes_at[k].push(v),
            None => nullary.push(v),
        }
    }
    Plan {
        vars: next,
        dangling,
        port_var,
        completes_at,
        nullary,
    }
}

struct Walker<'a, T> {
    g: &'a SignatureGrid<T>,
    plan: &'a Plan,
}

impl<T: Scalar> Walker<'_, T> {
    fn vertex_value(&self, v: usize, bits: &[u8]) -> &T {
        let mut pattern = 0;
        for &k in &self.plan.port_var[v] {
            pattern = (pattern << 1) | bits[k] as usize;
        }
        self.g.vertices[v].signature.get(pattern)
    }

    /// Accumulates into `out` every completion of `bits[..k]`.
    fn walk(&self, k: usize, bits: &mut Vec<u8>, acc: T, out: &mut [T]) {
        if k == self.plan.vars {
            let mut idx = 0;
            for &b in &bits[..self.plan.dangling] {
                idx = (idx << 1) | b as usize;
            }
            out[idx] = out[idx].clone() + acc;
            return;
        }
        for b in 0..2u8 {
            bits[k] = b;
            let mut w = acc.clone();
            let mut dead = false;
            for &v in &self.plan.completes_at[k] {
                let x = self.vertex_value(v, bits);
                if x.is_zero() {
                    dead = true;
                    break;
                }
                w = w * x.clone();
            }
            if !dead {
                self.walk(k + 1, bits, w, out);
            }
        }
    }

    /// Partial contraction over all completions of a fixed prefix.
    fn run_prefix(&self, prefix: usize, depth: usize, start: T) -> Vec<T> {
        let mut out = vec![T::zero(); 1 << self.plan.dangling];
        let mut bits = vec![0u8; self.plan.vars];
        let mut acc = start;
        for k in 0..depth {
            bits[k] = ((prefix >> (depth - 1 - k)) & 1) as u8;
            for &v in &self.plan.completes_at[k] {
                let x = self.vertex_value(v, &bits);
                if x.is_zero() {
                    return out;
                }
                acc = acc * x.clone();
            }
        }
        self.walk(depth, &mut bits, acc, &mut out);
        out
    }
}

pub(super) fn contract<T: Scalar>(
    g: &SignatureGrid<T>,
    opts: &EvalOptions,
) -> Result<Tensor<T>, GridError> {
    let plan = plan(g);
    if plan.vars > opts.max_edges {
        return Err(GridError::TooManyEdges {
            found: plan.vars,
            cap: opts.max_edges,
        });
    }
    let mut start = T::one();
    for &v in &plan.nullary {
        start = start * g.vertices[v].signature.get(0).clone();
    }
    let walker = Walker { g, plan: &plan };
    let workers = opts.resolved_workers();
    let serial = plan.vars < PARALLEL_THRESHOLD || workers == Some(1);
    let out = if serial {
        walker.run_prefix(0, 0, start)
    } else {
        let depth = SPLIT_BITS.min(plan.vars);
        let job = || {
            (0..1usize << depth)
                .into_par_iter()
                .map(|p| walker.run_prefix(p, depth, start.clone()))
                .collect::<Vec<_>>()
        };
        let parts = match workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|pool| pool.install(job))
                .unwrap_or_else(|_| job()),
            None => job(),
        };
        // fixed summation order keeps results identical across pool sizes
        let mut out = vec![T::zero(); 1 << plan.dangling];
        for part in parts {
            for (o, x) in out.iter_mut().zip(part) {
                *o = o.clone() + x;
            }
        }
        out
    };
    Ok(Tensor::new(plan.dangling, out)?)
}
