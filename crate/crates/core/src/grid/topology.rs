//! Random grid and gadget generators for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Polarity, Port, SignatureGrid};
use crate::arith::{Rat, Scalar};
use crate::grid::gadgets::equality_tensor;
use crate::sig::Tensor;

/// `n` copies of `f` on the LHS and `n` equalities on the RHS, joined by a
/// uniformly random perfect matching of their ports. Parallel edges occur.
pub fn random_pure_grid<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    f: &Tensor<T>,
) -> SignatureGrid<T> {
    let mut g = SignatureGrid::new();
    let left: Vec<usize> = (0..n).map(|_| g.add_left(f.clone())).collect();
    let right: Vec<usize> = (0..n).map(|_| g.add_right(equality_tensor(3))).collect();
    let lp: Vec<Port> = left
        .iter()
        .flat_map(|&v| (0..3).map(move |s| Port::new(v, s)))
        .collect();
    let mut rp: Vec<Port> = right
        .iter()
        .flat_map(|&v| (0..3).map(move |s| Port::new(v, s)))
        .collect();
    rp.shuffle(rng);
    for (a, b) in lp.into_iter().zip(rp) {
        g.connect(a, b);
    }
    g
}

/// `nf` copies of `f` and `ne` equalities with `edges` random L–R edges; all
/// other ports dangle in random order.
pub fn random_gadget<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    nf: usize,
    ne: usize,
    edges: usize,
    f: &Tensor<T>,
) -> SignatureGrid<T> {
    let mut g = SignatureGrid::new();
    for _ in 0..nf {
        g.add_left(f.clone());
    }
    for _ in 0..ne {
        g.add_right(equality_tensor(3));
    }
    let mut lp: Vec<Port> = (0..nf)
        .flat_map(|v| (0..3).map(move |s| Port::new(v, s)))
        .collect();
    let mut rp: Vec<Port> = (nf..nf + ne)
        .flat_map(|v| (0..3).map(move |s| Port::new(v, s)))
        .collect();
    lp.shuffle(rng);
    rp.shuffle(rng);
    let k = edges.min(lp.len()).min(rp.len());
    for i in 0..k {
        g.connect(lp[i], rp[i]);
    }
    let mut rest: Vec<Port> = lp[k..].iter().chain(&rp[k..]).copied().collect();
    rest.shuffle(rng);
    for p in rest {
        g.add_dangling(p);
    }
    g
}

/// Random small rational, numerator in `-range..=range`, denominator 1–3.
pub fn random_rat<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Rat {
    Rat::new(rng.gen_range(-range..=range).into(), rng.gen_range(1..=3i64).into())
}

/// Random nonnegative small rational.
pub fn random_nonneg_rat<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Rat {
    Rat::new(rng.gen_range(0..=range).into(), rng.gen_range(1..=3i64).into())
}

/// Grid of `nv` vertices with arity 1–3, random polarities and random dense
/// tensors; L ports are matched to R ports at random until `edges` edges
/// exist or one side runs out, and the rest dangle.
pub fn random_mixed_gadget<R: Rng + ?Sized>(rng: &mut R, nv: usize, edges: usize) -> SignatureGrid {
    let mut g = SignatureGrid::new();
    let mut lp = Vec::new();
    let mut rp = Vec::new();
    for v in 0..nv {
        let arity = rng.gen_range(1..=3);
        let pol: Vec<Polarity> = (0..arity)
            .map(|_| if rng.gen_bool(0.5) { Polarity::L } else { Polarity::R })
            .collect();
        let entries = (0..1 << arity).map(|_| random_rat(rng, 3)).collect();
        for (s, p) in pol.iter().enumerate() {
            match p {
                Polarity::L => lp.push(Port::new(v, s)),
                Polarity::R => rp.push(Port::new(v, s)),
            }
        }
        g.add_vertex(Tensor::new(arity, entries).expect("sized"), pol);
    }
    lp.shuffle(rng);
    rp.shuffle(rng);
    let k = edges.min(lp.len()).min(rp.len());
    for i in 0..k {
        g.connect(lp[i], rp[i]);
    }
    let mut rest: Vec<Port> = lp[k..].iter().chain(&rp[k..]).copied().collect();
    rest.shuffle(rng);
    for p in rest {
        g.add_dangling(p);
    }
    g
}
