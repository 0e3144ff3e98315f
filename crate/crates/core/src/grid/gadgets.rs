//! The fixed gadgets used by the hardness arguments.
//!
//! Each builder takes the `f` tensor (and, for G3, a unary) and returns a
//! gadget of f- and `=3`-vertices. Expected signatures, for `f = [x0..x3]`:
//!
//! * G1: binary straddled `[[x0, x2], [x1, x3]]` (1 L, 1 R dangling).
//! * G2: ternary on LHS; `[3b², 1+2b³, 2b+b⁴, 3b²]` for `[0,1,b,0]` and
//!   `[1+3a³, a+a⁴, a², a³+c⁴]` for `[1,a,0,c]`.
//! * G3: unary on RHS `[y²+yb, ya+c]` for `f = [1,a,b,c]` and unary `[y,1]`.
//! * G4: ternary on LHS `[2+2a³, 2a+2a², 2a+2a², 2+2a³]` for `[1,a,1,a]`.

use super::{unary, Polarity, Port, SignatureGrid};
use crate::arith::Scalar;
use crate::sig::{SymSig, Tensor};

pub fn equality_tensor<T: Scalar>(arity: usize) -> Tensor<T> {
    SymSig::equality(arity).to_tensor().map(T::from_rat)
}

/// One f joined to one `=3` by two parallel edges; f's slot 2 (L) and the
/// equality's slot 2 (R) dangle, in that order.
pub fn g1<T: Scalar>(f: &Tensor<T>) -> SignatureGrid<T> {
    let mut g = SignatureGrid::new();
    let u = g.add_left(f.clone());
    let e = g.add_right(equality_tensor(3));
    g.link(u, 0, e, 0);
    g.link(u, 1, e, 1);
    g.add_dangling(Port::new(u, 2));
    g.add_dangling(Port::new(e, 2));
    g
}

/// `s` copies of G1 in series; contracts to the `s`-th power of the G1
/// matrix. The first dangling port is L, the second R.
pub fn g1_chain<T: Scalar>(f: &Tensor<T>, s: usize) -> SignatureGrid<T> {
    assert!(s >= 1, "chain length must be positive");
    let mut g = SignatureGrid::new();
    let mut prev_r: Option<Port> = None;
    for _ in 0..s {
        let u = g.add_left(f.clone());
        let e = g.add_right(equality_tensor(3));
        g.link(u, 0, e, 0);
        g.link(u, 1, e, 1);
        match prev_r {
            None => g.add_dangling(Port::new(u, 2)),
            Some(p) => g.connect(p, Port::new(u, 2)),
        }
        prev_r = Some(Port::new(e, 2));
    }
    g.add_dangling(prev_r.expect("s >= 1"));
    g
}

/// A centre f whose three edges go to distinct equalities, plus a ring of
/// three f's each touching two of those equalities with one dangling port.
pub fn g2<T: Scalar>(f: &Tensor<T>) -> SignatureGrid<T> {
    let mut g = SignatureGrid::new();
    let c = g.add_left(f.clone());
    let e: Vec<usize> = (0..3).map(|_| g.add_right(equality_tensor(3))).collect();
    for (slot, &ei) in e.iter().enumerate() {
        g.link(c, slot, ei, 0);
    }
    // ring member i sits between e[i+2] and e[i]
    let ring = [(2, 0), (0, 1), (1, 2)];
    let mut fill = [1usize; 3];
    for &(p, q) in &ring {
        let r = g.add_left(f.clone());
        g.link(r, 0, e[p], fill[p]);
        fill[p] += 1;
        g.link(r, 1, e[q], fill[q]);
        fill[q] += 1;
        g.add_dangling(Port::new(r, 2));
    }
    g
}

/// Equality with one dangling R port, one port to the unary `u` (on LHS) and
/// one to f; f's other two ports meet a second equality closed by `u`.
pub fn g3<T: Scalar>(f: &Tensor<T>, u: &Tensor<T>) -> SignatureGrid<T> {
    let mut g = SignatureGrid::new();
    let e1 = g.add_right(equality_tensor(3));
    let e2 = g.add_right(equality_tensor(3));
    let v = g.add_left(f.clone());
    let u1 = g.add_vertex(u.clone(), vec![Polarity::L]);
    let u2 = g.add_vertex(u.clone(), vec![Polarity::L]);
    g.add_dangling(Port::new(e1, 0));
    g.link(u1, 0, e1, 1);
    g.link(v, 0, e1, 2);
    g.link(v, 1, e2, 0);
    g.link(v, 2, e2, 1);
    g.link(u2, 0, e2, 2);
    g
}

/// G3 with the unary `[y, 1]`.
pub fn g3_with_y<T: Scalar>(f: &Tensor<T>, y: T) -> SignatureGrid<T> {
    g3(f, &unary(y, T::one()))
}

/// Three f's, each with one edge to each of two equalities and one dangling
/// port.
pub fn g4<T: Scalar>(f: &Tensor<T>) -> SignatureGrid<T> {
    let mut g = SignatureGrid::new();
    let e1 = g.add_right(equality_tensor(3));
    let e2 = g.add_right(equality_tensor(3));
    for i in 0..3 {
        let v = g.add_left(f.clone());
        g.link(v, 0, e1, i);
        g.link(v, 1, e2, i);
        g.add_dangling(Port::new(v, 2));
    }
    g
}
