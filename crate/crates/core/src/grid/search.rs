//! Bounded exhaustive search for f / `=3` gadgets realizing a target
//! signature up to a positive scalar.
//!
//! Topologies are bipartite multiplicity matrices between f-vertices and
//! equalities, reduced modulo vertex relabelling. Every candidate is first
//! contracted modulo a large prime and only survivors are contracted exactly.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, ToPrimitive, Zero};

use super::{GridError, Polarity, Port, SignatureGrid};
use crate::arith::{Rat, Scalar};
use crate::grid::gadgets::equality_tensor;
use crate::sig::{SymSig, Tensor};

const P: u64 = (1 << 61) - 1;

/// Integers modulo the Mersenne prime 2⁶¹−1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ModP(u64);

impl ModP {
    fn pow(self, mut e: u64) -> Self {
        let mut acc = ModP(1);
        let mut b = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod p)", self.0)
    }
}

impl Add for ModP {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ModP((self.0 + o.0) % P)
    }
}

impl Sub for ModP {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ModP((self.0 + P - o.0) % P)
    }
}

impl Mul for ModP {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ModP(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl Neg for ModP {
    type Output = Self;
    fn neg(self) -> Self {
        ModP((P - self.0) % P)
    }
}

impl Zero for ModP {
    fn zero() -> Self {
        ModP(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for ModP {
    fn one() -> Self {
        ModP(1)
    }
}

fn reduce(n: &num::BigInt) -> ModP {
    let m = num::BigInt::from(P);
    let r = ((n % &m) + &m) % &m;
    ModP(r.to_u64().expect("residue fits"))
}

impl Scalar for ModP {
    fn from_rat(r: &Rat) -> Self {
        let d = reduce(r.denom());
        reduce(r.numer()) * d.inverse().unwrap_or(ModP(0))
    }

    fn inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    pub gadget: SignatureGrid,
    /// `contract(gadget) = scale · target`, with `scale > 0`.
    pub scale: Rat,
    /// f-vertices, equalities.
    pub size: (usize, usize),
}

/// Smallest gadget (by number of f-vertices) whose contraction at `f` is a
/// positive multiple of `target`, with dangling polarities `polarity` in
/// order.
pub fn gadget_search(
    f: &SymSig,
    target: &Tensor,
    polarity: &[Polarity],
    max_f: usize,
    max_eq: usize,
) -> Result<SearchHit, GridError> {
    assert_eq!(target.arity(), polarity.len(), "one polarity per target slot");
    if target.entries().iter().all(|x| x.is_zero()) {
        return Err(GridError::NotFound);
    }
    let nl = polarity.iter().filter(|&&p| p == Polarity::L).count();
    let nr = polarity.len() - nl;
    let ft = f.to_tensor();
    let ft_mod = ft.map(ModP::from_rat);
    let target_mod = target.map(ModP::from_rat);
    for nf in 0..=max_f {
        // 3·nf − nL = 3·ne − nR edges
        let lhs = 3 * nf + nr;
        if lhs < nl || (lhs - nl) % 3 != 0 {
            continue;
        }
        let ne = (lhs - nl) / 3;
        if ne > max_eq || nf + ne == 0 {
            continue;
        }
        let edges = 3 * nf - nl;
        for m in topologies(nf, ne, edges) {
            for order in dangling_orders(&m, polarity) {
                let g = build(&ft_mod, &m, &order);
                let c = g.contract_with(&Default::default())?;
                if !proportional_mod(c.entries(), target_mod.entries()) {
                    continue;
                }
                let g = build(&ft, &m, &order);
                let c = g.contract_with(&Default::default())?;
                if let Some(scale) = positive_ratio(c.entries(), target.entries()) {
                    return Ok(SearchHit {
                        gadget: g,
                        scale,
                        size: (nf, ne),
                    });
                }
            }
        }
    }
    Err(GridError::NotFound)
}

fn proportional_mod(c: &[ModP], t: &[ModP]) -> bool {
    let Some(k) = t.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    c.iter().zip(t).all(|(&ci, &ti)| ci * t[k] == c[k] * ti)
}

fn positive_ratio(c: &[Rat], t: &[Rat]) -> Option<Rat> {
    let k = t.iter().position(|x| !x.is_zero())?;
    let r = &c[k] / &t[k];
    if !r.is_positive() {
        return None;
    }
    c.iter()
        .zip(t)
        .all(|(ci, ti)| *ci == &r * ti)
        .then_some(r)
}

type Matrix = Vec<Vec<u8>>;

/// Connected multiplicity matrices with row and column sums at most 3 and
/// the given total, one per isomorphism class.
fn topologies(nf: usize, ne: usize, edges: usize) -> Vec<Matrix> {
    let rows = row_vectors(ne);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut cur: Matrix = Vec::new();
    let mut cols = vec![0u8; ne];
    fn rec(
        rows: &[Vec<u8>],
        start: usize,
        nf: usize,
        left: usize,
        cur: &mut Matrix,
        cols: &mut Vec<u8>,
        seen: &mut HashSet<Matrix>,
        out: &mut Vec<Matrix>,
    ) {
        if cur.len() == nf {
            if left == 0 && connected(cur, cols.len()) {
                let c = canonical(cur);
                if seen.insert(c) {
                    out.push(cur.clone());
                }
            }
            return;
        }
        let slots = nf - cur.len();
        if left > 3 * slots {
            return;
        }
        for (i, r) in rows.iter().enumerate().skip(start) {
            let s: usize = r.iter().map(|&x| x as usize).sum();
            if s > left {
                continue;
            }
            if r.iter().zip(cols.iter()).any(|(&a, &b)| a + b > 3) {
                continue;
            }
            for (c, &a) in cols.iter_mut().zip(r) {
                *c += a;
            }
            cur.push(r.clone());
            rec(rows, i, nf, left - s, cur, cols, seen, out);
            cur.pop();
            for (c, &a) in cols.iter_mut().zip(r) {
                *c -= a;
            }
        }
    }
    rec(&rows, 0, nf, edges, &mut cur, &mut cols, &mut seen, &mut out);
    out
}

fn row_vectors(ne: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..ne {
        let mut next = Vec::new();
        for r in &out {
            let s: u8 = r.iter().sum();
            for x in 0..=3 - s {
                let mut r2 = r.clone();
                r2.push(x);
                next.push(r2);
            }
        }
        out = next;
    }
    out
}

fn connected(m: &Matrix, ne: usize) -> bool {
    let nf = m.len();
    let n = nf + ne;
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        let nbrs: Vec<usize> = if u < nf {
            (0..ne).filter(|&j| m[u][j] > 0).map(|j| nf + j).collect()
        } else {
            (0..nf).filter(|&i| m[i][u - nf] > 0).collect()
        };
        for w in nbrs {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Lexicographically least row-sorted matrix over all column permutations.
fn canonical(m: &Matrix) -> Matrix {
    let ne = m.first().map_or(0, |r| r.len());
    let mut perm: Vec<usize> = (0..ne).collect();
    let mut best: Option<Matrix> = None;
    loop {
        let mut rows: Matrix = m.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
        rows.sort_unstable();
        if best.as_ref().is_none_or(|b| rows < *b) {
            best = Some(rows);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// For each target slot, the vertex (f index, or `nf + j` for equality `j`)
/// whose free port it becomes. Distinct assignments only.
fn dangling_orders(m: &Matrix, polarity: &[Polarity]) -> Vec<Vec<usize>> {
    let nf = m.len();
    let ne = m.first().map_or(0, |r| r.len());
    let mut free_l: Vec<usize> = Vec::new();
    for (i, r) in m.iter().enumerate() {
        let s: usize = r.iter().map(|&x| x as usize).sum();
        free_l.extend(std::iter::repeat(i).take(3 - s));
    }
    let mut free_r: Vec<usize> = Vec::new();
    for j in 0..ne {
        let s: usize = m.iter().map(|r| r[j] as usize).sum();
        free_r.extend(std::iter::repeat(nf + j).take(3 - s));
    }
    let lo = multiset_perms(&free_l);
    let ro = multiset_perms(&free_r);
    let mut out = Vec::new();
    for l in &lo {
        for r in &ro {
            let (mut li, mut ri) = (l.iter(), r.iter());
            out.push(
                polarity
                    .iter()
                    .map(|p| match p {
                        Polarity::L => *li.next().expect("count matches"),
                        Polarity::R => *ri.next().expect("count matches"),
                    })
                    .collect(),
            );
        }
    }
    out
}

fn multiset_perms(items: &[usize]) -> Vec<Vec<usize>> {
    let mut v = items.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

fn build<T: Scalar>(f: &Tensor<T>, m: &Matrix, order: &[usize]) -> SignatureGrid<T> {
    let nf = m.len();
    let ne = m.first().map_or(0, |r| r.len());
    let mut g = SignatureGrid::new();
    for _ in 0..nf {
        g.add_left(f.clone());
    }
    for _ in 0..ne {
        g.add_right(equality_tensor(3));
    }
    let mut fill = vec![0usize; nf + ne];
    for (i, r) in m.iter().enumerate() {
        for (j, &k) in r.iter().enumerate() {
            for _ in 0..k {
                g.link(i, fill[i], nf + j, fill[nf + j]);
                fill[i] += 1;
                fill[nf + j] += 1;
            }
        }
    }
    for &v in order {
        g.add_dangling(Port::new(v, fill[v]));
        fill[v] += 1;
    }
    g
}
