//! Interpolation by exact linear solving.
//!
//! * [`interpolate_holant_with_d`] recovers the value of a grid containing
//!   the rank-one projector `D` from grids where each `D` is replaced by a
//!   G1 chain of length `s`.
//! * [`interpolate_unary`] recovers the value of a grid with an arbitrary
//!   RHS unary from grids using `seed · M^j`.
//! * [`split_reduction`] turns a grid with free `[1,x]` unaries into one
//!   whose unaries come from the degenerate straddled `[[1,x],[y,xy]]`.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{gcd, pow, QuadExt, Rat, Scalar};
use crate::grid::gadgets::g1_chain;
use crate::grid::{EvalOptions, GridError, Polarity, Port, SignatureGrid};
use crate::linalg::{solve, solve_vandermonde, Mat2};
use crate::sig::{jordan, JordanData, SigError, SymSig, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("vertex {0} is not a binary placeholder with an L slot then an R slot")]
    NotPlaceholder(usize),
    #[error("the Vandermonde system is singular")]
    SingularSystem,
    #[error("equal interpolation nodes merge unknowns the target separates")]
    Underdetermined,
    #[error("seed is proportional to a row eigenvector")]
    EigenvectorSeed,
    #[error("matrix lacks two distinct real eigenvalues")]
    NotDiagonalizable,
    #[error("vertex {0} is neither f, g nor the unary [1,x]")]
    UnexpectedVertex(usize),
    #[error("g is a multiple of [0,1]^n")]
    DegenerateG,
    #[error("occurrence counts m*N_f = {lhs} and n*N_g + N_u = {rhs} (gcd {k}) do not balance")]
    CountMismatch { lhs: usize, rhs: usize, k: usize },
    #[error("the absorbed g blocks contribute a zero factor")]
    VanishingFactor,
    #[error("x and y must be nonnegative")]
    NegativeWeight,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Sig(#[from] SigError),
}

/// `D = (1/(x+y))·[[y, xy], [1, x]] = P·diag(0,1)·P⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateTarget {
    pub jordan: JordanData,
    pub matrix: Mat2<QuadExt>,
}

pub fn degenerate_target(f: &SymSig) -> Result<DegenerateTarget, InterpError> {
    let j = jordan(&f.straddled()?)?;
    let s = (&j.x + &j.y).try_inverse().map_err(|_| SigError::ZeroDelta)?;
    let xy = &j.x * &j.y;
    let matrix = Mat2::new(j.y.clone(), xy, QuadExt::one(), j.x.clone()).scale(&s);
    Ok(DegenerateTarget { jordan: j, matrix })
}

/// Distinct nodes and, per node, the member indices, in first-seen order.
fn group_nodes<T: Scalar>(nodes: &[T]) -> Vec<(T, Vec<usize>)> {
    let mut groups: Vec<(T, Vec<usize>)> = Vec::new();
    for (i, v) in nodes.iter().enumerate() {
        match groups.iter_mut().find(|(n, _)| n == v) {
            Some((_, members)) => members.push(i),
            None => groups.push((v.clone(), vec![i])),
        }
    }
    groups
}

/// Solves `Σ_k nodes[k]^s · y_k = values[s]` for the combination
/// `Σ_k weights[k] · y_k`, merging equal nodes. Merged unknowns must carry
/// equal weights.
fn solve_stratified(
    nodes: &[QuadExt],
    values: &[QuadExt],
    weights: &[QuadExt],
) -> Result<(QuadExt, Vec<QuadExt>), InterpError> {
    let groups = group_nodes(nodes);
    let distinct: Vec<QuadExt> = groups.iter().map(|(n, _)| n.clone()).collect();
    let sol = solve_vandermonde(&distinct, &values[..distinct.len()]).ok_or(InterpError::SingularSystem)?;
    let mut total = QuadExt::zero();
    for ((_, members), y) in groups.iter().zip(&sol) {
        let w = &weights[members[0]];
        if members.iter().any(|&m| weights[m] != *w) {
            return Err(InterpError::Underdetermined);
        }
        total = total + w * y;
    }
    // the surplus equations must be consistent with the solution
    for (s, v) in values.iter().enumerate().skip(distinct.len()) {
        let got = distinct
            .iter()
            .zip(&sol)
            .fold(QuadExt::zero(), |acc, (n, y)| acc + pow(n, s) * y);
        if got != *v {
            return Err(InterpError::SingularSystem);
        }
    }
    Ok((total, sol))
}

/// Everything computed along the way, for reporting.
#[derive(Clone, Debug)]
pub struct Interpolation {
    /// `value` of each evaluated grid, by `s`.
    pub evaluations: Vec<Rat>,
    /// Node of each stratum.
    pub nodes: Vec<QuadExt>,
    /// Solved unknowns, one per distinct node.
    pub coefficients: Vec<QuadExt>,
    pub value: QuadExt,
}

fn check_placeholders<T: Scalar>(grid: &SignatureGrid<T>, ds: &[usize]) -> Result<(), InterpError> {
    for &d in ds {
        let v = grid.vertices().get(d).ok_or(InterpError::NotPlaceholder(d))?;
        if v.polarity != [Polarity::L, Polarity::R] {
            return Err(InterpError::NotPlaceholder(d));
        }
    }
    Ok(())
}

/// Replaces the listed placeholder vertices, highest index first so earlier
/// indices stay valid.
fn replace_each(
    grid: &SignatureGrid,
    ds: &[usize],
    with: impl Fn(&SignatureGrid, usize) -> Result<SignatureGrid, GridError>,
) -> Result<SignatureGrid, GridError> {
    let mut order = ds.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    let mut g = grid.clone();
    for d in order {
        g = with(&g, d)?;
    }
    Ok(g)
}

/// Grid with every placeholder set to `D`, over `Q(√Δ²)`.
pub fn substitute_d(grid: &SignatureGrid, ds: &[usize], f: &SymSig) -> Result<SignatureGrid<QuadExt>, InterpError> {
    check_placeholders(grid, ds)?;
    let d = Tensor::from_mat2(&degenerate_target(f)?.matrix);
    let mut g = grid.to_quad();
    for &v in ds {
        g = g.with_signature(v, d.clone())?;
    }
    Ok(g)
}

/// The value of `grid` with every vertex in `ds` read as `D`, recovered from
/// the `n + 1` grids in which each of them is a G1 chain of length
/// `s = 0..=n` (length 0 is a plain wire).
pub fn interpolate_holant_with_d(
    grid: &SignatureGrid,
    ds: &[usize],
    f: &SymSig,
    opts: &EvalOptions,
) -> Result<Interpolation, InterpError> {
    check_placeholders(grid, ds)?;
    let j = jordan(&f.straddled()?)?;
    let n = ds.len();
    let ft = f.to_tensor();
    let mut evaluations = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let g = if s == 0 {
            replace_each(grid, ds, |g, d| g.splice_identity(d))?
        } else {
            let chain = g1_chain(&ft, s);
            replace_each(grid, ds, |g, d| g.replace_with_gadget(d, &chain))?
        };
        evaluations.push(g.holant_with(opts)?);
    }
    let nodes: Vec<QuadExt> = (0..=n)
        .map(|k| pow(&j.lambda, n - k) * pow(&j.mu, k))
        .collect();
    // D keeps only the μ stratum: weight 1 on k = n, 0 elsewhere
    let weights: Vec<QuadExt> = (0..=n)
        .map(|k| if k == n { QuadExt::one() } else { QuadExt::zero() })
        .collect();
    let values: Vec<QuadExt> = evaluations.iter().map(<QuadExt as Scalar>::from_rat).collect();
    let (value, coefficients) = solve_stratified(&nodes, &values, &weights)?;
    Ok(Interpolation {
        evaluations,
        nodes,
        coefficients,
        value,
    })
}

/// Eigenvalues and row eigenvectors of a rational 2×2 matrix.
pub struct RowEigen {
    pub values: [QuadExt; 2],
    pub vectors: [[QuadExt; 2]; 2],
}

pub fn row_eigen(m: &Mat2) -> Result<RowEigen, InterpError> {
    let disc = pow(&m.trace(), 2) - Rat::from_integer(4.into()) * m.det();
    if !disc.is_positive() {
        return Err(InterpError::NotDiagonalizable);
    }
    let r = QuadExt::sqrt(&disc).map_err(|_| InterpError::NotDiagonalizable)?;
    let half = QuadExt::from_rat(Rat::new(1.into(), 2.into()));
    let tr = QuadExt::from_rat(m.trace());
    let mq = m.map(<QuadExt as Scalar>::from_rat);
    let values = [&(&tr - &r) * &half, &(&tr + &r) * &half];
    let vec_for = |l: &QuadExt| {
        // r·(M − λI) = 0 from either column
        let a = [mq.m[1][0].clone(), l - &mq.m[0][0]];
        if !(a[0].is_zero() && a[1].is_zero()) {
            a
        } else {
            [l - &mq.m[1][1], mq.m[0][1].clone()]
        }
    };
    let vectors = [vec_for(&values[0]), vec_for(&values[1])];
    Ok(RowEigen { values, vectors })
}

/// Coordinates of `v` in the basis `rows`.
fn coords(rows: &[[QuadExt; 2]; 2], v: &[QuadExt; 2]) -> Option<[QuadExt; 2]> {
    let a = vec![
        vec![rows[0][0].clone(), rows[1][0].clone()],
        vec![rows[0][1].clone(), rows[1][1].clone()],
    ];
    let s = solve(a, v.to_vec())?;
    Some([s[0].clone(), s[1].clone()])
}

/// The value of `grid` with each listed RHS unary vertex set to `target`,
/// from the grids in which they are `seed · M^j` for `j = 0..=n`.
pub fn interpolate_unary(
    grid: &SignatureGrid,
    unaries: &[usize],
    m: &Mat2,
    seed: [Rat; 2],
    target: [Rat; 2],
    opts: &EvalOptions,
) -> Result<Interpolation, InterpError> {
    for &u in unaries {
        let v = grid.vertices().get(u).ok_or(InterpError::UnexpectedVertex(u))?;
        if v.polarity != [Polarity::R] {
            return Err(InterpError::UnexpectedVertex(u));
        }
    }
    let eig = row_eigen(m)?;
    let q = |r: &Rat| QuadExt::from_rat(r.clone());
    let [alpha, beta] = coords(&eig.vectors, &[q(&seed[0]), q(&seed[1])]).ok_or(InterpError::NotDiagonalizable)?;
    if alpha.is_zero() || beta.is_zero() {
        return Err(InterpError::EigenvectorSeed);
    }
    let [gamma, delta] =
        coords(&eig.vectors, &[q(&target[0]), q(&target[1])]).ok_or(InterpError::NotDiagonalizable)?;
    let n = unaries.len();
    let mut evaluations = Vec::with_capacity(n + 1);
    let mut v = seed.clone();
    for _ in 0..=n {
        let mut g = grid.clone();
        for &u in unaries {
            g = g.with_signature(u, crate::grid::unary(v[0].clone(), v[1].clone()))?;
        }
        evaluations.push(g.holant_with(opts)?);
        v = m.left_apply(&v);
    }
    let [l, mu] = eig.values;
    let nodes: Vec<QuadExt> = (0..=n).map(|k| pow(&l, n - k) * pow(&mu, k)).collect();
    // y_k = α^{n−k} β^k C_k; the target needs γ^{n−k} δ^k C_k
    let weights: Vec<QuadExt> = (0..=n)
        .map(|k| {
            let num = pow(&gamma, n - k) * pow(&delta, k);
            let den = pow(&alpha, n - k) * pow(&beta, k);
            num * den.inverse().expect("nonzero by the seed check")
        })
        .collect();
    let values: Vec<QuadExt> = evaluations.iter().map(<QuadExt as Scalar>::from_rat).collect();
    let (value, coefficients) = solve_stratified(&nodes, &values, &weights)?;
    Ok(Interpolation {
        evaluations,
        nodes,
        coefficients,
        value,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReductionPlan {
    /// Arity of f.
    pub m: usize,
    /// Arity of g.
    pub n: usize,
    pub k: usize,
    /// Number of disjoint copies, `n / k`.
    pub s: usize,
    pub n_f: usize,
    pub n_g: usize,
    pub n_u: usize,
    /// Absorbing copies of g, `N_u / k`.
    pub t: usize,
}

#[derive(Clone, Debug)]
pub struct SplitReduction {
    pub plan: SplitReductionPlan,
    /// `s` copies of the input with each `[1,x]` replaced by
    /// `[[1,x],[y,xy]]`, whose free L ends feed `t` copies of g.
    pub grid: SignatureGrid,
    /// `(Σ_p g(p)·y^|p|)^t`.
    pub factor: Rat,
    /// Copies of the input inside `grid`: `s`, or 1 when no unary occurs
    /// and the input is returned unchanged.
    pub copies: usize,
}

impl SplitReduction {
    /// The original value from the transformed one: the nonnegative `s`-th
    /// root of `value / factor`, when it is rational.
    pub fn recover(&self, value: &Rat) -> Option<Rat> {
        nth_root(&(value / &self.factor), self.copies)
    }
}

/// Nonnegative rational `s`-th root, when exact.
pub fn nth_root(v: &Rat, s: usize) -> Option<Rat> {
    if v.is_negative() {
        return None;
    }
    let root = |z: &num::BigInt| -> Option<num::BigInt> {
        let r = z.nth_root(s as u32);
        (num::pow::pow(r.clone(), s) == *z).then_some(r)
    };
    Some(Rat::new(root(v.numer())?, root(v.denom())?))
}

/// Classifies every vertex of `grid` as f (LHS, arity `m`), g (RHS, equal
/// to `g`) or the RHS unary `[1, x]`, then builds the transformed grid.
pub fn split_reduction(
    grid: &SignatureGrid,
    g: &Tensor,
    x: &Rat,
    y: &Rat,
) -> Result<SplitReduction, InterpError> {
    if x.is_negative() || y.is_negative() {
        return Err(InterpError::NegativeWeight);
    }
    let n = g.arity();
    let ones = (1usize << n) - 1;
    if (0..ones).all(|p| g.get(p).is_zero()) {
        return Err(InterpError::DegenerateG);
    }
    grid.validate()?;
    if !grid.dangling().is_empty() {
        return Err(GridError::DanglingPorts(grid.dangling().len()).into());
    }
    let ux = crate::grid::unary(Rat::one(), x.clone());
    let mut m = None;
    let (mut n_f, mut n_g) = (0, 0);
    let mut us = Vec::new();
    for (i, v) in grid.vertices().iter().enumerate() {
        let all = |p: Polarity| v.polarity.iter().all(|&q| q == p);
        if all(Polarity::L) && !v.polarity.is_empty() && *m.get_or_insert(v.polarity.len()) == v.polarity.len() {
            n_f += 1;
        } else if all(Polarity::R) && v.signature == *g {
            n_g += 1;
        } else if v.polarity == [Polarity::R] && v.signature == ux {
            us.push(i);
        } else {
            return Err(InterpError::UnexpectedVertex(i));
        }
    }
    let m = m.unwrap_or(0);
    let n_u = us.len();
    let k = gcd(m.max(1), n);
    let (lhs, rhs) = (m * n_f, n * n_g + n_u);
    if lhs != rhs || n_u % k != 0 {
        return Err(InterpError::CountMismatch { lhs, rhs, k });
    }
    let s = n / k;
    let t = n_u / k;
    let plan = SplitReductionPlan { m, n, k, s, n_f, n_g, n_u, t };

    let mut weight = Rat::zero();
    for p in 0..1usize << n {
        weight += g.get(p) * pow(y, p.count_ones() as usize);
    }
    let factor = pow(&weight, t);
    if factor.is_zero() {
        return Err(InterpError::VanishingFactor);
    }
    if t == 0 {
        return Ok(SplitReduction {
            plan,
            grid: grid.clone(),
            factor,
            copies: 1,
        });
    }

    let b = Tensor::from_mat2(&Mat2::new(Rat::one(), x.clone(), y.clone(), x * y));
    let is_b: Vec<bool> = (0..grid.vertices().len()).map(|i| us.contains(&i)).collect();
    // each unary becomes B: its old port (now slot 1, R) stays wired to f and
    // a new L port (slot 0) waits for a g
    let mut copy = SignatureGrid::new();
    for (i, v) in grid.vertices().iter().enumerate() {
        if is_b[i] {
            copy.add_vertex(b.clone(), vec![Polarity::L, Polarity::R]);
        } else {
            copy.add_vertex(v.signature.clone(), v.polarity.clone());
        }
    }
    let fix = |p: Port| if is_b[p.vertex] { Port::new(p.vertex, 1) } else { p };
    for &(p, q) in grid.edges() {
        copy.connect(fix(p), fix(q));
    }
    for &u in &us {
        copy.add_dangling(Port::new(u, 0));
    }
    let mut out = SignatureGrid::new();
    for _ in 0..s {
        out = out.disjoint_union(&copy);
    }
    let free = out.take_dangling();
    for chunk in free.chunks(n) {
        let gv = out.add_right(g.clone());
        for (slot, &p) in chunk.iter().enumerate() {
            out.connect(p, Port::new(gv, slot));
        }
    }
    Ok(SplitReduction {
        plan,
        grid: out,
        factor,
        copies: s,
    })
}
