//! Polynomial-time evaluation of `Holant(f | =3)` for every tractable `f`.

use num::{One, Zero};
use thiserror::Error;

use crate::arith::{pow, Rat};
use crate::dichotomy::{classify_ternary, DichotomyError, TernaryClassification, TractableCase};
use crate::grid::gadgets::equality_tensor;
use crate::grid::{EvalOptions, GridError, Polarity, SignatureGrid};
use crate::sig::SymSig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TractableError {
    #[error("signature {0} is not degenerate")]
    NotDegenerate(SymSig),
    #[error("signature {f} is not in the {case} family")]
    WrongCase { f: SymSig, case: &'static str },
    #[error("Holant({0} | =3) is #P-hard; refusing to evaluate")]
    Refused(SymSig),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Dichotomy(#[from] DichotomyError),
}

/// A 3-regular bipartite grid whose `L` vertices all carry `f` and whose
/// `R` vertices all carry `=3`.
#[derive(Clone, Debug, PartialEq)]
pub struct TractableInstance {
    grid: SignatureGrid,
    f: SymSig,
}

impl TractableInstance {
    pub fn new(grid: SignatureGrid, f: SymSig) -> Result<Self, TractableError> {
        grid.validate()?;
        if !grid.dangling().is_empty() {
            return Err(GridError::DanglingPorts(grid.dangling().len()).into());
        }
        if f.arity() != 3 {
            return Err(DichotomyError::WrongArity(f.arity()).into());
        }
        let ft = f.to_tensor();
        let eq = equality_tensor(3);
        for (v, vert) in grid.vertices().iter().enumerate() {
            let ok = if vert.polarity.iter().all(|&p| p == Polarity::L) {
                vert.signature == ft
            } else {
                vert.polarity.iter().all(|&p| p == Polarity::R) && vert.signature == eq
            };
            if !ok {
                return Err(GridError::NotPureInstance(format!("vertex {v} is neither f on the left nor =3 on the right")).into());
            }
        }
        Ok(Self { grid, f })
    }

    /// Reads `f` off the grid's first `L` vertex.
    pub fn from_grid(grid: SignatureGrid) -> Result<Self, TractableError> {
        let f = grid
            .vertices()
            .iter()
            .find(|v| v.polarity.first() == Some(&Polarity::L))
            .ok_or_else(|| GridError::NotPureInstance("no left vertex".into()))?
            .signature
            .to_symsig()
            .map_err(GridError::from)?;
        Self::new(grid, f)
    }

    pub fn grid(&self) -> &SignatureGrid {
        &self.grid
    }

    pub fn f(&self) -> &SymSig {
        &self.f
    }

    fn count(&self, side: Polarity) -> usize {
        self.grid.vertices().iter().filter(|v| v.polarity.first() == Some(&side)).count()
    }
}

/// `(x0 + x3)^{|V_R|}`: with `f = u⊗u⊗u`, each `=3` vertex sees three
/// copies of `u` and contributes `u0³ + u1³`.
pub fn solve_degenerate(inst: &TractableInstance) -> Result<Rat, TractableError> {
    let f = &inst.f;
    if !f.is_degenerate() {
        return Err(TractableError::NotDegenerate(f.clone()));
    }
    Ok(pow(&(f.value(0) + f.value(3)), inst.count(Polarity::R)))
}

/// Every edge of a component carries the same bit, so each component with
/// `n` copies of `f` contributes `x0^n + x3^n`.
pub fn solve_gen_equality(inst: &TractableInstance) -> Result<Rat, TractableError> {
    let f = &inst.f;
    if !(f.value(1).is_zero() && f.value(2).is_zero()) {
        return Err(TractableError::WrongCase {
            f: f.clone(),
            case: TractableCase::GeneralizedEquality.name(),
        });
    }
    let verts = inst.grid.vertices();
    let mut total = Rat::one();
    for comp in inst.grid.components() {
        let n = comp.iter().filter(|&&v| verts[v].polarity[0] == Polarity::L).count();
        total *= pow(f.value(0), n) + pow(f.value(3), n);
    }
    Ok(total)
}

/// Parity signatures: `λ[1,0,1,0]` or `λ[0,1,0,1]`. The non-zero
/// assignments are the solutions of a linear system over GF(2), each of
/// weight `λ^{|V_L|}`.
pub fn solve_affine(inst: &TractableInstance) -> Result<Rat, TractableError> {
    let f = &inst.f;
    let x = f.values();
    let even = x[1].is_zero() && x[3].is_zero() && x[0] == x[2];
    let odd = x[0].is_zero() && x[2].is_zero() && x[1] == x[3];
    let (lambda, parity) = match (even, odd) {
        (true, _) => (x[0].clone(), false),
        (_, true) => (x[1].clone(), true),
        _ => {
            return Err(TractableError::WrongCase {
                f: f.clone(),
                case: TractableCase::Affine.name(),
            })
        }
    };
    let m = inst.grid.edges().len();
    let n = inst.grid.vertices().len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, (a, b)) in inst.grid.edges().iter().enumerate() {
        incident[a.vertex].push(e);
        incident[b.vertex].push(e);
    }
    let mut sys = Gf2System::new(m);
    for (v, vert) in inst.grid.vertices().iter().enumerate() {
        let es = &incident[v];
        if vert.polarity[0] == Polarity::L {
            sys.add(es, parity);
        } else {
            for w in es.windows(2) {
                sys.add(w, false);
            }
        }
    }
    match sys.solution_count_log2() {
        None => Ok(Rat::zero()),
        Some(free) => {
            let two = Rat::from_integer(2.into());
            Ok(pow(&lambda, inst.count(Polarity::L)) * pow(&two, free))
        }
    }
}

/// Linear equations over GF(2) as bitset rows with a right-hand side.
#[derive(Clone, Debug)]
pub struct Gf2System {
    vars: usize,
    rows: Vec<(Vec<u64>, bool)>,
}

impl Gf2System {
    pub fn new(vars: usize) -> Self {
        Self { vars, rows: Vec::new() }
    }

    /// Adds `Σ x_i = rhs`; a repeated variable cancels.
    pub fn add(&mut self, vars: &[usize], rhs: bool) {
        let mut row = vec![0u64; self.vars.div_ceil(64)];
        for &i in vars {
            row[i / 64] ^= 1 << (i % 64);
        }
        self.rows.push((row, rhs));
    }

    /// `vars − rank` when consistent, `None` otherwise.
    pub fn solution_count_log2(&self) -> Option<usize> {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.vars {
            let (w, b) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].0[w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let (pivot, prhs) = rows[rank].clone();
            for (r, (row, rhs)) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                    *rhs ^= prhs;
                }
            }
            rank += 1;
        }
        rows[rank..].iter().all(|(_, rhs)| !rhs).then_some(self.vars - rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Evaluated by the polynomial-time solver for `case`.
    Solved { value: Rat, case: TractableCase },
    /// Hard signature evaluated by brute force on request.
    BruteForce { value: Rat, classification: TernaryClassification },
    /// Hard signature, not evaluated.
    Refused(TernaryClassification),
}

impl Outcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Outcome::Solved { value, .. } | Outcome::BruteForce { value, .. } => Some(value),
            Outcome::Refused(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Evaluate hard instances by brute force within the edge cap.
    pub fallback: bool,
    pub eval: EvalOptions,
}

/// Classifies `f` and runs the matching solver.
pub fn solve(inst: &TractableInstance) -> Result<Outcome, TractableError> {
    solve_with(inst, &SolveOptions::default())
}

pub fn solve_with(inst: &TractableInstance, opts: &SolveOptions) -> Result<Outcome, TractableError> {
    let class = classify_ternary(&inst.f)?;
    let Some(case) = class.case() else {
        if opts.fallback {
            let value = inst.grid.holant_with(&opts.eval)?;
            return Ok(Outcome::BruteForce {
                value,
                classification: class,
            });
        }
        return Ok(Outcome::Refused(class));
    };
    let value = solve_case(inst, case)?;
    Ok(Outcome::Solved { value, case })
}

/// Runs one specific solver.
pub fn solve_case(inst: &TractableInstance, case: TractableCase) -> Result<Rat, TractableError> {
    match case {
        TractableCase::Degenerate => solve_degenerate(inst),
        TractableCase::GeneralizedEquality => solve_gen_equality(inst),
        TractableCase::Affine => solve_affine(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::grid::topology::{random_nonneg_rat, random_pure_grid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triple(f: &[i64]) -> TractableInstance {
        let mut g = SignatureGrid::new();
        g.add_left(SymSig::from_ints(f).to_tensor());
        g.add_right(equality_tensor(3));
        for s in 0..3 {
            g.link(0, s, 1, s);
        }
        TractableInstance::from_grid(g).unwrap()
    }

    fn two_plus_two(f: &[i64]) -> TractableInstance {
        let mut g = SignatureGrid::new();
        g.add_left(SymSig::from_ints(f).to_tensor());
        g.add_left(SymSig::from_ints(f).to_tensor());
        g.add_right(equality_tensor(3));
        g.add_right(equality_tensor(3));
        g.link(0, 0, 2, 0);
        g.link(0, 1, 2, 1);
        g.link(0, 2, 3, 0);
        g.link(1, 0, 2, 2);
        g.link(1, 1, 3, 1);
        g.link(1, 2, 3, 2);
        TractableInstance::from_grid(g).unwrap()
    }

    #[test]
    fn degenerate_examples() {
        assert_eq!(solve_degenerate(&triple(&[1, 1, 1, 1])).unwrap(), int(2));
        let i = two_plus_two(&[1, 2, 4, 8]);
        assert_eq!(solve_degenerate(&i).unwrap(), int(81));
        assert_eq!(i.grid().holant().unwrap(), int(81));
        assert_eq!(solve_degenerate(&two_plus_two(&[1, 0, 0, 0])).unwrap(), int(1));
        assert!(matches!(
            solve_degenerate(&triple(&[0, 1, 1, 0])),
            Err(TractableError::NotDegenerate(_))
        ));
    }

    #[test]
    fn gen_equality_examples() {
        assert_eq!(solve_gen_equality(&triple(&[5, 0, 0, 7])).unwrap(), int(12));
        let i = two_plus_two(&[5, 0, 0, 7]);
        assert_eq!(solve_gen_equality(&i).unwrap(), int(74));
        assert_eq!(i.grid().holant().unwrap(), int(74));
        let t = triple(&[5, 0, 0, 7]);
        let both = TractableInstance::from_grid(t.grid().disjoint_union(t.grid())).unwrap();
        assert_eq!(solve_gen_equality(&both).unwrap(), int(144));
    }

    #[test]
    fn affine_examples() {
        assert_eq!(solve_affine(&triple(&[1, 0, 1, 0])).unwrap(), int(1));
        assert_eq!(solve_affine(&triple(&[0, 1, 0, 1])).unwrap(), int(1));
        let i = two_plus_two(&[3, 0, 3, 0]);
        assert_eq!(solve_affine(&i).unwrap(), i.grid().holant().unwrap());
        let i = two_plus_two(&[0, 2, 0, 2]);
        assert_eq!(solve_affine(&i).unwrap(), i.grid().holant().unwrap());
    }

    #[test]
    fn dispatcher() {
        let i = two_plus_two(&[1, 2, 4, 8]);
        assert_eq!(
            solve(&i).unwrap(),
            Outcome::Solved {
                value: int(81),
                case: TractableCase::Degenerate
            }
        );
        let hard = two_plus_two(&[0, 1, 1, 0]);
        assert!(matches!(solve(&hard).unwrap(), Outcome::Refused(_)));
        let opts = SolveOptions {
            fallback: true,
            ..Default::default()
        };
        assert_eq!(solve_with(&hard, &opts).unwrap().value(), Some(&int(2)));
        assert_eq!(solve(&two_plus_two(&[0, 0, 0, 0])).unwrap().value(), Some(&int(0)));
    }

    #[test]
    fn gf2_rank() {
        let mut s = Gf2System::new(3);
        s.add(&[0, 1], false);
        s.add(&[1, 2], false);
        s.add(&[0, 2], true);
        assert_eq!(s.solution_count_log2(), None);
        let mut s = Gf2System::new(130);
        s.add(&[0, 129], true);
        s.add(&[5, 5], false);
        assert_eq!(s.solution_count_log2(), Some(129));
    }

    fn random_member<R: Rng>(rng: &mut R, case: TractableCase) -> SymSig {
        let r = |rng: &mut R| random_nonneg_rat(rng, 4);
        match case {
            TractableCase::Degenerate => {
                let (u0, u1) = (r(rng), r(rng));
                SymSig::new(vec![
                    pow(&u0, 3),
                    pow(&u0, 2) * &u1,
                    &u0 * pow(&u1, 2),
                    pow(&u1, 3),
                ])
            }
            TractableCase::GeneralizedEquality => SymSig::new(vec![r(rng), int(0), int(0), r(rng)]),
            TractableCase::Affine => {
                let l = r(rng);
                if rng.gen_bool(0.5) {
                    SymSig::new(vec![l.clone(), int(0), l, int(0)])
                } else {
                    SymSig::new(vec![int(0), l.clone(), int(0), l])
                }
            }
        }
    }

    #[test]
    fn solvers_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in [
            TractableCase::Degenerate,
            TractableCase::GeneralizedEquality,
            TractableCase::Affine,
        ] {
            for _ in 0..40 {
                let f = random_member(&mut rng, case);
                let n = rng.gen_range(1..=3);
                let g = random_pure_grid(&mut rng, n, &f.to_tensor());
                let inst = TractableInstance::new(g, f).unwrap();
                assert_eq!(solve_case(&inst, case).unwrap(), inst.grid().holant().unwrap());
            }
        }
    }

    #[test]
    fn degenerate_and_equality_overlap() {
        for f in [[3, 0, 0, 0], [0, 0, 0, 5], [0, 0, 0, 0]] {
            let i = two_plus_two(&f);
            assert_eq!(solve_degenerate(&i).unwrap(), solve_gen_equality(&i).unwrap());
        }
    }
}
