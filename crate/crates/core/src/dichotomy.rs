//! The complexity classification of `Holant(f | =3)` for nonnegative
//! ternary `f`, the 2-3 criterion for binary `[a,1,b]`, and exact checks of
//! the algebraic identities behind the hardness case analysis.

use std::fmt;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{pow, rat, QuadExt, Rat};
use crate::sig::{jordan, SigError, SymSig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DichotomyError {
    #[error("signature {0} has a negative entry")]
    NegativeEntry(SymSig),
    #[error("expected a ternary signature, got arity {0}")]
    WrongArity(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Sig(#[from] SigError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Fp,
    SharpPHard,
}

/// The three tractable families, numbered as in the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TractableCase {
    /// `f = u⊗u⊗u`.
    Degenerate = 1,
    /// `x1 = x2 = 0`.
    GeneralizedEquality = 2,
    /// Parity signatures `λ[1,0,1,0]` and `λ[0,1,0,1]`.
    Affine = 3,
}

impl TractableCase {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            TractableCase::Degenerate => "degenerate",
            TractableCase::GeneralizedEquality => "generalized equality",
            TractableCase::Affine => "affine",
        }
    }
}

/// Which branch of the hardness argument covers a signature, found by
/// replaying the case split on its normalized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Citation {
    /// `x0 = x3 = 0` and `x1 = x2 = 0`.
    IdenticallyZero,
    /// `[0,1,0,0]` up to scale and reversal; exact cover by 3-sets.
    ExactOne,
    /// `[0,1,b,0]` with `b ≠ 1`, via G2.
    ZeroEndsG2,
    /// `[0,1,1,0]`, via G4 giving `[3,2,2,3]`.
    ZeroEndsG4,
    /// `[1,a,b,c]`, `ab ≠ 0`, neither exception equation holds.
    BasicCase1,
    /// `[1,a,b,c]`, `ab ≠ 0`, `a³ − b³ = ab(1 − c)`.
    BasicCase2,
    /// `[1,a,b,c]`, `ab ≠ 0`, `c = ab`.
    BasicCase3,
    /// `[1,a,0,c]` with `a ≠ 0`.
    BZero,
    /// `[1,0,b,1]`.
    AZeroCOne,
    /// `[1,0,b,0]`.
    AZeroCZero,
    /// `[1,0,b,c]` with `c ∉ {0,1}`.
    AZeroCOther,
}

impl Citation {
    pub fn tag(self) -> &'static str {
        match self {
            Citation::IdenticallyZero => "identically-zero",
            Citation::ExactOne => "exact-one/rx3c",
            Citation::ZeroEndsG2 => "zero-ends/G2",
            Citation::ZeroEndsG4 => "zero-ends/G4",
            Citation::BasicCase1 => "basic/case-1",
            Citation::BasicCase2 => "basic/case-2",
            Citation::BasicCase3 => "basic/case-3",
            Citation::BZero => "b-zero/G2",
            Citation::AZeroCOne => "a-zero/c-one",
            Citation::AZeroCZero => "a-zero/c-zero",
            Citation::AZeroCOther => "a-zero/c-other",
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryClassification {
    pub verdict: Verdict,
    /// All tractable families containing `f`, in order; empty when hard.
    pub cases: Vec<TractableCase>,
    pub citation: Citation,
}

impl TernaryClassification {
    /// First matching tractable case.
    pub fn case(&self) -> Option<TractableCase> {
        self.cases.first().copied()
    }

    pub fn is_tractable(&self) -> bool {
        self.verdict == Verdict::Fp
    }
}

impl fmt::Display for TernaryClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case() {
            Some(c) => write!(f, "FP: {} (case {})", c.name(), c.number()),
            None => write!(f, "#P-hard"),
        }
    }
}

/// Tractable families containing `f`, without sign checks.
pub fn tractable_cases(f: &SymSig) -> Vec<TractableCase> {
    let x = f.values();
    let mut out = Vec::new();
    if f.is_degenerate() {
        out.push(TractableCase::Degenerate);
    }
    if x[1].is_zero() && x[2].is_zero() {
        out.push(TractableCase::GeneralizedEquality);
    }
    let even = x[1].is_zero() && x[3].is_zero() && x[0] == x[2];
    let odd = x[0].is_zero() && x[2].is_zero() && x[1] == x[3];
    if even || odd {
        out.push(TractableCase::Affine);
    }
    out
}

pub fn classify_ternary(f: &SymSig) -> Result<TernaryClassification, DichotomyError> {
    if f.arity() != 3 {
        return Err(DichotomyError::WrongArity(f.arity()));
    }
    if !f.is_nonnegative() {
        return Err(DichotomyError::NegativeEntry(f.clone()));
    }
    let cases = tractable_cases(f);
    let verdict = if cases.is_empty() {
        Verdict::SharpPHard
    } else {
        Verdict::Fp
    };
    Ok(TernaryClassification {
        verdict,
        cases,
        citation: citation(f)?,
    })
}

fn citation(f: &SymSig) -> Result<Citation, DichotomyError> {
    let x = f.values();
    if x[0].is_zero() && x[3].is_zero() {
        return Ok(match (x[1].is_zero(), x[2].is_zero()) {
            (true, true) => Citation::IdenticallyZero,
            (true, false) | (false, true) => Citation::ExactOne,
            (false, false) if x[1] == x[2] => Citation::ZeroEndsG4,
            (false, false) => Citation::ZeroEndsG2,
        });
    }
    let n = f.normalize()?;
    let (a, b, c) = (n.a(), n.b(), n.c());
    Ok(if !a.is_zero() && !b.is_zero() {
        if case2_expr(a, b, c).is_zero() {
            Citation::BasicCase2
        } else if (a * b - c).is_zero() {
            Citation::BasicCase3
        } else {
            Citation::BasicCase1
        }
    } else if !a.is_zero() {
        Citation::BZero
    } else if c.is_one() {
        Citation::AZeroCOne
    } else if c.is_zero() {
        Citation::AZeroCZero
    } else {
        Citation::AZeroCOther
    })
}

/// `a³ − b³ − ab(1 − c)`.
fn case2_expr(a: &Rat, b: &Rat, c: &Rat) -> Rat {
    pow(a, 3) - pow(b, 3) - a * b * (Rat::one() - c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Binary23Case {
    XOne = 1,
    XZeroZZero = 2,
    XMinusOneZZero = 3,
    XMinusOneZMinusOne = 4,
}

/// The 2-3 criterion for binary `[a,1,b]` on the LHS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binary23Criterion {
    pub a: Rat,
    pub b: Rat,
    /// `ab`.
    pub x: Rat,
    /// `((a³ + b³)/2)²`.
    pub z: Rat,
    pub case: Option<Binary23Case>,
}

impl Binary23Criterion {
    pub fn is_tractable(&self) -> bool {
        self.case.is_some()
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_tractable() {
            Verdict::Fp
        } else {
            Verdict::SharpPHard
        }
    }
}

pub fn classify_binary23(a: &Rat, b: &Rat) -> Binary23Criterion {
    let x = a * b;
    let half = (pow(a, 3) + pow(b, 3)) / Rat::from_integer(2.into());
    let z = &half * &half;
    let one = Rat::one();
    let case = if x == one {
        Some(Binary23Case::XOne)
    } else if x.is_zero() && z.is_zero() {
        Some(Binary23Case::XZeroZZero)
    } else if x == -one.clone() && z.is_zero() {
        Some(Binary23Case::XMinusOneZZero)
    } else if x == -one.clone() && z == -one {
        // z is a rational square, so this never fires
        Some(Binary23Case::XMinusOneZMinusOne)
    } else {
        None
    };
    Binary23Criterion {
        a: a.clone(),
        b: b.clone(),
        x,
        z,
        case,
    }
}

/// Binary `[p,q,r]` obtained on the LHS by closing one port of `f` with the
/// unary `u` (placed on the RHS).
pub fn close_with_unary(f: &SymSig, u: [&Rat; 2]) -> [Rat; 3] {
    let x = f.values();
    [
        &x[0] * u[0] + &x[1] * u[1],
        &x[1] * u[0] + &x[2] * u[1],
        &x[2] * u[0] + &x[3] * u[1],
    ]
}

/// Whether a binary `[p,q,r]` with `q ≠ 0` passes the 2-3 criterion after
/// scaling to `[p/q, 1, r/q]`; over nonnegative values this is `pr = q²`.
pub fn binary_is_tractable(p: &Rat, q: &Rat, r: &Rat) -> Option<bool> {
    if q.is_zero() {
        return None;
    }
    Some(classify_binary23(&(p / q), &(r / q)).is_tractable())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCheck {
    /// The G3 unary `[y²+yb, ya+c]` is proportional to the eigenvector `[1,x]`.
    pub lhs: bool,
    /// `(a³ − b³ − ab(1−c))·(ab − c) = 0`.
    pub rhs: bool,
}

/// Evaluates both sides of the factorization of the eigenvector exception
/// at `[1,a,b,c]`; `x, y` live in `Q(√Δ²)`.
///
/// The left side implies the right side. The converse fails: on the family
/// `c = ab` with `b ≠ a²` the right side holds but the left does not.
pub fn verify_factorization_identity(a: &Rat, b: &Rat, c: &Rat) -> Result<FactorizationCheck, DichotomyError> {
    if !a.is_positive() || !b.is_positive() || c.is_negative() {
        return Err(DichotomyError::Precondition(
            "need a > 0, b > 0, c >= 0".into(),
        ));
    }
    let f = SymSig::new(vec![Rat::one(), a.clone(), b.clone(), c.clone()]);
    let j = jordan(&f.straddled()?)?;
    let q = |r: &Rat| QuadExt::from_rat(r.clone());
    let y = &j.y;
    let u0 = y * y + y * &q(b);
    let u1 = y * &q(a) + q(c);
    let lhs = u1 == &j.x * &u0;
    let rhs = (case2_expr(a, b, c) * (a * b - c)).is_zero();
    Ok(FactorizationCheck { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// Trials sampled on the zero locus of the factored side.
    pub on_locus: usize,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} passed ({} on the zero locus)",
            self.name, self.passed, self.trials, self.on_locus
        )
    }
}

fn positive_rat(rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(1..=12), rng.gen_range(1..=6))
}

/// Checks under `a³ − b³ = ab(1 − c)`: Δ = (a³+b³)/(ab), the interpolated
/// unary is `[1, b²/a²]`, and the closed binary passes the 2-3 criterion
/// exactly when `(a² − b)(a³ + ab + 2b³) = 0`.
pub fn check_case2(a: &Rat, b: &Rat) -> Result<bool, DichotomyError> {
    let c = Rat::one() - (pow(a, 3) - pow(b, 3)) / (a * b);
    let f = SymSig::new(vec![Rat::one(), a.clone(), b.clone(), c.clone()]);
    let j = jordan(&f.straddled()?)?;
    let want_delta = (pow(a, 3) + pow(b, 3)) / (a * b);
    let x_expected = pow(b, 2) / pow(a, 2);
    let delta_ok = j.delta.to_rat() == Some(want_delta);
    let x = j.x.to_rat();
    let x_ok = x.as_ref() == Some(&x_expected);
    let bin = close_with_unary(&f, [&Rat::one(), &x_expected]);
    let tractable = binary_is_tractable(&bin[0], &bin[1], &bin[2]).unwrap_or(false);
    let factored = ((pow(a, 2) - b) * (pow(a, 3) + a * b + pow(b, 3) * Rat::from_integer(2.into()))).is_zero();
    let closed_form = &bin[0] * &bin[2] - &bin[1] * &bin[1]
        == -(pow(a, 2) - b) * (pow(a, 3) + a * b + Rat::from_integer(2.into()) * pow(b, 3)) / pow(a, 3);
    Ok(delta_ok && x_ok && closed_form && tractable == factored)
}

/// Checks under `c = ab`: Δ = 1 + c, the unary is `[1, b]`, and the closed
/// binary passes the criterion exactly when `(a² − b)(b³ − 1) = 0`.
pub fn check_case3(a: &Rat, b: &Rat) -> Result<bool, DichotomyError> {
    let c = a * b;
    let f = SymSig::new(vec![Rat::one(), a.clone(), b.clone(), c.clone()]);
    let j = jordan(&f.straddled()?)?;
    let delta_ok = j.delta.to_rat() == Some(Rat::one() + &c);
    let x_ok = j.x.to_rat().as_ref() == Some(b);
    let bin = close_with_unary(&f, [&Rat::one(), b]);
    let want = [Rat::one() + a * b, a + pow(b, 2), b + b * &c];
    let lhs_eq = &want[0] * &want[2] == &want[1] * &want[1];
    let factor = (pow(a, 2) - b) * (pow(b, 3) - Rat::one());
    let exact = &want[0] * &want[2] - &want[1] * &want[1] == factor;
    Ok(delta_ok && x_ok && bin == want && exact && lhs_eq == factor.is_zero())
}

/// `2 + 2a³ = 2a + 2a²` exactly when `(a − 1)²(a + 1) = 0`, with the
/// difference equal to `2(a − 1)²(a + 1)`.
pub fn check_alternating(a: &Rat) -> bool {
    let two = Rat::from_integer(2.into());
    let end = &two + &two * pow(a, 3);
    let mid = &two * a + &two * pow(a, 2);
    let factor = pow(&(a - Rat::one()), 2) * (a + Rat::one());
    (&end - &mid == &two * &factor) && ((end == mid) == factor.is_zero())
}

/// Randomized identity suites, `trials` instances each, deterministic in
/// `seed`. About a quarter of each suite is drawn from the zero locus.
pub fn verify_case_identities(seed: u64, trials: usize) -> Result<Vec<IdentityReport>, DichotomyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();

    let mut r = IdentityReport { name: "case-2 (a^2-b)(a^3+ab+2b^3)", trials, passed: 0, on_locus: 0 };
    for i in 0..trials {
        let a = positive_rat(&mut rng);
        let b = if i % 4 == 0 { r.on_locus += 1; pow(&a, 2) } else { positive_rat(&mut rng) };
        if check_case2(&a, &b)? {
            r.passed += 1;
        }
    }
    reports.push(r);

    let mut r = IdentityReport { name: "case-3 (a^2-b)(b^3-1)", trials, passed: 0, on_locus: 0 };
    for i in 0..trials {
        let a = positive_rat(&mut rng);
        let b = match i % 4 {
            0 => { r.on_locus += 1; pow(&a, 2) }
            1 => { r.on_locus += 1; Rat::one() }
            _ => positive_rat(&mut rng),
        };
        if check_case3(&a, &b)? {
            r.passed += 1;
        }
    }
    reports.push(r);

    let mut r = IdentityReport { name: "alternating (a-1)^2(a+1)", trials, passed: 0, on_locus: 0 };
    for i in 0..trials {
        let a = match i % 4 {
            0 => { r.on_locus += 1; Rat::one() }
            1 => { r.on_locus += 1; -Rat::one() }
            _ => rat(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
        };
        if check_alternating(&a) {
            r.passed += 1;
        }
    }
    reports.push(r);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn s(v: &[i64]) -> SymSig {
        SymSig::from_ints(v)
    }

    #[test]
    fn listed_verdicts() {
        let c = classify_ternary(&s(&[5, 0, 0, 7])).unwrap();
        assert_eq!(c.case(), Some(TractableCase::GeneralizedEquality));
        let c = classify_ternary(&s(&[1, 0, 1, 0])).unwrap();
        assert_eq!(c.case(), Some(TractableCase::Affine));
        assert_eq!(c.to_string(), "FP: affine (case 3)");
        let c = classify_ternary(&s(&[0, 1, 1, 0])).unwrap();
        assert_eq!(c.verdict, Verdict::SharpPHard);
        assert_eq!(c.citation, Citation::ZeroEndsG4);
        assert_eq!(c.to_string(), "#P-hard");
        let c = classify_ternary(&s(&[1, 1, 0, 0])).unwrap();
        assert_eq!(c.verdict, Verdict::SharpPHard);
        assert_eq!(c.citation, Citation::BZero);
        let c = classify_ternary(&s(&[1, 2, 4, 8])).unwrap();
        assert_eq!(c.case(), Some(TractableCase::Degenerate));
        let c = classify_ternary(&s(&[0, 1, 0, 0])).unwrap();
        assert_eq!((c.verdict, c.citation), (Verdict::SharpPHard, Citation::ExactOne));
        // degenerate and generalized equality at once
        let c = classify_ternary(&s(&[1, 0, 0, 0])).unwrap();
        assert_eq!(c.cases, vec![TractableCase::Degenerate, TractableCase::GeneralizedEquality]);
        let c = classify_ternary(&s(&[0, 0, 0, 0])).unwrap();
        assert_eq!(c.citation, Citation::IdenticallyZero);
        assert!(c.is_tractable());
    }

    #[test]
    fn rejects_negative_and_non_ternary() {
        assert!(matches!(
            classify_ternary(&s(&[1, -1, 0, 0])),
            Err(DichotomyError::NegativeEntry(_))
        ));
        assert!(matches!(classify_ternary(&s(&[1, 0, 1])), Err(DichotomyError::WrongArity(2))));
    }

    #[test]
    fn binary_criterion() {
        assert_eq!(classify_binary23(&int(1), &int(1)).case, Some(Binary23Case::XOne));
        assert_eq!(classify_binary23(&int(0), &int(0)).case, Some(Binary23Case::XZeroZZero));
        let c = classify_binary23(&int(2), &int(1));
        assert_eq!((c.x.clone(), c.z.clone()), (int(2), rat(81, 4)));
        assert_eq!(c.verdict(), Verdict::SharpPHard);
        assert_eq!(classify_binary23(&int(-1), &int(1)).case, Some(Binary23Case::XMinusOneZZero));
    }

    #[test]
    fn factorization_examples() {
        let r = verify_factorization_identity(&int(1), &int(1), &int(1)).unwrap();
        assert!(r.lhs && r.rhs);
        let r = verify_factorization_identity(&int(1), &int(1), &int(2)).unwrap();
        assert!(!r.lhs && !r.rhs);
        // c = ab with b ≠ a²: the factored side vanishes, the exception does not
        let r = verify_factorization_identity(&int(1), &int(2), &int(2)).unwrap();
        assert!(!r.lhs && r.rhs);
        // degenerate [1,a,a²,a³] satisfies both
        let r = verify_factorization_identity(&int(2), &int(4), &int(8)).unwrap();
        assert!(r.lhs && r.rhs);
    }

    #[test]
    fn case_examples() {
        assert!(check_case3(&int(2), &int(4)).unwrap());
        assert!(check_case3(&int(3), &int(1)).unwrap());
        assert!(check_case2(&int(1), &int(1)).unwrap());
        assert!(check_alternating(&int(1)));
        for r in verify_case_identities(1, 200).unwrap() {
            assert!(r.ok(), "{r}");
            assert!(r.on_locus > 0);
        }
    }

    fn nonneg() -> impl Strategy<Value = Rat> {
        (0i64..6, 1i64..4).prop_map(|(n, d)| rat(n, d))
    }

    fn pos() -> impl Strategy<Value = Rat> {
        (1i64..12, 1i64..5).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn reversal_and_scaling_invariance(x in proptest::collection::vec(nonneg(), 4), k in pos()) {
            let f = SymSig::new(x);
            let v = classify_ternary(&f).unwrap().verdict;
            prop_assert_eq!(classify_ternary(&f.reverse()).unwrap().verdict, v);
            prop_assert_eq!(classify_ternary(&f.scale(&k)).unwrap().verdict, v);
        }

        #[test]
        fn nonnegative_binary_reduces(a in nonneg(), b in nonneg()) {
            let t = classify_binary23(&a, &b).is_tractable();
            prop_assert_eq!(t, (&a * &b).is_one() || (a.is_zero() && b.is_zero()));
        }

        #[test]
        fn factorization_implication(a in pos(), b in pos(), c in nonneg()) {
            let r = verify_factorization_identity(&a, &b, &c).unwrap();
            prop_assert!(!r.lhs || r.rhs);
        }

        #[test]
        fn factorization_on_degenerate_family(a in pos()) {
            let r = verify_factorization_identity(&a, &pow(&a, 2), &pow(&a, 3)).unwrap();
            prop_assert!(r.lhs && r.rhs);
        }
    }
}
