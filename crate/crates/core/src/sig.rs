//! Signatures: symmetric value lists, dense tensors, and the algebra used by
//! the dichotomy (normalization, degeneracy, Hadamard transforms, the G1
//! straddled matrix and its eigen-data).

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{ArithError, QuadExt, Rat, Scalar};
use crate::linalg::Mat2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigError {
    #[error("normalization undefined: x0 = x3 = 0")]
    NormalizationUndefined,
    #[error("signature is not degenerate")]
    NotDegenerate,
    #[error("a = 0: the straddled matrix has no [1,x] eigenbasis")]
    ZeroA,
    #[error("delta = 0: (c = 1 and ab = 0), eigenvalues coincide")]
    ZeroDelta,
    #[error("(1-c)^2 + 4ab < 0: eigenvalues are not real")]
    ComplexEigenvalues,
    #[error("expected a matrix of the form [[1,b],[a,c]]")]
    NotNormalized,
    #[error("expected arity {expected}, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("tensor of arity {arity} needs {expected} entries, got {found}")]
    BadTensorSize {
        arity: usize,
        expected: usize,
        found: usize,
    },
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Symmetric signature `[x_0, ..., x_n]`: the value on every input of
/// Hamming weight `w` is `x_w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymSig {
    values: Vec<Rat>,
}

impl SymSig {
    pub fn new(values: Vec<Rat>) -> Self {
        assert!(!values.is_empty(), "a signature needs at least one value");
        Self { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| crate::arith::int(v)).collect())
    }

    /// `=_n = [1, 0, ..., 0, 1]`.
    pub fn equality(arity: usize) -> Self {
        let mut v = vec![Rat::zero(); arity + 1];
        v[0] = Rat::one();
        v[arity] = Rat::one();
        Self::new(v)
    }

    pub fn arity(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, weight: usize) -> &Rat {
        &self.values[weight]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn expect_arity(&self, arity: usize) -> Result<(), SigError> {
        if self.arity() == arity {
            Ok(())
        } else {
            Err(SigError::WrongArity {
                expected: arity,
                found: self.arity(),
            })
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(self.values.iter().map(|v| v * k).collect())
    }

    /// Flip every input bit: `[x_0..x_n] -> [x_n..x_0]`.
    pub fn reverse(&self) -> Self {
        Self::new(self.values.iter().rev().cloned().collect())
    }

    pub fn to_tensor(&self) -> Tensor {
        let n = self.arity();
        Tensor {
            arity: n,
            entries: (0..1usize << n)
                .map(|p| self.values[p.count_ones() as usize].clone())
                .collect(),
        }
    }

    /// Brings a nonnegative ternary signature to the form `[1, a, b, c]`,
    /// reversing first when `x0 = 0`.
    pub fn normalize(&self) -> Result<Normalized, SigError> {
        self.expect_arity(3)?;
        let (src, flipped) = if !self.values[0].is_zero() {
            (self.clone(), false)
        } else if !self.values[3].is_zero() {
            (self.reverse(), true)
        } else {
            return Err(SigError::NormalizationUndefined);
        };
        let scalar = src.values[0].clone();
        let form = src.scale(&scalar.recip());
        Ok(Normalized {
            form,
            scalar,
            flipped,
        })
    }

    /// Whether `f = u ⊗ u ⊗ u` for some unary `u`, decided by the vanishing
    /// of all 2×2 minors of `[[x0,x1,x2],[x1,x2,x3]]`.
    pub fn is_degenerate(&self) -> bool {
        if self.arity() != 3 {
            return false;
        }
        let [x0, x1, x2, x3] = self.ternary();
        (x0 * x2 - x1 * x1).is_zero() && (x0 * x3 - x1 * x2).is_zero() && (x1 * x3 - x2 * x2).is_zero()
    }

    /// Exposes the monomials of `u` that a degenerate `f = u^{⊗3}` fixes.
    pub fn decompose_degenerate(&self) -> Result<DegenerateUnary, SigError> {
        self.expect_arity(3)?;
        if !self.is_degenerate() {
            return Err(SigError::NotDegenerate);
        }
        let [x0, x1, x2, x3] = self.ternary();
        Ok(DegenerateUnary {
            u0_cubed: x0.clone(),
            u0_sq_u1: x1.clone(),
            u0_u1_sq: x2.clone(),
            u1_cubed: x3.clone(),
        })
    }

    /// Signature matrix of the G1 gadget: `[[x0, x2], [x1, x3]]`.
    pub fn straddled(&self) -> Result<Mat2, SigError> {
        self.expect_arity(3)?;
        let [x0, x1, x2, x3] = self.ternary();
        Ok(Mat2::new(x0.clone(), x2.clone(), x1.clone(), x3.clone()))
    }

    fn ternary(&self) -> [&Rat; 4] {
        [&self.values[0], &self.values[1], &self.values[2], &self.values[3]]
    }
}

impl fmt::Display for SymSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Result of [`SymSig::normalize`]: `f = scalar · form` (after reversal when
/// `flipped`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub form: SymSig,
    pub scalar: Rat,
    pub flipped: bool,
}

impl Normalized {
    pub fn a(&self) -> &Rat {
        self.form.value(1)
    }
    pub fn b(&self) -> &Rat {
        self.form.value(2)
    }
    pub fn c(&self) -> &Rat {
        self.form.value(3)
    }

    pub fn reconstruct(&self) -> SymSig {
        let s = self.form.scale(&self.scalar);
        if self.flipped {
            s.reverse()
        } else {
            s
        }
    }
}

/// The four monomials `u0³, u0²u1, u0u1², u1³` of a degenerate ternary
/// signature. Only these are ever needed, so no cube root is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateUnary {
    pub u0_cubed: Rat,
    pub u0_sq_u1: Rat,
    pub u0_u1_sq: Rat,
    pub u1_cubed: Rat,
}

/// Dense signature on `arity` Boolean inputs. Entry index `p` encodes the
/// input with slot 0 as the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<T = Rat> {
    arity: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn new(arity: usize, entries: Vec<T>) -> Result<Self, SigError> {
        let expected = 1usize << arity;
        if entries.len() != expected {
            return Err(SigError::BadTensorSize {
                arity,
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { arity, entries })
    }

    pub fn scalar(v: T) -> Self {
        Self {
            arity: 0,
            entries: vec![v],
        }
    }

    pub fn from_mat2(m: &Mat2<T>) -> Self {
        Self {
            arity: 2,
            entries: m.entries(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, pattern: usize) -> &T {
        &self.entries[pattern]
    }

    /// Entry for explicit per-slot bits.
    pub fn at(&self, bits: &[u8]) -> &T {
        debug_assert_eq!(bits.len(), self.arity);
        let p = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        &self.entries[p]
    }

    /// Bit of `slot` in pattern `p`.
    pub fn bit(&self, pattern: usize, slot: usize) -> u8 {
        ((pattern >> (self.arity - 1 - slot)) & 1) as u8
    }

    pub fn is_symmetric(&self) -> bool {
        let mut by_weight: Vec<Option<&T>> = vec![None; self.arity + 1];
        self.entries.iter().enumerate().all(|(p, v)| {
            let w = p.count_ones() as usize;
            match by_weight[w] {
                None => {
                    by_weight[w] = Some(v);
                    true
                }
                Some(prev) => prev == v,
            }
        })
    }

    pub fn as_mat2(&self) -> Option<Mat2<T>> {
        (self.arity == 2).then(|| {
            let e = &self.entries;
            Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone())
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor {
            arity: self.arity,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|v| k.clone() * v.clone())
    }

    /// Applies `m` to every slot. With [`Side::Covariant`] the tensor is a
    /// column vector and the result is `m^{⊗n} · t`; with
    /// [`Side::Contravariant`] it is a row vector and the result is
    /// `t · m^{⊗n}`.
    pub fn transform(&self, m: &Mat2<T>, side: Side) -> Self {
        let mut cur = self.entries.clone();
        for slot in 0..self.arity {
            let shift = self.arity - 1 - slot;
            let mut next = vec![T::zero(); cur.len()];
            for (p, out) in next.iter_mut().enumerate() {
                let bit = (p >> shift) & 1;
                let p0 = p & !(1 << shift);
                let p1 = p0 | (1 << shift);
                let (c0, c1) = match side {
                    Side::Covariant => (m.get(bit, 0), m.get(bit, 1)),
                    Side::Contravariant => (m.get(0, bit), m.get(1, bit)),
                };
                *out = c0.clone() * cur[p0].clone() + c1.clone() * cur[p1].clone();
            }
            cur = next;
        }
        Self {
            arity: self.arity,
            entries: cur,
        }
    }
}

impl Tensor<Rat> {
    pub fn to_symsig(&self) -> Result<SymSig, SigError> {
        if !self.is_symmetric() {
            return Err(SigError::NotSymmetric);
        }
        let mut values = vec![Rat::zero(); self.arity + 1];
        for (p, v) in self.entries.iter().enumerate() {
            values[p.count_ones() as usize] = v.clone();
        }
        Ok(SymSig::new(values))
    }

    pub fn to_quad(&self) -> Tensor<QuadExt> {
        self.map(|v| QuadExt::from_rat(v.clone()))
    }
}

impl<T: Scalar> fmt::Display for Tensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl From<&SymSig> for Tensor {
    fn from(s: &SymSig) -> Self {
        s.to_tensor()
    }
}

/// Which side of an edge a basis change acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Covariant,
    Contravariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadamardKind {
    H,
    Inverse,
}

/// `H = [[1,1],[1,-1]]` or `H^{-1} = H/2`.
pub fn hadamard(kind: HadamardKind) -> Mat2 {
    let one = Rat::one();
    let h = Mat2::new(one.clone(), one.clone(), one.clone(), -one);
    match kind {
        HadamardKind::H => h,
        HadamardKind::Inverse => h.scale(&crate::arith::rat(1, 2)),
    }
}

/// Hadamard basis change of a symmetric signature; the result is again
/// symmetric.
pub fn hadamard_transform(s: &SymSig, kind: HadamardKind, side: Side) -> SymSig {
    s.to_tensor()
        .transform(&hadamard(kind), side)
        .to_symsig()
        .expect("H^{⊗n} preserves symmetry")
}

/// Eigen-data of `[[1, b], [a, c]]` over `Q(√Δ²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanData {
    pub delta: QuadExt,
    pub lambda: QuadExt,
    pub mu: QuadExt,
    pub x: QuadExt,
    pub y: QuadExt,
}

impl JordanData {
    /// `P = [[-x, y], [1, 1]]`; its columns are eigenvectors for λ and μ.
    pub fn p(&self) -> Mat2<QuadExt> {
        Mat2::new(-self.x.clone(), self.y.clone(), QuadExt::one(), QuadExt::one())
    }

    /// `P · diag(λ, μ) · P^{-1}`.
    pub fn reconstruct(&self) -> Mat2<QuadExt> {
        let p = self.p();
        let d = Mat2::new(self.lambda.clone(), QuadExt::zero(), QuadExt::zero(), self.mu.clone());
        p.mul(&d).mul(&p.inverse().expect("det P = -(x+y) != 0"))
    }
}

/// `Δ² = (1-c)² + 4ab` for the matrix `[[1,b],[a,c]]`.
pub fn delta_squared(m: &Mat2) -> Rat {
    let (b, a, c) = (m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let one_minus_c = Rat::one() - c;
    &one_minus_c * &one_minus_c + Rat::from_integer(4.into()) * a * b
}

/// Jordan normal form of the G1 matrix `[[1, b], [a, c]]`.
pub fn jordan(m: &Mat2) -> Result<JordanData, SigError> {
    if !m.get(0, 0).is_one() {
        return Err(SigError::NotNormalized);
    }
    let (a, c) = (m.get(1, 0), m.get(1, 1));
    if a.is_zero() {
        return Err(SigError::ZeroA);
    }
    let d2 = delta_squared(m);
    if d2.is_zero() {
        return Err(SigError::ZeroDelta);
    }
    if d2.is_negative() {
        return Err(SigError::ComplexEigenvalues);
    }
    let delta = QuadExt::sqrt(&d2)?;
    let half = QuadExt::from_rat(crate::arith::rat(1, 2));
    let one_plus_c = QuadExt::from_rat(Rat::one() + c);
    let one_minus_c = QuadExt::from_rat(Rat::one() - c);
    let two_a = QuadExt::from_rat(Rat::from_integer(2.into()) * a);
    Ok(JordanData {
        lambda: (&one_plus_c - &delta) * &half,
        mu: (&one_plus_c + &delta) * &half,
        x: (&delta - &one_minus_c) / &two_a,
        y: (&delta + &one_minus_c) / &two_a,
        delta,
    })
}
