//! Small exact linear algebra: 2×2 matrices and dense Gaussian elimination
//! over any [`Scalar`].

use std::fmt;

use crate::arith::{Rat, Scalar};

/// 2×2 matrix, row-major. For straddled signatures the row index is the
/// LHS-side input and the column index the RHS-side input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<T = Rat> {
    pub m: [[T; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(m00: T, m01: T, m10: T, m11: T) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.m[r][c]
    }

    pub fn det(&self) -> T {
        self.m[0][0].clone() * self.m[1][1].clone() - self.m[0][1].clone() * self.m[1][0].clone()
    }

    pub fn trace(&self) -> T {
        self.m[0][0].clone() + self.m[1][1].clone()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let e = |r: usize, c: usize| {
            self.m[r][0].clone() * other.m[0][c].clone() + self.m[r][1].clone() * other.m[1][c].clone()
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn scale(&self, k: &T) -> Self {
        let e = |r: usize, c: usize| k.clone() * self.m[r][c].clone();
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn inverse(&self) -> Option<Self> {
        let inv = self.det().inverse()?;
        let [[a, b], [c, d]] = self.m.clone();
        Some(Self::new(d, -b, -c, a).scale(&inv))
    }

    /// `self^s` by repeated squaring; `self^0` is the identity.
    pub fn pow(&self, s: usize) -> Self {
        let mut acc = Self::identity();
        let mut sq = self.clone();
        let mut e = s;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T; 2]) -> [T; 2] {
        [
            v[0].clone() * self.m[0][0].clone() + v[1].clone() * self.m[1][0].clone(),
            v[0].clone() * self.m[0][1].clone() + v[1].clone() * self.m[1][1].clone(),
        ]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    /// Row-major flattening, `[m00, m01, m10, m11]`.
    pub fn entries(&self) -> Vec<T> {
        vec![
            self.m[0][0].clone(),
            self.m[0][1].clone(),
            self.m[1][0].clone(),
            self.m[1][1].clone(),
        ]
    }
}

impl<T: Scalar> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

/// Solves `a · x = b` for square `a`. Returns `None` when `a` is singular.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length");
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inverse()?;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            for c in col..n {
                let v = a[col][c].clone();
                a[r][c] = a[r][c].clone() - factor.clone() * v;
            }
            b[r] = b[r].clone() - factor * b[col].clone();
        }
    }
    Some(
        (0..n)
            .map(|i| b[i].clone() * a[i][i].inverse().expect("nonzero pivot"))
            .collect(),
    )
}

/// Determinant by Gaussian elimination.
pub fn det<T: Scalar>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut acc = T::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return T::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            acc = -acc;
        }
        let inv = a[col][col].inverse().expect("nonzero pivot");
        acc = acc * a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            for c in col..n {
                let v = a[col][c].clone();
                a[r][c] = a[r][c].clone() - factor.clone() * v;
            }
        }
    }
    acc
}

/// Solves the transposed Vandermonde system `Σ_j nodes[j]^s · x_j = rhs[s]`
/// for `s = 0..n`. Nodes must be pairwise distinct.
pub fn solve_vandermonde<T: Scalar>(nodes: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let n = nodes.len();
    assert_eq!(rhs.len(), n, "one equation per node");
    let mut rows = Vec::with_capacity(n);
    let mut powers: Vec<T> = vec![T::one(); n];
    for _ in 0..n {
        rows.push(powers.clone());
        for (p, x) in powers.iter_mut().zip(nodes) {
            *p = p.clone() * x.clone();
        }
    }
    solve(rows, rhs.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, QuadExt};
    use num::Zero;

    #[test]
    fn mat2_power_and_identity() {
        let m = Mat2::new(int(1), int(1), int(1), int(1));
        assert_eq!(m.pow(0), Mat2::identity());
        assert_eq!(m.pow(3), Mat2::new(int(4), int(4), int(4), int(4)));
        let a = Mat2::new(int(2), int(1), int(7), int(4));
        assert_eq!(a.mul(&a.inverse().unwrap()), Mat2::identity());
        assert!(m.inverse().is_none());
    }

    #[test]
    fn solve_and_det_agree() {
        let a = vec![
            vec![int(2), int(1), int(-1)],
            vec![int(-3), int(-1), int(2)],
            vec![int(-2), int(1), int(2)],
        ];
        let x = solve(a.clone(), vec![int(8), int(-11), int(-3)]).unwrap();
        assert_eq!(x, vec![int(2), int(3), int(-1)]);
        assert_eq!(det(a), int(-1));
        assert!(solve(vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![int(0), int(0)]).is_none());
    }

    #[test]
    fn vandermonde_in_quadratic_field() {
        let r = QuadExt::sqrt(&int(5)).unwrap();
        let nodes = vec![QuadExt::from_rat(rat(1, 2)), r.clone(), -r.clone()];
        let x = [QuadExt::from_rat(int(3)), QuadExt::from_rat(int(-1)), r.clone()];
        let rhs: Vec<QuadExt> = (0..3)
            .map(|s| {
                nodes
                    .iter()
                    .zip(&x)
                    .map(|(n, c)| crate::arith::pow(n, s) * c.clone())
                    .fold(QuadExt::zero(), |a, b| a + b)
            })
            .collect();
        assert_eq!(solve_vandermonde(&nodes, &rhs).unwrap(), x.to_vec());
    }
}
