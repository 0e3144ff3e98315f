use num::{One, Zero};

use super::PlanarError;
use crate::arith::Rat;

/// Exact Pfaffian of a skew-symmetric matrix by congruence elimination.
/// Odd dimension gives 0.
pub fn pfaffian(a: &[Vec<Rat>]) -> Result<Rat, PlanarError> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(PlanarError::NotSkewSymmetric);
        }
        for j in 0..=i {
            if row[j] != -a[j][i].clone() {
                return Err(PlanarError::NotSkewSymmetric);
            }
        }
    }
    if n % 2 == 1 {
        return Ok(Rat::zero());
    }
    let mut m = a.to_vec();
    let mut pf = Rat::one();
    for k in (0..n).step_by(2) {
        let Some(p) = (k + 1..n).find(|&j| !m[k][j].is_zero()) else {
            return Ok(Rat::zero());
        };
        if p != k + 1 {
            m.swap(p, k + 1);
            for row in m.iter_mut() {
                row.swap(p, k + 1);
            }
            pf = -pf;
        }
        let piv = m[k][k + 1].clone();
        pf *= &piv;
        // rows and columns i > k+1 lose their k and k+1 components
        let coef: Vec<(Rat, Rat)> = (k + 2..n)
            .map(|i| (&m[k][i] / &piv, &m[k + 1][i] / &piv))
            .collect();
        for (off, (c1, c2)) in coef.iter().enumerate() {
            let i = k + 2 + off;
            for j in k..n {
                let v = &m[k + 1][j] * c1 - &m[k][j] * c2;
                m[i][j] -= v;
            }
        }
        for (off, (c1, c2)) in coef.iter().enumerate() {
            let i = k + 2 + off;
            for j in k..n {
                let v = &m[j][k + 1] * c1 - &m[j][k] * c2;
                m[j][i] -= v;
            }
        }
    }
    Ok(pf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::linalg::det;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn skew(n: usize, upper: &[i64]) -> Vec<Vec<Rat>> {
        let mut m = vec![vec![Rat::zero(); n]; n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = int(*it.next().unwrap());
                m[j][i] = -v.clone();
                m[i][j] = v;
            }
        }
        m
    }

    #[test]
    fn small_cases() {
        assert_eq!(pfaffian(&skew(2, &[7])).unwrap(), int(7));
        let (a12, a13, a14, a23, a24, a34) = (2, 3, 5, 7, 11, 13);
        let m = skew(4, &[a12, a13, a14, a23, a24, a34]);
        assert_eq!(pfaffian(&m).unwrap(), int(a12 * a34 - a13 * a24 + a14 * a23));
        assert_eq!(pfaffian(&skew(3, &[1, 2, 3])).unwrap(), int(0));
        assert_eq!(pfaffian(&[]).unwrap(), int(1));
        // zero leading pivot forces a swap
        let m = skew(4, &[0, 1, 0, 0, 1, 0]);
        assert_eq!(pfaffian(&m).unwrap(), int(-1));
    }

    #[test]
    fn rejects_non_skew() {
        let mut m = skew(2, &[1]);
        m[1][0] = int(1);
        assert_eq!(pfaffian(&m), Err(PlanarError::NotSkewSymmetric));
        let mut m = skew(2, &[1]);
        m[0][0] = int(1);
        assert_eq!(pfaffian(&m), Err(PlanarError::NotSkewSymmetric));
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [2usize, 4, 6, 8] {
            for _ in 0..20 {
                let k = n * (n - 1) / 2;
                let vals: Vec<i64> = (0..k)
                    .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-4..=4) })
                    .collect();
                let m = skew(n, &vals);
                let pf = pfaffian(&m).unwrap();
                assert_eq!(&pf * &pf, det(m));
            }
        }
    }
}
