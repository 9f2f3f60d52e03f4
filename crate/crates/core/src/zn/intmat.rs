//! Small dense integer matrices.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rat;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type IntVector = Vec<BigInt>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..k)
                .map(|j| a[i].iter().zip(b).map(|(x, row)| x * &row[j]).sum())
                .collect()
        })
        .collect()
}

pub fn apply(a: &IntMatrix, v: &[BigInt]) -> IntVector {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Determinant by Bareiss elimination.
pub fn det(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Classical adjoint: `a · adj(a) = det(a) · I`.
pub fn adjugate(a: &IntMatrix) -> IntMatrix {
    let n = a.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IntMatrix = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c].clone()).collect())
                .collect();
            let c = det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// Maximum absolute row sum.
pub fn inf_norm(a: &IntMatrix) -> BigInt {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default()
}

pub fn vec_inf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Coefficients `c_0, ..., c_n` of `det(zI - a) = Σ c_k z^k` (Faddeev-LeVerrier).
pub fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.len();
    let ar: Vec<Vec<Rat>> = a
        .iter()
        .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // m <- a·m + c_{n-k+1} I
        let mut next = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rat::zero();
                for l in 0..n {
                    s += &ar[i][l] * &m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut tr = Rat::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &ar[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / Rat::from_integer(BigInt::from(k));
    }
    coeffs
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// Complex roots of a monic polynomial with coefficients `c_0..c_n`
/// (Durand-Kerner iteration).
pub fn poly_roots(coeffs: &[BigInt]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let c: Vec<f64> = coeffs.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
    let bound = 1.0 + c[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * (bound / 2.0).max(1.0)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// `x mod |m|` componentwise, in `0..|m|`.
pub fn residue(v: &[BigInt], m: &BigInt) -> IntVector {
    let m = m.abs();
    v.iter().map(|x| x.mod_floor(&m)).collect()
}
