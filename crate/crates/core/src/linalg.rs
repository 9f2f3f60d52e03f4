//! Exact linear solving over the rationals.
//!
//! Systems are scaled row by row to integer matrices and reduced with Bareiss'
//! fraction-free elimination, so every intermediate stays an integer and every
//! division is exact. Rationals only reappear in back substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;
use crate::scc::tarjan;

/// The coefficient matrix is singular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singular;

/// Solves `a · x = b` for a square `a` and any number of right-hand-side
/// columns (`b` is `n × k`). Returns `x` as `n × k`.
pub fn solve(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>, Singular> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side has wrong row count");
    if n == 0 {
        return Ok(Vec::new());
    }
    let k = b[0].len();
    // Augmented integer matrix [A | B], each row cleared of denominators.
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            assert_eq!(ra.len(), n, "matrix is not square");
            let lcm = ra
                .iter()
                .chain(rb)
                .fold(BigInt::one(), |l, r| l.lcm(r.denom()));
            ra.iter()
                .chain(rb)
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect();

    let width = n + k;
    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].abs())
            .ok_or(Singular)?;
        m.swap(col, pivot);
        let (top, rest) = m.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..width {
                let v = &prow[col] * &row[j] - &factor * &prow[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }

    let mut x = vec![vec![Rat::zero(); k]; n];
    for i in (0..n).rev() {
        for c in 0..k {
            let mut acc = Rat::from_integer(m[i][n + c].clone());
            for j in i + 1..n {
                if !m[i][j].is_zero() {
                    acc -= Rat::from_integer(m[i][j].clone()) * &x[j][c];
                }
            }
            x[i][c] = acc / Rat::from_integer(m[i][i].clone());
        }
    }
    Ok(x)
}

/// Solves the linear fixed-point system
///
/// `value[i] = Σ_j w_ij · value[j]` for every `i` with `value[i] == None`,
///
/// where `succ[i]` lists the `(j, w_ij)` pairs and every `Some` entry is a
/// fixed boundary value (a row vector of width `width`). The unknowns are
/// processed one strongly connected block at a time in reverse topological
/// order, so each block is a small dense system.
///
/// Fails with [`Singular`] when some block does not have a unique solution,
/// i.e. when its substochastic part has spectral radius one.
pub fn solve_fixed_point(
    succ: &[Vec<(usize, Rat)>],
    values: &mut [Option<Vec<Rat>>],
    width: usize,
) -> Result<(), Singular> {
    let n = succ.len();
    assert_eq!(values.len(), n);
    let unknown: Vec<bool> = values.iter().map(Option::is_none).collect();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if unknown[i] {
                succ[i].iter().map(|&(j, _)| j).filter(|&j| unknown[j]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();

    for block in tarjan(n, &adj) {
        if !unknown[block[0]] {
            continue;
        }
        let local: std::collections::HashMap<usize, usize> =
            block.iter().enumerate().map(|(li, &gi)| (gi, li)).collect();
        let r = block.len();
        let mut a = vec![vec![Rat::zero(); r]; r];
        let mut rhs = vec![vec![Rat::zero(); width]; r];
        for (li, &gi) in block.iter().enumerate() {
            a[li][li] += Rat::one();
            for (j, w) in &succ[gi] {
                if let Some(&lj) = local.get(j) {
                    a[li][lj] -= w;
                } else {
                    let v = values[*j]
                        .as_ref()
                        .expect("blocks are visited after their successors");
                    for c in 0..width {
                        rhs[li][c] += w * &v[c];
                    }
                }
            }
        }
        let sol = solve(&a, &rhs)?;
        for (li, &gi) in block.iter().enumerate() {
            values[gi] = Some(sol[li].clone());
        }
    }
    Ok(())
}

/// `y = x · a` for a row vector `x`.
pub fn vec_mat(x: &[Rat], a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| x.iter().zip(a).map(|(xi, row)| xi * &row[j]).sum())
        .collect()
}

/// `y = a · x` for a column vector `x`.
pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    /// Plain Gauss-Jordan over rationals, kept independent of the Bareiss path.
    fn gauss_jordan(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
        let n = a.len();
        let mut m: Vec<Vec<Rat>> = a
            .iter()
            .zip(b)
            .map(|(r, bi)| r.iter().cloned().chain(std::iter::once(bi.clone())).collect())
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero())?;
            m.swap(c, p);
            let inv = Rat::one() / &m[c][c];
            for j in 0..=n {
                m[c][j] = &m[c][j] * &inv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for j in 0..=n {
                        let t = &f * &m[c][j];
                        m[r][j] -= t;
                    }
                }
            }
        }
        Some(m.into_iter().map(|r| r[n].clone()).collect())
    }

    #[test]
    fn solves_small_system() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 3), rat(-1, 2)]];
        let b = vec![vec![rat(1, 1)], vec![rat(0, 1)]];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![vec![rat(3, 8)], vec![rat(1, 4)]]);
    }

    #[test]
    fn detects_singular() {
        let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        let b = vec![vec![rat(1, 1)], vec![rat(2, 1)]];
        assert_eq!(solve(&a, &b), Err(Singular));
    }

    #[test]
    fn needs_pivoting() {
        let a = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        let b = vec![vec![rat(5, 1), rat(1, 2)], vec![rat(7, 1), rat(1, 3)]];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![vec![rat(7, 1), rat(1, 3)], vec![rat(5, 1), rat(1, 2)]]);
    }

    #[test]
    fn fixed_point_absorption() {
        // Gambler's ruin on 0..=3 with fair steps: P(hit 3 | start 1) = 1/3.
        let h = rat(1, 2);
        let succ = vec![
            vec![],
            vec![(0, h.clone()), (2, h.clone())],
            vec![(1, h.clone()), (3, h.clone())],
            vec![],
        ];
        let mut v = vec![Some(vec![rat(0, 1)]), None, None, Some(vec![rat(1, 1)])];
        solve_fixed_point(&succ, &mut v, 1).unwrap();
        assert_eq!(v[1], Some(vec![rat(1, 3)]));
        assert_eq!(v[2], Some(vec![rat(2, 3)]));
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn agrees_with_gauss_jordan(
            n in 1usize..5,
            entries in proptest::collection::vec(small_rat(), 30),
        ) {
            let a: Vec<Vec<Rat>> = (0..n).map(|i| entries[i * n..i * n + n].to_vec()).collect();
            let b: Vec<Rat> = entries[25..25 + n].to_vec();
            let bcol: Vec<Vec<Rat>> = b.iter().map(|x| vec![x.clone()]).collect();
            match (solve(&a, &bcol), gauss_jordan(&a, &b)) {
                (Ok(x), Some(y)) => {
                    let x: Vec<Rat> = x.into_iter().map(|r| r[0].clone()).collect();
                    prop_assert_eq!(&x, &y);
                    prop_assert_eq!(mat_vec(&a, &x), b);
                }
                (Err(Singular), None) => {}
                (l, r) => prop_assert!(false, "disagree: {:?} vs {:?}", l, r),
            }
        }
    }
}
