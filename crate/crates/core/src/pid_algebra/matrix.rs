use std::fmt;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Scalar types the exact linear-algebra kernel runs over.
///
/// `BigInt` is the default everywhere; fixed-width types are accepted for
/// small inputs but can overflow during reduction.
pub trait PidScalar:
    Integer + Signed + Clone + fmt::Debug + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> PidScalar for T where
    T: Integer + Signed + Clone + fmt::Debug + FromPrimitive + ToPrimitive + Send + Sync
{
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: PidScalar> IntMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::validation(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let converted = entries
            .iter()
            .map(|&e| T::from_i64(e).ok_or_else(|| Error::validation("entry out of range")))
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::new(rows, cols, converted)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(T::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix<T>) -> Result<IntMatrix<T>> {
        if self.cols != other.rows {
            return Err(Error::validation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: IntMatrix<T> = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Sub-matrix on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix<T> {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        IntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }
}

/// Nonzero diagonal entries `d_1 | d_2 | ...` of the Smith normal form,
/// each positive.
///
/// Pivots on the smallest nonzero entry of the remaining block; repeated
/// division shrinks the pivot until its row and column clear and it
/// divides the rest of the block.
pub fn smith_normal_form<T: PidScalar>(m: &IntMatrix<T>) -> Vec<T> {
    let (nr, nc) = (m.rows, m.cols);
    let mut a = m.to_rows();
    let mut factors = Vec::new();

    for t in 0..nr.min(nc) {
        let Some((pi, pj)) = smallest_nonzero(&a, t..nr, t..nc) else {
            break;
        };
        move_pivot(&mut a, t, pi, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                for (x, p) in tail[0].iter_mut().zip(&head[t]).skip(t) {
                    *x = x.clone() - q.clone() * p.clone();
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let p = row[t].clone();
                    row[j] = row[j].clone() - q.clone() * p;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                // a remainder is now smaller than the pivot
                let (pi, pj) = smallest_in_cross(&a, t);
                move_pivot(&mut a, t, pi, pj);
                continue;
            }

            let pivot = a[t][t].clone();
            let offender =
                (t + 1..nr).find(|&i| a[i].iter().skip(t + 1).any(|x| !x.is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]).skip(t) {
                        *x = x.clone() + y.clone();
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].abs());
    }
    factors
}

fn smallest_nonzero<T: PidScalar>(
    a: &[Vec<T>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a[i][j].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn smallest_in_cross<T: PidScalar>(a: &[Vec<T>], t: usize) -> (usize, usize) {
    let mut best = (t, t, a[t][t].abs());
    let mut consider = |i: usize, j: usize| {
        let v = a[i][j].abs();
        if !v.is_zero() && (best.2.is_zero() || v < best.2) {
            best = (i, j, v);
        }
    };
    for i in t + 1..a.len() {
        consider(i, t);
    }
    for j in t + 1..a[t].len() {
        consider(t, j);
    }
    (best.0, best.1)
}

fn move_pivot<T: PidScalar>(a: &mut [Vec<T>], t: usize, pi: usize, pj: usize) {
    a.swap(t, pi);
    if pj != t {
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
    }
    if a[t][t].is_negative() {
        for x in a[t].iter_mut() {
            *x = -x.clone();
        }
    }
}

/// Rank of the matrix, read off the Smith normal form.
pub fn rank<T: PidScalar>(m: &IntMatrix<T>) -> usize {
    smith_normal_form(m).len()
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    fn big(rows: usize, cols: usize, e: &[i64]) -> IntMatrix<BigInt> {
        IntMatrix::from_i64(rows, cols, e).unwrap()
    }

    fn as_i64(v: Vec<BigInt>) -> Vec<i64> {
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn identity_factors() {
        assert_eq!(
            as_i64(smith_normal_form(&IntMatrix::<BigInt>::identity(2))),
            vec![1, 1]
        );
    }

    #[test]
    fn two_by_two_hand_reduced() {
        assert_eq!(
            as_i64(smith_normal_form(&big(2, 2, &[2, 4, 6, 8]))),
            vec![2, 4]
        );
    }

    #[test]
    fn one_by_one() {
        assert_eq!(as_i64(smith_normal_form(&big(1, 1, &[3]))), vec![3]);
        assert_eq!(as_i64(smith_normal_form(&big(1, 1, &[-3]))), vec![3]);
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert!(smith_normal_form(&IntMatrix::<BigInt>::zeros(0, 4)).is_empty());
        assert!(smith_normal_form(&IntMatrix::<BigInt>::zeros(3, 0)).is_empty());
        assert!(smith_normal_form(&IntMatrix::<BigInt>::zeros(3, 3)).is_empty());
    }

    #[test]
    fn diag_needs_divisibility_fix() {
        // diag(4, 6) has invariant factors 2 | 12
        assert_eq!(
            as_i64(smith_normal_form(&big(2, 2, &[4, 0, 0, 6]))),
            vec![2, 12]
        );
        assert_eq!(
            as_i64(smith_normal_form(&big(2, 2, &[2, 0, 0, 3]))),
            vec![1, 6]
        );
    }

    #[test]
    fn fixed_width_agrees_with_bigint() {
        let e = [3, -7, 2, 0, 5, 11, -4, 6, 9, 1, 0, -2];
        let a: IntMatrix<i64> = IntMatrix::from_i64(3, 4, &e).unwrap();
        let b = big(3, 4, &e);
        assert_eq!(smith_normal_form(&a), as_i64(smith_normal_form(&b)));
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let x = i64::MAX / 3;
        let m = big(2, 2, &[x, x - 1, x - 2, x - 7]);
        let f = smith_normal_form(&m);
        let det = BigInt::from(x) * BigInt::from(x - 7) - BigInt::from(x - 1) * BigInt::from(x - 2);
        assert_eq!(f.iter().product::<BigInt>(), det.abs());
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(IntMatrix::<BigInt>::from_i64(2, 2, &[1, 2, 3]).is_err());
        assert!(big(2, 3, &[0; 6]).mul(&big(2, 3, &[0; 6])).is_err());
    }
}
