//! Exact rank and row-space computations over Q via fraction-free
//! (Bareiss) elimination on integer matrices.
//!
//! Rational rows are scaled by their denominator lcm first; this is a
//! row-space-preserving change, so ranks and span questions are
//! unaffected. The elimination keeps all intermediates as integers, with
//! every division exact (a consequence of the Sylvester determinant
//! identity), so there is no floating point and no rational blow-up
//! beyond determinant-bounded minors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Clears denominators: scales the row by the lcm of its denominators and
/// divides out the integer content, preserving its line through the
/// origin.
fn normalize_row(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut ints: Vec<BigInt> = row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if !content.is_zero() && !content.is_one() {
        for v in &mut ints {
            *v = &*v / &content;
        }
    }
    ints
}

/// Row echelon form of a rational matrix, produced by Bareiss elimination
/// with partial pivoting by first nonzero column. The retained pivot rows
/// span the same row space as the input.
pub struct Echelon {
    cols: usize,
    /// pivot rows in pivot-column order, with `pivots[i]` the leading
    /// column of `rows[i]`
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn from_rows(input: &[Vec<Rat>]) -> Result<Echelon> {
        Echelon::with_cols(input.first().map_or(0, |r| r.len()), input)
    }

    /// Like `from_rows` with an explicit column count, so an empty family
    /// still knows the ambient space.
    pub fn with_cols(cols: usize, input: &[Vec<Rat>]) -> Result<Echelon> {
        for (i, r) in input.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
        }
        let mut m: Vec<Vec<BigInt>> = input.iter().map(|r| normalize_row(r)).collect();
        let nrows = m.len();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0usize;
        for c in 0..cols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..nrows {
                if m[i][c].is_zero() && m[r][c].is_one() && prev.is_one() {
                    // common fast path: nothing to eliminate, no rescale
                    continue;
                }
                for k in c + 1..cols {
                    let num = &m[r][c] * &m[i][k] - &m[i][c] * &m[r][k];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[i][k] = q;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        Ok(Echelon {
            cols,
            rows: m,
            pivots,
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True iff the row lies in the span of the echelon rows, i.e. adding
    /// it would not raise the rank.
    pub fn contains(&self, row: &[Rat]) -> bool {
        assert_eq!(row.len(), self.cols, "column count mismatch");
        let mut v = normalize_row(row);
        for (e, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc].is_zero() {
                continue;
            }
            let pivot = e[pc].clone();
            let factor = v[pc].clone();
            for k in 0..self.cols {
                v[k] = &v[k] * &pivot - &factor * &e[k];
            }
            // keep entries small; any nonzero rational multiple works
            let mut content = BigInt::zero();
            for x in &v {
                content = content.gcd(x);
            }
            if !content.is_zero() && !content.is_one() {
                for x in &mut v {
                    *x = &*x / &content;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

/// Exact rank of a rational matrix.
pub fn rank_exact(rows: &[Vec<Rat>]) -> Result<usize> {
    Ok(Echelon::from_rows(rows)?.rank())
}

/// Checks that every row of `sub` lies in the row space of `sup`
/// (equivalently, that appending it leaves the rank unchanged). Returns
/// the index of the first offending row, or `None` if contained.
pub fn span_witness(sub: &[Vec<Rat>], sup: &[Vec<Rat>]) -> Result<Option<usize>> {
    let cols = sup.first().or_else(|| sub.first()).map_or(0, |r| r.len());
    let ech = Echelon::with_cols(cols, sup)?;
    for (i, row) in sub.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Dimension(format!(
                "candidate row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        if !ech.contains(row) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn identity_has_full_rank() {
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rank_exact(&id).unwrap(), 3);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = m(&[&[0, 0], &[0, 0], &[0, 0]]);
        assert_eq!(rank_exact(&z).unwrap(), 0);
        assert_eq!(rank_exact(&[]).unwrap(), 0);
    }

    #[test]
    fn dependent_rows_detected() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(rank_exact(&a).unwrap(), 2);
    }

    #[test]
    fn rational_entries() {
        let a = vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(3, 2), rat(5, 1)],
            vec![rat(2, 1), rat(4, 3)],
        ];
        // row2 = 4*row0; row1 is independent of row0
        assert_eq!(rank_exact(&a).unwrap(), 2);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let a = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(1)]];
        assert!(matches!(rank_exact(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn rank_is_invariant_under_permutation_and_scaling() {
        let base = m(&[&[2, 0, 1, 3], &[0, 1, 1, 1], &[2, 1, 2, 4], &[0, 0, 5, 1]]);
        let r = rank_exact(&base).unwrap();
        let mut permuted = base.clone();
        permuted.swap(0, 3);
        permuted.swap(1, 2);
        assert_eq!(rank_exact(&permuted).unwrap(), r);
        let scaled: Vec<Vec<Rat>> = base
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|v| v * rat(2 * i as i64 + 1, 7)).collect())
            .collect();
        assert_eq!(rank_exact(&scaled).unwrap(), r);
    }

    #[test]
    fn span_membership() {
        let sup = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let inside = m(&[&[2, 3, 5], &[1, -1, 0]]);
        assert_eq!(span_witness(&inside, &sup).unwrap(), None);
        let outside = m(&[&[2, 3, 5], &[0, 0, 1]]);
        assert_eq!(span_witness(&outside, &sup).unwrap(), Some(1));
        // empty sub-family is trivially contained
        assert_eq!(span_witness(&[], &sup).unwrap(), None);
        // a nonzero row is never inside an empty family
        assert_eq!(span_witness(&inside, &[]).unwrap(), Some(0));
        let zero_row = m(&[&[0, 0, 0]]);
        assert_eq!(span_witness(&zero_row, &[]).unwrap(), None);
    }

    #[test]
    fn echelon_contains_its_own_rows() {
        let rows = m(&[&[3, 1, 4, 1], &[5, 9, 2, 6], &[8, 9, 7, 9]]);
        let ech = Echelon::from_rows(&rows).unwrap();
        for r in &rows {
            assert!(ech.contains(r));
        }
    }
}
