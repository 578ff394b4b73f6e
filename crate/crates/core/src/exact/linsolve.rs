use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Solves `A x = b` exactly for a system with at least as many rows as
/// columns and full column rank.
///
/// Rows are scaled to integers and reduced with Bareiss' fraction-free
/// elimination, so intermediate entries stay integral. An inconsistent system
/// reports the original index of a violated row; a consistent system without
/// full column rank is rejected.
pub fn solve_linear_exact(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let (rows, cols) = (a.rows(), a.cols());
    if b.len() != rows {
        return Err(Error::Dimension(format!("{rows} rows but {} right-hand entries", b.len())));
    }
    if rows < cols {
        return Err(Error::Dimension(format!("underdetermined {rows}x{cols} system")));
    }

    // augmented integer rows, tagged with their original index
    let mut m: Vec<(usize, Vec<BigInt>)> = (0..rows)
        .map(|i| {
            let entries: Vec<&Rational> = (0..cols).map(|j| a.get(i, j)).chain([&b[i]]).collect();
            let lcm = entries
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let row = entries
                .iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect();
            (i, row)
        })
        .collect();

    let mut prev = BigInt::one();
    let mut pivots = Vec::with_capacity(cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i].1[c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r].1;
        let piv = pivot_row[c].clone();
        for (_, row) in tail.iter_mut() {
            let f = row[c].clone();
            for j in c..=cols {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            for v in &mut row[..c] {
                *v = BigInt::zero();
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }

    if let Some((orig, _)) = m[r..].iter().find(|(_, row)| !row[cols].is_zero()) {
        return Err(Error::Inconsistent { row: *orig });
    }
    if r < cols {
        return Err(Error::RankDeficient { rank: r, cols });
    }

    let mut x = vec![Rational::zero(); cols];
    for i in (0..cols).rev() {
        let row = &m[i].1;
        let mut acc = Rational::from_integer(row[cols].clone());
        for j in i + 1..cols {
            acc -= Rational::from_integer(row[j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(row[i].clone());
    }

    for i in 0..rows {
        let lhs: Rational = (0..cols).map(|j| a.get(i, j) * &x[j]).sum();
        if lhs != b[i] {
            return Err(Error::Inconsistent { row: i });
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn m(rows: usize, cols: usize, v: &[Rational]) -> RationalMatrix {
        RationalMatrix::new(rows, cols, v.to_vec()).unwrap()
    }

    #[test]
    fn identity_returns_rhs() {
        let b = vec![rat(1, 2), int(-3), rat(7, 5)];
        assert_eq!(solve_linear_exact(&RationalMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn overdetermined_consistent() {
        let x = [rat(2, 3), int(-5)];
        let a = m(
            4,
            2,
            &[int(1), int(2), rat(1, 2), int(0), int(0), int(0), int(3), rat(-1, 7)],
        );
        let b: Vec<Rational> = (0..4).map(|i| a.get(i, 0) * &x[0] + a.get(i, 1) * &x[1]).collect();
        assert_eq!(solve_linear_exact(&a, &b).unwrap(), x.to_vec());
    }

    #[test]
    fn inconsistent_names_row() {
        let a = m(2, 1, &[int(1), int(0)]);
        let err = solve_linear_exact(&a, &[int(1), int(1)]).unwrap_err();
        assert_eq!(err, Error::Inconsistent { row: 1 });
    }

    #[test]
    fn rank_deficient_rejected() {
        let a = m(3, 2, &[int(1), int(2), int(2), int(4), int(3), int(6)]);
        let err = solve_linear_exact(&a, &[int(1), int(2), int(3)]).unwrap_err();
        assert_eq!(err, Error::RankDeficient { rank: 1, cols: 2 });
    }
}
