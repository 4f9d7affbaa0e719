//! Fraction-free Gauss–Jordan elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{common_denominator, Rat};

/// Integer matrix in reduced echelon form: every pivot column is zero
/// outside its pivot row, and rows are primitive.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    ncols: usize,
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let d = common_denominator(row.iter());
    row.iter().map(|v| v.numer() * (&d / v.denom())).collect()
}

impl Echelon {
    pub fn new(rows: &[Vec<Rat>], ncols: usize) -> Echelon {
        let mut m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "row length");
                integer_row(r)
            })
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        let mut cur = 0;
        for col in 0..ncols {
            let Some(p) = (cur..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(cur, p);
            if m[cur][col].is_negative() {
                for v in m[cur].iter_mut() {
                    *v = -v.clone();
                }
            }
            primitive(&mut m[cur]);
            let pivot_row = m[cur].clone();
            let pv = pivot_row[col].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == cur || row[col].is_zero() {
                    continue;
                }
                let c = row[col].clone();
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v * &pv - &c * pr;
                }
                primitive(row);
            }
            pivots.push(col);
            cur += 1;
            if cur == m.len() {
                break;
            }
        }
        m.truncate(cur);
        Echelon { rows: m, pivots, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the null space; each vector is a primitive integer vector
    /// with a positive entry in its free coordinate.
    pub fn null_space(&self) -> Vec<Vec<Rat>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&j| {
                let mut v = vec![Rat::zero(); self.ncols];
                v[j] = Rat::one();
                for (row, &c) in self.rows.iter().zip(&self.pivots) {
                    v[c] = -Rat::from_bigints(row[j].clone(), row[c].clone());
                }
                normalize(v)
            })
            .collect()
    }
}

/// Scales a rational vector to a primitive integer vector, keeping the
/// sign of its last nonzero entry positive.
pub fn normalize(v: Vec<Rat>) -> Vec<Rat> {
    let d = common_denominator(v.iter());
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    primitive(&mut ints);
    if ints.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
    }
    ints.into_iter().map(|n| Rat::from_bigints(n, BigInt::one())).collect()
}

pub fn null_space(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    Echelon::new(rows, ncols).null_space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::r;
    use proptest::prelude::*;

    fn mul(rows: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
        rows.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn small_systems() {
        let rows = vec![vec![r(1, 2), r(-1, 3), r(0, 1)]];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mul(&rows, v).iter().all(Rat::is_zero));
        }
        assert_eq!(null_space(&[vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], 2).len(), 0);
        assert_eq!(null_space(&[], 2).len(), 2);
        assert_eq!(Echelon::new(&[vec![r(2, 1), r(4, 1)], vec![r(1, 1), r(2, 1)]], 2).rank(), 1);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-4i64..=4, 12), dens in proptest::collection::vec(1i64..=5, 12)) {
            let rows: Vec<Vec<Rat>> = entries.chunks(4).zip(dens.chunks(4))
                .map(|(e, d)| e.iter().zip(d).map(|(&a, &b)| r(a, b)).collect())
                .collect();
            let ech = Echelon::new(&rows, 4);
            let ns = ech.null_space();
            prop_assert_eq!(ech.rank() + ns.len(), 4);
            for v in &ns {
                prop_assert!(mul(&rows, v).iter().all(Rat::is_zero));
            }
            let stacked: Vec<Vec<Rat>> = ns.clone();
            prop_assert_eq!(Echelon::new(&stacked, 4).rank(), ns.len());
        }
    }
}
