//! Exact feasibility of `{x >= 0 : A x = b}` by Phase-I simplex.

use num_traits::{Signed, Zero};

use crate::field::Rational;

/// Whether some `x >= 0` satisfies `A x = b`. Exact rational arithmetic,
/// Bland's rule for termination.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    assert_eq!(m, b.len());
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let rhs = n + m;

    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n);
        let flip = b[i].is_negative();
        let mut r = vec![Rational::zero(); width];
        for (j, x) in row.iter().enumerate() {
            r[j] = if flip { -x.clone() } else { x.clone() };
        }
        r[n + i] = Rational::from_integer(1.into());
        r[rhs] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of the auxiliary objective `sum of artificials`
    let mut obj = vec![Rational::zero(); width];
    for j in 0..width {
        if (n..n + m).contains(&j) {
            continue;
        }
        let mut s = Rational::zero();
        for row in &t {
            s += &row[j];
        }
        obj[j] = -s;
    }

    while let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best = Rational::zero();
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best || (ratio == best && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(p) = leave else {
            // the auxiliary objective is bounded below by zero
            unreachable!("phase-I objective unbounded");
        };
        let piv = t[p][enter].clone();
        for x in t[p].iter_mut() {
            *x = &*x / &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == p || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let f = obj[enter].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
        basis[p] = enter;
    }
    obj[rhs].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn small_systems() {
        // x + y = 1, x - y = 0
        assert!(feasible(&[vec![q(1), q(1)], vec![q(1), q(-1)]], &[q(1), q(0)]));
        // x + y = -1 has no nonnegative solution
        assert!(!feasible(&[vec![q(1), q(1)]], &[q(-1)]));
        // x = 2, x = 3
        assert!(!feasible(&[vec![q(1)], vec![q(1)]], &[q(2), q(3)]));
        // redundant rows
        assert!(feasible(&[vec![q(2), q(1)], vec![q(4), q(2)]], &[q(3), q(6)]));
    }
}
