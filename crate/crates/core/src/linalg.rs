//! Rank computations: sparse elimination over a prime field and exact
//! fraction-free elimination over the integers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// `2^61 - 1`, the modulus used for certified ranks over Q.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime, `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

pub fn residue_i64(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

pub fn residue_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    u64::try_from(r).expect("reduced residue")
}

/// Incremental row echelon form over `Z/p`. Rows are sparse `(column, value)` lists.
#[derive(Debug, Clone)]
pub struct ModRank {
    p: u64,
    pivots: Vec<Option<Vec<(u32, u64)>>>,
    rank: usize,
    acc: Vec<u64>,
    queued: Vec<bool>,
}

impl ModRank {
    pub fn new(ncols: usize, p: u64) -> Self {
        ModRank {
            p,
            pivots: vec![None; ncols],
            rank: 0,
            acc: vec![0; ncols],
            queued: vec![false; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ncols(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: &[(u32, u64)]) -> bool {
        let p = self.p;
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
        for &(c, v) in row {
            let v = v % p;
            if v == 0 {
                continue;
            }
            let slot = &mut self.acc[c as usize];
            *slot = (*slot + v) % p;
            if !self.queued[c as usize] {
                self.queued[c as usize] = true;
                heap.push(Reverse(c));
            }
        }
        while let Some(Reverse(c)) = heap.pop() {
            let ci = c as usize;
            self.queued[ci] = false;
            let f = self.acc[ci];
            if f == 0 {
                continue;
            }
            match &self.pivots[ci] {
                Some(prow) => {
                    let neg = p - f;
                    for &(j, v) in prow {
                        let ji = j as usize;
                        self.acc[ji] = (self.acc[ji] + mul_mod(neg, v, p)) % p;
                        if !self.queued[ji] && self.acc[ji] != 0 {
                            self.queued[ji] = true;
                            heap.push(Reverse(j));
                        }
                    }
                    debug_assert_eq!(self.acc[ci], 0);
                    self.acc[ci] = 0;
                }
                None => {
                    let inv = inv_mod(f, p).expect("nonzero");
                    let mut new_row = vec![(c, 1u64)];
                    self.acc[ci] = 0;
                    let mut rest: Vec<u32> = heap.drain().map(|Reverse(j)| j).collect();
                    rest.sort_unstable();
                    for j in rest {
                        let ji = j as usize;
                        self.queued[ji] = false;
                        if self.acc[ji] != 0 {
                            new_row.push((j, mul_mod(self.acc[ji], inv, p)));
                            self.acc[ji] = 0;
                        }
                    }
                    self.pivots[ci] = Some(new_row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

/// Rank of a sparse matrix modulo `p`.
pub fn mod_rank(ncols: usize, rows: &[Vec<(u32, u64)>], p: u64) -> usize {
    let mut m = ModRank::new(ncols, p);
    for r in rows {
        if m.rank() == ncols {
            break;
        }
        m.insert(r);
    }
    m.rank()
}

/// Exact rank of an integer matrix by Bareiss elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let nrows = rows.len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot = rows[rank][col].clone();
        for i in rank + 1..nrows {
            let lead = rows[i][col].clone();
            for j in col..ncols {
                let v = (&pivot * &rows[i][j] - &lead * &rows[rank][j]) / &prev;
                rows[i][j] = v;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse() {
        let p = MERSENNE_61;
        for a in [1u64, 2, 12345, p - 1] {
            assert_eq!(mul_mod(a, inv_mod(a, p).unwrap(), p), 1);
        }
        assert_eq!(residue_i64(-1, 7), 6);
        assert_eq!(residue_bigint(&BigInt::from(-15), 7), 6);
    }

    #[test]
    fn ranks_agree_on_a_small_matrix() {
        // rows (1,2,3), (2,4,6), (0,1,1), (1,3,4)
        let dense: Vec<Vec<i64>> = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]];
        let sparse: Vec<Vec<(u32, u64)>> = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j as u32, residue_i64(v, MERSENNE_61)))
                    .collect()
            })
            .collect();
        assert_eq!(mod_rank(3, &sparse, MERSENNE_61), 2);
        let big = dense.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        assert_eq!(bareiss_rank(big), 2);
    }

    #[test]
    fn rank_drops_modulo_a_small_prime() {
        // det = 5
        let rows = vec![vec![(0, 1), (1, 2)], vec![(0, 3), (1, 1)]];
        assert_eq!(mod_rank(2, &rows, 5), 1);
        assert_eq!(mod_rank(2, &rows, 7), 2);
    }
}
