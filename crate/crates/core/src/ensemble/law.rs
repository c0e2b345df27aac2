use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact::{check_k, check_qnd, CdfTable};
use crate::error::{Error, Result};
use crate::fqlin::{min_distance, Elem, FieldSpec, GeneratorSet};

/// Cap on `q^{nk}` for enumerating all generator matrices.
pub const MATRIX_BUDGET: u64 = 1 << 30;
/// Cap on the number of `k`-dimensional subspaces enumerated.
pub const SUBSPACE_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawMode {
    /// Every full-rank `k x n` generator matrix, equally weighted.
    AllMatrices,
    /// Every `k`-dimensional subspace, equally weighted.
    AllSubspaces,
}

/// Exhaustive histogram of `d_min`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCounts {
    pub counts: Vec<u64>,
    /// Number of objects enumerated (full-rank matrices or subspaces).
    pub total: u64,
}

impl LawCounts {
    pub fn to_table(&self) -> CdfTable {
        let total = BigInt::from(self.total);
        let mut acc = 0u64;
        CdfTable::exact(
            self.counts
                .iter()
                .map(|&c| {
                    acc += c;
                    BigRational::new(acc.into(), total.clone())
                })
                .collect(),
        )
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u32, n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

fn budget_error(what: &'static str, needed: BigUint, cap: u64) -> Error {
    Error::Budget {
        what,
        needed: needed.to_u128().unwrap_or(u128::MAX),
        cap: cap as u128,
    }
}

/// Exact law of `d_min` for a uniformly random `[n, k]` code, computed two
/// ways: over full-rank generator matrices or over subspaces.
pub fn enumerate_code_law(q: u32, n: usize, k: usize, mode: LawMode) -> Result<CdfTable> {
    code_law_counts(q, n, k, mode).map(|c| c.to_table())
}

pub fn code_law_counts(q: u32, n: usize, k: usize, mode: LawMode) -> Result<LawCounts> {
    check_qnd(q, n, 0)?;
    check_k(n, k)?;
    let field = Arc::new(FieldSpec::with_order(q)?);
    match mode {
        LawMode::AllMatrices => {
            let size = BigUint::from(q).pow((n * k) as u32);
            match size.to_u64() {
                Some(s) if s <= MATRIX_BUDGET => Ok(all_matrices(&field, n, k, s)),
                _ => Err(budget_error("generator matrices", size, MATRIX_BUDGET)),
            }
        }
        LawMode::AllSubspaces => {
            let size = gaussian_binomial(q, n, k);
            match size.to_u64() {
                Some(s) if s <= SUBSPACE_BUDGET => Ok(all_subspaces(&field, n, k)),
                _ => Err(budget_error("subspaces", size, SUBSPACE_BUDGET)),
            }
        }
    }
}

fn all_matrices(field: &Arc<FieldSpec>, n: usize, k: usize, size: u64) -> LawCounts {
    let q = field.order() as u64;
    let mut counts = vec![0; n + 1];
    let mut total = 0;
    let mut digits = vec![0 as Elem; n * k];
    for idx in 0..size {
        if idx > 0 {
            // odometer increment
            for x in digits.iter_mut() {
                *x += 1;
                if (*x as u64) < q {
                    break;
                }
                *x = 0;
            }
        }
        let rows = digits.chunks(n).map(<[Elem]>::to_vec).collect();
        let g = GeneratorSet::from_rows(field.clone(), rows).expect("valid entries");
        if g.is_full_rank() {
            counts[min_distance(&g).distance as usize] += 1;
            total += 1;
        }
    }
    LawCounts { counts, total }
}

/// Calls `visit` with every `k x n` matrix in reduced row echelon form of
/// rank `k`, i.e. once per `k`-dimensional subspace.
pub fn for_each_rref(field: &FieldSpec, n: usize, k: usize, mut visit: impl FnMut(&[Vec<Elem>])) {
    let q = field.order() as Elem;
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row i, column c) with c > pivots[i], c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let p = &pivots;
                (p[i] + 1..n).filter(move |c| !p.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut rows = vec![vec![0 as Elem; n]; k];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i][p] = 1;
        }
        loop {
            visit(&rows);
            let mut carried = true;
            for &(i, c) in &free {
                rows[i][c] += 1;
                if rows[i][c] < q {
                    carried = false;
                    break;
                }
                rows[i][c] = 0;
            }
            if carried {
                break;
            }
        }
        // next k-subset of 0..n in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
            return;
        };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
}

fn all_subspaces(field: &Arc<FieldSpec>, n: usize, k: usize) -> LawCounts {
    let mut counts = vec![0; n + 1];
    let mut total = 0;
    for_each_rref(field, n, k, |rows| {
        let g = GeneratorSet::from_rows(field.clone(), rows.to_vec()).expect("valid entries");
        counts[min_distance(&g).distance as usize] += 1;
        total += 1;
    });
    LawCounts { counts, total }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::fqlin::row_reduce;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 3, 2), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(3, 3, 1), BigUint::from(13u32));
        assert_eq!(gaussian_binomial(2, 4, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(2, 4, 5), BigUint::zero());
    }

    #[test]
    fn rref_enumeration_counts_subspaces() {
        for (q, n, k) in [(2, 3, 2), (2, 5, 2), (3, 4, 2), (4, 3, 1), (2, 4, 4)] {
            let f = FieldSpec::with_order(q).unwrap();
            let mut seen = 0u64;
            for_each_rref(&f, n, k, |rows| {
                let mut r = rows.to_vec();
                assert_eq!(row_reduce(&f, &mut r, n).len(), k);
                assert_eq!(r, rows);
                seen += 1;
            });
            assert_eq!(BigUint::from(seen), gaussian_binomial(q, n, k));
        }
    }

    #[test]
    fn each_subspace_has_equally_many_bases() {
        let f = Arc::new(FieldSpec::with_order(2).unwrap());
        let mut hits: HashMap<Vec<Vec<Elem>>, u32> = HashMap::new();
        for idx in 0u32..64 {
            let rows: Vec<Vec<Elem>> = (0..2)
                .map(|i| (0..3).map(|j| ((idx >> (3 * i + j)) & 1) as Elem).collect())
                .collect();
            let mut r = rows.clone();
            if row_reduce(&f, &mut r, 3).len() == 2 {
                *hits.entry(r).or_default() += 1;
            }
        }
        assert_eq!(hits.len(), 7);
        assert!(hits.values().all(|&h| h == 6));
        assert_eq!(hits.values().sum::<u32>(), 42);
        let m = code_law_counts(2, 3, 2, LawMode::AllMatrices).unwrap();
        assert_eq!(m.total, 42);
    }

    #[test]
    fn whole_space_has_distance_one() {
        let t = enumerate_code_law(2, 2, 2, LawMode::AllSubspaces).unwrap();
        assert_eq!(t.exact_values().unwrap()[1], BigRational::one());
        assert!(t.exact_values().unwrap()[0].is_zero());
    }

    #[test]
    fn lines_follow_single_generator_law() {
        // 13 lines of F_3^3; a line spanned by a vector of weight w.
        let c = code_law_counts(3, 3, 1, LawMode::AllSubspaces).unwrap();
        assert_eq!(c.total, 13);
        assert_eq!(c.counts, vec![0, 3, 6, 4]);
        let m = code_law_counts(3, 3, 1, LawMode::AllMatrices).unwrap();
        assert_eq!(m.total, 26);
        assert_eq!(m.counts, vec![0, 6, 12, 8]);
    }

    #[test]
    fn modes_agree() {
        for (q, n, k) in [(2, 4, 2), (2, 5, 3), (3, 3, 2), (4, 3, 2)] {
            assert_eq!(
                enumerate_code_law(q, n, k, LawMode::AllMatrices).unwrap(),
                enumerate_code_law(q, n, k, LawMode::AllSubspaces).unwrap(),
                "q={q} n={n} k={k}"
            );
        }
    }

    #[test]
    fn budgets() {
        assert!(matches!(
            code_law_counts(2, 32, 2, LawMode::AllMatrices),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            code_law_counts(2, 16, 8, LawMode::AllSubspaces),
            Err(Error::Budget { .. })
        ));
    }
}
