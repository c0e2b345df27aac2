use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Rows and weight tails up to this length are cached process-wide.
pub const CACHED_LENGTH: usize = 4096;

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Arc<Vec<BigUint>> {
    static ROWS: OnceLock<RwLock<HashMap<usize, Arc<Vec<BigUint>>>>> = OnceLock::new();
    if n > CACHED_LENGTH {
        return Arc::new(compute_row(n));
    }
    let cache = ROWS.get_or_init(Default::default);
    if let Some(row) = cache.read().unwrap().get(&n) {
        return row.clone();
    }
    let row = Arc::new(compute_row(n));
    cache.write().unwrap().entry(n).or_insert(row).clone()
}

fn compute_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for i in 0..=n {
        row.push(c.clone());
        c = c * (n - i) / (i + 1);
    }
    row
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial_row(n)[k].clone()
    }
}

/// Cumulative Hamming-sphere volumes of `F_q^n`:
/// `cumulative[d] = sum_{i<=d} C(n,i) (q-1)^i`, together with `q^n`.
///
/// `rho_d = cumulative[d] / q^n`.
#[derive(Debug)]
pub struct SphereVolumes {
    pub q: u32,
    pub n: usize,
    pub cumulative: Vec<BigUint>,
    pub total: BigUint,
}

impl SphereVolumes {
    fn compute(q: u32, n: usize) -> Self {
        let row = binomial_row(n);
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut power = BigUint::one();
        let mut acc = BigUint::zero();
        for c in row.iter() {
            acc += c * &power;
            cumulative.push(acc.clone());
            power *= q - 1;
        }
        let total = BigUint::from(q).pow(n as u32);
        debug_assert_eq!(cumulative[n], total);
        SphereVolumes {
            q,
            n,
            cumulative,
            total,
        }
    }

    /// Number of vectors of weight exactly `d`.
    pub fn shell(&self, d: usize) -> BigUint {
        match d {
            0 => self.cumulative[0].clone(),
            _ => &self.cumulative[d] - &self.cumulative[d - 1],
        }
    }
}

pub fn sphere_volumes(q: u32, n: usize) -> Arc<SphereVolumes> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, usize), Arc<SphereVolumes>>>> = OnceLock::new();
    if n > CACHED_LENGTH {
        return Arc::new(SphereVolumes::compute(q, n));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&(q, n)) {
        return v.clone();
    }
    let v = Arc::new(SphereVolumes::compute(q, n));
    cache.write().unwrap().entry((q, n)).or_insert(v).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_rows() {
        assert_eq!(*binomial_row(4), [1u32, 4, 6, 4, 1].map(BigUint::from).to_vec());
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        let big = binomial_row(5000);
        assert_eq!(big[1], BigUint::from(5000u32));
        assert_eq!(big[2500], big[2500]);
        assert_eq!(big[4999], BigUint::from(5000u32));
    }

    #[test]
    fn row_sums_are_powers_of_two() {
        for n in [0usize, 1, 7, 64, 300] {
            let s: BigUint = binomial_row(n).iter().sum();
            assert_eq!(s, BigUint::one() << n);
        }
    }

    #[test]
    fn sphere_volumes_sum_to_space() {
        let v = sphere_volumes(3, 5);
        assert_eq!(v.cumulative[0], BigUint::one());
        assert_eq!(v.cumulative[1], BigUint::from(11u32));
        assert_eq!(v.total, BigUint::from(243u32));
        assert_eq!(v.shell(5), BigUint::from(32u32));
    }
}
