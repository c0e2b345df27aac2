//! Arithmetic in GF(p^e) for p^e <= 2^16.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of the
//! encoding are the coefficients of the polynomial representative (constant
//! term in the least significant digit). `0` is the additive identity and `1`
//! the multiplicative identity.
//!
//! The reduction polynomial for `(p, e)` is the smallest monic primitive
//! polynomial of degree `e` over `F_p`, where polynomials are ordered by the
//! integer whose base-`p` digits are their coefficients below the leading one.
//! This rule is fixed, so element encodings (and therefore sampled codes) are
//! identical across runs. For `e = 1` it selects `x + c` with the smallest `c`
//! such that `-c` is a primitive root mod `p`; the encoding is the plain residue.

use crate::error::{invalid, Result};

/// Field element encoding.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order carry dense addition and multiplication tables.
pub const DENSE_TABLE_ORDER: u32 = 256;

#[derive(Clone, Debug)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    e: u32,
    /// Low-order coefficients of the monic reduction polynomial (length `e`).
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i in 0..2(q-1)`, doubled so log sums need no reduction.
    exp: Vec<Elem>,
    log: Vec<u32>,
    inv: Vec<Elem>,
    neg: Vec<Elem>,
    add: Option<Vec<Elem>>,
    mul: Option<Vec<Elem>>,
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e`, or returns `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies the encoded polynomial `x` by the indeterminate, reducing by
/// the monic polynomial whose low coefficients are `modulus`.
fn times_x(x: u32, p: u32, modulus: &[u32]) -> u32 {
    let e = modulus.len() as u32;
    let mut ds = digits(x, p, e);
    let top = ds[e as usize - 1];
    for i in (1..e as usize).rev() {
        ds[i] = ds[i - 1];
    }
    ds[0] = 0;
    if top != 0 {
        // x^e = -(modulus)
        for (d, &m) in ds.iter_mut().zip(modulus) {
            *d = (*d + (p - m) * top) % p;
        }
    }
    undigits(&ds, p)
}

/// Order of the indeterminate modulo the candidate polynomial, if it is `q - 1`.
fn generates(p: u32, modulus: &[u32], q: u32) -> bool {
    let mut x = 1u32;
    for i in 1..q {
        x = times_x(x, p, modulus);
        if x == 1 {
            return i == q - 1;
        }
        if x == 0 {
            return false;
        }
    }
    false
}

impl FieldSpec {
    /// Builds GF(p^e).
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("characteristic {p} is not prime")));
        }
        if e == 0 {
            return Err(invalid("extension degree must be at least 1"));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or_else(|| invalid(format!("{p}^{e} exceeds the supported order 2^16")))?
            as u32;

        let modulus = (0..q)
            .map(|c| digits(c, p, e))
            .find(|m| generates(p, m, q))
            .expect("a primitive polynomial exists for every prime power");

        let order = (q - 1) as usize;
        let mut exp = vec![0 as Elem; 2 * order.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x as Elem;
            log[x as usize] = i as u32;
            x = times_x(x, p, &modulus);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }

        let neg: Vec<Elem> = (0..q)
            .map(|a| undigits(&digits(a, p, e).iter().map(|&d| (p - d) % p).collect::<Vec<_>>(), p) as Elem)
            .collect();
        let inv: Vec<Elem> = (0..q)
            .map(|a| match a {
                0 => 0,
                _ => exp[(order - log[a as usize] as usize) % order],
            })
            .collect();

        let mut field = FieldSpec {
            q,
            p,
            e,
            modulus,
            exp,
            log,
            inv,
            neg,
            add: None,
            mul: None,
        };
        if q <= DENSE_TABLE_ORDER {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = field.add_slow(a as Elem, b as Elem);
                    mul[a as usize * n + b as usize] = field.mul_slow(a as Elem, b as Elem);
                }
            }
            field.add = Some(add);
            field.mul = Some(mul);
        }
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| invalid(format!("{q} is not a prime power")))?;
        Self::new(p, e)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Low-order coefficients `c_0..c_{e-1}` of the monic reduction polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Dense `q*q` addition table, row-major; present when `q <= 256`.
    pub fn add_table(&self) -> Option<&[Elem]> {
        self.add.as_deref()
    }

    /// Dense `q*q` multiplication table, row-major; present when `q <= 256`.
    pub fn mul_table(&self) -> Option<&[Elem]> {
        self.mul.as_deref()
    }

    /// Inverse table; entry 0 is 0 by convention.
    pub fn inv_table(&self) -> &[Elem] {
        &self.inv
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return ((a as u32 + b as u32) % self.p) as Elem;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out as Elem
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// `a^k` by square-and-multiply through the log table.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    /// A fixed multiplicative generator (the class of the indeterminate).
    pub fn generator(&self) -> Elem {
        self.exp[1 % self.exp.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FieldSpec) {
        let q = f.order() as Elem;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn binary_field_is_xor_and_and() {
        let f = FieldSpec::new(2, 1).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(f.add(a, b), a ^ b);
                assert_eq!(f.mul(a, b), a & b);
            }
        }
    }

    #[test]
    fn ternary_two_squared_is_one() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f.mul_table().unwrap()[2 * 3 + 2], 1);
    }

    #[test]
    fn gf4_inverses_exhaustive() {
        let f = FieldSpec::new(2, 2).unwrap();
        for x in 1..4 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn axioms_hold_exhaustively_small_orders() {
        for q in 2..=64u32 {
            if let Some((p, e)) = prime_power(q) {
                check_axioms(&FieldSpec::new(p, e).unwrap());
            }
        }
    }

    #[test]
    fn axioms_hold_exhaustively_order_256_and_243() {
        check_axioms(&FieldSpec::new(2, 8).unwrap());
        check_axioms(&FieldSpec::new(3, 5).unwrap());
    }

    #[test]
    fn large_fields_use_log_tables() {
        for (p, e) in [(2, 16), (65521, 1), (3, 10), (251, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            assert!(f.mul_table().is_none());
            let q = f.order();
            // spot-check a stride of elements
            for a in (1..q).step_by(997) {
                let a = a as Elem;
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                let b = ((a as u32 * 31 + 7) % q) as Elem;
                let c = ((a as u32 * 101 + 3) % q) as Elem;
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.sub(f.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn reduction_polynomial_is_deterministic() {
        // x^2 + x + 1 over F_2, x^3 + x + 1 over F_2, x^2 + x + 2 over F_3
        assert_eq!(FieldSpec::new(2, 2).unwrap().modulus(), &[1, 1]);
        assert_eq!(FieldSpec::new(2, 3).unwrap().modulus(), &[1, 1, 0]);
        assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), &[2, 1]);
        // x + 1 gives -1 (order 2); x + 2 gives 5, a primitive root mod 7
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f7.modulus(), &[2]);
        assert_eq!(f7.generator(), 5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldSpec::new(4, 1).is_err());
        assert!(FieldSpec::new(2, 17).is_err());
        assert!(FieldSpec::new(2, 0).is_err());
        assert!(FieldSpec::with_order(6).is_err());
        assert!(FieldSpec::with_order(1).is_err());
        assert_eq!(prime_power(49), Some((7, 2)));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = FieldSpec::new(5, 2).unwrap();
        for a in 0..25 {
            let mut acc = 1;
            for k in 0..30u64 {
                assert_eq!(f.pow(a, k), acc);
                acc = f.mul(acc, a);
            }
        }
    }
}
