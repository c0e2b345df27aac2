use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::vector::{MomentValues, MomentVector};
use crate::error::{invalid, Result};

/// Largest supported system size.
pub const MAX_H: usize = 24;

/// `B = (j^i)_{i,j=1..h}` with its exact inverse, obtained both by
/// elimination and from the closed form
/// `b'_ij = (-1)^{h-j} e_{h-j}({1..h} \ {i}) / (i prod_{m != i} (i - m))`.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionSystem {
    pub h: usize,
    pub b: Vec<Vec<BigRational>>,
    pub inverse: Vec<Vec<BigRational>>,
    pub closed_form: Vec<Vec<BigRational>>,
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn gauss_jordan_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let h = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..h).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..h {
        let p = (c..h).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        m[c].iter_mut().for_each(|x| *x *= &inv);
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                row.iter_mut().zip(&pivot).for_each(|(x, p)| *x -= &f * p);
            }
        }
    }
    Some(m.into_iter().map(|r| r[h..].to_vec()).collect())
}

/// Elementary symmetric polynomials `e_0..e_len` of `values`.
fn elementary_symmetric(values: &[i64]) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for &v in values {
        e.push(BigInt::zero());
        for t in (1..e.len()).rev() {
            let prev = e[t - 1].clone();
            e[t] += prev * v;
        }
    }
    e
}

fn closed_form_inverse(h: usize) -> Vec<Vec<BigRational>> {
    (1..=h as i64)
        .map(|i| {
            let others: Vec<i64> = (1..=h as i64).filter(|&m| m != i).collect();
            let e = elementary_symmetric(&others);
            let den: BigInt = others.iter().map(|&m| BigInt::from(i - m)).product::<BigInt>() * i;
            (1..=h)
                .map(|j| {
                    let sign = if (h - j).is_multiple_of(2) { 1 } else { -1 };
                    BigRational::new(&e[h - j] * sign, den.clone())
                })
                .collect()
        })
        .collect()
}

pub fn inversion_system(h: usize) -> Result<InversionSystem> {
    if h == 0 || h > MAX_H {
        return Err(invalid(format!("h = {h} outside 1..={MAX_H}")));
    }
    let b: Vec<Vec<BigRational>> = (1..=h as u32)
        .map(|i| (1..=h as i64).map(|j| Pow::pow(int(j), i)).collect())
        .collect();
    let inverse = gauss_jordan_inverse(&b).expect("B is a scaled Vandermonde matrix, hence invertible");
    Ok(InversionSystem {
        h,
        b,
        closed_form: closed_form_inverse(h),
        inverse,
    })
}

impl InversionSystem {
    pub fn product_is_identity(&self) -> bool {
        (0..self.h).all(|i| {
            (0..self.h).all(|j| {
                let s: BigRational = (0..self.h).map(|l| &self.b[i][l] * &self.inverse[l][j]).sum();
                s == if i == j { BigRational::one() } else { BigRational::zero() }
            })
        })
    }

    pub fn closed_form_matches(&self) -> bool {
        self.inverse == self.closed_form
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.inverse
            .iter()
            .flatten()
            .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Smallest `C` with `|b'_ij| <= C^h h^{-j}` for all entries.
    pub fn crude_bound_constant(&self) -> f64 {
        let h = self.h as f64;
        self.inverse
            .iter()
            .flat_map(|row| row.iter().enumerate())
            .map(|(j, x)| {
                let v = x.abs().to_f64().unwrap_or(f64::INFINITY);
                if v == 0.0 {
                    0.0
                } else {
                    ((v.ln() + (j as f64 + 1.0) * h.ln()) / h).exp()
                }
            })
            .fold(0.0, f64::max)
    }

    fn apply(&self, u: &[BigRational]) -> Vec<BigRational> {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(u).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn apply_abs(&self, e: &[f64]) -> Vec<f64> {
        self.inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(e)
                    .map(|(a, b)| a.abs().to_f64().unwrap_or(f64::INFINITY) * b)
                    .sum()
            })
            .collect()
    }
}

/// What is known about `Z` beyond the value `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailBound {
    /// `Z` is supported on `1..=h`.
    None,
    /// `P{Z > h} <= mass` and `Z <= max_value`: the tail adds at most
    /// `mass * max_value^i` to the `i`-th moment.
    Mass { mass: f64, max_value: f64 },
    /// Uses the moment of order `h + 1`: the tail adds at most
    /// `E[Z^{h+1}] / (h+1)^{h+1-i}` to the `i`-th moment.
    NextMoment,
}

/// Point masses `M(r)`, `r = 1..=h`, reconstructed from moments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassVector {
    pub h: usize,
    /// Raw reconstruction; may be slightly negative or exceed 1 from noise.
    pub masses: Vec<f64>,
    /// Exact reconstruction when the moments were exact.
    #[serde(skip)]
    pub exact: Option<Vec<BigRational>>,
    /// `|B^{-1}| E_bar` from the tail bound.
    pub tail_error: Vec<f64>,
    /// `|B^{-1}| sigma` from the moment standard errors.
    pub noise: Vec<f64>,
    pub tail: TailBound,
}

impl MassVector {
    /// Componentwise error bound: tail contribution plus propagated noise.
    pub fn err_bound(&self) -> Vec<f64> {
        self.tail_error.iter().zip(&self.noise).map(|(a, b)| a + b).collect()
    }

    /// Masses clipped into `[0, 1]` and scaled down if they sum above 1.
    pub fn clipped(&self) -> Vec<f64> {
        let c: Vec<f64> = self.masses.iter().map(|m| m.clamp(0.0, 1.0)).collect();
        let s: f64 = c.iter().sum();
        if s > 1.0 {
            c.iter().map(|m| m / s).collect()
        } else {
            c
        }
    }
}

/// Solves `B V = U` for the masses `V`, using the first `h` moments of `u`.
pub fn invert_moments(u: &MomentVector, h: usize, tail: TailBound) -> Result<MassVector> {
    let sys = inversion_system(h)?;
    let needed = if tail == TailBound::NextMoment { h + 1 } else { h };
    if u.h() < needed {
        return Err(invalid(format!("need moments of orders 1..={needed}, got {}", u.h())));
    }
    let e_bar: Vec<f64> = (1..=h)
        .map(|i| match tail {
            TailBound::None => Ok(0.0),
            TailBound::Mass { mass, max_value } => {
                if !(0.0..=1.0).contains(&mass) || max_value < 0.0 {
                    return Err(invalid("tail mass must lie in [0, 1] and the maximum be nonnegative"));
                }
                Ok(mass * max_value.powi(i as i32))
            }
            TailBound::NextMoment => {
                let top = u.get_f64(h + 1) + u.stderr(h + 1);
                Ok(top / ((h + 1) as f64).powi((h + 1 - i) as i32))
            }
        })
        .collect::<Result<_>>()?;

    let (values, sigma): (Vec<BigRational>, Vec<f64>) = match &u.values {
        MomentValues::Exact(v) => (v[..h].to_vec(), vec![0.0; h]),
        MomentValues::Estimated { mean, stderr } => (
            mean[..h]
                .iter()
                .map(|&x| BigRational::from_float(x).ok_or_else(|| invalid("non-finite moment")))
                .collect::<Result<_>>()?,
            stderr[..h].to_vec(),
        ),
    };
    let v = sys.apply(&values);
    Ok(MassVector {
        h,
        masses: v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        exact: u.is_exact().then_some(v),
        tail_error: sys.apply_abs(&e_bar),
        noise: sys.apply_abs(&sigma),
        tail,
    })
}
