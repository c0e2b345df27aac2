use std::sync::{Arc, OnceLock};

use super::field::{Elem, FieldSpec};
use crate::error::{invalid, Result};

/// A vector in `F_q^n` with a lazily computed Hamming weight.
#[derive(Clone, Debug, Default)]
pub struct FqVector {
    entries: Vec<Elem>,
    weight: OnceLock<usize>,
}

impl PartialEq for FqVector {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for FqVector {}

impl std::hash::Hash for FqVector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state)
    }
}

impl FqVector {
    pub fn new(entries: Vec<Elem>) -> Self {
        FqVector {
            entries,
            weight: OnceLock::new(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Unit vector `e_i` of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        *self
            .weight
            .get_or_init(|| self.entries.iter().filter(|&&x| x != 0).count())
    }

    pub fn scaled(&self, field: &FieldSpec, s: Elem) -> Self {
        Self::new(self.entries.iter().map(|&x| field.mul(s, x)).collect())
    }

    pub fn plus(&self, field: &FieldSpec, other: &Self) -> Self {
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        )
    }
}

impl From<Vec<Elem>> for FqVector {
    fn from(v: Vec<Elem>) -> Self {
        Self::new(v)
    }
}

/// `k` generator rows in `F_q^n`. Rank deficiency is allowed.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    field: Arc<FieldSpec>,
    n: usize,
    rows: Vec<FqVector>,
    full_rank: OnceLock<bool>,
}

impl GeneratorSet {
    pub fn new(field: Arc<FieldSpec>, n: usize, rows: Vec<FqVector>) -> Result<Self> {
        let q = field.order();
        for row in &rows {
            if row.len() != n {
                return Err(invalid(format!("row of length {} in a set of length {n}", row.len())));
            }
            if let Some(&x) = row.entries().iter().find(|&&x| x as u32 >= q) {
                return Err(invalid(format!("entry {x} is not an element of F_{q}")));
            }
        }
        Ok(GeneratorSet {
            field,
            n,
            rows,
            full_rank: OnceLock::new(),
        })
    }

    /// Convenience constructor from raw rows.
    pub fn from_rows(field: Arc<FieldSpec>, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Self::new(field, n, rows.into_iter().map(FqVector::new).collect())
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Code length.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of generators.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[FqVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Whether the rows are linearly independent (cached).
    pub fn is_full_rank(&self) -> bool {
        *self.full_rank.get_or_init(|| rank(self) == self.rows.len())
    }

    /// The codeword `sum_i a_i X_i`.
    pub fn encode(&self, message: &[Elem]) -> FqVector {
        let f = &*self.field;
        let mut out = vec![0; self.n];
        for (&a, row) in message.iter().zip(&self.rows) {
            if a == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row.entries()) {
                *o = f.add(*o, f.mul(a, x));
            }
        }
        FqVector::new(out)
    }
}

/// Number of 64-bit words needed for `n` packed bits.
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Packs a binary vector into little-endian 64-bit words.
pub(crate) fn pack_binary(entries: &[Elem]) -> Vec<u64> {
    let mut out = vec![0u64; words_for(entries.len())];
    for (j, &x) in entries.iter().enumerate() {
        if x != 0 {
            out[j / 64] |= 1 << (j % 64);
        }
    }
    out
}

/// Gaussian-elimination rank over `F_q`.
pub fn rank(g: &GeneratorSet) -> usize {
    if g.field.order() == 2 {
        let mut rows: Vec<Vec<u64>> = g.rows.iter().map(|r| pack_binary(r.entries())).collect();
        return binary_rank(&mut rows, g.n);
    }
    let mut rows: Vec<Vec<Elem>> = g.rows.iter().map(|r| r.entries().to_vec()).collect();
    row_reduce(&g.field, &mut rows, g.n).len()
}

/// In-place elimination of packed binary rows; returns the rank.
pub(crate) fn binary_rank(rows: &mut [Vec<u64>], n: usize) -> usize {
    let mut r = 0;
    for col in 0..n {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (r..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[w] & bit != 0 {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Reduces `rows` to reduced row echelon form in place (zero rows moved to
/// the end) and returns the pivot columns.
pub fn row_reduce(field: &FieldSpec, rows: &mut [Vec<Elem>], n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let s = field.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(s, *x);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let c = row[col];
            if i != r && c != 0 {
                let c = field.neg(c);
                for (a, &b) in row.iter_mut().zip(&pivot) {
                    *a = field.add(*a, field.mul(c, b));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}
