//! Exact minimum distance by multiple information sets.
//!
//! The code is brought to systematic form on a sequence of information sets
//! `P_1, P_2, ..`, each chosen to cover as many not-yet-covered coordinates as
//! possible. At level `t` every message of weight `t` is encoded in every
//! systematic form. A nonzero codeword not met after level `t` has more than
//! `t` nonzero coordinates on each `P_j`, hence at least
//! `sum_j max(0, t + 1 - |P_j ∩ (P_1 ∪ .. ∪ P_{j-1})|)` nonzero coordinates
//! in total; once the best weight seen is at or below that bound it is the
//! minimum distance. The bound is also checked part-way through a level,
//! counting `t` instead of `t + 1` for the sets not yet done.

use super::enumerate::{class_count, for_each_class_weight};
use super::field::{Elem, FieldSpec};
use super::linalg::{pack_binary, words_for, GeneratorSet};

/// Above this many classes the walk is replaced by the information-set search.
pub const WALK_CLASS_LIMIT: u64 = 1 << 12;

/// Minimum nonzero weight of a code together with the number of codewords
/// evaluated to certify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinDistance {
    /// 0 exactly when every generator is zero.
    pub distance: u32,
    pub visits: u64,
}

/// Minimal distance of the span of `g`: the least weight of a nonzero
/// codeword, or 0 when the span is `{0}`.
pub fn min_distance(g: &GeneratorSet) -> MinDistance {
    match class_count(g.field().order(), g.k()) {
        Some(c) if c <= WALK_CLASS_LIMIT => min_distance_walk(g),
        _ => min_distance_infoset(g),
    }
}

/// Minimum over the projective walk; used as the reference for small codes.
pub fn min_distance_walk(g: &GeneratorSet) -> MinDistance {
    let mut best = u32::MAX;
    let mut visits = 0;
    for_each_class_weight(g, |w| {
        visits += 1;
        if w != 0 && w < best {
            best = w;
        }
    });
    MinDistance {
        distance: if best == u32::MAX { 0 } else { best },
        visits,
    }
}

trait Rows {
    type Row: Clone;
    fn zero(&self) -> Self::Row;
    fn get(&self, row: &Self::Row, j: usize) -> Elem;
    /// `acc = base + s * row`
    fn axpy_into(&self, acc: &mut Self::Row, base: &Self::Row, s: Elem, row: &Self::Row);
    fn scale(&self, row: &mut Self::Row, s: Elem);
    fn weight(&self, row: &Self::Row) -> u32;
    /// `wt(base + s * row)`, using `scratch` as needed.
    fn weight_of_sum(&self, scratch: &mut Self::Row, base: &Self::Row, s: Elem, row: &Self::Row) -> u32 {
        self.axpy_into(scratch, base, s, row);
        self.weight(scratch)
    }
    fn field(&self) -> &FieldSpec;
}

struct Binary<'a> {
    words: usize,
    field: &'a FieldSpec,
}

impl Rows for Binary<'_> {
    type Row = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.words]
    }

    #[inline]
    fn get(&self, row: &Vec<u64>, j: usize) -> Elem {
        ((row[j / 64] >> (j % 64)) & 1) as Elem
    }

    #[inline]
    fn axpy_into(&self, acc: &mut Vec<u64>, base: &Vec<u64>, _s: Elem, row: &Vec<u64>) {
        for ((a, b), r) in acc.iter_mut().zip(base).zip(row) {
            *a = b ^ r;
        }
    }

    fn scale(&self, _row: &mut Vec<u64>, _s: Elem) {}

    #[inline]
    fn weight_of_sum(&self, _scratch: &mut Vec<u64>, base: &Vec<u64>, _s: Elem, row: &Vec<u64>) -> u32 {
        base.iter().zip(row).map(|(b, r)| (b ^ r).count_ones()).sum()
    }

    #[inline]
    fn weight(&self, row: &Vec<u64>) -> u32 {
        row.iter().map(|w| w.count_ones()).sum()
    }

    fn field(&self) -> &FieldSpec {
        self.field
    }
}

struct General<'a> {
    n: usize,
    field: &'a FieldSpec,
}

impl Rows for General<'_> {
    type Row = Vec<Elem>;

    fn zero(&self) -> Vec<Elem> {
        vec![0; self.n]
    }

    #[inline]
    fn get(&self, row: &Vec<Elem>, j: usize) -> Elem {
        row[j]
    }

    #[inline]
    fn axpy_into(&self, acc: &mut Vec<Elem>, base: &Vec<Elem>, s: Elem, row: &Vec<Elem>) {
        let f = self.field;
        for ((a, &b), &r) in acc.iter_mut().zip(base).zip(row) {
            *a = f.add(b, f.mul(s, r));
        }
    }

    fn scale(&self, row: &mut Vec<Elem>, s: Elem) {
        row.iter_mut().for_each(|x| *x = self.field.mul(s, *x));
    }

    #[inline]
    fn weight(&self, row: &Vec<Elem>) -> u32 {
        row.iter().filter(|&&x| x != 0).count() as u32
    }

    fn field(&self) -> &FieldSpec {
        self.field
    }
}

/// Row-reduces `rows` choosing pivot columns in `order`; returns the nonzero
/// reduced rows and their pivot columns.
fn systematic<R: Rows>(ops: &R, rows: &[R::Row], order: &[usize]) -> (Vec<R::Row>, Vec<usize>) {
    let f = ops.field();
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut tmp = ops.zero();
    for &col in order {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| ops.get(&rows[i], col) != 0) else {
            continue;
        };
        rows.swap(r, p);
        let s = f.inv(ops.get(&rows[r], col)).expect("nonzero pivot");
        ops.scale(&mut rows[r], s);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let c = ops.get(row, col);
            if i != r && c != 0 {
                ops.axpy_into(&mut tmp, row, f.neg(c), &pivot);
                std::mem::swap(row, &mut tmp);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

struct Level<'a, R: Rows> {
    ops: &'a R,
    rows: &'a [R::Row],
    stack: Vec<R::Row>,
    best: u32,
    visits: u64,
}

impl<R: Rows> Level<'_, R> {
    /// Encodes every message of weight `remaining + depth` whose support
    /// extends the current prefix, with leading coefficient 1.
    fn dfs(&mut self, start: usize, remaining: usize, depth: usize) {
        let q = self.ops.field().order() as Elem;
        let coeffs = if depth == 0 { 1..2 } else { 1..q };
        for i in start..=self.rows.len() - remaining {
            for c in coeffs.clone() {
                let (lo, hi) = self.stack.split_at_mut(depth + 1);
                if remaining == 1 {
                    self.visits += 1;
                    let w = self.ops.weight_of_sum(&mut hi[0], &lo[depth], c, &self.rows[i]);
                    if w < self.best {
                        self.best = w;
                    }
                } else {
                    self.ops.axpy_into(&mut hi[0], &lo[depth], c, &self.rows[i]);
                    self.dfs(i + 1, remaining - 1, depth + 1);
                }
            }
        }
    }
}

fn search<R: Rows>(ops: &R, input: Vec<R::Row>, n: usize) -> MinDistance {
    let natural: Vec<usize> = (0..n).collect();
    let (basis, first) = systematic(ops, &input, &natural);
    let r = basis.len();
    if r == 0 {
        return MinDistance { distance: 0, visits: 0 };
    }
    let live: Vec<usize> = (0..n).filter(|&j| basis.iter().any(|b| ops.get(b, j) != 0)).collect();
    let mut covered = vec![false; n];
    let mut sets: Vec<(Vec<R::Row>, usize)> = Vec::new();
    let mut pivots = first;
    let mut rows = basis.clone();
    loop {
        let fresh = pivots.iter().filter(|&&j| !covered[j]).count();
        if fresh == 0 {
            break;
        }
        pivots.iter().for_each(|&j| covered[j] = true);
        sets.push((rows, r - fresh));
        let order: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&j| !covered[j])
            .chain(live.iter().copied().filter(|&j| covered[j]))
            .collect();
        (rows, pivots) = systematic(ops, &basis, &order);
    }

    let mut best = u32::MAX;
    let mut visits = 0u64;
    'levels: for t in 1..=r {
        for (j, (rows, _)) in sets.iter().enumerate() {
            let mut level = Level {
                ops,
                rows,
                stack: vec![ops.zero(); t + 1],
                best,
                visits: 0,
            };
            level.dfs(0, t, 0);
            best = level.best;
            visits += level.visits;
            // unseen codewords exceed weight t on sets 0..=j and t - 1 on the rest
            let bound: usize = sets
                .iter()
                .enumerate()
                .map(|(i, &(_, overlap))| (t + usize::from(i <= j)).saturating_sub(overlap))
                .sum();
            if best as usize <= bound {
                break 'levels;
            }
        }
    }
    MinDistance { distance: best, visits }
}

/// Information-set search; exact for every input, including rank-deficient
/// generator sets.
pub fn min_distance_infoset(g: &GeneratorSet) -> MinDistance {
    let field = &**g.field();
    let n = g.len();
    if field.order() == 2 {
        let ops = Binary {
            words: words_for(n),
            field,
        };
        let rows = g.rows().iter().map(|r| pack_binary(r.entries())).collect();
        search(&ops, rows, n)
    } else {
        let ops = General { n, field };
        let rows = g.rows().iter().map(|r| r.entries().to_vec()).collect();
        search(&ops, rows, n)
    }
}
