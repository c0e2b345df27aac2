//! Traversal of one message per proportionality class.
//!
//! Order: messages are grouped by the position `p` of their first nonzero
//! coordinate, `p = 0, 1, .., k-1`, and that coordinate is fixed to `1`.
//! Within a group the trailing coordinates `p+1..k` run through the base-`q`
//! reflected Gray order on their integer encodings, with coordinate `k-1` the
//! fastest digit. Consecutive messages in a group differ in exactly one
//! coordinate, whose encoding moves by one, so a codeword is updated with a
//! single scaled generator row per step.

use super::field::{Elem, FieldSpec};
use super::linalg::{pack_binary, GeneratorSet};
use crate::error::{invalid, Result};

/// One move of the projective walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkStep {
    /// A new group starts: the message is the unit vector `e_pivot`.
    Start { pivot: usize },
    /// Coordinate `coord` changes its value from `from` to `to`.
    Adjust { coord: usize, from: Elem, to: Elem },
}

#[derive(Clone, Debug)]
pub struct ProjectiveWalk {
    q: u32,
    k: usize,
    pivot: usize,
    /// Gray digits, fastest first: digit `j` is coordinate `k - 1 - j`.
    digits: Vec<u32>,
    up: Vec<bool>,
    started: bool,
    done: bool,
}

impl ProjectiveWalk {
    pub fn new(q: u32, k: usize) -> Self {
        ProjectiveWalk {
            q,
            k,
            pivot: 0,
            digits: Vec::new(),
            up: Vec::new(),
            started: false,
            done: k == 0,
        }
    }

    fn start_group(&mut self) -> WalkStep {
        let len = self.k - 1 - self.pivot;
        self.digits.clear();
        self.digits.resize(len, 0);
        self.up.clear();
        self.up.resize(len, true);
        WalkStep::Start { pivot: self.pivot }
    }
}

impl Iterator for ProjectiveWalk {
    type Item = WalkStep;

    fn next(&mut self) -> Option<WalkStep> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.start_group());
        }
        let mut j = 0;
        loop {
            if j == self.digits.len() {
                self.pivot += 1;
                if self.pivot == self.k {
                    self.done = true;
                    return None;
                }
                return Some(self.start_group());
            }
            let d = self.digits[j];
            let to = match self.up[j] {
                true if d + 1 < self.q => d + 1,
                false if d > 0 => d - 1,
                _ => {
                    self.up[j] = !self.up[j];
                    j += 1;
                    continue;
                }
            };
            self.digits[j] = to;
            return Some(WalkStep::Adjust {
                coord: self.k - 1 - j,
                from: d as Elem,
                to: to as Elem,
            });
        }
    }
}

/// `(q^k - 1) / (q - 1)`, the number of proportionality classes in `F_q^k`,
/// when `q^k` fits in 64 bits.
pub fn class_count(q: u32, k: usize) -> Option<u64> {
    let qk = (q as u128).checked_pow(u32::try_from(k).ok()?)?;
    u64::try_from((qk - 1) / (q as u128 - 1)).ok()
}

/// Iterator over canonical class representatives (first nonzero coordinate
/// equal to 1), in walk order.
#[derive(Clone, Debug)]
pub struct ProjectiveRepresentatives {
    walk: ProjectiveWalk,
    current: Vec<Elem>,
}

impl Iterator for ProjectiveRepresentatives {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        match self.walk.next()? {
            WalkStep::Start { pivot } => {
                self.current.iter_mut().for_each(|x| *x = 0);
                self.current[pivot] = 1;
            }
            WalkStep::Adjust { coord, to, .. } => self.current[coord] = to,
        }
        Some(self.current.clone())
    }
}

/// Canonical representatives of the nonzero classes of `F_q^k`.
pub fn projective_representatives(field: &FieldSpec, k: usize) -> Result<ProjectiveRepresentatives> {
    if k == 0 {
        return Err(invalid("message length k must be at least 1"));
    }
    class_count(field.order(), k)
        .ok_or_else(|| invalid(format!("q^k = {}^{k} does not fit a 64-bit message index", field.order())))?;
    Ok(ProjectiveRepresentatives {
        walk: ProjectiveWalk::new(field.order(), k),
        current: vec![0; k],
    })
}

/// Calls `visit` with the weight of the codeword of every class
/// representative, in walk order, doing `O(n)` work per codeword.
///
/// # Panics
/// If `q^k` does not fit in 64 bits.
pub fn for_each_class_weight(g: &GeneratorSet, mut visit: impl FnMut(u32)) {
    let field = &**g.field();
    assert!(
        class_count(field.order(), g.k()).is_some(),
        "q^k overflows the message index"
    );
    let walk = ProjectiveWalk::new(field.order(), g.k());
    if field.order() == 2 {
        let rows: Vec<Vec<u64>> = g.rows().iter().map(|r| pack_binary(r.entries())).collect();
        let mut acc = vec![0u64; rows.first().map_or(1, Vec::len)];
        for step in walk {
            match step {
                WalkStep::Start { pivot } => acc.copy_from_slice(&rows[pivot]),
                WalkStep::Adjust { coord, .. } => {
                    acc.iter_mut().zip(&rows[coord]).for_each(|(a, b)| *a ^= b)
                }
            }
            visit(acc.iter().map(|w| w.count_ones()).sum());
        }
        return;
    }
    let rows: Vec<&[Elem]> = g.rows().iter().map(|r| r.entries()).collect();
    let mut acc = vec![0 as Elem; g.len()];
    let mut weight = 0u32;
    for step in walk {
        match step {
            WalkStep::Start { pivot } => {
                acc.copy_from_slice(rows[pivot]);
                weight = acc.iter().filter(|&&x| x != 0).count() as u32;
            }
            WalkStep::Adjust { coord, from, to } => {
                let delta = field.sub(to, from);
                for (a, &x) in acc.iter_mut().zip(rows[coord]) {
                    if x != 0 {
                        let old = *a;
                        *a = field.add(old, field.mul(delta, x));
                        weight = weight + (*a != 0) as u32 - (old != 0) as u32;
                    }
                }
            }
        }
        visit(weight);
    }
}

/// Weights of one codeword per proportionality class of messages, in walk
/// order: exactly `(q^k - 1)/(q - 1)` values. Classes whose codeword is zero
/// (rank-deficient generators) contribute weight 0.
pub fn span_weights(g: &GeneratorSet) -> Vec<u32> {
    let mut out = Vec::with_capacity(class_count(g.field().order(), g.k()).unwrap_or(0) as usize);
    for_each_class_weight(g, |w| out.push(w));
    out
}
