//! Finite-field arithmetic and dense linear algebra over `F_q`.

mod enumerate;
mod field;
mod infoset;
mod linalg;

pub use enumerate::{
    class_count, for_each_class_weight, projective_representatives, span_weights, ProjectiveRepresentatives,
    ProjectiveWalk, WalkStep,
};
pub use field::{prime_power, Elem, FieldSpec, DENSE_TABLE_ORDER, MAX_ORDER};
pub use infoset::{min_distance, min_distance_infoset, min_distance_walk, MinDistance, WALK_CLASS_LIMIT};
pub use linalg::{rank, row_reduce, FqVector, GeneratorSet};
