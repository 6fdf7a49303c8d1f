//! Exact computations in RO(C2)-graded equivariant homotopy: spectral
//! sequences for tmf_1(3) and its relatives, slices, Bredon homology,
//! Serre/Anderson duality shadows and Picard groups.

pub mod algebra;
pub mod chart;
pub mod anderson;
pub mod grading;
pub mod group;
pub mod mackey;
pub mod picard;
pub mod slice;
pub mod snf;
pub mod sseq;
pub mod tmf13;
