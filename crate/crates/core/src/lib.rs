//! Exact equivariant index computations for finite groups acting on linear models.

pub mod charts;
pub mod complexes;
pub mod exactnum;
pub mod groupoids;
pub mod groups;
pub mod reps;
pub mod rrg;
pub mod sample;
pub mod series;
