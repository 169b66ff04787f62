//! Function-field algebra in characteristic `p`: the residue field, its
//! polynomials and rational functions, and the curves that appear on special
//! fibers.

pub mod artin_schreier;
pub mod field;
pub mod poly;
pub mod ratfun;

pub use artin_schreier::{
    as_genus, as_irreducible, as_reduce, conductor_genus, is_pth_power, p_rank_ds,
    polynomial_as_genus, AsCurve, AsReduction, CurveError, InsepCurve, Place,
};
pub use field::{Fq, ResidueField};
pub use poly::FqPoly;
pub use ratfun::ResidueRationalFunction;
