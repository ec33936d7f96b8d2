//! SL(2,ℂ) substrate: matrices, orbit invariants, chart, SU(2)×SU(2) action,
//! χ parametrization, Euler angles and Haar sampling, Cartan decomposition.

mod orbits;
mod group;
mod mat;

pub use orbits::{beta_section, cartan_decompose, same_orbit, CartanDecomposition};
pub use group::{
    act, act_point, chart, chart_inverse, chi, haar_sample, su2_from_euler, su2_vector, w_of, x_of, y_of, LieAlgPair,
    SL2Point, SU2Element,
};
pub use mat::{c, pauli, Mat2C, C64};
