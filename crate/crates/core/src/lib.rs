//! Exact angular-momentum recoupling, symmetry-averaging channels and the
//! relational spin toy model built on them.
//!
//! The kernels in [`am`] are generic over [`scalar::Real`]; everything that
//! touches dense linear algebra works in `f64`.

pub mod am;
pub mod channels;
pub mod composite;
pub mod error;
pub mod halfint;
pub mod network;
pub mod quadrature;
pub mod scalar;
pub mod toy;

pub use error::{Error, Result};
pub use halfint::HalfInt;

pub type Real = f64;
pub type Complex = num_complex::Complex<f64>;
pub type CMatrix = nalgebra::DMatrix<Complex>;
pub type CVector = nalgebra::DVector<Complex>;
pub type WignerD = am::WignerDMatrix<f64>;
pub type WignerD32 = am::WignerDMatrix<f32>;
