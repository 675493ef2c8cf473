//! Shared numerical kernels: bracketed root finding, Gauss-Legendre
//! quadrature with order doubling, monotone cubic interpolation, closed-form
//! cubic roots and the Thomas tridiagonal solve.

pub mod cubic;
pub mod interp;
pub mod quadrature;
pub mod rootfind;
pub mod tridiag;
