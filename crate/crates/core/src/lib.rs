//! Regulator computation and principal-ideal navigation in real quadratic
//! fields, with a classical simulation of the Fourier period-finding step.

pub mod numerics;
pub mod field;
pub mod ideal;
pub mod cycle;
pub mod navigator;
pub mod pell;
pub mod qperiod;
