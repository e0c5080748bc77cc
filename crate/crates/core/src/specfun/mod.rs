//! Special functions: incomplete gamma, Bessel J0, and Meijer G (uni- and bivariate).

mod bessel;
mod bivariate;
mod cgamma;
mod contour;
mod gamma;
mod meijer;

pub use bessel::bessel_j0;
pub use bivariate::{meijer_g_bivariate, meijer_g_bivariate_tol, BivariateGSpec};
pub use cgamma::ln_gamma_c;
pub use gamma::{
    gamma, j_func, ln_gamma, lower_gamma, reg_lower_gamma, reg_upper_gamma, rgamma, upper_gamma,
};
pub use meijer::{
    meijer_g, meijer_g_contour, meijer_g_detailed, meijer_g_residue, GBackend, GValue, MeijerGSpec,
    PERTURB_EPS,
};

pub(crate) use gamma::{inc_gamma_pair, ln_binomial, ln_j_func};
