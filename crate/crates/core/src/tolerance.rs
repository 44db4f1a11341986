//! Floating-point tolerances. Identities whose terms are all integers are
//! checked exactly and never consult this module.

/// Relative factor for identities involving `e(x/m)`: the absolute slack is
/// `FOURIER_REL * sqrt(m) * max|input|` (times the natural scale of the
/// quantity compared).
pub const FOURIER_REL: f64 = 1e-6;

/// Parseval and convolution-norm identities: `PARSEVAL_REL * m * max|input|^2`.
pub const PARSEVAL_REL: f64 = 1e-6;

/// Gauss sums: absolute error against the closed form, scaled by `sqrt(p)`.
pub const GAUSS_REL: f64 = 1e-6;

/// Orthonormality of the shifted system, scaled by `p`.
pub const ONB_REL: f64 = 1e-9;

/// Identities of the character transform: `TILDE_REL * p * |phi|_inf * |psi|_inf`.
pub const TILDE_REL: f64 = 1e-8;

/// Values below `SUPPORT_REL * |g|_inf` count as zero.
pub const SUPPORT_REL: f64 = 1e-9;

/// Generic complex comparisons of character values (non-Legendre characters).
pub const CHAR_ABS: f64 = 1e-6;
