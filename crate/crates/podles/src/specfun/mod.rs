//! Complex special functions for the residue series.
//!
//! Everything here is driven by the needs of the heat-trace and spectral
//! action assemblies: Gamma and its reciprocal on the pole lattice strip,
//! polygamma up to order two, Bessel J of complex order evaluated at real
//! nonnegative argument, the modified family J~^(n)_nu obtained by
//! differentiating (z/2)^{-alpha} J_{alpha+nu}(z) in alpha at alpha = 0,
//! the order-zero Bessel Y function used as a cross-check, and erf.

mod bessel;
mod erf;
mod gamma;
mod polygamma;

pub use bessel::{bessel_j, bessel_j_tracked, bessel_y0, jtilde, jtilde_tracked};
pub use erf::{erf, erfcx};
pub use gamma::{gamma_c, recip_gamma, recip_gamma_d1, recip_gamma_d2};
pub use polygamma::polygamma;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A series value together with the largest partial sum reached while
/// accumulating it. The ratio max_partial/|value| measures how much
/// cancellation the evaluation went through.
#[derive(Debug, Clone, Copy)]
pub struct Tracked<T> {
    pub value: T,
    pub max_partial: f64,
}
