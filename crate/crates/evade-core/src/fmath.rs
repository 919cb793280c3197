//! Float math shims usable with and without `std`.
//!
//! Transcendentals always go through `libm` so results are bit-identical
//! across platforms and build modes. `sqrt` and `abs` are correctly rounded
//! IEEE operations, so hardware and `libm` agree bit-for-bit and we can use
//! the fast path whenever `std` is available.

#[inline(always)]
pub fn sqrt(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sqrt()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sqrt(x)
    }
}

#[inline(always)]
pub fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

#[inline(always)]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline(always)]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline(always)]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline(always)]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[inline(always)]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Fused multiply-add. The `std` build uses the intrinsic (hardware FMA
/// where compiled in, correctly rounded either way); `libm::fma` is the
/// correctly rounded soft fallback.
#[inline(always)]
pub fn mul_add(a: f64, b: f64, c: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        a.mul_add(b, c)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fma(a, b, c)
    }
}

#[inline(always)]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}
