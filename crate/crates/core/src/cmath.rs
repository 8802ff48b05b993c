//! Complex elementary functions on top of `libm`, so results do not depend
//! on whether `num-traits` was built with `std`.

use num_complex::Complex64;

/// `r e^{iθ}`.
pub fn polar(r: f64, theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(r * c, r * s)
}

/// `(|z|, arg z)`.
pub fn to_polar(z: Complex64) -> (f64, f64) {
    (libm::hypot(z.re, z.im), libm::atan2(z.im, z.re))
}

/// Principal branch of `z^e`.
pub fn powf(z: Complex64, e: f64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (r, t) = to_polar(z);
    polar(libm::pow(r, e), t * e)
}
