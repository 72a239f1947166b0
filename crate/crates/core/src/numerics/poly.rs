use alloc::vec::Vec;
use num_complex::Complex64;
// Float math for no_std builds; the std inherent methods shadow it in tests.
#[allow(unused_imports)]
use num_traits::Float;

use super::{CoeffVector, RootSet};
use crate::{Error, Result};

/// `z^N + y_1 z^(N-1) + ... + y_N`; the leading one is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    coeffs: CoeffVector,
}

impl MonicPolynomial {
    pub fn new(coeffs: CoeffVector) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooSmall {
                degree: coeffs.len(),
            });
        }
        Ok(MonicPolynomial { coeffs })
    }

    pub fn from_roots(roots: &RootSet) -> Result<Self> {
        coefficients_from_zeros(roots).map(|coeffs| MonicPolynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> CoeffVector {
        self.coeffs
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        evaluate(&self.coeffs, z)
    }

    /// Largest coefficient magnitude, counting the implicit leading one.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max)
    }
}

/// Horner evaluation of the monic polynomial with coefficients `coeffs`.
pub fn evaluate(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
}

/// Vieta map: coefficients of `prod_n (z - x_n)`.
///
/// Expands the product one linear factor at a time, which yields
/// `y_m = (-1)^m e_m` with `e_m` the elementary symmetric polynomial.
pub fn coefficients_from_zeros(roots: &RootSet) -> Result<CoeffVector> {
    let n = roots.len();
    if n < 2 {
        return Err(Error::DegreeTooSmall { degree: n });
    }
    if !roots.is_finite() {
        return Err(Error::NonFinite { what: "zeros" });
    }
    // c[k] is the coefficient of z^(deg - k) of the partial product.
    let mut c: Vec<Complex64> = Vec::with_capacity(n + 1);
    c.push(Complex64::new(1.0, 0.0));
    for &r in roots.iter() {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            let prev = c[k - 1];
            c[k] -= r * prev;
        }
    }
    c.remove(0);
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow {
            what: "elementary symmetric polynomials",
        });
    }
    Ok(c)
}

/// Square root with positive real part; on the imaginary axis, the one with
/// positive imaginary part.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = z.re.hypot(z.im);
    let t = ((modulus + z.re.abs()) * 0.5).sqrt();
    let s = if z.re >= 0.0 {
        Complex64::new(t, z.im / (2.0 * t))
    } else {
        Complex64::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    };
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        Complex64::new(-s.re + 0.0, -s.im)
    } else {
        Complex64::new(s.re + 0.0, s.im)
    }
}
