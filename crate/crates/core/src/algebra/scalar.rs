//! Scalar backends.
//!
//! Two real fields are supported: [`BigRational`] (exact, no rounding) and
//! `f64` (approximate). Complex entries are `Complex<R>` over either field,
//! which for rationals is the Gaussian extension.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use super::matrix::HermMatrix;
use super::psd::{psd_check_approx, psd_check_exact, PsdVerdict};

/// Complex scalar over a real backend.
pub type Cplx<R> = Complex<R>;

/// A real scalar field usable as a matrix entry backend.
pub trait Real:
    Clone + Debug + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    /// Relative tolerance for Hermitian symmetry checks (zero when exact).
    const SYMMETRY_TOL: f64;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact rational value; `None` for non-finite floats.
    fn to_rational(&self) -> Option<BigRational>;

    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self;

    fn from_u64(v: u64) -> Self;

    /// Backend-appropriate PSD decision. `tol` is ignored by exact backends.
    fn psd_check(m: &HermMatrix<Self>, tol: f64) -> PsdVerdict<Self>;

    /// Machine epsilon of the backend; zero when exact.
    fn epsilon() -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl Real for BigRational {
    const EXACT: bool = true;
    const SYMMETRY_TOL: f64 = 0.0;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn psd_check(m: &HermMatrix<Self>, _tol: f64) -> PsdVerdict<Self> {
        psd_check_exact(m)
    }

    fn epsilon() -> f64 {
        0.0
    }
}

impl Real for f64 {
    const EXACT: bool = false;
    const SYMMETRY_TOL: f64 = 1e-12;

    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_f64(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn psd_check(m: &HermMatrix<Self>, tol: f64) -> PsdVerdict<Self> {
        psd_check_approx(m, tol)
    }

    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

/// `Complex::new(re, 0)`.
pub fn real<R: Real>(re: R) -> Cplx<R> {
    Complex::new(re, R::zero())
}

pub fn cplx_zero<R: Real>() -> Cplx<R> {
    Complex::new(R::zero(), R::zero())
}

pub fn cplx_one<R: Real>() -> Cplx<R> {
    Complex::new(R::one(), R::zero())
}

pub fn imag_unit<R: Real>() -> Cplx<R> {
    Complex::new(R::zero(), R::one())
}

pub fn conj<R: Real>(z: &Cplx<R>) -> Cplx<R> {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// `|z|` as a float, used only for scale estimates.
pub fn abs_f64<R: Real>(z: &Cplx<R>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

/// `base^exp` by repeated multiplication.
pub fn pow<R: Real>(base: &R, exp: u32) -> R {
    num_traits::pow(base.clone(), exp as usize)
}

/// Convert between backends through the exact rational value.
///
/// Panics on non-finite floats.
pub fn convert<R: Real, S: Real>(x: &R) -> S {
    let q = x
        .to_rational()
        .unwrap_or_else(|| panic!("cannot convert non-finite value {x:?}"));
    S::from_rational(&q)
}

/// Parse `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(p) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(p));
    }
    // decimal literal such as -1.25 or 1e-3
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(q)
}

/// Render an exact rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
