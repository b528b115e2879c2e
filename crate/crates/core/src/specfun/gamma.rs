//! Log-gamma on the real line and in the complex plane.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{lit, to_f64, Real};

// B_{2n} / (2n (2n - 1)), n = 1..=9
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

const STIRLING_MIN_ABS: f64 = 10.0;

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.floor()
}

/// `sin(pi x)` with exact argument reduction.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = lit::<T>(2.0);
    let r = x - two * (x / two).round();
    if r == T::zero() || r.abs() == T::one() {
        return T::zero();
    }
    (T::PI() * r).sin()
}

fn stirling_real<T: Real>(x: T) -> T {
    let w = (x * x).recip();
    let mut s = T::zero();
    for c in STIRLING.iter().rev() {
        s = s * w + lit(*c);
    }
    (x - lit(0.5)) * x.ln() - x + lit::<T>(0.5) * T::TAU().ln() + s / x
}

/// `ln|Gamma(x)|` and the sign of `Gamma(x)` for real `x`.
pub fn ln_gamma<T: Real>(x: T) -> Result<(T, T)> {
    if x.is_nan() {
        return Err(Error::Domain("ln_gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma",
            at: to_f64(x),
        });
    }
    if x == T::infinity() {
        return Ok((T::infinity(), T::one()));
    }
    if x < T::zero() {
        let s = sin_pi(x);
        let (lg, _) = ln_gamma(T::one() - x)?;
        let v = T::PI().ln() - s.abs().ln() - lg;
        return Ok((v, s.signum()));
    }
    let ten: T = lit(STIRLING_MIN_ABS);
    if x >= ten {
        return Ok((stirling_real(x), T::one()));
    }
    let n = (ten - x).ceil().to_usize().unwrap_or(10);
    let mut prod = T::one();
    for k in 0..n {
        prod = prod * (x + T::from_usize(k).unwrap());
    }
    Ok((stirling_real(x + T::from_usize(n).unwrap()) - prod.ln(), T::one()))
}

/// `Gamma(x)` for real `x`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    let (lg, s) = ln_gamma(x)?;
    Ok(s * lg.exp())
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn rgamma<T: Real>(x: T) -> T {
    match ln_gamma(x) {
        Ok((lg, s)) => s * (-lg).exp(),
        Err(_) => T::zero(),
    }
}

fn stirling_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let w = (z * z).inv();
    let mut s = Complex::new(T::zero(), T::zero());
    for c in STIRLING.iter().rev() {
        s = s * w + lit::<T>(*c);
    }
    (z - lit::<T>(0.5)) * z.ln() - z + lit::<T>(0.5) * T::TAU().ln() + s / z
}

fn ln_gamma_right<T: Real>(z: Complex<T>) -> Complex<T> {
    let ten: T = lit(STIRLING_MIN_ABS);
    if z.norm() >= ten {
        return stirling_complex(z);
    }
    let n = (ten - z.re).ceil().max(T::one()).to_usize().unwrap_or(10);
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..n {
        acc = acc + (z + T::from_usize(k).unwrap()).ln();
    }
    stirling_complex(z + T::from_usize(n).unwrap()) - acc
}

// Principal log of sin(pi z) for Im z >= 0, stable for large Im z.
fn ln_sin_pi_upper<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let x = z.re - two * (z.re / two).round();
    let y = z.im;
    let pi = T::PI();
    if y < T::one() {
        let s = Complex::new(
            sin_pi(x) * (pi * y).cosh(),
            (pi * x).cos() * (pi * y).sinh(),
        );
        return s.ln();
    }
    // sin(pi w) = e^{-i pi w} (1 - e^{2 i pi w}) i / 2
    let w = Complex::new(x, y);
    let i = Complex::new(T::zero(), T::one());
    let e2 = (i * w * (two * pi)).exp();
    let one = Complex::new(T::one(), T::zero());
    let v = -i * w * pi + (one - e2).ln() + Complex::new(lit::<T>(0.5).ln(), pi / two);
    let tau = T::TAU();
    let mut im = v.im % tau;
    if im > pi {
        im = im - tau;
    } else if im <= -pi {
        im = im + tau;
    }
    Complex::new(v.re, im)
}

/// Principal branch of `ln Gamma(z)`, analytic off the non-positive real axis.
pub fn ln_gamma_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("ln_gamma of non-finite argument".into()));
    }
    if z.im < T::zero() {
        return ln_gamma_complex(z.conj()).map(|w| w.conj());
    }
    if z.im == T::zero() && is_nonpositive_integer(z.re) {
        return Err(Error::Pole {
            function: "gamma",
            at: to_f64(z.re),
        });
    }
    if z.re >= lit(0.5) {
        return Ok(ln_gamma_right(z));
    }
    let one = Complex::new(T::one(), T::zero());
    let lg = ln_gamma_complex(one - z)?;
    let branch = T::TAU() * (lit::<T>(0.5) * z.re + lit(0.25)).floor();
    Ok(Complex::new(T::PI().ln(), branch) - ln_sin_pi_upper(z) - lg)
}
