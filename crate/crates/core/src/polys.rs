//! Fox-Hermite polynomials and the monic orthogonal polynomials of `mu^1`.

use crate::error::{Error, Result};
use crate::gwm::{double_factorial_odd, GWMeasure};
use crate::real::{lit, to_f64, Real};
use crate::wright::{family_psi_real, ValidatedFamily};

/// Polynomial coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs<T> {
    pub coeffs: Vec<T>,
}

impl<T: Real> PolyCoeffs<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> T {
        self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::new(vec![T::zero()]);
        }
        let c = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * T::from_usize(i + 1).unwrap())
            .collect();
        Self::new(c)
    }

    /// JSON array of coefficients, ascending degree.
    pub fn to_json(&self) -> String {
        let v: Vec<f64> = self.coeffs.iter().map(|&c| to_f64(c)).collect();
        serde_json::to_string(&v).expect("finite floats serialize")
    }
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| {
        acc * T::from_usize(n - i).unwrap() / T::from_usize(i + 1).unwrap()
    })
}

fn mixing_moments<T: Real>(fam: &ValidatedFamily<T>, upto: usize) -> Result<Vec<T>> {
    (0..=upto).map(|k| fam.moment(T::from_usize(k).unwrap())).collect()
}

/// `F_n(x) = sum_k (-1)^k m_k C(n, 2k) (2k-1)!! x^{n-2k}` with `m_k` the
/// mixing moments.
pub fn fox_hermite<T: Real>(fam: &ValidatedFamily<T>, n: usize) -> Result<PolyCoeffs<T>> {
    let m = mixing_moments(fam, n / 2)?;
    let mut c = vec![T::zero(); n + 1];
    for (k, mk) in m.iter().enumerate() {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        c[n - 2 * k] = sign * *mk * binomial::<T>(n, 2 * k) * double_factorial_odd::<T>(k as u32);
    }
    Ok(PolyCoeffs::new(c))
}

/// Partial sum `sum_{n <= N} t^n F_n(x) / n!` and the generating function
/// `e^{tx} Psi(-t^2/2) / K`.
pub fn fox_hermite_gen<T: Real>(fam: &ValidatedFamily<T>, x: T, t: T, n_max: usize) -> Result<(T, T)> {
    let m = mixing_moments(fam, n_max / 2)?;
    // t^n F_n(x) / n! = sum_k (-1)^k m_k (t^2/2)^k / k! * (tx)^{n-2k} / (n-2k)!,
    // accumulated per power of t so no factorial is formed explicitly.
    let half_t2 = lit::<T>(0.5) * t * t;
    let tx = t * x;
    let mut pow_tx = vec![T::one(); n_max + 1];
    for j in 1..=n_max {
        pow_tx[j] = pow_tx[j - 1] * tx / T::from_usize(j).unwrap();
    }
    let mut partial = T::zero();
    let mut gk = T::one();
    for (k, mk) in m.iter().enumerate() {
        if k > 0 {
            gk = -gk * half_t2 / T::from_usize(k).unwrap();
        }
        let rest: T = pow_tx[..=n_max - 2 * k].iter().fold(T::zero(), |a, &v| a + v);
        partial = partial + gk * *mk * rest;
    }
    let closed = tx.exp() * family_psi_real(fam, -half_t2, lit(1e-13))? / fam.k();
    Ok((partial, closed))
}

fn convolve<T: Real>(p: &[T], q: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] = out[i + j] + a * b;
        }
    }
    out
}

/// Monic orthogonal polynomial of degree `n` in `L^2(mu^1)`, from the
/// closed-form moments through the three-term recurrence
/// `p_{k+1} = x p_k - c_k p_{k-1}`, `c_k = <p_k, p_k> / <p_{k-1}, p_{k-1}>`.
/// The measure is symmetric, so there is no diagonal term.
pub fn gram_schmidt_orthopoly<T: Real>(mu: &GWMeasure<T>, n: usize) -> Result<PolyCoeffs<T>> {
    if mu.dim() != 1 {
        return Err(Error::Domain(format!(
            "orthogonal polynomials need d = 1, got d = {}",
            mu.dim()
        )));
    }
    let mk = mixing_moments(mu.family(), n)?;
    // Moments of X: E[X^{2k}] = (2k-1)!! m_k, odd moments vanish.
    let mut mx = vec![T::zero(); 2 * n + 1];
    for (k, m) in mk.iter().enumerate() {
        mx[2 * k] = *m * double_factorial_odd::<T>(k as u32);
    }
    let norm = |p: &[T]| -> (T, T) {
        let sq = convolve(p, p);
        let mut v = T::zero();
        let mut scale = T::zero();
        for (c, m) in sq.iter().zip(&mx) {
            v = v + *c * *m;
            scale = scale + (*c * *m).abs();
        }
        (v, scale)
    };
    let mut prev = vec![T::one()];
    if n == 0 {
        return Ok(PolyCoeffs::new(prev));
    }
    let mut cur = vec![T::zero(), T::one()];
    let mut h_prev = T::one();
    for k in 1..n {
        let (h, scale) = norm(&cur);
        if !(h > lit::<T>(1e3) * T::epsilon() * scale) {
            return Err(Error::Conditioning(format!(
                "moment functional is numerically singular at degree {k} (norm {:e}, scale {:e})",
                to_f64(h),
                to_f64(scale)
            )));
        }
        let c = h / h_prev;
        let mut next = vec![T::zero(); k + 2];
        for (i, &v) in cur.iter().enumerate() {
            next[i + 1] = v;
        }
        for (i, &v) in prev.iter().enumerate() {
            next[i] = next[i] - c * v;
        }
        prev = cur;
        cur = next;
        h_prev = h;
    }
    let (h, scale) = norm(&cur);
    if !(h > lit::<T>(1e3) * T::epsilon() * scale) {
        return Err(Error::Conditioning(format!(
            "moment functional is numerically singular at degree {n}"
        )));
    }
    Ok(PolyCoeffs::new(cur))
}
