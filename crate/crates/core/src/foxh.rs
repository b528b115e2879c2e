//! Fox-H functions by quadrature along a vertical Mellin-Barnes contour.
//!
//! `H(z) = (1/2pi) int kernel(gamma + it) z^{-(gamma + it)} dt` with
//! `kernel(s) = prod_{j<m} G(b_j + beta_j s) prod_{i<n} G(1 - a_i - alpha_i s)
//!            / (prod_{i>=n} G(a_i + alpha_i s) prod_{j>=m} G(1 - b_j - beta_j s))`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{lit, to_f64, Real};
use crate::specfun::gamma::ln_gamma_complex;
use crate::specfun::quad::{try_integrate, Domain, QuadOptions};

/// Parameter block `H^{m,n}_{p,q}` with contour abscissa `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHParams<T> {
    pub m: usize,
    pub n: usize,
    /// `(a_i, alpha_i)`, length `p`.
    pub upper: Vec<(T, T)>,
    /// `(b_j, beta_j)`, length `q`.
    pub lower: Vec<(T, T)>,
    pub gamma: T,
}

impl<T: Real> FoxHParams<T> {
    /// Build a parameter block with the default abscissa 0.5.
    pub fn new(m: usize, n: usize, upper: Vec<(T, T)>, lower: Vec<(T, T)>) -> Result<Self> {
        if m > lower.len() || n > upper.len() {
            return Err(Error::Domain(format!(
                "need m <= q and n <= p, got m = {m}, q = {}, n = {n}, p = {}",
                lower.len(),
                upper.len()
            )));
        }
        for (name, list) in [("upper", &upper), ("lower", &lower)] {
            for (i, &(c, w)) in list.iter().enumerate() {
                if !c.is_finite() || !(w > T::zero()) || !w.is_finite() {
                    return Err(Error::Unsupported(format!(
                        "{name}[{i}] = ({}, {}): weights must be positive and finite",
                        to_f64(c),
                        to_f64(w)
                    )));
                }
            }
        }
        Ok(Self {
            m,
            n,
            upper,
            lower,
            gamma: lit(0.5),
        })
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Decay exponent: the kernel falls off like `exp(-pi a* |t| / 2)`.
    pub fn a_star(&self) -> T {
        let mut s = T::zero();
        for (j, &(_, w)) in self.lower.iter().enumerate() {
            s = if j < self.m { s + w } else { s - w };
        }
        for (i, &(_, w)) in self.upper.iter().enumerate() {
            s = if i < self.n { s + w } else { s - w };
        }
        s
    }

    /// Open interval of admissible abscissae: right of every pole of the
    /// `G(b_j + beta_j s)`, `j < m`, left of every pole of `G(1 - a_i - alpha_i s)`, `i < n`.
    pub fn contour_interval(&self) -> (T, T) {
        let lo = self.lower[..self.m]
            .iter()
            .map(|&(b, w)| -b / w)
            .fold(T::neg_infinity(), T::max);
        let hi = self.upper[..self.n]
            .iter()
            .map(|&(a, w)| (T::one() - a) / w)
            .fold(T::infinity(), T::min);
        (lo, hi)
    }
}

fn pole_error(factor: &str, index: usize, at: f64) -> Error {
    Error::Domain(format!("kernel factor {factor}[{index}] has a pole (Gamma argument {at})"))
}

/// `ln kernel(s)`, or `None` where a denominator factor has a pole (kernel is zero).
pub fn ln_kernel<T: Real>(params: &FoxHParams<T>, s: Complex<T>) -> Result<Option<Complex<T>>> {
    let one = Complex::new(T::one(), T::zero());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (j, &(b, w)) in params.lower.iter().enumerate() {
        if j < params.m {
            let arg = s * w + b;
            acc = acc + ln_gamma_complex(arg).map_err(|_| pole_error("lower", j, to_f64(arg.re)))?;
        } else {
            match ln_gamma_complex(one - s * w - b) {
                Ok(v) => acc = acc - v,
                Err(Error::Pole { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    for (i, &(a, w)) in params.upper.iter().enumerate() {
        if i < params.n {
            let arg = one - s * w - a;
            acc = acc + ln_gamma_complex(arg).map_err(|_| pole_error("upper", i, to_f64(arg.re)))?;
        } else {
            match ln_gamma_complex(s * w + a) {
                Ok(v) => acc = acc - v,
                Err(Error::Pole { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Some(acc))
}

/// Kernel value at `s`, computed in log-space.
pub fn kernel<T: Real>(params: &FoxHParams<T>, s: Complex<T>) -> Result<Complex<T>> {
    Ok(ln_kernel(params, s)?.map_or(Complex::new(T::zero(), T::zero()), |l| l.exp()))
}

/// How the contour abscissa is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourRule {
    /// Use `params.gamma`, moved to the interval midpoint if it is not admissible.
    AsGiven,
    /// Minimize `|kernel(gamma) z^{-gamma}|` over the admissible interval. Best
    /// for positive results that are small relative to the integrand.
    Saddle,
}

#[derive(Debug, Clone, Copy)]
pub struct FoxHOptions<T> {
    pub rtol: T,
    pub contour: ContourRule,
    /// Integrate over `[-T, T]` instead of using conjugate symmetry, so that
    /// the imaginary residual of a real result is measured.
    pub full_range: bool,
    /// Fixed truncation point instead of the adaptive choice.
    pub truncation: Option<T>,
}

impl<T: Real> FoxHOptions<T> {
    pub fn new(rtol: T) -> Self {
        Self {
            rtol,
            contour: ContourRule::AsGiven,
            full_range: false,
            truncation: None,
        }
    }

    pub fn saddle(mut self) -> Self {
        self.contour = ContourRule::Saddle;
        self
    }

    pub fn full_range(mut self) -> Self {
        self.full_range = true;
        self
    }

    pub fn truncate_at(mut self, t: T) -> Self {
        self.truncation = Some(t);
        self
    }
}

/// Value with quadrature diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct FoxHEvaluation<T> {
    pub value: Complex<T>,
    /// `|Im value|` for real arguments evaluated with `full_range`, else 0.
    pub imag_residual: T,
    pub gamma: T,
    pub truncation: T,
    /// Bound on the neglected part of the contour beyond `truncation`.
    pub tail_bound: T,
    /// Quadrature error estimate on `[-T, T]`.
    pub abs_error: T,
    pub panels: usize,
}

fn admissible_gamma<T: Real>(params: &FoxHParams<T>, ln_z: T, rule: ContourRule) -> Result<T> {
    let (lo, hi) = params.contour_interval();
    if lo >= hi {
        return Err(Error::Unsupported(format!(
            "no vertical contour separates the pole sets (interval ({}, {}))",
            to_f64(lo),
            to_f64(hi)
        )));
    }
    let width = hi - lo;
    let margin = if width.is_finite() {
        (lit::<T>(0.05) * width).min(lit(0.05))
    } else {
        lit(0.05)
    };
    let default = if lo.is_finite() && hi.is_finite() {
        lit::<T>(0.5) * (lo + hi)
    } else if lo.is_finite() {
        lo + lit(0.5)
    } else if hi.is_finite() {
        hi - lit(0.5)
    } else {
        params.gamma
    };
    match rule {
        ContourRule::AsGiven => {
            let g = params.gamma;
            if g.is_finite() && g > lo + margin && g < hi - margin {
                Ok(g)
            } else {
                Ok(default)
            }
        }
        ContourRule::Saddle => {
            let span: T = lit(40.0);
            let left = if lo.is_finite() { lo + lit::<T>(2.0) * margin } else { default - span };
            let right = if hi.is_finite() { hi - lit::<T>(2.0) * margin } else { default + span };
            if !(left < right) {
                return Ok(default);
            }
            let phi = |g: T| -> T {
                match ln_kernel(params, Complex::new(g, T::zero())) {
                    Ok(Some(l)) => l.re - g * ln_z,
                    _ => T::infinity(),
                }
            };
            // Golden-section search; log|kernel| is close to convex in gamma.
            let r = lit::<T>(0.5 * (5f64.sqrt() - 1.0));
            let (mut a, mut b) = (left, right);
            let mut c = b - r * (b - a);
            let mut d = a + r * (b - a);
            let (mut fc, mut fd) = (phi(c), phi(d));
            for _ in 0..80 {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - r * (b - a);
                    fc = phi(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + r * (b - a);
                    fd = phi(d);
                }
                if (b - a).abs() < lit::<T>(1e-3) * (T::one() + a.abs()) {
                    break;
                }
            }
            let g = lit::<T>(0.5) * (a + b);
            Ok(if phi(g).is_finite() { g } else { default })
        }
    }
}

/// Evaluate `H(z)` for complex `z` in the sector `|arg z| < pi a* / 2`,
/// returning diagnostics.
pub fn foxh_eval_with<T: Real>(
    params: &FoxHParams<T>,
    z: Complex<T>,
    opts: &FoxHOptions<T>,
) -> Result<FoxHEvaluation<T>> {
    let a_star = params.a_star();
    if !(a_star > T::zero()) {
        return Err(Error::Unsupported(format!(
            "decay condition a* > 0 violated (a* = {})",
            to_f64(a_star)
        )));
    }
    if z.norm() == T::zero() || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("Fox-H argument must be finite and nonzero".into()));
    }
    let half_pi = T::FRAC_PI_2();
    let rate = half_pi * a_star - z.arg().abs();
    if !(rate > T::zero()) {
        return Err(Error::Unsupported(format!(
            "|arg z| = {} outside the convergence sector pi a*/2 = {}",
            to_f64(z.arg().abs()),
            to_f64(half_pi * a_star)
        )));
    }
    let ln_z = z.ln();
    let gamma = admissible_gamma(params, ln_z.re, opts.contour)?;
    let real_case = z.im == T::zero() && !opts.full_range;

    let integrand = |t: T| -> Result<Complex<T>> {
        let s = Complex::new(gamma, t);
        Ok(match ln_kernel(params, s)? {
            Some(l) => (l - s * ln_z).exp(),
            None => Complex::new(T::zero(), T::zero()),
        })
    };

    let rtol = opts.rtol;
    // Each panel is split once before acceptance, so half a period per
    // panel still puts 30 nodes on every oscillation.
    let width_cap = T::PI() / ln_z.norm().max(T::one());
    let mut panels_used = 0usize;
    let mut quad_err = T::zero();
    let mut integrate_range = |a: T, b: T, atol: T| -> Result<Complex<T>> {
        let n = ((b - a) / width_cap).ceil().to_usize().unwrap_or(1).max(1);
        let qo = QuadOptions::new(lit::<T>(0.1) * rtol)
            .atol(atol)
            .initial_panels(n)
            .max_panels((1usize << 14).max(8 * n));
        let mut acc = |t: T| integrand(t);
        let r = try_integrate(&mut acc, Domain::Finite(a, b), &qo)?;
        panels_used += r.panels;
        quad_err = quad_err + r.abs_error;
        Ok(r.value)
    };
    let sum_sym = |f: &mut dyn FnMut(T, T, T) -> Result<Complex<T>>, a: T, b: T, atol: T| -> Result<Complex<T>> {
        if real_case {
            f(a, b, atol)
        } else {
            Ok(f(a, b, atol)? + f(-b, -a, atol)?)
        }
    };

    let g0 = integrand(T::zero())?.norm();
    let (t_final, total, tail) = if let Some(t_fixed) = opts.truncation {
        let v = sum_sym(&mut integrate_range, T::zero(), t_fixed, T::zero())?;
        let gt = integrand(t_fixed)?.norm().max(integrand(-t_fixed)?.norm());
        (t_fixed, v, gt / rate)
    } else {
        // A priori cut from the exponential decay, then doubling until the
        // added stretch is negligible.
        let mut t = (rtol.recip().ln() / rate).max(lit(4.0));
        for _ in 0..60 {
            let gt = integrand(t)?.norm().max(integrand(-t)?.norm());
            if gt / rate <= lit::<T>(0.01) * rtol * g0.max(T::min_positive_value()) {
                break;
            }
            t = t * lit(1.25);
        }
        let mut total = sum_sym(&mut integrate_range, T::zero(), t, T::zero())?;
        let mut last;
        let mut iters = 0;
        loop {
            // The stretch only has to be resolved relative to what is already summed.
            let atol = lit::<T>(0.01) * rtol * total.norm();
            let chunk = sum_sym(&mut integrate_range, t, lit::<T>(2.0) * t, atol)?;
            total = total + chunk;
            t = lit::<T>(2.0) * t;
            last = chunk.norm();
            iters += 1;
            let scale = (lit::<T>(0.1) * rtol * total.norm()).max(lit::<T>(50.0) * T::epsilon() * g0);
            if last <= scale {
                break;
            }
            if iters >= 12 {
                return Err(Error::Convergence {
                    what: "Fox-H contour truncation",
                    best_estimate: to_f64(total.norm()),
                    error_estimate: to_f64(last),
                });
            }
        }
        let gt = integrand(t)?.norm().max(integrand(-t)?.norm());
        (t, total, last + gt / rate)
    };

    let (value, imag_residual) = if real_case {
        (Complex::new(total.re / T::PI(), T::zero()), T::zero())
    } else {
        let v = total / T::TAU();
        let resid = if z.im == T::zero() { v.im.abs() } else { T::zero() };
        (v, resid)
    };
    let scale = if real_case { T::PI() } else { T::TAU() };
    Ok(FoxHEvaluation {
        value,
        imag_residual,
        gamma,
        truncation: t_final,
        tail_bound: tail / scale,
        abs_error: quad_err / scale,
        panels: panels_used,
    })
}

/// Evaluate `H(z)` at real `z > 0` with the abscissa in `params.gamma`.
pub fn foxh_eval<T: Real>(params: &FoxHParams<T>, z: T, rtol: T) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::Domain(format!("Fox-H evaluation needs z > 0, got {}", to_f64(z))));
    }
    foxh_eval_with(params, Complex::new(z, T::zero()), &FoxHOptions::new(rtol)).map(|e| e.value.re)
}

/// Fox-H representation of a generalized Wright function at `-w`:
/// `H^{1,m}_{m,p+1}[w | (1 - B_i, beta_i); (0, 1), (1 - A_j, alpha_j)]`.
pub fn gwf_foxh_params<T: Real>(num: &[(T, T)], den: &[(T, T)]) -> Result<FoxHParams<T>> {
    let upper = num.iter().map(|&(b, w)| (T::one() - b, w)).collect();
    let mut lower = vec![(T::zero(), T::one())];
    lower.extend(den.iter().map(|&(a, w)| (T::one() - a, w)));
    FoxHParams::new(1, num.len(), upper, lower)
}

/// Whether the contour representation covers the series at argument `z`.
pub fn gwf_contour_applies<T: Real>(num: &[(T, T)], den: &[(T, T)], z: Complex<T>) -> bool {
    let Ok(params) = gwf_foxh_params(num, den) else {
        return false;
    };
    if num.iter().any(|&(b, _)| !(b > T::zero())) || z.norm() == T::zero() {
        return false;
    }
    let w = -z;
    w.arg().abs() < T::FRAC_PI_2() * params.a_star()
}

/// The series with pairs `num`/`den` at `-w`, evaluated on the contour.
pub fn gwf_via_foxh_complex<T: Real>(
    num: &[(T, T)],
    den: &[(T, T)],
    w: Complex<T>,
    rtol: T,
) -> Result<Complex<T>> {
    let params = gwf_foxh_params(num, den)?;
    if num.iter().any(|&(b, _)| !(b > T::zero())) {
        return Err(Error::Unsupported(
            "contour representation needs every numerator shift B_i > 0".into(),
        ));
    }
    let opts = FoxHOptions::new(rtol).saddle();
    foxh_eval_with(&params, w, &opts).map(|e| e.value)
}

/// The series with pairs `num`/`den` at `-z`, `z > 0`, evaluated on the contour.
pub fn gwf_via_foxh<T: Real>(num: &[(T, T)], den: &[(T, T)], z: T, rtol: T) -> Result<T> {
    if num.is_empty() && den.is_empty() {
        // H^{1,0}_{0,1}[z | (0,1)] = exp(-z); the contour is only needed for z > 0.
        if !(z > T::zero()) {
            return Ok((-z).exp());
        }
    }
    if !(z > T::zero()) {
        return Err(Error::Domain(format!("gwf_via_foxh needs z > 0, got {}", to_f64(z))));
    }
    gwf_via_foxh_complex(num, den, Complex::new(z, T::zero()), rtol).map(|v| v.re)
}
