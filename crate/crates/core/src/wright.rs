//! Parameter validation for the measure family and generalized Wright series.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::foxh;
use crate::real::{lit, to_f64, Real};
use crate::specfun::gamma::ln_gamma;

/// Raw parameter lists of a family.
///
/// `upper` holds the pairs `(a_i, alpha_i)`, `lower` the pairs `(b_j, beta_j)`.
/// The family function is
/// `Psi(z) = sum_k prod Gamma(b_j + beta_j + beta_j k) / prod Gamma(a_i + alpha_i + alpha_i k) z^k / k!`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrightParams<T> {
    #[serde(default)]
    pub upper: Vec<(T, T)>,
    #[serde(default)]
    pub lower: Vec<(T, T)>,
    /// Admit `m = p = 0` as the Gaussian (white-noise) family.
    #[serde(default)]
    pub allow_white_noise: bool,
}

impl<T: Real> WrightParams<T> {
    pub fn new(upper: Vec<(T, T)>, lower: Vec<(T, T)>) -> Self {
        Self {
            upper,
            lower,
            allow_white_noise: false,
        }
    }

    /// The Gaussian family `m = p = 0`.
    pub fn white_noise() -> Self {
        Self {
            upper: Vec::new(),
            lower: Vec::new(),
            allow_white_noise: true,
        }
    }

    /// Mittag-Leffler family: `upper = [(1 - rho, rho)]`, `lower = [(0, 1)]`.
    pub fn mittag_leffler(rho: T) -> Self {
        Self::new(vec![(T::one() - rho, rho)], vec![(T::zero(), T::one())])
    }
}

impl<T: Real + for<'de> Deserialize<'de>> WrightParams<T> {
    /// Parse a parameter file (JSON).
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// Parameters that passed validation, with derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedFamily<T> {
    params: WrightParams<T>,
    a_star: T,
    mu: T,
    k: T,
    ln_k: T,
    entire: bool,
    white_noise: bool,
}

fn violation(field: String, message: impl Into<String>) -> Violation {
    Violation {
        field,
        message: message.into(),
    }
}

/// Validate raw parameters. Every violated constraint is reported.
pub fn validate<T: Real>(raw: &WrightParams<T>, require_entire: bool) -> Result<ValidatedFamily<T>> {
    let mut bad = Vec::new();
    for (list, name, sym) in [(&raw.upper, "upper", "a"), (&raw.lower, "lower", "b")] {
        for (i, &(c, w)) in list.iter().enumerate() {
            if !c.is_finite() || !w.is_finite() {
                bad.push(violation(format!("{name}[{i}]"), "non-finite entry"));
                continue;
            }
            if w <= T::zero() {
                bad.push(violation(
                    format!("{name}[{i}]"),
                    format!("weight {} <= 0 is unsupported (weights must be positive)", to_f64(w)),
                ));
            }
            if c + w <= T::zero() {
                bad.push(violation(
                    format!("{name}[{i}]"),
                    format!("{sym} + weight = {} must be > 0", to_f64(c + w)),
                ));
            }
        }
    }
    let sum = |v: &[(T, T)], f: fn(&(T, T)) -> T| v.iter().map(f).fold(T::zero(), |a, b| a + b);
    let p = raw.upper.len();
    let m = raw.lower.len();
    let a_star = sum(&raw.lower, |x| x.1) - sum(&raw.upper, |x| x.1);
    let mu = sum(&raw.lower, |x| x.0) - sum(&raw.upper, |x| x.0)
        - lit::<T>(0.5) * (T::from_usize(p).unwrap() - T::from_usize(m).unwrap());
    let white_noise = m == 0 && p == 0;
    let scale = sum(&raw.lower, |x| x.1) + sum(&raw.upper, |x| x.1) + T::one();
    let zero_tol = lit::<T>(64.0) * T::epsilon() * scale;
    if white_noise {
        if !raw.allow_white_noise {
            bad.push(violation(
                "upper/lower".into(),
                "m = p = 0 gives a* = 0, mu = 0; set allow_white_noise to admit the Gaussian family",
            ));
        }
    } else if a_star.abs() <= zero_tol {
        if mu >= -T::one() {
            bad.push(violation(
                "a*".into(),
                format!("a* = 0 requires mu < -1, got mu = {}", to_f64(mu)),
            ));
        }
    } else if a_star < T::zero() {
        bad.push(violation("a*".into(), format!("a* = {} must be >= 0", to_f64(a_star))));
    }
    if !bad.is_empty() {
        return Err(Error::InvalidParams(bad));
    }

    let mut ln_k = T::zero();
    for &(b, beta) in &raw.lower {
        ln_k = ln_k + ln_gamma(b + beta)?.0;
    }
    for &(a, alpha) in &raw.upper {
        ln_k = ln_k - ln_gamma(a + alpha)?.0;
    }
    let entire = white_noise || (a_star > zero_tol && a_star < T::one() - zero_tol);
    if require_entire && !entire {
        return Err(Error::NotEntire {
            a_star: to_f64(a_star),
        });
    }
    Ok(ValidatedFamily {
        params: raw.clone(),
        a_star,
        mu,
        k: ln_k.exp(),
        ln_k,
        entire,
        white_noise,
    })
}

impl<T: Real> ValidatedFamily<T> {
    pub fn params(&self) -> &WrightParams<T> {
        &self.params
    }

    pub fn a_star(&self) -> T {
        self.a_star
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    /// Normalization constant `K = prod Gamma(b_j + beta_j) / prod Gamma(a_i + alpha_i)`.
    pub fn k(&self) -> T {
        self.k
    }

    pub fn ln_k(&self) -> T {
        self.ln_k
    }

    /// True iff `a*` lies in (0, 1), or for the Gaussian family.
    pub fn entire(&self) -> bool {
        self.entire
    }

    pub fn is_white_noise(&self) -> bool {
        self.white_noise
    }

    /// Numerator pairs of the family series, `(b_j + beta_j, beta_j)`.
    pub fn series_num(&self) -> Vec<(T, T)> {
        self.params.lower.iter().map(|&(b, w)| (b + w, w)).collect()
    }

    /// Denominator pairs of the family series, `(a_i + alpha_i, alpha_i)`.
    pub fn series_den(&self) -> Vec<(T, T)> {
        self.params.upper.iter().map(|&(a, w)| (a + w, w)).collect()
    }

    /// `ln|prod Gamma(b_j + beta_j s) / prod Gamma(a_i + alpha_i s)|` and its sign.
    /// A denominator pole gives `(-inf, 0)`.
    pub fn ln_gamma_ratio(&self, s: T) -> Result<(T, T)> {
        let mut acc = T::zero();
        let mut sign = T::one();
        for &(b, beta) in &self.params.lower {
            let (l, sg) = ln_gamma(b + beta * s)?;
            acc = acc + l;
            sign = sign * sg;
        }
        for &(a, alpha) in &self.params.upper {
            match ln_gamma(a + alpha * s) {
                Ok((l, sg)) => {
                    acc = acc - l;
                    sign = sign * sg;
                }
                Err(Error::Pole { .. }) => return Ok((T::neg_infinity(), T::zero())),
                Err(e) => return Err(e),
            }
        }
        Ok((acc, sign))
    }

    /// Moment of real order `l` of the mixing density:
    /// `(1/K) prod Gamma(b_j + beta_j (l+1)) / prod Gamma(a_i + alpha_i (l+1))`.
    /// Negative orders are allowed down to `l > -1 - min_j b_j / beta_j`.
    pub fn moment(&self, l: T) -> Result<T> {
        if self.white_noise {
            return Ok(T::one());
        }
        let (lr, sign) = self.ln_gamma_ratio(l + T::one())?;
        Ok(sign * (lr - self.ln_k).exp())
    }
}

/// Result of a direct series summation, with cancellation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOutcome<T> {
    pub value: Complex<T>,
    pub terms: usize,
    /// Sum of term magnitudes.
    pub abs_sum: T,
    /// Rounding-error estimate of `value`.
    pub error_estimate: T,
}

impl<T: Real> SeriesOutcome<T> {
    /// `sum |t_k| / |sum t_k|`.
    pub fn cancellation(&self) -> T {
        let v = self.value.norm();
        if v == T::zero() {
            T::infinity()
        } else {
            self.abs_sum / v
        }
    }
}

const TERM_CAP: usize = 10_000;

// ln|c_k| and sign of c_k = prod Gamma(B + beta k) / prod Gamma(A + alpha k) / k!.
// None if a denominator Gamma sits on a pole (the term vanishes).
fn ln_coeff<T: Real>(num: &[(T, T)], den: &[(T, T)], k: usize) -> Result<Option<(T, T)>> {
    let kk = T::from_usize(k).unwrap();
    let mut acc = -ln_gamma(kk + T::one())?.0;
    let mut sign = T::one();
    for &(b, beta) in num {
        let (l, s) = ln_gamma(b + beta * kk).map_err(|e| match e {
            Error::Pole { at, .. } => Error::Domain(format!(
                "numerator Gamma({at}) at term {k} is a pole"
            )),
            e => e,
        })?;
        acc = acc + l;
        sign = sign * s;
    }
    for &(a, alpha) in den {
        match ln_gamma(a + alpha * kk) {
            Ok((l, s)) => {
                acc = acc - l;
                sign = sign * s;
            }
            Err(Error::Pole { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some((acc, sign)))
}

/// The `k`-th series term, evaluated independently in log-space.
pub fn series_term<T: Real>(num: &[(T, T)], den: &[(T, T)], z: Complex<T>, k: usize) -> Result<Complex<T>> {
    let Some((lc, sign)) = ln_coeff(num, den, k)? else {
        return Ok(Complex::new(T::zero(), T::zero()));
    };
    if k == 0 {
        return Ok(Complex::new(sign * lc.exp(), T::zero()));
    }
    let kk = T::from_usize(k).unwrap();
    let mag = sign * (lc + kk * z.norm().ln()).exp();
    Ok(Complex::from_polar(mag, kk * z.arg()))
}

struct Neumaier<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Neumaier<T> {
    fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }
    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }
    fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Direct summation of
/// `sum_k prod Gamma(B_i + beta_i k) / prod Gamma(A_j + alpha_j k) z^k / k!`
/// with numerator pairs `num = (B_i, beta_i)` and denominator pairs `den = (A_j, alpha_j)`.
pub fn gwf_series<T: Real>(num: &[(T, T)], den: &[(T, T)], z: Complex<T>, rtol: T) -> Result<SeriesOutcome<T>> {
    let sb = num.iter().fold(T::zero(), |a, x| a + x.1);
    let sa = den.iter().fold(T::zero(), |a, x| a + x.1);
    let kappa = sb - sa;
    if kappa > T::one() && z != Complex::new(T::zero(), T::zero()) {
        return Err(Error::NotEntire {
            a_star: to_f64(kappa),
        });
    }
    let eps = T::epsilon();
    if z.norm() == T::zero() {
        let t0 = series_term(num, den, z, 0)?;
        return Ok(SeriesOutcome {
            value: t0,
            terms: 1,
            abs_sum: t0.norm(),
            error_estimate: lit::<T>(8.0) * eps * t0.norm(),
        });
    }
    let real_axis = z.im == T::zero();
    let ln_abs_z = z.norm().ln();
    let theta = z.arg();
    let mut re = Neumaier::new();
    let mut im = Neumaier::new();
    let mut abs_sum = T::zero();
    let mut err = T::zero();
    let mut small = 0usize;
    let overflow = lit::<T>(0.9) * T::max_value().ln();
    for k in 0..TERM_CAP {
        let kk = T::from_usize(k).unwrap();
        let coeff = ln_coeff(num, den, k)?;
        let (mag, lterm) = match coeff {
            None => (T::zero(), T::zero()),
            Some((lc, sign)) => {
                let lt = if k == 0 { lc } else { lc + kk * ln_abs_z };
                if lt > overflow {
                    return Err(Error::Precision {
                        what: "generalized Wright series",
                        cancellation: f64::INFINITY,
                    });
                }
                (sign * lt.exp(), lc.abs() + (kk * ln_abs_z).abs())
            }
        };
        let (tr, ti) = if real_axis {
            let s = if z.re < T::zero() && k % 2 == 1 { -T::one() } else { T::one() };
            (s * mag, T::zero())
        } else {
            (mag * (kk * theta).cos(), mag * (kk * theta).sin())
        };
        re.add(tr);
        im.add(ti);
        let am = mag.abs();
        abs_sum = abs_sum + am;
        err = err + am * (lit::<T>(8.0) + lterm) * eps;
        let cur = Complex::new(re.value(), im.value()).norm();
        if am <= rtol * cur {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && k >= 8 {
            return Ok(SeriesOutcome {
                value: Complex::new(re.value(), im.value()),
                terms: k + 1,
                abs_sum,
                error_estimate: err,
            });
        }
    }
    Err(Error::Convergence {
        what: "generalized Wright series",
        best_estimate: to_f64(Complex::new(re.value(), im.value()).norm()),
        error_estimate: to_f64(abs_sum),
    })
}

const CANCELLATION_LIMIT: f64 = 1e8;

/// Generalized Wright function with numerator pairs `num = (B_i, beta_i)` and
/// denominator pairs `den = (A_j, alpha_j)`.
///
/// Sums the series directly. When the sum cancels badly (indicator above 1e8)
/// or its rounding estimate exceeds `rtol`, the value is recomputed by contour
/// quadrature for arguments where that route applies.
pub fn gwf<T: Real>(num: &[(T, T)], den: &[(T, T)], z: Complex<T>, rtol: T) -> Result<Complex<T>> {
    if num.is_empty() && den.is_empty() {
        return Ok(z.exp());
    }
    let series = gwf_series(num, den, z, rtol);
    let reason = match &series {
        Ok(out) => {
            let c = out.cancellation();
            if c <= lit(CANCELLATION_LIMIT) && out.error_estimate <= rtol * out.value.norm() {
                return Ok(out.value);
            }
            Error::Precision {
                what: "generalized Wright series",
                cancellation: to_f64(c),
            }
        }
        Err(e @ (Error::Precision { .. } | Error::Convergence { .. })) => e.clone(),
        Err(e) => return Err(e.clone()),
    };
    if !foxh::gwf_contour_applies(num, den, z) {
        return Err(reason);
    }
    foxh::gwf_via_foxh_complex(num, den, -z, rtol)
}

/// `Psi(z)` of a validated family, without the `1/K` factor.
pub fn family_psi<T: Real>(fam: &ValidatedFamily<T>, z: Complex<T>, rtol: T) -> Result<Complex<T>> {
    if fam.is_white_noise() {
        return Ok(z.exp());
    }
    if z == Complex::new(T::zero(), T::zero()) {
        return Ok(Complex::new(fam.k(), T::zero()));
    }
    match gwf(&fam.series_num(), &fam.series_den(), z, rtol) {
        Err(Error::Precision { .. }) | Err(Error::Convergence { .. }) if !fam.entire() => {
            Err(Error::NotEntire {
                a_star: to_f64(fam.a_star()),
            })
        }
        r => r,
    }
}

/// `Psi(x)` of a validated family at a real argument.
pub fn family_psi_real<T: Real>(fam: &ValidatedFamily<T>, x: T, rtol: T) -> Result<T> {
    family_psi(fam, Complex::new(x, T::zero()), rtol).map(|v| v.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(rho: f64) -> ValidatedFamily<f64> {
        validate(&WrightParams::mittag_leffler(rho), false).unwrap()
    }

    #[test]
    fn white_noise_needs_flag() {
        let mut p = WrightParams::<f64>::white_noise();
        let f = validate(&p, false).unwrap();
        assert_eq!(f.k(), 1.0);
        assert!(f.entire());
        p.allow_white_noise = false;
        assert!(matches!(validate(&p, false), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn ml_constants() {
        let f = ml(0.5);
        assert!((f.a_star() - 0.5).abs() < 1e-15);
        assert!((f.k() - 1.0).abs() < 1e-14);
        assert!(f.entire());
    }

    #[test]
    fn reports_each_violation() {
        let p = WrightParams::new(vec![(-3.0, 1.0), (0.5, -1.0)], vec![(-2.0, 1.0)]);
        match validate(&p, false) {
            Err(Error::InvalidParams(v)) => {
                assert!(v.iter().any(|x| x.field == "upper[0]"));
                assert!(v.iter().any(|x| x.field == "upper[1]"));
                assert!(v.iter().any(|x| x.field == "lower[0]"));
            }
            other => panic!("{other:?}"),
        }
        let p = WrightParams::new(vec![], vec![(-2.0, 1.0)]);
        assert!(validate(&p, false).is_err());
    }

    #[test]
    fn require_entire() {
        // a* = 1: valid but not entire.
        let p = WrightParams::new(vec![], vec![(0.0, 1.0)]);
        assert!(validate(&p, false).is_ok());
        assert!(matches!(validate(&p, true), Err(Error::NotEntire { .. })));
    }

    #[test]
    fn exp_series() {
        let v = gwf::<f64>(&[], &[], Complex::new(1.0, 0.0), 1e-14).unwrap();
        assert!((v.re - std::f64::consts::E).abs() < 1e-15);
        let s = gwf_series::<f64>(&[(1.0, 1.0)], &[(1.0, 1.0)], Complex::new(1.0, 0.0), 1e-15).unwrap();
        assert!((s.value.re - std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn value_at_zero() {
        let f = ml(0.9);
        let v = family_psi_real(&f, 0.0, 1e-12).unwrap();
        assert!((v - f.k()).abs() < 1e-12);
        let num = [(0.3f64, 0.7), (1.5, 0.2)];
        let den = [(2.5f64, 0.4)];
        let v = gwf(&num, &den, Complex::new(0.0, 0.0), 1e-12).unwrap();
        let want: f64 = (ln_gamma(0.3f64).unwrap().0 + ln_gamma(1.5).unwrap().0 - ln_gamma(2.5).unwrap().0).exp();
        assert!((v.re - want).abs() < 1e-13 * want);
    }

    #[test]
    fn moments_of_ml_half() {
        let f = ml(0.5);
        assert!((f.moment(0.0).unwrap() - 1.0).abs() < 1e-14);
        let m1 = f.moment(1.0).unwrap();
        assert!((m1 - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn parse_param_file() {
        let p = WrightParams::<f64>::from_json(r#"{"upper": [[0.5, 0.5]], "lower": [[0, 1]]}"#).unwrap();
        assert_eq!(p, WrightParams::mittag_leffler(0.5));
        let e = WrightParams::<f64>::from_json("{\"upper\": [[0.5]],\n \"lower\": []}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = WrightParams::<f64>::from_json("{\"uper\": []}").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }
}
