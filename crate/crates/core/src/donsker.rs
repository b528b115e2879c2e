//! Donsker's delta `delta_a((., eta))`: its T-transform, generalized
//! expectation and the integrability bound behind its existence.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fhdam::FHDensity;
use crate::gwm::GWMeasure;
use crate::real::{lit, to_f64, Real};
use crate::specfun::{try_integrate, Domain, QuadOptions};
use crate::wright::{family_psi, gwf, ValidatedFamily};

/// The pairings `(eta, eta)`, `(phi, phi)` and `(eta, phi)`; the bilinear
/// form is used for complex `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingData<T> {
    pub eta_eta: T,
    pub phi_phi: Complex<T>,
    pub eta_phi: Complex<T>,
}

impl<T: Real> PairingData<T> {
    pub fn new(eta_eta: T, phi_phi: Complex<T>, eta_phi: Complex<T>) -> Result<Self> {
        if !(eta_eta > T::zero()) || !eta_eta.is_finite() {
            return Err(Error::Domain(format!("(eta, eta) must be positive, got {}", to_f64(eta_eta))));
        }
        if phi_phi.im == T::zero() && eta_phi.im == T::zero() {
            let lhs = eta_phi.re * eta_phi.re;
            let rhs = eta_eta * phi_phi.re;
            if lhs > rhs + lit::<T>(1e-12) * rhs.abs().max(lhs) {
                return Err(Error::Domain(
                    "pairings violate Cauchy-Schwarz for a real phi".into(),
                ));
            }
        }
        Ok(Self {
            eta_eta,
            phi_phi,
            eta_phi,
        })
    }

    /// Pairings of `eta` with itself and `phi = 0`.
    pub fn zero_phi(eta_eta: T) -> Result<Self> {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(eta_eta, z, z)
    }

    /// Pairings from coordinates, `phi = phi_re + i phi_im`.
    pub fn from_vectors(eta: &[T], phi_re: &[T], phi_im: &[T]) -> Result<Self> {
        if eta.len() != phi_re.len() || eta.len() != phi_im.len() {
            return Err(Error::Domain("eta and phi must have the same length".into()));
        }
        let mut ee = T::zero();
        let mut pp = Complex::new(T::zero(), T::zero());
        let mut ep = Complex::new(T::zero(), T::zero());
        for i in 0..eta.len() {
            let p = Complex::new(phi_re[i], phi_im[i]);
            ee = ee + eta[i] * eta[i];
            pp = pp + p * p;
            ep = ep + p * eta[i];
        }
        Self::new(ee, pp, ep)
    }

    /// `(1/2)((phi, phi) - (eta, phi)^2 / (eta, eta))`.
    pub fn reduced_argument(&self) -> Complex<T> {
        (self.phi_phi - self.eta_phi * self.eta_phi / self.eta_eta) * lit::<T>(0.5)
    }
}

/// `2 b_j + beta_j > 0` for every lower pair, and the family is entire.
pub fn check_donsker_params<T: Real>(fam: &ValidatedFamily<T>) -> bool {
    fam.entire()
        && fam
            .params()
            .lower
            .iter()
            .all(|&(b, beta)| lit::<T>(2.0) * b + beta > T::zero())
}

fn require<T: Real>(fam: &ValidatedFamily<T>) -> Result<()> {
    if !fam.entire() {
        return Err(Error::Precondition(format!(
            "Donsker's delta needs an entire family (a* = {})",
            to_f64(fam.a_star())
        )));
    }
    for (j, &(b, beta)) in fam.params().lower.iter().enumerate() {
        if !(lit::<T>(2.0) * b + beta > T::zero()) {
            return Err(Error::Precondition(format!(
                "2 b_j + beta_j > 0 fails at lower[{j}] (b = {}, beta = {})",
                to_f64(b),
                to_f64(beta)
            )));
        }
    }
    Ok(())
}

fn half_shifted<T: Real>(fam: &ValidatedFamily<T>) -> (Vec<(T, T)>, Vec<(T, T)>) {
    let half = lit::<T>(0.5);
    let p = fam.params();
    let num = p.lower.iter().map(|&(b, w)| (b + half * w, w)).collect();
    let den = p.upper.iter().map(|&(a, w)| (a + half * w, w)).collect();
    (num, den)
}

fn prefactor<T: Real>(fam: &ValidatedFamily<T>, eta_eta: T) -> T {
    (fam.k() * (T::TAU() * eta_eta).sqrt()).recip()
}

/// T-transform of `delta((., eta))` at `phi`: the half-shifted series
/// `sum_k prod Gamma(b + beta(1/2 + k)) / prod Gamma(a + alpha(1/2 + k)) (-z)^k / k!`
/// at `z = ((phi, phi) - (eta, phi)^2 / (eta, eta)) / 2`, over `K sqrt(2 pi (eta, eta))`.
pub fn donsker_t_transform<T: Real>(fam: &ValidatedFamily<T>, pd: &PairingData<T>) -> Result<Complex<T>> {
    require(fam)?;
    let (num, den) = half_shifted(fam);
    let v = gwf(&num, &den, -pd.reduced_argument(), lit(1e-13))?;
    Ok(v * prefactor(fam, pd.eta_eta))
}

/// Generalized expectation, the T-transform at `phi = 0`.
pub fn donsker_expectation<T: Real>(fam: &ValidatedFamily<T>, eta_eta: T) -> Result<T> {
    require(fam)?;
    let pd = PairingData::zero_phi(eta_eta)?;
    let (num, den) = half_shifted(fam);
    let mut ln = T::zero();
    for &(b, _) in &num {
        ln = ln + crate::specfun::ln_gamma(b)?.0;
    }
    for &(a, _) in &den {
        let (lg, sign) = crate::specfun::ln_gamma(a)?;
        if sign < T::zero() {
            return Err(Error::Domain("negative Gamma factor in the expectation".into()));
        }
        ln = ln - lg;
    }
    Ok(ln.exp() * prefactor(fam, pd.eta_eta))
}

/// `E[delta_a((., eta))]` from the Gaussian mixture
/// `(2 pi (eta, eta))^{-1/2} E[tau^{-1/2} exp(-a^2 / (2 tau (eta, eta)))]`.
pub fn donsker_at_a<T: Real>(mixing: &FHDensity<T>, eta_eta: T, a: T) -> Result<T> {
    require(mixing.family())?;
    let pd = PairingData::zero_phi(eta_eta)?;
    let c = (T::TAU() * pd.eta_eta).sqrt().recip();
    let two = lit::<T>(2.0);
    if mixing.is_point_mass() {
        return Ok(c * (-a * a / (two * eta_eta)).exp());
    }
    let v = mixing.integrate_sqrt(|u: T| Ok(two * (-a * a / (two * u * u * eta_eta)).exp()), lit(1e-10))?;
    Ok(c * v)
}

/// The same quantity from the Fox-H density of `mu^1`:
/// `(eta, eta)^{-1/2} rho_1(a / sqrt((eta, eta)))`.
pub fn donsker_at_a_foxh<T: Real>(mixing: &FHDensity<T>, eta_eta: T, a: T) -> Result<T> {
    require(mixing.family())?;
    let s = eta_eta.sqrt();
    let mu = GWMeasure::new(mixing.clone(), 1)?;
    Ok(mu.density_foxh(&[a / s])? / s)
}

/// T-transform of `delta_a((., eta))` at `phi` by quadrature of the mixture
/// integrand `exp(i a (eta, phi) / (eta, eta)) (2 pi (eta, eta))^{-1/2}
/// E[tau^{-1/2} exp(-tau z - a^2 / (2 tau (eta, eta)))]`, `z` the reduced argument.
/// Only the `a = 0` case has a closed form to compare against.
pub fn donsker_t_transform_at_a<T: Real>(mixing: &FHDensity<T>, pd: &PairingData<T>, a: T) -> Result<Complex<T>> {
    require(mixing.family())?;
    let z = pd.reduced_argument();
    let two = lit::<T>(2.0);
    let phase = (Complex::new(T::zero(), a) * pd.eta_phi / pd.eta_eta).exp();
    let c = (T::TAU() * pd.eta_eta).sqrt().recip();
    let weight = |tau: T| (-z * tau - Complex::new(a * a / (two * tau * pd.eta_eta), T::zero())).exp();
    let v = if mixing.is_point_mass() {
        weight(T::one())
    } else {
        mixing.integrate_sqrt(|u: T| Ok(weight(u * u) * two), lit(1e-10))?
    };
    Ok(phase * v * c)
}

/// `sqrt(2 pi / (eta, eta)) int H(r) r^{-1/2} exp(M^2 r / 2) dr`, an upper
/// bound on `int |Psi(-z(x, eta, phi))| dx` over `|phi| < M`.
pub fn integrability_bound<T: Real>(mixing: &FHDensity<T>, m: T, eta_eta: T) -> Result<T> {
    require(mixing.family())?;
    if !(m > T::zero()) {
        return Err(Error::Domain("M must be positive".into()));
    }
    let pd = PairingData::zero_phi(eta_eta)?;
    let fam = mixing.family();
    let pre = (T::TAU() / pd.eta_eta).sqrt() * fam.k();
    let half_m2 = lit::<T>(0.5) * m * m;
    if mixing.is_point_mass() {
        return Ok(pre * half_m2.exp());
    }
    let two = lit::<T>(2.0);
    let opts = QuadOptions::new(lit::<T>(1e-9)).initial_panels(8);
    // Integrate in u = sqrt(r), widening the range until the moment bound on
    // what lies beyond is negligible. Far-tail density values are contour
    // noise, so the stretches themselves cannot tell when to stop.
    let f = |u: T| -> Result<T> { Ok(two * (half_m2 * u * u).exp() * mixing.density(u * u)?) };
    let mut hi = mixing.upper_tail_bound(lit(1e-6))?;
    let mut total = try_integrate(f, Domain::Finite(T::zero(), hi.sqrt()), &opts)?.value;
    for _ in 0..40 {
        let tail = ln_weighted_tail(fam, half_m2, hi)?.exp();
        if tail.is_finite() && tail <= lit::<T>(1e-12) * total {
            return Ok(pre * (total + tail));
        }
        let next = hi * two;
        total = total + try_integrate(f, Domain::Finite(hi.sqrt(), next.sqrt()), &opts)?.value;
        hi = next;
    }
    Err(Error::Convergence {
        what: "integrability bound: integral not finite at this M",
        best_estimate: to_f64(total),
        error_estimate: f64::INFINITY,
    })
}

/// Log of an upper bound on `E[tau^{-1/2} e^{c tau}; tau > x]`:
/// `min_j x^{-1/2-j} sum_k c^k m_{k+j} / k!` with `m_n` the mixing moments.
fn ln_weighted_tail<T: Real>(fam: &ValidatedFamily<T>, c: T, x: T) -> Result<T> {
    let ln_m = |n: usize| -> Result<T> {
        let (l, sign) = fam.ln_gamma_ratio(T::from_usize(n + 1).unwrap())?;
        Ok(if sign > T::zero() { l - fam.ln_k() } else { T::infinity() })
    };
    let (lc, lx) = (c.ln(), x.ln());
    let mut best = T::infinity();
    for j in 1..2000usize {
        // log-sum-exp over k, stopping once terms are far below the peak and falling.
        let mut peak = T::neg_infinity();
        let mut acc = T::zero();
        let mut prev = T::neg_infinity();
        let mut done = false;
        for k in 0..100_000usize {
            let t = T::from_usize(k).unwrap() * lc + ln_m(k + j)? - crate::specfun::ln_gamma(T::from_usize(k + 1).unwrap())?.0;
            if !t.is_finite() {
                break;
            }
            if t > peak {
                acc = acc * (peak - t).exp() + T::one();
                peak = t;
            } else {
                acc = acc + (t - peak).exp();
            }
            if k > 10 && t < prev && t < peak - lit(40.0) {
                done = true;
                break;
            }
            prev = t;
        }
        if !done {
            continue;
        }
        let b = peak + acc.ln() - (lit::<T>(0.5) + T::from_usize(j).unwrap()) * lx;
        if b < best {
            best = b;
        } else if b > best + lit(5.0) {
            break;
        }
    }
    Ok(best)
}

/// `int_R |Psi(-z(x, eta, phi))| dx` by direct quadrature, the left side of
/// the integrability bound.
pub fn integrability_lhs<T: Real>(fam: &ValidatedFamily<T>, pd: &PairingData<T>) -> Result<T> {
    require(fam)?;
    let half = lit::<T>(0.5);
    let opts = QuadOptions::new(lit::<T>(1e-8)).initial_panels(8);
    let r = try_integrate(
        |x: T| {
            let z = Complex::new(half * x * x * pd.eta_eta, T::zero()) + pd.phi_phi * half + pd.eta_phi * x;
            Ok(family_psi(fam, -z, lit(1e-12))?.norm())
        },
        Domain::RealLine,
        &opts,
    )?;
    Ok(r.value)
}
