//! Finite-dimensional generalized Wright measures: elliptical Gaussian mixtures
//! `X = sqrt(tau) Z` with `tau` drawn from the mixing density.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fhdam::FHDensity;
use crate::foxh::{foxh_eval_with, FoxHOptions, FoxHParams};
use crate::real::{lit, to_f64, Real};
use crate::specfun::rng::RngState;
use crate::wright::{family_psi, family_psi_real, ValidatedFamily};

/// Rows drawn per RNG substream in [`GWMeasure::sample_batch`].
pub const SAMPLE_CHUNK: usize = 4096;

/// `N x d` sample matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix<T> {
    pub n: usize,
    pub d: usize,
    pub data: Vec<T>,
}

impl<T: Real> SampleMatrix<T> {
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.d)
    }

    /// CSV with header `x1,...,xd` and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.n * self.d * 25 + 16);
        let header: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        s.push_str(&header.join(","));
        s.push('\n');
        for row in self.rows() {
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&format!("{:.16e}", to_f64(*v)));
            }
            s.push('\n');
        }
        s
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

/// `(2n - 1)!!` with `(-1)!! = 1`.
pub fn double_factorial_odd<T: Real>(n: u32) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_u32(2 * k - 1).unwrap())
}

/// The measure `mu^d` of a family in dimension `d`.
#[derive(Debug)]
pub struct GWMeasure<T> {
    mixing: FHDensity<T>,
    d: usize,
}

impl<T: Real> Clone for GWMeasure<T> {
    fn clone(&self) -> Self {
        Self {
            mixing: self.mixing.clone(),
            d: self.d,
        }
    }
}

impl<T: Real> GWMeasure<T> {
    pub fn new(mixing: FHDensity<T>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension d must be >= 1".into()));
        }
        Ok(Self { mixing, d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn mixing(&self) -> &FHDensity<T> {
        &self.mixing
    }

    pub fn family(&self) -> &ValidatedFamily<T> {
        self.mixing.family()
    }

    fn check_dim(&self, v: &[T], what: &str) -> Result<()> {
        if v.len() != self.d {
            return Err(Error::Domain(format!("{what} has length {}, expected d = {}", v.len(), self.d)));
        }
        Ok(())
    }

    /// Characteristic function `(1/K) Psi(-(y, y) / 2)`.
    pub fn char_fn(&self, y: &[T]) -> Result<T> {
        self.check_dim(y, "y")?;
        let fam = self.family();
        Ok(family_psi_real(fam, -lit::<T>(0.5) * dot(y, y), lit(1e-12))? / fam.k())
    }

    /// Laplace transform `E[exp(lambda (x, phi))] = (1/K) Psi(lambda^2 (phi, phi) / 2)`.
    pub fn laplace_fn(&self, lambda: T, phi: &[T]) -> Result<T> {
        self.check_dim(phi, "phi")?;
        let fam = self.family();
        Ok(family_psi_real(fam, lit::<T>(0.5) * lambda * lambda * dot(phi, phi), lit(1e-12))? / fam.k())
    }

    /// `E[prod x_i^{k_i}]`; zero if any `k_i` is odd.
    pub fn mixed_moment(&self, k: &[u32]) -> Result<T> {
        if k.len() != self.d {
            return Err(Error::Domain(format!("multi-index has length {}, expected {}", k.len(), self.d)));
        }
        if k.iter().any(|&ki| ki % 2 == 1) {
            return Ok(T::zero());
        }
        let n: u32 = k.iter().map(|&ki| ki / 2).sum();
        let gauss = k.iter().fold(T::one(), |acc, &ki| acc * double_factorial_odd::<T>(ki / 2));
        Ok(self.mixing.moment(n)? * gauss)
    }

    /// Check `2 (b_j + beta_j) > beta_j d` for all `j`.
    pub fn density_admissible(&self) -> Result<()> {
        let d = T::from_usize(self.d).unwrap();
        for (j, &(b, beta)) in self.family().params().lower.iter().enumerate() {
            if !(lit::<T>(2.0) * (b + beta) > beta * d) {
                return Err(Error::Unsupported(format!(
                    "no density in dimension d = {}: 2(b_j + beta_j) > beta_j d fails at j = {j} (b = {}, beta = {})",
                    self.d,
                    to_f64(b),
                    to_f64(beta)
                )));
            }
        }
        Ok(())
    }

    fn gauss_norm(&self) -> T {
        T::TAU().powf(-lit::<T>(0.5) * T::from_usize(self.d).unwrap())
    }

    /// Density as a function of `r2 = (x, x)`, by the Gaussian mixture integral.
    pub fn density_radial(&self, r2: T, rtol: T) -> Result<T> {
        self.density_admissible()?;
        let half_d = lit::<T>(0.5) * T::from_usize(self.d).unwrap();
        let c = self.gauss_norm();
        if self.mixing.is_point_mass() {
            return Ok(c * (-lit::<T>(0.5) * r2).exp());
        }
        // tau = u^2 removes the tau^{-1/2} endpoint singularity in d = 1.
        let two = lit::<T>(2.0);
        self.mixing.integrate_sqrt(
            |u: T| {
                let tau = u * u;
                Ok(two * c * u * tau.powf(-half_d) * (-r2 / (two * tau)).exp())
            },
            rtol,
        )
    }

    /// Density at `x` (mixture route).
    pub fn density(&self, x: &[T]) -> Result<T> {
        self.check_dim(x, "x")?;
        self.density_radial(dot(x, x), lit(1e-9))
    }

    /// Density at `x` from the Fox-H closed form
    /// `(2pi)^{-d/2} / K H^{m+1,0}_{p,m+1}[(x,x)/2 | (a_i + alpha_i(1 - d/2), alpha_i);
    /// (0,1), (b_j + beta_j(1 - d/2), beta_j)]`.
    pub fn density_foxh(&self, x: &[T]) -> Result<T> {
        self.check_dim(x, "x")?;
        self.density_admissible()?;
        let r2 = dot(x, x);
        if !(r2 > T::zero()) {
            return Err(Error::Domain("Fox-H density route needs x != 0".into()));
        }
        let shift = T::one() - lit::<T>(0.5) * T::from_usize(self.d).unwrap();
        let p = self.family().params();
        let upper = p.upper.iter().map(|&(a, w)| (a + w * shift, w)).collect();
        let mut lower = vec![(T::zero(), T::one())];
        lower.extend(p.lower.iter().map(|&(b, w)| (b + w * shift, w)));
        let m = lower.len();
        let params = FoxHParams::new(m, 0, upper, lower)?;
        let e = foxh_eval_with(
            &params,
            Complex::new(lit::<T>(0.5) * r2, T::zero()),
            &FoxHOptions::new(lit(1e-10)).saddle(),
        )?;
        Ok(self.gauss_norm() * e.value.re / self.family().k())
    }

    /// `N` draws of `sqrt(tau) Z`. Rows are generated in chunks of
    /// [`SAMPLE_CHUNK`], each from its own substream keyed by one draw from
    /// `rng`, so the output does not depend on the thread count.
    pub fn sample_batch(&self, rng: &mut RngState, n: usize) -> Result<SampleMatrix<T>> {
        if n == 0 {
            return Err(Error::Domain("sample size must be >= 1".into()));
        }
        if !self.mixing.has_sampler() {
            return Err(Error::State("mixing sampler not built; call build_sampler first".into()));
        }
        let key = rng.next_u64();
        let d = self.d;
        let mut data = vec![T::zero(); n * d];
        data.par_chunks_mut(SAMPLE_CHUNK * d)
            .enumerate()
            .try_for_each(|(c, chunk)| -> Result<()> {
                let mut r = RngState::substream(key, c as u64);
                for row in chunk.chunks_mut(d) {
                    let s = self.mixing.sample(&mut r)?.sqrt();
                    for v in row.iter_mut() {
                        *v = s * r.standard_normal::<T>();
                    }
                }
                Ok(())
            })?;
        Ok(SampleMatrix { n, d, data })
    }

    /// T-transform of `exp(i x (omega, eta))`: `(1/K) Psi(-x^2 (eta,eta)/2 - (phi,phi)/2 - x (phi,eta))`
    /// with `phi = phi_re + i phi_im` and the bilinear pairing.
    pub fn t_transform_exp(&self, x: T, eta: &[T], phi_re: &[T], phi_im: &[T]) -> Result<Complex<T>> {
        self.check_dim(eta, "eta")?;
        self.check_dim(phi_re, "phi_re")?;
        self.check_dim(phi_im, "phi_im")?;
        let fam = self.family();
        if !fam.entire() {
            return Err(Error::NotEntire {
                a_star: to_f64(fam.a_star()),
            });
        }
        let phi: Vec<Complex<T>> = phi_re.iter().zip(phi_im).map(|(&a, &b)| Complex::new(a, b)).collect();
        let phi_phi = phi.iter().fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p * p);
        let phi_eta = phi.iter().zip(eta).fold(Complex::new(T::zero(), T::zero()), |acc, (p, &e)| acc + p * e);
        let half = lit::<T>(0.5);
        let z = -(phi_phi * half) - phi_eta * x - Complex::new(half * x * x * dot(eta, eta), T::zero());
        Ok(family_psi(fam, z, lit(1e-12))? / fam.k())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wright::{validate, WrightParams};

    fn gauss(d: usize) -> GWMeasure<f64> {
        let f = FHDensity::new(validate(&WrightParams::white_noise(), false).unwrap())
            .unwrap()
            .build_sampler(1e-8)
            .unwrap();
        GWMeasure::new(f, d).unwrap()
    }

    #[test]
    fn gaussian_closed_forms() {
        let g = gauss(1);
        assert!((g.char_fn(&[1.0]).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((g.laplace_fn(1.0, &[1.0]).unwrap() - 0.5f64.exp()).abs() < 1e-15);
        assert_eq!(g.mixed_moment(&[4]).unwrap(), 3.0);
        assert_eq!(g.mixed_moment(&[3]).unwrap(), 0.0);
        let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((g.density(&[0.0]).unwrap() - c).abs() < 1e-15);
        assert!((g.density_foxh(&[1.0]).unwrap() - c * (-0.5f64).exp()).abs() < 1e-10 * c);
    }

    #[test]
    fn dimension_hypothesis() {
        let f = FHDensity::new(validate(&WrightParams::mittag_leffler(0.5), false).unwrap()).unwrap();
        let m = GWMeasure::new(f, 2).unwrap();
        match m.density(&[0.5, 0.5]) {
            Err(Error::Unsupported(msg)) => assert!(msg.contains("j = 0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_format() {
        let s = SampleMatrix {
            n: 1,
            d: 2,
            data: vec![1.0f64, -0.1],
        };
        assert_eq!(s.to_csv(), "x1,x2\n1.0000000000000000e0,-1.0000000000000001e-1\n");
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd::<f64>(0), 1.0);
        assert_eq!(double_factorial_odd::<f64>(3), 15.0);
    }
}
