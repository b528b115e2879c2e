//! Fox-H densities with all moments: the mixing law of a measure family.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::foxh::{foxh_eval_with, FoxHOptions, FoxHParams};
use crate::real::{lit, to_f64, Real};
use crate::specfun::quad::{try_integrate, Domain, QuadOptions, QuadValue};
use crate::specfun::rng::RngState;
use crate::wright::{family_psi_real, ValidatedFamily};

/// Tolerance used for pointwise density values inside quadratures.
pub const DENSITY_RTOL: f64 = 1e-11;
/// Accuracy of the density and CDF values behind the sampling table.
pub const TABLE_RTOL: f64 = 1e-9;
const SCAN_NODES: usize = 512;
const REFINE_MASS: f64 = 1.0 / 1024.0;
const EDGE_DENSITY: f64 = 1e-12;

/// Tabulated CDF with a monotone cubic inverse.
#[derive(Debug, Clone)]
pub struct CdfTable<T> {
    nodes: Vec<T>,
    cdf: Vec<T>,
    // Inverse: ln(node) as a piecewise-cubic Hermite function of the CDF value.
    u: Vec<T>,
    y: Vec<T>,
    slope: Vec<T>,
}

impl<T: Real> CdfTable<T> {
    fn new(nodes: Vec<T>, cdf: Vec<T>) -> Result<Self> {
        let mut u = Vec::with_capacity(nodes.len());
        let mut y = Vec::with_capacity(nodes.len());
        for (&x, &f) in nodes.iter().zip(&cdf) {
            if u.last().is_none_or(|&last| f > last) {
                u.push(f);
                y.push(x.ln());
            }
        }
        if u.len() < 2 {
            return Err(Error::Construction("CDF table is flat".into()));
        }
        let slope = pchip_slopes(&u, &y);
        Ok(Self { nodes, cdf, u, y, slope })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.cdf
    }

    /// Quantile for `p` in (0, 1), clamped to the tabulated range.
    pub fn quantile(&self, p: T) -> T {
        let n = self.u.len();
        if p <= self.u[0] {
            return self.y[0].exp();
        }
        if p >= self.u[n - 1] {
            return self.y[n - 1].exp();
        }
        let i = self.u.partition_point(|&v| v <= p) - 1;
        let h = self.u[i + 1] - self.u[i];
        let t = (p - self.u[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = lit::<T>(2.0);
        let three = lit::<T>(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        (h00 * self.y[i] + h10 * h * self.slope[i] + h01 * self.y[i + 1] + h11 * h * self.slope[i + 1]).exp()
    }

    /// Tabulated CDF at `x`, linear in `ln x` between nodes.
    pub fn cdf_at(&self, x: T) -> T {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return self.cdf[0];
        }
        if x >= self.nodes[n - 1] {
            return self.cdf[n - 1];
        }
        let i = self.nodes.partition_point(|&v| v <= x) - 1;
        let w = (x.ln() - self.nodes[i].ln()) / (self.nodes[i + 1].ln() - self.nodes[i].ln());
        self.cdf[i] + w * (self.cdf[i + 1] - self.cdf[i])
    }

    /// Two-column CSV `node,cdf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("node,cdf\n");
        for (x, f) in self.nodes.iter().zip(&self.cdf) {
            s.push_str(&format!("{:.16e},{:.16e}\n", to_f64(*x), to_f64(*f)));
        }
        s
    }
}

// Fritsch-Carlson slopes for monotone data.
fn pchip_slopes<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let h: Vec<T> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let delta: Vec<T> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![T::zero(); n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    for i in 1..n - 1 {
        let (d0, d1) = (delta[i - 1], delta[i]);
        if d0 * d1 <= T::zero() {
            d[i] = T::zero();
        } else {
            let w1 = two * h[i] + h[i - 1];
            let w2 = h[i] + two * h[i - 1];
            d[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    let end = |h0: T, h1: T, d0: T, d1: T| -> T {
        let s = ((two * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= T::zero() {
            T::zero()
        } else if d0 * d1 <= T::zero() && s.abs() > (three * d0).abs() {
            three * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

#[derive(Debug, Clone)]
enum Sampler<T> {
    PointMass,
    Table(CdfTable<T>),
}

/// Mixing density `rho(tau) = (1/K) H^{m,0}_{p,m}[tau | (a_i, alpha_i); (b_j, beta_j)]`.
///
/// The Gaussian family has a unit point mass as mixing law; it has no density
/// but moments, Laplace transform and sampling still work.
#[derive(Debug)]
pub struct FHDensity<T> {
    fam: ValidatedFamily<T>,
    density_params: Option<FoxHParams<T>>,
    cdf_params: Option<FoxHParams<T>>,
    nonneg_checked: bool,
    max_density: Option<T>,
    sampler: Option<Sampler<T>>,
    cache: Mutex<HashMap<u64, T>>,
}

impl<T: Real> Clone for FHDensity<T> {
    fn clone(&self) -> Self {
        Self {
            fam: self.fam.clone(),
            density_params: self.density_params.clone(),
            cdf_params: self.cdf_params.clone(),
            nonneg_checked: self.nonneg_checked,
            max_density: self.max_density,
            sampler: self.sampler.clone(),
            cache: Mutex::new(self.cache.lock().map(|c| c.clone()).unwrap_or_default()),
        }
    }
}

impl<T: Real> FHDensity<T> {
    pub fn new(fam: ValidatedFamily<T>) -> Result<Self> {
        let (density_params, cdf_params) = if fam.is_white_noise() {
            (None, None)
        } else {
            let p = fam.params();
            let m = p.lower.len();
            let dens = FoxHParams::new(m, 0, p.upper.clone(), p.lower.clone())?;
            let mut up = vec![(T::zero(), T::one())];
            up.extend(p.upper.iter().copied());
            let mut low = p.lower.clone();
            low.push((-T::one(), T::one()));
            let cdf = FoxHParams::new(m, 1, up, low)?;
            (Some(dens), Some(cdf))
        };
        Ok(Self {
            fam,
            density_params,
            cdf_params,
            nonneg_checked: false,
            max_density: None,
            sampler: None,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn family(&self) -> &ValidatedFamily<T> {
        &self.fam
    }

    /// True for the Gaussian family, whose mixing law is a unit point mass.
    pub fn is_point_mass(&self) -> bool {
        self.fam.is_white_noise()
    }

    pub fn nonneg_checked(&self) -> bool {
        self.nonneg_checked
    }

    pub fn has_sampler(&self) -> bool {
        self.sampler.is_some()
    }

    pub fn cdf_table(&self) -> Option<&CdfTable<T>> {
        match &self.sampler {
            Some(Sampler::Table(t)) => Some(t),
            _ => None,
        }
    }

    fn point_mass_error(&self) -> Error {
        Error::Unsupported("the Gaussian family mixes over a point mass and has no density".into())
    }

    /// Density at `tau > 0` to relative accuracy `rtol` with diagnostics-based clamping.
    pub fn density_rtol(&self, tau: T, rtol: T) -> Result<T> {
        if !(tau > T::zero()) || !tau.is_finite() {
            return Err(Error::Domain(format!("density needs tau > 0, got {}", to_f64(tau))));
        }
        let params = self.density_params.as_ref().ok_or_else(|| self.point_mass_error())?;
        let opts = FoxHOptions::new(rtol).saddle();
        let e = foxh_eval_with(params, Complex::new(tau, T::zero()), &opts)?;
        let v = e.value.re / self.fam.k();
        if v >= T::zero() {
            return Ok(v);
        }
        let noise = lit::<T>(10.0) * (e.abs_error + e.tail_bound) / self.fam.k();
        let tol = match self.max_density {
            Some(m) => noise.max(lit::<T>(1e-10) * m),
            None => noise,
        };
        if -v <= tol {
            Ok(T::zero())
        } else {
            Err(Error::NegativeDensity {
                tau: to_f64(tau),
                value: to_f64(v),
            })
        }
    }

    /// Density at `tau > 0`. Values are memoized.
    pub fn density(&self, tau: T) -> Result<T> {
        let key = to_f64(tau).to_bits();
        if let Some(v) = self.cache.lock().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(v);
        }
        let v = self.density_rtol(tau, lit(DENSITY_RTOL))?;
        if let Ok(mut c) = self.cache.lock() {
            c.insert(key, v);
        }
        Ok(v)
    }

    /// `P(tau <= x)` from the Fox-H form of the integrated density.
    pub fn cdf(&self, x: T) -> Result<T> {
        self.cdf_rtol(x, lit(1e-10))
    }

    /// `P(tau <= x)` to relative accuracy `rtol`.
    pub fn cdf_rtol(&self, x: T, rtol: T) -> Result<T> {
        if self.is_point_mass() {
            return Ok(if x >= T::one() { T::one() } else { T::zero() });
        }
        if !(x > T::zero()) {
            return Ok(T::zero());
        }
        let params = self.cdf_params.as_ref().expect("non-degenerate family");
        let opts = FoxHOptions::new(rtol).saddle();
        let e = foxh_eval_with(params, Complex::new(x, T::zero()), &opts)?;
        Ok((x * e.value.re / self.fam.k()).max(T::zero()).min(T::one()))
    }

    /// Integer moment `E[tau^l]`.
    pub fn moment(&self, l: u32) -> Result<T> {
        self.fam.moment(T::from_u32(l).unwrap())
    }

    /// Laplace transform `E[exp(-s tau)] = (1/K) Psi(-s)`.
    pub fn laplace(&self, s: T) -> Result<T> {
        if s < T::zero() && !self.fam.entire() {
            return Err(Error::NotEntire {
                a_star: to_f64(self.fam.a_star()),
            });
        }
        Ok(family_psi_real(&self.fam, -s, lit(1e-12))? / self.fam.k())
    }

    /// A point `x` with `P(tau > x) <= eps`, from Markov bounds on all integer moments.
    pub fn upper_tail_bound(&self, eps: T) -> Result<T> {
        if self.is_point_mass() {
            return Ok(T::one());
        }
        let le = eps.ln();
        let mut best = T::infinity();
        for l in 1..=2000u32 {
            let (lr, sign) = self.fam.ln_gamma_ratio(T::from_u32(l + 1).unwrap())?;
            if sign <= T::zero() {
                continue;
            }
            let lm = lr - self.fam.ln_k();
            best = best.min((lm - le) / T::from_u32(l).unwrap());
        }
        Ok(best.exp())
    }

    /// A point `x` with `P(tau < x) <= eps`, from Markov bounds on negative moments.
    pub fn lower_tail_bound(&self, eps: T) -> Result<T> {
        if self.is_point_mass() {
            return Ok(T::one());
        }
        let lo = self
            .fam
            .params()
            .lower
            .iter()
            .map(|&(b, w)| -b / w)
            .fold(T::neg_infinity(), T::max);
        let s_max = T::one() - lo;
        let le = eps.ln();
        let mut best = T::neg_infinity();
        for k in 1..32 {
            let s = s_max * T::from_u32(k).unwrap() / lit(32.0);
            let Ok((lr, sign)) = self.fam.ln_gamma_ratio(T::one() - s) else {
                continue;
            };
            if sign <= T::zero() || !lr.is_finite() {
                continue;
            }
            let lm = lr - self.fam.ln_k();
            best = best.max((le - lm) / s);
        }
        if best == T::neg_infinity() {
            return Err(Error::Construction("no negative moment available for the lower tail".into()));
        }
        Ok(best.exp())
    }

    /// Upper end of the quadrature range used by [`expect`](Self::expect).
    pub fn support_cutoff(&self) -> Result<T> {
        self.upper_tail_bound(lit(1e-24))
    }

    /// `E[g(tau)]` by quadrature of `g * density` over `[0, cutoff]`.
    pub fn expect<V, G>(&self, g: G, rtol: T) -> Result<V>
    where
        V: QuadValue<T>,
        G: Fn(T) -> Result<V>,
    {
        if self.is_point_mass() {
            return g(T::one());
        }
        let hi = self.support_cutoff()?;
        let opts = QuadOptions::new(rtol).initial_panels(8);
        let r = try_integrate(
            |tau: T| {
                let rho = self.density(tau)?;
                if rho == T::zero() {
                    return Ok(V::zero());
                }
                Ok(g(tau)? * rho)
            },
            Domain::Finite(T::zero(), hi),
            &opts,
        )?;
        Ok(r.value)
    }

    /// `int_0^sqrt(cutoff) f(u) rho(u^2) du`, i.e. `E[g(tau)]` for
    /// `f(u) = 2 u g(u^2)`. Suits weights like `tau^{-1/2}` that are singular at 0.
    pub fn integrate_sqrt<V, F>(&self, f: F, rtol: T) -> Result<V>
    where
        V: QuadValue<T>,
        F: Fn(T) -> Result<V>,
    {
        if self.is_point_mass() {
            return Err(self.point_mass_error());
        }
        let hi = self.support_cutoff()?.sqrt();
        let opts = QuadOptions::new(rtol).initial_panels(8);
        let r = try_integrate(
            |u: T| {
                let rho = self.density(u * u)?;
                if rho == T::zero() {
                    return Ok(V::zero());
                }
                Ok(f(u)? * rho)
            },
            Domain::Finite(T::zero(), hi),
            &opts,
        )?;
        Ok(r.value)
    }

    /// Tabulate the CDF and prepare inverse-CDF sampling. The table covers
    /// `[q_lo, q_hi]` with at most `target_tail` mass outside on each side.
    pub fn build_sampler(mut self, target_tail: T) -> Result<Self> {
        if self.is_point_mass() {
            self.sampler = Some(Sampler::PointMass);
            self.nonneg_checked = true;
            return Ok(self);
        }
        let edge: T = lit(EDGE_DENSITY);
        let mut hi = self.upper_tail_bound(target_tail)?;
        let mut lo = self.lower_tail_bound(target_tail)?.min(hi * lit(0.5));
        let mut ok = false;
        for _ in 0..80 {
            if self.density(hi)? * hi < edge && T::one() - self.cdf(hi)? <= target_tail {
                ok = true;
                break;
            }
            hi = hi * lit(1.5);
        }
        if !ok {
            return Err(Error::Construction("upper tail bracketing failed".into()));
        }
        ok = false;
        for _ in 0..200 {
            // Near zero the density may stay finite, so only the mass matters.
            if self.cdf(lo)? <= target_tail {
                ok = true;
                break;
            }
            lo = lo * lit(0.5);
        }
        if !ok {
            return Err(Error::Construction("lower tail bracketing failed".into()));
        }
        // The moment bound is loose; move up while the mass below stays small.
        for _ in 0..60 {
            let up = lo * lit(2.0);
            if up >= hi * lit(0.5) || self.cdf(up)? > target_tail {
                break;
            }
            lo = up;
        }

        let (llo, lhi) = (lo.ln(), hi.ln());
        let step = (lhi - llo) / T::from_usize(SCAN_NODES - 1).unwrap();
        let scan: Vec<T> = (0..SCAN_NODES)
            .map(|i| (llo + step * T::from_usize(i).unwrap()).exp())
            .collect();
        let dens: Vec<Result<T>> = scan
            .par_iter()
            .map(|&t| self.density_rtol(t, lit(TABLE_RTOL)))
            .collect();
        let mut dmax = T::zero();
        let mut values = Vec::with_capacity(SCAN_NODES);
        for d in dens {
            let v = match d {
                Ok(v) => v,
                // Negative beyond the quadrature noise: checked against the
                // global tolerance below.
                Err(Error::NegativeDensity { value, .. }) => lit(value),
                Err(e) => return Err(e),
            };
            dmax = dmax.max(v);
            values.push(v);
        }
        let tol_neg = lit::<T>(1e-10) * dmax;
        for (t, v) in scan.iter().zip(&values) {
            if *v < -tol_neg {
                return Err(Error::NegativeDensity {
                    tau: to_f64(*t),
                    value: to_f64(*v),
                });
            }
        }
        self.max_density = Some(dmax);
        self.nonneg_checked = true;

        let cdf_of = |xs: &[T]| -> Result<Vec<T>> { xs.par_iter().map(|&x| self.cdf_rtol(x, lit(TABLE_RTOL))).collect() };
        let f = cdf_of(&scan)?;
        let mut nodes = Vec::with_capacity(SCAN_NODES * 2);
        let mut extra = Vec::new();
        for i in 0..SCAN_NODES - 1 {
            nodes.push(scan[i]);
            let mass = f[i + 1] - f[i];
            let k = (to_f64(mass) / REFINE_MASS).ceil() as usize;
            if k > 1 {
                let (a, b) = (scan[i].ln(), scan[i + 1].ln());
                for j in 1..k {
                    let x = (a + (b - a) * T::from_usize(j).unwrap() / T::from_usize(k).unwrap()).exp();
                    nodes.push(x);
                    extra.push(x);
                }
            }
        }
        nodes.push(scan[SCAN_NODES - 1]);
        let fx = cdf_of(&extra)?;
        let mut lookup: HashMap<u64, T> = scan.iter().zip(&f).map(|(x, v)| (to_f64(*x).to_bits(), *v)).collect();
        lookup.extend(extra.iter().zip(&fx).map(|(x, v)| (to_f64(*x).to_bits(), *v)));
        let mut cdf: Vec<T> = nodes.iter().map(|x| lookup[&to_f64(*x).to_bits()]).collect();
        for i in 1..cdf.len() {
            if cdf[i] < cdf[i - 1] - lit(1e-10) {
                return Err(Error::Construction(format!(
                    "tabulated CDF decreases at node {}",
                    to_f64(nodes[i])
                )));
            }
            cdf[i] = cdf[i].max(cdf[i - 1]);
        }
        let slack: T = lit(1e-10);
        if cdf[0] > target_tail + slack || cdf[cdf.len() - 1] < T::one() - target_tail - slack {
            return Err(Error::Construction("tabulated CDF misses the tail targets".into()));
        }
        self.sampler = Some(Sampler::Table(CdfTable::new(nodes, cdf)?));
        Ok(self)
    }

    /// Draw one value from the mixing law.
    pub fn sample(&self, rng: &mut RngState) -> Result<T> {
        match &self.sampler {
            None => Err(Error::State("sampler not built; call build_sampler first".into())),
            Some(Sampler::PointMass) => Ok(T::one()),
            Some(Sampler::Table(t)) => Ok(t.quantile(rng.open01())),
        }
    }
}
