//! Continuous sources on the real line: parametric Gaussian and Laplacian
//! families plus tabulated densities, with CDF and quantile evaluation.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::pmf::Pmf;
use crate::{Error, Result};

/// A continuous source with mean `mu` and standard deviation `sigma`.
#[derive(Debug, Clone)]
pub enum ContinuousSource {
    Gaussian { mu: f64, sigma: f64 },
    Laplacian { mu: f64, sigma: f64 },
    Tabulated(TabulatedPdf),
}

impl ContinuousSource {
    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(ContinuousSource::Gaussian { mu, sigma })
    }

    pub fn laplacian(mu: f64, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(ContinuousSource::Laplacian { mu, sigma })
    }

    /// Builds a tabulated source from grid points and densities. The density
    /// must be nonnegative and integrate to one within 1e-6 under the
    /// trapezoid rule; it is then normalized exactly.
    pub fn tabulated(xs: Vec<f64>, pdf: Vec<f64>) -> Result<Self> {
        Ok(ContinuousSource::Tabulated(TabulatedPdf::new(xs, pdf)?))
    }

    /// Parses `grid_point,density` CSV lines.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut pdf = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let x = parts
                .next()
                .and_then(|t| t.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad grid line {line:?}")))?;
            let d = parts
                .next()
                .and_then(|t| t.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad grid line {line:?}")))?;
            xs.push(x);
            pdf.push(d);
        }
        Self::tabulated(xs, pdf)
    }

    pub fn mean(&self) -> f64 {
        match self {
            ContinuousSource::Gaussian { mu, .. } | ContinuousSource::Laplacian { mu, .. } => *mu,
            ContinuousSource::Tabulated(t) => t.mu,
        }
    }

    pub fn std(&self) -> f64 {
        match self {
            ContinuousSource::Gaussian { sigma, .. } | ContinuousSource::Laplacian { sigma, .. } => {
                *sigma
            }
            ContinuousSource::Tabulated(t) => t.sigma,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            ContinuousSource::Gaussian { mu, sigma } => {
                Normal::new(*mu, *sigma).expect("validated").cdf(x)
            }
            ContinuousSource::Laplacian { mu, sigma } => {
                let b = sigma / std::f64::consts::SQRT_2;
                if x < *mu {
                    0.5 * ((x - mu) / b).exp()
                } else {
                    1.0 - 0.5 * (-(x - mu) / b).exp()
                }
            }
            ContinuousSource::Tabulated(t) => t.cdf(x),
        }
    }

    /// Generalized inverse CDF. For tabulated sources, flat CDF regions
    /// resolve to their left endpoint.
    pub fn quantile(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0, "quantile needs u in (0, 1)");
        match self {
            ContinuousSource::Gaussian { mu, sigma } => {
                Normal::new(*mu, *sigma).expect("validated").inverse_cdf(u)
            }
            ContinuousSource::Laplacian { mu, sigma } => {
                let b = sigma / std::f64::consts::SQRT_2;
                if u < 0.5 {
                    mu + b * (2.0 * u).ln()
                } else {
                    mu - b * (2.0 * (1.0 - u)).ln()
                }
            }
            ContinuousSource::Tabulated(t) => t.quantile(u),
        }
    }

    /// Whether the family is closed under affine maps, which is what makes
    /// the moment-only margin formula exact for same-family pairs.
    pub fn affine_closed_family(&self) -> bool {
        !matches!(self, ContinuousSource::Tabulated(_))
    }

    pub fn same_family(&self, other: &ContinuousSource) -> bool {
        matches!(
            (self, other),
            (ContinuousSource::Gaussian { .. }, ContinuousSource::Gaussian { .. })
                | (ContinuousSource::Laplacian { .. }, ContinuousSource::Laplacian { .. })
        )
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidInput(format!(
            "standard deviation must be positive and finite, got {sigma}"
        )));
    }
    Ok(())
}

/// A density tabulated on an increasing grid, integrated by the trapezoid
/// rule.
#[derive(Debug, Clone)]
pub struct TabulatedPdf {
    xs: Vec<f64>,
    cum: Vec<f64>,
    mu: f64,
    sigma: f64,
}

impl TabulatedPdf {
    fn new(xs: Vec<f64>, pdf: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != pdf.len() {
            return Err(Error::InvalidInput(
                "tabulated pdf needs at least two matching grid points".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid points must be strictly increasing".into()));
        }
        if pdf.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidInput("densities must be finite and nonnegative".into()));
        }
        let mut cum = vec![0.0; xs.len()];
        for i in 1..xs.len() {
            cum[i] = cum[i - 1] + (xs[i] - xs[i - 1]) * (pdf[i] + pdf[i - 1]) / 2.0;
        }
        let total = cum[xs.len() - 1];
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "tabulated pdf integrates to {total}, expected 1 within 1e-6"
            )));
        }
        for c in &mut cum {
            *c /= total;
        }
        let pdf_n: Vec<f64> = pdf.iter().map(|d| d / total).collect();
        let mut mu = 0.0;
        let mut m2 = 0.0;
        for i in 1..xs.len() {
            let dx = xs[i] - xs[i - 1];
            mu += dx * (xs[i] * pdf_n[i] + xs[i - 1] * pdf_n[i - 1]) / 2.0;
            m2 += dx * (xs[i] * xs[i] * pdf_n[i] + xs[i - 1] * xs[i - 1] * pdf_n[i - 1]) / 2.0;
        }
        let var = (m2 - mu * mu).max(0.0);
        Ok(TabulatedPdf {
            xs,
            cum,
            mu,
            sigma: var.sqrt(),
        })
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let i = self.xs.partition_point(|&g| g <= x) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (c0, c1) = (self.cum[i], self.cum[i + 1]);
        c0 + (c1 - c0) * (x - x0) / (x1 - x0)
    }

    fn quantile(&self, u: f64) -> f64 {
        let i = self.cum.partition_point(|&c| c < u);
        if i == 0 {
            return self.xs[0];
        }
        if i >= self.cum.len() {
            return *self.xs.last().unwrap();
        }
        let (c0, c1) = (self.cum[i - 1], self.cum[i]);
        if c1 - c0 <= f64::EPSILON {
            // Flat region: generalized inverse takes the left endpoint.
            return self.xs[i - 1];
        }
        self.xs[i - 1] + (self.xs[i] - self.xs[i - 1]) * (u - c0) / (c1 - c0)
    }
}

/// Quantizes a source to `bins` equal-width bins spanning `[lo, hi]`, with
/// the tail mass folded into the edge bins. Bin `t` covers
/// `[lo + t*w, lo + (t+1)*w)` with `w = (hi - lo) / bins` and the pmf offset
/// is zero; the caller owns the mapping back to bin centers.
pub fn quantize(src: &ContinuousSource, bins: usize, lo: f64, hi: f64) -> Result<Pmf> {
    if bins < 2 || !(hi > lo) {
        return Err(Error::InvalidInput("quantize needs bins >= 2 and hi > lo".into()));
    }
    let w = (hi - lo) / bins as f64;
    let mut probs = Vec::with_capacity(bins);
    let mut prev = 0.0; // fold the left tail into bin 0
    for t in 1..bins {
        let c = src.cdf(lo + t as f64 * w);
        probs.push((c - prev).max(0.0));
        prev = c;
    }
    probs.push((1.0 - prev).max(0.0)); // right tail folds into the last bin
    Ok(Pmf::from_weights(0, &probs))
}
