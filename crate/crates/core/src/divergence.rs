//! Information-theoretic discrepancy functions used by the defender's tests
//! and the attacker's objectives. Everything is measured in bits.

use crate::pmf::Pmf;
use crate::Result;

/// A divergence value in bits; `f64::INFINITY` is a legal value and must be
/// treated as a hard barrier by optimizers.
pub type Bits = f64;

/// Entries at or below this magnitude are treated as exact zeros in the
/// `0 log 0 = 0` convention, so denormal noise cannot produce spurious
/// infinities.
pub(crate) const ZERO_FLOOR: f64 = 1e-300;

pub(crate) const INV_LN2: f64 = std::f64::consts::LOG2_E;

/// KL divergence `D(p || q)` in bits, with the conventions `0 log 0 = 0` and
/// `p log(p/0) = +inf` for `p > 0`.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<Bits> {
    p.require_same_alphabet(q)?;
    Ok(kl_slices(p.probs(), q.probs()))
}

pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= ZERO_FLOOR {
            continue;
        }
        if qi <= ZERO_FLOOR {
            return f64::INFINITY;
        }
        acc += pi * (pi / qi).log2();
    }
    acc.max(0.0)
}

/// Generalized log-likelihood ratio statistic
/// `h_c(p, q) = D(p || u) + c * D(q || u)` with the mixture
/// `u = p / (1 + c) + c * q / (1 + c)`.
///
/// When `p` and `q` are the empirical types of a test sequence of length `n`
/// and a training sequence of length `N`, and `c = N / n`, this equals the
/// generalized log-likelihood ratio of the two-sequence test: the mixture is
/// exactly the type of the concatenated sequence.
pub fn h_c(p: &Pmf, q: &Pmf, c: f64) -> Result<Bits> {
    p.require_same_alphabet(q)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(crate::Error::InvalidInput(format!(
            "training ratio c must be positive and finite, got {c}"
        )));
    }
    Ok(hc_slices(p.probs(), q.probs(), c))
}

pub(crate) fn hc_slices(p: &[f64], q: &[f64], c: f64) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let w = 1.0 / (1.0 + c);
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let ui = w * pi + (1.0 - w) * qi;
        if pi > ZERO_FLOOR {
            acc += pi * (pi / ui).log2();
        }
        if qi > ZERO_FLOOR {
            acc += c * qi * (qi / ui).log2();
        }
    }
    acc.max(0.0)
}
