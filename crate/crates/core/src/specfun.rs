//! Error function of a complex argument, as needed by the photonic-band-gap
//! propagator.
//!
//! Evaluation strategy, chosen by measured f64 error rather than by radius
//! alone: after reflecting to Re z ≥ 0 (the function is odd), the Maclaurin
//! series with compensated summation is used for Re z ≤ 2 — its cancellation
//! is bounded by e^{2(Re z)²} independently of |z|, so it stays accurate
//! arbitrarily far up the imaginary direction — and the Laplace continued
//! fraction of erfc (modified Lentz) is used for Re z > 2, where it
//! converges in under a hundred iterations at full precision. The two
//! regions overlap-check against an extended-precision series oracle in the
//! test suite.

use num_complex::Complex64;

use crate::{Error, Result};

/// Boundary between the series and continued-fraction regions (on Re z,
/// after reflection).
const SERIES_RE_LIMIT: f64 = 2.0;

const MAX_SERIES_TERMS: usize = 500;
const MAX_CF_ITERS: usize = 300;

/// Φ(z), the error function at complex argument.
///
/// Odd (Φ(−z) = −Φ(z)) and conjugate-symmetric (Φ(z̄) = Φ(z)̄) by
/// construction. Accuracy against the series oracle is better than 1e-10
/// in |Δ|/max(1, |Φ|) for |z| ≤ 10.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFiniteArgument);
    }
    if z.re < 0.0 {
        return Ok(-erf_right_half(-z));
    }
    Ok(erf_right_half(z))
}

fn erf_right_half(z: Complex64) -> Complex64 {
    if z.re <= SERIES_RE_LIMIT {
        erf_series(z)
    } else {
        Complex64::new(1.0, 0.0) - erfc_continued_fraction(z)
    }
}

/// Maclaurin series Φ(z) = (2/√π) Σ (−1)ⁿ z^{2n+1} / (n! (2n+1)), summed
/// with Kahan compensation. Terms are built by the recursion
/// uₙ = −uₙ₋₁ z²/n, tₙ = uₙ/(2n+1).
fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut u = z;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for n in 0..MAX_SERIES_TERMS {
        let term = u / (2 * n + 1) as f64;
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm_sqr() <= sum.norm_sqr() * 1e-34 && n > 2 {
            break;
        }
        u = -u * z2 / (n + 1) as f64;
    }
    sum * std::f64::consts::FRAC_2_SQRT_PI
}

/// Laplace continued fraction
/// erfc(z) = e^{−z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …)))),
/// valid for Re z > 0, evaluated by the modified Lentz algorithm.
fn erfc_continued_fraction(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..MAX_CF_ITERS {
        let a = n as f64 / 2.0;
        d = z + a * d;
        if d.norm_sqr() == 0.0 {
            d = Complex64::new(TINY, 0.0);
        }
        c = z + a / c;
        if c.norm_sqr() == 0.0 {
            c = Complex64::new(TINY, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm_sqr() < 1e-34 {
            break;
        }
    }
    (-z * z).exp() / std::f64::consts::PI.sqrt() / f
}
