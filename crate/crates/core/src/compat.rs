//! Joint measurability of qubit measurement pairs and the noise-robustness
//! incompatibility monotone.
//!
//! Two binary qubit measurements x, y are compatible iff C(x, y) ≥ 0, where
//!
//! C(x,y) = [⟨x|x⟩⟨x⊥|x⊥⟩⟨y|y⟩⟨y⊥|y⊥⟩]^½ − ⟨x|x⊥⟩⟨y|y⊥⟩
//!          + ⟨x|y⊥⟩⟨x⊥|y⟩ + ⟨x|y⟩⟨x⊥|y⊥⟩.
//!
//! The monotone is the minimal weight λ of classical selection noise (with
//! outcome bias b) that makes the deformed pair compatible. For an
//! incompatible pair, λ ↦ C(deformed pair) changes sign at exactly one point
//! of [0, 1/2], so plain bisection is unconditionally convergent.
//!
//! At zero bias the monotone also equals the maximal CHSH-inequality
//! violation achievable with the pair fixed on one side; nothing here
//! depends on that interpretation.

use serde::{Deserialize, Serialize};

use crate::bloch::{complement, mink, FourVector};
use crate::{Error, Result, TOL_GEOM};

/// Default absolute tolerance for the bisection locating the monotone.
pub const DEFAULT_TOL_ROOT: f64 = 1e-10;

const MAX_BISECTION_ITERS: usize = 60;

/// Classical selection noise: with probability `lambda` the device ignores
/// the measurement and outputs 1 with probability (1+bias)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub lambda: f64,
    pub bias: f64,
}

impl NoiseParams {
    pub fn new(lambda: f64, bias: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise weight lambda = {lambda}, expected [0, 1]"
            )));
        }
        if !(-1.0..=1.0).contains(&bias) || !bias.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bias = {bias}, expected [-1, 1]"
            )));
        }
        Ok(Self { lambda, bias })
    }
}

/// Mix the effect with selection noise:
/// x ↦ ((1−λ)x₀ + λ(1+b), (1−λ)𝐱).
///
/// A convex combination of two valid effects (x and the trivial "output 1
/// with probability (1+b)/2" effect), so the output is valid whenever the
/// input is.
pub fn deform(x: &FourVector, n: &NoiseParams) -> FourVector {
    let keep = 1.0 - n.lambda;
    FourVector::new(
        keep * x.x0 + n.lambda * (1.0 + n.bias),
        keep * x.x1,
        keep * x.x2,
        keep * x.x3,
    )
}

/// The compatibility function C(x, y). Nonnegative iff the pair is jointly
/// measurable.
///
/// For valid effects the radicand is a product of nonnegative Minkowski
/// norms; rounding can push it slightly negative, which is clamped to zero
/// within [`TOL_GEOM`]. Anything more negative means the inputs were not
/// valid effects.
pub fn busch_c(x: &FourVector, y: &FourVector) -> Result<f64> {
    let xp = complement(x);
    let yp = complement(y);
    let radicand = mink(x, x) * mink(&xp, &xp) * mink(y, y) * mink(&yp, &yp);
    let root = if radicand >= 0.0 {
        radicand.sqrt()
    } else if radicand >= -TOL_GEOM {
        0.0
    } else {
        return Err(Error::NegativeRadicand(radicand));
    };
    Ok(root - mink(x, &xp) * mink(y, &yp)
        + mink(x, &yp) * mink(&xp, y)
        + mink(x, y) * mink(&xp, &yp))
}

/// Whether the two measurements are jointly measurable.
pub fn is_compatible(x: &FourVector, y: &FourVector) -> Result<bool> {
    Ok(busch_c(x, y)? >= 0.0)
}

/// Noise robustness of the pair: the minimal λ for which the noise-deformed
/// pair becomes compatible, located by bisection on [0, 1/2] to absolute
/// tolerance `tol_root`. Returns 0 for compatible pairs; always ≤ 1/2.
///
/// C values in [−TOL_GEOM, 0) are treated as zero so that boundary pairs
/// (e.g. identical sharp measurements) do not report spurious positive
/// incompatibility from rounding.
///
/// Fails with [`Error::InconsistentBracket`] if the deformed pair is still
/// incompatible at λ = 1/2, which would contradict the guaranteed unique
/// sign change; that is a bug trap, not a user error.
pub fn incompatibility(x: &FourVector, y: &FourVector, bias: f64, tol_root: f64) -> Result<f64> {
    if tol_root.is_nan() || tol_root <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol_root = {tol_root}, expected > 0"
        )));
    }
    if busch_c(x, y)? >= -TOL_GEOM {
        return Ok(0.0);
    }
    let c_at = |lambda: f64| -> Result<f64> {
        let n = NoiseParams { lambda, bias };
        busch_c(&deform(x, &n), &deform(y, &n))
    };
    let mut lo = 0.0;
    let mut hi = 0.5;
    let c_hi = c_at(hi)?;
    if c_hi < 0.0 {
        return Err(Error::InconsistentBracket(c_hi));
    }
    for _ in 0..MAX_BISECTION_ITERS {
        if hi - lo <= tol_root {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if c_at(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
