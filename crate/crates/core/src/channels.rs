//! The dynamical maps as time-parameterized (a, c) snapshots, their
//! Heisenberg-picture action on effect vectors, and the static depolarizing
//! channel.
//!
//! Every map considered here acts in the Schrödinger picture on a 2×2 matrix
//! T as T₀₀ ↦ a·T₀₀, T₀₁ ↦ c·T₀₁, T₁₁ ↦ T₁₁ + (1−a)T₀₀, so a single
//! snapshot (a, c) fixes the map at one instant. Complete positivity is
//! |c|² ≤ a ≤ 1; the two amplitude-damping families have |c|² = a exactly,
//! dephasing has a = 1.
//!
//! All snapshots come from closed-form decay functions (no ODE stepping), so
//! time points are independent and can be evaluated in any order or in
//! parallel. The amplitude-damping families also define a time-local decay
//! rate γ(t) = −2 Re[Ġ(t)/G(t)] (negative where the dynamics is
//! non-Markovian); it is a diagnostic only — evolution always goes through
//! the closed-form G itself.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::FourVector;
use crate::specfun::erf_complex;
use crate::{Error, Result, TOL_GEOM};

/// Tolerance for the "propagator must be real" and "|G| must not exceed 1"
/// consistency assertions.
const TOL_PROPAGATOR: f64 = 1e-12;
const TOL_MODULUS: f64 = 1e-9;
const TOL_INITIAL: f64 = 1e-6;

/// The pair (a, c) fixing the dynamical map at one instant: a is the
/// population damping factor, c the coherence factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSnapshot {
    pub a: f64,
    pub c: Complex64,
}

impl ChannelSnapshot {
    /// Validates 0 ≤ a ≤ 1 and |c|² ≤ a (complete positivity), with
    /// [`TOL_GEOM`] slack.
    pub fn new(a: f64, c: Complex64) -> Result<Self> {
        if !a.is_finite() || !(-TOL_GEOM..=1.0 + TOL_GEOM).contains(&a) {
            return Err(Error::InvalidParameter(format!(
                "damping factor a = {a}, expected [0, 1]"
            )));
        }
        if c.norm_sqr() > a + TOL_GEOM {
            return Err(Error::InvalidParameter(format!(
                "|c|^2 = {} exceeds a = {a}",
                c.norm_sqr()
            )));
        }
        Ok(Self { a, c })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            c: Complex64::new(1.0, 0.0),
        }
    }
}

/// Dephasing reservoir: photon frequency distribution made of two Gaussians
/// of common width `sigma`, separated by `delta_omega`, the second carrying
/// relative amplitude `amp_ratio`. Natural time unit 1/sigma.
///
/// `omega1` only rotates c in the complex plane and drops out of every
/// rotation-invariant quantity; it is kept for fidelity to the decoherence
/// function and defaults to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingParams {
    pub amp_ratio: f64,
    pub delta_omega: f64,
    #[serde(default = "one")]
    pub sigma: f64,
    #[serde(default)]
    pub omega1: f64,
}

fn one() -> f64 {
    1.0
}

impl DephasingParams {
    pub fn validate(&self) -> Result<()> {
        if self.sigma.is_nan() || self.sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma = {}, expected > 0",
                self.sigma
            )));
        }
        if self.amp_ratio.is_nan() || self.amp_ratio < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "amp_ratio = {}, expected >= 0",
                self.amp_ratio
            )));
        }
        Ok(())
    }
}

/// Lorentzian reservoir (leaky cavity): `r` is the coupling-to-width ratio;
/// `lambda_width` sets the time scale. r > 1/2 is the oscillatory
/// (non-Markovian) regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzianParams {
    pub r: f64,
    #[serde(default = "one")]
    pub lambda_width: f64,
}

impl LorentzianParams {
    pub fn validate(&self) -> Result<()> {
        if self.r.is_nan() || self.r <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "r = {}, expected > 0",
                self.r
            )));
        }
        if self.lambda_width.is_nan() || self.lambda_width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda_width = {}, expected > 0",
                self.lambda_width
            )));
        }
        Ok(())
    }
}

/// Photonic-band-gap reservoir: `beta` is the characteristic frequency,
/// `z` the detuning from the band edge in units of beta (z < 0 inside the
/// gap, where population trapping protects coherence).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PbgParams {
    #[serde(default = "one")]
    pub beta: f64,
    pub z: f64,
}

impl PbgParams {
    pub fn validate(&self) -> Result<()> {
        if self.beta.is_nan() || self.beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta = {}, expected > 0",
                self.beta
            )));
        }
        if !self.z.is_finite() {
            return Err(Error::InvalidParameter("z must be finite".into()));
        }
        Ok(())
    }
}

/// Dephasing snapshot: a = 1 and
/// c(t) = (1/(1+A)) e^{−σ²t²/2} (e^{−iω₁t} + A e^{−iω₂t}), ω₂ = ω₁ + Δω.
pub fn dephasing_snapshot(t: f64, p: &DephasingParams) -> Result<ChannelSnapshot> {
    p.validate()?;
    require_nonnegative_time(t)?;
    let envelope = (-0.5 * p.sigma * p.sigma * t * t).exp();
    let omega2 = p.omega1 + p.delta_omega;
    let phase1 = Complex64::from_polar(1.0, -p.omega1 * t);
    let phase2 = Complex64::from_polar(1.0, -omega2 * t);
    let c = (phase1 + p.amp_ratio * phase2) * (envelope / (1.0 + p.amp_ratio));
    ChannelSnapshot::new(1.0, c)
}

/// Lorentzian amplitude-damping snapshot: a = |G|², c = G with
/// G(t) = e^{−λt/2} [cosh(dλt/2) + (1/d) sinh(dλt/2)], d = √(1−2r).
///
/// d is always taken through complex arithmetic (principal branch), so one
/// code path covers both the overdamped (d real) and oscillatory (d
/// imaginary) regimes; sinh(w)/d is computed as (λt/2)·sinh(w)/w, which is
/// finite through r = 1/2. The result must be real; |Im G| ≥ 1e-12 trips a
/// consistency trap.
pub fn lorentzian_snapshot(t: f64, p: &LorentzianParams) -> Result<ChannelSnapshot> {
    p.validate()?;
    require_nonnegative_time(t)?;
    let half = 0.5 * p.lambda_width * t;
    let d = Complex64::new(1.0 - 2.0 * p.r, 0.0).sqrt();
    let w = d * half;
    let g = (-half).exp() * (w.cosh() + half * sinhc(w));
    if g.im.abs() > TOL_PROPAGATOR {
        return Err(Error::InconsistentImaginaryPart(g.im.abs()));
    }
    let g = g.re;
    ChannelSnapshot::new((g * g).min(1.0), Complex64::new(g, 0.0))
}

/// sinh(w)/w, series for small |w|.
fn sinhc(w: Complex64) -> Complex64 {
    if w.norm_sqr() < 1e-12 {
        let w2 = w * w;
        Complex64::new(1.0, 0.0) + w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sinh() / w
    }
}

/// Cube roots and partial-fraction weights of the PBG resolvent.
#[derive(Debug, Clone, Copy)]
struct PbgCoefficients {
    b: [Complex64; 3],
    v: [Complex64; 3],
}

fn pbg_coefficients(p: &PbgParams) -> Result<PbgCoefficients> {
    let z3 = p.z * p.z * p.z;
    let s = Complex64::new(1.0 + 4.0 * z3 / 27.0, 0.0).sqrt();
    let a_plus = (0.5 * (Complex64::new(1.0, 0.0) + s)).cbrt();
    let a_minus = (0.5 * (Complex64::new(1.0, 0.0) - s)).cbrt();

    let quarter_turn = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let sixth = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_6);
    let b1 = (a_plus + a_minus) * quarter_turn;
    let b2 = (a_plus * sixth.conj() - a_minus * sixth) * quarter_turn.conj();
    let b3 = (a_plus * sixth - a_minus * sixth.conj())
        * Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4);
    let b = [b1, b2, b3];

    for i in 0..3 {
        for j in (i + 1)..3 {
            let gap = (b[i] - b[j]).norm();
            if gap < 1e-12 {
                return Err(Error::DegenerateRoots(i + 1, j + 1, gap));
            }
        }
    }
    let v = [
        b1 / ((b1 - b2) * (b1 - b3)),
        b2 / ((b2 - b1) * (b2 - b3)),
        b3 / ((b3 - b1) * (b3 - b2)),
    ];
    Ok(PbgCoefficients { b, v })
}

/// PBG amplitude-damping snapshot: a = |G|² (clamped to the unit interval
/// after a modulus assertion), c = G with
///
/// G(t) = Σⱼ vⱼ bⱼ e^{β bⱼ² t} [1 + Φ(bⱼ √(βt))] · e^{iΔ_P t},  Δ_P = βz.
///
/// This is the partial-fraction inversion of the resolvent over the three
/// cube roots bⱼ; the Σ vⱼ bⱼ = 1 identity gives G(0) = 1, which is checked
/// to 1e-6 on every call and trips a consistency trap when violated
/// (it validates the root/weight conventions).
pub fn pbg_snapshot(t: f64, p: &PbgParams) -> Result<ChannelSnapshot> {
    p.validate()?;
    require_nonnegative_time(t)?;
    let coeffs = pbg_coefficients(p)?;

    let g0: Complex64 = coeffs.b.iter().zip(&coeffs.v).map(|(b, v)| v * b).sum();
    let g0_err = (g0 - Complex64::new(1.0, 0.0)).norm();
    if g0_err > TOL_INITIAL {
        return Err(Error::InconsistentInitialCondition(g0_err));
    }

    let bt = p.beta * t;
    let sqrt_bt = bt.sqrt();
    let mut g = Complex64::new(0.0, 0.0);
    for (b, v) in coeffs.b.iter().zip(&coeffs.v) {
        let phi = erf_complex(b * sqrt_bt)?;
        g += v * b * (b * b * bt).exp() * (Complex64::new(1.0, 0.0) + phi);
    }
    g *= Complex64::from_polar(1.0, p.beta * p.z * t);

    let modulus = g.norm();
    if modulus > 1.0 + TOL_MODULUS {
        return Err(Error::InconsistentModulus(modulus));
    }
    // rounding may leave |G| a hair above 1; pull c back onto the unit
    // circle together with the clamp so |c|^2 <= a survives exactly
    let (a, c) = if modulus > 1.0 {
        (1.0, g / modulus)
    } else {
        (modulus * modulus, g)
    };
    ChannelSnapshot::new(a, c)
}

/// Heisenberg action of the snapshot on an effect vector:
/// (x₀ + (a−1)x₃, Re(c)x₁ − Im(c)x₂, Im(c)x₁ + Re(c)x₂, a·x₃).
///
/// Maps valid effects to valid effects for every snapshot satisfying the
/// complete-positivity invariant.
pub fn heisenberg_evolve(x: &FourVector, s: &ChannelSnapshot) -> FourVector {
    FourVector::new(
        x.x0 + (s.a - 1.0) * x.x3,
        s.c.re * x.x1 - s.c.im * x.x2,
        s.c.im * x.x1 + s.c.re * x.x2,
        s.a * x.x3,
    )
}

/// Heisenberg action of the static depolarizing channel Λ_s: the spatial
/// part shrinks by (1−s), x₀ is untouched.
pub fn depolarize(x: &FourVector, s_noise: f64) -> FourVector {
    let k = 1.0 - s_noise;
    FourVector::new(x.x0, k * x.x1, k * x.x2, k * x.x3)
}

fn require_nonnegative_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time t = {t}, expected finite and >= 0"
        )));
    }
    Ok(())
}
