//! Concurrence of the locally evolved maximally entangled probe state.
//!
//! Applying the snapshot map to the first qubit of |Ψ₀⟩ = (|00⟩+|11⟩)/√2
//! leaves a density matrix with nonzero entries only on the diagonal and
//! antidiagonal (an X-state), for which the concurrence is
//! E = 2·max{0, K₁, K₂} with K₁ = |q₁| − √(p₁₀p₀₁), K₂ = |q₂| − √(p₀₀p₁₁).
//! For the evolved Bell state this collapses to E = |c|, which the test
//! suite uses as a cross-check on the channel-application code rather than
//! as a shortcut.

use num_complex::Complex64;

use crate::channels::ChannelSnapshot;
use crate::{Error, Result, TOL_GEOM};

/// Two-qubit X-state: populations on the diagonal, coherences q₁ = ⟨00|ρ|11⟩
/// and q₂ = ⟨01|ρ|10⟩ on the antidiagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateMatrix {
    /// (p00, p01, p10, p11)
    pub diag: [f64; 4],
    /// (q1, q2)
    pub anti: [Complex64; 2],
}

impl XStateMatrix {
    pub fn new(diag: [f64; 4], anti: [Complex64; 2]) -> Result<Self> {
        for (i, p) in diag.iter().enumerate() {
            if *p < -TOL_GEOM || !p.is_finite() {
                return Err(Error::InvalidXState(format!("population {i} = {p}")));
            }
        }
        let trace: f64 = diag.iter().sum();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidXState(format!("trace = {trace}")));
        }
        if anti[0].norm_sqr() > diag[0] * diag[3] + TOL_GEOM {
            return Err(Error::InvalidXState(format!(
                "|q1|^2 = {} exceeds p00*p11 = {}",
                anti[0].norm_sqr(),
                diag[0] * diag[3]
            )));
        }
        if anti[1].norm_sqr() > diag[1] * diag[2] + TOL_GEOM {
            return Err(Error::InvalidXState(format!(
                "|q2|^2 = {} exceeds p01*p10 = {}",
                anti[1].norm_sqr(),
                diag[1] * diag[2]
            )));
        }
        Ok(Self { diag, anti })
    }

    pub fn bell() -> Self {
        Self {
            diag: [0.5, 0.0, 0.0, 0.5],
            anti: [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
        }
    }
}

/// (Λ* ⊗ Id)|Ψ₀⟩⟨Ψ₀| for the snapshot map acting on the first qubit:
/// p₀₀ = a/2, p₀₁ = 0, p₁₀ = (1−a)/2, p₁₁ = 1/2, q₁ = c/2, q₂ = 0.
///
/// |q₁|² = |c|²/4 ≤ a/4 = p₀₀·p₁₁ follows from the snapshot invariant
/// |c|² ≤ a, so the output always satisfies the X-state constraints.
pub fn evolved_bell_state(s: &ChannelSnapshot) -> XStateMatrix {
    XStateMatrix {
        diag: [s.a / 2.0, 0.0, (1.0 - s.a) / 2.0, 0.5],
        anti: [s.c / 2.0, Complex64::new(0.0, 0.0)],
    }
}

/// Bell state mixed with white noise of weight s (the state produced by the
/// depolarizing scenario): populations ((2−s)/4, s/4, s/4, (2−s)/4),
/// q₁ = (1−s)/2. Concurrence max{0, 1 − 3s/2}.
pub fn depolarized_bell_state(s_noise: f64) -> Result<XStateMatrix> {
    if !(0.0..=1.0).contains(&s_noise) {
        return Err(Error::InvalidParameter(format!(
            "depolarizing weight s = {s_noise}, expected [0, 1]"
        )));
    }
    Ok(XStateMatrix {
        diag: [
            (2.0 - s_noise) / 4.0,
            s_noise / 4.0,
            s_noise / 4.0,
            (2.0 - s_noise) / 4.0,
        ],
        anti: [
            Complex64::new((1.0 - s_noise) / 2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    })
}

/// X-state concurrence E = 2·max{0, K₁, K₂}.
pub fn concurrence(rho: &XStateMatrix) -> f64 {
    let [p00, p01, p10, p11] = rho.diag;
    let k1 = rho.anti[0].norm() - (p10 * p01).max(0.0).sqrt();
    let k2 = rho.anti[1].norm() - (p00 * p11).max(0.0).sqrt();
    2.0 * k1.max(k2).max(0.0)
}
