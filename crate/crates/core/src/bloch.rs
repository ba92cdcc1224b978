//! Minkowski four-vector geometry for binary qubit measurements.
//!
//! A binary POVM on a qubit is fixed by one effect E = ½(x₀·1 + 𝐱·σ), i.e.
//! by the four-vector x = (x₀, x₁, x₂, x₃). The effect is valid (0 ≤ E ≤ 1)
//! exactly when both x and its complement x⊥ = (2−x₀, −𝐱) lie in the forward
//! cone {⟨x|x⟩ ≥ 0, x₀ ≥ 0} of the Minkowski product
//! ⟨x|y⟩ = x₀y₀ − x₁y₁ − x₂y₂ − x₃y₃.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, TOL_GEOM};

/// Bloch four-vector of one binary-POVM effect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl FourVector {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    /// Squared Euclidean length of the spatial (Bloch) part.
    pub fn bloch_norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }
}

/// Minkowski scalar product ⟨x|y⟩ = x₀y₀ − 𝐱·𝐲.
pub fn mink(x: &FourVector, y: &FourVector) -> f64 {
    x.x0 * y.x0 - x.x1 * y.x1 - x.x2 * y.x2 - x.x3 * y.x3
}

/// Four-vector of the other POVM element: x⊥ = (2−x₀, −𝐱).
///
/// The spatial part is pure negation, so it round-trips bitwise; the x₀
/// round-trip 2−(2−x₀) is bitwise exact whenever 2−x₀ is representable
/// (every dyadic x₀, hence every measurement in the scenario catalogue) and
/// within one rounding of 2 otherwise.
pub fn complement(x: &FourVector) -> FourVector {
    FourVector::new(2.0 - x.x0, -x.x1, -x.x2, -x.x3)
}

/// Whether x describes a valid effect, i.e. x and x⊥ lie in the forward
/// cone, with [`TOL_GEOM`] slack so sharp effects and the zero effect on the
/// cone boundary are accepted.
pub fn is_valid_effect(x: &FourVector) -> bool {
    let xp = complement(x);
    mink(x, x) >= -TOL_GEOM
        && x.x0 >= -TOL_GEOM
        && mink(&xp, &xp) >= -TOL_GEOM
        && xp.x0 >= -TOL_GEOM
}

/// A proper rotation of Bloch space (orthogonal, determinant +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    /// Validate and wrap a 3×3 matrix; rejects non-orthogonal or reflecting
    /// matrices (checked to [`TOL_GEOM`]).
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > TOL_GEOM {
                    return Err(Error::InvalidRotation(format!(
                        "row {i}·row {j} = {dot:.3e}, expected {target}"
                    )));
                }
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (det - 1.0).abs() > TOL_GEOM {
            return Err(Error::InvalidRotation(format!("det = {det}")));
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rotation by `angle` about the (normalized) `axis`, Rodrigues form.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidRotation("zero or non-finite axis".into()));
        }
        let (ux, uy, uz) = (axis[0] / n, axis[1] / n, axis[2] / n);
        let (s, c) = angle.sin_cos();
        let v = 1.0 - c;
        Self::new([
            [c + ux * ux * v, ux * uy * v - uz * s, ux * uz * v + uy * s],
            [uy * ux * v + uz * s, c + uy * uy * v, uy * uz * v - ux * s],
            [uz * ux * v - uy * s, uz * uy * v + ux * s, c + uz * uz * v],
        ])
    }

    fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }
}

/// Rotate the spatial part of x; x₀ is untouched. Spatial rotations preserve
/// the Minkowski product, so this maps valid effects to valid effects.
pub fn rotate(x: &FourVector, r: &Rotation) -> FourVector {
    let s = r.apply([x.x1, x.x2, x.x3]);
    FourVector::new(x.x0, s[0], s[1], s[2])
}

/// A labelled pair of measurements whose incompatibility is tracked.
///
/// Validity of both members is checked here, at construction; the
/// noise-deformed and channel-evolved vectors derived from a valid pair are
/// valid by convexity and are not re-checked on every arithmetic call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPair {
    pub first: FourVector,
    pub second: FourVector,
    pub label: String,
}

impl MeasurementPair {
    pub fn new(first: FourVector, second: FourVector, label: impl Into<String>) -> Result<Self> {
        for v in [&first, &second] {
            if !is_valid_effect(v) {
                return Err(Error::InvalidEffect(v.as_array()));
            }
        }
        Ok(Self {
            first,
            second,
            label: label.into(),
        })
    }

    /// Sharp x vs sharp y measurement: the maximally incompatible pair.
    pub fn p1() -> Self {
        Self {
            first: FourVector::new(1.0, 1.0, 0.0, 0.0),
            second: FourVector::new(1.0, 0.0, 1.0, 0.0),
            label: "P1".into(),
        }
    }

    /// Sharp x vs sharp z measurement.
    pub fn p2() -> Self {
        Self {
            first: FourVector::new(1.0, 1.0, 0.0, 0.0),
            second: FourVector::new(1.0, 0.0, 0.0, 1.0),
            label: "P2".into(),
        }
    }
}
