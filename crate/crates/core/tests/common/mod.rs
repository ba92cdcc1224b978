//! Shared test support: an extended-precision Maclaurin oracle for the
//! complex error function, and seeded samplers for random effects,
//! snapshots and rotations.
//!
//! The oracle sums Φ(z) = (2/√π) Σ (−1)ⁿ z^{2n+1}/(n!(2n+1)) in a 256-bit
//! binary float. Double precision is nowhere near enough for an oracle: the
//! terms peak around e^{|z|²} (≈ 5e28 at z = 6+6i) while the sum collapses
//! to O(1), so the f64 series loses up to ~29 digits to cancellation on the
//! acceptance grid. 256 bits ≈ 77 digits leaves a wide margin.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;

use incompat::bloch::{FourVector, Rotation};
use incompat::channels::ChannelSnapshot;

const PREC: u64 = 256;

/// value = mant · 2^exp, mantissa truncated to PREC bits.
#[derive(Clone, Debug)]
struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    fn zero() -> Self {
        Self {
            mant: BigInt::from(0),
            exp: 0,
        }
    }

    fn from_f64(v: f64) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074) // subnormal
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self {
            mant: BigInt::from(sign) * BigInt::from(m),
            exp: e,
        }
    }

    fn is_zero(&self) -> bool {
        self.mant.sign() == num_bigint::Sign::NoSign
    }

    /// Exponent of the magnitude: value ≈ 2^mag.
    fn mag(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 2
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    fn normalize(mut self) -> Self {
        let bits = self.mant.bits();
        if bits > PREC {
            let shift = bits - PREC;
            self.mant >>= shift;
            self.exp += shift as i64;
        }
        self
    }

    fn neg(&self) -> Self {
        Self {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // a term far below the other's precision window cannot change it
        if self.mag() - other.mag() > PREC as i64 + 4 {
            return self.clone();
        }
        if other.mag() - self.mag() > PREC as i64 + 4 {
            return other.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = self.mant.clone() << (self.exp - exp) as u64;
        let b = other.mant.clone() << (other.exp - exp) as u64;
        Self { mant: a + b, exp }.normalize()
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .normalize()
    }

    /// Divide by a small positive integer, keeping PREC bits.
    fn div_u64(&self, d: u64) -> Self {
        Self {
            mant: (self.mant.clone() << 64) / BigInt::from(d),
            exp: self.exp - 64,
        }
        .normalize()
    }

    fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 53 {
            let shift = bits - 53;
            let top = i64::try_from(&(self.mant.clone() >> shift)).unwrap();
            (top as f64, self.exp + shift as i64)
        } else {
            (i64::try_from(&self.mant).unwrap() as f64, self.exp)
        };
        if e > 1400 {
            return if m > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if e < -1400 {
            return 0.0;
        }
        // split the power so neither factor over/underflows
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }
}

#[derive(Clone, Debug)]
struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    fn from_c64(z: Complex64) -> Self {
        Self {
            re: BigFloat::from_f64(z.re),
            im: BigFloat::from_f64(z.im),
        }
    }

    fn zero() -> Self {
        Self {
            re: BigFloat::zero(),
            im: BigFloat::zero(),
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: self.re.mul(&o.re).add(&self.im.mul(&o.im).neg()),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn div_u64(&self, d: u64) -> Self {
        Self {
            re: self.re.div_u64(d),
            im: self.im.div_u64(d),
        }
    }

    fn neg(&self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    fn mag(&self) -> i64 {
        self.re.mag().max(self.im.mag())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Independent Maclaurin oracle for Φ(z), summed in 256-bit precision.
pub fn erf_oracle(z: Complex64) -> Complex64 {
    let zb = BigComplex::from_c64(z);
    let z2 = zb.mul(&zb);
    let mut u = zb; // uₙ = (−1)ⁿ z^{2n+1}/n!
    let mut sum = BigComplex::zero();
    let hump = z.norm_sqr() as usize;
    for n in 0..3000usize {
        let term = u.div_u64(2 * n as u64 + 1);
        sum = sum.add(&term);
        if n > hump + 4 && term.mag() < -480 {
            break;
        }
        u = u.mul(&z2).div_u64(n as u64 + 1).neg();
    }
    sum.to_c64() * std::f64::consts::FRAC_2_SQRT_PI
}

/// |Δ| / max(1, |reference|): absolute for O(1) values, relative beyond.
pub fn mixed_err(got: Complex64, reference: Complex64) -> f64 {
    (got - reference).norm() / reference.norm().max(1.0)
}

/// Uniformly random valid effect: x₀ ∈ [0, 2], Bloch direction uniform on
/// the sphere, Bloch length a uniform fraction of min(x₀, 2−x₀) so both
/// cone constraints hold.
pub fn random_valid_effect<R: Rng>(rng: &mut R) -> FourVector {
    let x0: f64 = rng.random_range(0.0..2.0);
    let len = x0.min(2.0 - x0) * rng.random_range(0.0..1.0f64);
    let cos_th: f64 = rng.random_range(-1.0..1.0);
    let sin_th = (1.0 - cos_th * cos_th).sqrt();
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    FourVector::new(
        x0,
        len * sin_th * phi.cos(),
        len * sin_th * phi.sin(),
        len * cos_th,
    )
}

/// Random completely positive snapshot: a ∈ [0, 1], |c| ≤ √a, random phase.
pub fn random_snapshot<R: Rng>(rng: &mut R) -> ChannelSnapshot {
    let a: f64 = rng.random_range(0.0..1.0);
    let modulus = a.sqrt() * rng.random_range(0.0..1.0f64);
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    ChannelSnapshot::new(a, Complex64::from_polar(modulus, phase)).unwrap()
}

/// Random proper rotation: uniform axis, uniform angle.
pub fn random_rotation<R: Rng>(rng: &mut R) -> Rotation {
    let cos_th: f64 = rng.random_range(-1.0..1.0);
    let sin_th = (1.0 - cos_th * cos_th).sqrt();
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let axis = [sin_th * phi.cos(), sin_th * phi.sin(), cos_th];
    let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Rotation::from_axis_angle(axis, angle).unwrap()
}
