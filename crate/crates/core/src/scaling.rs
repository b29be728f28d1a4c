//! Conversion between adimensional results and SI units.
//!
//! With `x = ξ/L` the Hamiltonian `−(ħ²/2m)d²/dξ² + U(ξ)` becomes
//! `(ħ²/2mL²)(−d²/dx² + V(x))`, so energies scale by `ħ²/2mL²`, angular
//! frequencies by `ħ/2mL²`, and wavefunctions by `L^{-1/2}`.

use std::str::FromStr;

use thiserror::Error;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_7e-31;
/// The mass value `1.7×10⁻²⁷ kg` used in the original estimate.
pub const REFERENCE_MASS: f64 = 1.7e-27;
/// Default coherence time, s.
pub const DEFAULT_COHERENCE_TIME: f64 = 100e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("unknown mass preset `{0}` (expected `electron` or `reference`)")]
    UnknownPreset(String),
}

fn positive(name: &'static str, value: f64) -> Result<f64, ScalingError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ScalingError::NonPositive { name, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassPreset {
    Electron,
    Reference,
}

impl MassPreset {
    pub fn kilograms(self) -> f64 {
        match self {
            MassPreset::Electron => ELECTRON_MASS,
            MassPreset::Reference => REFERENCE_MASS,
        }
    }
}

impl FromStr for MassPreset {
    type Err = ScalingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "electron" => Ok(MassPreset::Electron),
            "reference" => Ok(MassPreset::Reference),
            _ => Err(ScalingError::UnknownPreset(s.to_string())),
        }
    }
}

/// `L = D_ξ / D_x`: the length unit that maps an adimensional width onto a
/// physical one.
pub fn derive_length(d_physical: f64, d_adimensional: f64) -> Result<f64, ScalingError> {
    Ok(positive("physical width", d_physical)? / positive("adimensional width", d_adimensional)?)
}

/// Mass and length unit with the derived energy and frequency units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScale {
    mass: f64,
    length: f64,
    energy_unit: f64,
    frequency_unit: f64,
}

impl PhysicalScale {
    pub fn new(mass: f64, length: f64) -> Result<Self, ScalingError> {
        let mass = positive("mass", mass)?;
        let length = positive("length", length)?;
        let frequency_unit = HBAR / (2.0 * mass * length * length);
        Ok(Self {
            mass,
            length,
            energy_unit: HBAR * frequency_unit,
            frequency_unit,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn length(&self) -> f64 {
        self.length
    }
    /// `ħ²/2mL²`, J.
    pub fn energy_unit(&self) -> f64 {
        self.energy_unit
    }
    /// `ħ/2mL²`, s⁻¹.
    pub fn frequency_unit(&self) -> f64 {
        self.frequency_unit
    }

    pub fn energy_to_si(&self, e: f64) -> f64 {
        e * self.energy_unit
    }
    pub fn energy_from_si(&self, joules: f64) -> f64 {
        joules / self.energy_unit
    }
    pub fn frequency_to_si(&self, omega: f64) -> f64 {
        omega * self.frequency_unit
    }
    pub fn frequency_from_si(&self, per_second: f64) -> f64 {
        per_second / self.frequency_unit
    }
    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length
    }
    pub fn length_from_si(&self, xi: f64) -> f64 {
        xi / self.length
    }

    /// `U(ξ) = (ħ²/2mL²) V(ξ/L)`
    pub fn potential_to_si<V: Fn(f64) -> f64>(&self, v: V) -> impl Fn(f64) -> f64 {
        let (e, l) = (self.energy_unit, self.length);
        move |xi| e * v(xi / l)
    }

    /// `ψ̃(ξ) = L^{-1/2} ψ(ξ/L)`
    pub fn wavefn_to_si<P: Fn(f64) -> f64>(&self, psi: P) -> impl Fn(f64) -> f64 {
        let l = self.length;
        let s = l.powf(-0.5);
        move |xi| s * psi(xi / l)
    }

    /// Oscillation period `2π/Ω` against a coherence time `τ`.
    pub fn coherence(&self, omega: f64, tau: f64) -> Coherence {
        let frequency = self.frequency_to_si(omega);
        let period = if frequency > 0.0 {
            2.0 * std::f64::consts::PI / frequency
        } else {
            f64::INFINITY
        };
        Coherence {
            frequency,
            period,
            tau,
            product: frequency * tau,
            observable: period <= tau,
        }
    }
}

/// Whether one oscillation at `Ω` fits inside the coherence time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherence {
    /// `Ω`, s⁻¹
    pub frequency: f64,
    /// `2π/Ω`, s
    pub period: f64,
    pub tau: f64,
    /// `Ω·τ`
    pub product: f64,
    pub observable: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dispersion, Quadrature};
    use crate::special::sech;
    use crate::triple::{psi3, rho3, TripleParams};
    use approx::assert_relative_eq;

    fn reference() -> PhysicalScale {
        PhysicalScale::new(REFERENCE_MASS, derive_length(5e-8, 2.34).unwrap()).unwrap()
    }

    #[test]
    fn derived_length() {
        assert_relative_eq!(derive_length(5e-8, 2.34).unwrap(), 2.1368e-8, max_relative = 1e-4);
        let pi12 = std::f64::consts::PI / 12.0_f64.sqrt();
        assert_relative_eq!(derive_length(5e-8, pi12).unwrap(), 5.513e-8, max_relative = 1e-3);
        assert_eq!(derive_length(3.0, 3.0).unwrap(), 1.0);
        assert!(derive_length(0.0, 1.0).is_err());
    }

    #[test]
    fn reference_frequency_unit() {
        let s = reference();
        let f = s.frequency_unit();
        assert!(f > 6e7 && f < 8e7, "{f}");
        assert_relative_eq!(s.energy_to_si(1.0) / HBAR, f, max_relative = 1e-15);
        assert_relative_eq!(s.frequency_to_si(1e-6), f * 1e-6, max_relative = 1e-15);
        assert_eq!(s.energy_to_si(0.0), 0.0);
        assert_eq!(s.frequency_to_si(0.0), 0.0);
    }

    #[test]
    fn inverse_square_length_law() {
        let a = PhysicalScale::new(ELECTRON_MASS, 1e-8).unwrap();
        let b = PhysicalScale::new(ELECTRON_MASS, 2e-8).unwrap();
        assert_relative_eq!(b.energy_to_si(1.0), a.energy_to_si(1.0) / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn round_trips() {
        let s = reference();
        for v in [-1.0, 1e-6, 3.5, 0.0] {
            assert_relative_eq!(s.energy_from_si(s.energy_to_si(v)), v, max_relative = 1e-15);
            assert_relative_eq!(s.frequency_from_si(s.frequency_to_si(v)), v, max_relative = 1e-15);
            assert_relative_eq!(s.length_from_si(s.length_to_si(v)), v, max_relative = 1e-15);
        }
    }

    #[test]
    fn presets() {
        assert_eq!("electron".parse::<MassPreset>().unwrap().kilograms(), ELECTRON_MASS);
        assert_eq!("Reference".parse::<MassPreset>().unwrap().kilograms(), REFERENCE_MASS);
        assert!("proton".parse::<MassPreset>().is_err());
        assert!(PhysicalScale::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn scaled_wavefunction_invariants() {
        let s = reference();
        let l = s.length();
        let q = Quadrature::default();
        let p = TripleParams::new(2.0 / 3.0, 5.0).unwrap();
        let psi = s.wavefn_to_si(|x| psi3(&p, x));
        // integrate in units of L to keep the tolerance meaningful
        let norm = q.integrate(|u| psi(u * l).powi(2) * l, -35.0, 35.0).unwrap().value;
        assert!((norm - 1.0).abs() < 1e-10);
        let a = s.wavefn_to_si(|x| sech(x + 2.0) / 2.0_f64.sqrt());
        let b = s.wavefn_to_si(|x| sech(x - 2.0) / 2.0_f64.sqrt());
        let o_si = q.integrate(|u| a(u * l) * b(u * l) * l, -30.0, 30.0).unwrap().value;
        assert!((o_si - 4.0 / 4.0_f64.sinh()).abs() < 1e-12);
        let dx = dispersion(|x| rho3(&p, x), -35.0, 35.0, &Quadrature::default()).unwrap();
        let rho_si = |xi: f64| psi(xi).powi(2);
        let m1 = q.integrate(|u| rho_si(u * l) * u * l * l, -35.0, 35.0).unwrap().value;
        let m2 = q.integrate(|u| rho_si(u * l) * (u * l).powi(2) * l, -35.0, 35.0).unwrap().value;
        let d_xi = (m2 - m1 * m1).sqrt();
        assert_relative_eq!(d_xi, l * dx, max_relative = 1e-10);
    }

    #[test]
    fn scaled_potential() {
        let s = reference();
        let u = s.potential_to_si(|x| -2.0 * sech(x).powi(2));
        assert_relative_eq!(u(0.0), -2.0 * s.energy_unit(), max_relative = 1e-15);
        assert_relative_eq!(u(s.length()), -2.0 * sech(1.0).powi(2) * s.energy_unit(), max_relative = 1e-14);
    }

    #[test]
    fn coherence_flag() {
        let s = reference();
        let c = s.coherence(1e-6, DEFAULT_COHERENCE_TIME);
        assert!(c.frequency > 60.0 && c.frequency < 80.0);
        assert!(!c.observable);
        assert!(s.coherence(1.0, DEFAULT_COHERENCE_TIME).observable);
        assert!(!s.coherence(0.0, DEFAULT_COHERENCE_TIME).observable);
    }
}
