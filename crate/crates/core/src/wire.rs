//! Serde representations.
//!
//! - `PomElement` ↔ `{"w", "theta_k", "phi_k"}`
//! - `QubitState` ↔ `{"amp_plus": [re, im], "amp_minus": [re, im]}`
//! - `Pom` ↔ array of elements
//!
//! Deserialization goes through the checked constructors.

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::qubit::{Pom, PomElement, QubitState};

#[derive(Serialize, Deserialize)]
struct ElementWire {
    w: f64,
    theta_k: f64,
    phi_k: f64,
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    amp_plus: [f64; 2],
    amp_minus: [f64; 2],
}

impl Serialize for PomElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementWire {
            w: self.w(),
            theta_k: self.theta_k(),
            phi_k: self.phi_k(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PomElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ElementWire::deserialize(d)?;
        PomElement::new(w.w, w.theta_k, w.phi_k).map_err(D::Error::custom)
    }
}

impl Serialize for QubitState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (a, b) = (self.plus(), self.minus());
        StateWire {
            amp_plus: [a.re, a.im],
            amp_minus: [b.re, b.im],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QubitState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = StateWire::deserialize(d)?;
        QubitState::new(
            Complex64::new(w.amp_plus[0], w.amp_plus[1]),
            Complex64::new(w.amp_minus[0], w.amp_minus[1]),
        )
        .map_err(D::Error::custom)
    }
}

impl Serialize for Pom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Pom::from_elements(Vec::<PomElement>::deserialize(d)?))
    }
}
