//! Dimensional config values written as "<number> <unit>".
//!
//! Every quantity is converted to its canonical unit on parsing and printed
//! back in that unit with a round-trip exact float, so a resolved config
//! reproduces the original values bit for bit.

use std::fmt;
use std::marker::PhantomData;

use polariton_core::units::rad_ps_to_cm;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

pub trait Dimension {
    const NAME: &'static str;
    const CANONICAL: &'static str;
    /// Factor converting one `unit` into the canonical unit.
    fn factor(unit: &str) -> Option<f64>;
    fn accepted() -> &'static str;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberDim;
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDim;
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureDim;
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthDim;
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleDim;

const MEV_TO_CM: f64 = 8.065_543_937;

impl Dimension for WavenumberDim {
    const NAME: &'static str = "wavenumber";
    const CANONICAL: &'static str = "cm^-1";
    fn factor(unit: &str) -> Option<f64> {
        match unit {
            "cm^-1" | "cm-1" | "1/cm" => Some(1.0),
            "meV" => Some(MEV_TO_CM),
            "rad/ps" => Some(rad_ps_to_cm(1.0)),
            _ => None,
        }
    }
    fn accepted() -> &'static str {
        "cm^-1, meV, rad/ps"
    }
}

impl Dimension for TimeDim {
    const NAME: &'static str = "time";
    const CANONICAL: &'static str = "ps";
    fn factor(unit: &str) -> Option<f64> {
        match unit {
            "ps" => Some(1.0),
            "fs" => Some(1e-3),
            "ns" => Some(1e3),
            _ => None,
        }
    }
    fn accepted() -> &'static str {
        "ps, fs, ns"
    }
}

impl Dimension for TemperatureDim {
    const NAME: &'static str = "temperature";
    const CANONICAL: &'static str = "K";
    fn factor(unit: &str) -> Option<f64> {
        (unit == "K").then_some(1.0)
    }
    fn accepted() -> &'static str {
        "K"
    }
}

impl Dimension for LengthDim {
    const NAME: &'static str = "length";
    const CANONICAL: &'static str = "nm";
    fn factor(unit: &str) -> Option<f64> {
        match unit {
            "nm" => Some(1.0),
            "A" | "Å" | "angstrom" => Some(0.1),
            "um" | "μm" => Some(1e3),
            _ => None,
        }
    }
    fn accepted() -> &'static str {
        "nm, A, um"
    }
}

impl Dimension for DipoleDim {
    const NAME: &'static str = "dipole";
    const CANONICAL: &'static str = "D";
    fn factor(unit: &str) -> Option<f64> {
        matches!(unit, "D" | "debye").then_some(1.0)
    }
    fn accepted() -> &'static str {
        "D"
    }
}

/// A value in the canonical unit of `D`.
pub struct Quantity<D> {
    pub value: f64,
    dim: PhantomData<D>,
}

pub type Wavenumber = Quantity<WavenumberDim>;
pub type Time = Quantity<TimeDim>;
pub type Temperature = Quantity<TemperatureDim>;
pub type Length = Quantity<LengthDim>;
pub type Dipole = Quantity<DipoleDim>;

impl<D> Quantity<D> {
    pub fn new(value: f64) -> Self {
        Quantity {
            value,
            dim: PhantomData,
        }
    }
}

impl<D> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<D> Copy for Quantity<D> {}

impl<D> PartialEq for Quantity<D> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, D::CANONICAL)
    }
}

impl<D: Dimension> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, D::CANONICAL)
    }
}

/// Parses "<number> <unit>"; the unit is mandatory.
pub fn parse<D: Dimension>(text: &str) -> Result<Quantity<D>, String> {
    let text = text.trim();
    let split = text
        .find(|c: char| c.is_whitespace())
        .ok_or_else(|| format!("`{text}` has no unit; write e.g. \"1 {}\" ({} units: {})", D::CANONICAL, D::NAME, D::accepted()))?;
    let (number, unit) = (&text[..split], text[split..].trim());
    let value: f64 = number
        .parse()
        .map_err(|_| format!("`{number}` is not a number"))?;
    let factor = D::factor(unit).ok_or_else(|| {
        format!("unknown {} unit `{unit}` (accepted: {})", D::NAME, D::accepted())
    })?;
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(Quantity::new(value * factor))
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        struct V<D>(PhantomData<D>);
        impl<D: Dimension> Visitor<'_> for V<D> {
            type Value = Quantity<D>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a {} string such as \"1 {}\"", D::NAME, D::CANONICAL)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse::<D>(v).map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Err(E::custom(format!("{v} has no unit; write \"{v} {}\"", D::CANONICAL)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Err(E::custom(format!("{v} has no unit; write \"{v} {}\"", D::CANONICAL)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Err(E::custom(format!("{v} has no unit; write \"{v} {}\"", D::CANONICAL)))
            }
        }
        d.deserialize_str(V(PhantomData))
    }
}
