use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::FanParams;

/// Quiescent ambient air.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Medium {
    pub density: f64,
    pub sound_speed: f64,
    pub reference_pressure: f64,
}

impl Default for Medium {
    fn default() -> Self {
        Self {
            density: 1.225,
            sound_speed: 340.0,
            reference_pressure: 2e-5,
        }
    }
}

impl Medium {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("density", self.density),
            ("sound_speed", self.sound_speed),
            ("reference_pressure", self.reference_pressure),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "medium.{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observer {
    pub name: String,
    /// Stationary-frame position, m.
    pub position: [f64; 3],
}

impl Observer {
    pub fn new(name: impl Into<String>, position: Vector3<f64>) -> Self {
        Self {
            name: name.into(),
            position: position.into(),
        }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::from(self.position)
    }
}

/// Test-chamber dimensions kept as run metadata; they do not enter the free-field solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Chamber {
    pub d3: f64,
    pub d4: f64,
    pub h1: f64,
    pub h2: f64,
}

impl Default for Chamber {
    fn default() -> Self {
        Self {
            d3: 0.6,
            d4: 1.1,
            h1: 0.4,
            h2: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSetup {
    pub observers: Vec<Observer>,
    #[serde(default)]
    pub chamber: Chamber,
}

/// Radial offset of both default microphones.
pub const DEFAULT_MIC_OFFSET: f64 = 0.5;

impl ObserverSetup {
    /// Default microphones for `params`.
    ///
    /// M1 sits 1 m upstream of the intake plane and M2 1 m behind the backplate,
    /// both 0.5 m off the axis. On the axis itself a rotor with identical,
    /// steadily loaded blades radiates no tone at all.
    pub fn default_for(params: &FanParams) -> Self {
        Self {
            observers: vec![
                Observer::new(
                    "M1",
                    Vector3::new(DEFAULT_MIC_OFFSET, 0.0, params.inlet_blade_height() + 1.0),
                ),
                Observer::new("M2", Vector3::new(DEFAULT_MIC_OFFSET, 0.0, -1.0)),
            ],
            chamber: Chamber::default(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Observer> {
        self.observers.iter().find(|o| o.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        if self.observers.is_empty() {
            return Err(Error::Config("at least one observer is required".into()));
        }
        for (i, o) in self.observers.iter().enumerate() {
            if o.name.is_empty()
                || !o
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(Error::Config(format!(
                    "observer name `{}` must be non-empty and use only letters, digits, `_` or `-`",
                    o.name
                )));
            }
            if self.observers[..i].iter().any(|p| p.name == o.name) {
                return Err(Error::Config(format!(
                    "duplicate observer name `{}`",
                    o.name
                )));
            }
            if !o.position.iter().all(|c| c.is_finite()) {
                return Err(Error::Config(format!(
                    "observer `{}` position is not finite",
                    o.name
                )));
            }
        }
        Ok(())
    }
}
