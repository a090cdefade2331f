//! Group spec files and run settings.
//!
//! A spec file is JSON with rationals as canonical strings:
//!
//! ```json
//! {
//!   "backend": {"kind": "curve", "a": "0", "b": "-2"},
//!   "generators": [["3", "5"]],
//!   "rank": 1,
//!   "label": "y^2 = x^3 - 2"
//! }
//! ```
//!
//! `{"kind": "circle"}` selects the unit circle. `rank` and `label` are
//! optional; when `rank` is present it must equal the number of
//! non-torsion generators.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coset::DEFAULT_CEILING;
use crate::error::{Error, Result};
use crate::fg::{GammaSpec, DEFAULT_COEFF_BOUND};
use crate::group::{Backend, Point};
use crate::num::parse_canonical_rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BackendSpec {
    Curve { a: String, b: String },
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    pub backend: BackendSpec,
    #[serde(default)]
    pub generators: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GroupSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("invalid spec file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn backend(&self) -> Result<Backend> {
        match &self.backend {
            BackendSpec::Curve { a, b } => {
                Backend::curve(parse_canonical_rational(a)?, parse_canonical_rational(b)?)
            }
            BackendSpec::Circle => Ok(Backend::Circle),
        }
    }

    pub fn generator_points(&self) -> Result<Vec<Point>> {
        let backend = self.backend()?;
        self.generators
            .iter()
            .map(|[x, y]| {
                let p = Point::affine(parse_canonical_rational(x)?, parse_canonical_rational(y)?);
                Ok(backend.normalize(p))
            })
            .collect()
    }

    /// Validates everything and builds Γ.
    pub fn to_gamma(&self) -> Result<GammaSpec> {
        let backend = self.backend()?;
        let gens = self.generator_points()?;
        GammaSpec::from_generators(backend, &gens, self.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Human,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub coeff_bound: u64,
    pub height_bound: u64,
    pub ceiling: u64,
    pub output: OutputMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            coeff_bound: DEFAULT_COEFF_BOUND,
            height_bound: 100,
            ceiling: DEFAULT_CEILING,
            output: OutputMode::Human,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("coefficient bound", self.coeff_bound),
            ("height bound", self.height_bound),
            ("ceiling", self.ceiling),
        ] {
            if v == 0 {
                return Err(Error::input(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}
