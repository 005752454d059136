//! Edge statistics of random symmetric edge polytopes over Erdős–Rényi
//! graphs and of their unimodular triangulations.
//!
//! * [`graph`]: bit-packed simple graphs, G(n, p) sampling, path counts.
//! * [`sep`], [`tri`]: polytope and triangulation edge counting.
//! * [`closed_forms`]: exact expectations and variance principal terms.
//! * [`stein`]: discrete Malliavin gradients and the Kolmogorov bound terms.
//! * [`harness`]: ensembles, Kolmogorov distance, sweeps, CSV/JSON output.
//! * [`oracle`]: exact rational LP face test for small graphs.
//! * [`acceptance`]: the end-to-end acceptance checks.

pub mod acceptance;
pub mod closed_forms;
pub mod error;
pub mod graph;
pub mod harness;
pub mod numeric;
pub mod oracle;
mod pairs;
pub mod parallel;
pub mod rng;
pub mod sep;
pub mod stein;
pub mod tri;

pub use error::{Error, Result};

/// Which edge count is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Polytope,
    Triangulation,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Polytope => "polytope",
            Model::Triangulation => "triangulation",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "polytope" => Ok(Model::Polytope),
            "triangulation" => Ok(Model::Triangulation),
            other => Err(format!("unknown model `{other}` (expected polytope|triangulation)")),
        }
    }
}
