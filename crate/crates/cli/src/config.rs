//! Optional JSON configuration file. Every field mirrors a flag of the same
//! subcommand; a flag given on the command line always wins.
//!
//! ```json
//! {
//!   "threads": 2,
//!   "sweep": { "n": "1.125", "kr": "0.1:30:0.1", "methods": "mie,semigroup,rg", "truncation": "200" },
//!   "bounds": { "chi": "0.1", "kr": "1", "threshold": 0.1 },
//!   "lab": { "voxels": 6, "chi": "-0.5i", "skin": "10,100,1000" }
//! }
//! ```

use anyhow::{Context, Result};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub threads: Option<usize>,
    #[serde(default)]
    pub sweep: SweepFile,
    #[serde(default)]
    pub bounds: BoundsFile,
    #[serde(default)]
    pub lab: LabFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub preset: Option<String>,
    pub n: Option<String>,
    pub kr: Option<String>,
    pub rho: Option<String>,
    pub methods: Option<String>,
    pub truncation: Option<String>,
    pub out: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    pub chi: Option<String>,
    pub kr: Option<String>,
    pub threshold: Option<f64>,
    pub out: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabFile {
    pub voxels: Option<usize>,
    pub kr: Option<f64>,
    pub chi: Option<String>,
    pub tau_max: Option<f64>,
    pub skin: Option<String>,
    pub rho_f: Option<f64>,
    pub out_dir: Option<String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
