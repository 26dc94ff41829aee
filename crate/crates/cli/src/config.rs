use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA: &str = "hemifill/1";

/// Named tolerances and their defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("dirac", 2e-3),
    ("half_circle", 1e-9),
    ("identity", 1e-2),
    ("isometry", 5e-3),
    ("lipschitz", 5e-3),
    ("ratio_above", 2e-2),
    ("ratio_below", 1e-3),
    ("residue", 1e-9),
    ("slack", 2e-2),
    ("transport", 1e-9),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub grid_size: usize,
    pub quadrature: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(
        grid_size: usize,
        quadrature: usize,
        seed: u64,
        overrides: &[String],
        format: Format,
        output: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let mut tolerances: BTreeMap<String, f64> = TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for item in overrides {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--tol expects name=value, got `{item}`")))?;
            let slot = tolerances.get_mut(name).ok_or_else(|| {
                let known: Vec<&str> = TOLERANCES.iter().map(|t| t.0).collect();
                CliError::Usage(format!("unknown tolerance `{name}` (known: {})", known.join(", ")))
            })?;
            let v: f64 = value
                .parse()
                .map_err(|_| CliError::Usage(format!("tolerance `{name}` has non-numeric value `{value}`")))?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(CliError::Usage(format!("tolerance `{name}` must be positive, got {v}")));
            }
            *slot = v;
        }
        if grid_size < hemifill::embedding::MIN_GRID {
            return Err(CliError::Usage(format!(
                "--grid must be at least {}",
                hemifill::embedding::MIN_GRID
            )));
        }
        if quadrature < 2 {
            return Err(CliError::Usage("--quad must be at least 2".into()));
        }
        Ok(Self {
            grid_size,
            quadrature,
            seed,
            tolerances,
            format,
            output,
        })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}
