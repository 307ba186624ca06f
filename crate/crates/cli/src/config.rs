//! Experiment configuration. Precedence: command-line flags beat config
//! file values, which beat the defaults below.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// group JSON file (disk model, decimal-string entries)
    pub group_file: String,
    /// cover degrees for the convergence experiment; degree 1 = base
    pub degrees: Vec<usize>,
    /// length-spectrum cutoff L
    pub cutoff: f64,
    /// real s values for series evaluations (Re(s) > 1)
    pub s_grid: Vec<f64>,
    /// additional complex s values as [re, im] pairs
    pub s_complex: Vec<[f64; 2]>,
    /// injectivity-radius thresholds R for bs_probability
    pub r_grid: Vec<f64>,
    /// displacement radii c for the orbit-count statistic
    pub c_grid: Vec<f64>,
    /// second point b of the two-point trace-formula identity
    pub b_point: f64,
    /// Monte Carlo samples per estimate
    pub samples: usize,
    /// master RNG seed
    pub seed: u64,
    /// working precision: < 64 selects f64, otherwise double-double
    pub precision_bits: u32,
    /// deduplication tolerance for ball enumeration
    pub dedup_tol: f64,
    /// constant C of the linear eigenvalue-counting bound check
    pub hkp_c: f64,
    pub graph_sizes: Vec<usize>,
    pub graph_degree: usize,
    pub graph_seeds: Vec<u64>,
    /// series point u as an exact fraction [num, den]
    pub graph_u: [i64; 2],
    pub graph_m_max: usize,
    pub graph_radius: usize,
    pub out_dir: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            group_file: "data/bolza.json".into(),
            degrees: vec![1, 2, 4, 8],
            cutoff: 6.0,
            s_grid: vec![1.1, 1.25, 1.5, 2.0, 3.0],
            s_complex: vec![[1.5, 1.0]],
            r_grid: vec![1.6],
            c_grid: vec![3.2],
            b_point: 3.0,
            samples: 100_000,
            seed: 7,
            precision_bits: 128,
            dedup_tol: 1e-12,
            hkp_c: 1.0,
            graph_sizes: vec![64, 256, 1024, 4096],
            graph_degree: 3,
            graph_seeds: vec![1, 2, 3, 4, 5],
            graph_u: [1, 4],
            graph_m_max: 12,
            graph_radius: 2,
            out_dir: "out".into(),
        }
    }
}

impl Config {
    pub fn load(path: &std::path::Path) -> Result<Self, crate::CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| crate::CliError::validation(format!("config {path:?}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| crate::CliError::validation(format!("config {path:?}: {e}")))
    }
}
