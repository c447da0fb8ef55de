use serde::{Deserialize, Serialize};

/// Distance of the `1 - ε` corner points from the endpoints.
///
/// Chained ⊕ evaluations near `±1` lose about `u / ε²` in value space for
/// generators with a simple pole at 1 (`u` the unit roundoff). At `1e-3` that
/// stays below the default tolerance; much smaller values make intermediate
/// results round onto neighbouring corners.
pub const CORNER_EPSILON: f64 = 1e-3;

/// Width of the shell around `±1` dropped by open-interval audits.
pub const OPEN_SHELL: f64 = 1e-12;

/// How an audit or classification picks its sample points.
///
/// Every sample set is a deterministic function of the plan: a uniform grid
/// per axis, `random_count` seeded random tuples, and all tuples built from
/// `corner_set`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub grid_resolution: usize,
    pub random_count: usize,
    pub seed: u64,
    pub corner_set: Vec<f64>,
    pub tolerance_value: f64,
    pub tolerance_generator: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            grid_resolution: 11,
            random_count: 10_000,
            seed: 42,
            corner_set: default_corners(),
            tolerance_value: 1e-9,
            tolerance_generator: 1e-9,
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_random(mut self, count: usize) -> Self {
        self.random_count = count;
        self
    }

    pub fn with_grid(mut self, resolution: usize) -> Self {
        self.grid_resolution = resolution;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance_value = tol;
        self.tolerance_generator = tol;
        self
    }

    /// Only grid points, no random or corner tuples.
    pub fn grid_only(resolution: usize) -> Self {
        SamplingPlan {
            grid_resolution: resolution,
            random_count: 0,
            corner_set: Vec::new(),
            ..SamplingPlan::default()
        }
    }
}

pub fn default_corners() -> Vec<f64> {
    vec![
        -1.0,
        -1.0 + CORNER_EPSILON,
        -0.5,
        0.0,
        0.5,
        1.0 - CORNER_EPSILON,
        1.0,
    ]
}
