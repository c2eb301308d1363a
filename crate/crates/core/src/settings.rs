/// Tunable knobs shared by every analysis routine.
///
/// `tol` is a relative tolerance: each routine multiplies it by the largest
/// coefficient norm of its input before comparing residuals or margins.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    /// Random restarts for the optimizer fallbacks.
    pub restarts: usize,
    /// Angle grid used by the support-function scans.
    pub angles: usize,
    /// Use the rayon pool when the `parallel` feature is enabled.
    pub parallel: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            seed: 0,
            restarts: 64,
            angles: 720,
            parallel: true,
        }
    }
}

impl Settings {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_angles(mut self, angles: usize) -> Self {
        self.angles = angles;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}
