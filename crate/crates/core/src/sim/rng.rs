use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// What a substream is used for. Distinct tags give independent streams for
/// the same trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Purpose {
    NoiseOnly = 1,
    SignalPresent = 2,
    Bias = 3,
    Spectrum = 4,
}

/// Counter-addressed random stream: the output depends only on
/// `(seed, trial, purpose)`, never on which worker draws it or when.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn for_trial(seed: u64, trial: u64, purpose: Purpose) -> Self {
        assert!(trial < 1 << 56, "trial index {trial} exceeds the stream space");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((trial << 8) | purpose as u64);
        Self { rng }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Circular complex Gaussian with `E|z|² = variance`.
    pub fn complex_normal(&mut self, variance: f64) -> Complex64 {
        let s = (0.5 * variance).sqrt();
        let re = self.standard_normal();
        let im = self.standard_normal();
        Complex64::new(s * re, s * im)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.rng.random_range(lo..hi)
    }
}
