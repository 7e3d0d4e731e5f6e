//! Seeded random streams and the three stochastic processes that drive
//! waypoint generation: Lévy (symmetric α-stable), Brownian (Gaussian) and
//! Uniform.
//!
//! Every agent and every mission owns its own [`RngStream`]. Streams are
//! ChaCha8 keystreams keyed by a 64-bit seed and separated by a 64-bit
//! stream id, so `(run seed, agent index)` pairs never share state and give
//! the same sequence on every platform.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::{Distribution, Open01};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::SamplerError;
use crate::geometry::Vec2;

/// Maximum consecutive degenerate (zero or non-finite norm) draws tolerated
/// by [`sample_direction`].
pub const MAX_DIRECTION_REDRAWS: usize = 100;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// A fresh stream with the same seed and a different id.
    pub fn split(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Uniform draw on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// SplitMix64 finalizer; used to derive well-separated run seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Levy,
    Brownian,
    Uniform,
}

/// A stochastic process with its parameters. Defaults follow the usual
/// simulation settings: λ = 1, α = 1 for Lévy; σ = 1 for Brownian;
/// `[0, 1]` for Uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StochasticProcess {
    Levy {
        #[serde(default = "one")]
        lambda: f64,
        #[serde(default = "one")]
        alpha: f64,
    },
    Brownian {
        #[serde(default = "one")]
        sigma: f64,
    },
    Uniform {
        #[serde(default)]
        lower: f64,
        #[serde(default = "one")]
        upper: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl StochasticProcess {
    pub const LEVY: Self = Self::Levy { lambda: 1.0, alpha: 1.0 };
    pub const BROWNIAN: Self = Self::Brownian { sigma: 1.0 };
    pub const UNIFORM: Self = Self::Uniform { lower: 0.0, upper: 1.0 };

    pub fn default_for(kind: ProcessKind) -> Self {
        match kind {
            ProcessKind::Levy => Self::LEVY,
            ProcessKind::Brownian => Self::BROWNIAN,
            ProcessKind::Uniform => Self::UNIFORM,
        }
    }

    pub fn kind(&self) -> ProcessKind {
        match self {
            Self::Levy { .. } => ProcessKind::Levy,
            Self::Brownian { .. } => ProcessKind::Brownian,
            Self::Uniform { .. } => ProcessKind::Uniform,
        }
    }

    /// Short label used in reports: `LS`, `BS` or `US`.
    pub fn label(&self) -> &'static str {
        match self.kind() {
            ProcessKind::Levy => "LS",
            ProcessKind::Brownian => "BS",
            ProcessKind::Uniform => "US",
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        match *self {
            Self::Levy { lambda, alpha } => check_levy(lambda, alpha),
            Self::Brownian { sigma } => check_sigma(sigma),
            Self::Uniform { lower, upper } => check_bounds(lower, upper),
        }
    }

    /// One scalar draw. Parameters must already be valid.
    fn draw(&self, rng: &mut RngStream) -> f64 {
        match *self {
            Self::Levy { lambda, alpha } => levy_unchecked(rng, lambda, alpha),
            Self::Brownian { sigma } => sigma * rng.sample::<f64, _>(StandardNormal),
            Self::Uniform { lower, upper } => lower + (upper - lower) * rng.unit(),
        }
    }
}

/// How the Uniform process is turned into a heading.
///
/// `Raw` normalizes two independent draws exactly like the other processes;
/// with the default `[0, 1]` bounds every heading lies in the first
/// quadrant. `Angle` draws a heading uniformly on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniformDirectionMode {
    Raw,
    #[default]
    Angle,
}

fn check_levy(lambda: f64, alpha: f64) -> Result<(), SamplerError> {
    if !(lambda > 0.0 && lambda <= 2.0) {
        return Err(SamplerError::Domain { name: "levy lambda", value: lambda });
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(SamplerError::Domain { name: "levy alpha", value: alpha });
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<(), SamplerError> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(SamplerError::Domain { name: "brownian sigma", value: sigma })
    }
}

fn check_bounds(lower: f64, upper: f64) -> Result<(), SamplerError> {
    if lower < upper && lower.is_finite() && upper.is_finite() {
        Ok(())
    } else {
        Err(SamplerError::EmptyInterval { lower, upper })
    }
}

/// Symmetric α-stable draw with characteristic function `exp(-alpha |m|^lambda)`,
/// via the Chambers–Mallows–Stuck transform.
///
/// `lambda = 2` is a Gaussian with variance `2 * alpha`; `lambda = 1` is a
/// Cauchy with scale `alpha`.
pub fn sample_levy(rng: &mut RngStream, lambda: f64, alpha: f64) -> Result<f64, SamplerError> {
    check_levy(lambda, alpha)?;
    Ok(levy_unchecked(rng, lambda, alpha))
}

fn levy_unchecked(rng: &mut RngStream, lambda: f64, alpha: f64) -> f64 {
    let u: f64 = Open01.sample(rng);
    let v = PI * (u - 0.5);
    let scale = alpha.powf(1.0 / lambda);
    if lambda == 1.0 {
        return scale * v.tan();
    }
    let w: f64 = rng.sample(Exp1);
    let a = (lambda * v).sin() / v.cos().powf(1.0 / lambda);
    let b = (((1.0 - lambda) * v).cos() / w).powf((1.0 - lambda) / lambda);
    debug_assert!(v.abs() < FRAC_PI_2);
    scale * a * b
}

/// Zero-mean Gaussian draw with standard deviation `sigma`.
pub fn sample_gaussian(rng: &mut RngStream, sigma: f64) -> Result<f64, SamplerError> {
    check_sigma(sigma)?;
    Ok(sigma * rng.sample::<f64, _>(StandardNormal))
}

/// Uniform draw on `[v_l, v_u)`.
pub fn sample_uniform(rng: &mut RngStream, v_l: f64, v_u: f64) -> Result<f64, SamplerError> {
    check_bounds(v_l, v_u)?;
    Ok(v_l + (v_u - v_l) * rng.unit())
}

/// Unit heading from two independent draws of `process`, normalized.
/// Degenerate pairs (zero or overflowing norm) are redrawn.
pub fn sample_direction(rng: &mut RngStream, process: &StochasticProcess) -> Result<Vec2, SamplerError> {
    process.validate()?;
    direction_unchecked(rng, process)
}

/// Heading for a search policy: like [`sample_direction`], except that the
/// Uniform process honours `mode`.
pub fn sample_heading(
    rng: &mut RngStream,
    process: &StochasticProcess,
    mode: UniformDirectionMode,
) -> Result<Vec2, SamplerError> {
    if process.kind() == ProcessKind::Uniform && mode == UniformDirectionMode::Angle {
        return Ok(Vec2::from_angle(2.0 * PI * rng.unit()));
    }
    direction_unchecked(rng, process)
}

fn direction_unchecked(rng: &mut RngStream, process: &StochasticProcess) -> Result<Vec2, SamplerError> {
    for _ in 0..MAX_DIRECTION_REDRAWS {
        let s = Vec2::new(process.draw(rng), process.draw(rng));
        if let Some(d) = s.normalized() {
            return Ok(d);
        }
    }
    Err(SamplerError::DegenerateDirection(MAX_DIRECTION_REDRAWS))
}
