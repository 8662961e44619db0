//! Channel models and receiver LLR initialization.
//!
//! Codewords are BPSK-mapped (bit `b` to `1 - 2b`), scaled by a per-position
//! fading coefficient and disturbed by white Gaussian noise; the erasure
//! channel instead drops positions outright. The receiver is coherent: fade
//! records travel alongside the received samples.

use num_traits::{Float, FromPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// Floating-point scalar the receiver chain is generic over.
pub trait Scalar:
    Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static
{
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
    fn from_f64c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}

/// Magnitude used for known (non-erased) bits on the erasure channel. Values
/// at or above this level saturate the decoder's message clamp.
pub const ERASURE_KNOWN_LLR: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("block fading needs fades | n, got {fades} fades for length {n}")]
    BadBlockCount { fades: usize, n: usize },
    #[error("erasure probability {0} outside [0, 1]")]
    BadErasureProb(f64),
    #[error("scale parameter must be positive, got {0}")]
    BadScale(f64),
    #[error("received length {received} does not match fade record {fades}")]
    RecordMismatch { received: usize, fades: usize },
}

/// Channel family and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    /// Independent erasures with probability `epsilon`.
    Bec { epsilon: f64 },
    /// Unit gain, Gaussian noise only.
    Awgn,
    /// `fades` equal contiguous blocks, one Rayleigh coefficient each.
    BlockFading { fades: usize, rayleigh_scale: f64 },
    /// Independent Rayleigh coefficient per position.
    FastFading { rayleigh_scale: f64 },
}

/// A channel kind pinned to an operating point.
///
/// `snr_db` is Eb/N0 in decibels; the noise standard deviation follows from
/// the code rate as `sigma^2 = 1 / (2 R 10^(snr_db / 10))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub snr_db: f64,
}

impl ChannelSpec {
    pub fn validate(&self, n: usize) -> Result<(), ChannelError> {
        match self.kind {
            ChannelKind::Bec { epsilon } => {
                if !(0.0..=1.0).contains(&epsilon) {
                    return Err(ChannelError::BadErasureProb(epsilon));
                }
            }
            ChannelKind::Awgn => {}
            ChannelKind::BlockFading { fades, rayleigh_scale } => {
                if fades == 0 || n % fades != 0 {
                    return Err(ChannelError::BadBlockCount { fades, n });
                }
                if rayleigh_scale <= 0.0 {
                    return Err(ChannelError::BadScale(rayleigh_scale));
                }
            }
            ChannelKind::FastFading { rayleigh_scale } => {
                if rayleigh_scale <= 0.0 {
                    return Err(ChannelError::BadScale(rayleigh_scale));
                }
            }
        }
        Ok(())
    }

    /// Noise standard deviation at this operating point for rate `r`.
    pub fn noise_sigma(&self, rate: f64) -> f64 {
        (1.0 / (2.0 * rate * 10f64.powf(self.snr_db / 10.0))).sqrt()
    }
}

/// Channel-state information retained for the receiver.
#[derive(Debug, Clone, PartialEq)]
pub enum FadeRecord<T> {
    /// AWGN: all gains are one.
    Unfaded,
    /// One coefficient per block, in block order.
    Block(Vec<T>),
    /// One coefficient per position.
    PerPosition(Vec<T>),
    /// Erasure flags per position.
    Erasures(Vec<bool>),
}

/// Received samples plus the fade record.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput<T> {
    pub received: Vec<T>,
    pub fades: FadeRecord<T>,
}

/// Per-variable log-likelihood ratios, `log p(bit = 0) / p(bit = 1)`.
///
/// The value zero marks an erased or punctured position.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> LlrVector<T> {
    /// Forces the given positions to the erasure value.
    pub fn puncture(&mut self, positions: &[usize]) {
        for &p in positions {
            self.values[p] = T::zero();
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn rayleigh<T: Scalar, R: Rng + ?Sized>(scale: f64, rng: &mut R) -> T {
    // Inverse CDF; drawing u in [0, 1) keeps the log argument positive.
    let u = T::unit_uniform(rng);
    let one = T::one();
    T::from_f64c(scale) * ((one - u).ln() * T::from_f64c(-2.0)).sqrt()
}

/// Sends `codeword` through the channel.
pub fn transmit<T: Scalar, R: Rng + ?Sized>(
    codeword: &[u8],
    spec: &ChannelSpec,
    rate: f64,
    rng: &mut R,
) -> Result<ChannelOutput<T>, ChannelError> {
    spec.validate(codeword.len())?;
    let n = codeword.len();
    let bpsk =
        |b: u8| if b == 0 { T::one() } else { -T::one() };
    match &spec.kind {
        ChannelKind::Bec { epsilon } => {
            let eps = T::from_f64c(*epsilon);
            let mut received = Vec::with_capacity(n);
            let mut erased = Vec::with_capacity(n);
            for &b in codeword {
                let e = T::unit_uniform(rng) < eps;
                erased.push(e);
                received.push(if e { T::zero() } else { bpsk(b) });
            }
            Ok(ChannelOutput { received, fades: FadeRecord::Erasures(erased) })
        }
        ChannelKind::Awgn => {
            let sigma = T::from_f64c(spec.noise_sigma(rate));
            let received = codeword
                .iter()
                .map(|&b| bpsk(b) + sigma * T::standard_normal(rng))
                .collect();
            Ok(ChannelOutput { received, fades: FadeRecord::Unfaded })
        }
        ChannelKind::BlockFading { fades, rayleigh_scale } => {
            let sigma = T::from_f64c(spec.noise_sigma(rate));
            let block = n / fades;
            let betas: Vec<T> = (0..*fades).map(|_| rayleigh(*rayleigh_scale, rng)).collect();
            let received = codeword
                .iter()
                .enumerate()
                .map(|(i, &b)| betas[i / block] * bpsk(b) + sigma * T::standard_normal(rng))
                .collect();
            Ok(ChannelOutput { received, fades: FadeRecord::Block(betas) })
        }
        ChannelKind::FastFading { rayleigh_scale } => {
            let sigma = T::from_f64c(spec.noise_sigma(rate));
            let alphas: Vec<T> = (0..n).map(|_| rayleigh(*rayleigh_scale, rng)).collect();
            let received = codeword
                .iter()
                .enumerate()
                .map(|(i, &b)| alphas[i] * bpsk(b) + sigma * T::standard_normal(rng))
                .collect();
            Ok(ChannelOutput { received, fades: FadeRecord::PerPosition(alphas) })
        }
    }
}

/// Builds the receiver LLRs for a channel output.
///
/// Gaussian kinds use `2 a_i r_i / sigma^2` with the known gain `a_i`; the
/// erasure channel assigns `+/-`[`ERASURE_KNOWN_LLR`] to known bits and zero
/// to erased ones. `punctured` positions are forced to zero last.
pub fn llr_init<T: Scalar>(
    output: &ChannelOutput<T>,
    spec: &ChannelSpec,
    rate: f64,
    punctured: Option<&[usize]>,
) -> Result<LlrVector<T>, ChannelError> {
    let n = output.received.len();
    let sigma = spec.noise_sigma(rate);
    let two_over_var = T::from_f64c(2.0 / (sigma * sigma));
    let values: Vec<T> = match (&spec.kind, &output.fades) {
        (ChannelKind::Bec { .. }, FadeRecord::Erasures(erased)) => {
            if erased.len() != n {
                return Err(ChannelError::RecordMismatch { received: n, fades: erased.len() });
            }
            let known = T::from_f64c(ERASURE_KNOWN_LLR);
            output
                .received
                .iter()
                .zip(erased)
                .map(|(&r, &e)| if e { T::zero() } else { known * r.signum() })
                .collect()
        }
        (ChannelKind::Awgn, FadeRecord::Unfaded) => {
            output.received.iter().map(|&r| two_over_var * r).collect()
        }
        (ChannelKind::BlockFading { fades, .. }, FadeRecord::Block(betas)) => {
            if betas.len() != *fades || n % fades != 0 {
                return Err(ChannelError::RecordMismatch { received: n, fades: betas.len() });
            }
            let block = n / fades;
            output
                .received
                .iter()
                .enumerate()
                .map(|(i, &r)| two_over_var * betas[i / block] * r)
                .collect()
        }
        (ChannelKind::FastFading { .. }, FadeRecord::PerPosition(alphas)) => {
            if alphas.len() != n {
                return Err(ChannelError::RecordMismatch { received: n, fades: alphas.len() });
            }
            output.received.iter().zip(alphas).map(|(&r, &a)| two_over_var * a * r).collect()
        }
        (_, fades) => {
            let len = match fades {
                FadeRecord::Unfaded => 0,
                FadeRecord::Block(b) => b.len(),
                FadeRecord::PerPosition(a) => a.len(),
                FadeRecord::Erasures(e) => e.len(),
            };
            return Err(ChannelError::RecordMismatch { received: n, fades: len });
        }
    };
    let mut llr = LlrVector { values };
    if let Some(mask) = punctured {
        llr.puncture(mask);
    }
    Ok(llr)
}
