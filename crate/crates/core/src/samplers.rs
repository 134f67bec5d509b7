//! Random streams and the two Archimedean sampling engines.
//!
//! Samplers hand back *latent* coordinates `tᵢ = Φ^←(Uᵢ)` by default. The
//! uniform `Uᵢ = Φ(tᵢ)` and its complement `1 − Uᵢ` can both be recovered
//! from `tᵢ` without rounding loss, which matters when `Uᵢ` sits within
//! 1e-10 of one. The `sample_*` functions return uniforms for callers that
//! do not care.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::archimedean::{kendall_cond_t_step, Generator, KendallConditional, RadialDistribution};
use crate::error::{domain, Result};

/// A reproducible random stream identified by `(seed, stream_id)`.
///
/// Distinct stream ids index disjoint ChaCha streams under the same key,
/// so parallel workers never share draws.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the open interval `(0, 1)`: 53 random bits centred in
    /// their cell, so neither 0 nor 1 is ever returned.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[a, b]`.
    #[inline]
    pub fn uniform_in(&mut self, a: f64, b: f64) -> f64 {
        a + (b - a) * self.uniform()
    }

    /// Standard exponential by inversion.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}

/// A point of the open unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    pub w: Vec<f64>,
}

impl SimplexPoint {
    pub fn dim(&self) -> usize {
        self.w.len()
    }
}

/// Uniform draw on the unit simplex: normalised i.i.d. exponentials.
pub fn sample_simplex(n: usize, rng: &mut RngStream) -> SimplexPoint {
    let mut w: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    SimplexPoint { w }
}

/// Inverse-CDF draw from the radial law.
pub fn sample_radial(rc: &RadialDistribution, rng: &mut RngStream) -> Result<f64> {
    rc.quantile(rng.uniform())
}

/// Conditioning band for one coordinate of a copula draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Band {
    /// `Uᵢ ∈ [a, b]`.
    Lower(f64, f64),
    /// `1 − Uᵢ ∈ [a, b]`; the form to use when the band hugs `u = 1`.
    Upper(f64, f64),
}

impl Band {
    fn check(&self) -> Result<()> {
        let (a, b) = match *self {
            Band::Lower(a, b) | Band::Upper(a, b) => (a, b),
        };
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(domain!("conditioning band needs 0 <= a < b <= 1, got [{a}, {b}]"));
        }
        Ok(())
    }
}

/// Radial-simplex engine: `U = (Φ(RW₁), …, Φ(RWₙ))`.
#[derive(Debug, Clone)]
pub struct McNeilSampler {
    radial: RadialDistribution,
}

impl McNeilSampler {
    pub fn new(gen: Generator, n: usize) -> Result<Self> {
        Ok(Self { radial: RadialDistribution::new(gen, n)? })
    }

    pub fn radial(&self) -> &RadialDistribution {
        &self.radial
    }

    pub fn dim(&self) -> usize {
        self.radial.dim()
    }

    pub fn latent(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        let w = sample_simplex(self.dim(), rng);
        let r = sample_radial(&self.radial, rng)?;
        Ok(w.w.into_iter().map(|wi| r * wi).collect())
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        let g = self.radial.generator();
        Ok(self.latent(rng)?.into_iter().map(|t| g.value(t)).collect())
    }
}

/// Conditional-distribution engine: draw `U₁`, then `Z = C(U) | U₁`, then
/// split the remaining latent mass by stick-breaking.
#[derive(Debug, Clone)]
pub struct BrechmannSampler {
    kendall: KendallConditional,
}

impl BrechmannSampler {
    pub fn new(gen: Generator, n: usize) -> Result<Self> {
        Ok(Self { kendall: KendallConditional::new(gen, n)? })
    }

    pub fn dim(&self) -> usize {
        self.kendall.dim()
    }

    pub fn generator(&self) -> &Generator {
        self.kendall.generator()
    }

    /// Completes a draw given the latent first coordinate; `i` is the index
    /// the first coordinate is written to. Also returns `Φ^←(Z)`.
    fn complete(&self, i: usize, t1: f64, rng: &mut RngStream) -> Result<(Vec<f64>, f64)> {
        let n = self.dim();
        let t_z = self.kendall.inverse_latent(rng.uniform(), t1)?;
        let mut out = vec![0.0; n];
        out[i] = t1;
        let mut partial = t1;
        let others = (0..n).filter(|&k| k != i);
        for (step, k) in others.enumerate() {
            let j = step + 2;
            let v = if j < n { rng.uniform() } else { 0.5 };
            let t = kendall_cond_t_step(n, j, v, t_z, partial)?;
            out[k] = t;
            partial += t;
        }
        Ok((out, t_z))
    }

    /// Unconditional latent draw together with `Φ^←(Z)`.
    pub fn latent_with_z(&self, rng: &mut RngStream) -> Result<(Vec<f64>, f64)> {
        let t1 = self.generator().inverse(rng.uniform());
        self.complete(0, t1, rng)
    }

    pub fn latent(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        Ok(self.latent_with_z(rng)?.0)
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        let g = self.generator();
        Ok(self.latent(rng)?.into_iter().map(|t| g.value(t)).collect())
    }

    /// Latent draw of `U | Uᵢ ∈ band`. By exchangeability the conditioned
    /// coordinate can play the role of the first one.
    pub fn latent_band(&self, i: usize, band: Band, rng: &mut RngStream) -> Result<Vec<f64>> {
        band.check()?;
        if i >= self.dim() {
            return Err(domain!("index {i} out of range for dimension {}", self.dim()));
        }
        let g = self.generator();
        let t1 = match band {
            Band::Lower(a, b) => g.inverse(rng.uniform_in(a, b)),
            Band::Upper(a, b) => g.inverse_complement(rng.uniform_in(a, b)),
        };
        Ok(self.complete(i, t1, rng)?.0)
    }
}

/// One copula draw by the radial-simplex engine.
pub fn sample_archimedean_mn(gen: &Generator, n: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    McNeilSampler::new(gen.clone(), n)?.sample(rng)
}

/// One copula draw by the conditional-distribution engine.
pub fn sample_archimedean_brechmann(
    gen: &Generator,
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    BrechmannSampler::new(gen.clone(), n)?.sample(rng)
}

/// One draw of `U | Uᵢ ∈ [a, b]`.
pub fn sample_conditional_band(
    gen: &Generator,
    n: usize,
    i: usize,
    a: f64,
    b: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let s = BrechmannSampler::new(gen.clone(), n)?;
    Ok(s.latent_band(i, Band::Lower(a, b), rng)?.into_iter().map(|t| gen.value(t)).collect())
}
