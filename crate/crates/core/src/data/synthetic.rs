use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Open01, StandardNormal};

use super::{LabeledDataset, SyntheticSpec, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, Matrix, Vector};
use crate::objective::LassoProblem;

const STREAM_SOLUTION: u64 = 1;
const STREAM_DESIGN: u64 = 2;
const STREAM_NOISE: u64 = 3;
pub(crate) const STREAM_SPLIT: u64 = 4;

/// SplitMix64, used only to spread a 64-bit seed over a 256-bit key.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// ChaCha20 keyed from `seed` on an independent `stream`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut mix = SplitMix64::new(seed);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&mix.next_u64().to_le_bytes());
    }
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Lower-triangular factor of the correlation matrix `c_ij = rho^|i-j|`.
pub fn ar_correlation_cholesky(d: usize, rho: f64) -> Result<Matrix> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("rho {rho} must be in [0, 1)")));
    }
    let mut c = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            c.set(i, j, rho.powi(i.abs_diff(j) as i32));
        }
    }
    cholesky(&c)
}

/// Draws `x*`, the design `A` with row covariance `C`, and `b = A x* + ξ`.
///
/// The three draws use separate streams of the same seed, so for example
/// changing `m` leaves `x*` untouched. Normals come from the ziggurat
/// sampler, support values from the open interval (0, 1).
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let SyntheticSpec { d, m, s, seed, rho } = *spec;
    let q = ar_correlation_cholesky(d, rho)?;

    let mut rng = stream_rng(seed, STREAM_SOLUTION);
    let mut x_star = Vector::zeros(d);
    for xi in x_star.iter_mut().take(s) {
        *xi = rng.sample(Open01);
    }

    let mut rng = stream_rng(seed, STREAM_DESIGN);
    let mut a = Matrix::zeros(m, d);
    let mut z = vec![0.0; d];
    for i in 0..m {
        for zk in z.iter_mut() {
            *zk = rng.sample(StandardNormal);
        }
        let row = a.row_mut(i);
        for (j, out) in row.iter_mut().enumerate() {
            let qj = q.row(j);
            *out = qj[..=j].iter().zip(&z[..=j]).map(|(q, z)| q * z).sum();
        }
    }

    let mut rng = stream_rng(seed, STREAM_NOISE);
    let mut b = a.matvec(&x_star)?;
    for bi in b.iter_mut() {
        *bi += rng.sample::<f64, _>(StandardNormal);
    }

    Ok(LabeledDataset {
        problem: LassoProblem::new(a, b, DEFAULT_ALPHA)?,
        ground_truth: Some(x_star),
        spec: Some(spec.clone()),
        column_names: None,
        target_name: None,
    })
}
