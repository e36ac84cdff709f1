//! Synthetic OFDM passive-radar scenes and received-data generation.
//!
//! A scene is a list of propagation paths (targets, clutter, one direct
//! path), each with a delay, Doppler frequency, and complex attenuation. The
//! received data over `M` blocks and `N` subcarriers collapses to
//! `r = vec(S . Z + V)` with per-entry QPSK symbols `S`, the path response
//! `Z`, and complex Gaussian noise `V`; demodulation mistakes at a given
//! bit-error rate produce the sparse error vector `e` with entries
//! `(s - s_hat) z`.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::{CVector, C64, SPEED_OF_LIGHT};

/// OFDM frame geometry and carrier.
///
/// `M` blocks of `N` orthogonal subcarriers; the receiver window length `T`
/// fixes the subcarrier spacing `delta_f = 1/T` and, with the cyclic prefix,
/// the block duration `t_bar = T + T_cp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfdmConfig {
    /// Number of blocks.
    #[serde(rename = "M")]
    pub blocks: usize,
    /// Number of subcarriers per block.
    #[serde(rename = "N")]
    pub subcarriers: usize,
    /// Symbol window length in seconds.
    #[serde(rename = "T")]
    pub symbol_len: f64,
    /// Cyclic-prefix length in seconds.
    #[serde(rename = "T_cp")]
    pub cyclic_prefix: f64,
    /// Carrier frequency in Hz.
    #[serde(rename = "f_c")]
    pub carrier_freq: f64,
}

impl OfdmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.blocks < 1 || self.subcarriers < 1 {
            return Err(invalid("M and N must be at least 1"));
        }
        if !(self.symbol_len > 0.0) {
            return Err(invalid("symbol length T must be positive"));
        }
        if self.cyclic_prefix < 0.0 {
            return Err(invalid("cyclic prefix must be nonnegative"));
        }
        Ok(())
    }

    /// Subcarrier spacing `1/T` in Hz.
    pub fn delta_f(&self) -> f64 {
        1.0 / self.symbol_len
    }

    /// Block duration `T + T_cp` in seconds.
    pub fn block_len(&self) -> f64 {
        self.symbol_len + self.cyclic_prefix
    }

    pub fn grid_size(&self) -> usize {
        self.blocks * self.subcarriers
    }
}

/// Path category used for post-estimation filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathClass {
    Target,
    Clutter,
    Direct,
}

impl std::fmt::Display for PathClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathClass::Target => write!(f, "target"),
            PathClass::Clutter => write!(f, "clutter"),
            PathClass::Direct => write!(f, "direct"),
        }
    }
}

/// One propagation path in physical units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathParams {
    /// Delay in seconds.
    pub tau: f64,
    /// Doppler frequency in Hz.
    pub f: f64,
    /// Complex attenuation.
    #[serde(rename = "A")]
    pub amp: C64,
    pub class: PathClass,
}

impl PathParams {
    pub fn validate(&self) -> Result<()> {
        if self.tau < 0.0 {
            return Err(invalid("path delay must be nonnegative"));
        }
        if self.class == PathClass::Direct && self.tau != 0.0 {
            return Err(invalid("the direct path must have zero delay"));
        }
        Ok(())
    }
}

/// A path in the normalized domain the optimizer works in:
/// Doppler `phi = frac(f (T + T_cp))`, delay `psi = frac(delta_f tau)`, both
/// in `[0, 1)`, with amplitude `alpha = A T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPath {
    pub phi: f64,
    pub psi: f64,
    pub alpha: C64,
}

/// Scene description: paths plus the nuisance parameters of the receiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub paths: Vec<PathParams>,
    pub rng_seed: u64,
    /// Standard deviation of the per-entry complex Gaussian noise, i.e.
    /// `E|v|^2 = noise_sigma^2` (half the variance per real component).
    pub noise_sigma: f64,
    /// Bit-error rate of the demodulated reference symbols, in `[0, 0.5]`.
    pub ber: f64,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.ber) {
            return Err(invalid(format!("ber must lie in [0, 0.5], got {}", self.ber)));
        }
        if self.noise_sigma < 0.0 {
            return Err(invalid("noise sigma must be nonnegative"));
        }
        for p in &self.paths {
            p.validate()?;
        }
        Ok(())
    }

    pub fn count(&self, class: PathClass) -> usize {
        self.paths.iter().filter(|p| p.class == class).count()
    }
}

/// Hidden ground truth carried alongside synthesized data for scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneTruth {
    pub z_true: Vec<C64>,
    pub e_true: Vec<C64>,
    pub paths: Vec<NormalizedPath>,
    pub classes: Vec<PathClass>,
}

/// Observed data handed to the solvers: the received vector `r`, the
/// estimated symbol diagonal `s_hat`, and the grid dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceivedData {
    pub r: CVector,
    pub s_hat: CVector,
    /// `(M, N)` = (blocks, subcarriers).
    pub dims: (usize, usize),
    pub truth: Option<SceneTruth>,
}

impl ReceivedData {
    pub fn grid_size(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn validate(&self) -> Result<()> {
        let mn = self.grid_size();
        if self.r.len() != mn || self.s_hat.len() != mn {
            return Err(invalid("r and s_hat must have length M*N"));
        }
        Ok(())
    }

    /// Writes the observed vectors as CSV with columns
    /// `index, re_r, im_r, re_shat, im_shat`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,re_r,im_r,re_shat,im_shat")?;
        for i in 0..self.r.len() {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                i, self.r[i].re, self.r[i].im, self.s_hat[i].re, self.s_hat[i].im
            )?;
        }
        Ok(())
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Gray-mapped QPSK: bit pairs `(b0, b1)` map to
/// `00 -> (1+i)/sqrt2`, `01 -> (-1+i)/sqrt2`, `11 -> (-1-i)/sqrt2`,
/// `10 -> (1-i)/sqrt2`. Expects `2 * count` bits.
pub fn qpsk_modulate(bits: &[u8], count: usize) -> Result<CVector> {
    if bits.len() != 2 * count {
        return Err(invalid(format!(
            "expected {} bits for {count} symbols, got {}",
            2 * count,
            bits.len()
        )));
    }
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(invalid(format!("bits must be 0 or 1, got {b}")));
    }
    Ok(CVector::from_fn(count, |i, _| {
        let (b0, b1) = (bits[2 * i], bits[2 * i + 1]);
        let im = if b0 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
        let re = if b1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
        Complex64::new(re, im)
    }))
}

/// Flips each bit independently with probability `ber`.
pub fn corrupt_bits<R: Rng>(bits: &[u8], ber: f64, rng: &mut R) -> Result<Vec<u8>> {
    if !(0.0..=0.5).contains(&ber) {
        return Err(invalid(format!("ber must lie in [0, 0.5], got {ber}")));
    }
    Ok(bits
        .iter()
        .map(|&b| if rng.random_bool(ber) { 1 - b } else { b })
        .collect())
}

/// The unit 2D complex-exponential atom: entry `n*M + m` equals
/// `exp(i 2 pi (m phi - n psi))`, the column-major vectorization of the
/// rank-one response `b(phi) g(psi)^H`.
pub fn steering_atom(phi: f64, psi: f64, blocks: usize, subcarriers: usize) -> Result<CVector> {
    if !(0.0..1.0).contains(&phi) || !(0.0..1.0).contains(&psi) {
        return Err(invalid(format!(
            "normalized coordinates must lie in [0, 1), got ({phi}, {psi})"
        )));
    }
    Ok(CVector::from_fn(blocks * subcarriers, |idx, _| {
        let m = (idx % blocks) as f64;
        let n = (idx / blocks) as f64;
        Complex64::from_polar(1.0, std::f64::consts::TAU * (m * phi - n * psi))
    }))
}

/// Superimposes the paths' atoms: `z = sum_k alpha_k a(phi_k, psi_k)`.
/// An empty path list yields the zero vector.
pub fn synthesize_response(
    paths: &[NormalizedPath],
    blocks: usize,
    subcarriers: usize,
) -> Result<CVector> {
    let mut z = CVector::zeros(blocks * subcarriers);
    for p in paths {
        let atom = steering_atom(p.phi, p.psi, blocks, subcarriers)?;
        z.zip_apply(&atom, |acc, a| *acc += p.alpha * a);
    }
    Ok(z)
}

/// Maps a physical path into the normalized domain.
pub fn physical_to_normalized(path: &PathParams, cfg: &OfdmConfig) -> NormalizedPath {
    NormalizedPath {
        phi: frac(path.f * cfg.block_len()),
        psi: frac(cfg.delta_f() * path.tau),
        alpha: path.amp * cfg.symbol_len,
    }
}

/// Fractional part mapped into `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Wrapped distance on the unit circle, in `[0, 0.5]`.
pub fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Monostatic delay for a one-way range in meters: `tau = 2 R / c`.
pub fn delay_from_range(range_m: f64) -> f64 {
    2.0 * range_m / SPEED_OF_LIGHT
}

/// Monostatic Doppler for a radial speed in m/s: `f = 2 v f_c / c`.
pub fn doppler_from_speed(speed_mps: f64, carrier_freq: f64) -> f64 {
    2.0 * speed_mps * carrier_freq / SPEED_OF_LIGHT
}

/// Interval bounds for random scene generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneRanges {
    /// Target/clutter range interval in meters.
    pub range_m: (f64, f64),
    /// Target radial-speed interval in m/s.
    pub target_speed_mps: (f64, f64),
    /// Clutter radial-speed interval in m/s.
    pub clutter_speed_mps: (f64, f64),
    /// Attenuation magnitude interval (log-uniform draw).
    pub amp_mag: (f64, f64),
    /// Direct-path amplitude as a multiple of the largest target amplitude.
    pub direct_factor: f64,
}

impl Default for SceneRanges {
    fn default() -> Self {
        Self {
            range_m: (0.0, 30_000.0),
            target_speed_mps: (-148.0, 148.0),
            clutter_speed_mps: (-3.0, 3.0),
            amp_mag: (0.5, 1.5),
            direct_factor: 10.0,
        }
    }
}

const COLLISION_TOL: f64 = 1e-6;
const COLLISION_RETRIES: usize = 64;

/// Draws a random scene: one direct path plus `n_clutter` clutter paths and
/// `n_targets` target paths. Target draws whose normalized coordinates
/// collide with an existing path (either axis within 1e-6, wrapped) are
/// resampled a bounded number of times.
pub fn scene_random<R: Rng>(
    cfg: &OfdmConfig,
    n_targets: usize,
    n_clutter: usize,
    ranges: &SceneRanges,
    rng: &mut R,
) -> Result<Scene> {
    cfg.validate()?;
    let mut paths: Vec<PathParams> = Vec::with_capacity(n_targets + n_clutter + 1);
    let mut normalized: Vec<(f64, f64)> = Vec::new();

    let draw_amp = |rng: &mut R| -> C64 {
        let (lo, hi) = ranges.amp_mag;
        let mag = (lo.ln() + rng.random_range(0.0..=1.0) * (hi.ln() - lo.ln())).exp();
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        C64::from_polar(mag, phase)
    };

    let mut max_target_amp: f64 = 0.0;
    for _ in 0..n_targets {
        let mut placed = false;
        for _ in 0..COLLISION_RETRIES {
            let range = rng.random_range(ranges.range_m.0..=ranges.range_m.1);
            let speed = rng.random_range(ranges.target_speed_mps.0..=ranges.target_speed_mps.1);
            let amp = draw_amp(rng);
            let path = PathParams {
                tau: delay_from_range(range),
                f: doppler_from_speed(speed, cfg.carrier_freq),
                amp,
                class: PathClass::Target,
            };
            let norm = physical_to_normalized(&path, cfg);
            let collides = normalized.iter().any(|&(phi, psi)| {
                wrapped_distance(phi, norm.phi) < COLLISION_TOL
                    || wrapped_distance(psi, norm.psi) < COLLISION_TOL
            });
            if !collides {
                normalized.push((norm.phi, norm.psi));
                max_target_amp = max_target_amp.max(amp.norm());
                paths.push(path);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(invalid(
                "could not place a target without normalized-coordinate collisions",
            ));
        }
    }

    for _ in 0..n_clutter {
        let range = rng.random_range(ranges.range_m.0..=ranges.range_m.1);
        let speed = rng.random_range(ranges.clutter_speed_mps.0..=ranges.clutter_speed_mps.1);
        let path = PathParams {
            tau: delay_from_range(range),
            f: doppler_from_speed(speed, cfg.carrier_freq),
            amp: draw_amp(rng),
            class: PathClass::Clutter,
        };
        let norm = physical_to_normalized(&path, cfg);
        normalized.push((norm.phi, norm.psi));
        paths.push(path);
    }

    let direct_mag = if n_targets > 0 {
        ranges.direct_factor * max_target_amp
    } else {
        ranges.direct_factor * ranges.amp_mag.1
    };
    let direct_phase = rng.random_range(0.0..std::f64::consts::TAU);
    paths.push(PathParams {
        tau: 0.0,
        f: 0.0,
        amp: C64::from_polar(direct_mag, direct_phase),
        class: PathClass::Direct,
    });

    Ok(Scene {
        paths,
        rng_seed: 0,
        noise_sigma: 0.0,
        ber: 0.0,
    })
}

/// Noise level that realizes a target SNR (dB) defined as
/// `SNR = ||z||^2 / (MN sigma^2)`.
pub fn noise_sigma_for_snr(z: &CVector, snr_db: f64) -> f64 {
    let mn = z.len() as f64;
    (z.norm_squared() / (mn * 10f64.powf(snr_db / 10.0))).sqrt()
}

/// Synthesizes the received data of a scene: draws true QPSK symbols,
/// corrupts their bits at the scene's BER to form the estimated symbols,
/// adds complex Gaussian noise, and records the hidden truth
/// (`e = (s - s_hat) . z` entrywise).
pub fn synthesize_received(scene: &Scene, cfg: &OfdmConfig) -> Result<ReceivedData> {
    scene.validate()?;
    cfg.validate()?;
    let mn = cfg.grid_size();
    let mut rng = ChaCha12Rng::seed_from_u64(scene.rng_seed);

    let normalized: Vec<NormalizedPath> = scene
        .paths
        .iter()
        .map(|p| physical_to_normalized(p, cfg))
        .collect();
    let z_true = synthesize_response(&normalized, cfg.blocks, cfg.subcarriers)?;

    let bits: Vec<u8> = (0..2 * mn).map(|_| rng.random_range(0..2u8)).collect();
    let s_true = qpsk_modulate(&bits, mn)?;
    let corrupted = corrupt_bits(&bits, scene.ber, &mut rng)?;
    let s_hat = qpsk_modulate(&corrupted, mn)?;

    let noise = CVector::from_fn(mn, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) * (scene.noise_sigma * FRAC_1_SQRT_2)
    });

    let r = CVector::from_fn(mn, |i, _| s_true[i] * z_true[i] + noise[i]);
    let e_true: Vec<C64> = (0..mn).map(|i| (s_true[i] - s_hat[i]) * z_true[i]).collect();

    Ok(ReceivedData {
        r,
        s_hat,
        dims: (cfg.blocks, cfg.subcarriers),
        truth: Some(SceneTruth {
            z_true: z_true.iter().copied().collect(),
            e_true,
            paths: normalized,
            classes: scene.paths.iter().map(|p| p.class).collect(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn test_cfg(blocks: usize, subcarriers: usize) -> OfdmConfig {
        OfdmConfig {
            blocks,
            subcarriers,
            symbol_len: 200e-6,
            cyclic_prefix: 100e-6,
            carrier_freq: 2e9,
        }
    }

    #[test]
    fn qpsk_constellation_points() {
        let s = qpsk_modulate(&[0, 0, 1, 1, 0, 1, 1, 0], 4).unwrap();
        let inv = FRAC_1_SQRT_2;
        assert_relative_eq!(s[0].re, inv);
        assert_relative_eq!(s[0].im, inv);
        assert_relative_eq!(s[1].re, -inv);
        assert_relative_eq!(s[1].im, -inv);
        assert_relative_eq!(s[2].re, -inv);
        assert_relative_eq!(s[2].im, inv);
        assert_relative_eq!(s[3].re, inv);
        assert_relative_eq!(s[3].im, -inv);
        for v in s.iter() {
            assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn qpsk_rejects_bad_input() {
        assert!(qpsk_modulate(&[0, 1, 1], 2).is_err());
        assert!(qpsk_modulate(&[0, 2], 1).is_err());
    }

    #[test]
    fn corrupt_bits_zero_rate_is_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let bits = vec![0, 1, 1, 0, 1];
        assert_eq!(corrupt_bits(&bits, 0.0, &mut rng).unwrap(), bits);
        assert!(corrupt_bits(&bits, 0.6, &mut rng).is_err());
        assert!(corrupt_bits(&bits, -0.1, &mut rng).is_err());
    }

    #[test]
    fn corrupt_bits_half_rate_concentration() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let bits = vec![0u8; 1_000_000];
        let flipped = corrupt_bits(&bits, 0.5, &mut rng).unwrap();
        let frac = flipped.iter().filter(|&&b| b == 1).count() as f64 / bits.len() as f64;
        assert!((frac - 0.5).abs() < 0.002, "flip fraction {frac}");
    }

    #[test]
    fn corrupt_bits_deterministic_per_seed() {
        let bits: Vec<u8> = (0..512).map(|i| (i % 2) as u8).collect();
        let a = corrupt_bits(&bits, 0.3, &mut ChaCha12Rng::seed_from_u64(9)).unwrap();
        let b = corrupt_bits(&bits, 0.3, &mut ChaCha12Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn steering_atom_basic_values() {
        let a = steering_atom(0.0, 0.0, 2, 2).unwrap();
        assert!(a.iter().all(|v| (v - C64::ONE).norm() < 1e-15));
        let a = steering_atom(0.5, 0.0, 2, 1).unwrap();
        assert_relative_eq!(a[0].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(a[1].re, -1.0, epsilon = 1e-12);
        assert!(a[1].im.abs() < 1e-12);
        assert!(steering_atom(1.0, 0.0, 2, 2).is_err());
    }

    #[test]
    fn steering_atom_unit_modulus_and_rank_one_reshape() {
        let (blocks, subcarriers) = (3, 4);
        let (phi, psi) = (0.37, 0.81);
        let a = steering_atom(phi, psi, blocks, subcarriers).unwrap();
        for v in a.iter() {
            assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-14);
        }
        // vec of the rank-1 matrix b(phi) g(psi)^H in column-major order.
        for n in 0..subcarriers {
            for m in 0..blocks {
                let b = Complex64::from_polar(1.0, std::f64::consts::TAU * m as f64 * phi);
                let g = Complex64::from_polar(1.0, std::f64::consts::TAU * n as f64 * psi);
                assert!((a[n * blocks + m] - b * g.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn synthesize_response_trivial_cases() {
        let one = NormalizedPath {
            phi: 0.0,
            psi: 0.0,
            alpha: C64::ONE,
        };
        let z = synthesize_response(&[one], 2, 3).unwrap();
        assert!(z.iter().all(|v| (v - C64::ONE).norm() < 1e-15));

        let pair = [
            NormalizedPath {
                phi: 0.3,
                psi: 0.7,
                alpha: C64::new(1.5, -0.5),
            },
            NormalizedPath {
                phi: 0.3,
                psi: 0.7,
                alpha: C64::new(-1.5, 0.5),
            },
        ];
        let z = synthesize_response(&pair, 3, 3).unwrap();
        assert!(z.norm() < 1e-14);

        let z = synthesize_response(&[], 2, 2).unwrap();
        assert_eq!(z, CVector::zeros(4));
    }

    #[test]
    fn synthesize_response_matches_entrywise_oracle() {
        use rand::rngs::StdRng;
        use rand::SeedableRng as _;
        let mut rng = StdRng::seed_from_u64(13);
        for &(blocks, subcarriers, k) in &[(2usize, 2usize, 1usize), (5, 7, 3), (16, 16, 8)] {
            let paths: Vec<NormalizedPath> = (0..k)
                .map(|_| NormalizedPath {
                    phi: rng.random_range(0.0..1.0),
                    psi: rng.random_range(0.0..1.0),
                    alpha: C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                })
                .collect();
            let z = synthesize_response(&paths, blocks, subcarriers).unwrap();
            // Independent double loop over (m, n, k).
            let mut worst: f64 = 0.0;
            for n in 0..subcarriers {
                for m in 0..blocks {
                    let mut expect = C64::ZERO;
                    for p in &paths {
                        let phase =
                            std::f64::consts::TAU * (m as f64 * p.phi - n as f64 * p.psi);
                        expect += p.alpha * C64::new(phase.cos(), phase.sin());
                    }
                    worst = worst.max((z[n * blocks + m] - expect).norm());
                }
            }
            let scale = z.norm().max(1.0);
            assert!(worst / scale <= 1e-12, "relative error {}", worst / scale);
        }
    }

    #[test]
    fn physical_to_normalized_cases() {
        let cfg = test_cfg(4, 4);
        let t_bar = cfg.block_len();
        let path = |f: f64, tau: f64| PathParams {
            tau,
            f,
            amp: C64::ONE,
            class: PathClass::Target,
        };
        let p = physical_to_normalized(&path(0.0, 0.0), &cfg);
        assert_eq!((p.phi, p.psi), (0.0, 0.0));
        let p = physical_to_normalized(&path(1.0 / t_bar, 0.0), &cfg);
        assert!(p.phi.abs() < 1e-12 || (1.0 - p.phi) < 1e-12);
        let p = physical_to_normalized(&path(100.0, 0.0), &cfg);
        assert_relative_eq!(p.phi, 0.03, epsilon = 1e-12);
        // alpha = A * T
        assert_relative_eq!(p.alpha.re, cfg.symbol_len, epsilon = 1e-18);
    }

    #[test]
    fn doppler_mapping_hand_value() {
        // 3 m/s at 2 GHz is about 40 Hz under the monostatic convention
        // (hand arithmetic with c = 3e8; the exact constant shifts it ~0.07%).
        assert_relative_eq!(doppler_from_speed(-3.0, 2e9), -40.0, epsilon = 0.05);
    }

    #[test]
    fn scene_random_counts() {
        let cfg = test_cfg(8, 8);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let scene = scene_random(&cfg, 5, 100, &SceneRanges::default(), &mut rng).unwrap();
        assert_eq!(scene.paths.len(), 106);
        assert_eq!(scene.count(PathClass::Target), 5);
        assert_eq!(scene.count(PathClass::Clutter), 100);
        assert_eq!(scene.count(PathClass::Direct), 1);

        let scene = scene_random(&cfg, 0, 0, &SceneRanges::default(), &mut rng).unwrap();
        assert_eq!(scene.paths.len(), 1);
        assert_eq!(scene.paths[0].class, PathClass::Direct);
        assert_eq!(scene.paths[0].tau, 0.0);
    }

    #[test]
    fn synthesize_received_noiseless_identity() {
        let cfg = test_cfg(4, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut scene = scene_random(&cfg, 2, 3, &SceneRanges::default(), &mut rng).unwrap();
        scene.rng_seed = 77;
        let data = synthesize_received(&scene, &cfg).unwrap();
        let truth = data.truth.as_ref().unwrap();
        // ber = 0, sigma = 0: e_true = 0 and conj(s_hat) . r reproduces z.
        assert!(truth.e_true.iter().all(|v| v.norm() == 0.0));
        for i in 0..data.grid_size() {
            let demod = data.r[i] * data.s_hat[i].conj();
            assert!((demod - truth.z_true[i]).norm() < 1e-12 * (1.0 + truth.z_true[i].norm()));
        }
        for v in data.s_hat.iter() {
            assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn synthesize_received_error_support_matches_symbol_mismatch() {
        let cfg = test_cfg(4, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let mut scene = scene_random(&cfg, 1, 2, &SceneRanges::default(), &mut rng).unwrap();
        scene.ber = 0.2;
        scene.rng_seed = 5;
        let data = synthesize_received(&scene, &cfg).unwrap();
        let truth = data.truth.as_ref().unwrap();
        // Support of e_true is exactly where the estimated symbol differs
        // from the true one (noiseless scene, nonzero z everywhere here).
        for i in 0..data.grid_size() {
            let mismatch = (data.r[i] * data.s_hat[i].conj() - truth.z_true[i]).norm() > 1e-10;
            let has_error = truth.e_true[i].norm() > 1e-10;
            assert_eq!(mismatch, has_error, "index {i}");
        }
    }

    #[test]
    fn synthesize_received_error_fraction_matches_double_flip_rate() {
        let cfg = test_cfg(8, 8);
        let ber = 0.1;
        let mut nonzero = 0usize;
        let mut total = 0usize;
        for seed in 0..200u64 {
            let scene = Scene {
                paths: vec![PathParams {
                    tau: 0.0,
                    f: 0.0,
                    amp: C64::ONE,
                    class: PathClass::Direct,
                }],
                rng_seed: seed,
                noise_sigma: 0.0,
                ber,
            };
            let data = synthesize_received(&scene, &cfg).unwrap();
            let truth = data.truth.unwrap();
            nonzero += truth.e_true.iter().filter(|v| v.norm() > 0.0).count();
            total += cfg.grid_size();
        }
        let frac = nonzero as f64 / total as f64;
        let expect = 1.0 - (1.0 - ber) * (1.0 - ber);
        assert!(
            (frac - expect).abs() < 0.015,
            "nonzero fraction {frac}, expected about {expect}"
        );
    }

    #[test]
    fn synthesize_received_is_deterministic() {
        let cfg = test_cfg(4, 5);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut scene = scene_random(&cfg, 2, 5, &SceneRanges::default(), &mut rng).unwrap();
        scene.ber = 0.05;
        scene.noise_sigma = 0.3;
        scene.rng_seed = 1234;
        let a = synthesize_received(&scene, &cfg).unwrap();
        let b = synthesize_received(&scene, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noise_sigma_matches_snr_definition() {
        let z = CVector::from_element(16, C64::new(2.0, 0.0));
        let sigma = noise_sigma_for_snr(&z, 10.0);
        let snr = z.norm_squared() / (16.0 * sigma * sigma);
        assert_relative_eq!(10.0 * snr.log10(), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn scene_json_round_trip() {
        let cfg = test_cfg(4, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let scene = scene_random(&cfg, 2, 2, &SceneRanges::default(), &mut rng).unwrap();
        let js = serde_json::to_string(&scene).unwrap();
        let back: Scene = serde_json::from_str(&js).unwrap();
        assert_eq!(scene, back);
        let js = serde_json::to_string(&cfg).unwrap();
        assert!(js.contains("\"M\"") && js.contains("\"T_cp\""));
        let back: OfdmConfig = serde_json::from_str(&js).unwrap();
        assert_eq!(cfg, back);
    }
}
