//! Windowed 2D FFT processing and the RD / RA power maps.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::window::hann;
use crate::config::RadarConfig;
use crate::cube::RadarCube;
use crate::error::CoreError;
use crate::units::SPEED_OF_LIGHT;

/// Range-Doppler power map, shape `[n_range_bins][n_doppler_bins]`, plus the
/// median-of-map noise floor (0 for an all-zero map).
#[derive(Debug, Clone)]
pub struct RdMap {
    pub power: Array2<f64>,
    pub noise_floor: f64,
}

/// Range-angle power map, shape `[n_range_bins][n_angle_bins]`, with its
/// (monotone) steering grid in radians.
#[derive(Debug, Clone)]
pub struct RaMap {
    pub power: Array2<f64>,
    pub angle_grid: Vec<f64>,
}

/// Per-channel complex range-Doppler spectra: the shared intermediate of the
/// RD map, the RA map, and fine DoA beamforming.
///
/// Layout `[channel][range][doppler]`; Doppler axis is fft-shifted so zero
/// velocity sits at bin `n_chirps / 2`.
#[derive(Debug, Clone)]
pub struct SpectralCube {
    config: RadarConfig,
    channels: Array3<Complex64>,
}

impl SpectralCube {
    pub fn compute(cube: &RadarCube) -> Self {
        let config = cube.config().clone();
        let (n_ch, n_chirps, n_samples) = (config.n_channels, config.n_chirps, config.n_samples);
        let w_fast = hann(n_samples);
        let w_slow = hann(n_chirps);

        let mut planner = FftPlanner::<f64>::new();
        let fft_fast = planner.plan_fft_forward(n_samples);
        let fft_slow = planner.plan_fft_forward(n_chirps);

        let mut channels = Array3::<Complex64>::zeros((n_ch, n_samples, n_chirps));
        let mut fast_buf = vec![Complex64::default(); n_samples];
        let mut slow_buf = vec![Complex64::default(); n_chirps];
        // Range FFT output per chirp, [chirp][range].
        let mut stage = Array2::<Complex64>::zeros((n_chirps, n_samples));

        for m in 0..n_ch {
            for n in 0..n_chirps {
                for k in 0..n_samples {
                    fast_buf[k] = cube.data()[(m, n, k)] * w_fast[k];
                }
                fft_fast.process(&mut fast_buf);
                for k in 0..n_samples {
                    stage[(n, k)] = fast_buf[k];
                }
            }
            for r in 0..n_samples {
                for n in 0..n_chirps {
                    slow_buf[n] = stage[(n, r)] * w_slow[n];
                }
                fft_slow.process(&mut slow_buf);
                // fft-shift: map shifted index d to raw bin (d + Nc/2) mod Nc
                let half = n_chirps / 2;
                for d in 0..n_chirps {
                    channels[(m, r, d)] = slow_buf[(d + half) % n_chirps];
                }
            }
        }
        SpectralCube { config, channels }
    }

    pub fn config(&self) -> &RadarConfig {
        &self.config
    }

    /// Range spacing of the FFT grid: c*fs / (2*slope*n_samples). Equals
    /// c/(2B) whenever the sweep-consistency invariant holds exactly.
    pub fn range_step(&self) -> f64 {
        SPEED_OF_LIGHT * self.config.fs / (2.0 * self.config.slope * self.config.n_samples as f64)
    }

    /// Doppler bin of zero radial velocity after the fft-shift.
    pub fn zero_doppler_bin(&self) -> usize {
        self.config.n_chirps / 2
    }

    /// Complex per-channel snapshot at one range/Doppler cell.
    pub fn snapshot(&self, range_bin: usize, doppler_bin: usize) -> Result<Vec<Complex64>, CoreError> {
        let (n_ch, n_r, n_d) = self.channels.dim();
        if range_bin >= n_r || doppler_bin >= n_d {
            return Err(CoreError::Domain(format!(
                "cell ({range_bin}, {doppler_bin}) outside map {n_r} x {n_d}"
            )));
        }
        Ok((0..n_ch)
            .map(|m| self.channels[(m, range_bin, doppler_bin)])
            .collect())
    }

    /// Non-coherent (magnitude-squared) accumulation across channels.
    pub fn rd_map(&self) -> RdMap {
        let (n_ch, n_r, n_d) = self.channels.dim();
        let mut power = Array2::<f64>::zeros((n_r, n_d));
        for m in 0..n_ch {
            for r in 0..n_r {
                for d in 0..n_d {
                    power[(r, d)] += self.channels[(m, r, d)].norm_sqr();
                }
            }
        }
        let noise_floor = median(power.iter().copied());
        RdMap { power, noise_floor }
    }

    /// Delay-and-sum beamforming per range bin, integrated over Doppler:
    /// P(r, phi) = sum_d |w(phi)^H z(r, d)|^2, evaluated through the channel
    /// covariance so the cost is independent of the Doppler count.
    pub fn ra_map(&self, angle_grid: &[f64]) -> Result<RaMap, CoreError> {
        let (n_ch, n_r, n_d) = self.channels.dim();
        if n_ch < 2 {
            return Err(CoreError::Unsupported(
                "range-angle map requires at least 2 channels".into(),
            ));
        }
        if angle_grid.is_empty() {
            return Err(CoreError::Domain("empty angle grid".into()));
        }
        if angle_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::Domain("angle grid must be strictly increasing".into()));
        }

        // Steering vectors w_m(phi) = exp(j*pi*sin(phi)*m) on the lambda/2 array.
        let steering: Vec<Vec<Complex64>> = angle_grid
            .iter()
            .map(|&phi| {
                let u = std::f64::consts::PI * phi.sin();
                (0..n_ch)
                    .map(|m| Complex64::from_polar(1.0, u * m as f64))
                    .collect()
            })
            .collect();

        let mut power = Array2::<f64>::zeros((n_r, angle_grid.len()));
        let mut cov = vec![Complex64::default(); n_ch * n_ch];
        for r in 0..n_r {
            cov.fill(Complex64::default());
            for d in 0..n_d {
                for i in 0..n_ch {
                    let zi = self.channels[(i, r, d)];
                    for j in 0..n_ch {
                        let zj = self.channels[(j, r, d)];
                        cov[i * n_ch + j] += zi * zj.conj();
                    }
                }
            }
            for (a, w) in steering.iter().enumerate() {
                let mut p = Complex64::default();
                for i in 0..n_ch {
                    let wi = w[i].conj();
                    for j in 0..n_ch {
                        p += wi * cov[i * n_ch + j] * w[j];
                    }
                }
                power[(r, a)] = p.re.max(0.0);
            }
        }
        Ok(RaMap {
            power,
            angle_grid: angle_grid.to_vec(),
        })
    }
}

/// Convenience: full RD map from a raw cube.
pub fn range_doppler_map(cube: &RadarCube) -> RdMap {
    SpectralCube::compute(cube).rd_map()
}

/// Convenience: full RA map from a raw cube over the given steering grid.
pub fn range_angle_map(cube: &RadarCube, angle_grid: &[f64]) -> Result<RaMap, CoreError> {
    SpectralCube::compute(cube).ra_map(angle_grid)
}

fn median(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    if v.is_empty() {
        return 0.0;
    }
    v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::angle_grid;
    use crate::sim::{synthesize_cube, NoiseSpec, SimTarget};

    fn test_config() -> RadarConfig {
        let mut cfg = RadarConfig::default();
        cfg.n_channels = 4;
        cfg.n_chirps = 32;
        cfg.n_samples = 128;
        cfg.bandwidth = cfg.slope * cfg.n_samples as f64 / cfg.fs;
        cfg
    }

    fn peak_cell(map: &Array2<f64>) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_v = f64::MIN;
        for ((r, d), &v) in map.indexed_iter() {
            if v > best_v {
                best_v = v;
                best = (r, d);
            }
        }
        best
    }

    #[test]
    fn all_zero_cube_gives_zero_map_and_floor() {
        let cube = RadarCube::zeroed(test_config()).unwrap();
        let rd = range_doppler_map(&cube);
        assert!(rd.power.iter().all(|&p| p == 0.0));
        assert_eq!(rd.noise_floor, 0.0);
    }

    #[test]
    fn static_target_lands_on_expected_range_bin() {
        let cfg = test_config();
        let r_true = 1.5;
        let cube = synthesize_cube(
            &cfg,
            &[SimTarget {
                range: r_true,
                velocity: 0.0,
                angle: 0.0,
                rcs: 0.01,
                label: "t".into(),
            }],
            &NoiseSpec::off(),
        )
        .unwrap();
        let spectral = SpectralCube::compute(&cube);
        let rd = spectral.rd_map();
        let (r, d) = peak_cell(&rd.power);
        assert_eq!(r, (r_true / spectral.range_step()).round() as usize);
        assert_eq!(d, spectral.zero_doppler_bin());
    }

    #[test]
    fn moving_target_offsets_doppler_bin() {
        let cfg = test_config();
        let v_true = 2.0;
        let cube = synthesize_cube(
            &cfg,
            &[SimTarget {
                range: 2.0,
                velocity: v_true,
                angle: 0.0,
                rcs: 0.01,
                label: "t".into(),
            }],
            &NoiseSpec::off(),
        )
        .unwrap();
        let spectral = SpectralCube::compute(&cube);
        let rd = spectral.rd_map();
        let (_, d) = peak_cell(&rd.power);
        let dv = cfg.doppler_bin_size().unwrap();
        let want = spectral.zero_doppler_bin() as i64 + (v_true / dv).round() as i64;
        assert_eq!(d as i64, want);
    }

    #[test]
    fn boresight_target_peaks_at_zero_angle() {
        let cfg = test_config();
        let cube = synthesize_cube(
            &cfg,
            &[SimTarget {
                range: 1.5,
                velocity: 0.0,
                angle: 0.0,
                rcs: 0.01,
                label: "t".into(),
            }],
            &NoiseSpec::off(),
        )
        .unwrap();
        let grid = angle_grid(181);
        let ra = range_angle_map(&cube, &grid).unwrap();
        let (_, a) = peak_cell(&ra.power);
        assert_eq!(grid[a], 0.0);
    }

    #[test]
    fn off_boresight_target_peaks_within_one_grid_step() {
        let cfg = test_config();
        let theta = 15f64.to_radians();
        let cube = synthesize_cube(
            &cfg,
            &[SimTarget {
                range: 1.5,
                velocity: 0.0,
                angle: theta,
                rcs: 0.01,
                label: "t".into(),
            }],
            &NoiseSpec::off(),
        )
        .unwrap();
        let grid = angle_grid(512);
        let ra = range_angle_map(&cube, &grid).unwrap();
        let (_, a) = peak_cell(&ra.power);
        let step = if a + 1 < grid.len() {
            grid[a + 1] - grid[a]
        } else {
            grid[a] - grid[a - 1]
        };
        assert!(
            (grid[a] - theta).abs() <= step,
            "RA peak {} deg vs true {} deg",
            grid[a].to_degrees(),
            theta.to_degrees()
        );
    }

    #[test]
    fn symmetric_pair_gives_two_symmetric_peaks() {
        let cfg = test_config();
        let theta = 20f64.to_radians();
        let mk = |a: f64| SimTarget {
            range: 1.5,
            velocity: 0.0,
            angle: a,
            rcs: 0.01,
            label: "t".into(),
        };
        let cube = synthesize_cube(&cfg, &[mk(theta), mk(-theta)], &NoiseSpec::off()).unwrap();
        let spectral = SpectralCube::compute(&cube);
        let grid = angle_grid(512);
        let ra = spectral.ra_map(&grid).unwrap();
        let r = (1.5 / spectral.range_step()).round() as usize;
        // local maxima along the angle axis at the target range
        let row = ra.power.row(r);
        let mut peaks: Vec<usize> = (1..grid.len() - 1)
            .filter(|&i| row[i] > row[i - 1] && row[i] >= row[i + 1])
            .collect();
        peaks.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap());
        assert!(peaks.len() >= 2, "expected two beamformed peaks");
        let (p0, p1) = (grid[peaks[0]], grid[peaks[1]]);
        let step = grid[peaks[0] + 1] - grid[peaks[0]];
        assert!(
            (p0 + p1).abs() <= 2.0 * step,
            "peaks {p0} and {p1} rad are not symmetric about boresight"
        );
    }

    #[test]
    fn single_channel_ra_map_is_unsupported() {
        let mut cfg = test_config();
        cfg.n_channels = 1;
        let cube = RadarCube::zeroed(cfg).unwrap();
        let grid = angle_grid(64);
        assert!(matches!(
            range_angle_map(&cube, &grid),
            Err(CoreError::Unsupported(_))
        ));
    }

    #[test]
    fn channel_permutation_leaves_rd_map_unchanged() {
        let cfg = test_config();
        let cube = synthesize_cube(
            &cfg,
            &[SimTarget {
                range: 1.2,
                velocity: 0.5,
                angle: 0.15,
                rcs: 0.02,
                label: "t".into(),
            }],
            &NoiseSpec {
                noise_power: 1e-12,
                rng_seed: 5,
            },
        )
        .unwrap();
        let rd = range_doppler_map(&cube);

        // reverse the channel axis
        let mut data = cube.data().clone();
        let n_ch = cfg.n_channels;
        for m in 0..n_ch / 2 {
            for n in 0..cfg.n_chirps {
                for k in 0..cfg.n_samples {
                    data.swap((m, n, k), (n_ch - 1 - m, n, k));
                }
            }
        }
        let permuted = RadarCube::new(cfg, data).unwrap();
        let rd_p = range_doppler_map(&permuted);
        for (a, b) in rd.power.iter().zip(rd_p.power.iter()) {
            let scale = a.abs().max(b.abs()).max(1e-300);
            assert!(
                (a - b).abs() / scale < 1e-12,
                "permutation changed the map: {a} vs {b}"
            );
        }
    }
}
