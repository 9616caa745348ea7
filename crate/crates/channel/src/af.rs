//! Amplify-and-forward relaying: half-frame simulation and the virtual
//! single-user MIMO channel it induces.
//!
//! Per cooperation frame m the destination sees
//! `Y_{m,1} = rho1 H_D X_{m,1} + N_{m,1}` and
//! `Y_{m,2} = rho2 H_D X_{m,2} + N_{m,2} + rho3 H_{D_m} B_m X~_{m,1}`,
//! where `X~_{m,1} = rho1' H_{R_m} X_{m,1} + N'_m` is the relay's receive.
//! Substituting the relay output turns the superframe into Y = H_eq X + N
//! with per-frame channel blocks `[rho1 H_D | rho3 rho1' H_{D_m} B_m H_{R_m}]`
//! acting on block-diagonal virtual codewords
//! `[[X_1, (rho2/rho1) X_2], [0, X_1]]`; the repeated X_1 is the relay's
//! forwarded copy. The second-half noise picks up the amplified relay noise
//! and is colored with shape `C_m = I + rho3^2 (H_{D_m}B_m)(H_{D_m}B_m)^H`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use latticeforge_stc::{iota, iota_columns, SpaceTimeCodeSpec};

use crate::decode::sphere_decode_system;
use crate::error::{ChannelError, Result};
use crate::rng::complex_gaussian;

/// Power allocation factors of the AF protocol, all nonnegative.
#[derive(Debug, Clone, Copy)]
pub struct AFPowerSplit {
    /// Source power in the first half.
    pub rho1: f64,
    /// Source power in the second half.
    pub rho2: f64,
    /// Relay transmit weight.
    pub rho3: f64,
    /// Source-to-relay link weight.
    pub rho1p: f64,
}

impl AFPowerSplit {
    /// Equal split: every factor 1.
    pub fn equal() -> Self {
        AFPowerSplit {
            rho1: 1.0,
            rho2: 1.0,
            rho3: 1.0,
            rho1p: 1.0,
        }
    }
}

/// Channels touching one relay: source to relay, relay to destination,
/// and the amplification matrix applied in between.
#[derive(Debug, Clone)]
pub struct AFRelayPath {
    /// n_R x n_t source-to-relay channel.
    pub h_r: DMatrix<Complex64>,
    /// n_r x n_R relay-to-destination channel.
    pub h_dm: DMatrix<Complex64>,
    /// n_R x n_R amplification matrix.
    pub b: DMatrix<Complex64>,
}

/// One cooperation superframe: the direct channel plus M relay paths.
#[derive(Debug, Clone)]
pub struct AFRelayFrame {
    pub power: AFPowerSplit,
    /// n_r x n_t source-to-destination channel, fixed over the superframe.
    pub h_d: DMatrix<Complex64>,
    pub relays: Vec<AFRelayPath>,
}

impl AFRelayFrame {
    pub fn n_r(&self) -> usize {
        self.h_d.nrows()
    }

    pub fn n_t(&self) -> usize {
        self.h_d.ncols()
    }

    /// Relay antenna count, uniform across relays.
    pub fn n_relay(&self) -> usize {
        self.relays[0].h_r.nrows()
    }

    fn validate(&self) -> Result<()> {
        let p = &self.power;
        if !(p.rho1 > 0.0 && p.rho2 >= 0.0 && p.rho3 >= 0.0 && p.rho1p >= 0.0) {
            return Err(ChannelError::Domain(
                "power factors must be nonnegative with rho1 > 0".into(),
            ));
        }
        if self.relays.is_empty() {
            return Err(ChannelError::Domain("frame needs at least one relay".into()));
        }
        let n_relay = self.relays[0].h_r.nrows();
        for r in &self.relays {
            if r.h_r.shape() != (n_relay, self.n_t()) {
                return Err(ChannelError::Dimension {
                    context: "relay receive channel shape",
                    expected: n_relay * self.n_t(),
                    got: r.h_r.len(),
                });
            }
            if r.h_dm.shape() != (self.n_r(), n_relay) {
                return Err(ChannelError::Dimension {
                    context: "relay forward channel shape",
                    expected: self.n_r() * n_relay,
                    got: r.h_dm.len(),
                });
            }
            if r.b.shape() != (n_relay, n_relay) {
                return Err(ChannelError::Dimension {
                    context: "amplification matrix shape",
                    expected: n_relay * n_relay,
                    got: r.b.len(),
                });
            }
        }
        Ok(())
    }
}

/// Virtual single-user MIMO view of one AF superframe.
///
/// A virtual codeword is square of size M(n_t + n_R); frame m owns its
/// 2 n_t columns, the first n_t of them the frame's first half.
#[derive(Debug, Clone)]
pub struct VirtualAFChannel {
    /// n_r x M(n_t+n_R) equivalent channel.
    pub h_eq: DMatrix<Complex64>,
    /// Second-half noise shape per frame; physical covariance per received
    /// column is 2 sigma_n2 C_m.
    pub noise_shape: Vec<DMatrix<Complex64>>,
    /// Whether each frame's second half carries relay-colored noise.
    pub colored: Vec<bool>,
    pub n_r: usize,
    pub n_t: usize,
    pub frames: usize,
}

impl VirtualAFChannel {
    /// Total virtual dimension M(n_t + n_R) = 2 M n_t.
    pub fn dim(&self) -> usize {
        2 * self.frames * self.n_t
    }

    /// Column range of frame m's second half within a virtual codeword.
    pub fn colored_columns(&self, m: usize) -> std::ops::Range<usize> {
        let start = 2 * m * self.n_t + self.n_t;
        start..start + self.n_t
    }
}

/// Assembles the equivalent channel of one superframe.
///
/// The square virtual codeword model needs n_R = n_t, so each frame
/// contributes an n_t-column half and an (n_t + n_R)-row block.
pub fn af_virtual_channel(frame: &AFRelayFrame) -> Result<VirtualAFChannel> {
    frame.validate()?;
    let (n_r, n_t) = (frame.n_r(), frame.n_t());
    if frame.n_relay() != n_t {
        return Err(ChannelError::Dimension {
            context: "virtual channel needs n_R = n_t relay antennas",
            expected: n_t,
            got: frame.n_relay(),
        });
    }
    let p = &frame.power;
    let m_count = frame.relays.len();
    let mut h_eq = DMatrix::<Complex64>::zeros(n_r, m_count * 2 * n_t);
    let mut noise_shape = Vec::with_capacity(m_count);
    let mut colored = Vec::with_capacity(m_count);
    for (m, relay) in frame.relays.iter().enumerate() {
        let direct = frame.h_d.map(|z| z * p.rho1);
        let via_relay =
            (&relay.h_dm * &relay.b * &relay.h_r).map(|z| z * (p.rho3 * p.rho1p));
        h_eq.view_mut((0, 2 * m * n_t), (n_r, n_t)).copy_from(&direct);
        h_eq.view_mut((0, 2 * m * n_t + n_t), (n_r, n_t))
            .copy_from(&via_relay);

        let db = &relay.h_dm * &relay.b;
        let shape = DMatrix::<Complex64>::identity(n_r, n_r)
            + (&db * db.adjoint()).map(|z| z * (p.rho3 * p.rho3));
        let is_colored = p.rho3 > 0.0 && db.iter().any(|z| z.norm() > 0.0);
        noise_shape.push(shape);
        colored.push(is_colored);
    }
    Ok(VirtualAFChannel {
        h_eq,
        noise_shape,
        colored,
        n_r,
        n_t,
        frames: m_count,
    })
}

/// Builds the block-diagonal virtual codeword from per-frame halves.
///
/// Each half must be n_t x n_t; frame m maps to the block
/// `[[X_1, (rho2/rho1) X_2], [0, X_1]]`.
pub fn af_codeword(
    power: &AFPowerSplit,
    halves: &[(DMatrix<Complex64>, DMatrix<Complex64>)],
) -> Result<DMatrix<Complex64>> {
    if halves.is_empty() {
        return Err(ChannelError::Domain("need at least one frame".into()));
    }
    if !(power.rho1 > 0.0) {
        return Err(ChannelError::Domain("rho1 must be positive".into()));
    }
    let n_t = halves[0].0.nrows();
    for (x1, x2) in halves {
        if x1.shape() != (n_t, n_t) || x2.shape() != (n_t, n_t) {
            return Err(ChannelError::Dimension {
                context: "codeword halves must be square n_t x n_t",
                expected: n_t * n_t,
                got: x1.len().max(x2.len()),
            });
        }
    }
    let m_count = halves.len();
    let dim = 2 * m_count * n_t;
    let ratio = power.rho2 / power.rho1;
    let mut x = DMatrix::<Complex64>::zeros(dim, dim);
    for (m, (x1, x2)) in halves.iter().enumerate() {
        let r0 = 2 * m * n_t;
        x.view_mut((r0, r0), (n_t, n_t)).copy_from(x1);
        x.view_mut((r0, r0 + n_t), (n_t, n_t))
            .copy_from(&x2.map(|z| z * ratio));
        x.view_mut((r0 + n_t, r0 + n_t), (n_t, n_t)).copy_from(x1);
    }
    Ok(x)
}

/// Simulates the physical two-half protocol for every frame and returns the
/// received superframe, n_r x (M * 2 * t) for halves of width t.
///
/// Noise draws per frame, in order: destination half 1, relay, destination
/// half 2; all entries per-component variance sigma_n2 (zero skips draws).
pub fn transmit_af(
    frame: &AFRelayFrame,
    halves: &[(DMatrix<Complex64>, DMatrix<Complex64>)],
    sigma_n2: f64,
    rng: &mut impl Rng,
) -> Result<DMatrix<Complex64>> {
    frame.validate()?;
    if halves.len() != frame.relays.len() {
        return Err(ChannelError::Dimension {
            context: "one half pair per relay frame",
            expected: frame.relays.len(),
            got: halves.len(),
        });
    }
    if !(sigma_n2 >= 0.0) {
        return Err(ChannelError::Domain("sigma_n2 must be nonnegative".into()));
    }
    let (n_r, n_t, n_relay) = (frame.n_r(), frame.n_t(), frame.n_relay());
    let t = halves[0].0.ncols();
    for (x1, x2) in halves {
        if x1.shape() != (n_t, t) || x2.shape() != (n_t, t) {
            return Err(ChannelError::Dimension {
                context: "half shape",
                expected: n_t * t,
                got: x1.len().max(x2.len()),
            });
        }
    }
    let p = &frame.power;
    let mut y = DMatrix::<Complex64>::zeros(n_r, frame.relays.len() * 2 * t);
    for (m, (relay, (x1, x2))) in frame.relays.iter().zip(halves).enumerate() {
        let mut y1 = (&frame.h_d * x1).map(|z| z * p.rho1);
        let mut x_tilde = (&relay.h_r * x1).map(|z| z * p.rho1p);
        if sigma_n2 > 0.0 {
            y1 += complex_gaussian(n_r, t, sigma_n2, rng);
            x_tilde += complex_gaussian(n_relay, t, sigma_n2, rng);
        }
        let mut y2 = (&frame.h_d * x2).map(|z| z * p.rho2)
            + (&relay.h_dm * &relay.b * x_tilde).map(|z| z * p.rho3);
        if sigma_n2 > 0.0 {
            y2 += complex_gaussian(n_r, t, sigma_n2, rng);
        }
        y.view_mut((0, 2 * m * t), (n_r, t)).copy_from(&y1);
        y.view_mut((0, 2 * m * t + t), (n_r, t)).copy_from(&y2);
    }
    Ok(y)
}

/// Inverse square root of a Hermitian positive definite matrix.
fn inv_sqrt_hermitian(c: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = SymmetricEigen::new(c.clone());
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(ChannelError::Degenerate(
            "noise shape is not positive definite".into(),
        ));
    }
    let scaled = DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| {
        eig.eigenvectors[(i, j)] * (1.0 / eig.eigenvalues[j].sqrt())
    });
    Ok(&scaled * eig.eigenvectors.adjoint())
}

/// Applies the per-frame whitening transform to a received superframe, so
/// every column ends up with white noise of per-component variance sigma_n2.
pub fn whiten_received(
    v: &VirtualAFChannel,
    y: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    if y.shape() != (v.n_r, v.dim()) {
        return Err(ChannelError::Dimension {
            context: "received superframe shape",
            expected: v.n_r * v.dim(),
            got: y.len(),
        });
    }
    let mut out = y.clone();
    for m in 0..v.frames {
        if !v.colored[m] {
            continue;
        }
        let w = inv_sqrt_hermitian(&v.noise_shape[m])?;
        let cols = v.colored_columns(m);
        let block = &w * y.columns(cols.start, cols.len());
        out.columns_mut(cols.start, cols.len()).copy_from(&block);
    }
    Ok(out)
}

/// Real decoding matrix of a code played over the virtual channel, with the
/// whitening transform folded in column block by column block.
pub fn whitened_real_system(
    v: &VirtualAFChannel,
    code: &SpaceTimeCodeSpec,
) -> Result<DMatrix<f64>> {
    if code.n_t() != v.dim() || code.t_len() != v.dim() {
        return Err(ChannelError::Dimension {
            context: "virtual code must be square of the virtual dimension",
            expected: v.dim(),
            got: code.n_t().max(code.t_len()),
        });
    }
    let images: Result<Vec<DMatrix<Complex64>>> = code
        .basis_matrices()
        .iter()
        .map(|b| whiten_received(v, &(&v.h_eq * b)))
        .collect();
    Ok(iota_columns(&images?))
}

/// ML detection over the virtual AF channel: whitens the received frame and
/// sphere decodes the matching real system.
pub fn af_decode(
    v: &VirtualAFChannel,
    code: &SpaceTimeCodeSpec,
    y: &DMatrix<Complex64>,
) -> Result<Vec<i64>> {
    let b = whitened_real_system(v, code)?;
    let z = iota(&whiten_received(v, y)?);
    sphere_decode_system(&b, code.alphabet(), &z)
}

/// Scaled-identity amplifier B = c I meeting the relay power constraint:
/// a source column of average power p_col comes out of the relay with the
/// same average power, given the realized source-to-relay channel.
pub fn scaled_identity_amplifier(
    h_r: &DMatrix<Complex64>,
    rho1p: f64,
    sigma_n2: f64,
    p_col: f64,
) -> Result<DMatrix<Complex64>> {
    if !(p_col > 0.0) {
        return Err(ChannelError::Domain("column power must be positive".into()));
    }
    let n_t = h_r.ncols() as f64;
    let n_relay = h_r.nrows();
    let received = rho1p * rho1p * (p_col / n_t) * h_r.norm_squared()
        + 2.0 * sigma_n2 * n_relay as f64;
    if !(received > 0.0) {
        return Err(ChannelError::Degenerate(
            "relay receives no power to amplify".into(),
        ));
    }
    let c = (p_col / received).sqrt();
    Ok(DMatrix::from_diagonal(&DVector::from_element(
        n_relay,
        Complex64::new(c, 0.0),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use latticeforge_stc::{alamouti_code, iterated_construct};
    use rand::Rng;

    fn random_frame(seed: u64, m_count: usize, power: AFPowerSplit) -> AFRelayFrame {
        let mut rng = stream_rng(seed, 0);
        let relays = (0..m_count)
            .map(|_| AFRelayPath {
                h_r: complex_gaussian(2, 2, 0.5, &mut rng),
                h_dm: complex_gaussian(2, 2, 0.5, &mut rng),
                b: complex_gaussian(2, 2, 0.5, &mut rng),
            })
            .collect();
        AFRelayFrame {
            power,
            h_d: complex_gaussian(2, 2, 0.5, &mut rng),
            relays,
        }
    }

    #[test]
    fn muted_relay_leaves_only_the_direct_blocks() {
        let mut power = AFPowerSplit::equal();
        power.rho3 = 0.0;
        let frame = random_frame(1, 2, power);
        let v = af_virtual_channel(&frame).unwrap();
        for m in 0..2 {
            let relay_block = v.h_eq.view((0, 4 * m + 2), (2, 2));
            assert!(relay_block.iter().all(|z| z.norm() == 0.0));
            assert!(!v.colored[m]);
            let direct = v.h_eq.view((0, 4 * m), (2, 2));
            assert_eq!(direct.clone_owned(), frame.h_d);
        }
    }

    #[test]
    fn scalar_frame_reproduces_the_half_equations() {
        let p = AFPowerSplit {
            rho1: 0.9,
            rho2: 1.1,
            rho3: 0.8,
            rho1p: 1.3,
        };
        let mut rng = stream_rng(2, 0);
        let mut scalar = || complex_gaussian(1, 1, 0.5, &mut rng);
        let frame = AFRelayFrame {
            power: p,
            h_d: scalar(),
            relays: vec![AFRelayPath {
                h_r: scalar(),
                h_dm: scalar(),
                b: scalar(),
            }],
        };
        let x1 = scalar();
        let x2 = scalar();
        drop(scalar);
        let mut rng = stream_rng(2, 1);
        let y = transmit_af(&frame, &[(x1.clone(), x2.clone())], 0.0, &mut rng).unwrap();
        let h_d = frame.h_d[(0, 0)];
        let r = &frame.relays[0];
        let expect1 = h_d * x1[(0, 0)] * p.rho1;
        let expect2 = h_d * x2[(0, 0)] * p.rho2
            + r.h_dm[(0, 0)] * r.b[(0, 0)] * r.h_r[(0, 0)] * x1[(0, 0)] * (p.rho3 * p.rho1p);
        assert!((y[(0, 0)] - expect1).norm() < 1e-14);
        assert!((y[(0, 1)] - expect2).norm() < 1e-14);
    }

    #[test]
    fn noiseless_transmission_equals_the_virtual_model() {
        let frame = random_frame(3, 2, AFPowerSplit::equal());
        let v = af_virtual_channel(&frame).unwrap();
        let mut rng = stream_rng(4, 0);
        let halves: Vec<_> = (0..2)
            .map(|_| {
                (
                    complex_gaussian(2, 2, 1.0, &mut rng),
                    complex_gaussian(2, 2, 1.0, &mut rng),
                )
            })
            .collect();
        let physical = transmit_af(&frame, &halves, 0.0, &mut rng).unwrap();
        let virtual_y = &v.h_eq * af_codeword(&frame.power, &halves).unwrap();
        assert!((physical - virtual_y).norm() < 1e-12);
    }

    #[test]
    fn whitener_flattens_the_noise_shape() {
        let frame = random_frame(5, 1, AFPowerSplit::equal());
        let v = af_virtual_channel(&frame).unwrap();
        assert!(v.colored[0]);
        let w = inv_sqrt_hermitian(&v.noise_shape[0]).unwrap();
        let flattened = &w * &v.noise_shape[0] * w.adjoint();
        let eye = DMatrix::<Complex64>::identity(2, 2);
        assert!((flattened - eye).norm() < 1e-10);
    }

    #[test]
    fn mismatched_relay_antennas_are_rejected() {
        let mut frame = random_frame(6, 1, AFPowerSplit::equal());
        frame.relays[0].h_r = DMatrix::zeros(3, 2);
        frame.relays[0].h_dm = DMatrix::zeros(2, 3);
        frame.relays[0].b = DMatrix::zeros(3, 3);
        assert!(matches!(
            af_virtual_channel(&frame),
            Err(ChannelError::Dimension { .. })
        ));
    }

    #[test]
    fn amplifier_meets_the_power_constraint() {
        let mut rng = stream_rng(7, 0);
        let rho1p = 1.2;
        let sigma_n2 = 0.4;
        let p_col = 2.0;
        let h_r = complex_gaussian(2, 2, 0.5, &mut rng);
        let b = scaled_identity_amplifier(&h_r, rho1p, sigma_n2, p_col).unwrap();
        let trials = 4000;
        let mut sum = 0.0;
        for _ in 0..trials {
            let x = complex_gaussian(2, 1, p_col / 4.0, &mut rng);
            let noise = complex_gaussian(2, 1, sigma_n2, &mut rng);
            let out = &b * ((&h_r * x).map(|z| z * rho1p) + noise);
            sum += out.norm_squared();
        }
        let mean = sum / trials as f64;
        assert!((mean - p_col).abs() < 0.1 * p_col, "mean power {mean}");
    }

    #[test]
    fn noiseless_virtual_decoding_round_trips() {
        let code = {
            let base = alamouti_code(&[-1, 1]).unwrap();
            iterated_construct(&base, &|z: Complex64| z.conj(), Complex64::new(-1.0, 0.0))
                .unwrap()
        };
        let frame = random_frame(8, 1, AFPowerSplit::equal());
        let v = af_virtual_channel(&frame).unwrap();
        let coords = [1, -1, 1, 1, -1, -1, 1, -1];
        let x = code.codeword(&coords).unwrap();
        let y = &v.h_eq * x;
        assert_eq!(af_decode(&v, &code, &y).unwrap(), coords);
    }

    /// Codeword error rates of the iterated Alamouti code against an uncoded
    /// diagonal baseline of equal rate over the same AF channel draws: the
    /// coded curve must fall faster at high SNR.
    #[test]
    fn iterated_code_outpaces_uncoded_at_high_snr() {
        let coded = {
            let base = alamouti_code(&[-1, 1]).unwrap();
            iterated_construct(&base, &|z: Complex64| z.conj(), Complex64::new(-1.0, 0.0))
                .unwrap()
        };
        // Uncoded baseline: one QPSK symbol per virtual antenna per frame,
        // same real rate k = 8 over 4 channel uses.
        let uncoded = {
            let mut basis = Vec::new();
            for j in 0..4 {
                for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                    let mut m = DMatrix::<Complex64>::zeros(4, 4);
                    m[(j, j)] = unit;
                    basis.push(m);
                }
            }
            latticeforge_stc::SpaceTimeCodeSpec::new("uncoded-diag", basis, &[-1, 1]).unwrap()
        };

        let snrs_db = [14.0, 22.0];
        let trials = 3000u64;
        let mut slopes = Vec::new();
        for (ci, code) in [&coded, &uncoded].iter().enumerate() {
            let mean_s2 = 1.0;
            let p: f64 = mean_s2
                * code
                    .basis_matrices()
                    .iter()
                    .map(|b| b.norm_squared())
                    .sum::<f64>();
            let mut cwer = Vec::new();
            for (si, snr_db) in snrs_db.iter().enumerate() {
                let sigma_n2 = p / 10f64.powf(snr_db / 10.0);
                let mut errors = 0u64;
                for t in 0..trials {
                    let mut rng = stream_rng(1000 + ci as u64, si as u64 * trials + t);
                    let mut frame = random_frame_from(&mut rng);
                    frame.relays[0].b =
                        scaled_identity_amplifier(&frame.relays[0].h_r, 1.0, sigma_n2, 1.0)
                            .unwrap();
                    let v = af_virtual_channel(&frame).unwrap();
                    let coords: Vec<i64> =
                        (0..8).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
                    let x = code.codeword(&coords).unwrap();
                    let mut y = &v.h_eq * x;
                    // Colored second-half noise, drawn per the virtual model.
                    let white = complex_gaussian(2, 2, sigma_n2, &mut rng);
                    let mut first = y.view_mut((0, 0), (2, 2));
                    first += white;
                    let shaped = v.noise_shape[0].clone().cholesky().unwrap().l()
                        * complex_gaussian(2, 2, sigma_n2, &mut rng);
                    let mut second = y.view_mut((0, 2), (2, 2));
                    second += shaped;
                    if af_decode(&v, code, &y).unwrap() != coords {
                        errors += 1;
                    }
                }
                assert!(errors > 0, "code {ci} needs errors at {snr_db} dB to fit a slope");
                cwer.push(errors as f64 / trials as f64);
            }
            slopes.push(
                (cwer[0].log10() - cwer[1].log10()) / ((snrs_db[1] - snrs_db[0]) / 10.0),
            );
        }
        assert!(
            slopes[0] > slopes[1],
            "coded slope {} should exceed uncoded slope {}",
            slopes[0],
            slopes[1]
        );
    }

    fn random_frame_from(rng: &mut impl Rng) -> AFRelayFrame {
        AFRelayFrame {
            power: AFPowerSplit::equal(),
            h_d: complex_gaussian(2, 2, 0.5, rng),
            relays: vec![AFRelayPath {
                h_r: complex_gaussian(2, 2, 0.5, rng),
                h_dm: complex_gaussian(2, 2, 0.5, rng),
                b: DMatrix::identity(2, 2),
            }],
        }
    }
}
