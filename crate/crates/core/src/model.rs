//! Physical parameters and construction of the effective Hamiltonian and
//! collapse channels.
//!
//! All `SystemParams` rates are dimensionless multiples of the cavity decay
//! rate by default (kappa = 1 internally); the CLI converts explicit-Hz input
//! by dividing through by kappa. The two-phonon resonance condition
//! `Delta_c - 2 omega_p = 2 Delta_p` is hard-wired into `build_heff` unless
//! an explicit cavity-detuning override is set.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quantum::{hermiticity_deviation, ladder, CMat, Mode, Operator, Truncation};

/// All model rates and detunings, in units of kappa unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Effective photon-two-phonon coupling g.
    pub g: f64,
    /// Cavity decay rate kappa.
    pub kappa: f64,
    /// Mechanical decay rate gamma.
    pub gamma: f64,
    /// Mechanical pump amplitude epsilon.
    pub epsilon: f64,
    /// Pump detuning Delta_p = omega_m - omega_p.
    pub delta_p: f64,
    /// Thermal phonon number of the mechanical bath.
    pub n_th: f64,
    /// Expert override for the cavity detuning term; `None` means the
    /// two-phonon resonant value 2 * delta_p.
    pub cavity_detuning: Option<f64>,
}

impl SystemParams {
    /// The canonical baseline: g = 2, kappa = 1, gamma = 0.01,
    /// epsilon = 0.1, delta_p = 0, n_th = 0.
    pub fn baseline() -> Self {
        SystemParams {
            g: 2.0,
            kappa: 1.0,
            gamma: 0.01,
            epsilon: 0.1,
            delta_p: 0.0,
            n_th: 0.0,
            cavity_detuning: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.g,
            self.kappa,
            self.gamma,
            self.epsilon,
            self.delta_p,
            self.n_th,
        ];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite rate".into()));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParameter(format!("g = {} must be >= 0", self.g)));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa = {} must be > 0 (dissipation required for a unique steady state)",
                self.kappa
            )));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma = {} must be > 0 (dissipation required for a unique steady state)",
                self.gamma
            )));
        }
        if self.epsilon < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {} must be >= 0",
                self.epsilon
            )));
        }
        if self.n_th < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "n_th = {} must be >= 0",
                self.n_th
            )));
        }
        Ok(())
    }

    /// Cavity detuning term used in the Hamiltonian: 2*delta_p on the
    /// two-phonon resonance, or the expert override.
    pub fn cavity_detuning_term(&self) -> f64 {
        self.cavity_detuning.unwrap_or(2.0 * self.delta_p)
    }
}

/// Physical-layer parameters of the pre-linearization model, in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Single-photon quadratic coupling g0.
    pub g0: f64,
    /// Cavity drive amplitude Omega.
    pub omega_drive_amp: f64,
    pub omega_c: f64,
    pub omega_m: f64,
    pub omega_l: f64,
    pub omega_p: f64,
    pub kappa: f64,
}

impl PhysicalParams {
    /// Delta_c = omega_c - omega_L, computed, never stored.
    pub fn delta_c(&self) -> f64 {
        self.omega_c - self.omega_l
    }

    pub fn delta_p(&self) -> f64 {
        self.omega_m - self.omega_p
    }
}

/// Experimental numbers quoted for a planar silicon photonic-crystal device:
/// g0 = 245 Hz, omega_m = 5.6 GHz, gamma = 328 Hz, kappa = 20 MHz, T = 25 mK,
/// driven on the two-phonon red sideband with |alpha| = 1e4.
pub struct MembranePreset {
    pub physical: PhysicalParams,
    pub gamma: f64,
    pub temperature_k: f64,
}

pub fn membrane_preset() -> MembranePreset {
    let omega_m = 5.6e9;
    let kappa = 20.0e6;
    let omega_c = 2.0e14; // representative optical carrier; only Delta_c matters
    let delta_c = 2.0 * omega_m; // two-phonon red sideband
    let target_alpha = 1.0e4;
    // Omega chosen so |alpha| = |Omega / (-Delta_c + i kappa/2)| hits 1e4
    let omega_drive_amp = target_alpha * C64::new(-delta_c, kappa / 2.0).norm();
    MembranePreset {
        physical: PhysicalParams {
            g0: 245.0,
            omega_drive_amp,
            omega_c,
            omega_m,
            omega_l: omega_c - delta_c,
            omega_p: omega_m, // delta_p = 0
            kappa,
        },
        gamma: 328.0,
        temperature_k: 25.0e-3,
    }
}

/// Coherent cavity amplitude and effective coupling from the linearization:
/// alpha = Omega / (-Delta_c + i kappa/2), g_eff = g0 |alpha| (the phase of
/// alpha is absorbed into the mode definition).
pub fn linearize(p: &PhysicalParams) -> Result<(C64, f64)> {
    let denom = C64::new(-p.delta_c(), p.kappa / 2.0);
    if denom.norm() == 0.0 {
        return Err(Error::DegenerateDenominator {
            context: "linearize: -Delta_c + i kappa/2 vanishes".into(),
        });
    }
    let alpha = C64::new(p.omega_drive_amp, 0.0) / denom;
    Ok((alpha, p.g0 * alpha.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwaStatus {
    Ok,
    Warning,
}

/// Rotating-wave-approximation validity threshold on g/omega_m.
pub const RWA_THRESHOLD: f64 = 0.05;

/// The rotating-wave approximation needs g << omega_m; warn past 5%.
pub fn check_rwa(p: &PhysicalParams, g_eff: f64) -> Result<RwaStatus> {
    if p.omega_m <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "omega_m = {} must be > 0",
            p.omega_m
        )));
    }
    Ok(if g_eff / p.omega_m > RWA_THRESHOLD {
        RwaStatus::Warning
    } else {
        RwaStatus::Ok
    })
}

/// Effective Hamiltonian on the composite space:
/// 2*Dp a†a + Dp b†b + g (a†b² + a b†²) + eps (b† + b).
pub fn build_heff(sp: &SystemParams, dims: Truncation) -> Result<Operator> {
    if sp.g != 0.0 && dims.n_a < 2 {
        return Err(Error::InvalidParameter(
            "n_a >= 2 required when g != 0 (the |1_a 0_b> state must exist)".into(),
        ));
    }
    let a = ladder(dims, Mode::Cavity);
    let b = ladder(dims, Mode::Mechanical);
    let adag = a.dagger();
    let bdag = b.dagger();
    let num_a = adag.data.dot(&a.data);
    let num_b = bdag.data.dot(&b.data);
    let b2 = b.data.dot(&b.data);
    let bdag2 = bdag.data.dot(&bdag.data);

    let det_a = C64::new(sp.cavity_detuning_term(), 0.0);
    let det_b = C64::new(sp.delta_p, 0.0);
    let g = C64::new(sp.g, 0.0);
    let eps = C64::new(sp.epsilon, 0.0);

    let mut h = num_a.mapv(|z| z * det_a) + num_b.mapv(|z| z * det_b);
    h = h + (adag.data.dot(&b2) + a.data.dot(&bdag2)).mapv(|z| z * g);
    h = h + (&bdag.data + &b.data).mapv(|z| z * eps);

    debug_assert!(hermiticity_deviation(&h) < 1e-12);
    Operator::new(dims, h)
}

/// `build_heff` minus i(kappa/2) a†a + i(gamma/2) b†b (Schrodinger-picture
/// decay without quantum jumps).
pub fn build_heff_nonhermitian(sp: &SystemParams, dims: Truncation) -> Result<CMat> {
    let h = build_heff(sp, dims)?;
    let a = ladder(dims, Mode::Cavity);
    let b = ladder(dims, Mode::Mechanical);
    let num_a = a.dagger().data.dot(&a.data);
    let num_b = b.dagger().data.dot(&b.data);
    let ik = C64::new(0.0, -sp.kappa / 2.0);
    let ig = C64::new(0.0, -sp.gamma / 2.0);
    Ok(h.data + num_a.mapv(|z| z * ik) + num_b.mapv(|z| z * ig))
}

/// Lindblad collapse operator with its rate; a channel (c, r) contributes
/// (r/2)(2 c rho c† - c†c rho - rho c†c) to the master equation.
#[derive(Debug, Clone)]
pub struct CollapseChannel {
    pub operator: Operator,
    pub rate: f64,
}

/// The three dissipators: cavity decay (a, kappa), thermal phonon absorption
/// (b†, gamma n_th) and emission (b, gamma (n_th + 1)).
pub fn collapse_channels(sp: &SystemParams, dims: Truncation) -> Vec<CollapseChannel> {
    let a = ladder(dims, Mode::Cavity);
    let b = ladder(dims, Mode::Mechanical);
    vec![
        CollapseChannel { operator: a, rate: sp.kappa },
        CollapseChannel { operator: b.dagger(), rate: sp.gamma * sp.n_th },
        CollapseChannel { operator: b, rate: sp.gamma * (sp.n_th + 1.0) },
    ]
}
