//! Measured quantities extracted from a steady state: the second-order
//! phonon correlation g2(0), the few-phonon fidelity F, mode occupations
//! and Fock populations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quantum::{ladder, DensityMatrix, Mode};

/// Mean phonon occupation below which g2(0) is reported as undefined
/// instead of dividing by a vanishing denominator.
pub const G2_OCCUPATION_FLOOR: f64 = 1e-12;

/// Everything the toolkit reports about one steady state.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    /// None when the mechanical mode is essentially empty.
    pub g2: Option<f64>,
    pub mean_phonons: f64,
    pub mean_photons: f64,
    pub fidelity_f: f64,
    /// Diagonal populations keyed by (photon, phonon), negative roundoff
    /// clipped to zero.
    pub populations: BTreeMap<(usize, usize), f64>,
}

/// Equal-time second-order phonon correlation
/// g2(0) = tr(rho b†b†bb) / tr(rho b†b)^2.
pub fn g2_zero(rho: &DensityMatrix) -> Result<f64> {
    let b = ladder(rho.dims, Mode::Mechanical);
    let bdag = b.dagger();
    let nb = bdag.data.dot(&b.data);
    let b2 = b.data.dot(&b.data);
    let fourth = bdag.data.dot(&bdag.data).dot(&b2);

    let denom = rho.expect(&nb);
    let numer = rho.expect(&fourth);
    debug_assert!(denom.im.abs() < 1e-10 && numer.im.abs() < 1e-10);
    if denom.re < G2_OCCUPATION_FLOOR {
        return Err(Error::InsufficientOccupation { occupation: denom.re });
    }
    Ok(numer.re / (denom.re * denom.re))
}

/// Few-phonon fidelity F: the total population of the four states the
/// truncated amplitude expansion keeps, |0a0b>, |0a1b>, |0a2b>, |1a0b>.
pub fn fidelity_f(rho: &DensityMatrix) -> Result<f64> {
    let dims = rho.dims;
    if dims.n_a < 2 || dims.n_b < 3 {
        return Err(Error::InvalidParameter(format!(
            "fidelity needs n_a >= 2 and n_b >= 3, got {dims}"
        )));
    }
    let pop = |na: usize, mb: usize| rho.data[(dims.index(na, mb), dims.index(na, mb))].re;
    Ok(pop(0, 0) + pop(0, 1) + pop(0, 2) + pop(1, 0))
}

/// (mean photons, mean phonons) = (tr(rho a†a), tr(rho b†b)).
pub fn occupations(rho: &DensityMatrix) -> (f64, f64) {
    let a = ladder(rho.dims, Mode::Cavity);
    let b = ladder(rho.dims, Mode::Mechanical);
    let na = rho.expect(&a.dagger().data.dot(&a.data));
    let nb = rho.expect(&b.dagger().data.dot(&b.data));
    debug_assert!(na.im.abs() < 1e-10 && nb.im.abs() < 1e-10);
    (na.re, nb.re)
}

/// Diagonal populations by (photon, phonon), with negative roundoff below
/// -1e-10 clipped to zero.
pub fn populations(rho: &DensityMatrix) -> BTreeMap<(usize, usize), f64> {
    let dims = rho.dims;
    let mut out = BTreeMap::new();
    for na in 0..dims.n_a {
        for mb in 0..dims.n_b {
            let k = dims.index(na, mb);
            let p = rho.data[(k, k)].re;
            out.insert((na, mb), if p < 0.0 { 0.0 } else { p });
        }
    }
    out
}

/// Bundles every observable for one state.
pub fn observable_set(rho: &DensityMatrix) -> Result<ObservableSet> {
    let g2 = match g2_zero(rho) {
        Ok(v) => Some(v),
        Err(Error::InsufficientOccupation { .. }) => None,
        Err(e) => return Err(e),
    };
    let (mean_photons, mean_phonons) = occupations(rho);
    Ok(ObservableSet {
        g2,
        mean_phonons,
        mean_photons,
        fidelity_f: fidelity_f(rho)?,
        populations: populations(rho),
    })
}
