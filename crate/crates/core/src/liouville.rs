//! Liouvillian superoperator construction and steady-state solution, with a
//! time-evolution fallback and truncation-convergence control.
//!
//! Vectorization is column-stacking: vec index k = column * d + row, so
//! left-multiplication X rho maps to (I (x) X) vec(rho) and right-
//! multiplication rho X to (X^T (x) I) vec(rho). The convention is pinned by
//! an application-vs-matrix oracle test.

use ndarray::Zip;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{build_heff, collapse_channels, CollapseChannel, SystemParams};
use crate::observables;
use crate::quantum::{
    dagger, hermiticity_deviation, kron, solve_linear, CMat, CVec, DensityMatrix, Operator,
    Truncation,
};

/// Default Frobenius-residual tolerance for the steady-state solve.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Cap on the phonon cutoff during truncation growth.
pub const N_B_CAP: usize = 64;
/// Cap on the composite dimension d = n_a * n_b during truncation growth;
/// the dense Liouvillian is d^2 x d^2, so d = 64 already means a 4096^2
/// system and anything larger is outside the intended weak-drive regime.
pub const COMPOSITE_DIM_CAP: usize = 64;
/// Population allowed in the top Fock levels before a truncation is
/// considered converged.
pub const TOP_LEVEL_THRESHOLD: f64 = 1e-8;

/// The master-equation generator as a dense d^2 x d^2 matrix acting on
/// column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub dims: Truncation,
    pub matrix: CMat,
}

/// How the steady state was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    NullSpace,
    Evolution,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveMethod::NullSpace => write!(f, "nullspace"),
            SolveMethod::Evolution => write!(f, "evolution"),
        }
    }
}

/// Steady state together with its quality diagnostics.
#[derive(Debug, Clone)]
pub struct SteadyStateReport {
    pub rho: DensityMatrix,
    /// Frobenius norm of L[rho] at the returned state.
    pub residual: f64,
    pub method: SolveMethod,
    /// Set by `converge_truncation`; a plain `steady_state` call leaves it
    /// false because a single size proves nothing about convergence.
    pub truncation_converged: bool,
    /// Total population in states with the top photon or top phonon index.
    pub top_level_population: f64,
}

/// Column-stacked vector of a d x d matrix: v[j*d + i] = m[i, j].
pub fn vectorize(m: &CMat) -> CVec {
    let d = m.nrows();
    CVec::from_shape_fn(d * d, |k| m[(k % d, k / d)])
}

/// Inverse of `vectorize`.
pub fn unvectorize(v: &CVec, d: usize) -> CMat {
    CMat::from_shape_fn((d, d), |(i, j)| v[j * d + i])
}

impl Liouvillian {
    /// L[rho] as a matrix, via the superoperator matrix.
    pub fn apply(&self, rho: &CMat) -> CMat {
        unvectorize(&self.matrix.dot(&vectorize(rho)), self.dims.dim())
    }

    /// Max absolute row sum, used to bound stable integration steps.
    pub fn norm_inf(&self) -> f64 {
        (0..self.matrix.nrows())
            .map(|i| self.matrix.row(i).iter().map(|z| z.norm()).sum())
            .fold(0.0, f64::max)
    }
}

/// Assembles M with M vec(rho) = vec(-i[H, rho] + sum_k (r_k/2)(2 c rho c+
/// - c+c rho - rho c+c)).
pub fn build_liouvillian(h: &Operator, channels: &[CollapseChannel]) -> Result<Liouvillian> {
    let dims = h.dims;
    let d = dims.dim();
    let dev = hermiticity_deviation(&h.data);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    for ch in channels {
        if ch.operator.dims != dims {
            return Err(Error::DimensionMismatch(format!(
                "collapse channel dims {} do not match Hamiltonian dims {}",
                ch.operator.dims, dims
            )));
        }
    }

    let eye = CMat::eye(d);
    let i = C64::new(0.0, 1.0);
    let mut m = (kron(&eye, &h.data) - kron(&h.data.t().to_owned(), &eye)).mapv(|z| z * (-i));
    for ch in channels {
        if ch.rate == 0.0 {
            continue;
        }
        let c = &ch.operator.data;
        let cdag_c = dagger(c).dot(c);
        let half = C64::new(ch.rate / 2.0, 0.0);
        let jump = kron(&c.mapv(|z| z.conj()), c).mapv(|z| z * C64::new(2.0, 0.0));
        let diss = jump - kron(&eye, &cdag_c) - kron(&cdag_c.t().to_owned(), &eye);
        Zip::from(&mut m).and(&diss).for_each(|out, &v| *out += v * half);
    }
    Ok(Liouvillian { dims, matrix: m })
}

fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Population in states whose photon index is n_a - 1 or phonon index is
/// n_b - 1 (negative roundoff clipped at zero).
fn top_level_population(rho: &DensityMatrix) -> f64 {
    let dims = rho.dims;
    let mut total = 0.0;
    for na in 0..dims.n_a {
        for mb in 0..dims.n_b {
            if na == dims.n_a - 1 || mb == dims.n_b - 1 {
                let k = dims.index(na, mb);
                total += rho.data[(k, k)].re.max(0.0);
            }
        }
    }
    total
}

fn finish_state(l: &Liouvillian, raw: &CMat, method: SolveMethod) -> Result<SteadyStateReport> {
    // Hermitize and trace-normalize before validating; the raw solver output
    // carries roundoff in both.
    let herm = (raw + &dagger(raw)).mapv(|z| z * C64::new(0.5, 0.0));
    let tr = crate::quantum::trace(&herm);
    if tr.norm() < 1e-12 {
        return Err(Error::SingularSystem {
            detail: "solver returned a traceless matrix".into(),
        });
    }
    let normalized = herm.mapv(|z| z / tr);
    let min_eig = crate::quantum::eigvals_hermitian(&normalized)?
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < -1e-6 {
        return Err(Error::NonPositive { min_eig });
    }
    let rho = DensityMatrix::new(l.dims, normalized)?;
    let residual = frobenius(&l.apply(&rho.data));
    let top = top_level_population(&rho);
    Ok(SteadyStateReport {
        residual,
        method,
        truncation_converged: false,
        top_level_population: top,
        rho,
    })
}

/// Steady state of the master equation: null-space solve with the trace
/// constraint imposed by row replacement (row 0 of M becomes vec(I)^T with
/// unit right-hand side), falling back to long-time evolution if the linear
/// solve fails or misses the residual tolerance.
pub fn steady_state(l: &Liouvillian, tol: f64) -> Result<SteadyStateReport> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
    }
    let d = l.dims.dim();
    let mut m = l.matrix.clone();
    for k in 0..d * d {
        m[(0, k)] = C64::new(0.0, 0.0);
    }
    for i in 0..d {
        m[(0, i * (d + 1))] = C64::new(1.0, 0.0);
    }
    let mut rhs = CVec::zeros(d * d);
    rhs[0] = C64::new(1.0, 0.0);

    let nullspace = solve_linear(&m, &rhs)
        .map(|v| unvectorize(&v, d))
        .and_then(|raw| finish_state(l, &raw, SolveMethod::NullSpace));
    match nullspace {
        Ok(report) if report.residual <= tol => return Ok(report),
        Ok(_) | Err(Error::SingularSystem { .. }) => {}
        Err(other) => return Err(other),
    }

    // fallback: integrate from vacuum in geometrically growing time chunks
    // until the generator annihilates the state
    let mut rho = DensityMatrix::vacuum(l.dims);
    let mut chunk = 10.0 / l.norm_inf().max(1e-300);
    for _ in 0..64 {
        rho = evolve(l, &rho, chunk, f64::INFINITY)?;
        let report = finish_state(l, &rho.data, SolveMethod::Evolution)?;
        if report.residual <= tol {
            return Ok(report);
        }
        rho = report.rho;
        chunk *= 2.0;
    }
    Err(Error::NonConvergence(format!(
        "neither null-space solve nor evolution reached residual {tol:.3e}"
    )))
}

/// Fourth-order fixed-step integration of vec(rho-dot) = M vec(rho) to
/// t_final, with step <= min(dt_max, 0.1 / ||M||_inf).
pub fn evolve(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    t_final: f64,
    dt_max: f64,
) -> Result<DensityMatrix> {
    if rho0.dims != l.dims {
        return Err(Error::DimensionMismatch(format!(
            "initial state dims {} do not match Liouvillian dims {}",
            rho0.dims, l.dims
        )));
    }
    if !(t_final >= 0.0) || !(dt_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "evolve requires t_final >= 0 and dt_max > 0, got ({t_final}, {dt_max})"
        )));
    }
    let dt = dt_max.min(0.1 / l.norm_inf().max(1e-300));
    if !dt.is_finite() || dt <= 0.0 || t_final / dt > 2.0e9 {
        return Err(Error::StepSizeUnderflow { dt });
    }

    let m = &l.matrix;
    let mut v = vectorize(&rho0.data);
    let mut t = 0.0;
    while t < t_final {
        let h = dt.min(t_final - t);
        let k1 = m.dot(&v);
        let k2 = m.dot(&(&v + &k1.mapv(|z| z * C64::new(h / 2.0, 0.0))));
        let k3 = m.dot(&(&v + &k2.mapv(|z| z * C64::new(h / 2.0, 0.0))));
        let k4 = m.dot(&(&v + &k3.mapv(|z| z * C64::new(h, 0.0))));
        v = &v
            + &(k1.mapv(|z| z * C64::new(h / 6.0, 0.0))
                + k2.mapv(|z| z * C64::new(h / 3.0, 0.0))
                + k3.mapv(|z| z * C64::new(h / 3.0, 0.0))
                + k4.mapv(|z| z * C64::new(h / 6.0, 0.0)));
        t += h;
    }

    let d = l.dims.dim();
    let raw = unvectorize(&v, d);
    let herm = (&raw + &dagger(&raw)).mapv(|z| z * C64::new(0.5, 0.0));
    let tr = crate::quantum::trace(&herm);
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::NonConvergence(format!(
            "trace drifted to {tr} during evolution"
        )));
    }
    DensityMatrix::new(l.dims, herm.mapv(|z| z / tr))
}

fn grow(dims: Truncation, grow_cavity: bool) -> Result<Truncation> {
    let n_b = dims.n_b * 2;
    let n_a = if grow_cavity { dims.n_a + 1 } else { dims.n_a };
    if n_b > N_B_CAP || n_a * n_b > COMPOSITE_DIM_CAP {
        return Err(Error::TruncationExplosion(format!(
            "next size ({n_a}, {n_b}) exceeds n_b cap {N_B_CAP} or composite cap {COMPOSITE_DIM_CAP}"
        )));
    }
    Truncation::new(n_a, n_b)
}

fn solve_at(sp: &SystemParams, dims: Truncation) -> Result<SteadyStateReport> {
    let h = build_heff(sp, dims)?;
    let channels = collapse_channels(sp, dims);
    let l = build_liouvillian(&h, &channels)?;
    steady_state(&l, DEFAULT_TOL)
}

fn convergence_metrics(report: &SteadyStateReport) -> (f64, Option<f64>) {
    let (_, mean_phonons) = observables::occupations(&report.rho);
    let g2 = observables::g2_zero(&report.rho).ok();
    (mean_phonons, g2)
}

/// Grows the truncation until g2(0) and the mean phonon number change by
/// less than `tol` (relative) between successive sizes and the top Fock
/// levels are unpopulated. The phonon cutoff doubles each round; the photon
/// cutoff grows when the top cavity level itself holds population.
pub fn converge_truncation(
    sp: &SystemParams,
    start: Truncation,
    tol: f64,
) -> Result<(Truncation, SteadyStateReport)> {
    sp.validate()?;
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be > 0")));
    }
    let mut dims = start;
    let mut report = solve_at(sp, dims)?;
    let (mut phonons, mut g2) = convergence_metrics(&report);

    // an essentially empty mechanical mode cannot populate higher levels:
    // any truncation is converged
    if phonons < 1e-12 && report.top_level_population < TOP_LEVEL_THRESHOLD {
        report.truncation_converged = true;
        return Ok((dims, report));
    }

    for _ in 0..16 {
        let top_cavity: f64 = (0..dims.n_b)
            .map(|mb| {
                let k = dims.index(dims.n_a - 1, mb);
                report.rho.data[(k, k)].re.max(0.0)
            })
            .sum();
        let next = grow(dims, top_cavity > TOP_LEVEL_THRESHOLD)?;
        let next_report = solve_at(sp, next)?;
        let (next_phonons, next_g2) = convergence_metrics(&next_report);

        let phonon_ok = (next_phonons - phonons).abs() <= tol * next_phonons.abs().max(1e-300);
        let g2_ok = match (g2, next_g2) {
            (Some(a), Some(b)) => (b - a).abs() <= tol * b.abs().max(1e-300),
            (None, None) => true,
            _ => false,
        };
        dims = next;
        report = next_report;
        phonons = next_phonons;
        g2 = next_g2;
        if phonon_ok && g2_ok && report.top_level_population < TOP_LEVEL_THRESHOLD {
            report.truncation_converged = true;
            return Ok((dims, report));
        }
    }
    Err(Error::TruncationExplosion(
        "observables did not settle before the growth budget ran out".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{ladder, max_abs, trace, Mode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
        let m = CMat::from_shape_fn((n, n), |_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        (&m + &dagger(&m)).mapv(|z| z * c(0.5, 0.0))
    }

    /// Direct superoperator application, the oracle the matrix is checked
    /// against.
    fn apply_direct(h: &CMat, channels: &[CollapseChannel], rho: &CMat) -> CMat {
        let i = c(0.0, 1.0);
        let mut out = (h.dot(rho) - rho.dot(h)).mapv(|z| z * (-i));
        for ch in channels {
            let cm = &ch.operator.data;
            let cd = dagger(cm);
            let cdc = cd.dot(cm);
            let term = cm.dot(rho).dot(&cd).mapv(|z| z * c(2.0, 0.0))
                - cdc.dot(rho)
                - rho.dot(&cdc);
            out = out + term.mapv(|z| z * c(ch.rate / 2.0, 0.0));
        }
        out
    }

    #[test]
    fn vectorize_round_trip_and_convention() {
        let mut m = CMat::zeros((2, 2));
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(2.0, 0.0);
        m[(1, 0)] = c(3.0, 0.0);
        m[(1, 1)] = c(4.0, 0.0);
        let v = vectorize(&m);
        // column stacking: (1, 3, 2, 4)
        assert_eq!(v[0], c(1.0, 0.0));
        assert_eq!(v[1], c(3.0, 0.0));
        assert_eq!(v[2], c(2.0, 0.0));
        assert_eq!(v[3], c(4.0, 0.0));
        assert!(max_abs(&(&unvectorize(&v, 2) - &m)) == 0.0);
    }

    #[test]
    fn matrix_matches_direct_application() {
        // random H and random rho on dims (2, 3): matrix route equals the
        // direct superoperator application
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let dims = Truncation::new(2, 3).unwrap();
        let sp = SystemParams { n_th: 0.3, ..SystemParams::baseline() };
        let h = build_heff(&sp, dims).unwrap();
        let channels = collapse_channels(&sp, dims);
        let l = build_liouvillian(&h, &channels).unwrap();
        for _ in 0..20 {
            let rho = random_hermitian(&mut rng, dims.dim());
            let via_matrix = l.apply(&rho);
            let direct = apply_direct(&h.data, &channels, &rho);
            assert!(max_abs(&(&via_matrix - &direct)) < 1e-12);
        }
    }

    #[test]
    fn hand_applied_dissipator() {
        // H = 0, single channel (b, gamma), rho = |1><1| ->
        // L[rho] = gamma (|0><0| - |1><1|)
        let dims = Truncation::new(1, 2).unwrap();
        let gamma = 0.37;
        let h = Operator::zeros(dims);
        let channels = vec![CollapseChannel { operator: ladder(dims, Mode::Mechanical), rate: gamma }];
        let l = build_liouvillian(&h, &channels).unwrap();
        let rho = DensityMatrix::fock(dims, 0, 1).unwrap();
        let out = l.apply(&rho.data);
        let mut want = CMat::zeros((2, 2));
        want[(0, 0)] = c(gamma, 0.0);
        want[(1, 1)] = c(-gamma, 0.0);
        assert!(max_abs(&(&out - &want)) < 1e-14);
    }

    #[test]
    fn identity_state_is_invariant_without_dissipation() {
        // arbitrary H, no channels: L[I/d] = 0
        let dims = Truncation::new(2, 4).unwrap();
        let sp = SystemParams { delta_p: 0.4, ..SystemParams::baseline() };
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &[]).unwrap();
        let rho = CMat::eye(dims.dim()).mapv(|z| z / c(dims.dim() as f64, 0.0));
        assert!(max_abs(&l.apply(&rho)) < 1e-12);
    }

    #[test]
    fn image_is_traceless_and_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let dims = Truncation::new(2, 4).unwrap();
        let sp = SystemParams { n_th: 0.1, delta_p: -0.6, ..SystemParams::baseline() };
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &collapse_channels(&sp, dims)).unwrap();
        for _ in 0..50 {
            let rho = random_hermitian(&mut rng, dims.dim());
            let out = l.apply(&rho);
            assert!(trace(&out).norm() < 1e-10);
            assert!(hermiticity_deviation(&out) < 1e-10);
        }
    }

    #[test]
    fn rejects_nonhermitian_hamiltonian_and_mismatched_channels() {
        let dims = Truncation::new(1, 2).unwrap();
        let mut m = CMat::zeros((2, 2));
        m[(0, 1)] = c(1.0, 0.0);
        let bad_h = Operator::new(dims, m).unwrap();
        assert!(matches!(
            build_liouvillian(&bad_h, &[]).unwrap_err(),
            Error::NotHermitian { .. }
        ));

        let other = Truncation::new(1, 3).unwrap();
        let ch = vec![CollapseChannel { operator: ladder(other, Mode::Mechanical), rate: 1.0 }];
        assert!(matches!(
            build_liouvillian(&Operator::zeros(dims), &ch).unwrap_err(),
            Error::DimensionMismatch(_)
        ));
    }

    #[test]
    fn steady_state_empty_system_is_vacuum() {
        let dims = Truncation::new(2, 4).unwrap();
        let sp = SystemParams { g: 0.0, epsilon: 0.0, ..SystemParams::baseline() };
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &collapse_channels(&sp, dims)).unwrap();
        let report = steady_state(&l, DEFAULT_TOL).unwrap();
        assert_eq!(report.method, SolveMethod::NullSpace);
        assert!(report.residual <= DEFAULT_TOL);
        let vacuum = DensityMatrix::vacuum(dims);
        assert!(max_abs(&(&report.rho.data - &vacuum.data)) < 1e-10);
    }

    #[test]
    fn steady_state_thermal_detailed_balance() {
        // g = 0, eps = 0, n_th = 0.5: mechanical populations are
        // (n/(n+1))^m / (n+1) and <b†b> = 0.5
        let nbar = 0.5;
        let dims = Truncation::new(1, 24).unwrap();
        let sp = SystemParams {
            g: 0.0,
            epsilon: 0.0,
            n_th: nbar,
            ..SystemParams::baseline()
        };
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &collapse_channels(&sp, dims)).unwrap();
        let report = steady_state(&l, DEFAULT_TOL).unwrap();
        let ratio = nbar / (nbar + 1.0);
        for m in 0..12 {
            let want = ratio.powi(m as i32) / (nbar + 1.0);
            let got = report.rho.data[(m, m)].re;
            assert!((got - want).abs() < 1e-6, "level {m}: {got} vs {want}");
        }
        let b = ladder(dims, Mode::Mechanical);
        let nb = b.dagger().data.dot(&b.data);
        let occ = report.rho.expect(&nb);
        assert!((occ.re - nbar).abs() < 1e-6);
        assert!(occ.im.abs() < 1e-10);
    }

    #[test]
    fn steady_state_driven_damped_oscillator() {
        // g = 0, eps = 0.001, gamma = 0.1, Dp = 0: coherent state with
        // <b†b> = (eps/(gamma/2))^2 = 4e-4
        let dims = Truncation::new(1, 5).unwrap();
        let sp = SystemParams {
            g: 0.0,
            epsilon: 0.001,
            gamma: 0.1,
            delta_p: 0.0,
            ..SystemParams::baseline()
        };
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &collapse_channels(&sp, dims)).unwrap();
        let report = steady_state(&l, DEFAULT_TOL).unwrap();
        let b = ladder(dims, Mode::Mechanical);
        let nb = b.dagger().data.dot(&b.data);
        let occ = report.rho.expect(&nb).re;
        assert!((occ - 4e-4).abs() < 1e-8, "occupation {occ}");
    }

    #[test]
    fn steady_state_report_quality_baseline() {
        let dims = Truncation::new(3, 10).unwrap();
        let sp = SystemParams::baseline();
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &collapse_channels(&sp, dims)).unwrap();
        let report = steady_state(&l, DEFAULT_TOL).unwrap();
        assert!(report.residual <= DEFAULT_TOL);
        assert!(hermiticity_deviation(&report.rho.data) < 1e-10);
        assert!((trace(&report.rho.data).re - 1.0).abs() < 1e-12);
        assert!(report.top_level_population < 1e-8);
        assert!(!report.truncation_converged);
    }

    #[test]
    fn evolve_zero_generator_is_identity_map() {
        let dims = Truncation::new(1, 3).unwrap();
        let l = Liouvillian { dims, matrix: CMat::zeros((9, 9)) };
        let rho0 = DensityMatrix::fock(dims, 0, 2).unwrap();
        let out = evolve(&l, &rho0, 5.0, 0.1).unwrap();
        assert!(max_abs(&(&out.data - &rho0.data)) < 1e-14);
    }

    #[test]
    fn evolve_exponential_decay() {
        // single channel (b, gamma) from |1><1|: <b†b>(t) = exp(-gamma t)
        let dims = Truncation::new(1, 2).unwrap();
        let gamma = 0.8;
        let h = Operator::zeros(dims);
        let channels = vec![CollapseChannel { operator: ladder(dims, Mode::Mechanical), rate: gamma }];
        let l = build_liouvillian(&h, &channels).unwrap();
        let rho0 = DensityMatrix::fock(dims, 0, 1).unwrap();
        let b = ladder(dims, Mode::Mechanical);
        let nb = b.dagger().data.dot(&b.data);
        for t in [0.3, 1.0, 2.5] {
            let rho_t = evolve(&l, &rho0, t, 0.01).unwrap();
            let occ = rho_t.expect(&nb).re;
            assert!((occ - (-gamma * t).exp()).abs() < 1e-6, "t = {t}: {occ}");
        }
    }

    #[test]
    fn evolve_agrees_with_nullspace() {
        // cross-method uniqueness probe at baseline rates on a small space
        let dims = Truncation::new(2, 4).unwrap();
        let sp = SystemParams::baseline();
        let h = build_heff(&sp, dims).unwrap();
        let l = build_liouvillian(&h, &collapse_channels(&sp, dims)).unwrap();
        let direct = steady_state(&l, DEFAULT_TOL).unwrap();
        let t_final = 50.0 / sp.kappa.min(sp.gamma);
        let evolved = evolve(&l, &DensityMatrix::vacuum(dims), t_final, f64::INFINITY).unwrap();
        assert!(max_abs(&(&evolved.data - &direct.rho.data)) < 1e-6);
    }

    #[test]
    fn evolve_step_size_underflow() {
        let dims = Truncation::new(1, 2).unwrap();
        let gamma = 1.0;
        let channels = vec![CollapseChannel { operator: ladder(dims, Mode::Mechanical), rate: gamma }];
        let l = build_liouvillian(&Operator::zeros(dims), &channels).unwrap();
        let rho0 = DensityMatrix::vacuum(dims);
        let err = evolve(&l, &rho0, 1e12, f64::INFINITY).unwrap_err();
        assert!(matches!(err, Error::StepSizeUnderflow { .. }));
    }

    #[test]
    fn converge_truncation_vacuum_is_immediate() {
        let sp = SystemParams { epsilon: 0.0, ..SystemParams::baseline() };
        let start = Truncation::new(2, 3).unwrap();
        let (dims, report) = converge_truncation(&sp, start, 0.01).unwrap();
        assert_eq!(dims, start);
        assert!(report.truncation_converged);
    }

    #[test]
    fn converge_truncation_baseline_settles_small() {
        let sp = SystemParams::baseline();
        let start = Truncation::new(3, 8).unwrap();
        let (dims, report) = converge_truncation(&sp, start, 0.01).unwrap();
        assert!(dims.n_b <= 16, "settled at {dims}");
        assert!(report.truncation_converged);
        assert!(report.top_level_population < TOP_LEVEL_THRESHOLD);
    }

    #[test]
    fn converge_truncation_explodes_for_strong_coherent_drive() {
        // g = 0, eps = 0.1, gamma = 0.01: mean phonon number 400, far past
        // any allowed cutoff
        let sp = SystemParams { g: 0.0, ..SystemParams::baseline() };
        let start = Truncation::new(1, 4).unwrap();
        let err = converge_truncation(&sp, start, 0.01).unwrap_err();
        assert!(matches!(err, Error::TruncationExplosion(_)));
    }
}
