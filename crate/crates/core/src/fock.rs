//! Truncated Fock-space model: a three-level atom (`a`, `b`, `c`) coupled to
//! two single-mode fields, evaluated at a single point of the standing wave.
//!
//! The full Hamiltonian
//!
//! ```text
//! H = -Delta |c><c| - delta |b><b| + W (|a><c| + |c><a|) + s† |b><c| + s |c><b|,
//! s = g (a + b)
//! ```
//!
//! is compared against the adiabatically eliminated photonic Hamiltonian
//! `W^2 g^2 / (Delta^2 delta) (a + b)†(a + b)`. Both act on the basis
//! `|atom> ⊗ |n_a> ⊗ |n_b>` with `n_a, n_b <= n_max`; the photonic index is
//! `n_a (n_max + 1) + n_b` and the atomic level is the slowest index.

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{FwmError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Cutoff population above which results are rejected.
pub const TRUNCATION_HARD_LIMIT: f64 = 1e-4;
/// Cutoff population above which results are flagged.
pub const TRUNCATION_WARN_LIMIT: f64 = 1e-8;
/// Allowed norm drift after propagation.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Allowed deviation from Hermiticity.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomLevel {
    A = 0,
    B = 1,
    C = 2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub n_max: usize,
    /// Pump amplitude `W` at the chosen point (the `2 Omega` of a running wave).
    pub w_amp: f64,
    pub g_coupling: f64,
    pub delta_one: f64,
    pub delta_two: f64,
}

impl FockConfig {
    fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(FwmError::param("n_max", "must be at least 1"));
        }
        for (name, v) in [
            ("w_amp", self.w_amp),
            ("g_coupling", self.g_coupling),
            ("delta_one", self.delta_one),
            ("delta_two", self.delta_two),
        ] {
            if !v.is_finite() {
                return Err(FwmError::param(name, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn modes_dim(&self) -> usize {
        (self.n_max + 1).pow(2)
    }

    pub fn full_dim(&self) -> usize {
        3 * self.modes_dim()
    }

    /// `W^2 g^2 / (Delta^2 delta)`.
    pub fn effective_coupling(&self) -> f64 {
        (self.w_amp * self.g_coupling).powi(2) / (self.delta_one.powi(2) * self.delta_two)
    }

    /// Beat period `pi / |kappa|` of the single-photon sector, whose
    /// eigenvalues are `{0, 2 kappa}`. `None` when the coupling vanishes.
    pub fn effective_beat_period(&self) -> Option<f64> {
        let k = self.effective_coupling();
        (k != 0.0 && k.is_finite()).then(|| std::f64::consts::PI / k.abs())
    }

    /// `(|W/Delta|, g sqrt(n_max) W / |Delta delta|)`.
    pub fn dispersive_ratios(&self) -> (f64, f64) {
        let n = self.n_max as f64;
        (
            (self.w_amp / self.delta_one).abs(),
            (self.g_coupling * n.sqrt() * self.w_amp / (self.delta_one * self.delta_two)).abs(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(pub DVector<Complex64>);

impl StateVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn normalized(mut self) -> Self {
        let n = self.0.norm();
        if n > 0.0 {
            self.0 /= Complex64::new(n, 0.0);
        }
        self
    }
}

fn photonic_index(n_max: usize, na: usize, nb: usize) -> usize {
    na * (n_max + 1) + nb
}

fn sqrt_u(n: usize) -> f64 {
    (n as f64).sqrt()
}

/// Matrix elements of `s = g (a + b)` on the photonic space, as
/// `(row, col, value)` triples.
fn coupling_elements(n_max: usize, g: f64) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for na in 0..=n_max {
        for nb in 0..=n_max {
            let col = photonic_index(n_max, na, nb);
            if na > 0 {
                out.push((photonic_index(n_max, na - 1, nb), col, g * sqrt_u(na)));
            }
            if nb > 0 {
                out.push((photonic_index(n_max, na, nb - 1), col, g * sqrt_u(nb)));
            }
        }
    }
    out
}

pub fn build_full_hamiltonian(cfg: &FockConfig) -> Result<CMatrix> {
    cfg.validate()?;
    let m = cfg.modes_dim();
    let blk = |level: AtomLevel, p: usize| level as usize * m + p;
    let mut h = CMatrix::zeros(3 * m, 3 * m);
    for p in 0..m {
        h[(blk(AtomLevel::C, p), blk(AtomLevel::C, p))] = Complex64::new(-cfg.delta_one, 0.0);
        h[(blk(AtomLevel::B, p), blk(AtomLevel::B, p))] = Complex64::new(-cfg.delta_two, 0.0);
        let w = Complex64::new(cfg.w_amp, 0.0);
        h[(blk(AtomLevel::A, p), blk(AtomLevel::C, p))] = w;
        h[(blk(AtomLevel::C, p), blk(AtomLevel::A, p))] = w;
    }
    for (row, col, v) in coupling_elements(cfg.n_max, cfg.g_coupling) {
        // s |c><b| moves b -> c and lowers; its adjoint s† |b><c| raises.
        h[(blk(AtomLevel::C, row), blk(AtomLevel::B, col))] += Complex64::new(v, 0.0);
        h[(blk(AtomLevel::B, col), blk(AtomLevel::C, row))] += Complex64::new(v, 0.0);
    }
    Ok(h)
}

/// `chi (n_a + n_b) + sigma (a b† + a† b)` on the photonic space.
pub fn beamsplitter_hamiltonian(n_max: usize, chi: f64, sigma: f64) -> CMatrix {
    let m = (n_max + 1).pow(2);
    let mut h = CMatrix::zeros(m, m);
    for na in 0..=n_max {
        for nb in 0..=n_max {
            let col = photonic_index(n_max, na, nb);
            h[(col, col)] = Complex64::new(chi * (na + nb) as f64, 0.0);
            // a† b
            if nb > 0 && na < n_max {
                let row = photonic_index(n_max, na + 1, nb - 1);
                h[(row, col)] += Complex64::new(sigma * sqrt_u(na + 1) * sqrt_u(nb), 0.0);
            }
            // a b†
            if na > 0 && nb < n_max {
                let row = photonic_index(n_max, na - 1, nb + 1);
                h[(row, col)] += Complex64::new(sigma * sqrt_u(na) * sqrt_u(nb + 1), 0.0);
            }
        }
    }
    h
}

/// `W^2 g^2 / (Delta^2 delta) (a + b)†(a + b)` on the photonic space.
pub fn build_effective_hamiltonian(cfg: &FockConfig) -> Result<CMatrix> {
    cfg.validate()?;
    let k = cfg.effective_coupling();
    Ok(beamsplitter_hamiltonian(cfg.n_max, k, k))
}

pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    (h - h.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

struct Block {
    indices: Vec<usize>,
    energies: DVector<f64>,
    vectors: CMatrix,
}

/// Exact propagator `exp(-i H t)` for a time-independent Hermitian `H`.
///
/// `H` is split into the connected components of its sparsity graph (for
/// the atom-field model these are the sectors of fixed excitation number),
/// and each block is diagonalized once.
pub struct Propagator {
    dim: usize,
    blocks: Vec<Block>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl Propagator {
    pub fn new(h: &CMatrix) -> Result<Self> {
        if !h.is_square() {
            return Err(FwmError::Dimension {
                expected: h.nrows(),
                got: h.ncols(),
            });
        }
        let defect = hermiticity_defect(h);
        if defect > HERMITICITY_TOLERANCE {
            return Err(FwmError::NotHermitian { defect });
        }
        let dim = h.nrows();
        let mut parent: Vec<usize> = (0..dim).collect();
        for i in 0..dim {
            for j in (i + 1)..dim {
                if h[(i, j)] != ZERO || h[(j, i)] != ZERO {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); dim];
        for i in 0..dim {
            let r = find(&mut parent, i);
            groups[r].push(i);
        }
        let blocks = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|indices| {
                let n = indices.len();
                let sub = CMatrix::from_fn(n, n, |r, c| h[(indices[r], indices[c])]);
                // Exact Hermitian symmetrization of the block before diagonalizing.
                let sub = (&sub + sub.adjoint()) * Complex64::new(0.5, 0.0);
                let eig = SymmetricEigen::new(sub);
                Block {
                    indices,
                    energies: eig.eigenvalues,
                    vectors: eig.eigenvectors,
                }
            })
            .collect();
        Ok(Propagator { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn apply(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.len() != self.dim {
            return Err(FwmError::Dimension {
                expected: self.dim,
                got: psi.len(),
            });
        }
        let mut out = DVector::from_element(self.dim, ZERO);
        for b in &self.blocks {
            let local = DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| psi.0[i]));
            let mut coeff = b.vectors.adjoint() * local;
            for (c, &e) in coeff.iter_mut().zip(b.energies.iter()) {
                *c *= Complex64::new(0.0, -e * t).exp();
            }
            let back = &b.vectors * coeff;
            for (k, &i) in b.indices.iter().enumerate() {
                out[i] = back[k];
            }
        }
        let before = psi.norm_sqr();
        let drift = (out.norm_squared() - before).abs();
        if drift > NORM_TOLERANCE * before.max(1.0) {
            return Err(FwmError::NormDrift { drift });
        }
        Ok(StateVector(out))
    }
}

/// `psi(t) = exp(-i H t) psi0`.
pub fn evolve(h: &CMatrix, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Propagator::new(h)?.apply(psi0, t)
}

pub fn vacuum(n_max: usize) -> StateVector {
    let mut v = DVector::from_element(n_max + 1, ZERO);
    v[0] = Complex64::new(1.0, 0.0);
    StateVector(v)
}

/// Single-mode coherent state, truncated at `n_max` and renormalized.
pub fn coherent_state(n_max: usize, alpha: Complex64) -> StateVector {
    let mut v = DVector::from_element(n_max + 1, ZERO);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    v[0] = c;
    for n in 1..=n_max {
        c *= alpha / sqrt_u(n);
        v[n] = c;
    }
    StateVector(v).normalized()
}

/// Single-mode squeezed vacuum `S(r e^{i theta})|0>`, truncated and renormalized.
pub fn squeezed_vacuum(n_max: usize, r: f64, theta: f64) -> StateVector {
    let mut v = DVector::from_element(n_max + 1, ZERO);
    let ratio = -Complex64::from_polar(r.tanh(), theta);
    let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    v[0] = c;
    let mut n = 2;
    while n <= n_max {
        c *= ratio * (sqrt_u(n) * sqrt_u(n - 1) / n as f64);
        v[n] = c;
        n += 2;
    }
    StateVector(v).normalized()
}

/// `|psi_a> ⊗ |psi_b>` on the photonic space.
pub fn product_state(psi_a: &StateVector, psi_b: &StateVector) -> Result<StateVector> {
    if psi_a.len() != psi_b.len() {
        return Err(FwmError::Dimension {
            expected: psi_a.len(),
            got: psi_b.len(),
        });
    }
    let d = psi_a.len();
    Ok(StateVector(DVector::from_fn(d * d, |i, _| psi_a.0[i / d] * psi_b.0[i % d])))
}

/// `|level> ⊗ |photonic>`.
pub fn with_atom(level: AtomLevel, photonic: &StateVector) -> StateVector {
    let m = photonic.len();
    let mut v = DVector::from_element(3 * m, ZERO);
    v.rows_mut(level as usize * m, m).copy_from(&photonic.0);
    StateVector(v)
}

/// Photonic part of a full state for one atomic level (not renormalized).
pub fn project_atom(full: &StateVector, level: AtomLevel) -> StateVector {
    let m = full.len() / 3;
    StateVector(full.0.rows(level as usize * m, m).into_owned())
}

fn n_max_of(photonic: &StateVector) -> Result<usize> {
    let d = (photonic.len() as f64).sqrt().round() as usize;
    if d * d != photonic.len() || d < 2 {
        return Err(FwmError::Dimension {
            expected: d * d,
            got: photonic.len(),
        });
    }
    Ok(d - 1)
}

/// Population in photonic basis states with either mode at the cutoff.
pub fn cutoff_population(photonic: &StateVector) -> Result<f64> {
    let n_max = n_max_of(photonic)?;
    let mut pop = 0.0;
    for na in 0..=n_max {
        for nb in 0..=n_max {
            if na == n_max || nb == n_max {
                pop += photonic.0[photonic_index(n_max, na, nb)].norm_sqr();
            }
        }
    }
    Ok(pop)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationResult {
    /// `|<psi_eff | P_a psi_full>|^2 / <P_a psi_full | P_a psi_full>`.
    pub fidelity: f64,
    /// `1 - <P_a psi_full | P_a psi_full>`.
    pub leakage: f64,
    /// Largest cutoff population seen in either evolution.
    pub cutoff_population: f64,
}

/// Evolves `|a> ⊗ psi_photonic_0` under the full Hamiltonian and
/// `psi_photonic_0` under the effective one, then compares the ground-state
/// projection of the former with the latter.
pub fn elimination_fidelity(cfg: &FockConfig, psi_photonic_0: &StateVector, t: f64) -> Result<EliminationResult> {
    if psi_photonic_0.len() != cfg.modes_dim() {
        return Err(FwmError::Dimension {
            expected: cfg.modes_dim(),
            got: psi_photonic_0.len(),
        });
    }
    let full = evolve(&build_full_hamiltonian(cfg)?, &with_atom(AtomLevel::A, psi_photonic_0), t)?;
    let eff = evolve(&build_effective_hamiltonian(cfg)?, psi_photonic_0, t)?;
    let ground = project_atom(&full, AtomLevel::A);
    let ground_pop = ground.norm_sqr();

    let mut cutoff = cutoff_population(psi_photonic_0)?.max(cutoff_population(&eff)?);
    for level in [AtomLevel::A, AtomLevel::B, AtomLevel::C] {
        cutoff = cutoff.max(cutoff_population(&project_atom(&full, level))?);
    }
    if cutoff > TRUNCATION_HARD_LIMIT {
        return Err(FwmError::Truncation { population: cutoff });
    }
    let fidelity = if ground_pop > 0.0 {
        eff.inner(&ground).norm_sqr() / (ground_pop * eff.norm_sqr())
    } else {
        0.0
    };
    Ok(EliminationResult {
        fidelity,
        leakage: 1.0 - ground_pop / psi_photonic_0.norm_sqr(),
        cutoff_population: cutoff,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockStats {
    /// `(<X_a>, <Y_a>, <X_b>, <Y_b>)`.
    pub mean: [f64; 4],
    /// Symmetrized covariance, same ordering and convention as the
    /// Gaussian module.
    pub cov: Matrix4<f64>,
    pub photons: [f64; 2],
    pub cutoff_population: f64,
    /// Set when the cutoff population exceeds [`TRUNCATION_WARN_LIMIT`].
    pub truncation_warning: bool,
}

fn lower(psi: &StateVector, n_max: usize, mode: usize) -> DVector<Complex64> {
    let mut out = DVector::from_element(psi.len(), ZERO);
    for na in 0..=n_max {
        for nb in 0..=n_max {
            let (n, target) = match mode {
                0 if na > 0 => (na, photonic_index(n_max, na - 1, nb)),
                1 if nb > 0 => (nb, photonic_index(n_max, na, nb - 1)),
                _ => continue,
            };
            out[target] += psi.0[photonic_index(n_max, na, nb)] * sqrt_u(n);
        }
    }
    out
}

fn raise(psi: &StateVector, n_max: usize, mode: usize) -> DVector<Complex64> {
    let mut out = DVector::from_element(psi.len(), ZERO);
    for na in 0..=n_max {
        for nb in 0..=n_max {
            let (n, target) = match mode {
                0 if na < n_max => (na + 1, photonic_index(n_max, na + 1, nb)),
                1 if nb < n_max => (nb + 1, photonic_index(n_max, na, nb + 1)),
                _ => continue,
            };
            out[target] += psi.0[photonic_index(n_max, na, nb)] * sqrt_u(n);
        }
    }
    out
}

/// Quadrature means, covariance and photon numbers from a photonic state.
pub fn fock_quadrature_stats(psi: &StateVector) -> Result<FockStats> {
    let n_max = n_max_of(psi)?;
    let cutoff = cutoff_population(psi)?;
    if cutoff > TRUNCATION_HARD_LIMIT {
        return Err(FwmError::Truncation { population: cutoff });
    }
    let norm = psi.norm_sqr();
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    let mut r_psi: Vec<DVector<Complex64>> = Vec::with_capacity(4);
    let mut photons = [0.0; 2];
    for (mode, count) in photons.iter_mut().enumerate() {
        let a = lower(psi, n_max, mode);
        let ad = raise(psi, n_max, mode);
        *count = a.norm_squared() / norm;
        r_psi.push((&a + &ad) * half);
        r_psi.push((&a - &ad) * minus_half_i);
    }
    let mut mean = [0.0; 4];
    for (m, v) in mean.iter_mut().zip(&r_psi) {
        *m = psi.0.dotc(v).re / norm;
    }
    let cov = Matrix4::from_fn(|i, j| r_psi[i].dotc(&r_psi[j]).re / norm - mean[i] * mean[j]);
    Ok(FockStats {
        mean,
        cov,
        photons,
        cutoff_population: cutoff,
        truncation_warning: cutoff > TRUNCATION_WARN_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_max: usize) -> FockConfig {
        FockConfig {
            n_max,
            w_amp: 0.05,
            g_coupling: 0.035,
            delta_one: 1.0,
            delta_two: 0.5,
        }
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal() {
        let c = FockConfig {
            w_amp: 0.0,
            g_coupling: 0.0,
            ..cfg(2)
        };
        let h = build_full_hamiltonian(&c).unwrap();
        let m = c.modes_dim();
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                let expected = if i != j {
                    0.0
                } else {
                    [0.0, -0.5, -1.0][i / m]
                };
                assert_eq!(h[(i, j)], Complex64::new(expected, 0.0));
            }
        }
        assert!(build_effective_hamiltonian(&c).unwrap().iter().all(|z| *z == ZERO));
    }

    #[test]
    fn smallest_hamiltonian_is_hermitian() {
        let h = build_full_hamiltonian(&cfg(1)).unwrap();
        assert_eq!(h.shape(), (12, 12));
        assert!(hermiticity_defect(&h) < 1e-15);
        assert!(build_full_hamiltonian(&FockConfig { n_max: 0, ..cfg(1) }).is_err());
    }

    #[test]
    fn single_photon_block_of_effective_hamiltonian() {
        let c = cfg(1);
        let h = build_effective_hamiltonian(&c).unwrap();
        let k = c.effective_coupling();
        let (i10, i01) = (photonic_index(1, 1, 0), photonic_index(1, 0, 1));
        assert!((h[(i10, i10)].re - k).abs() < 1e-18);
        assert!((h[(i01, i01)].re - k).abs() < 1e-18);
        assert!((h[(i10, i01)].re - k).abs() < 1e-18);
        assert!((h[(i01, i10)].re - k).abs() < 1e-18);
        let block = nalgebra::Matrix2::new(h[(i10, i10)].re, h[(i10, i01)].re, h[(i01, i10)].re, h[(i01, i01)].re);
        let mut ev: Vec<f64> = block.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-18 && (ev[1] - 2.0 * k).abs() < 1e-18);
    }

    #[test]
    fn evolve_trivial_cases() {
        let psi = product_state(&coherent_state(3, Complex64::new(0.3, 0.1)), &vacuum(3)).unwrap();
        let zero = CMatrix::zeros(16, 16);
        assert_eq!(evolve(&zero, &psi, 5.0).unwrap(), psi);

        let diag = CMatrix::from_fn(16, 16, |i, j| if i == j { Complex64::new(i as f64 * 0.3, 0.0) } else { ZERO });
        let out = evolve(&diag, &psi, 2.0).unwrap();
        for k in 0..16 {
            let expected = psi.0[k] * Complex64::new(0.0, -(k as f64) * 0.3 * 2.0).exp();
            assert!((out.0[k] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn evolve_is_reversible() {
        let c = cfg(3);
        let h = build_full_hamiltonian(&c).unwrap();
        let psi = with_atom(AtomLevel::A, &product_state(&coherent_state(3, Complex64::new(0.4, 0.0)), &vacuum(3)).unwrap());
        let prop = Propagator::new(&h).unwrap();
        let back = prop.apply(&prop.apply(&psi, 123.0).unwrap(), -123.0).unwrap();
        assert!((back.0 - psi.0).norm() < 1e-9);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(Propagator::new(&h), Err(FwmError::NotHermitian { .. })));
    }

    #[test]
    fn excitation_sectors_are_found() {
        // Conserved n_a + n_b + [atom = b] splits the full space into sectors.
        let prop = Propagator::new(&build_full_hamiltonian(&cfg(2)).unwrap()).unwrap();
        assert!(prop.block_count() > 3);
    }

    #[test]
    fn stats_examples() {
        let s = fock_quadrature_stats(&product_state(&vacuum(4), &vacuum(4)).unwrap()).unwrap();
        for i in 0..4 {
            assert!((s.cov[(i, i)] - 0.25).abs() < 1e-15);
        }
        assert_eq!(s.photons, [0.0, 0.0]);

        let s = fock_quadrature_stats(&product_state(&coherent_state(20, Complex64::new(1.0, 0.0)), &vacuum(20)).unwrap()).unwrap();
        assert!((s.photons[0] - 1.0).abs() < 1e-8);
        assert!((s.mean[0] - 1.0).abs() < 1e-8);

        let s = fock_quadrature_stats(&product_state(&vacuum(30), &squeezed_vacuum(30, 0.5, 0.0)).unwrap()).unwrap();
        assert!((s.cov[(2, 2)] - (-1.0f64).exp() / 4.0).abs() < 1e-6);
        assert!((s.photons[1] - 0.5f64.sinh().powi(2)).abs() < 1e-6);
        assert!(!s.truncation_warning);
    }

    #[test]
    fn truncation_is_flagged() {
        let psi = product_state(&coherent_state(3, Complex64::new(1.5, 0.0)), &vacuum(3)).unwrap();
        assert!(matches!(fock_quadrature_stats(&psi), Err(FwmError::Truncation { .. })));
        let psi = product_state(&coherent_state(10, Complex64::new(1.0, 0.0)), &vacuum(10)).unwrap();
        let s = fock_quadrature_stats(&psi).unwrap();
        assert!(s.truncation_warning);
    }

    #[test]
    fn uncoupled_elimination_is_exact() {
        let c = FockConfig {
            w_amp: 0.0,
            g_coupling: 0.0,
            ..cfg(4)
        };
        let psi = product_state(&coherent_state(4, Complex64::new(0.2, 0.0)), &vacuum(4)).unwrap();
        let r = elimination_fidelity(&c, &psi, 10.0).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-14);
        assert!(r.leakage.abs() < 1e-14);
    }
}
