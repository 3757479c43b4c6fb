use alloc::vec::Vec;

use super::eigen::{hermitian_eigenvalues, hermitian_trace_norm};
use super::state::{offsets, MAX_KEPT_DIM};
use super::{CMatrix, LinearIsometry, PureState, QsimError, RegisterSystem, C64};

pub const TRACE_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-9;

/// Density operator over a register system.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    system: RegisterSystem,
    m: CMatrix,
}

impl DensityMatrix {
    /// Checked constructor: unit trace, Hermitian and positive semidefinite.
    pub fn new(system: RegisterSystem, m: CMatrix) -> Result<Self, QsimError> {
        let d = Self::from_parts(system, m);
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts(system: RegisterSystem, m: CMatrix) -> Self {
        assert_eq!(m.rows(), system.total_dim(), "matrix size must match the system");
        DensityMatrix { system, m }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        DensityMatrix { system: psi.system().clone(), m: CMatrix::outer(a, a) }
    }

    pub fn maximally_mixed(system: RegisterSystem) -> Self {
        let d = system.total_dim();
        let m = CMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
        DensityMatrix { system, m }
    }

    /// `sum_i p_i rho_i`; the weights must sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self, QsimError> {
        let first = parts.first().ok_or(QsimError::DimensionMismatch { expected: 1, got: 0 })?.1;
        let mut m = CMatrix::zeros(first.dim(), first.dim());
        for (p, rho) in parts {
            if rho.dim() != first.dim() {
                return Err(QsimError::DimensionMismatch { expected: first.dim(), got: rho.dim() });
            }
            m.add_scaled(&rho.m, *p);
        }
        Self::new(first.system.clone(), m)
    }

    pub fn validate(&self) -> Result<(), QsimError> {
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QsimError::NotNormalized(tr.re));
        }
        let herm = self.m.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(QsimError::NotHermitian(herm));
        }
        let min = hermitian_eigenvalues(&self.m).last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(QsimError::NotPositive(min));
        }
        Ok(())
    }

    pub fn system(&self) -> &RegisterSystem {
        &self.system
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with_pure(&self, psi: &PureState) -> Result<f64, QsimError> {
        let a = psi.amplitudes();
        if a.len() != self.dim() {
            return Err(QsimError::DimensionMismatch { expected: self.dim(), got: a.len() });
        }
        let ma = self.m.mul_vec(a);
        Ok(super::matrix::inner(a, &ma).re)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix, QsimError> {
        Ok(DensityMatrix { system: self.system.concat(&other.system)?, m: self.m.kron(&other.m) })
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QsimError> {
        self.system.check_targets(keep)?;
        let dims = self.system.dims();
        let kd: usize = keep.iter().map(|&k| dims[k]).product();
        if kd > MAX_KEPT_DIM {
            return Err(QsimError::KeptTooLarge { dim: kd, cap: MAX_KEPT_DIM });
        }
        let st = self.system.strides();
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
        let base = offsets(&rest, &dims, &st);
        let off = offsets(keep, &dims, &st);
        let out = CMatrix::from_fn(kd, kd, |i, j| base.iter().map(|&b| self.m[(b + off[i], b + off[j])]).sum());
        Ok(DensityMatrix { system: self.system.subsystem(keep), m: out })
    }

    /// `V rho V^dagger` with `V` acting on `targets` (same register placement
    /// rules as [`PureState::apply_isometry`]).
    pub fn apply_isometry(&self, v: &LinearIsometry, targets: &[usize]) -> Result<DensityMatrix, QsimError> {
        let k = self.system.len();
        let doubled = self.system.concat(&self.system)?;
        let t = PureState::raw(doubled, self.m.data().to_vec());
        let t = t.apply_isometry(v, targets, None)?;
        let k_new = t.system().len() - k;
        let shifted: Vec<usize> = targets.iter().map(|&x| x + k_new).collect();
        let t = t.apply_isometry(&v.conj(), &shifted, None)?;
        let system = t.system().subsystem(&(0..k_new).collect::<Vec<_>>());
        let d = system.total_dim();
        Ok(DensityMatrix { system, m: CMatrix::from_vec(d, d, t.into_amplitudes()) })
    }
}

/// `D(a, b) = 1/2 tr|a - b|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QsimError> {
    if a.dim() != b.dim() {
        return Err(QsimError::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(0.5 * hermitian_trace_norm(&a.m.sub(&b.m)))
}

/// Optimal probability advantage in telling `a` from `b` with one copy,
/// which equals the trace distance.
pub fn helstrom_advantage(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QsimError> {
    trace_distance(a, b)
}
