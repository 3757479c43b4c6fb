use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{matrix, BasisPermutation, CMatrix, DensityMatrix, LinearIsometry, QsimError, C64};

/// Default cap on the number of amplitudes of a simulated state.
pub const MAX_AMPLITUDES: usize = 1 << 20;
/// Cap on the dimension kept by a partial trace.
pub const MAX_KEPT_DIM: usize = 4096;
/// Norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

/// Ordered qudit registers; basis index is mixed radix with register 0 most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegisterSystem {
    regs: Vec<Register>,
}

impl RegisterSystem {
    pub fn new(regs: Vec<Register>) -> Result<Self, QsimError> {
        let s = RegisterSystem { regs };
        s.validate()?;
        Ok(s)
    }

    /// Registers labeled `r0, r1, ...`.
    pub fn from_dims(dims: &[usize]) -> Result<Self, QsimError> {
        Self::new(
            dims.iter()
                .enumerate()
                .map(|(i, &d)| Register { label: alloc::format!("r{i}"), dim: d })
                .collect(),
        )
    }

    fn validate(&self) -> Result<(), QsimError> {
        let mut total: usize = 1;
        for r in &self.regs {
            if r.dim < 2 {
                return Err(QsimError::BadDimension(r.dim));
            }
            total = total.checked_mul(r.dim).ok_or(QsimError::CapExceeded { size: usize::MAX, cap: MAX_AMPLITUDES })?;
            if total > MAX_AMPLITUDES {
                return Err(QsimError::CapExceeded { size: total, cap: MAX_AMPLITUDES });
            }
        }
        Ok(())
    }

    pub fn registers(&self) -> &[Register] {
        &self.regs
    }

    pub fn len(&self) -> usize {
        self.regs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.regs.iter().map(|r| r.dim).collect()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.regs[i].dim
    }

    pub fn total_dim(&self) -> usize {
        self.regs.iter().map(|r| r.dim).product()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides(&self.dims())
    }

    pub fn subsystem(&self, idx: &[usize]) -> RegisterSystem {
        RegisterSystem { regs: idx.iter().map(|&i| self.regs[i].clone()).collect() }
    }

    pub fn concat(&self, other: &RegisterSystem) -> Result<RegisterSystem, QsimError> {
        let mut regs = self.regs.clone();
        regs.extend(other.regs.iter().cloned());
        RegisterSystem::new(regs)
    }

    pub fn check_targets(&self, targets: &[usize]) -> Result<(), QsimError> {
        for (k, &t) in targets.iter().enumerate() {
            if t >= self.regs.len() {
                return Err(QsimError::BadRegister(t));
            }
            if targets[..k].contains(&t) {
                return Err(QsimError::DuplicateRegister(t));
            }
        }
        Ok(())
    }
}

pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub fn index_to_tuple(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        t[i] = idx % dims[i];
        idx /= dims[i];
    }
    t
}

pub fn tuple_to_index(t: &[usize], dims: &[usize]) -> usize {
    t.iter().zip(dims).fold(0, |acc, (&v, &d)| acc * d + v)
}

/// For the registers `sel` of a system with strides `st` and dims `dims`,
/// the offset contributed by every joint value of `sel`, in mixed-radix order
/// of `sel`.
pub(crate) fn offsets(sel: &[usize], dims: &[usize], st: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &r in sel {
        let mut next = Vec::with_capacity(out.len() * dims[r]);
        for &o in &out {
            for v in 0..dims[r] {
                next.push(o + v * st[r]);
            }
        }
        out = next;
    }
    out
}

/// Normalized state vector over a register system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    system: RegisterSystem,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(system: RegisterSystem, amps: Vec<C64>) -> Result<Self, QsimError> {
        if amps.len() != system.total_dim() {
            return Err(QsimError::DimensionMismatch { expected: system.total_dim(), got: amps.len() });
        }
        let nrm = matrix::norm(&amps);
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(QsimError::NotNormalized(nrm));
        }
        Ok(PureState { system, amps })
    }

    /// Unchecked constructor for internal tensors that are not states.
    pub(crate) fn raw(system: RegisterSystem, amps: Vec<C64>) -> Self {
        PureState { system, amps }
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(system: RegisterSystem, mut amps: Vec<C64>) -> Result<Self, QsimError> {
        let nrm = matrix::norm(&amps);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(QsimError::NotNormalized(nrm));
        }
        for a in amps.iter_mut() {
            *a /= nrm;
        }
        Self::new(system, amps)
    }

    pub fn basis(system: RegisterSystem, tuple: &[usize]) -> Result<Self, QsimError> {
        let dims = system.dims();
        if tuple.len() != dims.len() || tuple.iter().zip(&dims).any(|(v, d)| v >= d) {
            return Err(QsimError::DimensionMismatch { expected: dims.len(), got: tuple.len() });
        }
        let mut amps = vec![C64::new(0.0, 0.0); system.total_dim()];
        amps[tuple_to_index(tuple, &dims)] = C64::new(1.0, 0.0);
        Self::new(system, amps)
    }

    pub fn system(&self) -> &RegisterSystem {
        &self.system
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        matrix::norm(&self.amps)
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        matrix::inner(&self.amps, &other.amps)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `self (x) other`, registers of `other` appended.
    pub fn tensor(&self, other: &PureState) -> Result<PureState, QsimError> {
        let system = self.system.concat(&other.system)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { system, amps })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reorders registers: register `order[k]` of `self` becomes register `k`.
    pub fn permute_registers(&self, order: &[usize]) -> Result<PureState, QsimError> {
        if order.len() != self.system.len() {
            return Err(QsimError::DimensionMismatch { expected: self.system.len(), got: order.len() });
        }
        self.system.check_targets(order)?;
        let dims = self.system.dims();
        let st = self.system.strides();
        let offs = offsets(order, &dims, &st);
        let amps = offs.iter().map(|&o| self.amps[o]).collect();
        Ok(PureState { system: self.system.subsystem(order), amps })
    }

    /// Applies `v` to the registers `targets` (in that order). When `v` has
    /// as many outputs as inputs they take the places of the targets;
    /// otherwise the outputs are inserted, in order, at the position of the
    /// smallest target and the other targets are removed. `labels` names the
    /// outputs (default: the target labels if counts match, else `out<i>`).
    pub fn apply_isometry(
        &self,
        v: &LinearIsometry,
        targets: &[usize],
        labels: Option<&[&str]>,
    ) -> Result<PureState, QsimError> {
        self.system.check_targets(targets)?;
        let dims = self.system.dims();
        let in_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
        if in_dims != v.in_dims() {
            return Err(QsimError::DimensionMismatch { expected: v.in_dim(), got: in_dims.iter().product() });
        }
        let out_dims = v.out_dims();
        let out_labels: Vec<String> = match labels {
            Some(l) => {
                if l.len() != out_dims.len() {
                    return Err(QsimError::DimensionMismatch { expected: out_dims.len(), got: l.len() });
                }
                l.iter().map(|s| s.to_string()).collect()
            }
            None if out_dims.len() == targets.len() => {
                targets.iter().map(|&t| self.system.registers()[t].label.clone()).collect()
            }
            None => (0..out_dims.len()).map(|i| alloc::format!("out{i}")).collect(),
        };
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        // New register list and the positions of the outputs within it.
        let mut new_regs: Vec<Register> = Vec::new();
        let mut out_pos = vec![0usize; out_dims.len()];
        let mut rest_pos = Vec::with_capacity(rest.len());
        let outs: Vec<Register> = out_labels
            .into_iter()
            .zip(out_dims)
            .map(|(label, &dim)| Register { label, dim })
            .collect();
        if out_dims.len() == targets.len() {
            let mut slot: Vec<Option<Register>> = self.system.registers().iter().cloned().map(Some).collect();
            for (k, &t) in targets.iter().enumerate() {
                slot[t] = Some(outs[k].clone());
                out_pos[k] = t;
            }
            for (i, r) in slot.into_iter().enumerate() {
                new_regs.push(r.expect("filled"));
                if !targets.contains(&i) {
                    rest_pos.push(i);
                }
            }
        } else {
            let anchor = targets.iter().copied().min().unwrap_or(dims.len());
            for i in 0..dims.len() {
                if i == anchor {
                    for (k, o) in outs.iter().enumerate() {
                        out_pos[k] = new_regs.len();
                        new_regs.push(o.clone());
                    }
                }
                if !targets.contains(&i) {
                    rest_pos.push(new_regs.len());
                    new_regs.push(self.system.registers()[i].clone());
                }
            }
            if anchor == dims.len() {
                for (k, o) in outs.iter().enumerate() {
                    out_pos[k] = new_regs.len();
                    new_regs.push(o.clone());
                }
            }
        }
        let new_sys = RegisterSystem::new(new_regs)?;
        let new_dims = new_sys.dims();
        let new_st = new_sys.strides();
        let old_st = self.system.strides();
        let base_old = offsets(&rest, &dims, &old_st);
        let base_new = offsets(&rest_pos, &new_dims, &new_st);
        let off_in = offsets(targets, &dims, &old_st);
        let off_out = offsets(&out_pos, &new_dims, &new_st);
        let m = v.matrix();
        let mut amps = vec![C64::new(0.0, 0.0); new_sys.total_dim()];
        let mut buf = vec![C64::new(0.0, 0.0); off_in.len()];
        for (bo, bn) in base_old.iter().zip(&base_new) {
            let mut any = false;
            for (x, &o) in buf.iter_mut().zip(&off_in) {
                *x = self.amps[bo + o];
                any |= x.re != 0.0 || x.im != 0.0;
            }
            if !any {
                continue;
            }
            for (row, &o) in off_out.iter().enumerate() {
                let r = &m.data()[row * m.cols()..(row + 1) * m.cols()];
                amps[bn + o] = r.iter().zip(&buf).map(|(a, b)| a * b).sum();
            }
        }
        Ok(PureState { system: new_sys, amps })
    }

    /// Moves the amplitude of basis tuple `b` (over `targets`) to `map(b)`.
    pub fn apply_basis_permutation(&self, map: &BasisPermutation, targets: &[usize]) -> Result<PureState, QsimError> {
        self.system.check_targets(targets)?;
        let dims = self.system.dims();
        let in_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
        if in_dims != map.dims() {
            return Err(QsimError::DimensionMismatch { expected: map.size(), got: in_dims.iter().product() });
        }
        let st = self.system.strides();
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        let base = offsets(&rest, &dims, &st);
        let off = offsets(targets, &dims, &st);
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for &b in &base {
            for (i, &o) in off.iter().enumerate() {
                amps[b + off[map.image(i)]] = self.amps[b + o];
            }
        }
        Ok(PureState { system: self.system.clone(), amps })
    }

    /// Reduced state on `keep` (registers in the given order).
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
        let mut rho = CMatrix::zeros(kd, kd);
        let mut col = vec![C64::new(0.0, 0.0); kd];
        let mut nz = Vec::with_capacity(kd);
        for &b in &base {
            nz.clear();
            for (i, &o) in off.iter().enumerate() {
                col[i] = self.amps[b + o];
                if col[i].re != 0.0 || col[i].im != 0.0 {
                    nz.push(i);
                }
            }
            for &i in &nz {
                for &j in &nz {
                    rho[(i, j)] += col[i] * col[j].conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts(self.system.subsystem(keep), rho))
    }

    /// Amplitudes as a matrix with rows indexed by `left` and columns by the
    /// remaining registers in their original order.
    pub fn coefficient_matrix(&self, left: &[usize]) -> Result<(CMatrix, Vec<usize>), QsimError> {
        self.system.check_targets(left)?;
        let dims = self.system.dims();
        let st = self.system.strides();
        let right: Vec<usize> = (0..dims.len()).filter(|i| !left.contains(i)).collect();
        let lo = offsets(left, &dims, &st);
        let ro = offsets(&right, &dims, &st);
        let m = CMatrix::from_fn(lo.len(), ro.len(), |r, c| self.amps[lo[r] + ro[c]]);
        Ok((m, right))
    }
}
