//! Exact privacy harness. The reduced state of `P` is linear in the secret,
//! so for every class `g` of classical views the engine forms the input-side
//! operator `A_g(psi) = sum_x w_g(x) P_x |psi><psi| P_x^dagger` and pushes it
//! through the fixed map `Phi_P(X) = tr_{not P}(V X V^dagger)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::access::PartySet;
use crate::classical::{ClassicalScheme, SsError, ViewClasses, YaoMode};
use crate::qotp::otp_enc;
use crate::qsim::eigen::hermitian_trace_norm;
use crate::qsim::{CMatrix, PureState, RegisterSystem, C64, MAX_KEPT_DIM};

use super::{CompilerError, QssScheme};

/// Failure probability behind the reported sampling radius.
pub const HOEFFDING_DELTA: f64 = 0.05;
/// Samples per component value when exact enumeration falls back.
pub const FALLBACK_SAMPLES: u64 = 4096;
const MAP_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrivacyMode {
    /// Every tape; components above the cap fall back to sampling.
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyReport {
    pub max_distance: f64,
    pub exact: bool,
    /// Sampled tapes per component value, when not exact.
    pub samples: Option<u64>,
    /// Hoeffding radius of one view probability at `HOEFFDING_DELTA`.
    pub radius: Option<f64>,
    /// Family indices attaining the maximum.
    pub worst_pair: (usize, usize),
    pub pairs: usize,
}

/// `d^2` states spanning the operators on `C^d`: `|j>`, `(|j>+|k>)/sqrt2`
/// and `(|j>+i|k>)/sqrt2` for `j < k`.
pub fn tomographic_family(d: usize) -> Result<Vec<PureState>, CompilerError> {
    let sys = RegisterSystem::from_dims(&[d])?;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        out.push(PureState::basis(sys.clone(), &[j])?);
    }
    for j in 0..d {
        for k in j + 1..d {
            for phase in [C64::new(s, 0.0), C64::new(0.0, s)] {
                let mut a = vec![C64::new(0.0, 0.0); d];
                a[j] = C64::new(s, 0.0);
                a[k] = phase;
                out.push(PureState::new(sys.clone(), a)?);
            }
        }
    }
    Ok(out)
}

/// Component likelihood table with proportional classes merged:
/// `(weight, shape)` where `Pr[view class | s] = weight * shape[s]` summed
/// over the views of the class.
fn merge(vc: &ViewClasses) -> Vec<(f64, Vec<f64>)> {
    let mut out: Vec<(Vec<u64>, f64)> = Vec::new();
    for c in &vc.classes {
        let g = c.counts.iter().fold(0u64, |a, &b| gcd(a, b));
        if g == 0 {
            continue;
        }
        let shape: Vec<u64> = c.counts.iter().map(|&v| v / g).collect();
        let w = (c.mult * g) as f64 / vc.tapes as f64;
        match out.iter_mut().find(|(s, _)| *s == shape) {
            Some((_, acc)) => *acc += w,
            None => out.push((shape, w)),
        }
    }
    out.into_iter().map(|(s, w)| (w, s.into_iter().map(|v| v as f64).collect())).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Phi_P` on matrix units: `U[a * din + b] = M_a M_b^dagger`, where `M_a`
/// is the coefficient matrix of `V|a>` split as (held : rest).
struct ReducedMap {
    din: usize,
    dim: usize,
    units: Vec<CMatrix>,
}

impl ReducedMap {
    fn new(scheme: &QssScheme, held: &[usize]) -> Result<Self, CompilerError> {
        let c = scheme.copies();
        let d = scheme.secret_dim();
        let din = d.pow(c as u32);
        let dims = scheme.qecc().dims();
        let dim: usize = held.iter().map(|&h| dims[h]).product();
        if dim > MAX_KEPT_DIM {
            return Err(CompilerError::Cap("kept subsystem"));
        }
        if din * din * dim * dim > MAP_CAP {
            return Err(CompilerError::Cap("reduced-state map"));
        }
        let sys = RegisterSystem::from_dims(&vec![d; c])?;
        let inputs: Vec<usize> = (0..c).collect();
        let mut ms = Vec::with_capacity(din);
        for a in 0..din {
            let tuple = crate::qsim::index_to_tuple(a, &vec![d; c]);
            let e = PureState::basis(sys.clone(), &tuple)?;
            let v = scheme.qecc().encode(&e, &inputs)?;
            ms.push(v.coefficient_matrix(held)?.0);
        }
        let mut units = Vec::with_capacity(din * din);
        for a in 0..din {
            for b in 0..din {
                units.push(ms[a].mul(&ms[b].adjoint()));
            }
        }
        Ok(ReducedMap { din, dim, units })
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for a in 0..self.din {
            for b in 0..self.din {
                let s = x[(a, b)];
                if s.norm_sqr() == 0.0 {
                    continue;
                }
                for (o, u) in out.data_mut().iter_mut().zip(self.units[a * self.din + b].data()) {
                    *o += s * u;
                }
            }
        }
        out
    }
}

fn outer_add(acc: &mut CMatrix, v: &[C64], w: f64) {
    let n = v.len();
    for a in 0..n {
        for b in 0..n {
            acc[(a, b)] += v[a] * v[b].conj() * w;
        }
    }
}

fn half_norm(m: &CMatrix) -> f64 {
    0.5 * hermitian_trace_norm(m)
}

/// Largest trace distance between the views of `p` (classical shares plus
/// reduced quantum state) over pairs of secrets from `family`, each shared
/// as `copies` copies. With `hybrid`, computational schemes are run with
/// uniform masks under the keys `p` cannot derive.
pub fn verify_privacy(
    scheme: &QssScheme,
    p: PartySet,
    family: &[PureState],
    mode: PrivacyMode,
    hybrid: bool,
) -> Result<PrivacyReport, CompilerError> {
    let n = scheme.parties();
    if p.span() > n {
        return Err(CompilerError::Access(crate::access::AccessError::PartyOutOfRange { party: p.span() - 1, n }));
    }
    if scheme.structure().eval(p) {
        return Err(CompilerError::Authorized);
    }
    let d = scheme.secret_dim();
    let c = scheme.copies();
    for psi in family {
        if psi.system().dims() != [d] {
            return Err(CompilerError::Input("family states must be single registers of the secret dimension"));
        }
    }
    let yao = if hybrid { YaoMode::Hybrid(p) } else { YaoMode::Real };
    let ss = scheme.ss();

    let (vc, samples) = match mode {
        PrivacyMode::Exact => match ss.view_classes(p, d as u64, yao) {
            Ok(v) => (v, None),
            Err(SsError::TapeSpaceTooLarge { .. }) => {
                (ss.sampled_view_classes(p, d as u64, yao, FALLBACK_SAMPLES, 0)?, Some(FALLBACK_SAMPLES))
            }
            Err(e) => return Err(e.into()),
        },
        PrivacyMode::Sampled { samples, seed } => (ss.sampled_view_classes(p, d as u64, yao, samples, seed)?, Some(samples)),
    };
    let radius = samples.map(|s| libm::sqrt(libm::log(2.0 / HOEFFDING_DELTA) / (2.0 * s as f64)));
    let pairs = family.len() * family.len().saturating_sub(1) / 2;
    let mut report = PrivacyReport { max_distance: 0.0, exact: samples.is_none(), samples, radius, worst_pair: (0, 0), pairs };

    let held = scheme.qecc().held_registers(p);
    if held.is_empty() || family.len() < 2 {
        // Classical shares alone are independent of the secret.
        return Ok(report);
    }
    let map = ReducedMap::new(scheme, &held)?;

    let table = merge(&vc);
    let l = scheme.ss_components();
    let keys = d.pow(l as u32);
    let eps = match ss {
        ClassicalScheme::Leaky(s) => s.epsilon(),
        _ => 0.0,
    };

    // psi^{(x)c} and the padded vectors P_{key(x)} psi for every x.
    let mut inputs = Vec::with_capacity(family.len());
    for psi in family {
        let mut st = psi.clone();
        for _ in 1..c {
            st = st.tensor(psi)?;
        }
        inputs.push(st);
    }
    let regs: Vec<usize> = (0..c).collect();
    let mut padded: Vec<Vec<Vec<C64>>> = vec![Vec::with_capacity(keys); family.len()];
    for xi in 0..keys {
        let x: Vec<u64> = crate::qsim::index_to_tuple(xi, &vec![d; l]).into_iter().map(|v| v as u64).collect();
        let key = scheme.key_from(&x)?;
        for (i, st) in inputs.iter().enumerate() {
            padded[i].push(otp_enc(st, &regs, &key)?.into_amplitudes());
        }
    }

    // Joint classes: one merged class per component.
    let g = table.len();
    let joint = g.checked_pow(l as u32).ok_or(CompilerError::Cap("joint view classes"))?;
    let din = map.din;
    let mut ops: Vec<(f64, Vec<CMatrix>)> = Vec::with_capacity(joint);
    for gi in 0..joint {
        let idx = crate::qsim::index_to_tuple(gi, &vec![g; l]);
        let weight: f64 = idx.iter().map(|&k| table[k].0).product::<f64>() / keys as f64;
        let mut per_state = Vec::with_capacity(family.len());
        for pad in &padded {
            let mut a = CMatrix::zeros(din, din);
            for (xi, v) in pad.iter().enumerate() {
                let xs = crate::qsim::index_to_tuple(xi, &vec![d; l]);
                let w: f64 = idx.iter().zip(&xs).map(|(&k, &s)| table[k].1[s]).product();
                if w != 0.0 {
                    outer_add(&mut a, v, w);
                }
            }
            per_state.push(a);
        }
        ops.push((weight, per_state));
    }

    // The whole scheme is a channel, so no pair can beat the distance of
    // its inputs; visit pairs by that bound and stop once it is reached.
    let mut order: Vec<(f64, usize, usize)> = Vec::with_capacity(pairs);
    for i in 0..inputs.len() {
        for j in i + 1..inputs.len() {
            let ov = inputs[i].inner(&inputs[j]).norm_sqr();
            order.push((libm::sqrt((1.0 - ov).max(0.0)), i, j));
        }
    }
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let secret_part = |i: usize, j: usize| -> f64 {
        let mut dist = 0.0;
        for (w, per_state) in &ops {
            let diff = per_state[i].sub(&per_state[j]);
            if diff.frobenius_norm() != 0.0 {
                dist += w * half_norm(&map.apply(&diff));
            }
        }
        dist
    };
    let mut best = -1.0;
    if eps == 0.0 {
        for &(bound, i, j) in &order {
            if best >= bound {
                break;
            }
            let dist = secret_part(i, j);
            if dist > best {
                best = dist;
                report.worst_pair = (i, j);
            }
        }
    } else {
        // Views with and without the leak are disjoint, so the distance
        // splits as (1 - eps) D_hidden + eps D_leaked, each at most `bound`.
        let mut hidden: Vec<(f64, f64, usize, usize)> = order
            .iter()
            .map(|&(bound, i, j)| ((1.0 - eps) * secret_part(i, j), bound, i, j))
            .collect();
        hidden.sort_by(|a, b| (b.0 + eps * b.1).total_cmp(&(a.0 + eps * a.1)));
        for &(h, bound, i, j) in &hidden {
            if best >= h + eps * bound {
                break;
            }
            let mut leak = 0.0;
            for (a, b) in padded[i].iter().zip(&padded[j]).take(keys) {
                let mut q = CMatrix::zeros(din, din);
                outer_add(&mut q, a, 1.0);
                outer_add(&mut q, b, -1.0);
                leak += half_norm(&map.apply(&q));
            }
            let dist = h + eps * leak / keys as f64;
            if dist > best {
                best = dist;
                report.worst_pair = (i, j);
            }
        }
    }
    report.max_distance = best.max(0.0);
    Ok(report)
}
