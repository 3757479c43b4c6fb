use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::access::{AccessStructure, Gate, GateKind, MonotoneCircuit, PartySet, WeightFunction, Wire};
use crate::qsim::{entangle_reference, CMatrix, LinearIsometry, C64};

use super::{quantum_shamir, Block, Owner, QeccError, QeccScheme};

/// Threshold code for `Th_n^t` consuming `max(1, n - 2t + 2)` copies: the
/// quantum Shamir code on parties `1..2t-1`, and one plain copy for each of
/// the parties `2t..n`. Realizes `Th_{2t-1}^t(x_1..x_{2t-1}) OR x_{2t} OR ... OR x_n`,
/// which dominates `Th_n^t`.
pub fn multicopy_threshold(t: usize, n: usize, q: u32) -> Result<QeccScheme, QeccError> {
    if t == 0 || t > n || n as u64 >= u64::from(q) {
        return Err(QeccError::Params("need 1 <= t <= n < q"));
    }
    if 2 * t > n {
        return quantum_shamir(t, n, q);
    }
    let base = quantum_shamir(t, 2 * t - 1, q)?;
    let len = 2 * t - 1;
    let mut blocks = base.blocks().to_vec();
    let mut owners: Vec<Owner> = (0..len).map(Owner::Party).collect();
    for j in len..n {
        blocks.push(Block { encoder: LinearIsometry::identity(vec![q as usize]), start: j });
        owners.push(Owner::Party(j));
    }
    let mut gates = vec![Gate::new(GateKind::Threshold(t as u32), (0..len).map(Wire::Var).collect())];
    let mut or_inputs = vec![Wire::Gate(0)];
    or_inputs.extend((len..n).map(Wire::Var));
    gates.push(Gate::new(GateKind::Or, or_inputs));
    let structure = AccessStructure::from_circuit(MonotoneCircuit::new(n, gates, Wire::Gate(1))?);
    QeccScheme::new(format!("multicopy({t},{n},{q})"), blocks, owners, n, structure)
}

/// Party `i` receives the `w(i)` consecutive share slots of `inner` starting
/// after those of parties `1..i-1`.
pub fn weighted_expand(inner: &QeccScheme, w: &WeightFunction) -> Result<QeccScheme, QeccError> {
    if w.total() != inner.parties() as u64 {
        return Err(QeccError::Params("weights must sum to the number of inner shares"));
    }
    let n = w.parties();
    let mut slot_owner = Vec::with_capacity(inner.parties());
    for (i, &wi) in w.weights().iter().enumerate() {
        slot_owner.extend(core::iter::repeat_n(i, wi as usize));
    }
    let owners = inner
        .owners()
        .iter()
        .map(|o| match o {
            Owner::Party(j) => Owner::Party(slot_owner[*j]),
            Owner::Environment => Owner::Environment,
        })
        .collect();
    let structure = match inner.shamir() {
        Some(s) => AccessStructure::weighted_threshold(w, s.t as u64)?,
        None => {
            let expand = |p: PartySet| {
                PartySet::from_parties(&(0..inner.parties()).filter(|&j| p.contains(slot_owner[j])).collect::<Vec<_>>())
            };
            let table = PartySet::all(n).map(|p| inner.structure().eval(expand(p))).collect();
            AccessStructure::from_truth_table(n, table)?
        }
    };
    let mut s = QeccScheme::new(format!("weighted({})", inner.name()), inner.blocks().to_vec(), owners, n, structure)?;
    if let Some(p) = inner.shamir() {
        s = s.with_shamir(p);
    }
    Ok(s)
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Pending(usize),
    Done(Owner),
}

/// Composition along a tree of (weighted) threshold gates: the secret is
/// encoded with the output gate's quantum Shamir code, and every share that
/// belongs to a subgate is re-encoded with that gate's code, top-down. Every
/// gate must be heavy (`2t > total weight`).
pub fn tree_qecc(tree: &MonotoneCircuit, q: u32) -> Result<QeccScheme, QeccError> {
    if !tree.is_tree() {
        return Err(QeccError::NotTree);
    }
    let Wire::Gate(root) = tree.output() else {
        return Err(QeccError::Params("output must be a gate"));
    };
    let qd = q as usize;
    let mut codes = Vec::with_capacity(tree.gates().len());
    for g in tree.gates() {
        let (t, w) = (g.threshold() as usize, g.total_weight() as usize);
        if 2 * t <= w {
            return Err(QeccError::Params("every gate must be heavy"));
        }
        codes.push(quantum_shamir(t, w, q)?.blocks()[0].encoder.clone());
    }
    // Run the encoders on the payload half of a maximally entangled pair;
    // the composed isometry is read off the amplitudes.
    let mut state = entangle_reference(qd)?;
    let mut slots = vec![Slot::Pending(root)];
    while let Some(pos) = slots.iter().position(|s| matches!(s, Slot::Pending(_))) {
        let Slot::Pending(g) = slots[pos] else { unreachable!() };
        let gate = &tree.gates()[g];
        state = state.apply_isometry(&codes[g], &[pos + 1], None)?;
        let mut new = Vec::new();
        for (&input, &wi) in gate.inputs.iter().zip(&gate.input_weights()) {
            for _ in 0..wi {
                new.push(match input {
                    Wire::Var(i) => Slot::Done(Owner::Party(i)),
                    Wire::Gate(h) => Slot::Pending(h),
                });
            }
        }
        new.resize(codes[g].out_dims().len(), Slot::Done(Owner::Environment));
        slots.splice(pos..=pos, new);
    }
    let dims: Vec<usize> = state.system().dims()[1..].to_vec();
    let rows: usize = dims.iter().product();
    let scale = libm::sqrt(qd as f64);
    let amps = state.amplitudes();
    let m = CMatrix::from_fn(rows, qd, |r, c| amps[c * rows + r] * C64::new(scale, 0.0));
    let encoder = LinearIsometry::with_tolerance(vec![qd], dims, m, 1e-10)?;
    let owners = slots
        .into_iter()
        .map(|s| match s {
            Slot::Done(o) => o,
            Slot::Pending(_) => Owner::Environment,
        })
        .collect();
    let structure = AccessStructure::from_circuit(tree.clone());
    QeccScheme::new(
        format!("tree({} gates,{q})", tree.gates().len()),
        vec![Block { encoder, start: 0 }],
        owners,
        tree.parties(),
        structure,
    )
}
