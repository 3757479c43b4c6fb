use alloc::vec;
use alloc::vec::Vec;

use super::{
    AccessError, AccessStructure, Gate, GateKind, MonotoneCircuit, MonotoneSpanProgram, PartySet,
    WeightFunction, Wire, EXHAUSTIVE_MAX_PARTIES,
};

/// Copies the gates of `c` with variables shifted by `var_shift` and gate
/// indices by `gate_shift`; returns the remapped output wire.
fn embed(c: &MonotoneCircuit, var_shift: usize, gate_shift: usize, into: &mut Vec<Gate>) -> Wire {
    let remap = |w: Wire| match w {
        Wire::Var(i) => Wire::Var(i + var_shift),
        Wire::Gate(j) => Wire::Gate(j + gate_shift),
    };
    for g in c.gates() {
        into.push(Gate::new(g.kind.clone(), g.inputs.iter().map(|&w| remap(w)).collect()));
    }
    remap(c.output())
}

/// `f'(x_1..x_2n) = f(x_1..x_n) AND x_{n+1} AND ... AND x_{2n}`, built from
/// a circuit for `f` plus `n - 1` binary AND gates and one final AND.
pub fn prop1_lift(f: &AccessStructure) -> Result<AccessStructure, AccessError> {
    let n = f.parties();
    if n == 0 {
        return Err(AccessError::Precondition("at least one party"));
    }
    let c = f.to_circuit()?;
    let mut gates = Vec::new();
    let f_out = embed(&c, 0, 0, &mut gates);
    let mut chain = Wire::Var(n);
    for i in n + 1..2 * n {
        gates.push(Gate::new(GateKind::And, vec![chain, Wire::Var(i)]));
        chain = Wire::Gate(gates.len() - 1);
    }
    gates.push(Gate::new(GateKind::And, vec![f_out, chain]));
    let out = Wire::Gate(gates.len() - 1);
    Ok(AccessStructure::from_circuit(MonotoneCircuit::new(2 * n, gates, out)?))
}

/// Span program for `f` from one for `prop1_lift(f)`: for each party `i`
/// stack the rows of `i` followed by all rows of parties `n+1..2n`, and
/// label the whole block `i`.
pub fn prop1_msp_stack(
    m_prime: &MonotoneSpanProgram,
    f: &AccessStructure,
) -> Result<MonotoneSpanProgram, AccessError> {
    let n = f.parties();
    if m_prime.parties() != 2 * n {
        return Err(AccessError::Precondition("program must be over 2n parties"));
    }
    if 2 * n <= EXHAUSTIVE_MAX_PARTIES && !m_prime.computes(&prop1_lift(f)?)? {
        return Err(AccessError::Precondition("program does not compute the lifted function"));
    }
    let tail: Vec<usize> = (n..2 * n).flat_map(|i| m_prime.rows_of(i)).collect();
    let mut idx = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for r in m_prime.rows_of(i).into_iter().chain(tail.iter().copied()) {
            idx.push(r);
            labels.push(i);
        }
    }
    MonotoneSpanProgram::new(n, m_prime.matrix().select_rows(&idx), labels)
}

/// `f = Th_3^2(x_1, x_2, g(x_3..x_n))` with weights `n-3, n-3, 1, ..., 1`.
pub fn prop5_build(g: &AccessStructure) -> Result<(AccessStructure, WeightFunction), AccessError> {
    let n = g.parties() + 2;
    if n < 5 {
        return Err(AccessError::Precondition("n >= 5"));
    }
    if !g.analyze(None)?.heavy {
        return Err(AccessError::NotHeavy);
    }
    let c = g.to_circuit()?;
    let mut gates = Vec::new();
    let g_out = embed(&c, 2, 0, &mut gates);
    gates.push(Gate::new(GateKind::Threshold(2), vec![Wire::Var(0), Wire::Var(1), g_out]));
    let out = Wire::Gate(gates.len() - 1);
    let f = AccessStructure::from_circuit(MonotoneCircuit::new(n, gates, out)?);
    let mut w = vec![1u32; n];
    w[0] = (n - 3) as u32;
    w[1] = (n - 3) as u32;
    Ok((f, WeightFunction::new(w)?))
}

/// Depth-2 tree on `2n` parties: `Th^{2k/3}` over `k = n/3` blocks
/// `Th_3^2(x_{3j+1}, x_{3j+2}, x_{3j+3})` and `g(x_{n+1}..x_{2n})`.
#[derive(Debug, Clone)]
pub struct Prop6Tree {
    pub structure: AccessStructure,
    /// Parties of `g`.
    pub n: usize,
    pub k: usize,
}

pub fn prop6_build(g: &AccessStructure) -> Result<Prop6Tree, AccessError> {
    let n = g.parties();
    if n == 0 || !n.is_multiple_of(9) {
        return Err(AccessError::NotMultipleOfNine(n));
    }
    if !g.analyze(None)?.heavy {
        return Err(AccessError::NotHeavy);
    }
    let k = n / 3;
    let mut gates = Vec::new();
    for j in 0..k {
        let ins = (3 * j..3 * j + 3).map(Wire::Var).collect();
        gates.push(Gate::new(GateKind::Threshold(2), ins));
    }
    let c = g.to_circuit()?;
    let g_out = embed(&c, n, k, &mut gates);
    let mut top_in: Vec<Wire> = (0..k).map(Wire::Gate).collect();
    top_in.push(g_out);
    gates.push(Gate::new(GateKind::Threshold((2 * k / 3) as u32), top_in));
    let out = Wire::Gate(gates.len() - 1);
    let structure = AccessStructure::from_circuit(MonotoneCircuit::new(2 * n, gates, out)?);
    Ok(Prop6Tree { structure, n, k })
}

/// Authorized input of weight below half the total. Blocks are ranked by
/// (weight sum, index) ascending; blocks ranked above `2k/3` are zeroed, in
/// the rest the heaviest member (smallest index on ties) is zeroed, and every
/// input of `g` is zeroed.
pub fn prop6_witness(w: &WeightFunction, tree: &Prop6Tree) -> Result<PartySet, AccessError> {
    let (n, k) = (tree.n, tree.k);
    if w.parties() != 2 * n {
        return Err(AccessError::BadWeights);
    }
    let ws = w.weights();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&j| (ws[3 * j] as u64 + ws[3 * j + 1] as u64 + ws[3 * j + 2] as u64, j));
    let mut x = PartySet::empty();
    for &j in order.iter().take(2 * k / 3) {
        let block = 3 * j..3 * j + 3;
        let heaviest = block
            .clone()
            .fold(3 * j, |best, i| if ws[i] > ws[best] { i } else { best });
        for i in block {
            if i != heaviest {
                x = x.with(i);
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(one_based: &[usize]) -> PartySet {
        PartySet::from_parties(&one_based.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    #[test]
    fn lift_of_or2() {
        let or2 = AccessStructure::threshold(1, 2).unwrap();
        let lifted = prop1_lift(&or2).unwrap();
        assert_eq!(lifted.min_sets().unwrap(), vec![ps(&[1, 3, 4]), ps(&[2, 3, 4])]);
        let a = lifted.analyze(None).unwrap();
        assert!(a.heavy && a.no_cloning);
        assert_eq!(a.heaviness, Some(3));
        assert_eq!(lifted.circuit().unwrap().size(), or2.circuit().unwrap().size() + 2);
    }

    #[test]
    fn lift_of_constant_one_is_and_of_tail() {
        let one = AccessStructure::constant(3, true);
        let lifted = prop1_lift(&one).unwrap();
        assert_eq!(lifted.min_sets().unwrap(), vec![ps(&[4, 5, 6])]);
    }

    #[test]
    fn stack_recovers_or2_and_and2() {
        for f in [AccessStructure::threshold(1, 2).unwrap(), AccessStructure::threshold(2, 2).unwrap()] {
            let lifted = prop1_lift(&f).unwrap();
            let field = MonotoneSpanProgram::canonical_field(&lifted).unwrap();
            let m_prime = MonotoneSpanProgram::canonical(&lifted, field).unwrap();
            let m = prop1_msp_stack(&m_prime, &f).unwrap();
            assert!(m.computes(&f).unwrap());
            assert!(m.size() <= 2 * 2 * m_prime.size());
        }
    }

    #[test]
    fn prop5_n9() {
        let g = AccessStructure::threshold(4, 7).unwrap();
        let (f, w) = prop5_build(&g).unwrap();
        assert_eq!(f.parties(), 9);
        assert!(f.eval(ps(&[1, 2])));
        let a = f.analyze(Some(&w)).unwrap();
        assert!(!a.heavy);
        assert!(a.weighted.unwrap().weighted_heavy);
        // 2(n-3) + (n-2)
        assert_eq!(w.total(), 3 * 9 - 8);
    }

    #[test]
    fn prop5_rejects_light_g() {
        let g = AccessStructure::threshold(2, 7).unwrap();
        assert_eq!(prop5_build(&g).unwrap_err(), AccessError::NotHeavy);
    }

    #[test]
    fn prop6_uniform_witness() {
        let g = AccessStructure::threshold(5, 9).unwrap();
        let tree = prop6_build(&g).unwrap();
        assert_eq!(tree.k, 3);
        assert_eq!(tree.structure.circuit().unwrap().depth(), 2);
        let w = WeightFunction::uniform(18);
        let x = prop6_witness(&w, &tree).unwrap();
        assert_eq!(x, ps(&[2, 3, 5, 6]));
        assert!(tree.structure.eval(x));
        assert_eq!(w.weight_of(x), 4);
        assert!(tree.structure.eval(PartySet::full(18)));
        assert!(tree.structure.eval(ps(&[1, 2, 4, 5])));
    }

    #[test]
    fn prop6_heavy_first_block_is_zeroed() {
        let g = AccessStructure::threshold(5, 9).unwrap();
        let tree = prop6_build(&g).unwrap();
        let mut ws = vec![1u32; 18];
        ws[0] = 100;
        let w = WeightFunction::new(ws).unwrap();
        let x = prop6_witness(&w, &tree).unwrap();
        assert!(!x.contains(0) && !x.contains(1) && !x.contains(2));
        assert!(tree.structure.eval(x));
        assert!(2 * w.weight_of(x) < w.total());
    }

    #[test]
    fn prop6_requires_multiple_of_nine() {
        let g = AccessStructure::threshold(4, 6).unwrap();
        assert_eq!(prop6_build(&g).unwrap_err(), AccessError::NotMultipleOfNine(6));
    }
}
