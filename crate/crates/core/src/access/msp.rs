use alloc::vec;
use alloc::vec::Vec;

use super::{AccessError, AccessStructure, GateKind, MonotoneCircuit, PartySet, Wire};
use crate::gf::{Field, Matrix};

/// Monotone span program with target vector `e_1`: `P` is accepted iff `e_1`
/// lies in the span of the rows labeled by members of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneSpanProgram {
    n: usize,
    matrix: Matrix,
    labels: Vec<usize>,
}

type Rows = Vec<(usize, Vec<u32>)>;

enum Built {
    Const(bool),
    Rows { dim: usize, rows: Rows },
}

impl MonotoneSpanProgram {
    pub fn new(n: usize, matrix: Matrix, labels: Vec<usize>) -> Result<Self, AccessError> {
        if labels.len() != matrix.rows() || matrix.cols() == 0 {
            return Err(AccessError::Precondition("one label per row and at least one column"));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= n) {
            return Err(AccessError::PartyOutOfRange { party: l + 1, n });
        }
        Ok(MonotoneSpanProgram { n, matrix, labels })
    }

    /// Vandermonde program for `Th_n^t`: party `i` owns `(1, a, ..., a^{t-1})`
    /// with `a = i + 1`. Needs `q > n`.
    pub fn threshold(field: Field, t: usize, n: usize) -> Result<Self, AccessError> {
        if t == 0 || t > n {
            return Err(AccessError::Precondition("1 <= t <= n"));
        }
        if field.order() as usize <= n {
            return Err(AccessError::Precondition("field must have more than n elements"));
        }
        let mut m = Matrix::zeros(field, n, t);
        for i in 0..n {
            for j in 0..t {
                m.set(i, j, field.pow(field.from_u64(i as u64 + 1), j as u64));
            }
        }
        Self::new(n, m, (0..n).collect())
    }

    /// Smallest prime field usable by [`Self::canonical`]: larger than the
    /// largest (weighted) fan-in of any gate.
    pub fn canonical_field(f: &AccessStructure) -> Result<Field, AccessError> {
        let c = f.to_circuit()?;
        let widest = c.gates().iter().map(|g| g.total_weight()).max().unwrap_or(1);
        Ok(Field::prime(crate::gf::next_prime(widest + 1))?)
    }

    /// Program obtained by composing Vandermonde threshold programs gate by
    /// gate along the circuit (a DAG is unfolded into a formula). Constant
    /// sub-circuits are folded first. Fails for functions with `f({}) = 1`.
    pub fn canonical(f: &AccessStructure, field: Field) -> Result<Self, AccessError> {
        let c = f.to_circuit()?;
        match build(&c, c.output(), field)? {
            Built::Const(true) => {
                Err(AccessError::Precondition("f accepts the empty set; no program with target e1"))
            }
            Built::Const(false) => Self::new(c.parties(), Matrix::zeros(field, 0, 1), Vec::new()),
            Built::Rows { dim, rows } => {
                let labels = rows.iter().map(|r| r.0).collect();
                let data: Vec<Vec<u32>> = rows.into_iter().map(|r| r.1).collect();
                Self::new(c.parties(), Matrix::from_rows(field, dim, &data)?, labels)
            }
        }
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Row count, the span program size measure.
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn accepts(&self, p: PartySet) -> bool {
        let idx: Vec<usize> = (0..self.labels.len()).filter(|&r| p.contains(self.labels[r])).collect();
        if idx.is_empty() {
            return false;
        }
        let mut target = vec![0u32; self.matrix.cols()];
        target[0] = 1;
        self.matrix.select_rows(&idx).row_space_contains(&target).expect("shape matches")
    }

    /// Rows labeled by party `i`.
    pub fn rows_of(&self, i: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&r| self.labels[r] == i).collect()
    }

    /// Whether the program computes `f` on every subset.
    pub fn computes(&self, f: &AccessStructure) -> Result<bool, AccessError> {
        let table = f.truth_table()?;
        Ok(self.n == f.parties() && PartySet::all(self.n).all(|p| self.accepts(p) == table[p.0 as usize]))
    }
}

fn build(c: &MonotoneCircuit, w: Wire, field: Field) -> Result<Built, AccessError> {
    let g = match w {
        Wire::Var(i) => return Ok(Built::Rows { dim: 1, rows: vec![(i, vec![1])] }),
        Wire::Gate(j) => &c.gates()[j],
    };
    if matches!(g.kind, GateKind::Or) && g.inputs.is_empty() {
        return Ok(Built::Const(false));
    }
    let weights = g.input_weights();
    let mut t = g.threshold() as i64;
    let mut live: Vec<(u32, usize, Rows)> = Vec::new();
    for (&input, &wt) in g.inputs.iter().zip(&weights) {
        match build(c, input, field)? {
            Built::Const(true) => t -= wt as i64,
            Built::Const(false) => {}
            Built::Rows { dim, rows } => live.push((wt, dim, rows)),
        }
    }
    if t <= 0 {
        return Ok(Built::Const(true));
    }
    let live_weight: i64 = live.iter().map(|l| l.0 as i64).sum();
    if t > live_weight {
        return Ok(Built::Const(false));
    }
    let t = t as usize;
    if live.len() == 1 && live[0].0 == 1 {
        let (_, dim, rows) = live.pop().expect("one child");
        return Ok(Built::Rows { dim, rows });
    }
    if (field.order() as i64) <= live_weight {
        return Err(AccessError::Precondition("field too small for gate fan-in"));
    }
    let dim = t + live.iter().map(|(wt, d, _)| *wt as usize * (d - 1)).sum::<usize>();
    let mut rows = Vec::new();
    let mut offset = t;
    let mut point = 0u64;
    for (wt, d, child) in &live {
        for _ in 0..*wt {
            point += 1;
            let a = field.from_u64(point);
            let u: Vec<u32> = (0..t).map(|j| field.pow(a, j as u64)).collect();
            for (label, r) in child {
                let mut row = vec![0u32; dim];
                for j in 0..t {
                    row[j] = field.mul(r[0], u[j]);
                }
                row[offset..offset + d - 1].copy_from_slice(&r[1..]);
                rows.push((*label, row));
            }
            offset += d - 1;
        }
    }
    Ok(Built::Rows { dim, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::Gate;

    #[test]
    fn two_row_example() {
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_rows(f2, 2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let msp = MonotoneSpanProgram::new(2, m, vec![0, 1]).unwrap();
        assert!(msp.accepts(PartySet::from_parties(&[0, 1])));
        assert!(!msp.accepts(PartySet::from_parties(&[0])));
        assert!(!msp.accepts(PartySet::empty()));
    }

    #[test]
    fn vandermonde_threshold_exhaustive() {
        for n in 1..=6 {
            let field = Field::prime(7).unwrap();
            for t in 1..=n {
                let msp = MonotoneSpanProgram::threshold(field, t, n).unwrap();
                let f = AccessStructure::threshold(t, n).unwrap();
                assert!(msp.computes(&f).unwrap(), "t={t} n={n}");
            }
        }
    }

    #[test]
    fn canonical_nested_and_weighted() {
        let c = MonotoneCircuit::new(
            5,
            vec![
                Gate::new(GateKind::Threshold(2), vec![Wire::Var(1), Wire::Var(2), Wire::Var(3)]),
                Gate::new(
                    GateKind::WeightedThreshold { weights: vec![2, 1, 1], t: 3 },
                    vec![Wire::Var(0), Wire::Gate(0), Wire::Var(4)],
                ),
            ],
            Wire::Gate(1),
        )
        .unwrap();
        let f = AccessStructure::from_circuit(c);
        let field = MonotoneSpanProgram::canonical_field(&f).unwrap();
        let msp = MonotoneSpanProgram::canonical(&f, field).unwrap();
        assert!(msp.computes(&f).unwrap());
    }

    #[test]
    fn canonical_of_min_sets() {
        let f = AccessStructure::from_min_sets(
            4,
            vec![PartySet::from_parties(&[0, 1, 2]), PartySet::from_parties(&[1, 2, 3])],
        )
        .unwrap();
        let field = MonotoneSpanProgram::canonical_field(&f).unwrap();
        let msp = MonotoneSpanProgram::canonical(&f, field).unwrap();
        assert!(msp.computes(&f).unwrap());
    }

    #[test]
    fn constants() {
        let f2 = Field::prime(2).unwrap();
        let zero = AccessStructure::constant(3, false);
        let msp = MonotoneSpanProgram::canonical(&zero, f2).unwrap();
        assert_eq!(msp.size(), 0);
        assert!(msp.computes(&zero).unwrap());
        assert!(MonotoneSpanProgram::canonical(&AccessStructure::constant(3, true), f2).is_err());
    }
}
