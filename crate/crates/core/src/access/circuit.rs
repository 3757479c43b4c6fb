use alloc::vec;
use alloc::vec::Vec;

use super::{AccessError, PartySet};

/// Input of a gate: a party variable (0-based) or the output of an earlier gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wire {
    Var(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateKind {
    /// Conjunction; with no inputs it is the constant 1.
    And,
    /// Disjunction; with no inputs it is the constant 0.
    Or,
    Threshold(u32),
    /// One weight per input wire.
    WeightedThreshold { weights: Vec<u32>, t: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<Wire>,
}

impl Gate {
    pub fn new(kind: GateKind, inputs: Vec<Wire>) -> Self {
        Gate { kind, inputs }
    }

    /// Weight of each input (1 for unweighted gates).
    pub fn input_weights(&self) -> Vec<u32> {
        match &self.kind {
            GateKind::WeightedThreshold { weights, .. } => weights.clone(),
            _ => vec![1; self.inputs.len()],
        }
    }

    /// Threshold on the (weighted) number of true inputs.
    pub fn threshold(&self) -> u32 {
        match &self.kind {
            GateKind::And => self.inputs.len() as u32,
            GateKind::Or => u32::from(!self.inputs.is_empty()),
            GateKind::Threshold(t) => *t,
            GateKind::WeightedThreshold { t, .. } => *t,
        }
    }

    pub fn total_weight(&self) -> u32 {
        self.input_weights().iter().sum()
    }

    /// Output given the values of the inputs.
    pub fn fire(&self, values: &[bool]) -> bool {
        match &self.kind {
            GateKind::And => values.iter().all(|&v| v),
            GateKind::Or => values.iter().any(|&v| v),
            GateKind::Threshold(t) => values.iter().filter(|&&v| v).count() as u32 >= *t,
            GateKind::WeightedThreshold { weights, t } => {
                values.iter().zip(weights).filter(|(v, _)| **v).map(|(_, w)| *w).sum::<u32>() >= *t
            }
        }
    }
}

/// Monotone circuit over `n` party variables. Gates may only read variables
/// and earlier gates, so the circuit is acyclic by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneCircuit {
    n: usize,
    gates: Vec<Gate>,
    output: Wire,
}

impl MonotoneCircuit {
    pub fn new(n: usize, gates: Vec<Gate>, output: Wire) -> Result<Self, AccessError> {
        if n > PartySet::MAX_PARTIES {
            return Err(AccessError::TooManyParties { n, max: PartySet::MAX_PARTIES });
        }
        let check_wire = |w: Wire, before: usize| -> Result<(), AccessError> {
            match w {
                Wire::Var(i) if i >= n => Err(AccessError::PartyOutOfRange { party: i + 1, n }),
                Wire::Gate(g) if g >= before => Err(AccessError::BadCircuit { gate: before }),
                _ => Ok(()),
            }
        };
        for (gi, g) in gates.iter().enumerate() {
            for &w in &g.inputs {
                check_wire(w, gi)?;
            }
            let fan_in = g.inputs.len() as u32;
            match &g.kind {
                GateKind::Threshold(t) if *t < 1 || *t > fan_in => {
                    return Err(AccessError::BadThreshold { gate: gi });
                }
                GateKind::WeightedThreshold { weights, t } => {
                    if weights.len() != g.inputs.len() {
                        return Err(AccessError::BadThreshold { gate: gi });
                    }
                    let total: u32 = weights.iter().sum();
                    if *t < 1 || *t > total {
                        return Err(AccessError::BadThreshold { gate: gi });
                    }
                }
                _ => {}
            }
        }
        check_wire(output, gates.len())?;
        Ok(MonotoneCircuit { n, gates, output })
    }

    /// Single gate over all `n` variables.
    pub fn single_gate(n: usize, kind: GateKind) -> Result<Self, AccessError> {
        let inputs = (0..n).map(Wire::Var).collect();
        Self::new(n, vec![Gate::new(kind, inputs)], Wire::Gate(0))
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> Wire {
        self.output
    }

    /// Gate count, the circuit size measure.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Values of every gate on the input set.
    pub fn gate_values(&self, p: PartySet) -> Vec<bool> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
        let mut buf = Vec::new();
        for g in &self.gates {
            buf.clear();
            buf.extend(g.inputs.iter().map(|&w| match w {
                Wire::Var(i) => p.contains(i),
                Wire::Gate(j) => vals[j],
            }));
            vals.push(g.fire(&buf));
        }
        vals
    }

    pub fn wire_value(&self, p: PartySet, w: Wire, gate_values: &[bool]) -> bool {
        match w {
            Wire::Var(i) => p.contains(i),
            Wire::Gate(j) => gate_values[j],
        }
    }

    pub fn evaluate(&self, p: PartySet) -> bool {
        let vals = self.gate_values(p);
        self.wire_value(p, self.output, &vals)
    }

    /// Number of times each gate output is consumed (the output wire counts once).
    pub fn fan_out(&self) -> Vec<usize> {
        let mut uses = vec![0usize; self.gates.len()];
        for g in &self.gates {
            for &w in &g.inputs {
                if let Wire::Gate(j) = w {
                    uses[j] += 1;
                }
            }
        }
        if let Wire::Gate(j) = self.output {
            uses[j] += 1;
        }
        uses
    }

    /// Every gate feeds exactly one place and is reachable from the output.
    pub fn is_tree(&self) -> bool {
        self.fan_out().iter().all(|&u| u == 1)
    }

    /// Gates on the longest path from the output to a variable.
    pub fn depth(&self) -> usize {
        let mut d = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            let below = g
                .inputs
                .iter()
                .map(|w| match w {
                    Wire::Var(_) => 0,
                    Wire::Gate(j) => d[*j],
                })
                .max()
                .unwrap_or(0);
            d[i] = below + 1;
        }
        match self.output {
            Wire::Var(_) => 0,
            Wire::Gate(j) => d[j],
        }
    }
}
