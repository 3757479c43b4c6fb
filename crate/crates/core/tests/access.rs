use proptest::prelude::*;
use qss_core::access::{prop1_lift, AccessStructure, MonotoneSpanProgram, PartySet, WeightFunction};
use qss_core::gf::Field;

/// Brute force over a family of generating sets.
fn covers(family: &[u64], p: u64) -> bool {
    family.iter().any(|&m| m & !p == 0)
}

fn family(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..(1 << n), 0..5)
}

fn structure(n: usize, fam: &[u64]) -> AccessStructure {
    AccessStructure::from_min_sets(n, fam.iter().map(|&m| PartySet(m)).collect()).unwrap()
}

proptest! {
    #[test]
    fn min_sets_evaluate_and_minimize(n in 1usize..7, seed in family(6)) {
        let fam: Vec<u64> = seed.into_iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
        let f = structure(n, &fam);
        for p in PartySet::all(n) {
            prop_assert_eq!(f.eval(p), covers(&fam, p.0));
        }
        let a = f.analyze(None).unwrap();
        prop_assert!(a.monotone);
        for m in &a.min_sets {
            prop_assert!(f.eval(*m));
            for i in m.iter() {
                prop_assert!(!f.eval(m.without(i)));
            }
        }
        let back = structure(n, &a.min_sets.iter().map(|m| m.0).collect::<Vec<_>>());
        prop_assert_eq!(back.truth_table().unwrap(), f.truth_table().unwrap());
    }

    #[test]
    fn no_cloning_means_no_disjoint_authorized_pair(n in 1usize..7, seed in family(6)) {
        let fam: Vec<u64> = seed.into_iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
        let a = structure(n, &fam).analyze(None).unwrap();
        let disjoint = fam.iter().any(|&x| fam.iter().any(|&y| x & y == 0));
        prop_assert_eq!(a.no_cloning, !disjoint);
        let smallest = fam.iter().map(|m| m.count_ones() as usize).min();
        prop_assert_eq!(a.heaviness, smallest);
        prop_assert_eq!(a.heavy, smallest.is_none_or(|t| t > n / 2));
    }

    #[test]
    fn circuit_round_trip(n in 1usize..6, seed in family(5)) {
        let fam: Vec<u64> = seed.into_iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
        let f = structure(n, &fam);
        let g = AccessStructure::from_circuit(f.to_circuit().unwrap());
        prop_assert_eq!(g.truth_table().unwrap(), f.truth_table().unwrap());
    }

    #[test]
    fn lift_is_heavy_and_restricts(n in 1usize..6, seed in prop::collection::vec(1u64..32, 1..4)) {
        let fam: Vec<u64> = seed.into_iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
        prop_assume!(!fam.is_empty());
        let f = structure(n, &fam);
        let lifted = prop1_lift(&f).unwrap();
        let a = lifted.analyze(None).unwrap();
        prop_assert!(a.heavy && a.no_cloning);
        let tail = ((1u64 << n) - 1) << n;
        for p in PartySet::all(2 * n) {
            let expect = p.0 & tail == tail && covers(&fam, p.0 & ((1 << n) - 1));
            prop_assert_eq!(lifted.eval(p), expect);
        }
    }

    #[test]
    fn threshold_span_program(n in 1usize..7, t in 1usize..7) {
        prop_assume!(t <= n);
        let m = MonotoneSpanProgram::threshold(Field::prime(7).unwrap(), t, n).unwrap();
        for p in PartySet::all(n) {
            prop_assert_eq!(m.accepts(p), p.len() >= t);
        }
        prop_assert!(m.computes(&AccessStructure::threshold(t, n).unwrap()).unwrap());
    }

    #[test]
    fn canonical_program_computes(n in 1usize..6, seed in family(5)) {
        let fam: Vec<u64> = seed.into_iter().map(|m| m & ((1 << n) - 1)).filter(|&m| m != 0).collect();
        let f = structure(n, &fam);
        let field = MonotoneSpanProgram::canonical_field(&f).unwrap();
        let m = MonotoneSpanProgram::canonical(&f, field).unwrap();
        prop_assert!(m.computes(&f).unwrap());
    }

    #[test]
    fn weighted_threshold_counts_weight(ws in prop::collection::vec(1u32..4, 1..6), t in 1u64..10) {
        let w = WeightFunction::new(ws.clone()).unwrap();
        if t > w.total() {
            prop_assert!(AccessStructure::weighted_threshold(&w, t).is_err());
            return Ok(());
        }
        let f = AccessStructure::weighted_threshold(&w, t).unwrap();
        for p in PartySet::all(ws.len()) {
            let weight: u64 = p.iter().map(|i| ws[i] as u64).sum();
            prop_assert_eq!(f.eval(p), weight >= t);
        }
    }
}

#[test]
fn constants() {
    let one = AccessStructure::constant(3, true);
    let zero = AccessStructure::constant(3, false);
    assert!(one.eval(PartySet::empty()));
    assert!(PartySet::all(3).all(|p| !zero.eval(p)));
    let a = zero.analyze(None).unwrap();
    assert!(a.heavy && a.no_cloning && a.min_sets.is_empty());
    assert!(!one.analyze(None).unwrap().no_cloning);
}

#[test]
fn out_of_range_party_is_rejected() {
    assert!(AccessStructure::from_min_sets(2, vec![PartySet::from_parties(&[2])]).is_err());
}
