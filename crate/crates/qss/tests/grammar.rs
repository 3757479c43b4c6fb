use proptest::prelude::*;
use qss::grammar::{split_options, ParseError};
use qss::{parse_expression, parse_file};
use qss_core::access::{AccessStructure, PartySet};

const HEAVY4: &str = "\
# the running 4-party example
structure heavy4 parties 4
weights 1 2 2 1
gate a = TH 2 : x1 x4
gate b = AND : x2 x3 a   # x2 x3 and one of x1 x4
output b
";

fn set(ps: &[usize]) -> PartySet {
    PartySet::from_parties(&ps.iter().map(|p| p - 1).collect::<Vec<_>>())
}

fn err_at(r: Result<qss::ParsedStructure, ParseError>) -> (usize, usize) {
    let e = r.unwrap_err();
    (e.line, e.col)
}

#[test]
fn gate_file() {
    let p = parse_file(HEAVY4).unwrap();
    assert_eq!(p.name.as_deref(), Some("heavy4"));
    assert_eq!(p.weights.unwrap().weights(), &[1, 2, 2, 1]);
    let f = p.structure;
    assert_eq!(f.parties(), 4);
    assert_eq!(f.min_sets().unwrap(), vec![set(&[1, 2, 3, 4])]);
}

#[test]
fn minsets_file_spans_lines() {
    let src = "structure s parties 4\nminsets {\n  {1,2,3}\n  {2,3,4}\n}\n";
    let f = parse_file(src).unwrap().structure;
    assert_eq!(f.min_sets().unwrap(), vec![set(&[1, 2, 3]), set(&[2, 3, 4])]);
    let inline = parse_expression("minsets{{1,2,3},{2,3,4}}", None).unwrap().structure;
    assert_eq!(f.truth_table().unwrap(), inline.truth_table().unwrap());
}

#[test]
fn weighted_gate_operands() {
    let src = "structure w parties 3\ngate g = WTH 3 : x1*2 x2 x3\noutput g\n";
    let f = parse_file(src).unwrap().structure;
    let want = parse_expression("wth(3; 2,1,1)", None).unwrap();
    assert_eq!(f.truth_table().unwrap(), want.structure.truth_table().unwrap());
    assert_eq!(want.weights.unwrap().weights(), &[2, 1, 1]);
    let same = parse_expression("wth(3, x1*2, x2, x3)", None).unwrap();
    assert_eq!(same.structure.truth_table().unwrap(), f.truth_table().unwrap());
    assert!(same.weights.is_none());
}

#[test]
fn errors_carry_positions() {
    assert_eq!(err_at(parse_file("structure s parties 3\ngate g = XOR : x1\n")), (2, 10));
    assert_eq!(err_at(parse_file("structure s parties 3\ngate g = AND : x1 x4\noutput g\n")), (2, 19));
    assert_eq!(err_at(parse_file("structure s parties 3\ngate g = AND : x1 h\n")), (2, 19));
    assert_eq!(err_at(parse_file("structure s parties 3\ngate g = TH 2 : x1*2 x2\n")), (2, 19));
    assert_eq!(err_at(parse_file("structure s parties 2\nweights 1\n")), (2, 1));
    assert_eq!(err_at(parse_file("structure s parties 2\n  minsets {{1} {3}}\n")), (2, 16));
    assert_eq!(err_at(parse_file("parties 2\n")), (1, 1));
    assert_eq!(err_at(parse_file("structure s parties 2\ngate g = OR : x1\ngate g = OR : x2\n")), (3, 6));
    assert_eq!(err_at(parse_file("structure s parties 2\n\n")).0, 2);
    assert_eq!(err_at(parse_expression("and(x1, x2", None)), (1, 11));
    assert_eq!(err_at(parse_expression("th(2,3) x", None)), (1, 9));
    assert_eq!(err_at(parse_expression("nand(x1)", None)), (1, 1));
    assert_eq!(err_at(parse_expression("and(x1, $)", None)), (1, 9));
    let msg = parse_file("structure s parties 3\ngate g = XOR : x1\n").unwrap_err().to_string();
    assert!(msg.starts_with("2:10:"), "{msg}");
}

#[test]
fn expression_party_count() {
    let f = parse_expression("and(x1, th(2, x2, x3, x4))", None).unwrap().structure;
    assert_eq!(f.parties(), 4);
    let g = parse_expression("or(x1, x2)", Some(5)).unwrap().structure;
    assert_eq!(g.parties(), 5);
    assert!(!g.eval(set(&[3, 4, 5])));
    assert!(parse_expression("or(x1, x4)", Some(3)).is_err());
}

#[test]
fn options_split_outside_brackets() {
    let (body, opts) = split_options("wth(3;2,1,1);ss=leaky:0.25;q=7");
    assert_eq!(body, "wth(3;2,1,1)");
    assert_eq!(opts, vec![("ss".into(), "leaky:0.25".into()), ("q".into(), "7".into())]);
    let (body, opts) = split_options("minsets{{1,2}}");
    assert_eq!(body, "minsets{{1,2}}");
    assert!(opts.is_empty());
}

proptest! {
    #[test]
    fn threshold_expression_counts(n in 1usize..8, t in 1usize..8) {
        prop_assume!(t <= n);
        let f = parse_expression(&format!("th({t},{n})"), None).unwrap().structure;
        for p in PartySet::all(n) {
            prop_assert_eq!(f.eval(p), p.len() >= t);
        }
    }

    #[test]
    fn minsets_expression_roundtrip(masks in proptest::collection::vec(1u64..64, 1..6)) {
        let sets: Vec<PartySet> = masks.iter().map(|&m| PartySet(m)).collect();
        let want = AccessStructure::from_min_sets(6, sets.clone()).unwrap();
        let text: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        let got = parse_expression(&format!("minsets{{{}}}", text.join(",")), Some(6)).unwrap().structure;
        prop_assert_eq!(got.min_sets().unwrap(), want.min_sets().unwrap());
    }
}
