use qss::deal::tensor_power;
use qss::{deal_from_json, deal_to_json, parse_secret, preset};
use qss_core::access::PartySet;
use qss_core::classical::RandomTape;
use qss_core::compiler::{qss_reconstruct, qss_share, reference_deal, Deal};

/// Register labels are not part of the file format.
fn assert_same(a: &Deal, b: &Deal) {
    assert_eq!(a.state.system().dims(), b.state.system().dims());
    for (x, y) in a.state.amplitudes().iter().zip(b.state.amplitudes()) {
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }
    assert_eq!(
        (&a.scheme, &a.party_map, &a.environment, &a.reference, &a.classical, &a.public, &a.tape),
        (&b.scheme, &b.party_map, &b.environment, &b.reference, &b.classical, &b.public, &b.tape)
    );
}

#[test]
fn roundtrip_is_bit_exact() {
    let s = preset("perfect:th(2,3)").unwrap();
    let secret = parse_secret("0.3+0.1i, -0.7, 0.2i", 3).unwrap();
    let deal = qss_share(&s, &secret, &[0], &RandomTape::Seed(5)).unwrap();
    let json = deal_to_json(&deal);
    let back = deal_from_json(&json).unwrap();
    assert_same(&back, &deal);
    assert_eq!(deal_to_json(&back), json);
}

#[test]
fn references_survive_roundtrip() {
    let s = preset("multicopy:th(2,4)").unwrap();
    let deal = reference_deal(&s, &RandomTape::Explicit(vec![0; 64])).err();
    // explicit tapes must be fully consumed; a seed always is
    assert!(deal.is_some());
    let deal = reference_deal(&s, &RandomTape::Seed(3)).unwrap();
    assert_eq!(deal.reference, vec![0, 1]);
    let back = deal_from_json(&deal_to_json(&deal)).unwrap();
    assert_same(&back, &deal);
}

#[test]
fn replay_is_deterministic() {
    let s = preset("perfect:minsets{{1,2,3},{2,3,4}}").unwrap();
    let secret = parse_secret("basis:2", 5).unwrap();
    let a = deal_to_json(&qss_share(&s, &secret, &[0], &RandomTape::Seed(17)).unwrap());
    let b = deal_to_json(&qss_share(&s, &secret, &[0], &RandomTape::Seed(17)).unwrap());
    let c = deal_to_json(&qss_share(&s, &secret, &[0], &RandomTape::Seed(18)).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn loaded_deal_reconstructs() {
    let s = preset("multicopy:2,4").unwrap();
    let secret = parse_secret("1, 1i, 0, 0, 1", 5).unwrap();
    let input = tensor_power(&secret, 2).unwrap();
    let deal = deal_from_json(&deal_to_json(&qss_share(&s, &input, &[0, 1], &RandomTape::Seed(1)).unwrap())).unwrap();
    let r = qss_reconstruct(&s, &deal, PartySet::from_parties(&[0, 3]), None).unwrap();
    let rho = r.state.partial_trace(&[r.output]).unwrap();
    assert!((rho.fidelity_with_pure(&secret).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn json_layout() {
    let s = preset("perfect:th(2,3)").unwrap();
    let deal = qss_share(&s, &parse_secret("basis:1", 3).unwrap(), &[0], &RandomTape::Seed(2)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&deal_to_json(&deal)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["scheme"], "perfect:th(2,3)");
    assert_eq!(v["dims"], serde_json::json!([3, 3, 3]));
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), 27);
    assert_eq!(v["party_map"]["1"], serde_json::json!([0]));
    assert!(v["classical"]["3"].is_string());
    assert_eq!(v["tape"], serde_json::json!({ "seed": 2 }));
    let explicit = Deal { tape: RandomTape::Explicit(vec![1, 2]), ..deal };
    let v: serde_json::Value = serde_json::from_str(&deal_to_json(&explicit)).unwrap();
    assert_eq!(v["tape"], serde_json::json!({ "explicit": [1, 2] }));
}

#[test]
fn malformed_deals_are_rejected() {
    let s = preset("perfect:th(2,3)").unwrap();
    let deal = qss_share(&s, &parse_secret("basis:0", 3).unwrap(), &[0], &RandomTape::Seed(2)).unwrap();
    let good: serde_json::Value = serde_json::from_str(&deal_to_json(&deal)).unwrap();
    let mutate = |f: &dyn Fn(&mut serde_json::Value)| {
        let mut v = good.clone();
        f(&mut v);
        deal_from_json(&v.to_string())
    };
    assert!(mutate(&|v| v["version"] = 2.into()).is_err());
    assert!(mutate(&|v| v["amplitudes"][0] = serde_json::json!([2.0, 0.0])).is_err());
    assert!(mutate(&|v| v["classical"]["1"] = "zz".into()).is_err());
    assert!(mutate(&|v| v["party_map"]["2"] = serde_json::json!([0])).is_err());
    assert!(mutate(&|v| v["party_map"]["3"] = serde_json::json!([7])).is_err());
    assert!(mutate(&|v| v["extra"] = 1.into()).is_err());
    assert!(mutate(&|v| v["dims"] = serde_json::json!([3, 3])).is_err());
    assert!(deal_from_json("{").is_err());
}

#[test]
fn secrets() {
    let s = parse_secret("3, 4", 2).unwrap();
    assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
    assert!((s.amplitudes()[1].re - 0.8).abs() < 1e-15);
    let s = parse_secret("1+1i, 0", 2).unwrap();
    assert!((s.amplitudes()[0].im - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(parse_secret("basis:3", 3).is_err());
    assert!(parse_secret("1, 2", 3).is_err());
    assert!(parse_secret("0, 0", 2).is_err());
    assert!(parse_secret("1, x", 2).is_err());
}
