use proptest::prelude::*;
use qss_core::gf::{is_prime, next_prime, rs_code, Field, Matrix, Poly};

fn fields() -> Vec<Field> {
    let mut v: Vec<Field> = [2, 3, 5, 7, 11, 13].iter().map(|&p| Field::prime(p).unwrap()).collect();
    v.extend((1..=4).map(|r| Field::binary(r).unwrap()));
    v
}

#[test]
fn field_axioms_exhaustive() {
    for f in fields() {
        let els: Vec<u32> = f.elements().collect();
        assert_eq!(els.len() as u32, f.order());
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        assert!(f.inv(0).is_err());
    }
}

#[test]
fn primes() {
    let naive = |n: u32| n >= 2 && (2..n).all(|d| !n.is_multiple_of(d));
    for n in 0..500 {
        assert_eq!(is_prime(n), naive(n), "{n}");
    }
    assert_eq!(next_prime(8), 11);
    assert_eq!(next_prime(11), 11);
    assert!(Field::prime(9).is_err());
}

#[test]
fn gf4_multiplication_table() {
    // x^2 + x + 1: with a = x, a^2 = a + 1 = 3, a^3 = 1
    let f = Field::binary(2).unwrap();
    assert_eq!(f.mul(2, 2), 3);
    assert_eq!(f.mul(2, 3), 1);
    assert_eq!(f.mul(3, 3), 2);
    assert_eq!(f.characteristic(), 2);
}

proptest! {
    #[test]
    fn interpolation_recovers_polynomial(coeffs in prop::collection::vec(0u32..13, 1..6)) {
        let f = Field::prime(13).unwrap();
        let p = Poly::new(f, coeffs.clone()).unwrap();
        let pts: Vec<(u32, u32)> = (0..coeffs.len() as u32).map(|x| (x, p.eval(x))).collect();
        prop_assert_eq!(Poly::interpolate(f, &pts).unwrap(), p);
    }

    #[test]
    fn rs_erasure_decoding(msg in prop::collection::vec(0u32..11, 1..5), drop in prop::collection::vec(any::<bool>(), 7)) {
        let f = Field::prime(11).unwrap();
        let k = msg.len();
        let code = rs_code(f, 7, k, None).unwrap();
        let word = code.encode(&msg).unwrap();
        let known: Vec<(usize, u32)> = (0..7).filter(|&i| !drop[i]).map(|i| (i, word[i])).collect();
        let got = code.erasure_decode(&known);
        if known.len() >= k {
            prop_assert_eq!(got.unwrap(), word);
        } else {
            prop_assert!(got.is_err());
        }
    }

    #[test]
    fn rank_plus_nullity(rows in prop::collection::vec(prop::collection::vec(0u32..5, 4), 1..5)) {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_rows(f, 4, &rows).unwrap();
        let ns = m.null_space();
        prop_assert_eq!(m.rank() + ns.rows(), 4);
        let prod = m.mul(&ns.transpose()).unwrap();
        for r in 0..prod.rows() {
            prop_assert!(prod.row(r).iter().all(|&v| v == 0));
        }
    }
}

#[test]
fn rs_distance_and_dual() {
    let f = Field::prime(7).unwrap();
    let c = rs_code(f, 6, 3, None).unwrap();
    assert_eq!(c.min_distance(), Some(4));
    let d = c.dual();
    assert_eq!(d.dimension(), 3);
    for w in d.codewords() {
        for g in c.generator().row_vecs() {
            let dot = w.iter().zip(&g).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert_eq!(dot, 0);
        }
    }
}
