use proptest::prelude::*;
use qss_core::qotp::*;
use qss_core::qsim::random::{random_density, random_state};
use qss_core::qsim::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sys(dims: &[usize]) -> RegisterSystem {
    RegisterSystem::from_dims(dims).unwrap()
}

fn uniform(d: usize) -> PureState {
    PureState::normalized(sys(&[d]), vec![C64::new(1.0, 0.0); d]).unwrap()
}

#[test]
fn qubit_examples() {
    let x = OtpKey::new(vec![2], vec![(1, 0)]).unwrap();
    let z = OtpKey::new(vec![2], vec![(0, 1)]).unwrap();
    let zero = PureState::basis(sys(&[2]), &[0]).unwrap();
    let one = PureState::basis(sys(&[2]), &[1]).unwrap();
    assert!((otp_enc(&zero, &[0], &x).unwrap().fidelity(&one) - 1.0).abs() < 1e-14);
    let minus = PureState::normalized(sys(&[2]), vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).unwrap();
    let out = otp_enc(&uniform(2), &[0], &z).unwrap();
    for (a, b) in out.amplitudes().iter().zip(minus.amplitudes()) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn roundtrip_exhaustive_small_dims() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in 2..=5usize {
        let mut secrets: Vec<PureState> = (0..d).map(|j| PureState::basis(sys(&[d]), &[j]).unwrap()).collect();
        secrets.push(uniform(d));
        secrets.push(random_state(&mut rng, sys(&[d])).unwrap());
        for idx in 0..OtpKey::key_count(&[d]) {
            let k = OtpKey::from_index(vec![d], idx).unwrap();
            for s in &secrets {
                let back = otp_dec(&otp_enc(s, &[0], &k).unwrap(), &[0], &k).unwrap();
                for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
                    assert!((a - b).norm() < 1e-12);
                }
                let rho = s.density();
                let back = otp_dec_density(&otp_enc_density(&rho, &[0], &k).unwrap(), &[0], &k).unwrap();
                assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
            }
        }
    }
}

#[test]
fn dec_is_adjoint_of_enc() {
    for d in 2..=4usize {
        for idx in 0..OtpKey::key_count(&[d]) {
            let k = OtpKey::from_index(vec![d], idx).unwrap();
            let (a, b) = k.pairs()[0];
            let enc = pauli_matrix(d, a, b);
            for j in 0..d {
                let e = PureState::basis(sys(&[d]), &[j]).unwrap();
                let got = otp_dec(&e, &[0], &k).unwrap();
                let want = enc.adjoint().mul_vec(e.amplitudes());
                for (x, y) in got.amplitudes().iter().zip(&want) {
                    assert!((x - y).norm() < 1e-13);
                }
            }
        }
    }
}

#[test]
fn key_average_is_maximally_mixed() {
    let zero = PureState::basis(sys(&[2]), &[0]).unwrap().density();
    assert!(key_average_check(2, &zero).unwrap() <= 1e-10);
    assert!(key_average_check(2, &uniform(2).density()).unwrap() <= 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [3usize, 4, 7] {
        let psi = random_state(&mut rng, sys(&[d])).unwrap().density();
        assert!(key_average_check(d, &psi).unwrap() <= 1e-10);
        let mixed = random_density(&mut rng, sys(&[d]), 2).unwrap();
        assert!(key_average_check(d, &mixed).unwrap() <= 1e-10);
    }
    assert!(key_average_check(17, &zero).is_err());
}

#[test]
fn distinct_keys_act_differently() {
    for d in 2..=4usize {
        let n = OtpKey::key_count(&[d]);
        for i in 0..n {
            for j in (i + 1)..n {
                let (ki, kj) = (OtpKey::from_index(vec![d], i).unwrap(), OtpKey::from_index(vec![d], j).unwrap());
                let (ai, bi) = ki.pairs()[0];
                let (aj, bj) = kj.pairs()[0];
                let diff = pauli_matrix(d, ai, bi).max_abs_diff(&pauli_matrix(d, aj, bj));
                assert!(diff > 1e-6);
            }
        }
    }
}

#[test]
fn multi_register_and_shape_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi = random_state(&mut rng, sys(&[3, 2, 3])).unwrap();
    let k = OtpKey::new(vec![3, 3], vec![(1, 2), (2, 1)]).unwrap();
    let enc = otp_enc(&psi, &[2, 0], &k).unwrap();
    // oracle: dense kron of the per-register Paulis
    let full = pauli_matrix(3, 2, 1).kron(&CMatrix::identity(2)).kron(&pauli_matrix(3, 1, 2));
    let want = full.mul_vec(psi.amplitudes());
    for (a, b) in enc.amplitudes().iter().zip(&want) {
        assert!((a - b).norm() < 1e-12);
    }
    assert!(matches!(otp_enc(&psi, &[0], &k), Err(OtpError::KeyShape { .. })));
    assert!(matches!(otp_enc(&psi, &[0, 1], &k), Err(OtpError::DimMismatch { .. })));
    assert_eq!(k.bit_length(), 8);
}

proptest! {
    #[test]
    fn roundtrip_random(seed in any::<u64>(), a in 0u32..5, b in 0u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(&mut rng, sys(&[5, 2])).unwrap();
        let k = OtpKey::new(vec![5], vec![(a, b)]).unwrap();
        let back = otp_dec(&otp_enc(&psi, &[0], &k).unwrap(), &[0], &k).unwrap();
        prop_assert!((back.fidelity(&psi) - 1.0).abs() < 1e-12);
    }
}
