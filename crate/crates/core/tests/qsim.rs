use proptest::prelude::*;
use qss_core::qsim::eigen::{hermitian_eigen, hermitian_eigenvalues, hermitian_trace_norm};
use qss_core::qsim::random::{random_density, random_isometry, random_state};
use qss_core::qsim::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn state(dims: &[usize], amps: &[f64]) -> PureState {
    let sys = RegisterSystem::from_dims(dims).unwrap();
    PureState::normalized(sys, amps.iter().map(|&a| c(a, 0.0)).collect()).unwrap()
}

fn pure(dims: &[usize], amps: &[f64]) -> DensityMatrix {
    state(dims, amps).density()
}

fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.max_abs_diff(b) < tol
}

#[test]
fn bell_partial_trace_is_maximally_mixed() {
    let bell = state(&[2, 2], &[1.0, 0.0, 0.0, 1.0]);
    let rho = bell.partial_trace(&[0]).unwrap();
    let half = CMatrix::identity(2).scale(c(0.5, 0.0));
    assert!(close(rho.matrix(), &half, 1e-14));
    rho.validate().unwrap();
}

#[test]
fn ghz3_qutrit_middle_register() {
    let mut a = vec![0.0; 27];
    for i in 0..3 {
        a[i * 9 + i * 3 + i] = 1.0;
    }
    let rho = state(&[3, 3, 3], &a).partial_trace(&[1]).unwrap();
    let third = CMatrix::identity(3).scale(c(1.0 / 3.0, 0.0));
    assert!(close(rho.matrix(), &third, 1e-14));
}

#[test]
fn product_partial_trace_recovers_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_state(&mut rng, RegisterSystem::from_dims(&[3]).unwrap()).unwrap();
    let b = random_state(&mut rng, RegisterSystem::from_dims(&[2, 2]).unwrap()).unwrap();
    let ab = a.tensor(&b).unwrap();
    let rho = ab.partial_trace(&[0]).unwrap();
    assert!(close(rho.matrix(), a.density().matrix(), 1e-12));
    let rho = ab.partial_trace(&[1, 2]).unwrap();
    assert!(close(rho.matrix(), b.density().matrix(), 1e-12));
}

#[test]
fn trace_distance_examples() {
    let z0 = pure(&[2], &[1.0, 0.0]);
    let z1 = pure(&[2], &[0.0, 1.0]);
    let plus = pure(&[2], &[1.0, 1.0]);
    assert!((trace_distance(&z0, &z1).unwrap() - 1.0).abs() < 1e-12);
    assert!(trace_distance(&z0, &z0).unwrap().abs() < 1e-12);
    assert!((trace_distance(&z0, &plus).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert_eq!(helstrom_advantage(&z0, &plus).unwrap(), trace_distance(&z0, &plus).unwrap());
    let bad = pure(&[3], &[1.0, 0.0, 0.0]);
    assert!(matches!(trace_distance(&z0, &bad), Err(QsimError::DimensionMismatch { .. })));
}

#[test]
fn isometry_examples() {
    let plus = state(&[2], &[1.0, 1.0]);
    let same = plus.apply_isometry(&LinearIsometry::identity(vec![2]), &[0], None).unwrap();
    assert_eq!(same, plus);
    let emb = LinearIsometry::embedding(2, 3).unwrap();
    let q = plus.apply_isometry(&emb, &[0], None).unwrap();
    assert_eq!(q.system().dims(), vec![3]);
    let want = state(&[3], &[1.0, 1.0, 0.0]);
    assert!((q.fidelity(&want) - 1.0).abs() < 1e-14);
    assert!(matches!(
        plus.apply_isometry(&LinearIsometry::identity(vec![3]), &[0], None),
        Err(QsimError::DimensionMismatch { .. })
    ));
}

#[test]
fn isometry_placement_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = random_state(&mut rng, RegisterSystem::from_dims(&[2, 3, 2]).unwrap()).unwrap();
    // one input register to two outputs, inserted at the target's place
    let v = random_isometry(&mut rng, vec![3], vec![2, 2]).unwrap();
    let out = psi.apply_isometry(&v, &[1], Some(&["a", "b"])).unwrap();
    assert_eq!(out.system().dims(), vec![2, 2, 2, 2]);
    let labels: Vec<_> = out.system().registers().iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["r0", "a", "b", "r2"]);
    assert!((out.norm() - 1.0).abs() < 1e-12);
    // oracle: explicit (I (x) V (x) I) on the amplitude vector
    let full = CMatrix::identity(2).kron(v.matrix()).kron(&CMatrix::identity(2));
    let want = full.mul_vec(psi.amplitudes());
    for (a, b) in out.amplitudes().iter().zip(&want) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn mod3_basis_permutation() {
    let p = BasisPermutation::from_fn(vec![3, 3], |t| vec![(t[1] + 3 - t[0]) % 3, (2 * t[1] + 3 - t[0]) % 3]).unwrap();
    let sys = RegisterSystem::from_dims(&[3, 3]).unwrap();
    let s = PureState::basis(sys.clone(), &[0, 1]).unwrap();
    let out = s.apply_basis_permutation(&p, &[0, 1]).unwrap();
    assert_eq!(out, PureState::basis(sys.clone(), &[1, 2]).unwrap());
    let back = out.apply_basis_permutation(&p.inverse(), &[0, 1]).unwrap();
    assert_eq!(back, s);
    // swap equals register permutation
    let swap = BasisPermutation::from_fn(vec![3, 3], |t| vec![t[1], t[0]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let psi = random_state(&mut rng, sys).unwrap();
    assert_eq!(
        psi.apply_basis_permutation(&swap, &[0, 1]).unwrap().amplitudes(),
        psi.permute_registers(&[1, 0]).unwrap().amplitudes()
    );
    assert_eq!(psi.apply_basis_permutation(&BasisPermutation::identity(vec![3, 3]), &[0, 1]).unwrap(), psi);
    assert_eq!(BasisPermutation::new(vec![2], vec![0, 0]), Err(QsimError::NotBijective));
}

#[test]
fn entangle_reference_examples() {
    let e2 = entangle_reference(2).unwrap();
    let bell = state(&[2, 2], &[1.0, 0.0, 0.0, 1.0]);
    assert!((e2.fidelity(&bell) - 1.0).abs() < 1e-14);
    let e3 = entangle_reference(3).unwrap();
    let rho = e3.partial_trace(&[1]).unwrap();
    assert!(close(rho.matrix(), &CMatrix::identity(3).scale(c(1.0 / 3.0, 0.0)), 1e-14));
    assert!((entanglement_fidelity(&e3, &[(0, 1)]).unwrap() - 1.0).abs() < 1e-14);
    assert!(entangle_reference(65).is_err());
}

#[test]
fn entanglement_fidelity_with_junk_and_noise() {
    // reference, junk, output: fidelity ignores a product junk register
    let e = entangle_reference(3).unwrap();
    let junk = state(&[2], &[0.6, 0.8]);
    let s = e.tensor(&junk).unwrap().permute_registers(&[0, 2, 1]).unwrap();
    assert!((entanglement_fidelity(&s, &[(0, 2)]).unwrap() - 1.0).abs() < 1e-14);
    // dephased copy |i>|i>|i>: fidelity 1/d
    let mut a = vec![0.0; 27];
    for i in 0..3 {
        a[i * 13] = 1.0;
    }
    let ghz = state(&[3, 3, 3], &a);
    assert!((entanglement_fidelity(&ghz, &[(0, 1)]).unwrap() - 1.0 / 3.0).abs() < 1e-14);
}

#[test]
fn schmidt_examples() {
    let bell = state(&[2, 2], &[1.0, 0.0, 0.0, 1.0]);
    let s = schmidt(&bell, &[0]).unwrap();
    assert_eq!(s.lambdas.len(), 2);
    assert!(s.lambdas.iter().all(|l| (l - 0.5).abs() < 1e-12));
    let prod = state(&[2, 2], &[1.0, 1.0, 0.0, 0.0]);
    let s = schmidt(&prod, &[0]).unwrap();
    assert_eq!(s.lambdas.len(), 1);
    assert!((s.lambdas[0] - 1.0).abs() < 1e-12);
    let w = state(&[2, 2], &[1.0, 1.0, 1.0, 0.0]);
    let s = schmidt(&w, &[0]).unwrap();
    let r5 = 5f64.sqrt();
    assert!((s.lambdas[0] - (3.0 + r5) / 6.0).abs() < 1e-12);
    assert!((s.lambdas[1] - (3.0 - r5) / 6.0).abs() < 1e-12);
    assert!((s.lambdas[0] - 0.8727).abs() < 1e-4);
    assert!(matches!(schmidt(&w, &[]), Err(QsimError::EmptyCut)));
}

fn schmidt_roundtrip(dims: &[usize], left: &[usize], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = random_state(&mut rng, RegisterSystem::from_dims(dims).unwrap()).unwrap();
    let s = schmidt(&psi, left).unwrap();
    assert!((s.lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    assert!(s.lambdas.windows(2).all(|w| w[0] >= w[1]));
    let (m, right) = psi.coefficient_matrix(left).unwrap();
    assert_eq!(right, s.right_registers);
    let r = s.reconstruct(m.rows(), m.cols());
    assert!(close(&m, &r, 1e-10));
}

#[test]
fn schmidt_reconstructs_both_orientations() {
    schmidt_roundtrip(&[2, 3, 2], &[1], 1);
    schmidt_roundtrip(&[2, 3, 2], &[0, 2], 2);
    schmidt_roundtrip(&[3, 3, 3, 3], &[3, 0], 3);
    schmidt_roundtrip(&[5, 2], &[0], 4);
}

#[test]
fn density_validation() {
    let sys = RegisterSystem::from_dims(&[2]).unwrap();
    let m = CMatrix::from_vec(2, 2, vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
    assert!(matches!(DensityMatrix::new(sys.clone(), m), Err(QsimError::NotPositive(_))));
    let m = CMatrix::from_vec(2, 2, vec![c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
    assert!(matches!(DensityMatrix::new(sys.clone(), m), Err(QsimError::NotHermitian(_))));
    let m = CMatrix::identity(2);
    assert!(matches!(DensityMatrix::new(sys, m), Err(QsimError::NotNormalized(_))));
    assert!(RegisterSystem::from_dims(&[1]).is_err());
    assert!(matches!(RegisterSystem::from_dims(&[2; 21]), Err(QsimError::CapExceeded { .. })));
    let big = RegisterSystem::from_dims(&[2; 13]).unwrap();
    let psi = PureState::basis(big, &[0; 13]).unwrap();
    assert!(matches!(psi.partial_trace(&(0..13).collect::<Vec<_>>()), Err(QsimError::KeptTooLarge { .. })));
}

#[test]
fn density_isometry_matches_pure() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi = random_state(&mut rng, RegisterSystem::from_dims(&[2, 3]).unwrap()).unwrap();
    let v = random_isometry(&mut rng, vec![3], vec![2, 3]).unwrap();
    let a = psi.apply_isometry(&v, &[1], None).unwrap().density();
    let b = psi.density().apply_isometry(&v, &[1]).unwrap();
    assert_eq!(a.system(), b.system());
    assert!(close(a.matrix(), b.matrix(), 1e-12));
}

#[test]
fn eigen_solvers_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in [2usize, 3, 5, 8, 12] {
        let sys = RegisterSystem::from_dims(&[d]).unwrap();
        let a = random_density(&mut rng, sys.clone(), d).unwrap();
        let b = random_density(&mut rng, sys, 2).unwrap();
        let diff = a.matrix().sub(b.matrix());
        let (jv, vecs) = hermitian_eigen(&diff);
        let tv = hermitian_eigenvalues(&diff);
        for (x, y) in jv.iter().zip(&tv) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
        // A v = lambda v
        for (k, &lambda) in jv.iter().enumerate().take(d) {
            let v = vecs.column(k);
            let av = diff.mul_vec(&v);
            for (x, y) in av.iter().zip(&v) {
                assert!((x - y * lambda).norm() < 1e-10);
            }
        }
        let tn: f64 = jv.iter().map(|x| x.abs()).sum();
        assert!((hermitian_trace_norm(&diff) - tn).abs() < 1e-10);
    }
}

fn rand_pair(seed: u64, d: usize) -> (DensityMatrix, DensityMatrix, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = RegisterSystem::from_dims(&[d]).unwrap();
    let a = random_density(&mut rng, sys.clone(), 1 + (seed as usize % d)).unwrap();
    let b = random_density(&mut rng, sys, d).unwrap();
    (a, b, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn contraction_under_channels(seed in any::<u64>(), d in 2usize..5, e in 2usize..4) {
        let (a, b, mut rng) = rand_pair(seed, d);
        let v = random_isometry(&mut rng, vec![d], vec![d, e]).unwrap();
        let fa = a.apply_isometry(&v, &[0]).unwrap().partial_trace(&[1]).unwrap();
        let fb = b.apply_isometry(&v, &[0]).unwrap().partial_trace(&[1]).unwrap();
        prop_assert!(trace_distance(&fa, &fb).unwrap() <= trace_distance(&a, &b).unwrap() + 1e-9);
    }

    #[test]
    fn tensor_with_common_state(seed in any::<u64>(), d in 2usize..4, e in 2usize..4) {
        let (a, b, mut rng) = rand_pair(seed, d);
        let t = random_density(&mut rng, RegisterSystem::from_dims(&[e]).unwrap(), e).unwrap();
        let lhs = trace_distance(&a.tensor(&t).unwrap(), &b.tensor(&t).unwrap()).unwrap();
        prop_assert!((lhs - trace_distance(&a, &b).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn discarding_and_subadditivity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s2 = RegisterSystem::from_dims(&[2, 3]).unwrap();
        let a = random_density(&mut rng, s2.clone(), 3).unwrap();
        let b = random_density(&mut rng, s2, 2).unwrap();
        let full = trace_distance(&a, &b).unwrap();
        for keep in [[0usize].as_slice(), [1usize].as_slice()] {
            let part = trace_distance(&a.partial_trace(keep).unwrap(), &b.partial_trace(keep).unwrap()).unwrap();
            prop_assert!(part <= full + 1e-9);
        }
        let s = RegisterSystem::from_dims(&[2]).unwrap();
        let (r1, r2, s1, s2) = (
            random_density(&mut rng, s.clone(), 2).unwrap(),
            random_density(&mut rng, s.clone(), 1).unwrap(),
            random_density(&mut rng, s.clone(), 2).unwrap(),
            random_density(&mut rng, s, 2).unwrap(),
        );
        let lhs = trace_distance(&r1.tensor(&r2).unwrap(), &s1.tensor(&s2).unwrap()).unwrap();
        let rhs = trace_distance(&r1, &s1).unwrap() + trace_distance(&r2, &s2).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn mixtures(seed in any::<u64>(), p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let (r1, s1, mut rng) = rand_pair(seed, 3);
        let sys = RegisterSystem::from_dims(&[3]).unwrap();
        let r2 = random_density(&mut rng, sys.clone(), 3).unwrap();
        let s2 = random_density(&mut rng, sys, 1).unwrap();
        let lhs_r = DensityMatrix::mixture(&[(p, &r1), (1.0 - p, &r2)]).unwrap();
        let lhs_s = DensityMatrix::mixture(&[(q, &s1), (1.0 - q, &s2)]).unwrap();
        let lhs = trace_distance(&lhs_r, &lhs_s).unwrap();
        let delta = (p - q).abs();
        let rhs = delta + p * trace_distance(&r1, &s1).unwrap() + (1.0 - p) * trace_distance(&r2, &s2).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        let (a, b, mut rng) = rand_pair(seed, 4);
        let c3 = random_density(&mut rng, RegisterSystem::from_dims(&[4]).unwrap(), 2).unwrap();
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(ab <= trace_distance(&a, &c3).unwrap() + trace_distance(&c3, &b).unwrap() + 1e-9);
    }

    #[test]
    fn isometry_preserves_norm_and_trace(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(&mut rng, RegisterSystem::from_dims(&[2, 3, 2]).unwrap()).unwrap();
        let v = random_isometry(&mut rng, vec![2, 2], vec![3, 2]).unwrap();
        let out = psi.apply_isometry(&v, &[2, 0], None).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        for keep in [vec![0usize], vec![1, 2], vec![2, 0]] {
            prop_assert!(out.partial_trace(&keep).unwrap().validate().is_ok());
        }
    }
}
