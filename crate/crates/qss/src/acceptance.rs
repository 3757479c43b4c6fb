//! The acceptance suite: twelve end-to-end checks with pinned tolerances and
//! runtime budgets. A criterion passes when its check holds and it finishes
//! within budget.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qss_core::access::{
    prop1_lift, prop1_msp_stack, prop6_build, prop6_witness, AccessStructure, Gate, GateKind, MonotoneCircuit,
    MonotoneSpanProgram, PartySet, WeightFunction, Wire,
};
use qss_core::classical::{PrgBackend, RandomTape};
use qss_core::compiler::{self, copies_required, tomographic_family, verify_correctness, verify_privacy, PrivacyMode, QssScheme, SsKind};
use qss_core::gf::{rs_code, Field};
use qss_core::qecc::{css_build, kl_check, kl_diagnostic, lemma3_params, m_min, multicopy_threshold, quantum_shamir, QeccScheme};
use qss_core::qotp::{otp_dec, otp_enc, otp_enc_density, OtpKey};
use qss_core::qsim::random::{random_density, random_isometry, random_state};
use qss_core::qsim::{entangle_reference, entanglement_fidelity, trace_distance, CMatrix, DensityMatrix, PureState, RegisterSystem, C64};

use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {} [{:.2}s, budget {}s]",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds,
            self.budget
        )
    }
}

type Check = Result<(bool, String), Error>;

/// `(id, title, budget in seconds)`.
pub const CRITERIA: [(u32, &str, f64); 12] = [
    (1, "qotp perfect privacy", 5.0),
    (2, "quantum shamir", 30.0),
    (3, "css builder", 10.0),
    (4, "compiler exactness", 120.0),
    (5, "statistical lifting", 120.0),
    (6, "hybrid privacy", 120.0),
    (7, "long-message parameters", 1.0),
    (8, "multi-copy", 300.0),
    (9, "heavy lifting", 30.0),
    (10, "weighted-heavy witness", 10.0),
    (11, "trace distance invariants", 60.0),
    (12, "tree composition", 300.0),
];

pub fn run_criterion(id: u32) -> Option<Outcome> {
    let &(_, title, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let res = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => c12(),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (ok, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    let pass = ok && seconds < budget;
    let detail = if ok && !pass { format!("{detail}; over budget") } else { detail };
    Some(Outcome { id, title, pass, detail, seconds, budget })
}

/// Runs the given criteria (all when empty) in order.
pub fn run(ids: &[u32]) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .filter(|c| ids.is_empty() || ids.contains(&c.0))
        .filter_map(|c| run_criterion(c.0))
        .collect()
}

fn nonempty(n: usize) -> impl Iterator<Item = PartySet> {
    PartySet::all(n).filter(|p| !p.is_empty())
}

fn set(one_based: &[usize]) -> PartySet {
    PartySet::from_parties(&one_based.iter().map(|p| p - 1).collect::<Vec<_>>())
}

fn c1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut avg_err, mut rt_err) = (0.0f64, 0.0f64);
    for d in [2usize, 3, 5] {
        let sys = RegisterSystem::from_dims(&[d])?;
        let mixed = CMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
        let keys: Vec<OtpKey> = (0..OtpKey::key_count(&[d])).map(|i| OtpKey::from_index(vec![d], i)).collect::<Result<_, _>>()?;
        for _ in 0..20 {
            let psi = random_state(&mut rng, sys.clone())?;
            let rho = psi.density();
            let mut acc = CMatrix::zeros(d, d);
            for k in &keys {
                let enc = otp_enc_density(&rho, &[0], k)?;
                acc.add_scaled(enc.matrix(), 1.0 / keys.len() as f64);
                let back = otp_dec(&otp_enc(&psi, &[0], k)?, &[0], k)?;
                for (a, b) in back.amplitudes().iter().zip(psi.amplitudes()) {
                    rt_err = rt_err.max((a - b).norm());
                }
            }
            avg_err = avg_err.max(acc.max_abs_diff(&mixed));
        }
    }
    Ok((avg_err <= 1e-10 && rt_err <= 1e-12, format!("key-average deviation {avg_err:.1e} (tol 1e-10), dec(enc) error {rt_err:.1e} (tol 1e-12)")))
}

/// Encodes one half of a maximally entangled pair per copy and decodes `p`.
fn code_fidelity(s: &QeccScheme, p: PartySet) -> Result<f64, Error> {
    let k = s.copies();
    let mut st = entangle_reference(s.logical_dim())?;
    for _ in 1..k {
        st = st.tensor(&entangle_reference(s.logical_dim())?)?;
    }
    let order: Vec<usize> = (0..k).map(|i| 2 * i).chain((0..k).map(|i| 2 * i + 1)).collect();
    let st = s.encode(&st.permute_registers(&order)?, &(k..2 * k).collect::<Vec<_>>())?;
    let (out, copy, pos) = s.decode(&st, k, p)?;
    Ok(entanglement_fidelity(&out, &[(copy, pos)])?)
}

fn c2_secrets(q: usize) -> Result<Vec<PureState>, Error> {
    let sys = RegisterSystem::from_dims(&[q])?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for b in 0..3 {
        out.push(PureState::basis(sys.clone(), &[b])?);
    }
    let mut v = vec![C64::new(0.0, 0.0); q];
    v[0] = C64::new(h, 0.0);
    v[1] = C64::new(h, 0.0);
    out.push(PureState::new(sys.clone(), v)?);
    let mut v = vec![C64::new(0.0, 0.0); q];
    v[0] = C64::new(h, 0.0);
    v[2] = C64::new(0.0, h);
    out.push(PureState::new(sys, v)?);
    Ok(out)
}

fn c2() -> Check {
    let mut detail = Vec::new();
    let mut ok = true;
    for (t, n, q) in [(2usize, 3usize, 3u32), (3, 5, 5)] {
        let s = quantum_shamir(t, n, q)?;
        let mut fid_err = 0.0f64;
        for p in PartySet::all(n).filter(|p| p.len() == t) {
            fid_err = fid_err.max((code_fidelity(&s, p)? - 1.0).abs());
        }
        let secrets = c2_secrets(q as usize)?;
        let mut dist = 0.0f64;
        for i in 0..n {
            let p = PartySet::from_parties(&[i]);
            let reduced: Vec<DensityMatrix> = secrets
                .iter()
                .map(|sec| s.encode(sec, &[0]).and_then(|e| Ok(e.partial_trace(&s.held_registers(p))?)))
                .collect::<Result<_, _>>()?;
            for a in 0..reduced.len() {
                for b in a + 1..reduced.len() {
                    dist = dist.max(trace_distance(&reduced[a], &reduced[b])?);
                }
            }
        }
        ok &= fid_err <= 1e-9 && dist <= 1e-10;
        detail.push(format!("(({t},{n})) GF({q}): fidelity error {fid_err:.1e}, single-share distance {dist:.1e}"));
    }
    Ok((ok, detail.join("; ")))
}

fn c3() -> Check {
    let f3 = Field::prime(3)?;
    let rs = rs_code(f3, 3, 2, None)?;
    let css = css_build(&rs, &rs)?;
    let dim = css.logical_dim();
    let proj = |m: &CMatrix| {
        let mut p = CMatrix::zeros(m.rows(), m.rows());
        for i in 0..m.cols() {
            let col = m.column(i);
            p = p.add(&CMatrix::outer(&col, &col));
        }
        p
    };
    let sh = quantum_shamir(2, 3, 3)?;
    let diff = proj(css.blocks()[0].encoder.matrix()).max_abs_diff(&proj(sh.blocks()[0].encoder.matrix()));
    let enc = &css.blocks()[0].encoder;
    let mut single = 0.0f64;
    for e in 0..3 {
        single = single.max(kl_check(enc, &[e])?).max(kl_diagnostic(enc, &[e])?);
    }
    let mut double = f64::INFINITY;
    for pair in [[0, 1], [0, 2], [1, 2]] {
        double = double.min(kl_check(enc, &pair)?);
    }
    Ok((
        dim == 3 && diff <= 1e-10 && single <= 1e-12 && double > 0.1,
        format!("logical dim {dim} (want 3), projector diff {diff:.1e}, single-erasure KL {single:.1e}, double-erasure KL >= {double:.3}"),
    ))
}

fn heavy4() -> Result<AccessStructure, Error> {
    Ok(AccessStructure::from_min_sets(4, vec![set(&[1, 2, 3]), set(&[2, 3, 4])])?)
}

/// Worst exact privacy distance over unauthorized nonempty sets, and their count.
fn worst_privacy(s: &QssScheme, hybrid: bool) -> Result<(f64, usize, bool), Error> {
    let fam = tomographic_family(s.secret_dim())?;
    let (mut worst, mut count, mut exact) = (0.0f64, 0, true);
    for p in nonempty(s.parties()).filter(|&p| !s.structure().eval(p)) {
        let r = verify_privacy(s, p, &fam, PrivacyMode::Exact, hybrid)?;
        worst = worst.max(r.max_distance);
        exact &= r.exact;
        count += 1;
    }
    Ok((worst, count, exact))
}

/// Largest `|1 - fidelity|` over authorized sets, and their count.
fn worst_correctness(s: &QssScheme, seed: u64) -> Result<(f64, usize), Error> {
    let (mut worst, mut count) = (0.0f64, 0);
    for p in nonempty(s.parties()).filter(|&p| s.structure().eval(p)) {
        worst = worst.max((verify_correctness(s, p, &RandomTape::Seed(seed))? - 1.0).abs());
        count += 1;
    }
    Ok((worst, count))
}

fn c4() -> Check {
    let s = compiler::heavy(&heavy4()?, SsKind::Formula, None)?;
    let qc_ok = s.qecc().name() == "shamir(3,4,5)";
    let (dist, unauth, exact) = worst_privacy(&s, false)?;
    let (fid, auth) = worst_correctness(&s, 4)?;
    Ok((
        qc_ok && exact && unauth == 12 && dist <= 1e-10 && fid <= 1e-8,
        format!("code {}, {unauth} unauthorized sets max distance {dist:.1e} (tol 1e-10, exact={exact}), {auth} authorized sets fidelity error {fid:.1e} (tol 1e-8)", s.qecc().name()),
    ))
}

fn c5() -> Check {
    let f4 = heavy4()?;
    let mut ok = true;
    let mut detail = Vec::new();
    for eps in [0.0, 0.25, 0.5] {
        let s = compiler::heavy(&f4, SsKind::Leaky(eps), None)?;
        let (worst, _, exact) = worst_privacy(&s, false)?;
        ok &= exact && worst >= eps - 1e-9 && worst <= 2.0 * eps + 1e-9;
        detail.push(format!("eps={eps}: {worst:.6} in [{eps}, {}]", 2.0 * eps));
    }
    Ok((ok, detail.join(", ")))
}

fn and_th() -> Result<AccessStructure, Error> {
    let th = Gate::new(GateKind::Threshold(2), vec![Wire::Var(1), Wire::Var(2), Wire::Var(3)]);
    let and = Gate::new(GateKind::And, vec![Wire::Var(0), Wire::Gate(0)]);
    Ok(AccessStructure::from_circuit(MonotoneCircuit::new(4, vec![th, and], Wire::Gate(1))?))
}

fn c6() -> Check {
    let f = and_th()?;
    let hybrid = compiler::heavy(&f, SsKind::Yao { lambda: 1, backend: PrgBackend::Shake128 }, None)?;
    let (dist, unauth, exact) = worst_privacy(&hybrid, true)?;
    let real = compiler::heavy(&f, SsKind::Yao { lambda: 128, backend: PrgBackend::Shake128 }, None)?;
    let (fid, auth) = worst_correctness(&real, 6)?;
    Ok((
        exact && dist <= 1e-10 && fid <= 1e-8,
        format!("hybrid (lambda=1) {unauth} unauthorized sets max distance {dist:.1e} (tol 1e-10, exact={exact}); real PRG (lambda=128) {auth} authorized sets fidelity error {fid:.1e} (tol 1e-8)"),
    ))
}

/// Independent derivation of the long-message parameters: Newton's method
/// on `x ln x = T ln 2`, then the ceilings.
fn lemma3_oracle(n: u64, t: u64, m: u64) -> (u64, u32, u64, f64) {
    let target = 2.0 * (m * n) as f64 / (t as f64 - n as f64 / 2.0) * std::f64::consts::LN_2;
    let mut x = target.max(2.0);
    for _ in 0..200 {
        x -= (x * x.ln() - target) / (x.ln() + 1.0);
    }
    let c = ((x / n as f64).ceil() as u64).max(1);
    let big_n = c * n;
    let r = (big_n as f64).log2().ceil() as u32;
    let k = (big_n + m.div_ceil(u64::from(r))).div_ceil(2);
    (big_n, r, k, (big_n as f64 * f64::from(r)) / (m * n) as f64)
}

fn c7() -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, t) in [(3usize, 2usize), (5, 3), (7, 4)] {
        let m0 = m_min(n, t)?;
        let mut rows_ok = true;
        for m in m0 + 1..=m0 + 50 {
            let p = lemma3_params(n, t, m)?;
            let blocks = m.div_ceil(u64::from(p.r));
            let ineq = 2 * p.k >= p.big_n + blocks && p.big_n - p.k >= p.c * (n - t) as u64;
            let oracle = lemma3_oracle(n as u64, t as u64, m);
            rows_ok &= ineq && p.ok() && p.ratio() <= 32.0 / (2 * t - n) as f64 && (p.big_n, p.r, p.k) == (oracle.0, oracle.1, oracle.2);
        }
        ok &= rows_ok;
        detail.push(format!("({n},{t}) m_min={m0} sweep {}", if rows_ok { "ok" } else { "broken" }));
    }
    let p = lemma3_params(3, 2, 12)?;
    let (bn, r, k, ratio) = lemma3_oracle(3, 2, 12);
    let row = (p.big_n, p.r, p.k) == (bn, r, k) && (bn, r, k) == (30, 5, 17) && (p.ratio() - ratio).abs() < 1e-12 && (ratio - 4.1667).abs() < 5e-5;
    ok &= row;
    detail.push(format!("(3,2,12): N={} r={} K={} ratio={:.4}", p.big_n, p.r, p.k, p.ratio()));
    Ok((ok, detail.join(", ")))
}

fn c8() -> Check {
    let qc = multicopy_threshold(2, 4, 5)?;
    let one_each = (0..4).all(|i| qc.party_registers(i).len() == 1);
    let s = compiler::multicopy(2, 4, SsKind::Shamir, Some(5))?;
    let mut fid = 0.0f64;
    for p in PartySet::all(4).filter(|p| p.len() == 2) {
        fid = fid.max((verify_correctness(&s, p, &RandomTape::Seed(8))? - 1.0).abs());
    }
    let mut formula = true;
    for n in 1..=10usize {
        for t in 1..=n {
            formula &= copies_required(t, n) as i64 == 1.max(n as i64 - 2 * t as i64 + 2);
        }
    }
    Ok((
        qc.copies() == 2 && s.copies() == 2 && one_each && fid <= 1e-8 && formula,
        format!("copies {} (want 2), one qudit per party {one_each}, 2-subset fidelity error {fid:.1e} (tol 1e-8), copies_required formula {formula}", qc.copies()),
    ))
}

/// Every monotone function on `n <= 4` parties, by truth-table enumeration.
pub fn monotone_functions(n: usize) -> Result<Vec<AccessStructure>, Error> {
    let size = 1usize << n;
    let mut out = Vec::new();
    for bits in 0u64..(1 << size) {
        let table: Vec<bool> = (0..size).map(|i| (bits >> i) & 1 == 1).collect();
        let monotone = (0..size).all(|p| (0..n).all(|i| !table[p] || table[p | (1 << i)]));
        if monotone {
            out.push(AccessStructure::from_truth_table(n, table)?);
        }
    }
    Ok(out)
}

fn describe(f: &AccessStructure) -> Result<String, Error> {
    let sets: Vec<String> = f.min_sets()?.iter().map(|s| s.to_string()).collect();
    Ok(format!("minsets{{{}}}", sets.join(",")))
}

fn c9() -> Check {
    let fs = monotone_functions(3)?;
    let mut failed = Vec::new();
    for f in &fs {
        let check = || -> Result<Vec<String>, Error> {
            let mut why = Vec::new();
            let lifted = prop1_lift(f)?;
            let a = lifted.analyze(None)?;
            if !a.heavy {
                why.push(format!("lift not heavy (t={:?} of 6)", a.heaviness));
            }
            if !a.no_cloning {
                why.push(String::from("lift not no-cloning"));
            }
            let field = MonotoneSpanProgram::canonical_field(&lifted)?;
            let m_prime = MonotoneSpanProgram::canonical(&lifted, field)?;
            let m = prop1_msp_stack(&m_prime, f)?;
            let wrong: Vec<String> = PartySet::all(3).filter(|&p| m.accepts(p) != f.eval(p)).map(|p| p.to_string()).collect();
            if !wrong.is_empty() {
                why.push(format!("stacked program wrong on {}", wrong.join(" ")));
            }
            if m.size() > 2 * 3 * m_prime.size() {
                why.push(format!("{} rows > {}", m.size(), 6 * m_prime.size()));
            }
            Ok(why)
        };
        match check() {
            Ok(why) if why.is_empty() => {}
            Ok(why) => failed.push(format!("{}: {}", describe(f)?, why.join(", "))),
            Err(e) => failed.push(format!("{}: {e}", describe(f)?)),
        }
    }
    let detail = if failed.is_empty() {
        format!("{} monotone functions: all lifts heavy and no-cloning, stacked programs compute f", fs.len())
    } else {
        format!("{} monotone functions, {} fail: {}", fs.len(), failed.len(), failed.join("; "))
    };
    Ok((fs.len() == 20 && failed.is_empty(), detail))
}

fn c10() -> Check {
    let tree = prop6_build(&AccessStructure::threshold(5, 9)?)?;
    let parties = tree.structure.parties();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ok = true;
    for _ in 0..100 {
        let w = WeightFunction::new((0..parties).map(|_| rng.gen_range(1..=20)).collect())?;
        let x = prop6_witness(&w, &tree)?;
        ok &= tree.structure.eval(x) && 2 * w.weight_of(x) < w.total();
    }
    let u = WeightFunction::uniform(parties);
    let x = prop6_witness(&u, &tree)?;
    // k = 3 blocks; 2k/3 = 2 kept blocks keep 2 parties each
    let want = 2 * 2 * (tree.k as u64 / 3);
    let uniform = u.weight_of(x) == want && u.total() == 18 && tree.structure.eval(x);
    Ok((
        ok && uniform,
        format!("100 random weight functions {}, uniform witness weight {} vs W/2 = {}", if ok { "ok" } else { "violated" }, u.weight_of(x), u.total() / 2),
    ))
}

/// Random density matrix of random rank `1..=max_rank`.
fn random_rank(rng: &mut ChaCha8Rng, sys: RegisterSystem, max_rank: usize) -> Result<DensityMatrix, Error> {
    let rank = rng.gen_range(1..=max_rank);
    Ok(random_density(rng, sys, rank)?)
}

fn c11() -> Check {
    const TRIALS: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut slack = [f64::NEG_INFINITY; 5];
    let dims = |rng: &mut ChaCha8Rng| rng.gen_range(2..=4usize);
    for _ in 0..TRIALS {
        // (i) channel: isometry d -> d x e, environment discarded
        let d = dims(&mut rng);
        let e = rng.gen_range(1..=8 / d).max(1);
        let sys = RegisterSystem::from_dims(&[d])?;
        let (a, b) = (random_rank(&mut rng, sys.clone(), d)?, random_density(&mut rng, sys.clone(), d)?);
        let (fa, fb) = if e >= 2 {
            let v = random_isometry(&mut rng, vec![d], vec![d, e])?;
            (a.apply_isometry(&v, &[0])?.partial_trace(&[0])?, b.apply_isometry(&v, &[0])?.partial_trace(&[0])?)
        } else {
            let v = random_isometry(&mut rng, vec![d], vec![d])?;
            (a.apply_isometry(&v, &[0])?, b.apply_isometry(&v, &[0])?)
        };
        slack[0] = slack[0].max(trace_distance(&fa, &fb)? - trace_distance(&a, &b)?);

        // (ii) discarding a subsystem
        let (da, db) = (2usize, dims(&mut rng).min(4));
        let s2 = RegisterSystem::from_dims(&[da, db])?;
        let (r, s) = (random_rank(&mut rng, s2.clone(), da * db)?, random_density(&mut rng, s2, 3)?);
        let full = trace_distance(&r, &s)?;
        for keep in [[0usize], [1usize]] {
            slack[1] = slack[1].max(trace_distance(&r.partial_trace(&keep)?, &s.partial_trace(&keep)?)? - full);
        }

        // (iii) mixtures of ensembles
        let d = rng.gen_range(2..=8usize);
        let sys = RegisterSystem::from_dims(&[d])?;
        let k = rng.gen_range(2..=4usize);
        let weights = |rng: &mut ChaCha8Rng| {
            let w: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let t: f64 = w.iter().sum();
            w.into_iter().map(|x| x / t).collect::<Vec<_>>()
        };
        let (p, q) = (weights(&mut rng), weights(&mut rng));
        let rhos = (0..k).map(|_| random_rank(&mut rng, sys.clone(), d)).collect::<Result<Vec<_>, _>>()?;
        let sigmas = (0..k).map(|_| random_rank(&mut rng, sys.clone(), d)).collect::<Result<Vec<_>, _>>()?;
        let mix = |w: &[f64], xs: &[DensityMatrix]| DensityMatrix::mixture(&w.iter().copied().zip(xs.iter()).collect::<Vec<_>>());
        let lhs = trace_distance(&mix(&p, &rhos)?, &mix(&q, &sigmas)?)?;
        let delta = 0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>();
        let mut rhs = delta;
        for i in 0..k {
            rhs += p[i] * trace_distance(&rhos[i], &sigmas[i])?;
        }
        slack[2] = slack[2].max(lhs - rhs);

        // (v) common tensor factor
        let (d, e) = (dims(&mut rng), 2usize);
        let sys = RegisterSystem::from_dims(&[d])?;
        let (a, b) = (random_density(&mut rng, sys.clone(), d)?, random_density(&mut rng, sys, 1)?);
        let tau = random_rank(&mut rng, RegisterSystem::from_dims(&[e])?, e)?;
        slack[3] = slack[3].max((trace_distance(&a.tensor(&tau)?, &b.tensor(&tau)?)? - trace_distance(&a, &b)?).abs());

        // (vi) sub-additivity over tensor products
        let (d1, d2) = (2usize, dims(&mut rng));
        let s1 = RegisterSystem::from_dims(&[d1])?;
        let s2 = RegisterSystem::from_dims(&[d2])?;
        let (r1, q1) = (random_density(&mut rng, s1.clone(), 2)?, random_density(&mut rng, s1, 1)?);
        let (r2, q2) = (random_density(&mut rng, s2.clone(), d2)?, random_rank(&mut rng, s2, d2)?);
        let lhs = trace_distance(&r1.tensor(&r2)?, &q1.tensor(&q2)?)?;
        slack[4] = slack[4].max(lhs - trace_distance(&r1, &q1)? - trace_distance(&r2, &q2)?);
    }
    let ok = slack.iter().all(|&s| s <= 1e-9);
    Ok((
        ok,
        format!(
            "{TRIALS} trials each, worst violation: (i) {:.1e} (ii) {:.1e} (iii) {:.1e} (v) {:.1e} (vi) {:.1e} (tol 1e-9)",
            slack[0], slack[1], slack[2], slack[3], slack[4]
        ),
    ))
}

/// `Th_3^2(x1, x2, Th_3^2(x3, x4, x5))`.
pub fn depth2_tree() -> Result<MonotoneCircuit, Error> {
    let inner = Gate::new(GateKind::Threshold(2), vec![Wire::Var(2), Wire::Var(3), Wire::Var(4)]);
    let top = Gate::new(GateKind::Threshold(2), vec![Wire::Var(0), Wire::Var(1), Wire::Gate(0)]);
    Ok(MonotoneCircuit::new(5, vec![inner, top], Wire::Gate(1))?)
}

fn c12() -> Check {
    let s = compiler::tree(&depth2_tree()?, SsKind::Formula, None)?;
    let two_level = set(&[1, 4, 5]);
    let fid = (verify_correctness(&s, two_level, &RandomTape::Seed(12))? - 1.0).abs();
    let (all_fid, auth) = worst_correctness(&s, 12)?;
    let (dist, unauth, exact) = worst_privacy(&s, false)?;
    Ok((
        s.structure().eval(two_level) && fid <= 1e-8 && all_fid <= 1e-8 && exact && dist <= 1e-10,
        format!(
            "{{1,4,5}} fidelity error {fid:.1e}, {auth} authorized sets worst {all_fid:.1e} (tol 1e-8); {unauth} unauthorized sets max distance {dist:.1e} (tol 1e-10, exact={exact})"
        ),
    ))
}
