//! Deal files (JSON) and secret parsing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qss_core::classical::RandomTape;
use qss_core::compiler::Deal;
use qss_core::qsim::{PureState, RegisterSystem, C64};

use crate::Error;

pub const DEAL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TapeJson {
    Seed(u64),
    Explicit(Vec<u64>),
}

/// On-disk layout. Parties are numbered from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DealJson {
    version: u32,
    scheme: String,
    dims: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
    party_map: BTreeMap<usize, Vec<usize>>,
    environment: Vec<usize>,
    classical: BTreeMap<usize, String>,
    public: String,
    tape: TapeJson,
}

pub fn deal_to_json(deal: &Deal) -> String {
    let j = DealJson {
        version: DEAL_VERSION,
        scheme: deal.scheme.clone(),
        dims: deal.state.system().dims(),
        amplitudes: deal.state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        party_map: deal.party_map.iter().enumerate().map(|(i, r)| (i + 1, r.clone())).collect(),
        environment: deal.environment.clone(),
        classical: deal.classical.iter().enumerate().map(|(i, b)| (i + 1, hex::encode(b))).collect(),
        public: hex::encode(&deal.public),
        tape: match &deal.tape {
            RandomTape::Seed(s) => TapeJson::Seed(*s),
            RandomTape::Explicit(v) => TapeJson::Explicit(v.clone()),
        },
    };
    let mut s = serde_json::to_string_pretty(&j).expect("deal serializes");
    s.push('\n');
    s
}

fn bad(msg: impl Into<String>) -> Error {
    Error::DealFormat(msg.into())
}

/// Parties `1..=n` in order, with no gaps.
fn dense<T: Clone>(m: BTreeMap<usize, T>, what: &str) -> Result<Vec<T>, Error> {
    let mut out = Vec::with_capacity(m.len());
    for (k, (i, v)) in m.into_iter().enumerate() {
        if i != k + 1 {
            return Err(bad(format!("{what}: parties must be numbered 1..n, found {i}")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Reference registers are the ones no party or the environment owns.
pub fn deal_from_json(s: &str) -> Result<Deal, Error> {
    let j: DealJson = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
    if j.version != DEAL_VERSION {
        return Err(bad(format!("unsupported version {}", j.version)));
    }
    let system = RegisterSystem::from_dims(&j.dims)?;
    let amps = j.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
    let state = PureState::new(system, amps)?;
    let party_map = dense(j.party_map, "party_map")?;
    let classical = dense(j.classical, "classical")?
        .into_iter()
        .map(|h| hex::decode(h).map_err(|e| bad(format!("classical share: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if classical.len() != party_map.len() {
        return Err(bad("classical and party_map disagree on the party count"));
    }
    let public = hex::decode(&j.public).map_err(|e| bad(format!("public: {e}")))?;
    let regs = j.dims.len();
    let mut owned = vec![false; regs];
    for &r in party_map.iter().flatten().chain(&j.environment) {
        if r >= regs || owned[r] {
            return Err(bad(format!("register {r} out of range or owned twice")));
        }
        owned[r] = true;
    }
    let reference = (0..regs).filter(|&r| !owned[r]).collect();
    let tape = match j.tape {
        TapeJson::Seed(s) => RandomTape::Seed(s),
        TapeJson::Explicit(v) => RandomTape::Explicit(v),
    };
    Ok(Deal { scheme: j.scheme, state, party_map, environment: j.environment, reference, classical, public, tape })
}

/// `basis:<i>` or a comma separated amplitude list (`1`, `0.5+0.5i`, ..),
/// normalized.
pub fn parse_secret(s: &str, d: usize) -> Result<PureState, Error> {
    let system = RegisterSystem::from_dims(&[d])?;
    if let Some(i) = s.strip_prefix("basis:") {
        let i: usize = i.trim().parse().map_err(|_| Error::Usage(format!("bad basis index '{i}'")))?;
        if i >= d {
            return Err(Error::Usage(format!("basis index {i} outside dimension {d}")));
        }
        return Ok(PureState::basis(system, &[i])?);
    }
    let amps = s
        .split(',')
        .map(|a| a.trim().parse::<C64>().map_err(|_| Error::Usage(format!("bad amplitude '{a}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    if amps.len() != d {
        return Err(Error::Usage(format!("{} amplitudes for dimension {d}", amps.len())));
    }
    if amps.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1e-24 {
        return Err(Error::Usage(String::from("secret is the zero vector")));
    }
    Ok(PureState::normalized(system, amps)?)
}

/// `copies` copies of `secret` in registers `0..copies`.
pub fn tensor_power(secret: &PureState, copies: usize) -> Result<PureState, Error> {
    let mut st = secret.clone();
    for _ in 1..copies {
        st = st.tensor(secret)?;
    }
    Ok(st)
}
