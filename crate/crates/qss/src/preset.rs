//! Preset strings: `kind:body;opt=val;..`.
//!
//! | kind        | body                         | default SS |
//! |-------------|------------------------------|------------|
//! | `perfect`   | structure                    | formula    |
//! | `yao`       | structure                    | yao        |
//! | `longmsg`   | `n,t,m`                      | shamir     |
//! | `multicopy` | `th(t,n)` or `t,n`           | shamir     |
//! | `weighted`  | structure, weights from `w=` or a top-level `wth(t; ..)` | formula |
//! | `tree`      | structure (a tree circuit)   | formula    |
//!
//! Options: `ss=formula|shamir|leaky:<eps>|yao`, `q=<prime>`, `lambda=<bits>`
//! (default 128), `prg=shake128|toy`, `w=<w1>,<w2>,..`, `n=<parties>`,
//! `l=<seed components>` (default 2). A structure body without brackets is
//! read as a structure file path.

use qss_core::access::{AccessStructure, GateKind, WeightFunction};
use qss_core::classical::PrgBackend;
use qss_core::compiler::{self, QssScheme, SsKind};

use crate::grammar::{is_expression, parse_expression, parse_file, split_options, ParsedStructure};
use crate::Error;

pub const DEFAULT_LAMBDA: usize = 128;
pub const DEFAULT_SEED_COMPONENTS: usize = 2;

#[derive(Debug, Default)]
struct Options {
    ss: Option<String>,
    q: Option<u32>,
    lambda: Option<usize>,
    prg: PrgBackend,
    w: Option<Vec<u32>>,
    n: Option<usize>,
    l: Option<usize>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Error> {
    v.parse().map_err(|_| Error::Preset(format!("option {key}: cannot parse '{v}'")))
}

fn options(opts: Vec<(String, String)>) -> Result<Options, Error> {
    let mut o = Options::default();
    for (k, v) in opts {
        match k.as_str() {
            "ss" => o.ss = Some(v),
            "q" => o.q = Some(parse_num(&k, &v)?),
            "lambda" => o.lambda = Some(parse_num(&k, &v)?),
            "prg" => {
                o.prg = match v.as_str() {
                    "shake128" => PrgBackend::Shake128,
                    "toy" => PrgBackend::ToyLcg,
                    _ => return Err(Error::Preset(format!("unknown prg '{v}'"))),
                }
            }
            "w" => o.w = Some(v.split(',').map(|x| parse_num(&k, x.trim())).collect::<Result<_, _>>()?),
            "n" => o.n = Some(parse_num(&k, &v)?),
            "l" => o.l = Some(parse_num(&k, &v)?),
            _ => return Err(Error::Preset(format!("unknown option '{k}'"))),
        }
    }
    Ok(o)
}

fn ss_kind(o: &Options, default: &str) -> Result<SsKind, Error> {
    let s = o.ss.as_deref().unwrap_or(default);
    Ok(match s {
        "formula" => SsKind::Formula,
        "shamir" => SsKind::Shamir,
        "yao" => SsKind::Yao { lambda: o.lambda.unwrap_or(DEFAULT_LAMBDA), backend: o.prg },
        _ => match s.strip_prefix("leaky:") {
            Some(eps) => SsKind::Leaky(parse_num("ss", eps)?),
            None => return Err(Error::Preset(format!("unknown SS kind '{s}'"))),
        },
    })
}

/// Parses a structure given inline or as a file path.
pub fn load_structure(body: &str, n: Option<usize>) -> Result<ParsedStructure, Error> {
    if is_expression(body) {
        return Ok(parse_expression(body, n)?);
    }
    let src = std::fs::read_to_string(body).map_err(|e| Error::Io { path: body.to_string(), source: e })?;
    let parsed = parse_file(&src).map_err(|e| Error::File { path: body.to_string(), source: e })?;
    if let Some(n) = n {
        if n != parsed.structure.parties() {
            return Err(Error::Preset(format!("n={n} but {body} declares {} parties", parsed.structure.parties())));
        }
    }
    Ok(parsed)
}

fn threshold_args(body: &str, n: Option<usize>) -> Result<(usize, usize), Error> {
    if is_expression(body) {
        let parsed = parse_expression(body, n)?;
        let f = parsed.structure;
        let c = f.circuit().ok_or_else(|| Error::Preset(String::from("expected th(t,n)")))?;
        if let [g] = c.gates() {
            if let GateKind::Threshold(t) = g.kind {
                if g.inputs.len() == f.parties() {
                    return Ok((t as usize, f.parties()));
                }
            }
        }
        return Err(Error::Preset(String::from("expected th(t,n)")));
    }
    let v: Vec<usize> = body.split(',').map(|x| parse_num("body", x.trim())).collect::<Result<_, _>>()?;
    match v[..] {
        [t, n] => Ok((t, n)),
        _ => Err(Error::Preset(String::from("expected t,n"))),
    }
}

/// Builds the scheme named by `spec`; the scheme's name is `spec` itself.
pub fn preset(spec: &str) -> Result<QssScheme, Error> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Preset(format!("'{spec}': expected kind:body")))?;
    let (body, opts) = split_options(rest);
    let o = options(opts)?;
    let scheme = match kind {
        "perfect" => compiler::heavy(&load_structure(&body, o.n)?.structure, ss_kind(&o, "formula")?, o.q)?,
        "yao" => compiler::heavy(&load_structure(&body, o.n)?.structure, ss_kind(&o, "yao")?, o.q)?,
        "longmsg" => {
            let v: Vec<u64> = body.split(',').map(|x| parse_num("body", x.trim())).collect::<Result<_, _>>()?;
            let [n, t, m] = v[..] else {
                return Err(Error::Preset(String::from("longmsg expects n,t,m")));
            };
            if o.ss.as_deref().is_some_and(|s| s != "shamir") {
                return Err(Error::Preset(String::from("longmsg uses shamir SS")));
            }
            compiler::long_message(n as usize, t as usize, m, o.l.unwrap_or(DEFAULT_SEED_COMPONENTS), o.prg)?
        }
        "multicopy" => {
            let (t, n) = threshold_args(&body, o.n)?;
            compiler::multicopy(t, n, ss_kind(&o, "shamir")?, o.q)?
        }
        "weighted" => {
            let parsed = load_structure(&body, o.n)?;
            let w = match (&o.w, parsed.weights) {
                (Some(w), _) => WeightFunction::new(w.clone())?,
                (None, Some(w)) => w,
                (None, None) => return Err(Error::Preset(String::from("weighted needs w=.. or a wth(t; ..) body"))),
            };
            compiler::weighted(&parsed.structure, &w, ss_kind(&o, "formula")?, o.q)?
        }
        "tree" => {
            let f: AccessStructure = load_structure(&body, o.n)?.structure;
            let c = match f.circuit() {
                Some(c) => c.clone(),
                None => f.to_circuit()?,
            };
            compiler::tree(&c, ss_kind(&o, "formula")?, o.q)?
        }
        _ => return Err(Error::Preset(format!("unknown preset kind '{kind}'"))),
    };
    Ok(scheme.with_name(spec.to_string()))
}
