//! Run configuration: `key=value` text (whitespace or newline separated,
//! `#` comments) or a flat JSON object.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{equilibrium, Lyapunov, ModelParams, State};
use crate::simulate::{ProcessTag, Sampler, SimOptions, DEFAULT_MAX_EVENTS};

pub const KEYS: &[&str] = &[
    "b", "d", "c", "B", "r", "D", "C", "m", "epsilon", "process", "K", "n0", "h0", "T", "replicas", "seed",
    "N_max", "bins", "sampler", "max_events", "lyapunov", "gamma", "n_grid", "h_grid", "h_steps", "target_n",
    "target_hlo", "target_hhi", "times", "za_n", "za_h", "zb_n", "zb_h", "epsilons", "window_start", "window_end",
    "tol", "tv_tol",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Pdmp,
    Ibm,
    Averaged,
}

/// Predator binning: centered on the equilibria, or `uniform:<h_max>:<count>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinsKind {
    Equilibrium,
    Uniform { h_max: f64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub process: ProcessKind,
    #[serde(rename = "K")]
    pub k: Option<u64>,
    pub n0: u64,
    pub h0: f64,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub replicas: u64,
    pub seed: Option<u64>,
    #[serde(rename = "N_max")]
    pub n_max: u64,
    pub bins: BinsKind,
    pub sampler: Sampler,
    pub max_events: u64,
    pub lyapunov: Lyapunov,
    pub gamma: f64,
    pub n_grid: u64,
    pub h_grid: f64,
    pub h_steps: usize,
    pub target_n: Option<u64>,
    pub target_hlo: Option<f64>,
    pub target_hhi: Option<f64>,
    pub times: Vec<f64>,
    pub za: State,
    pub zb: State,
    pub epsilons: Vec<f64>,
    pub window_start: f64,
    pub window_end: Option<f64>,
    pub tol: f64,
    pub tv_tol: f64,
}

impl RunConfig {
    pub fn initial(&self) -> State {
        State::new(self.n0, self.h0)
    }

    pub fn process_tag(&self) -> Result<ProcessTag> {
        Ok(match self.process {
            ProcessKind::Pdmp => ProcessTag::Pdmp,
            ProcessKind::Averaged => ProcessTag::Averaged,
            ProcessKind::Ibm => ProcessTag::Ibm {
                k: self.k.ok_or_else(|| cfg_err("K", "required when process=ibm"))?,
            },
        })
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            max_events: self.max_events,
            sampler: self.sampler,
        }
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| cfg_err("seed", "required for stochastic commands"))
    }

    pub fn require_horizon(&self) -> Result<f64> {
        self.horizon.ok_or_else(|| cfg_err("T", "required for this command"))
    }
}

fn cfg_err(key: &str, constraint: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        constraint: constraint.into(),
    }
}

/// Splits configuration text into raw `key -> value` pairs.
///
/// Later occurrences of a key override earlier ones.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let trimmed = text.trim();
    let mut out = BTreeMap::new();
    if trimmed.starts_with('{') {
        let doc: serde_json::Map<String, serde_json::Value> = serde_json::from_str(trimmed)
            .map_err(|e| cfg_err("<document>", format!("not a flat JSON object: {e}")))?;
        for (k, v) in doc {
            let value = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Array(items) => items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                other => return Err(cfg_err(&k, format!("unsupported value {other}"))),
            };
            out.insert(k, value);
        }
        return Ok(out);
    }
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| cfg_err(token, "expected key=value"))?;
            out.insert(k.to_string(), v.to_string());
        }
    }
    Ok(out)
}

struct Fields {
    map: BTreeMap<String, String>,
}

impl Fields {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| cfg_err(key, format!("expected a finite number, got `{v}`")))
            })
            .transpose()
    }

    fn u64(&self, key: &str) -> Result<Option<u64>> {
        self.raw(key)
            .map(|v| v.parse::<u64>().map_err(|_| cfg_err(key, format!("expected a nonnegative integer, got `{v}`"))))
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| cfg_err(key, format!("expected comma-separated numbers, got `{v}`")))
                    })
                    .collect()
            })
            .transpose()
    }
}

fn param_error(e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, constraint, value } => cfg_err(name, format!("{constraint} (got {value})")),
        other => other,
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    config_from_pairs(parse_pairs(text)?)
}

/// Validates raw pairs and applies defaults.
pub fn config_from_pairs(map: BTreeMap<String, String>) -> Result<RunConfig> {
    if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(cfg_err(unknown, "unknown key"));
    }
    let f = Fields { map };
    let required = |key: &'static str| -> Result<f64> { f.f64(key)?.ok_or_else(|| cfg_err(key, "required")) };

    let params = ModelParams {
        prey_birth: required("b")?,
        prey_death: f.f64("d")?.unwrap_or(0.0),
        prey_competition: required("c")?,
        predation: f.f64("B")?.unwrap_or(0.0),
        conversion: required("r")?,
        predator_death: f.f64("D")?.unwrap_or(0.0),
        predator_competition: required("C")?,
        migration: f.f64("m")?.unwrap_or(0.0),
        epsilon: f.f64("epsilon")?.unwrap_or(1.0),
    };
    params.validate().map_err(param_error)?;

    let process = match f.raw("process").unwrap_or("pdmp") {
        "pdmp" => ProcessKind::Pdmp,
        "ibm" => ProcessKind::Ibm,
        "averaged" => ProcessKind::Averaged,
        other => return Err(cfg_err("process", format!("one of pdmp|ibm|averaged, got `{other}`"))),
    };
    let k = f.u64("K")?;
    if process == ProcessKind::Ibm && k.unwrap_or(0) == 0 {
        return Err(cfg_err("K", "required and >= 1 when process=ibm"));
    }

    let n0 = f.u64("n0")?.unwrap_or(1);
    let h0 = f.f64("h0")?.unwrap_or_else(|| equilibrium(&params, n0));
    State::new(n0, h0)
        .validate(&params)
        .map_err(|e| cfg_err("n0", e.to_string()))?;

    let horizon = f.f64("T")?;
    if let Some(t) = horizon {
        if !(t > 0.0) {
            return Err(cfg_err("T", "must be > 0"));
        }
    }
    let replicas = f.u64("replicas")?.unwrap_or(1);
    if replicas == 0 {
        return Err(cfg_err("replicas", "must be >= 1"));
    }
    let n_max = f.u64("N_max")?.unwrap_or(200);
    if n_max < 2 {
        return Err(cfg_err("N_max", "must be >= 2"));
    }
    let bins = match f.raw("bins").unwrap_or("equilibrium") {
        "equilibrium" => BinsKind::Equilibrium,
        other => {
            let parts: Vec<&str> = other.split(':').collect();
            match parts.as_slice() {
                ["uniform", h, n] => match (h.parse::<f64>(), n.parse::<usize>()) {
                    (Ok(h_max), Ok(count)) if h_max > 0.0 && count > 0 => BinsKind::Uniform { h_max, count },
                    _ => return Err(cfg_err("bins", "uniform:<h_max>0>:<count>=1>")),
                },
                _ => return Err(cfg_err("bins", format!("`equilibrium` or `uniform:<h_max>:<count>`, got `{other}`"))),
            }
        }
    };
    let sampler = match f.raw("sampler").unwrap_or("thinning") {
        "thinning" => Sampler::Thinning,
        "inversion" => Sampler::Inversion,
        other => return Err(cfg_err("sampler", format!("thinning|inversion, got `{other}`"))),
    };
    let max_events = f.u64("max_events")?.unwrap_or(DEFAULT_MAX_EVENTS);
    let lyapunov = match f.raw("lyapunov").unwrap_or("v") {
        "v" | "V" => Lyapunov::V,
        "w" | "W" => Lyapunov::W,
        other => return Err(cfg_err("lyapunov", format!("v|w, got `{other}`"))),
    };
    let gamma = f.f64("gamma")?.unwrap_or(0.1);
    if !(gamma > 0.0) {
        return Err(cfg_err("gamma", "must be > 0"));
    }
    let n_grid = f.u64("n_grid")?.unwrap_or(500);
    let h_grid = f.f64("h_grid")?.unwrap_or(500.0);
    let h_steps = f.u64("h_steps")?.unwrap_or(1000) as usize;
    if n_grid < 2 || !(h_grid > 0.0) || h_steps < 2 {
        return Err(cfg_err("n_grid", "drift grid needs n_grid >= 2, h_grid > 0, h_steps >= 2"));
    }
    let times = f.list("times")?.unwrap_or_else(|| vec![5.0, 10.0, 20.0, 40.0]);
    if times.is_empty() || times.iter().any(|t| !(*t > 0.0)) {
        return Err(cfg_err("times", "all times must be > 0"));
    }
    let za = State::new(f.u64("za_n")?.unwrap_or(1), f.f64("za_h")?.unwrap_or(2.0));
    let zb = State::new(f.u64("zb_n")?.unwrap_or(30), f.f64("zb_h")?.unwrap_or(10.0));
    for (key, z) in [("za_n", za), ("zb_n", zb)] {
        z.validate(&params).map_err(|e| cfg_err(key, e.to_string()))?;
    }
    let epsilons = f.list("epsilons")?.unwrap_or_else(|| vec![1.0, 0.1, 1e-3]);
    if epsilons.is_empty() || epsilons.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        return Err(cfg_err("epsilons", "each epsilon must lie in (0, 1]"));
    }
    let window_start = f.f64("window_start")?.unwrap_or(0.0);
    let window_end = f.f64("window_end")?;
    let tol = f.f64("tol")?.unwrap_or(0.1);
    let tv_tol = f.f64("tv_tol")?.unwrap_or(0.1);

    Ok(RunConfig {
        params,
        process,
        k,
        n0,
        h0,
        horizon,
        replicas,
        seed: f.u64("seed")?,
        n_max,
        bins,
        sampler,
        max_events,
        lyapunov,
        gamma,
        n_grid,
        h_grid,
        h_steps,
        target_n: f.u64("target_n")?,
        target_hlo: f.f64("target_hlo")?,
        target_hhi: f.f64("target_hhi")?,
        times,
        za,
        zb,
        epsilons,
        window_start,
        window_end,
        tol,
        tv_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_line() {
        let cfg = parse_config("b=0.4 d=0 c=0.005 B=0.02 r=2 D=0 C=0.04").unwrap();
        assert_eq!(cfg.params, ModelParams::benchmark());
        assert_eq!(cfg.n_max, 200);
        assert_eq!(cfg.params.epsilon, 1.0);
        assert_eq!(cfg.params.migration, 0.0);
    }

    #[test]
    fn empty_input_rejected() {
        match parse_config("").unwrap_err() {
            Error::Config { key, .. } => assert_eq!(key, "b"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn epsilon_out_of_range() {
        let err = parse_config("b=0.4 c=0.005 B=0.02 r=2 C=0.04 epsilon=1.5").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("epsilon") && msg.contains("(0, 1]"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_and_malformed_keys() {
        assert!(parse_config("b=0.4 c=0.005 r=2 C=0.04 bogus=1").unwrap_err().to_string().contains("bogus"));
        assert!(parse_config("b=0.4 c=0.005 r=2 C=0.04 T=abc").unwrap_err().to_string().contains("`T`"));
        assert!(parse_config("b=0.4 c=0.005 r=2 C=0.04 process=ibm").is_err());
    }

    #[test]
    fn multiline_comments_and_json() {
        let text = "# reference community\nb=0.4 c=0.005\nB=0.02 r=2 # conversion\nC=0.04\nepsilons=1,0.5\n";
        let a = parse_config(text).unwrap();
        assert_eq!(a.epsilons, vec![1.0, 0.5]);
        let b = parse_config(r#"{"b":0.4,"c":0.005,"B":0.02,"r":2,"C":0.04,"epsilons":[1,0.5]}"#).unwrap();
        assert_eq!(a, b);
    }
}
