//! Derivation scripts (`.gli`), one step per line:
//!
//! ```text
//! K 3
//! BASE L4 p7_t4.hg r={1:s,2:t} b={1:d,2:b,3:a} g={1:3,2:2}
//! RMR L4r L4 {1}
//! RMB L4b L4r {3}
//! GLUE L2 L4b L5b
//! TRANS T L2 f={1:2}
//! ```
//!
//! `K` is optional when the caller supplies `k`. Hypergraph paths are
//! resolved by the caller, usually relative to the script.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::derivation::{derive_base, derive_glue, derive_remove_blue, derive_remove_red, derive_transition, Derivation};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::kli::{KLabeledIncidenceGraph, TransitionFn};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptStep {
    Base { name: String, file: String, red: Vec<(usize, String)>, blue: Vec<(usize, String)>, guard: Vec<(usize, usize)> },
    Glue { name: String, left: String, right: String },
    Trans { name: String, child: String, f: Vec<(usize, usize)> },
    RemoveRed { name: String, child: String, labels: BTreeSet<usize> },
    RemoveBlue { name: String, child: String, labels: BTreeSet<usize> },
}

impl ScriptStep {
    pub fn name(&self) -> &str {
        match self {
            ScriptStep::Base { name, .. }
            | ScriptStep::Glue { name, .. }
            | ScriptStep::Trans { name, .. }
            | ScriptStep::RemoveRed { name, .. }
            | ScriptStep::RemoveBlue { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub k: Option<usize>,
    pub steps: Vec<(usize, ScriptStep)>,
}

/// Result of replaying one step.
#[derive(Clone, Debug)]
pub struct StepReport {
    pub line: usize,
    pub name: String,
    pub cost: usize,
    pub derivation: Arc<Derivation>,
}

fn map_body(s: &str) -> Option<&str> {
    s.strip_prefix('{')?.strip_suffix('}')
}

fn pairs<'a>(s: &'a str, key: &str) -> std::result::Result<Vec<(&'a str, &'a str)>, String> {
    let body = s.strip_prefix(key).and_then(|x| x.strip_prefix('=')).and_then(map_body).ok_or_else(|| format!("expected {key}={{...}}"))?;
    body.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.split_once(':').map(|(a, b)| (a.trim(), b.trim())).ok_or_else(|| format!("expected `i:x` in {key}, got `{x}`")))
        .collect()
}

fn num(s: &str) -> std::result::Result<usize, String> {
    s.parse().map_err(|_| format!("`{s}` is not a number"))
}

fn label_set(s: &str) -> std::result::Result<BTreeSet<usize>, String> {
    map_body(s).ok_or("expected {i,...}")?.split(',').map(str::trim).filter(|x| !x.is_empty()).map(num).collect()
}

pub fn parse_script(text: &str) -> Result<Script> {
    let mut k = None;
    let mut steps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Format { line: n + 1, msg };
        let words: Vec<&str> = line.split_whitespace().collect();
        let need = |c: usize| if words.len() == c { Ok(()) } else { Err(err(format!("`{}` takes {} fields", words[0], c - 1))) };
        let step = match words[0] {
            "K" => {
                need(2)?;
                k = Some(num(words[1]).map_err(err)?);
                continue;
            }
            "BASE" => {
                need(6)?;
                let red = pairs(words[3], "r").map_err(err)?;
                let blue = pairs(words[4], "b").map_err(err)?;
                let guard = pairs(words[5], "g").map_err(err)?;
                ScriptStep::Base {
                    name: words[1].into(),
                    file: words[2].into(),
                    red: red
                        .into_iter()
                        .map(|(i, v)| Ok((num(i)?, v.to_string())))
                        .collect::<std::result::Result<_, String>>()
                        .map_err(err)?,
                    blue: blue
                        .into_iter()
                        .map(|(j, e)| Ok((num(j)?, e.to_string())))
                        .collect::<std::result::Result<_, String>>()
                        .map_err(err)?,
                    guard: guard
                        .into_iter()
                        .map(|(i, j)| Ok((num(i)?, num(j)?)))
                        .collect::<std::result::Result<_, String>>()
                        .map_err(err)?,
                }
            }
            "GLUE" => {
                need(4)?;
                ScriptStep::Glue { name: words[1].into(), left: words[2].into(), right: words[3].into() }
            }
            "TRANS" => {
                need(4)?;
                let f = pairs(words[3], "f").map_err(err)?;
                ScriptStep::Trans {
                    name: words[1].into(),
                    child: words[2].into(),
                    f: f.into_iter().map(|(i, j)| Ok((num(i)?, num(j)?))).collect::<std::result::Result<_, String>>().map_err(err)?,
                }
            }
            "RMR" | "RMB" => {
                need(4)?;
                let labels = label_set(words[3]).map_err(|m| err(m.to_string()))?;
                let (name, child) = (words[1].to_string(), words[2].to_string());
                if words[0] == "RMR" {
                    ScriptStep::RemoveRed { name, child, labels }
                } else {
                    ScriptStep::RemoveBlue { name, child, labels }
                }
            }
            w => return Err(err(format!("unknown step `{w}`"))),
        };
        steps.push((n + 1, step));
    }
    Ok(Script { k, steps })
}

/// Replays a script. `k` overrides the script's own `K` line; `load`
/// resolves the hypergraph files named by base steps.
pub fn replay(script: &Script, k: Option<usize>, mut load: impl FnMut(&str) -> Result<Hypergraph>) -> Result<Vec<StepReport>> {
    let k = k.or(script.k).ok_or_else(|| Error::InvalidArgument("no k given (add a `K <n>` line or pass k)".into()))?;
    let mut named: BTreeMap<String, Arc<Derivation>> = BTreeMap::new();
    let mut out = Vec::new();
    for (line, step) in &script.steps {
        let at = |e: Error| match e {
            Error::Format { .. } => e,
            other => Error::Format { line: *line, msg: other.to_string() },
        };
        let get = |n: &String| named.get(n).cloned().ok_or_else(|| Error::Format { line: *line, msg: format!("unknown derivation `{n}`") });
        let d = match step {
            ScriptStep::Base { file, red, blue, guard, .. } => {
                let sk = load(file).map_err(at)?.to_incidence();
                let red: Vec<(usize, &str)> = red.iter().map(|(i, v)| (*i, v.as_str())).collect();
                let blue: Vec<(usize, &str)> = blue.iter().map(|(j, e)| (*j, e.as_str())).collect();
                let l = KLabeledIncidenceGraph::from_ids(sk, k, &red, &blue, guard).map_err(at)?;
                derive_base(l).map_err(at)?
            }
            ScriptStep::Glue { left, right, .. } => derive_glue(get(left)?, get(right)?).map_err(at)?,
            ScriptStep::Trans { child, f, .. } => derive_transition(get(child)?, TransitionFn::new(f)).map_err(at)?,
            ScriptStep::RemoveRed { child, labels, .. } => derive_remove_red(get(child)?, labels.clone()).map_err(at)?,
            ScriptStep::RemoveBlue { child, labels, .. } => derive_remove_blue(get(child)?, labels.clone()).map_err(at)?,
        };
        let name = step.name().to_string();
        if named.contains_key(&name) {
            return Err(Error::Format { line: *line, msg: format!("derivation `{name}` defined twice") });
        }
        let d = Arc::new(d);
        named.insert(name.clone(), d.clone());
        out.push(StepReport { line: *line, name, cost: d.cost(), derivation: d });
    }
    Ok(out)
}
