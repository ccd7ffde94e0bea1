//! Line-oriented scenario files.
//!
//! ```text
//! # anything after a hash is a comment
//! channel siso
//! bits 2.8
//! label two packet benchmark
//! arrival 0 2
//! arrival 1 4
//! ```
//!
//! `channel` and `bits` appear exactly once, `label` at most once, and at
//! least one `arrival <time> <energy>` line follows with strictly
//! increasing times. Every complaint carries the offending line number.

use std::fmt;

use ehsched::{Arrival, ChannelModel, EnergyTrace};

#[derive(Debug)]
pub struct Scenario {
    pub label: Option<String>,
    pub trace: EnergyTrace,
}

#[derive(Debug)]
pub struct ScenarioError {
    /// 1-based line the problem sits on; `None` for whole-file problems
    /// like a missing directive.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ScenarioError {}

fn number(token: &str, what: &str) -> Result<f64, String> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("{what} must be a finite number, got '{token}'")),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut channel: Option<ChannelModel> = None;
    let mut bits: Option<f64> = None;
    let mut label: Option<String> = None;
    let mut arrivals: Vec<Arrival> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let at = |message: String| ScenarioError { line: Some(n), message };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match key {
            "channel" => {
                if channel.is_some() {
                    return Err(at("duplicate 'channel' directive".into()));
                }
                channel = Some(match rest.as_slice() {
                    ["siso"] => ChannelModel::Siso,
                    ["gmac"] => ChannelModel::Gmac,
                    _ => return Err(at("channel must be 'siso' or 'gmac'".into())),
                });
            }
            "bits" => {
                if bits.is_some() {
                    return Err(at("duplicate 'bits' directive".into()));
                }
                let [token] = rest.as_slice() else {
                    return Err(at("expected 'bits <amount>'".into()));
                };
                let value = number(token, "bits").map_err(at)?;
                if value <= 0.0 {
                    return Err(at(format!("bits must be positive, got {value}")));
                }
                bits = Some(value);
            }
            "label" => {
                if label.is_some() {
                    return Err(at("duplicate 'label' directive".into()));
                }
                let text = line["label".len()..].trim();
                if text.is_empty() {
                    return Err(at("label must not be empty".into()));
                }
                label = Some(text.to_string());
            }
            "arrival" => {
                let [t, e] = rest.as_slice() else {
                    return Err(at("expected 'arrival <time> <energy>'".into()));
                };
                let time = number(t, "arrival time").map_err(&at)?;
                let energy = number(e, "arrival energy").map_err(&at)?;
                if time < 0.0 {
                    return Err(at(format!("arrival time must not be negative, got {time}")));
                }
                if let Some(prev) = arrivals.last() {
                    if time <= prev.time {
                        return Err(at(format!(
                            "arrival times must increase, got {time} after {}",
                            prev.time
                        )));
                    }
                }
                if energy <= 0.0 {
                    return Err(at(format!("arrival energy must be positive, got {energy}")));
                }
                arrivals.push(Arrival { time, energy });
            }
            other => return Err(at(format!("unknown directive '{other}'"))),
        }
    }

    let whole = |message: &str| ScenarioError { line: None, message: message.into() };
    let channel = channel.ok_or_else(|| whole("missing 'channel' directive"))?;
    let bits = bits.ok_or_else(|| whole("missing 'bits' directive"))?;
    if arrivals.is_empty() {
        return Err(whole("need at least one 'arrival' line"));
    }
    let trace = EnergyTrace::new(channel, bits, arrivals)
        .map_err(|e| whole(&e.to_string()))?;
    Ok(Scenario { label, trace })
}
