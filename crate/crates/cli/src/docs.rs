//! Reading and writing the JSON documents the commands exchange.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use sdof_core::chansim::Scenario;
use sdof_core::{ChannelSet, Error, PrecoderPair};

/// Exit code and message for a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure { code: 2, message }
    }

    pub fn io(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TargetInfeasible { .. } => 3,
            Error::ConstructionDeficit(_) => 4,
            Error::DimensionMismatch(_)
            | Error::OutOfRange(_)
            | Error::InvalidScenario(_)
            | Error::DegenerateInput(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Accepts either the bare document or one nested under `key`.
fn load_nested<T: DeserializeOwned>(path: &Path, key: &str) -> Result<T, Failure> {
    let mut v = read_value(path)?;
    if let Some(inner) = v.get_mut(key) {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(|e| {
        Failure::usage(format!(
            "{}: not a valid {key} document: {e}",
            path.display()
        ))
    })
}

pub fn load_channels(path: &Path) -> Result<ChannelSet, Failure> {
    let ch: ChannelSet = load_nested(path, "channels")?;
    ch.config()?;
    Ok(ch)
}

pub fn load_precoder(path: &Path) -> Result<PrecoderPair, Failure> {
    let pair: PrecoderPair = load_nested(path, "precoder")?;
    if !(pair.power.is_finite() && pair.power > 0.0) {
        return Err(Failure::usage(format!(
            "{}: power must be positive, got {}",
            path.display(),
            pair.power
        )));
    }
    Ok(pair)
}

/// The scenario and whether it names its own seed.
pub fn load_scenario(path: &Path) -> Result<(Scenario, bool), Failure> {
    let v = read_value(path)?;
    let has_seed = v.get("seed").is_some();
    let sc = serde_json::from_value(v)
        .map_err(|e| Failure::usage(format!("{}: not a valid scenario: {e}", path.display())))?;
    Ok((sc, has_seed))
}

pub fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("json value serialises");
    fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}
