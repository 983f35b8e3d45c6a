//! Run manifests and input loading. Every file read goes through [`Inputs`] so
//! its digest lands in the manifest.

use std::collections::BTreeMap;
use std::fs;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use workbench_core::machine::{encode_program, Program};
use workbench_core::ordinal::FiniteRelation;
use workbench_core::ProgramIndex;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub tool_version: &'static str,
    /// sha256 of each input file, keyed by the path as given.
    pub input_digests: BTreeMap<String, String>,
}

#[derive(Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &str) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        self.digests
            .insert(path.to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{path}: not UTF-8")))
    }

    /// A decimal index, or a program file (JSON if it starts with `{`, line
    /// format otherwise).
    pub fn program(&mut self, arg: &str) -> Result<ProgramIndex, CliError> {
        if !arg.is_empty() && arg.bytes().all(|b| b.is_ascii_digit()) {
            return Ok(ProgramIndex::new(arg.parse::<BigUint>().expect("digits")));
        }
        let text = self.read(arg)?;
        let program = if text.trim_start().starts_with('{') {
            let value: Value =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
            Program::from_json(&value)
        } else {
            Program::parse_text(&text)
        }
        .map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        Ok(encode_program(&program))
    }

    pub fn relation(&mut self, path: &str) -> Result<FiniteRelation, CliError> {
        self.read(path)?
            .parse()
            .map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }

    /// Inline JSON, or a file holding it.
    pub fn json(&mut self, arg: &str) -> Result<Value, CliError> {
        let text = match arg.trim_start().chars().next() {
            Some('{' | '"' | '[') => arg.to_string(),
            _ => self.read(arg)?,
        };
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad JSON: {e}")))
    }
}
