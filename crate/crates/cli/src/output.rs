//! Payload routing and the reproducibility header.
//!
//! JSON payloads are objects carrying `schema_version` and a `run` block
//! (version, seed, config hash) next to the result fields. The header goes to
//! stderr so stdout holds only the payload.

use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Cli, Command, Failure, SCHEMA_VERSION};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub struct Emitter {
    name: &'static str,
    target: Option<PathBuf>,
    requested: Option<Format>,
    run: Value,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Fence(_) => "fence",
        Command::Certify(_) => "certify",
        Command::Mu(_) => "mu",
        Command::Recurrence(_) => "recurrence",
        Command::Rde(_) => "rde",
        Command::Census(_) => "census",
        Command::Delta(_) => "delta",
    }
}

fn seed_of(c: &Command) -> Option<u64> {
    match c {
        Command::Fence(a) => Some(a.seed),
        Command::Census(a) => Some(a.seed),
        Command::Rde(a) if a.sample.is_some() => Some(a.seed),
        _ => None,
    }
}

/// SHA-256 of the canonical JSON form of the subcommand and its flags,
/// truncated to 16 hex digits.
pub fn config_hash(c: &Command) -> String {
    let canon = serde_json::to_string(c).expect("flags serialize");
    hex::encode(&Sha256::digest(canon.as_bytes())[..8])
}

impl Emitter {
    pub fn new(cli: &Cli, command: &Command) -> Result<Self, Failure> {
        let name = command_name(command);
        let seed = seed_of(command);
        let hash = config_hash(command);
        let version = env!("CARGO_PKG_VERSION");
        eprintln!(
            "# frog {version} {name} seed={} config={hash}",
            seed.map_or("-".to_string(), |s| s.to_string())
        );
        let requested = cli.format;
        let ext = match requested {
            Some(Format::Csv) => "csv",
            Some(Format::Json) => "json",
            None if name == "fence" => "csv",
            None => "json",
        };
        let target = match (&cli.out, &cli.out_dir) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(dir)) => {
                std::fs::create_dir_all(dir)?;
                Some(dir.join(format!("{name}.{ext}")))
            }
            (None, None) => None,
        };
        Ok(Self {
            name,
            target,
            requested,
            run: json!({ "version": version, "seed": seed, "config_hash": hash }),
        })
    }

    pub fn format(&self, default: Format) -> Format {
        self.requested.unwrap_or(default)
    }

    pub fn json_only(&self) -> Result<(), Failure> {
        match self.requested {
            Some(Format::Csv) => Err(Failure::Usage(format!("--format csv: {} emits JSON only", self.name))),
            _ => Ok(()),
        }
    }

    pub fn json<T: Serialize>(&self, payload: &T) -> Result<(), Failure> {
        let value = serde_json::to_value(payload).map_err(|e| Failure::Resource(e.to_string()))?;
        let mut obj = serde_json::Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(self.name));
        obj.insert("run".into(), self.run.clone());
        match value {
            Value::Object(fields) => obj.extend(fields),
            other => {
                obj.insert("result".into(), other);
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON value");
        text.push('\n');
        self.write(text.as_bytes())
    }

    pub fn write(&self, bytes: &[u8]) -> Result<(), Failure> {
        match &self.target {
            Some(p) => {
                std::fs::write(p, bytes)?;
                eprintln!("# wrote {}", p.display());
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}
