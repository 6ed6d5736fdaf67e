use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use plcover::corpus;
use plcover::io::{facet_list_json, parse_facet_list};
use plcover::{Error, SimplicialComplex};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub source: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Raw bytes of an input argument: a file path, or `corpus:<name>` for a
/// built-in complex rendered as a facet list.
pub fn read_input(role: &'static str, arg: &str, digests: &mut Vec<InputDigest>) -> Result<String, Error> {
    let text = if let Some(name) = arg.strip_prefix("corpus:") {
        let x = corpus::by_name(name).ok_or_else(|| Error::Invalid(format!("unknown corpus complex {name}")))?;
        facet_list_json(&x)
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Invalid(format!("cannot read {arg}: {e}")))?
    };
    digests.push(InputDigest {
        role,
        source: arg.to_string(),
        sha256: sha256_hex(text.as_bytes()),
    });
    Ok(text)
}

pub fn load_complex(role: &'static str, arg: &str, digests: &mut Vec<InputDigest>) -> Result<SimplicialComplex, Error> {
    let loaded = parse_facet_list(&read_input(role, arg, digests)?)?;
    if let Some(w) = loaded.warning() {
        eprintln!("warning: {arg}: {w}");
    }
    Ok(loaded.complex)
}

/// What a subcommand hands back: a machine result, a one-line verdict and
/// whether the verification it ran passed.
pub struct Outcome {
    pub result: Value,
    pub summary: String,
    pub passed: bool,
}

impl Outcome {
    pub fn ok(result: impl Serialize, summary: impl Into<String>) -> Self {
        Outcome {
            result: serde_json::to_value(result).expect("result serializes"),
            summary: summary.into(),
            passed: true,
        }
    }

    pub fn checked(result: impl Serialize, summary: impl Into<String>, passed: bool) -> Self {
        Outcome {
            passed,
            ..Outcome::ok(result, summary)
        }
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub inputs: &'a [InputDigest],
    pub parameters: &'a Map<String, Value>,
    pub passed: bool,
    pub summary: &'a str,
    pub result: &'a Value,
}

impl Report<'_> {
    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.tool, self.version, self.command);
        for d in self.inputs {
            s += &format!("{} {} sha256:{}\n", d.role, d.source, d.sha256);
        }
        for (k, v) in self.parameters {
            s += &format!("{k} = {v}\n");
        }
        s += &format!("{}: {}\n", if self.passed { "ok" } else { "FAILED" }, self.summary);
        s
    }
}

pub fn emit(out: Option<&Path>, body: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Invalid(format!("cannot write report: {e}")))
        }
    }
}
