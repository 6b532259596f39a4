//! Flat `key=value` run manifests.
//!
//! Parameters are stored under `param.<flag>` using the command-line flag
//! names, so replaying a manifest is parsing those flags again.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub struct Manifest {
    pub subcommand: String,
    pub master_seed: u64,
    pub output: PathBuf,
    pub params: Vec<(String, String)>,
}

impl Manifest {
    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest");
        PathBuf::from(s)
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        writeln!(t, "tool=replica").unwrap();
        writeln!(t, "tool_version={}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(t, "subcommand={}", self.subcommand).unwrap();
        writeln!(t, "master_seed={}", self.master_seed).unwrap();
        writeln!(t, "output={}", self.output.display()).unwrap();
        for (k, v) in &self.params {
            writeln!(t, "param.{k}={v}").unwrap();
        }
        t
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut subcommand = None;
        let mut master_seed = None;
        let mut output = None;
        let mut params = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("manifest line {}: expected key=value", no + 1);
            };
            match k {
                "subcommand" => subcommand = Some(v.to_string()),
                "master_seed" => {
                    master_seed = Some(v.parse().with_context(|| format!("manifest line {}", no + 1))?)
                }
                "output" => output = Some(PathBuf::from(v)),
                "tool" | "tool_version" => {}
                _ => match k.strip_prefix("param.") {
                    Some(flag) => params.push((flag.to_string(), v.to_string())),
                    None => bail!("manifest line {}: unknown key `{k}`", no + 1),
                },
            }
        }
        Ok(Manifest {
            subcommand: subcommand.context("manifest has no subcommand")?,
            master_seed: master_seed.context("manifest has no master_seed")?,
            output: output.context("manifest has no output")?,
            params,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read manifest {}", path.display()))?;
        Self::parse(&text)
    }

    /// The parameters as command-line arguments; `true` marks a bare flag.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = Vec::new();
        for (k, v) in &self.params {
            if v == "true" {
                args.push(format!("--{k}"));
            } else if v != "false" {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
        args
    }
}
