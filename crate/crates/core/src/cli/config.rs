use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CliError, Command};
use crate::scalar::{parse_float, Mode};

/// Run configuration file. Every number is a decimal string.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<Mode>,
    pub seed: Option<String>,
    pub threads: Option<String>,
    pub out: Option<String>,
    pub toroidal: Option<ToroidalSection>,
    pub decks: Option<DecksSection>,
    pub certify: Option<CertifySection>,
    pub hopf: Option<HopfSection>,
    pub cover: Option<CoverSection>,
    pub shilov: Option<ShilovSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToroidalSection {
    /// JSON toroidal spec.
    pub spec: String,
    pub height_bound: Option<String>,
    pub epsilon: Option<String>,
    pub rcap: Option<String>,
    #[serde(default)]
    pub r_table: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub q: String,
    pub n_h: String,
    pub d: String,
    #[serde(rename = "N_v")]
    pub n_v: String,
    pub profile: Option<String>,
    pub shape: Option<String>,
    /// Scale of the hidden conjugacy, e.g. `"1/1000"`.
    pub amplitude: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecksSection {
    /// JSON deck system (eigenvalues plus perturbations).
    pub file: Option<String>,
    pub generator: Option<GeneratorSection>,
    pub scan_bound: Option<String>,
    pub problem: Option<String>,
    pub direction: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    pub m_max: Option<String>,
    pub r1: Option<String>,
    pub eps1: Option<String>,
    pub theta1: Option<String>,
    pub kappa: Option<String>,
    pub angles: Option<String>,
    pub eta_check_up_to: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionSection {
    pub m: String,
    pub a: [String; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSection {
    /// Eigenvalues as `[re, im]` pairs.
    pub alpha: Vec<[String; 2]>,
    #[serde(default)]
    pub jordan: Vec<bool>,
    pub torsion: Option<TorsionSection>,
    pub beta: Option<[String; 2]>,
    pub d_char: Option<[String; 2]>,
    pub bound: Option<String>,
    #[serde(rename = "N_v")]
    pub n_v: Option<String>,
    pub variant: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSection {
    /// `|alpha_j|` as exact rationals.
    pub alpha_abs: Vec<String>,
    pub delta: String,
    /// Base radii `r_1^j`; defaults to `outer * |alpha_j|`.
    #[serde(default)]
    pub r1: Vec<String>,
    pub outer: Option<String>,
    pub samples: Option<String>,
    pub graph: Option<String>,
    pub beta: Option<[String; 2]>,
    pub c: Option<[String; 2]>,
    pub d: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSection {
    pub inner: Option<String>,
    pub outer: Option<String>,
    pub radius: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShilovSection {
    pub fields: String,
    pub alpha: Option<[String; 2]>,
    #[serde(default)]
    pub factors: Vec<FactorSection>,
    /// `[i, j]`: use piece `U_i^j` of the `[cover]` covering.
    pub piece: Option<[String; 2]>,
}

/// Everything a pipeline needs: the parsed file plus flag overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub mode: Mode,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub file: ConfigFile,
    /// Directory that relative input paths are resolved against.
    pub base_dir: PathBuf,
    /// sha256 of the configuration text and every referenced input.
    pub input_digest: String,
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

pub(crate) fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn parse_num<T: std::str::FromStr>(name: &str, s: &str) -> Result<T, CliError> {
    s.trim()
        .parse::<T>()
        .map_err(|_| CliError::Input(format!("{name}: cannot parse {s:?}")))
}

pub fn opt_num<T: std::str::FromStr>(name: &str, s: &Option<String>, default: T) -> Result<T, CliError> {
    match s {
        Some(v) => parse_num(name, v),
        None => Ok(default),
    }
}

pub fn parse_f64(name: &str, s: &str) -> Result<f64, CliError> {
    parse_float(s).map_err(|_| CliError::Input(format!("{name}: cannot parse {s:?}")))
}

pub fn opt_f64(name: &str, s: &Option<String>, default: f64) -> Result<f64, CliError> {
    match s {
        Some(v) => parse_f64(name, v),
        None => Ok(default),
    }
}

fn positive<T: PartialOrd + Default + Copy>(name: &str, v: T) -> Result<T, CliError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("{name} must be positive")))
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn referenced_files(&self) -> Vec<&str> {
        let mut out = Vec::new();
        if let Some(t) = &self.toroidal {
            out.push(t.spec.as_str());
        }
        if let Some(f) = self.decks.as_ref().and_then(|d| d.file.as_deref()) {
            out.push(f);
        }
        out
    }
}

impl RunConfig {
    /// Builds a configuration from the file text; flags override file values.
    pub fn from_text(command: Command, text: &str, base_dir: &Path, ov: Overrides) -> Result<Self, CliError> {
        let file = ConfigFile::parse(text)?;
        let mut hasher = Sha256::new();
        hasher.update(command.as_str().as_bytes());
        hasher.update([0]);
        hasher.update(text.as_bytes());
        for name in file.referenced_files() {
            let path = base_dir.join(name);
            let bytes = std::fs::read(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            hasher.update([0]);
            hasher.update(&bytes);
        }
        let seed = match ov.seed {
            Some(s) => s,
            None => opt_num("seed", &file.seed, 0u64)?,
        };
        let threads = match ov.threads {
            Some(t) => Some(t),
            None => file.threads.as_ref().map(|t| parse_num("threads", t)).transpose()?,
        };
        if let Some(t) = threads {
            positive("threads", t)?;
        }
        let out = ov.out.or_else(|| file.out.as_ref().map(|o| base_dir.join(o)));
        let cfg = RunConfig {
            command,
            mode: ov.mode.or(file.mode).unwrap_or(Mode::Exact),
            seed,
            threads,
            out,
            base_dir: base_dir.to_path_buf(),
            input_digest: hex::encode(hasher.finalize()),
            file,
        };
        cfg.check_bounds()?;
        Ok(cfg)
    }

    pub fn load(command: Command, path: &Path, ov: Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_text(command, &text, &base, ov)
    }

    /// Configuration with no file: every section empty.
    pub fn bare(command: Command, ov: Overrides) -> Result<Self, CliError> {
        Self::from_text(command, "", Path::new("."), ov)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.base_dir.join(name)
    }

    fn check_bounds(&self) -> Result<(), CliError> {
        if let Some(d) = &self.file.decks {
            if let Some(n) = &d.scan_bound {
                positive("scan_bound", parse_num::<u32>("scan_bound", n)?)?;
            }
        }
        if let Some(t) = &self.file.toroidal {
            if let Some(h) = &t.height_bound {
                positive("height_bound", parse_num::<u32>("height_bound", h)?)?;
            }
        }
        if let Some(h) = &self.file.hopf {
            if let Some(b) = &h.bound {
                positive("bound", parse_num::<u32>("bound", b)?)?;
            }
        }
        if let Some(c) = &self.file.cover {
            if let Some(s) = &c.samples {
                positive("samples", parse_num::<usize>("samples", s)?)?;
            }
        }
        if let Some(c) = &self.file.certify {
            if let Some(m) = &c.m_max {
                positive("m_max", parse_num::<usize>("m_max", m)?)?;
            }
        }
        Ok(())
    }

    /// Canonical TOML of the effective configuration; rerunning with it
    /// reproduces the report.
    pub fn echo(&self) -> String {
        let mut f = self.file.clone();
        f.mode = Some(self.mode);
        f.seed = Some(self.seed.to_string());
        f.threads = None;
        f.out = None;
        toml::to_string(&f).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let text = "mode = \"float\"\nseed = \"3\"\n";
        let ov = Overrides {
            seed: Some(9),
            ..Default::default()
        };
        let c = RunConfig::from_text(Command::DiophScan, text, Path::new("."), ov).unwrap();
        assert_eq!(c.mode, Mode::Float);
        assert_eq!(c.seed, 9);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_bounds() {
        let bad = "[decks]\nscan_bound = \"0\"\n";
        assert!(RunConfig::from_text(Command::DiophScan, bad, Path::new("."), Overrides::default()).is_err());
        assert!(ConfigFile::parse("colour = \"red\"").is_err());
        let missing = "[decks]\nfile = \"does-not-exist.json\"\n";
        assert!(RunConfig::from_text(Command::DiophScan, missing, Path::new("."), Overrides::default()).is_err());
    }

    #[test]
    fn digest_is_stable() {
        let a = RunConfig::from_text(Command::Shilov, "seed = \"1\"", Path::new("."), Overrides::default()).unwrap();
        let b = RunConfig::from_text(Command::Shilov, "seed = \"1\"", Path::new("."), Overrides::default()).unwrap();
        assert_eq!(a.input_digest, b.input_digest);
        assert_eq!(a.input_digest.len(), 64);
    }
}
