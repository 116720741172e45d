use std::path::Path;

use anyhow::Result;
use serde::Deserialize;

use crate::{GlobalFlags, Usage};

pub const DEFAULT_CAP_VOLUME: u64 = 200_000;
pub const DEFAULT_CAP_VERTICES: u64 = 50_000;
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Keys mirror the global flags.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct File {
    cap_volume: Option<u64>,
    cap_vertices: Option<u64>,
    json: Option<bool>,
    seed: Option<u64>,
    budget: Option<u64>,
}

/// Global settings after merging flags over the config file over defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub cap_volume: u64,
    pub cap_vertices: u64,
    pub json: bool,
    pub seed: Option<u64>,
    pub budget: u64,
}

fn read(path: &Path) -> Result<File> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file = toml::from_str(&text).map_err(|e| Usage(format!("config {}: {e}", path.display())))?;
    Ok(file)
}

pub fn settings(flags: &GlobalFlags) -> Result<Settings> {
    let file = match &flags.config {
        Some(path) => read(path)?,
        None => File::default(),
    };
    Ok(Settings {
        cap_volume: flags.cap_volume.or(file.cap_volume).unwrap_or(DEFAULT_CAP_VOLUME),
        cap_vertices: flags.cap_vertices.or(file.cap_vertices).unwrap_or(DEFAULT_CAP_VERTICES),
        json: flags.json || file.json.unwrap_or(false),
        seed: flags.seed.or(file.seed),
        budget: flags.budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "cap-volume = 10\nseed = 4\njson = true\n").unwrap();
        let flags = GlobalFlags {
            cap_volume: Some(99),
            config: Some(path),
            ..GlobalFlags::default()
        };
        let s = settings(&flags).unwrap();
        assert_eq!(s.cap_volume, 99);
        assert_eq!(s.seed, Some(4));
        assert!(s.json);
        assert_eq!(s.cap_vertices, DEFAULT_CAP_VERTICES);
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "volume = 10\n").unwrap();
        let flags = GlobalFlags {
            config: Some(path),
            ..GlobalFlags::default()
        };
        assert!(settings(&flags).unwrap_err().downcast_ref::<Usage>().is_some());
    }
}
