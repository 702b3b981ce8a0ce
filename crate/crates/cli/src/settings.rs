use std::fs;

use liftlab::EngineConfig;
use serde::Deserialize;

/// Inclusive range of levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRange {
    pub start: u32,
    pub end: u32,
}

impl LevelRange {
    pub fn parse(s: &str) -> Result<Self, String> {
        let level = |t: &str| -> Result<u32, String> {
            match t.trim().parse::<u32>() {
                Ok(0) => Err("levels start at 1".to_string()),
                Ok(n) => Ok(n),
                Err(e) => Err(format!("{t:?}: {e}")),
            }
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (level(a)?, level(b.trim_start_matches('='))?),
            None => {
                let n = level(s)?;
                (n, n)
            }
        };
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(LevelRange { start, end })
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }

    pub fn is_single(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max_modulus: Option<u32>,
    max_index: Option<usize>,
    exhaustive_lift_cap: Option<u64>,
}

pub struct Settings {
    pub engine: EngineConfig,
}

impl Settings {
    /// Defaults, then the TOML file, then the flag (or its environment variable).
    pub fn load(path: Option<&str>, max_modulus: Option<u32>) -> Result<Self, String> {
        let file = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| format!("{p}: {e}"))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| format!("{p}: {e}"))?
            }
            None => FileConfig::default(),
        };
        let mut engine = EngineConfig::default();
        if let Some(m) = file.max_modulus {
            engine.max_modulus = m;
        }
        if let Some(m) = file.max_index {
            engine.max_index = m;
        }
        if let Some(c) = file.exhaustive_lift_cap {
            engine.exhaustive_lift_cap = c;
        }
        if let Some(m) = max_modulus {
            engine.max_modulus = m;
        }
        Ok(Settings { engine })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(LevelRange::parse("7").unwrap(), LevelRange { start: 7, end: 7 });
        assert_eq!(LevelRange::parse("1..16").unwrap(), LevelRange { start: 1, end: 16 });
        assert_eq!(LevelRange::parse("3..=5").unwrap().levels().count(), 3);
        assert!(LevelRange::parse("0").is_err());
        assert!(LevelRange::parse("5..2").is_err());
        assert!(LevelRange::parse("x").is_err());
    }
}
