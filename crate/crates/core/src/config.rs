use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size limits shared by the engine, presentation and lift modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Largest modulus `2N` for which SL2(Z/2N) subgroups are enumerated.
    pub max_modulus: u32,
    /// Largest PSL2(Z)-index accepted by coset enumeration and Farey symbols.
    pub max_index: usize,
    /// `classify_all` checks every lift by group closure when `2^r` is at most this.
    pub exhaustive_lift_cap: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_modulus: 96, max_index: 20_000, exhaustive_lift_cap: 1 << 12 }
    }
}

impl EngineConfig {
    pub fn with_max_modulus(mut self, max_modulus: u32) -> Self {
        self.max_modulus = max_modulus;
        self
    }

    pub fn check_modulus(&self, modulus: u64) -> Result<()> {
        if modulus > u64::from(self.max_modulus) {
            return Err(Error::ModulusCapExceeded { modulus, cap: self.max_modulus.into() });
        }
        Ok(())
    }

    /// `2N` for a level, checked against the cap.
    pub fn engine_modulus(&self, level: u32) -> Result<u32> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let modulus = 2 * u64::from(level);
        self.check_modulus(modulus)?;
        Ok(modulus as u32)
    }
}
