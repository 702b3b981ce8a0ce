//! The four membership-defined families of subgroups of SL2(Z).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Which congruence family a level `N` refers to.
///
/// * `Gamma0`: `c ≡ 0 (mod N)`
/// * `Gamma1`: additionally `a ≡ d ≡ 1 (mod N)`
/// * `Gamma`: additionally `b ≡ 0 (mod N)` (the principal congruence subgroup)
/// * `Full`: no constraint
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Gamma0,
    Gamma1,
    #[serde(alias = "gamma_full")]
    Gamma,
    Full,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Gamma0 => "gamma0",
            GroupKind::Gamma1 => "gamma1",
            GroupKind::Gamma => "gamma",
            GroupKind::Full => "full",
        }
    }

    /// Membership of a matrix given by residues modulo `level` (entries may be
    /// any integers; they are reduced here).
    pub fn contains_entries(self, level: u32, a: i64, b: i64, c: i64, d: i64) -> bool {
        let n = i64::from(level);
        let r = |x: i64| x.rem_euclid(n);
        match self {
            GroupKind::Full => true,
            GroupKind::Gamma0 => r(c) == 0,
            GroupKind::Gamma1 => r(c) == 0 && r(a) == r(1) && r(d) == r(1),
            GroupKind::Gamma => r(c) == 0 && r(b) == 0 && r(a) == r(1) && r(d) == r(1),
        }
    }

    /// Exact membership of `m` in the subgroup of SL2(Z).
    pub fn contains(self, level: u32, m: &IntegerMatrix) -> bool {
        self.contains_entries(level, m.a, m.b, m.c, m.d)
    }

    /// Membership of the image of `m` in PSL2(Z), i.e. `m` or `-m` lies in the group.
    pub fn contains_projective(self, level: u32, m: &IntegerMatrix) -> bool {
        self.contains_entries(level, m.a, m.b, m.c, m.d)
            || self.contains_entries(level, -m.a, -m.b, -m.c, -m.d)
    }

    /// Whether `self(child_level)` is a subgroup of `parent(parent_level)` for
    /// every matrix (not only projectively).
    pub fn is_subgroup_of(self, child_level: u32, parent: GroupKind, parent_level: u32) -> bool {
        if parent == GroupKind::Full {
            return true;
        }
        if parent_level == 0 || child_level % parent_level != 0 {
            return false;
        }
        let rank = |k: GroupKind| match k {
            GroupKind::Full => 0,
            GroupKind::Gamma0 => 1,
            GroupKind::Gamma1 => 2,
            GroupKind::Gamma => 3,
        };
        rank(self) >= rank(parent)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma0" | "g0" => Ok(GroupKind::Gamma0),
            "gamma1" | "g1" => Ok(GroupKind::Gamma1),
            "gamma" | "gamma_full" => Ok(GroupKind::Gamma),
            "full" => Ok(GroupKind::Full),
            other => Err(Error::InvalidArgument(format!("unknown group kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_by_family() {
        let m = IntegerMatrix::new(5, 2, 12, 5).unwrap();
        assert!(GroupKind::Gamma0.contains(6, &m));
        assert!(!GroupKind::Gamma1.contains(6, &m));
        assert!(GroupKind::Gamma1.contains(4, &m));
        assert!(!GroupKind::Gamma.contains(4, &m));
    }

    #[test]
    fn minus_identity_is_projectively_everywhere() {
        let m = IntegerMatrix::MINUS_ONE;
        assert!(!GroupKind::Gamma1.contains(5, &m));
        assert!(GroupKind::Gamma1.contains_projective(5, &m));
        assert!(GroupKind::Gamma.contains_projective(7, &m));
    }

    #[test]
    fn subgroup_relation() {
        assert!(GroupKind::Gamma1.is_subgroup_of(6, GroupKind::Gamma0, 6));
        assert!(GroupKind::Gamma0.is_subgroup_of(12, GroupKind::Gamma0, 6));
        assert!(!GroupKind::Gamma0.is_subgroup_of(12, GroupKind::Gamma1, 6));
        assert!(!GroupKind::Gamma0.is_subgroup_of(9, GroupKind::Gamma0, 6));
    }

    #[test]
    fn parse_names() {
        assert_eq!("gamma_full".parse::<GroupKind>().unwrap(), GroupKind::Gamma);
        assert!("delta".parse::<GroupKind>().is_err());
    }
}
