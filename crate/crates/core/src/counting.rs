//! Congruence-lift counts by closed formula and by finite-group computation,
//! and the classification predicates for Γ̄0(N), Γ̄1(N) and Γ̄(N).

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::group::subgroup_by_membership;
use crate::kind::GroupKind;
use crate::matrix::ResidueMatrix;
use crate::quotient::two_quotient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSource {
    Formula,
    Engine,
}

/// Data behind an engine count: `d = dim G/G'G²` for `G = Γ/Γ(2N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineData {
    pub modulus: u32,
    pub group_order: usize,
    pub dim2: usize,
    pub minus_one_in_group: bool,
    pub minus_one_in_squares: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCountReport {
    pub kind: GroupKind,
    #[serde(rename = "N")]
    pub level: u32,
    #[serde(with = "crate::serde_biguint")]
    pub count: BigUint,
    pub source: CountSource,
    /// Which branch of the piecewise formula (formula) or the −1 case split (engine) applied.
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineData>,
}

/// `1 + 2^k`
pub fn one_plus_power_of_two(k: u64) -> BigUint {
    (BigUint::one() << k) + BigUint::one()
}

/// Closed-form number of congruence lifts.
pub fn count_congruence_lifts_formula(kind: GroupKind, level: u32) -> Result<LiftCountReport> {
    let prof = factorize(level.into())?;
    let s = u64::from(prof.s);
    let t = prof.t() as u64;
    let (count, case) = match kind {
        GroupKind::Gamma0 => {
            if s <= 1 && !prof.any_odd_prime_3_mod_4() {
                (BigUint::one(), "s<=1, all p=1 mod 4")
            } else if s <= 1 {
                (one_plus_power_of_two(s + t), "s<=1, some p=3 mod 4")
            } else {
                (one_plus_power_of_two(s.min(3) + t), "s>=2")
            }
        }
        GroupKind::Gamma1 => match level {
            1 | 2 => (BigUint::one(), "N<=2"),
            n if n % 2 == 1 => (BigUint::from(3u32), "N>2 odd"),
            _ => (BigUint::from(5u32), "N>2 even"),
        },
        GroupKind::Gamma => match level {
            1 => (BigUint::one(), "N=1"),
            2 => (BigUint::from(5u32), "N=2"),
            n if n % 2 == 1 => (BigUint::from(3u32), "N>1 odd"),
            _ => (BigUint::from(9u32), "N>2 even"),
        },
        GroupKind::Full => (BigUint::one(), "full group"),
    };
    Ok(LiftCountReport {
        kind,
        level,
        count,
        source: CountSource::Formula,
        case: case.to_string(),
        engine: None,
    })
}

/// Count from `G = Γ/Γ(2N)`: 1 if `-1 ∈ G'G²`, `1 + 2^{d-1}` if `-1 ∈ Γ` but
/// not in `G'G²`, `1 + 2^d` if `-1 ∉ Γ`.
pub fn count_congruence_lifts_engine(
    kind: GroupKind,
    level: u32,
    config: &EngineConfig,
) -> Result<LiftCountReport> {
    let modulus = config.engine_modulus(level)?;
    let group = subgroup_by_membership(kind, level, modulus, config)?;
    let quotient = two_quotient(&group)?;
    let minus_one = ResidueMatrix::minus_one(modulus);
    // For N = 1 the modulus is 2 and -I reduces to I; SL2(Z) contains -1.
    let minus_one_in_group = group.contains(&minus_one);
    let minus_one_in_squares = quotient.kernel().contains(&minus_one);
    let d = quotient.dim2() as u64;
    let (count, case) = if minus_one_in_squares {
        (BigUint::one(), "-1 in G'G^2")
    } else if minus_one_in_group {
        if d == 0 {
            return Err(Error::Internal("-1 outside G'G^2 but dim2 = 0".into()));
        }
        (one_plus_power_of_two(d - 1), "-1 in group, not in G'G^2")
    } else {
        (one_plus_power_of_two(d), "-1 not in group")
    };
    Ok(LiftCountReport {
        kind,
        level,
        count,
        source: CountSource::Engine,
        case: case.to_string(),
        engine: Some(EngineData {
            modulus,
            group_order: group.order(),
            dim2: quotient.dim2(),
            minus_one_in_group,
            minus_one_in_squares,
        }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceCountMethod {
    Formula,
    BruteForce,
}

/// Number of codimension-1 subspaces of F_p^d avoiding a fixed nonzero vector.
pub fn count_codim1_avoiding(p: u64, d: u32, via: SubspaceCountMethod) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if !crate::factor::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match via {
        SubspaceCountMethod::Formula => p.checked_pow(d - 1).ok_or(Error::Overflow("p^(d-1)")),
        SubspaceCountMethod::BruteForce => {
            let mut v = vec![0u64; d as usize];
            v[0] = 1;
            brute_force_hyperplanes_avoiding(p, &v)
        }
    }
}

/// Enumerates hyperplanes as kernels of nonzero functionals normalised so the
/// first nonzero coordinate is 1, and counts those with `f(v) ≠ 0`.
pub fn brute_force_hyperplanes_avoiding(p: u64, v: &[u64]) -> Result<u64> {
    let d = v.len() as u32;
    let total = p.checked_pow(d).filter(|&n| n <= 1 << 16).ok_or_else(|| {
        Error::InvalidArgument(format!("brute force needs p^d <= 65536 (p = {p}, d = {d})"))
    })?;
    if v.iter().all(|&x| x % p == 0) {
        return Err(Error::InvalidArgument("vector must be nonzero".into()));
    }
    let mut count = 0;
    let mut f = vec![0u64; v.len()];
    for code in 1..total {
        let mut c = code;
        for slot in f.iter_mut() {
            *slot = c % p;
            c /= p;
        }
        if f.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let pairing: u64 = f.iter().zip(v).map(|(a, b)| a * (b % p)).sum::<u64>() % p;
        if pairing != 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// All lifts of Γ̄0(N) are congruence iff `N ∈ {3, 4, 8}`, or `4 ∤ N` and every
/// odd prime divisor is `1 mod 4`.
pub fn all_lifts_congruence_gamma0(level: u32) -> Result<bool> {
    let prof = factorize(level.into())?;
    Ok(matches!(level, 3 | 4 | 8) || (prof.s < 2 && !prof.any_odd_prime_3_mod_4()))
}

/// All lifts of Γ̄1(N) are congruence iff `N ≤ 4`.
pub fn all_lifts_congruence_gamma1(level: u32) -> Result<bool> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    Ok(level <= 4)
}

/// Γ̄(N) has a noncongruence lift iff `N > 2`.
pub fn gamma_full_has_noncongruence_lift(level: u32) -> Result<bool> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    Ok(level > 2)
}
