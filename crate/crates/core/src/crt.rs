//! Chinese-remainder splitting of SL2(Z/2N) into prime-power components.

use crate::error::{Error, Result};
use crate::factor::{gcd, mod_inverse, FactorizationProfile};
use crate::matrix::ResidueMatrix;

/// The component moduli `2^{s+1}, p₁^{s₁}, …, p_t^{s_t}` of `2N`.
pub fn component_moduli(profile: &FactorizationProfile) -> Vec<u32> {
    let mut moduli = vec![1u32 << (profile.s + 1)];
    moduli.extend(profile.odd.iter().map(|&(p, e)| p.pow(e) as u32));
    moduli
}

fn check_coprime(moduli: &[u32]) -> Result<u64> {
    for (i, &m) in moduli.iter().enumerate() {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        for &k in &moduli[i + 1..] {
            if gcd(m.into(), k.into()) != 1 {
                return Err(Error::NonCoprimeModuli(m, k));
            }
        }
    }
    Ok(moduli.iter().map(|&m| u64::from(m)).product())
}

/// Reduce `x` into each component modulus. The moduli must be pairwise coprime
/// with product equal to the modulus of `x`.
pub fn crt_split_moduli(x: &ResidueMatrix, moduli: &[u32]) -> Result<Vec<ResidueMatrix>> {
    let product = check_coprime(moduli)?;
    if product != u64::from(x.modulus) {
        return Err(Error::CrtProductMismatch { product, expected: x.modulus.into() });
    }
    moduli.iter().map(|&m| x.reduce_to(m)).collect()
}

/// Split a matrix modulo `2N` according to the factorisation of `N`.
pub fn crt_split(x: &ResidueMatrix, profile: &FactorizationProfile) -> Result<Vec<ResidueMatrix>> {
    crt_split_moduli(x, &component_moduli(profile))
}

/// Inverse of [`crt_split`].
pub fn crt_combine(parts: &[ResidueMatrix]) -> Result<ResidueMatrix> {
    let moduli: Vec<u32> = parts.iter().map(|p| p.modulus).collect();
    let total = check_coprime(&moduli)?;
    if total > u64::from(u32::MAX) {
        return Err(Error::Overflow("CRT modulus"));
    }
    let mut entries = [0u64; 4];
    for part in parts {
        let m = u64::from(part.modulus);
        let rest = total / m;
        let inv = mod_inverse(rest % m, m).ok_or(Error::NonCoprimeModuli(part.modulus, 0))?;
        let weight = u128::from(rest) * u128::from(inv) % u128::from(total);
        for (slot, v) in entries.iter_mut().zip(part.entries()) {
            *slot = ((u128::from(*slot) + weight * u128::from(v)) % u128::from(total)) as u64;
        }
    }
    let [a, b, c, d] = entries.map(|v| v as u32);
    ResidueMatrix::new(total as u32, a, b, c, d)
}
