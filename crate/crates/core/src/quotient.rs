//! The maximal elementary abelian 2-quotient `G/G'G²` and its F₂ coordinates.

use rustc_hash::FxHashMap;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::group::{squares_subgroup, subgroup_by_membership, ResidueMatrixGroup};
use crate::kind::GroupKind;
use crate::matrix::ResidueMatrix;

/// `G/G'G² ≅ F₂^dim2` together with a coordinate homomorphism.
#[derive(Clone, Debug)]
pub struct TwoQuotient {
    group: ResidueMatrixGroup,
    kernel: ResidueMatrixGroup,
    /// Chosen basis elements, one per coordinate.
    basis: Vec<ResidueMatrix>,
    coords: FxHashMap<u64, u64>,
}

impl TwoQuotient {
    pub fn dim2(&self) -> usize {
        self.basis.len()
    }

    pub fn group(&self) -> &ResidueMatrixGroup {
        &self.group
    }

    /// `G'G²`.
    pub fn kernel(&self) -> &ResidueMatrixGroup {
        &self.kernel
    }

    pub fn basis(&self) -> &[ResidueMatrix] {
        &self.basis
    }

    /// Coordinates of `x` as a bit mask (bit `j` is basis vector `j`), or
    /// `None` when `x` is not in the group.
    pub fn coordinates(&self, x: &ResidueMatrix) -> Option<u64> {
        if x.modulus != self.group.modulus() {
            return None;
        }
        self.coords.get(&x.encode()).copied()
    }

    /// The image `v` of `-I`, when `-I` lies in the group.
    pub fn minus_one_vector(&self) -> Option<u64> {
        self.coordinates(&ResidueMatrix::minus_one(self.group.modulus()))
    }
}

/// Computes `dim2` and the coordinate map by coset splitting: the next basis
/// element is always the first group element (in encoding order) outside the
/// span built so far.
pub fn two_quotient(group: &ResidueMatrixGroup) -> Result<TwoQuotient> {
    let kernel = squares_subgroup(group);
    if group.order() % kernel.order() != 0 || !(group.order() / kernel.order()).is_power_of_two() {
        return Err(Error::Internal(format!(
            "index {}/{} of the squares subgroup is not a power of 2",
            group.order(),
            kernel.order()
        )));
    }
    let mut coords: FxHashMap<u64, u64> =
        kernel.elements().iter().map(|x| (x.encode(), 0u64)).collect();
    let mut span: Vec<ResidueMatrix> = kernel.elements().to_vec();
    let mut basis = Vec::new();
    let mut cursor = 0;
    while span.len() < group.order() {
        while coords.contains_key(&group.elements()[cursor].encode()) {
            cursor += 1;
        }
        let g = group.elements()[cursor];
        let bit = 1u64 << basis.len();
        let mut extension = Vec::with_capacity(span.len());
        for s in &span {
            let y = s.mul(&g);
            let label = coords[&s.encode()] | bit;
            if coords.insert(y.encode(), label).is_some() {
                return Err(Error::Internal("quotient by squares is not elementary abelian".into()));
            }
            extension.push(y);
        }
        span.extend(extension);
        basis.push(g);
        if basis.len() > 63 {
            return Err(Error::Internal("F2 dimension exceeds 63".into()));
        }
    }
    Ok(TwoQuotient { group: group.clone(), kernel, basis, coords })
}

/// `dim2` of `kind(level)/Γ(2·level)` computed componentwise through the CRT
/// decomposition `SL2(Z/2N) ≅ SL2(Z/2^{s+1}) × ∏ SL2(Z/p^e)`.
pub fn dim2_via_crt(kind: GroupKind, level: u32, config: &EngineConfig) -> Result<usize> {
    let prof = factorize(level.into())?;
    let mut components = vec![(1u32 << prof.s, 1u32 << (prof.s + 1))];
    components.extend(prof.odd.iter().map(|&(p, e)| {
        let q = p.pow(e) as u32;
        (q, q)
    }));
    let mut total = 0;
    for (lvl, modulus) in components {
        let g = subgroup_by_membership(kind, lvl, modulus, config)?;
        total += two_quotient(&g)?.dim2();
    }
    Ok(total)
}
