//! Explicitly enumerated subgroups of SL2(Z/n).
//!
//! Groups are materialised as hash sets of packed residue encodings. Closures
//! are built with Dimino's coset algorithm, so adding a generator costs time
//! proportional to the size of the new group rather than `|G| · #generators`.

use rustc_hash::FxHashSet;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::factor::{factorize, gcd, mod_inverse};
use crate::kind::GroupKind;
use crate::matrix::ResidueMatrix;

#[derive(Clone, Debug)]
pub struct ResidueMatrixGroup {
    modulus: u32,
    /// Sorted by encoding.
    elements: Vec<ResidueMatrix>,
    members: FxHashSet<u64>,
    generators: Vec<ResidueMatrix>,
}

impl ResidueMatrixGroup {
    fn from_parts(modulus: u32, mut elements: Vec<ResidueMatrix>, generators: Vec<ResidueMatrix>) -> Self {
        elements.sort_unstable_by_key(ResidueMatrix::encode);
        let members = elements.iter().map(ResidueMatrix::encode).collect();
        ResidueMatrixGroup { modulus, elements, members, generators }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in increasing encoding order.
    pub fn elements(&self) -> &[ResidueMatrix] {
        &self.elements
    }

    /// Generators actually used to build the group (empty when the group came
    /// from a membership filter).
    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    pub fn contains(&self, x: &ResidueMatrix) -> bool {
        x.modulus == self.modulus && self.members.contains(&x.encode())
    }

    /// Whether the reduction of `-I` lies in the group.
    pub fn contains_minus_one(&self) -> bool {
        self.contains(&ResidueMatrix::minus_one(self.modulus))
    }

    pub fn is_subgroup_of(&self, other: &ResidueMatrixGroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// The group generated by `self` together with `-I`.
    pub fn with_minus_one(&self) -> ResidueMatrixGroup {
        if self.contains_minus_one() {
            return self.clone();
        }
        let mut elements = self.elements.clone();
        elements.extend(self.elements.iter().map(ResidueMatrix::negate));
        let mut generators = self.generators.clone();
        generators.push(ResidueMatrix::minus_one(self.modulus));
        ResidueMatrixGroup::from_parts(self.modulus, elements, generators)
    }
}

/// Incremental Dimino closure: elements of the current subgroup plus the
/// generators that were not redundant when added.
struct Closure {
    modulus: u32,
    elements: Vec<ResidueMatrix>,
    members: FxHashSet<u64>,
    used: Vec<ResidueMatrix>,
}

impl Closure {
    fn new(modulus: u32) -> Self {
        let id = ResidueMatrix::identity(modulus);
        let mut members = FxHashSet::default();
        members.insert(id.encode());
        Closure { modulus, elements: vec![id], members, used: Vec::new() }
    }

    fn add_generator(&mut self, g: ResidueMatrix) {
        if self.members.contains(&g.encode()) {
            return;
        }
        self.used.push(g);
        // The previous subgroup H = elements[..h_len]; new elements arrive as
        // whole right cosets H·x.
        let h_len = self.elements.len();
        let mut reps = vec![g];
        self.push_coset(h_len, &g);
        let mut next = 0;
        while next < reps.len() {
            let r = reps[next];
            next += 1;
            for i in 0..self.used.len() {
                let x = r.mul(&self.used[i]);
                if !self.members.contains(&x.encode()) {
                    self.push_coset(h_len, &x);
                    reps.push(x);
                }
            }
        }
    }

    fn push_coset(&mut self, h_len: usize, x: &ResidueMatrix) {
        for i in 0..h_len {
            let y = self.elements[i].mul(x);
            self.members.insert(y.encode());
            self.elements.push(y);
        }
    }

    fn finish(self) -> ResidueMatrixGroup {
        ResidueMatrixGroup::from_parts(self.modulus, self.elements, self.used)
    }
}

/// The subgroup of SL2(Z/n) generated by `generators`.
pub fn closure(generators: &[ResidueMatrix], n: u32) -> Result<ResidueMatrixGroup> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut cl = Closure::new(n);
    for g in generators {
        if g.modulus != n {
            return Err(Error::ModulusMismatch(n, g.modulus));
        }
        if !g.has_unit_det() {
            return Err(Error::NotUnimodular {
                a: g.a.into(),
                b: g.b.into(),
                c: g.c.into(),
                d: g.d.into(),
            });
        }
        cl.add_generator(*g);
    }
    Ok(cl.finish())
}

/// `|SL2(Z/n)| = n³ ∏_{p | n} (1 - 1/p²)`.
pub fn sl2_order(n: u32) -> u64 {
    let n64 = u64::from(n);
    let mut order = n64 * n64 * n64;
    if n > 1 {
        for p in factorize(n64).expect("n > 0").primes() {
            order = order / (p * p) * (p * p - 1);
        }
    }
    order
}

/// All elements of SL2(Z/n) accepted by `keep`, enumerated by solving
/// `a·d ≡ 1 + b·c` for `d`. Only lower-left entries with `c_ok(c)` are visited.
pub fn enumerate_sl2<F, C>(n: u32, c_ok: C, mut keep: F) -> Vec<ResidueMatrix>
where
    F: FnMut(&ResidueMatrix) -> bool,
    C: Fn(u32) -> bool,
{
    let nn = u64::from(n);
    let mut out = Vec::new();
    if n == 1 {
        let id = ResidueMatrix::identity(1);
        if keep(&id) {
            out.push(id);
        }
        return out;
    }
    for a in 0..n {
        let g = gcd(u64::from(a), nn);
        let step = nn / g;
        let inv = mod_inverse(u64::from(a) / g % step, step).unwrap_or(0);
        for c in (0..n).filter(|&c| c_ok(c)) {
            for b in 0..n {
                let rhs = (1 + u64::from(b) * u64::from(c)) % nn;
                if rhs % g != 0 {
                    continue;
                }
                let d0 = (rhs / g) % step * inv % step;
                for k in 0..g {
                    let m = ResidueMatrix { modulus: n, a, b, c, d: (d0 + k * step) as u32 };
                    debug_assert!(m.has_unit_det());
                    if keep(&m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// The image of `kind(level)` in SL2(Z/n), i.e. `Γ/Γ(n)`, for `level | n`.
pub fn subgroup_by_membership(
    kind: GroupKind,
    level: u32,
    n: u32,
    config: &EngineConfig,
) -> Result<ResidueMatrixGroup> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    if n % level != 0 {
        return Err(Error::LevelNotDividingModulus { level, modulus: n });
    }
    config.check_modulus(n.into())?;
    let c_ok = |c: u32| kind == GroupKind::Full || c % level == 0;
    let elements = enumerate_sl2(n, c_ok, |m| {
        kind.contains_entries(level, m.a.into(), m.b.into(), m.c.into(), m.d.into())
    });
    Ok(ResidueMatrixGroup::from_parts(n, elements, Vec::new()))
}

/// Image of `⟨kind(level), -1⟩` in SL2(Z/n).
pub fn full_preimage_image(
    kind: GroupKind,
    level: u32,
    n: u32,
    config: &EngineConfig,
) -> Result<ResidueMatrixGroup> {
    Ok(subgroup_by_membership(kind, level, n, config)?.with_minus_one())
}

/// The subgroup generated by all squares; it equals `G'G²`.
pub fn squares_subgroup(group: &ResidueMatrixGroup) -> ResidueMatrixGroup {
    let mut cl = Closure::new(group.modulus);
    for g in &group.elements {
        cl.add_generator(g.mul(g));
    }
    cl.finish()
}

/// Whether `-I` reduces into the group.
pub fn contains_minus_one(group: &ResidueMatrixGroup) -> bool {
    group.contains_minus_one()
}
