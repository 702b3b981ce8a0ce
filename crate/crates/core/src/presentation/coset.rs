//! Right action of PSL2(Z) on the cosets `Γ̄\PSL2(Z)`.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::factor::{factorize, gcd, lcm};
use crate::kind::GroupKind;
use crate::matrix::IntegerMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
}

impl Letter {
    pub fn matrix(self) -> IntegerMatrix {
        match self {
            Letter::S => IntegerMatrix::S,
            Letter::T => IntegerMatrix::T,
        }
    }
}

/// Canonical key of the coset `Γ̄·g`, read off the bottom row of `g`.
#[derive(Clone, Debug)]
struct CosetKey {
    level: i64,
    /// Scalars the bottom row may be multiplied by without changing the coset.
    scalars: Vec<i64>,
}

impl CosetKey {
    fn new(kind: GroupKind, level: u32) -> Result<Self> {
        let n = i64::from(level);
        let scalars = match kind {
            // Γ1(N) ⊂ Γ0(N) agree projectively for N ≤ 3.
            GroupKind::Gamma0 => (1..=n.max(1)).filter(|&u| gcd(u as u64, n as u64) == 1).collect(),
            GroupKind::Gamma1 if level <= 3 => {
                (1..=n.max(1)).filter(|&u| gcd(u as u64, n as u64) == 1).collect()
            }
            GroupKind::Gamma1 => vec![1, n - 1],
            other => {
                return Err(Error::InvalidArgument(format!(
                    "coset actions are built for gamma0 and gamma1, not {other}"
                )))
            }
        };
        Ok(CosetKey { level: n, scalars })
    }

    fn key(&self, g: &IntegerMatrix) -> u64 {
        let n = self.level;
        let (c, d) = (g.c.rem_euclid(n), g.d.rem_euclid(n));
        self.scalars
            .iter()
            .map(|&u| {
                let uc = (u * c) % n;
                let ud = (u * d) % n;
                (uc * n + ud) as u64
            })
            .min()
            .unwrap_or(0)
    }
}

/// Permutations of `S` and `T` on the cosets of a projective subgroup, with
/// integer coset representatives. Coset 0 is the subgroup itself.
#[derive(Clone, Debug)]
pub struct CosetAction {
    kind: GroupKind,
    level: u32,
    perm_s: Vec<usize>,
    perm_t: Vec<usize>,
    reps: Vec<IntegerMatrix>,
    /// Spanning-tree edge that discovered each coset: `reps[j] = reps[i]·letter`.
    parent: Vec<Option<(usize, Letter)>>,
    keys: FxHashMap<u64, usize>,
    key: CosetKey,
}

impl CosetAction {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The index `[PSL2(Z) : Γ̄]`.
    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    pub fn perm_s(&self) -> &[usize] {
        &self.perm_s
    }

    pub fn perm_t(&self) -> &[usize] {
        &self.perm_t
    }

    /// Permutation of `S·T`: first `S`, then `T`.
    pub fn perm_st(&self) -> Vec<usize> {
        self.perm_s.iter().map(|&i| self.perm_t[i]).collect()
    }

    pub fn perm(&self, letter: Letter) -> &[usize] {
        match letter {
            Letter::S => &self.perm_s,
            Letter::T => &self.perm_t,
        }
    }

    pub fn reps(&self) -> &[IntegerMatrix] {
        &self.reps
    }

    pub fn parent(&self, coset: usize) -> Option<(usize, Letter)> {
        self.parent[coset]
    }

    /// The coset containing `g`.
    pub fn coset_of(&self, g: &IntegerMatrix) -> Option<usize> {
        self.keys.get(&self.key.key(g)).copied()
    }
}

/// Orbit of the identity coset under right multiplication by `S` and `T`.
pub fn build_coset_action(kind: GroupKind, level: u32, config: &EngineConfig) -> Result<CosetAction> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    let key = CosetKey::new(kind, level)?;
    let mut keys = FxHashMap::default();
    keys.insert(key.key(&IntegerMatrix::IDENTITY), 0);
    let mut reps = vec![IntegerMatrix::IDENTITY];
    let mut parent = vec![None];
    let mut perm_s = vec![usize::MAX];
    let mut perm_t = vec![usize::MAX];
    let mut next = 0;
    while next < reps.len() {
        let i = next;
        next += 1;
        for letter in [Letter::S, Letter::T] {
            let m = reps[i].multiply(&letter.matrix())?;
            let k = key.key(&m);
            let j = match keys.get(&k) {
                Some(&j) => j,
                None => {
                    let j = reps.len();
                    if j >= config.max_index {
                        return Err(Error::IndexBoundExceeded(config.max_index));
                    }
                    keys.insert(k, j);
                    reps.push(m);
                    parent.push(Some((i, letter)));
                    perm_s.push(usize::MAX);
                    perm_t.push(usize::MAX);
                    j
                }
            };
            match letter {
                Letter::S => perm_s[i] = j,
                Letter::T => perm_t[i] = j,
            }
        }
    }
    Ok(CosetAction { kind, level, perm_s, perm_t, reps, parent, keys, key })
}

/// `(e2, e3)`: fixed points of `S` and of `S·T`.
pub fn elliptic_counts(action: &CosetAction) -> (usize, usize) {
    let e2 = action.perm_s.iter().enumerate().filter(|(i, &j)| *i == j).count();
    let e3 = action.perm_st().iter().enumerate().filter(|(i, &j)| *i == j).count();
    (e2, e3)
}

/// `r = (d - 3e2 - 4e3)/6 + 1`.
pub fn free_rank(index: usize, e2: usize, e3: usize) -> Result<usize> {
    let num = index as i64 - 3 * e2 as i64 - 4 * e3 as i64;
    if num % 6 != 0 || num < -6 {
        return Err(Error::InvalidArgument(format!(
            "inconsistent elliptic data: d = {index}, e2 = {e2}, e3 = {e3}"
        )));
    }
    Ok((num / 6 + 1) as usize)
}

/// Lengths of the `T`-cycles (the cusp widths), in order of their smallest coset.
pub fn cusp_widths(action: &CosetAction) -> Vec<usize> {
    let mut seen = vec![false; action.degree()];
    let mut widths = Vec::new();
    for start in 0..action.degree() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = action.perm_t[i];
            len += 1;
        }
        widths.push(len);
    }
    widths
}

/// Least common multiple of the cusp widths.
pub fn general_level(action: &CosetAction) -> u64 {
    cusp_widths(action).into_iter().fold(1, |acc, w| lcm(acc, w as u64))
}

/// Index of Γ̄0(N) or Γ̄1(N) in PSL2(Z) from the product formulas.
pub fn index_formula(kind: GroupKind, level: u32) -> Result<u64> {
    let prof = factorize(level.into())?;
    let n = u64::from(level);
    let primes = prof.primes();
    match kind {
        GroupKind::Gamma1 if level >= 3 => {
            let mut d = n * n;
            for &p in &primes {
                d = d / (p * p) * (p * p - 1);
            }
            Ok(d / 2)
        }
        GroupKind::Gamma0 | GroupKind::Gamma1 => {
            let mut d = n;
            for &p in &primes {
                d = d / p * (p + 1);
            }
            Ok(d)
        }
        other => Err(Error::InvalidArgument(format!("no index formula for {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn action(kind: GroupKind, n: u32) -> CosetAction {
        build_coset_action(kind, n, &EngineConfig::default()).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(action(GroupKind::Gamma0, 1).degree(), 1);
        assert_eq!(action(GroupKind::Gamma0, 6).degree(), 12);
        assert_eq!(action(GroupKind::Gamma1, 5).degree(), 12);
        assert_eq!(index_formula(GroupKind::Gamma0, 16).unwrap(), 24);
        assert_eq!(index_formula(GroupKind::Gamma0, 1).unwrap(), 1);
        assert_eq!(index_formula(GroupKind::Gamma1, 4).unwrap(), 6);
        assert_eq!(index_formula(GroupKind::Gamma1, 2).unwrap(), 3);
    }

    #[test]
    fn orbit_degree_matches_formula() {
        for n in 1..=60 {
            assert_eq!(action(GroupKind::Gamma0, n).degree() as u64, index_formula(GroupKind::Gamma0, n).unwrap());
        }
        for n in 1..=20 {
            assert_eq!(action(GroupKind::Gamma1, n).degree() as u64, index_formula(GroupKind::Gamma1, n).unwrap());
        }
    }

    #[test]
    fn relations_hold() {
        for (kind, n) in [(GroupKind::Gamma0, 12), (GroupKind::Gamma1, 7), (GroupKind::Gamma0, 13)] {
            let a = action(kind, n);
            let st = a.perm_st();
            for i in 0..a.degree() {
                assert_eq!(a.perm_s()[a.perm_s()[i]], i);
                assert_eq!(st[st[st[i]]], i);
            }
        }
    }

    #[test]
    fn stabilizer_is_the_group() {
        for (kind, n) in [(GroupKind::Gamma0, 10), (GroupKind::Gamma1, 9)] {
            let a = action(kind, n);
            for i in 0..a.degree() {
                for letter in [Letter::S, Letter::T] {
                    let j = a.perm(letter)[i];
                    let g = a.reps()[i]
                        .multiply(&letter.matrix())
                        .unwrap()
                        .multiply(&a.reps()[j].inverse().unwrap())
                        .unwrap();
                    assert!(kind.contains_projective(n, &g));
                }
            }
            // distinct cosets have inequivalent representatives
            let r = a.reps();
            for i in 1..a.degree().min(12) {
                let g = r[i].multiply(&r[0].inverse().unwrap()).unwrap();
                assert!(!kind.contains_projective(n, &g));
            }
        }
    }

    #[test]
    fn elliptic_examples() {
        assert_eq!(elliptic_counts(&action(GroupKind::Gamma0, 9)), (0, 0));
        assert_eq!(elliptic_counts(&action(GroupKind::Gamma0, 5)), (2, 0));
        assert_eq!(elliptic_counts(&action(GroupKind::Gamma1, 7)), (0, 0));
        assert_eq!(elliptic_counts(&action(GroupKind::Gamma0, 1)), (1, 1));
        assert_eq!(elliptic_counts(&action(GroupKind::Gamma0, 13)), (2, 2));
    }

    /// Brute-force stabilizer check: coset Γ̄g is S-fixed iff g S g⁻¹ ∈ Γ̄.
    #[test]
    fn elliptic_points_by_stabilizers() {
        for n in [5u32, 10, 13, 21] {
            let a = action(GroupKind::Gamma0, n);
            let st = IntegerMatrix::S.multiply(&IntegerMatrix::T).unwrap();
            let e2 = a.reps().iter().filter(|g| {
                GroupKind::Gamma0.contains_projective(n, &g.conjugate(&IntegerMatrix::S).unwrap())
            }).count();
            let e3 = a.reps().iter().filter(|g| {
                GroupKind::Gamma0.contains_projective(n, &g.conjugate(&st).unwrap())
            }).count();
            assert_eq!(elliptic_counts(&a), (e2, e3), "N = {n}");
        }
    }

    #[test]
    fn free_ranks() {
        assert_eq!(free_rank(6, 0, 0).unwrap(), 2);
        assert_eq!(free_rank(24, 0, 0).unwrap(), 5);
        assert_eq!(free_rank(6, 2, 0).unwrap(), 1);
        assert_eq!(free_rank(1, 1, 1).unwrap(), 0);
        assert!(free_rank(7, 0, 0).is_err());
    }

    #[test]
    fn widths_and_levels() {
        assert_eq!(cusp_widths(&action(GroupKind::Gamma0, 1)), vec![1]);
        let mut w = cusp_widths(&action(GroupKind::Gamma0, 6));
        w.sort();
        assert_eq!(w, vec![1, 2, 3, 6]);
        assert_eq!(general_level(&action(GroupKind::Gamma0, 6)), 6);
        for n in 1..=20 {
            let a = action(GroupKind::Gamma1, n);
            assert_eq!(cusp_widths(&a).iter().sum::<usize>(), a.degree());
            assert_eq!(general_level(&a), u64::from(n));
        }
    }

    #[test]
    fn index_bound() {
        let cfg = EngineConfig { max_index: 10, ..EngineConfig::default() };
        assert_eq!(build_coset_action(GroupKind::Gamma0, 16, &cfg).unwrap_err(), Error::IndexBoundExceeded(10));
    }
}
