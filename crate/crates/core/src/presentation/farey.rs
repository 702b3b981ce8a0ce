//! Farey symbols by greedy refinement and the independent generators they give.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::kind::GroupKind;
use crate::matrix::{normalize_point, IntegerMatrix};

/// Order-3 rotation with `R(∞) = 0`, `R(0) = 1`.
const ROTATION: IntegerMatrix = IntegerMatrix { a: 0, b: 1, c: -1, d: 1 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideLabel {
    Even,
    Odd,
    Pair(usize),
}

/// A generalised Farey sequence `-∞, x_0, …, x_n, ∞` with one label per side.
///
/// Cusps are primitive column vectors `(a, b)` for `a/b`; `-∞` is `(-1, 0)`
/// and `∞` is `(1, 0)`, so every side matrix below has determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareySymbol {
    pub kind: GroupKind,
    #[serde(rename = "N")]
    pub level: u32,
    pub cusps: Vec<(i64, i64)>,
    pub labels: Vec<SideLabel>,
    pub seed: String,
}

impl FareySymbol {
    /// `A_i = (a_{i+1}, a_i; b_{i+1}, b_i)`, taking `0, ∞` to `x_i, x_{i+1}`.
    pub fn side_matrix(&self, i: usize) -> IntegerMatrix {
        side_matrix(&self.cusps, i)
    }

    pub fn sides(&self) -> usize {
        self.labels.len()
    }

    pub fn e2(&self) -> usize {
        self.labels.iter().filter(|l| **l == SideLabel::Even).count()
    }

    pub fn e3(&self) -> usize {
        self.labels.iter().filter(|l| **l == SideLabel::Odd).count()
    }

    /// Number of free side pairs.
    pub fn r(&self) -> usize {
        (self.sides() - self.e2() - self.e3()) / 2
    }

    /// `3(k - 1) + e3` for `k` finite fractions.
    pub fn index(&self) -> usize {
        3 * (self.cusps.len() - 2) + self.e3() - 3
    }

    /// The other side carrying the same pair label.
    pub fn partner(&self, side: usize) -> Option<usize> {
        match self.labels[side] {
            SideLabel::Pair(id) => {
                (0..self.sides()).find(|&k| k != side && self.labels[k] == SideLabel::Pair(id))
            }
            _ => None,
        }
    }

    /// Finite fractions as strings, e.g. `["0", "1/2", "1"]`.
    pub fn fractions(&self) -> Vec<String> {
        self.cusps[1..self.cusps.len() - 1].iter().map(|&(a, b)| fraction(a, b)).collect()
    }
}

impl fmt::Display for FareySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-inf")?;
        for (i, label) in self.labels.iter().enumerate() {
            let tag = match label {
                SideLabel::Even => "o".to_string(),
                SideLabel::Odd => "•".to_string(),
                SideLabel::Pair(id) => id.to_string(),
            };
            let (a, b) = self.cusps[i + 1];
            let next = if b == 0 { "inf".to_string() } else { fraction(a, b) };
            write!(f, " [{tag}] {next}")?;
        }
        Ok(())
    }
}

fn fraction(a: i64, b: i64) -> String {
    if b == 1 {
        a.to_string()
    } else {
        format!("{a}/{b}")
    }
}

fn side_matrix(cusps: &[(i64, i64)], i: usize) -> IntegerMatrix {
    let (a0, b0) = cusps[i];
    let (a1, b1) = cusps[i + 1];
    IntegerMatrix { a: a1, b: a0, c: b1, d: b0 }
}

fn same_point(p: (i64, i64), q: (i64, i64)) -> bool {
    normalize_point(p.0, p.1) == normalize_point(q.0, q.1)
}

/// Candidate side pairings; each is checked on endpoints before use.
struct Candidates<'a> {
    cusps: &'a [(i64, i64)],
}

impl Candidates<'_> {
    fn even(&self, i: usize) -> Result<IntegerMatrix> {
        let a = side_matrix(self.cusps, i);
        let g = a.conjugate(&IntegerMatrix::S)?;
        self.check(&g, i, i)?;
        Ok(g)
    }

    fn odd(&self, i: usize) -> Result<IntegerMatrix> {
        let a = side_matrix(self.cusps, i);
        let g = a.conjugate(&ROTATION)?.negate()?;
        // x_{i+1} -> x_i is the only endpoint condition for a rotation
        if !same_point(g.act(self.cusps[i + 1])?, self.cusps[i]) {
            return Err(Error::Internal(format!("odd candidate fails on side {i}")));
        }
        Ok(g)
    }

    /// `A_i S A_k⁻¹`: maps `x_k -> x_{i+1}` and `x_{k+1} -> x_i`.
    fn pair(&self, i: usize, k: usize) -> Result<IntegerMatrix> {
        let ai = side_matrix(self.cusps, i);
        let ak = side_matrix(self.cusps, k);
        let g = IntegerMatrix::product([&ai, &IntegerMatrix::S, &ak.inverse()?])?;
        self.check(&g, i, k)?;
        Ok(g)
    }

    /// Orientation-reversing endpoint map from side `k` onto side `i`.
    fn check(&self, g: &IntegerMatrix, i: usize, k: usize) -> Result<()> {
        let ok = same_point(g.act(self.cusps[k])?, self.cusps[i + 1])
            && same_point(g.act(self.cusps[k + 1])?, self.cusps[i]);
        if ok {
            Ok(())
        } else {
            Err(Error::Internal(format!("pairing candidate fails on sides {i}, {k}")))
        }
    }
}

/// Builds a Farey symbol for Γ̄0(N) or Γ̄1(N).
///
/// Starting from `-∞, 0, 1, ∞`, every unlabeled side is tested for an even
/// pairing, an odd pairing, or a free pairing with another unlabeled side. An
/// unlabeled side with the smallest mediant denominator (leftmost on ties) is
/// then split at its mediant.
pub fn farey_symbol(kind: GroupKind, level: u32, config: &EngineConfig) -> Result<FareySymbol> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    let effective = match kind {
        GroupKind::Gamma0 => GroupKind::Gamma0,
        GroupKind::Gamma1 if level <= 3 => GroupKind::Gamma0,
        GroupKind::Gamma1 => GroupKind::Gamma1,
        other => {
            return Err(Error::InvalidArgument(format!(
                "Farey symbols are built for gamma0 and gamma1, not {other}"
            )))
        }
    };
    let contains = |m: &IntegerMatrix| effective.contains_projective(level, m);

    if contains(&ROTATION) {
        if !contains(&IntegerMatrix::S) {
            return Err(Error::Unsupported("group contains the order-3 rotation but not S".into()));
        }
        return Ok(FareySymbol {
            kind,
            level,
            cusps: vec![(-1, 0), (0, 1), (1, 0)],
            labels: vec![SideLabel::Even, SideLabel::Odd],
            seed: "-inf,0,inf".into(),
        });
    }

    let mut cusps: Vec<(i64, i64)> = vec![(-1, 0), (0, 1), (1, 1), (1, 0)];
    let mut labels: Vec<Option<SideLabel>> = vec![None; 3];
    let mut pending: Vec<usize> = vec![0, 1, 2];
    let mut next_pair = 0;
    // each insertion adds one finite fraction; the final symbol has at most index/3 + 2
    let cap = config.max_index / 3 + 4;
    let mut insertions = 0;

    loop {
        let cand = Candidates { cusps: &cusps };
        for &i in &pending {
            if labels[i].is_some() {
                continue;
            }
            if contains(&cand.even(i)?) {
                labels[i] = Some(SideLabel::Even);
                continue;
            }
            if contains(&cand.odd(i)?) {
                labels[i] = Some(SideLabel::Odd);
                continue;
            }
            for k in 0..labels.len() {
                if k == i || labels[k].is_some() {
                    continue;
                }
                let (lo, hi) = (i.min(k), i.max(k));
                if contains(&cand.pair(lo, hi)?) {
                    labels[lo] = Some(SideLabel::Pair(next_pair));
                    labels[hi] = Some(SideLabel::Pair(next_pair));
                    next_pair += 1;
                    break;
                }
            }
        }
        // smallest mediant denominator first keeps the fractions small
        let Some(i) = (0..labels.len())
            .filter(|&i| labels[i].is_none())
            .min_by_key(|&i| (cusps[i].1 + cusps[i + 1].1, i))
        else {
            break;
        };
        insertions += 1;
        if insertions > cap {
            return Err(Error::RefinementCapExceeded(cap));
        }
        let (a0, b0) = cusps[i];
        let (a1, b1) = cusps[i + 1];
        let a = a0.checked_add(a1).ok_or(Error::Overflow("mediant"))?;
        let b = b0.checked_add(b1).ok_or(Error::Overflow("mediant"))?;
        cusps.insert(i + 1, (a, b));
        labels.insert(i + 1, None);
        pending = vec![i, i + 1];
    }

    let symbol = FareySymbol {
        kind,
        level,
        cusps,
        labels: labels.into_iter().map(|l| l.expect("all sides labeled")).collect(),
        seed: "-inf,0,1,inf".into(),
    };
    if symbol.index() > config.max_index {
        return Err(Error::IndexBoundExceeded(config.max_index));
    }
    Ok(symbol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorType {
    Even,
    Odd,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub matrix: IntegerMatrix,
    #[serde(rename = "type")]
    pub kind: GeneratorType,
}

/// Independent generators of Γ̄: `e2` of order 2, `e3` of order 3 and `r` free.
///
/// Odd generators have trace -1, so their cube is `+I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub kind: GroupKind,
    #[serde(rename = "N")]
    pub level: u32,
    pub index: usize,
    pub e2: usize,
    pub e3: usize,
    pub r: usize,
    pub generators: Vec<Generator>,
    pub seed: String,
}

impl GeneratorSet {
    /// Farey symbol and generators in one step.
    pub fn build(kind: GroupKind, level: u32, config: &EngineConfig) -> Result<Self> {
        generators_from_symbol(&farey_symbol(kind, level, config)?)
    }

    pub fn matrices(&self) -> impl Iterator<Item = &IntegerMatrix> {
        self.generators.iter().map(|g| &g.matrix)
    }

    pub fn free(&self) -> impl Iterator<Item = &IntegerMatrix> {
        self.generators.iter().filter(|g| g.kind == GeneratorType::Free).map(|g| &g.matrix)
    }

    pub fn odd(&self) -> impl Iterator<Item = &IntegerMatrix> {
        self.generators.iter().filter(|g| g.kind == GeneratorType::Odd).map(|g| &g.matrix)
    }
}

/// One generator per even side, odd side and side pair, in side order.
pub fn generators_from_symbol(symbol: &FareySymbol) -> Result<GeneratorSet> {
    let effective = if symbol.kind == GroupKind::Gamma1 && symbol.level <= 3 {
        GroupKind::Gamma0
    } else {
        symbol.kind
    };
    let cand = Candidates { cusps: &symbol.cusps };
    let mut generators = Vec::new();
    for i in 0..symbol.sides() {
        let (matrix, kind) = match symbol.labels[i] {
            SideLabel::Even => (cand.even(i)?, GeneratorType::Even),
            SideLabel::Odd => (cand.odd(i)?, GeneratorType::Odd),
            SideLabel::Pair(_) => {
                let k = symbol
                    .partner(i)
                    .ok_or_else(|| Error::Internal(format!("side {i} has no partner")))?;
                if k < i {
                    continue;
                }
                (cand.pair(i, k)?, GeneratorType::Free)
            }
        };
        if !effective.contains_projective(symbol.level, &matrix) {
            return Err(Error::Internal(format!("generator {matrix} is not in the group")));
        }
        let trace = matrix.trace()?;
        let trace_ok = match kind {
            GeneratorType::Even => trace == 0,
            GeneratorType::Odd => trace == -1,
            GeneratorType::Free => trace.abs() >= 2,
        };
        if !trace_ok {
            return Err(Error::Internal(format!("generator {matrix} has trace {trace} for {kind:?}")));
        }
        generators.push(Generator { matrix, kind });
    }
    Ok(GeneratorSet {
        kind: symbol.kind,
        level: symbol.level,
        index: symbol.index(),
        e2: symbol.e2(),
        e3: symbol.e3(),
        r: symbol.r(),
        generators,
        seed: symbol.seed.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{closure, subgroup_by_membership};
    use crate::presentation::coset::{build_coset_action, elliptic_counts, free_rank};

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn counts(kind: GroupKind, n: u32) -> (usize, usize, usize) {
        let s = farey_symbol(kind, n, &cfg()).unwrap();
        (s.e2(), s.e3(), s.r())
    }

    #[test]
    fn small_symbols() {
        assert_eq!(counts(GroupKind::Gamma0, 1), (1, 1, 0));
        assert_eq!(counts(GroupKind::Gamma0, 6), (0, 0, 3));
        assert_eq!(counts(GroupKind::Gamma1, 4), (0, 0, 2));
        assert_eq!(counts(GroupKind::Gamma0, 2), (1, 0, 1));
        assert_eq!(counts(GroupKind::Gamma0, 3), (0, 1, 1));
    }

    #[test]
    fn unimodular_and_consistent() {
        for kind in [GroupKind::Gamma0, GroupKind::Gamma1] {
            for n in 1..=30 {
                let s = farey_symbol(kind, n, &cfg()).unwrap();
                for i in 0..s.sides() {
                    assert_eq!(s.side_matrix(i).det(), 1);
                }
                let a = build_coset_action(kind, n, &cfg()).unwrap();
                let (e2, e3) = elliptic_counts(&a);
                assert_eq!(s.index(), a.degree(), "{kind} {n}: {s}");
                assert_eq!((s.e2(), s.e3()), (e2, e3), "{kind} {n}");
                assert_eq!(s.r(), free_rank(a.degree(), e2, e3).unwrap());
                for i in 0..s.sides() {
                    if let Some(k) = s.partner(i) {
                        assert_eq!(s.partner(k), Some(i));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let g = GeneratorSet::build(GroupKind::Gamma0, 6, &cfg()).unwrap();
        assert_eq!(g.generators.len(), 3);
        assert!(g.generators.iter().all(|x| x.kind == GeneratorType::Free && x.matrix.c % 6 == 0));

        let g = GeneratorSet::build(GroupKind::Gamma0, 5, &cfg()).unwrap();
        let kinds: Vec<_> = g.generators.iter().map(|x| x.kind).collect();
        assert_eq!(kinds.iter().filter(|k| **k == GeneratorType::Even).count(), 2);
        assert_eq!(kinds.iter().filter(|k| **k == GeneratorType::Free).count(), 1);

        let g = GeneratorSet::build(GroupKind::Gamma1, 5, &cfg()).unwrap();
        assert_eq!(g.free().count(), 3);
        assert_eq!(g.generators.len(), 3);
    }

    /// The generators with -I have the same image as Γ̃ modulo N and 2N.
    #[test]
    fn generation_check() {
        for kind in [GroupKind::Gamma0, GroupKind::Gamma1] {
            for n in 1..=16u32 {
                let g = GeneratorSet::build(kind, n, &cfg()).unwrap();
                assert_eq!(g.generators.len(), g.e2 + g.e3 + g.r);
                for m in [n, 2 * n] {
                    let mut gens: Vec<_> = g.matrices().map(|x| x.reduce(m).unwrap()).collect();
                    gens.push(IntegerMatrix::MINUS_ONE.reduce(m).unwrap());
                    let h = closure(&gens, m).unwrap();
                    let full = subgroup_by_membership(kind, n, m, &cfg()).unwrap().with_minus_one();
                    assert_eq!(h.order(), full.order(), "{kind} N = {n} mod {m}");
                }
            }
        }
    }

    #[test]
    fn json_schema() {
        let g = GeneratorSet::build(GroupKind::Gamma0, 6, &cfg()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&g).unwrap();
        for key in ["kind", "N", "index", "e2", "e3", "r", "generators"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["kind"], "gamma0");
        assert_eq!(v["generators"][0]["type"], "free");
        assert_eq!(v["generators"][0]["matrix"].as_array().unwrap().len(), 4);
        let back: GeneratorSet = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn gamma_is_rejected() {
        assert!(farey_symbol(GroupKind::Gamma, 4, &cfg()).is_err());
        assert_eq!(farey_symbol(GroupKind::Gamma0, 0, &cfg()).unwrap_err(), Error::ZeroLevel);
    }
}
