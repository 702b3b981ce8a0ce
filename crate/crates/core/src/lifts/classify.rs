//! Classification of every lift of Γ̄0(N) or Γ̄1(N).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2System};
use crate::kind::GroupKind;
use crate::matrix::IntegerMatrix;
use crate::presentation::GeneratorSet;
use crate::quotient::two_quotient;

use super::character::{Classification, LiftContext, LiftDescriptor, SignCharacter};

/// How the per-lift classifications were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// `e2 > 0`: the full preimage is the only lift.
    Trivial,
    /// Every lift closed modulo `2N`.
    Exhaustive,
    /// Counted through characters of `G̃/G̃'G̃²`; the witness is still closed.
    Character,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub kind: GroupKind,
    #[serde(rename = "N")]
    pub level: u32,
    pub index: usize,
    pub e2: usize,
    pub e3: usize,
    pub r: usize,
    #[serde(with = "crate::serde_biguint")]
    pub total_lifts: BigUint,
    #[serde(with = "crate::serde_biguint")]
    pub congruence: BigUint,
    #[serde(with = "crate::serde_biguint")]
    pub noncongruence: BigUint,
    pub route: Route,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lifts: Vec<LiftDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LiftDescriptor>,
}

impl ClassificationReport {
    pub fn all_congruence(&self) -> bool {
        self.noncongruence.is_zero()
    }
}

/// A lift with signs `ε` is congruence iff some `φ: V → F₂` on
/// `V = G̃/G̃'G̃²` has `φ(f_j) = ε_j`, `φ(odd) = 0` and `φ(-I) = 1`.
#[derive(Clone, Debug)]
pub struct CharacterRoute {
    dim: usize,
    free: Vec<u64>,
    odd: Vec<u64>,
    minus_one: u64,
}

impl CharacterRoute {
    pub fn new(ctx: &LiftContext) -> Result<Self> {
        let q = two_quotient(&ctx.full)?;
        let coord = |m: &IntegerMatrix| -> Result<u64> {
            q.coordinates(&m.reduce(ctx.modulus)?)
                .ok_or_else(|| Error::Internal(format!("{m} is not in the image of the full preimage")))
        };
        let free = ctx.gens.free().map(coord).collect::<Result<Vec<_>>>()?;
        let odd = ctx.gens.odd().map(coord).collect::<Result<Vec<_>>>()?;
        let minus_one = coord(&IntegerMatrix::MINUS_ONE)?;
        let route = CharacterRoute { dim: q.dim2(), free, odd, minus_one };
        let mut span = Gf2System::new(route.dim);
        for &m in route.free.iter().chain(&route.odd).chain([&route.minus_one]) {
            span.add_equation(BitVec::from_mask(route.dim, m), false);
        }
        if span.rank() != route.dim {
            return Err(Error::Internal("generator images do not span the 2-quotient".into()));
        }
        Ok(route)
    }

    pub fn dim2(&self) -> usize {
        self.dim
    }

    fn base_system(&self) -> Gf2System {
        let mut sys = Gf2System::new(self.dim);
        for &o in &self.odd {
            sys.add_equation(BitVec::from_mask(self.dim, o), false);
        }
        sys.add_equation(BitVec::from_mask(self.dim, self.minus_one), true);
        sys
    }

    /// Whether the lift with these free signs contains `Γ(2N)`.
    pub fn is_congruence(&self, ch: &SignCharacter) -> bool {
        if ch.full_preimage {
            return true;
        }
        let mut sys = self.base_system();
        for (&u, bit) in self.free.iter().zip(ch.bits()) {
            if !sys.add_equation(BitVec::from_mask(self.dim, u), bit) {
                return false;
            }
        }
        sys.is_consistent()
    }

    /// Number of congruence lifts other than the full preimage.
    pub fn congruence_count(&self) -> BigUint {
        let sys = self.base_system();
        if sys.is_consistent() {
            BigUint::one() << (self.dim - sys.rank())
        } else {
            BigUint::zero()
        }
    }

    /// Signs of some noncongruence lift: a congruence character with one sign
    /// flipped, or all +1 if no congruence character exists.
    pub fn noncongruence_character(&self) -> Option<SignCharacter> {
        let r = self.free.len();
        let Some(sol) = self.base_system().solve() else {
            return Some(SignCharacter::all_plus(r));
        };
        let phi = sol.particular;
        let signs = self
            .free
            .iter()
            .map(|&u| if BitVec::from_mask(self.dim, u).dot(&phi) { -1 } else { 1 })
            .collect();
        let base = SignCharacter { free_signs: signs, full_preimage: false };
        (0..r).map(|j| base.flipped(j)).find(|c| !self.is_congruence(c))
    }
}

/// Classifies every lift; per-lift descriptors are kept when `keep_lifts`.
pub fn classify_all(kind: GroupKind, level: u32, config: &EngineConfig) -> Result<ClassificationReport> {
    classify_all_with(kind, level, config, false)
}

pub fn classify_all_with(
    kind: GroupKind,
    level: u32,
    config: &EngineConfig,
    keep_lifts: bool,
) -> Result<ClassificationReport> {
    config.engine_modulus(level)?;
    let gens = GeneratorSet::build(kind, level, config)?;
    classify_generator_set(gens, config, keep_lifts)
}

pub fn classify_generator_set(
    gens: GeneratorSet,
    config: &EngineConfig,
    keep_lifts: bool,
) -> Result<ClassificationReport> {
    let ctx = LiftContext::new(gens, config)?;
    let gens = &ctx.gens;
    let full = ctx.classify(&SignCharacter::full_preimage())?;
    let mut report = ClassificationReport {
        kind: gens.kind,
        level: gens.level,
        index: gens.index,
        e2: gens.e2,
        e3: gens.e3,
        r: gens.r,
        total_lifts: BigUint::one(),
        congruence: BigUint::one(),
        noncongruence: BigUint::zero(),
        route: Route::Trivial,
        lifts: Vec::new(),
        witness: None,
    };
    if gens.e2 > 0 {
        if keep_lifts {
            report.lifts.push(full);
        }
        return Ok(report);
    }
    let route = CharacterRoute::new(&ctx)?;
    let r = gens.r;
    report.total_lifts = (BigUint::one() << r) + BigUint::one();
    let exhaustive = r < 64 && (1u64 << r) <= config.exhaustive_lift_cap;
    if exhaustive {
        let descriptors = (0..1u64 << r)
            .into_par_iter()
            .map(|bits| {
                let ch = SignCharacter::from_bits(r, bits);
                let d = ctx.classify(&ch)?;
                let by_character = route.is_congruence(&ch);
                if by_character != (d.classification == Classification::Congruence) {
                    return Err(Error::Internal(format!(
                        "closure and character routes disagree on {:?}",
                        ch.free_signs
                    )));
                }
                Ok(d)
            })
            .collect::<Result<Vec<_>>>()?;
        let cong = descriptors.iter().filter(|d| d.classification == Classification::Congruence).count();
        if BigUint::from(cong) != route.congruence_count() {
            return Err(Error::Internal("congruence count differs between routes".into()));
        }
        report.route = Route::Exhaustive;
        report.congruence = BigUint::from(cong + 1);
        report.witness =
            descriptors.iter().find(|d| d.classification == Classification::Noncongruence).cloned();
        if keep_lifts {
            report.lifts.push(full);
            report.lifts.extend(descriptors);
        }
    } else {
        report.route = Route::Character;
        report.congruence = route.congruence_count() + BigUint::one();
        if let Some(ch) = route.noncongruence_character() {
            let d = ctx.classify(&ch)?;
            if d.classification != Classification::Noncongruence {
                return Err(Error::Internal("character route witness closed to a congruence lift".into()));
            }
            report.witness = Some(d);
        }
    }
    report.noncongruence = &report.total_lifts - &report.congruence;
    if report.witness.is_some() == report.noncongruence.is_zero() {
        return Err(Error::Internal("witness presence does not match the noncongruence count".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{all_lifts_congruence_gamma0, count_congruence_lifts_formula};

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn triple(kind: GroupKind, n: u32) -> (u64, u64, u64) {
        let r = classify_all(kind, n, &cfg()).unwrap();
        let f = |b: &BigUint| u64::try_from(b).unwrap();
        (f(&r.total_lifts), f(&r.congruence), f(&r.noncongruence))
    }

    #[test]
    fn examples() {
        assert_eq!(triple(GroupKind::Gamma0, 8), (9, 9, 0));
        assert_eq!(triple(GroupKind::Gamma1, 4), (5, 5, 0));
        assert_eq!(triple(GroupKind::Gamma0, 9), (9, 3, 6));
        assert_eq!(triple(GroupKind::Gamma0, 6), (9, 5, 4));
        assert_eq!(triple(GroupKind::Gamma0, 3), (3, 3, 0));
        assert_eq!(triple(GroupKind::Gamma1, 5), (9, 3, 6));
        assert_eq!(triple(GroupKind::Gamma0, 5), (1, 1, 0));
    }

    #[test]
    fn character_route_matches_exhaustive() {
        let forced = EngineConfig { exhaustive_lift_cap: 0, ..cfg() };
        for (kind, n) in [(GroupKind::Gamma0, 6), (GroupKind::Gamma0, 9), (GroupKind::Gamma1, 7), (GroupKind::Gamma0, 12)] {
            let a = classify_all(kind, n, &cfg()).unwrap();
            let b = classify_all(kind, n, &forced).unwrap();
            assert_eq!(a.route, Route::Exhaustive);
            assert_eq!(b.route, Route::Character);
            assert_eq!((a.congruence, a.noncongruence), (b.congruence, b.noncongruence));
        }
    }

    #[test]
    fn counts_match_formula_and_predicate() {
        for n in 1..=20 {
            let rep = classify_all(GroupKind::Gamma0, n, &cfg()).unwrap();
            assert_eq!(rep.congruence, count_congruence_lifts_formula(GroupKind::Gamma0, n).unwrap().count, "N = {n}");
            if n != 7 {
                assert_eq!(rep.all_congruence(), all_lifts_congruence_gamma0(n).unwrap(), "N = {n}");
            }
        }
    }

    /// Γ̄0(7) ≅ Z/3 * Z/3 * Z has three lifts and three congruence lifts, so
    /// the closed predicate (which answers false at 7) disagrees here.
    #[test]
    fn gamma0_7_all_lifts_congruence() {
        let rep = classify_all_with(GroupKind::Gamma0, 7, &cfg(), true).unwrap();
        assert_eq!((rep.e2, rep.e3, rep.r), (0, 2, 1));
        assert_eq!(rep.total_lifts, BigUint::from(3u32));
        assert!(rep.all_congruence());
        assert!(rep.lifts.iter().all(|d| d.certificate.image_order * 2 == d.certificate.full_image_order
            || d.character.full_preimage));
        assert!(!all_lifts_congruence_gamma0(7).unwrap());
    }

    #[test]
    fn keeps_lifts_on_request() {
        let rep = classify_all_with(GroupKind::Gamma1, 5, &cfg(), true).unwrap();
        assert_eq!(rep.lifts.len(), 9);
        assert!(rep.lifts[0].character.full_preimage);
    }

    #[test]
    fn json_round_trip() {
        let rep = classify_all(GroupKind::Gamma0, 6, &cfg()).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<ClassificationReport>(&s).unwrap(), rep);
    }

    #[test]
    fn modulus_cap() {
        let small = cfg().with_max_modulus(10);
        assert!(matches!(classify_all(GroupKind::Gamma0, 6, &small), Err(Error::ModulusCapExceeded { .. })));
    }
}
