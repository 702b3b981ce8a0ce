//! Exportable noncongruence witnesses, their propagation to subgroups, and
//! independent re-verification.

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::kind::GroupKind;
use crate::matrix::IntegerMatrix;
use crate::presentation::GeneratorSet;

use super::action::LiftAction;
use super::character::{signed_generators, Certificate, Classification, LiftContext, LiftDescriptor, SignCharacter};
use super::classify::{CharacterRoute, ClassificationReport};

/// A noncongruence lift with explicit generators and the orders proving it.
///
/// The generators are the signed representatives `±g` lying in the lift. They
/// generate it because the lift meets `{±I}` trivially and maps onto Γ̄.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: GroupKind,
    #[serde(rename = "N")]
    pub level: u32,
    pub character: SignCharacter,
    pub generators: Vec<IntegerMatrix>,
    pub certificate: Certificate,
    #[serde(default)]
    pub origin: String,
}

impl Witness {
    pub fn from_descriptor(
        gens: &GeneratorSet,
        d: &LiftDescriptor,
        origin: impl Into<String>,
    ) -> Result<Self> {
        Ok(Witness {
            kind: gens.kind,
            level: gens.level,
            character: d.character.clone(),
            generators: signed_generators(gens, &d.character)?,
            certificate: d.certificate,
            origin: origin.into(),
        })
    }
}

/// A witness for Γ̄0(N) or Γ̄1(N) found through the 2-quotient.
pub fn find_witness(kind: GroupKind, level: u32, config: &EngineConfig) -> Result<Witness> {
    if kind == GroupKind::Gamma || kind == GroupKind::Full {
        return Err(Error::Unsupported(format!("witnesses are constructed for gamma0 and gamma1, not {kind}")));
    }
    config.engine_modulus(level)?;
    let gens = GeneratorSet::build(kind, level, config)?;
    if gens.e2 > 0 {
        return Err(Error::NoNoncongruenceLift { kind, level });
    }
    let ctx = LiftContext::new(gens, config)?;
    let ch = CharacterRoute::new(&ctx)?
        .noncongruence_character()
        .ok_or(Error::NoNoncongruenceLift { kind, level })?;
    let d = ctx.classify(&ch)?;
    if d.classification != Classification::Noncongruence {
        return Err(Error::Internal("witness character closed to a congruence lift".into()));
    }
    Witness::from_descriptor(&ctx.gens, &d, "direct")
}

/// The witness of a classification report carried down to `child(child_level)`.
pub fn propagate_witness(
    parent: &ClassificationReport,
    child_kind: GroupKind,
    child_level: u32,
    config: &EngineConfig,
) -> Result<Witness> {
    let d = parent
        .witness
        .as_ref()
        .ok_or(Error::NoNoncongruenceLift { kind: parent.kind, level: parent.level })?;
    let gens = GeneratorSet::build(parent.kind, parent.level, config)?;
    let w = Witness::from_descriptor(&gens, d, "direct")?;
    propagate_from(&w, child_kind, child_level, config)
}

/// Intersects the parent's lift with the full preimage of the child group.
///
/// The intersection is a lift of the child group; its signs on the child's free
/// generators are the parent character evaluated through the cover of the
/// parent's coset action.
pub fn propagate_from(
    parent: &Witness,
    child_kind: GroupKind,
    child_level: u32,
    config: &EngineConfig,
) -> Result<Witness> {
    if !child_kind.is_subgroup_of(child_level, parent.kind, parent.level) {
        return Err(Error::NotASubgroup(
            format!("{child_kind}({child_level})"),
            format!("{}({})", parent.kind, parent.level),
        ));
    }
    config.engine_modulus(child_level)?;
    let parent_gens = GeneratorSet::build(parent.kind, parent.level, config)?;
    let cover = LiftAction::new(&parent_gens, config)?;
    let chi = cover.cocycle(&parent.character)?;

    let child_gens = GeneratorSet::build(child_kind, child_level, config)?;
    if child_gens.e2 > 0 {
        return Err(Error::Internal("subgroup of a group without order-2 elements has e2 > 0".into()));
    }
    let sign = |m: &IntegerMatrix| -> Result<i8> {
        chi.sign(m)?.ok_or_else(|| Error::Internal(format!("{m} is not in the parent group")))
    };
    for o in child_gens.odd() {
        if sign(o)? != 1 {
            return Err(Error::Internal(format!("odd generator {o} has sign -1")));
        }
    }
    let signs = child_gens.free().map(sign).collect::<Result<Vec<_>>>()?;
    let ch = SignCharacter::from_signs(signs)?;
    let ctx = LiftContext::new(child_gens, config)?;
    let d = ctx.classify(&ch)?;
    if d.classification != Classification::Noncongruence {
        return Err(Error::Internal("propagated lift is congruence".into()));
    }
    let origin = format!("propagated from {}({})", parent.kind, parent.level);
    Witness::from_descriptor(&ctx.gens, &d, origin)
}

/// Re-derives the generators from the character, recloses them modulo `2N`
/// and checks the recorded certificate.
pub fn verify_witness(w: &Witness, config: &EngineConfig) -> Result<Certificate> {
    let reject = |msg: String| Err(Error::WitnessRejected(msg));
    let gens = GeneratorSet::build(w.kind, w.level, config)?;
    if w.character.full_preimage || w.character.r() != gens.r || gens.e2 > 0 {
        return reject(format!("character does not fit {}({})", w.kind, w.level));
    }
    for g in &w.generators {
        if !w.kind.contains_projective(w.level, g) {
            return reject(format!("{g} is not in {}({})", w.kind, w.level));
        }
    }
    if signed_generators(&gens, &w.character)? != w.generators {
        return reject("generators do not match the character".into());
    }
    let ctx = LiftContext::new(gens, config)?;
    let image = ctx.image(&w.generators)?;
    let cert = Certificate {
        image_order: image.order(),
        full_image_order: ctx.full.order(),
        modulus: ctx.modulus,
    };
    if cert != w.certificate {
        return reject(format!("recorded certificate {:?}, recomputed {:?}", w.certificate, cert));
    }
    if cert.image_order != cert.full_image_order {
        return reject("image is a proper subgroup; the lift is congruence".into());
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifts::classify::classify_all;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn direct_witness_verifies() {
        let w = find_witness(GroupKind::Gamma1, 5, &cfg()).unwrap();
        assert_eq!(w.character.r(), 3);
        assert_eq!(w.generators.len(), 3);
        assert_eq!(w.certificate.modulus, 10);
        assert_eq!(w.certificate.image_order, w.certificate.full_image_order);
        assert_eq!(verify_witness(&w, &cfg()).unwrap(), w.certificate);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<Witness>(&s).unwrap(), w);
    }

    #[test]
    fn nonexistence() {
        for (kind, n) in [(GroupKind::Gamma0, 4), (GroupKind::Gamma0, 8), (GroupKind::Gamma0, 5), (GroupKind::Gamma1, 4)] {
            assert_eq!(find_witness(kind, n, &cfg()).unwrap_err(), Error::NoNoncongruenceLift { kind, level: n });
        }
    }

    #[test]
    fn propagation() {
        let parent = classify_all(GroupKind::Gamma0, 6, &cfg()).unwrap();
        for (kind, n) in [(GroupKind::Gamma1, 6), (GroupKind::Gamma0, 12), (GroupKind::Gamma1, 12)] {
            let w = propagate_witness(&parent, kind, n, &cfg()).unwrap();
            assert_eq!(w.certificate.modulus, 2 * n);
            verify_witness(&w, &cfg()).unwrap();
        }
        let none = classify_all(GroupKind::Gamma0, 8, &cfg()).unwrap();
        assert!(matches!(
            propagate_witness(&none, GroupKind::Gamma0, 16, &cfg()),
            Err(Error::NoNoncongruenceLift { .. })
        ));
        assert!(matches!(
            propagate_witness(&parent, GroupKind::Gamma0, 9, &cfg()),
            Err(Error::NotASubgroup(..))
        ));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let mut w = find_witness(GroupKind::Gamma0, 6, &cfg()).unwrap();
        w.certificate.image_order /= 2;
        assert!(matches!(verify_witness(&w, &cfg()), Err(Error::WitnessRejected(_))));
        let mut w = find_witness(GroupKind::Gamma0, 6, &cfg()).unwrap();
        w.generators.pop();
        assert!(matches!(verify_witness(&w, &cfg()), Err(Error::WitnessRejected(_))));
    }
}
