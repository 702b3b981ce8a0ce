//! Sign characters on a Farey presentation and the lift subgroups they cut out.

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::group::{closure, full_preimage_image, ResidueMatrixGroup};
use crate::matrix::IntegerMatrix;
use crate::presentation::{GeneratorSet, GeneratorType};

/// Largest `r` for which [`enumerate_lifts`] materialises every character.
pub const ENUMERATION_LIMIT: usize = 24;

/// A homomorphism `Γ̃ → {±1}` with `-I ↦ -1`, given by its values on the free
/// generators. Odd generators have trace -1 and therefore sign +1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignCharacter {
    pub free_signs: Vec<i8>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub full_preimage: bool,
}

impl SignCharacter {
    pub fn full_preimage() -> Self {
        SignCharacter { free_signs: Vec::new(), full_preimage: true }
    }

    /// Bit `j` of `bits` set means sign -1 on free generator `j`.
    pub fn from_bits(r: usize, bits: u64) -> Self {
        let free_signs = (0..r).map(|j| if j < 64 && bits >> j & 1 == 1 { -1 } else { 1 }).collect();
        SignCharacter { free_signs, full_preimage: false }
    }

    pub fn from_signs(free_signs: Vec<i8>) -> Result<Self> {
        if free_signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(SignCharacter { free_signs, full_preimage: false })
    }

    pub fn all_plus(r: usize) -> Self {
        SignCharacter::from_bits(r, 0)
    }

    pub fn r(&self) -> usize {
        self.free_signs.len()
    }

    /// Signs as F₂ bits (1 for -1).
    pub fn bits(&self) -> Vec<bool> {
        self.free_signs.iter().map(|&s| s == -1).collect()
    }

    /// The same character with free sign `j` flipped.
    pub fn flipped(&self, j: usize) -> Self {
        let mut c = self.clone();
        c.free_signs[j] = -c.free_signs[j];
        c
    }

    fn check(&self, gens: &GeneratorSet) -> Result<()> {
        if self.full_preimage {
            return Ok(());
        }
        if gens.e2 > 0 {
            return Err(Error::InvalidArgument(
                "a group with elliptic elements of order 2 has only the full preimage as lift".into(),
            ));
        }
        if self.r() != gens.r {
            return Err(Error::InvalidArgument(format!(
                "character has {} signs, presentation has {} free generators",
                self.r(),
                gens.r
            )));
        }
        Ok(())
    }
}

/// Every lift of Γ̄: only the full preimage when `e2 > 0`, otherwise the full
/// preimage followed by the `2^r` characters in binary order.
pub fn enumerate_lifts(gens: &GeneratorSet) -> Result<Vec<SignCharacter>> {
    let mut out = vec![SignCharacter::full_preimage()];
    if gens.e2 > 0 {
        return Ok(out);
    }
    if gens.r > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count: format!("2^{}", gens.r),
            cap: 1 << ENUMERATION_LIMIT,
        });
    }
    out.extend((0..1u64 << gens.r).map(|bits| SignCharacter::from_bits(gens.r, bits)));
    Ok(out)
}

/// Generators of Γ̃ with their character values: the Farey generators, then `-I`.
fn signed_base(gens: &GeneratorSet, ch: &SignCharacter) -> Vec<(IntegerMatrix, i8)> {
    let mut free = ch.free_signs.iter();
    let mut out: Vec<(IntegerMatrix, i8)> = gens
        .generators
        .iter()
        .map(|g| match g.kind {
            GeneratorType::Free => (g.matrix, *free.next().expect("one sign per free generator")),
            _ => (g.matrix, 1),
        })
        .collect();
    out.push((IntegerMatrix::MINUS_ONE, -1));
    out
}

/// `±f_j` with the sign making it lie in the lift, plus the odd generators.
pub fn signed_generators(gens: &GeneratorSet, ch: &SignCharacter) -> Result<Vec<IntegerMatrix>> {
    ch.check(gens)?;
    signed_base(gens, ch)
        .into_iter()
        .filter(|(m, _)| *m != IntegerMatrix::MINUS_ONE)
        .map(|(m, s)| if s == 1 { Ok(m) } else { m.negate() })
        .collect()
}

/// Which element represents the nontrivial coset of the lift in Γ̃.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transversal {
    /// The first free generator with sign -1, else `-I`.
    First,
    /// The last free generator with sign -1, else `-I`.
    Last,
    MinusOne,
}

/// Generators of the kernel of `ch` by the two-coset Schreier recipe.
pub fn lift_generators(gens: &GeneratorSet, ch: &SignCharacter) -> Result<Vec<IntegerMatrix>> {
    lift_generators_with(gens, ch, Transversal::First)
}

pub fn lift_generators_with(
    gens: &GeneratorSet,
    ch: &SignCharacter,
    transversal: Transversal,
) -> Result<Vec<IntegerMatrix>> {
    if ch.full_preimage {
        return Err(Error::FullPreimage);
    }
    ch.check(gens)?;
    let base = signed_base(gens, ch);
    let negative = base.iter().filter(|(m, s)| *s == -1 && *m != IntegerMatrix::MINUS_ONE);
    let w = match transversal {
        Transversal::First => negative.map(|(m, _)| *m).next(),
        Transversal::Last => negative.map(|(m, _)| *m).next_back(),
        Transversal::MinusOne => None,
    }
    .unwrap_or(IntegerMatrix::MINUS_ONE);
    let w_inv = w.inverse()?;

    let mut out: Vec<IntegerMatrix> = Vec::new();
    let mut push = |m: IntegerMatrix| -> Result<()> {
        if m == IntegerMatrix::IDENTITY || out.contains(&m) || out.contains(&m.inverse()?) {
            return Ok(());
        }
        out.push(m);
        Ok(())
    };
    for (x, sign) in base {
        if sign == 1 {
            push(x)?;
            push(IntegerMatrix::product([&w, &x, &w_inv])?)?;
        } else {
            push(x.multiply(&w_inv)?)?;
            push(w.multiply(&x)?)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Congruence,
    Noncongruence,
}

/// Orders of the lift's image `H` and of the image of Γ̃ modulo `2N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub image_order: usize,
    pub full_image_order: usize,
    pub modulus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDescriptor {
    pub character: SignCharacter,
    pub generators: Vec<IntegerMatrix>,
    pub classification: Classification,
    pub certificate: Certificate,
}

/// The image of Γ̃ modulo `2N`, shared by every lift of one group.
#[derive(Clone, Debug)]
pub struct LiftContext {
    pub gens: GeneratorSet,
    pub modulus: u32,
    pub full: ResidueMatrixGroup,
}

impl LiftContext {
    pub fn new(gens: GeneratorSet, config: &EngineConfig) -> Result<Self> {
        let modulus = config.engine_modulus(gens.level)?;
        let full = full_preimage_image(gens.kind, gens.level, modulus, config)?;
        Ok(LiftContext { gens, modulus, full })
    }

    /// Closure of the reductions of `generators` modulo `2N`.
    pub fn image(&self, generators: &[IntegerMatrix]) -> Result<ResidueMatrixGroup> {
        let reduced = generators.iter().map(|g| g.reduce(self.modulus)).collect::<Result<Vec<_>>>()?;
        for (g, x) in generators.iter().zip(&reduced) {
            if !self.full.contains(x) {
                return Err(Error::Internal(format!("lift generator {g} is not in the full preimage")));
            }
        }
        closure(&reduced, self.modulus)
    }

    /// Classifies `ch` by comparing `|H|` with `|G̃|`.
    pub fn classify(&self, ch: &SignCharacter) -> Result<LiftDescriptor> {
        let (generators, image) = if ch.full_preimage {
            let mut g: Vec<IntegerMatrix> = self.gens.matrices().copied().collect();
            g.push(IntegerMatrix::MINUS_ONE);
            let image = self.image(&g)?;
            g.pop();
            (g, image)
        } else {
            let g = lift_generators(&self.gens, ch)?;
            let image = self.image(&g)?;
            (g, image)
        };
        let certificate = Certificate {
            image_order: image.order(),
            full_image_order: self.full.order(),
            modulus: self.modulus,
        };
        let classification = classify_certificate(&certificate, ch.full_preimage)?;
        Ok(LiftDescriptor { character: ch.clone(), generators, classification, certificate })
    }
}

/// Reads the classification off a certificate, enforcing the dichotomy
/// `|H| ∈ {|G̃|/2, |G̃|}`.
pub fn classify_certificate(cert: &Certificate, full_preimage: bool) -> Result<Classification> {
    let (h, g) = (cert.image_order, cert.full_image_order);
    if full_preimage {
        return if h == g {
            Ok(Classification::Congruence)
        } else {
            Err(Error::Internal(format!("full preimage has image order {h}, expected {g}")))
        };
    }
    if 2 * h == g {
        Ok(Classification::Congruence)
    } else if h == g {
        Ok(Classification::Noncongruence)
    } else {
        Err(Error::Internal(format!("lift image order {h} is neither {g} nor {}", g / 2)))
    }
}

/// Congruence test for one lift via its image modulo `2N`.
pub fn is_congruence(gens: &GeneratorSet, ch: &SignCharacter, config: &EngineConfig) -> Result<LiftDescriptor> {
    LiftContext::new(gens.clone(), config)?.classify(ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kind::GroupKind;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn gens(kind: GroupKind, n: u32) -> GeneratorSet {
        GeneratorSet::build(kind, n, &cfg()).unwrap()
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_lifts(&gens(GroupKind::Gamma1, 4)).unwrap().len(), 5);
        assert_eq!(enumerate_lifts(&gens(GroupKind::Gamma0, 16)).unwrap().len(), 33);
        let only = enumerate_lifts(&gens(GroupKind::Gamma0, 5)).unwrap();
        assert_eq!(only, vec![SignCharacter::full_preimage()]);
    }

    #[test]
    fn schreier_generator_counts() {
        let g = gens(GroupKind::Gamma1, 5);
        assert_eq!(lift_generators(&g, &SignCharacter::all_plus(3)).unwrap().len(), 3);
        assert_eq!(lift_generators(&g, &SignCharacter::from_bits(3, 0b010)).unwrap().len(), 6);
        assert_eq!(lift_generators(&g, &SignCharacter::full_preimage()).unwrap_err(), Error::FullPreimage);
    }

    #[test]
    fn generators_stay_in_the_group() {
        let g = gens(GroupKind::Gamma0, 6);
        for ch in enumerate_lifts(&g).unwrap().into_iter().skip(1) {
            for m in lift_generators(&g, &ch).unwrap() {
                assert!(GroupKind::Gamma0.contains_projective(6, &m));
                assert_ne!(m, IntegerMatrix::MINUS_ONE);
            }
        }
    }

    #[test]
    fn full_preimage_is_congruence() {
        let d = is_congruence(&gens(GroupKind::Gamma0, 6), &SignCharacter::full_preimage(), &cfg()).unwrap();
        assert_eq!(d.classification, Classification::Congruence);
        assert_eq!(d.certificate.image_order, d.certificate.full_image_order);
    }

    fn tally(kind: GroupKind, n: u32) -> (usize, usize) {
        let g = gens(kind, n);
        let ctx = LiftContext::new(g.clone(), &cfg()).unwrap();
        let mut cong = 0;
        let mut non = 0;
        for ch in enumerate_lifts(&g).unwrap() {
            match ctx.classify(&ch).unwrap().classification {
                Classification::Congruence => cong += 1,
                Classification::Noncongruence => non += 1,
            }
        }
        (cong, non)
    }

    #[test]
    fn classification_examples() {
        assert_eq!(tally(GroupKind::Gamma1, 5), (3, 6));
        assert_eq!(tally(GroupKind::Gamma0, 6), (5, 4));
        assert_eq!(tally(GroupKind::Gamma0, 9), (3, 6));
        assert_eq!(tally(GroupKind::Gamma0, 8), (9, 0));
        assert_eq!(tally(GroupKind::Gamma1, 4), (5, 0));
        assert_eq!(tally(GroupKind::Gamma0, 3), (3, 0));
    }

    #[test]
    fn transversal_choice_does_not_matter() {
        let g = gens(GroupKind::Gamma0, 10);
        let ctx = LiftContext::new(g.clone(), &cfg()).unwrap();
        for ch in enumerate_lifts(&g).unwrap().into_iter().skip(1) {
            let orders: Vec<usize> = [Transversal::First, Transversal::Last, Transversal::MinusOne]
                .into_iter()
                .map(|t| ctx.image(&lift_generators_with(&g, &ch, t).unwrap()).unwrap().order())
                .collect();
            assert!(orders.windows(2).all(|w| w[0] == w[1]), "{ch:?}: {orders:?}");
        }
    }

    #[test]
    fn dichotomy_rejects_other_orders() {
        let cert = Certificate { image_order: 10, full_image_order: 40, modulus: 8 };
        assert!(classify_certificate(&cert, false).is_err());
        assert!(classify_certificate(&Certificate { image_order: 20, ..cert }, true).is_err());
    }
}
