//! Lifts as double covers of the coset action.
//!
//! A lift `L` (without `-I`) of Γ̄ has `2d` cosets in SL2(Z), sitting over the
//! `d` cosets of Γ̄ as pairs `(i, f)` with `f ∈ F₂`. Each generator edge
//! `i --S--> j` or `i --T--> j` carries a bit `x` and sends `(i, f)` to
//! `(j, f + x)`. Fixing the bits on a spanning tree to 0, the covers are the
//! solutions of
//!
//! * `x(i,S) + x(iS,S) = 1`, since `S² = -I` swaps the two sheets, and
//! * the six bits along `(ST)³` from each coset sum to 1, since `(ST)³ = -I`.
//!
//! The solution space is affine of dimension `r`, one point per lift.

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2System};
use crate::matrix::IntegerMatrix;
use crate::presentation::{build_coset_action, CosetAction, GeneratorSet, GeneratorType, Letter};

use super::character::SignCharacter;

/// A word in `S` and `T`: letters with exponents (`S` always has exponent 1).
pub type Word = Vec<(Letter, i64)>;

/// Writes `g` as a product of `S` and powers of `T`, exactly in SL2(Z).
pub fn st_word(g: &IntegerMatrix) -> Result<Word> {
    let mut word = Vec::new();
    let (mut a, mut b, mut c, mut d) = (g.a, g.b, g.c, g.d);
    while c != 0 {
        let q = floor_div(a, c).ok_or(Error::Overflow("word"))?;
        if q != 0 {
            word.push((Letter::T, q));
        }
        a = a.checked_sub(q.checked_mul(c).ok_or(Error::Overflow("word"))?).ok_or(Error::Overflow("word"))?;
        b = b.checked_sub(q.checked_mul(d).ok_or(Error::Overflow("word"))?).ok_or(Error::Overflow("word"))?;
        word.push((Letter::S, 1));
        // S⁻¹·(a b; c d) = (c d; -a -b)
        (a, b, c, d) = (c, d, -a, -b);
    }
    match a {
        1 => {
            if b != 0 {
                word.push((Letter::T, b));
            }
        }
        -1 => {
            word.push((Letter::S, 1));
            word.push((Letter::S, 1));
            if b != 0 {
                word.push((Letter::T, -b));
            }
        }
        _ => return Err(Error::Internal(format!("{g} did not reduce to ±T^k"))),
    }
    Ok(word)
}

fn floor_div(a: i64, c: i64) -> Option<i64> {
    let q = a.checked_div(c)?;
    if (a % c != 0) && ((a < 0) != (c < 0)) {
        Some(q - 1)
    } else {
        Some(q)
    }
}

/// Evaluates a word as a matrix.
pub fn word_matrix(word: &Word) -> Result<IntegerMatrix> {
    let mut m = IntegerMatrix::IDENTITY;
    for &(letter, e) in word {
        let x = match letter {
            Letter::S => IntegerMatrix::S,
            Letter::T => IntegerMatrix::translation(e),
        };
        m = m.multiply(&x)?;
    }
    Ok(m)
}

/// The edge variables of the cover of one coset action.
#[derive(Clone, Debug)]
pub struct LiftAction {
    action: CosetAction,
    inv_t: Vec<usize>,
    /// One solution of the cover equations.
    particular: BitVec,
    /// Basis of the directions between lifts.
    kernel: Vec<BitVec>,
    /// Edge bits crossed by each free generator's word.
    free_usage: Vec<BitVec>,
}

/// A solved cover: the character of one lift on all of Γ̃.
#[derive(Clone, Debug)]
pub struct Cocycle<'a> {
    lift: &'a LiftAction,
    x: BitVec,
}

impl LiftAction {
    pub fn new(gens: &GeneratorSet, config: &EngineConfig) -> Result<Self> {
        if gens.e2 > 0 {
            return Err(Error::InvalidArgument("no lift without -I exists when e2 > 0".into()));
        }
        let action = build_coset_action(gens.kind, gens.level, config)?;
        let d = action.degree();
        let vars = 2 * d;
        let var = Self::var;
        let mut sys = Gf2System::new(vars);
        let unit = |v: usize| {
            let mut b = BitVec::zeros(vars);
            b.set(v, true);
            b
        };
        for j in 1..d {
            let (i, letter) = action.parent(j).expect("non-root coset has a tree edge");
            sys.add_equation(unit(var(i, letter)), false);
        }
        let perm_s = action.perm_s();
        let perm_t = action.perm_t();
        for i in 0..d {
            let mut row = unit(var(i, Letter::S));
            row.flip(var(perm_s[i], Letter::S));
            sys.add_equation(row, true);
            let mut row = BitVec::zeros(vars);
            let mut k = i;
            for _ in 0..3 {
                row.flip(var(k, Letter::S));
                k = perm_s[k];
                row.flip(var(k, Letter::T));
                k = perm_t[k];
            }
            sys.add_equation(row, true);
        }
        let solution = sys
            .solve()
            .ok_or_else(|| Error::Internal("cover equations are inconsistent".into()))?;
        if solution.kernel.len() != gens.r {
            return Err(Error::Internal(format!(
                "cover space has dimension {}, expected r = {}",
                solution.kernel.len(),
                gens.r
            )));
        }
        let mut inv_t = vec![0; d];
        for (i, &j) in perm_t.iter().enumerate() {
            inv_t[j] = i;
        }
        let mut lift = LiftAction {
            action,
            inv_t,
            particular: solution.particular,
            kernel: solution.kernel,
            free_usage: Vec::new(),
        };
        for g in gens.generators.iter().filter(|g| g.kind == GeneratorType::Free) {
            let (end, usage) = lift.trace_usage(&st_word(&g.matrix)?);
            if end != 0 {
                return Err(Error::Internal(format!("free generator {} leaves the group", g.matrix)));
            }
            lift.free_usage.push(usage);
        }
        Ok(lift)
    }

    pub fn action(&self) -> &CosetAction {
        &self.action
    }

    fn var(i: usize, letter: Letter) -> usize {
        match letter {
            Letter::S => 2 * i,
            Letter::T => 2 * i + 1,
        }
    }

    /// Follows a word from coset 0, recording which edge bits it crosses.
    fn trace_usage(&self, word: &Word) -> (usize, BitVec) {
        let mut usage = BitVec::zeros(self.particular.len());
        let mut i = 0;
        let perm_s = self.action.perm_s();
        let perm_t = self.action.perm_t();
        for &(letter, e) in word {
            match letter {
                Letter::S => {
                    usage.flip(Self::var(i, Letter::S));
                    i = perm_s[i];
                }
                Letter::T if e >= 0 => {
                    for _ in 0..e {
                        usage.flip(Self::var(i, Letter::T));
                        i = perm_t[i];
                    }
                }
                Letter::T => {
                    for _ in 0..-e {
                        i = self.inv_t[i];
                        usage.flip(Self::var(i, Letter::T));
                    }
                }
            }
        }
        (i, usage)
    }

    /// The cover belonging to `ch`.
    pub fn cocycle(&self, ch: &SignCharacter) -> Result<Cocycle<'_>> {
        if ch.full_preimage || ch.r() != self.kernel.len() {
            return Err(Error::InvalidArgument("character does not match the presentation".into()));
        }
        let r = self.kernel.len();
        let mut sys = Gf2System::new(r);
        for (usage, want) in self.free_usage.iter().zip(ch.bits()) {
            let mut row = BitVec::zeros(r);
            for (k, kv) in self.kernel.iter().enumerate() {
                row.set(k, usage.dot(kv));
            }
            if !sys.add_equation(row, want ^ usage.dot(&self.particular)) {
                return Err(Error::Internal("free generator values are not independent".into()));
            }
        }
        let lambda = sys.solve().ok_or_else(|| Error::Internal("no cover for character".into()))?;
        let mut x = self.particular.clone();
        for (k, kv) in self.kernel.iter().enumerate() {
            if lambda.particular.get(k) {
                x.xor_assign(kv);
            }
        }
        Ok(Cocycle { lift: self, x })
    }
}

impl Cocycle<'_> {
    /// `χ(g)` for `g ∈ Γ̃`, or `None` if `g` is not in Γ̃.
    pub fn sign(&self, g: &IntegerMatrix) -> Result<Option<i8>> {
        let (end, usage) = self.lift.trace_usage(&st_word(g)?);
        if end != 0 {
            return Ok(None);
        }
        Ok(Some(if usage.dot(&self.x) { -1 } else { 1 }))
    }

    /// Membership of `g` in the lift.
    pub fn contains(&self, g: &IntegerMatrix) -> Result<bool> {
        Ok(self.sign(g)? == Some(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kind::GroupKind;
    use crate::lifts::character::{enumerate_lifts, lift_generators, signed_generators};
    use proptest::prelude::*;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn words_of_basic_matrices() {
        for m in [IntegerMatrix::S, IntegerMatrix::T, IntegerMatrix::MINUS_ONE, IntegerMatrix::IDENTITY] {
            assert_eq!(word_matrix(&st_word(&m).unwrap()).unwrap(), m);
        }
    }

    fn letters() -> impl Strategy<Value = Vec<(bool, i64)>> {
        proptest::collection::vec((any::<bool>(), -6i64..6), 0..12)
    }

    proptest! {
        #[test]
        fn words_reproduce_matrices(letters in letters()) {
            let mut m = IntegerMatrix::IDENTITY;
            for (is_s, k) in letters {
                let x = if is_s { IntegerMatrix::S } else { IntegerMatrix::translation(k) };
                m = m.multiply(&x).unwrap();
            }
            prop_assert_eq!(word_matrix(&st_word(&m).unwrap()).unwrap(), m);
        }
    }

    #[test]
    fn character_values_on_generators() {
        for (kind, n) in [(GroupKind::Gamma0, 6), (GroupKind::Gamma1, 5), (GroupKind::Gamma0, 9)] {
            let gens = GeneratorSet::build(kind, n, &cfg()).unwrap();
            let lift = LiftAction::new(&gens, &cfg()).unwrap();
            for ch in enumerate_lifts(&gens).unwrap().into_iter().skip(1) {
                let co = lift.cocycle(&ch).unwrap();
                assert_eq!(co.sign(&IntegerMatrix::MINUS_ONE).unwrap(), Some(-1));
                for (f, s) in gens.free().zip(&ch.free_signs) {
                    assert_eq!(co.sign(f).unwrap(), Some(*s));
                }
                for o in gens.odd() {
                    assert_eq!(co.sign(o).unwrap(), Some(1));
                }
                // kernel property
                for m in lift_generators(&gens, &ch).unwrap() {
                    assert!(co.contains(&m).unwrap(), "{m} for {ch:?}");
                }
                for m in signed_generators(&gens, &ch).unwrap() {
                    assert!(co.contains(&m).unwrap());
                }
                assert_eq!(co.sign(&IntegerMatrix::S).unwrap(), None);
            }
        }
    }

    #[test]
    fn elliptic_order_two_has_no_cover() {
        let gens = GeneratorSet::build(GroupKind::Gamma0, 5, &cfg()).unwrap();
        assert!(LiftAction::new(&gens, &cfg()).is_err());
    }
}
