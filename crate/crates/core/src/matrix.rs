//! Exact 2×2 matrices of determinant one over Z and over Z/n.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 integer matrix `(a, b; c, d)`, row-major.
///
/// Constructors reject determinants other than 1, and every product is
/// computed with checked arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct IntegerMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntegerMatrix {
    pub const IDENTITY: IntegerMatrix = IntegerMatrix { a: 1, b: 0, c: 0, d: 1 };
    pub const MINUS_ONE: IntegerMatrix = IntegerMatrix { a: -1, b: 0, c: 0, d: -1 };
    /// `S = (0, -1; 1, 0)`, of order 4 with `S² = -1`.
    pub const S: IntegerMatrix = IntegerMatrix { a: 0, b: -1, c: 1, d: 0 };
    /// `T = (1, 1; 0, 1)`.
    pub const T: IntegerMatrix = IntegerMatrix { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = i128::from(a) * i128::from(d) - i128::from(b) * i128::from(c);
        if det != 1 {
            return Err(Error::NotUnimodular { a, b, c, d });
        }
        Ok(IntegerMatrix { a, b, c, d })
    }

    /// Upper triangular `(1, k; 0, 1)`.
    pub fn translation(k: i64) -> Self {
        IntegerMatrix { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> i128 {
        i128::from(self.a) * i128::from(self.d) - i128::from(self.b) * i128::from(self.c)
    }

    pub fn trace(&self) -> Result<i64> {
        self.a.checked_add(self.d).ok_or(Error::Overflow("trace"))
    }

    pub fn multiply(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        let dot = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .ok_or(Error::Overflow("matrix product"))
        };
        Ok(IntegerMatrix {
            a: dot(self.a, other.a, self.b, other.c)?,
            b: dot(self.a, other.b, self.b, other.d)?,
            c: dot(self.c, other.a, self.d, other.c)?,
            d: dot(self.c, other.b, self.d, other.d)?,
        })
    }

    /// Product of a sequence, left to right.
    pub fn product<'a, I>(factors: I) -> Result<IntegerMatrix>
    where
        I: IntoIterator<Item = &'a IntegerMatrix>,
    {
        factors
            .into_iter()
            .try_fold(IntegerMatrix::IDENTITY, |acc, m| acc.multiply(m))
    }

    /// The inverse `(d, -b; -c, a)`.
    pub fn inverse(&self) -> Result<IntegerMatrix> {
        Ok(IntegerMatrix {
            a: self.d,
            b: self.b.checked_neg().ok_or(Error::Overflow("inverse"))?,
            c: self.c.checked_neg().ok_or(Error::Overflow("inverse"))?,
            d: self.a,
        })
    }

    pub fn negate(&self) -> Result<IntegerMatrix> {
        let n = |x: i64| x.checked_neg().ok_or(Error::Overflow("negation"));
        Ok(IntegerMatrix { a: n(self.a)?, b: n(self.b)?, c: n(self.c)?, d: n(self.d)? })
    }

    /// `self · other · self⁻¹`
    pub fn conjugate(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        self.multiply(other)?.multiply(&self.inverse()?)
    }

    pub fn pow(&self, exp: u32) -> Result<IntegerMatrix> {
        let mut acc = IntegerMatrix::IDENTITY;
        for _ in 0..exp {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        *self == IntegerMatrix::IDENTITY || *self == IntegerMatrix::MINUS_ONE
    }

    /// Equality in PSL2(Z).
    pub fn projectively_eq(&self, other: &IntegerMatrix) -> bool {
        self == other
            || (self.a == -other.a && self.b == -other.b && self.c == -other.c && self.d == -other.d)
    }

    /// Action on a point of P¹(Q) given as a column vector `(num, den)`.
    /// The result is normalised to a nonnegative denominator (positive numerator
    /// at infinity).
    pub fn act(&self, point: (i64, i64)) -> Result<(i64, i64)> {
        let (x, y) = point;
        let mul = |p: i64, q: i64| p.checked_mul(q).ok_or(Error::Overflow("fraction action"));
        let num = mul(self.a, x)?
            .checked_add(mul(self.b, y)?)
            .ok_or(Error::Overflow("fraction action"))?;
        let den = mul(self.c, x)?
            .checked_add(mul(self.d, y)?)
            .ok_or(Error::Overflow("fraction action"))?;
        Ok(normalize_point(num, den))
    }

    /// Reduction of the entries modulo `n`.
    pub fn reduce(&self, n: u32) -> Result<ResidueMatrix> {
        reduce(self, n)
    }
}

/// Canonical projective representative of `num/den` (`1/0` for infinity).
pub fn normalize_point(num: i64, den: i64) -> (i64, i64) {
    if den == 0 {
        (1, 0)
    } else if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

impl TryFrom<[i64; 4]> for IntegerMatrix {
    type Error = Error;

    fn try_from(e: [i64; 4]) -> Result<Self> {
        IntegerMatrix::new(e[0], e[1], e[2], e[3])
    }
}

impl From<IntegerMatrix> for [i64; 4] {
    fn from(m: IntegerMatrix) -> Self {
        m.entries()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Product of two integer matrices.
pub fn multiply(x: &IntegerMatrix, y: &IntegerMatrix) -> Result<IntegerMatrix> {
    x.multiply(y)
}

/// Entrywise least nonnegative residues of `x` modulo `n`.
pub fn reduce(x: &IntegerMatrix, n: u32) -> Result<ResidueMatrix> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let m = i64::from(n);
    let r = |v: i64| v.rem_euclid(m) as u32;
    Ok(ResidueMatrix { modulus: n, a: r(x.a), b: r(x.b), c: r(x.c), d: r(x.d) })
}

/// An element of SL2(Z/n) stored by its least nonnegative residues.
///
/// Equality, hashing and ordering all go through the canonical tuple, and
/// [`ResidueMatrix::encode`] packs it into a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueMatrix {
    pub modulus: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl ResidueMatrix {
    /// Checks residues are in range and `ad - bc ≡ 1`.
    pub fn new(modulus: u32, a: u32, b: u32, c: u32, d: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let m = ResidueMatrix { modulus, a, b, c, d };
        if a >= modulus || b >= modulus || c >= modulus || d >= modulus || !m.has_unit_det() {
            return Err(Error::NotUnimodular {
                a: a.into(),
                b: b.into(),
                c: c.into(),
                d: d.into(),
            });
        }
        Ok(m)
    }

    pub fn identity(modulus: u32) -> Self {
        let one = if modulus == 1 { 0 } else { 1 };
        ResidueMatrix { modulus, a: one, b: 0, c: 0, d: one }
    }

    pub fn minus_one(modulus: u32) -> Self {
        let m1 = modulus - 1;
        ResidueMatrix { modulus, a: m1, b: 0, c: 0, d: m1 }
    }

    pub fn has_unit_det(&self) -> bool {
        let n = u64::from(self.modulus);
        let ad = u64::from(self.a) * u64::from(self.d) % n;
        let bc = u64::from(self.b) * u64::from(self.c) % n;
        (ad + n - bc) % n == 1 % n
    }

    /// Mixed-modulus products panic; use [`ResidueMatrix::try_multiply`] at API boundaries.
    #[inline]
    pub fn mul(&self, o: &ResidueMatrix) -> ResidueMatrix {
        debug_assert_eq!(self.modulus, o.modulus);
        let n = u64::from(self.modulus);
        let f = |x: u32, y: u32, z: u32, w: u32| {
            ((u64::from(x) * u64::from(y) + u64::from(z) * u64::from(w)) % n) as u32
        };
        ResidueMatrix {
            modulus: self.modulus,
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }

    pub fn try_multiply(&self, o: &ResidueMatrix) -> Result<ResidueMatrix> {
        if self.modulus != o.modulus {
            return Err(Error::ModulusMismatch(self.modulus, o.modulus));
        }
        Ok(self.mul(o))
    }

    pub fn inverse(&self) -> ResidueMatrix {
        let n = self.modulus;
        let neg = |x: u32| if x == 0 { 0 } else { n - x };
        ResidueMatrix { modulus: n, a: self.d, b: neg(self.b), c: neg(self.c), d: self.a }
    }

    pub fn negate(&self) -> ResidueMatrix {
        let n = self.modulus;
        let neg = |x: u32| if x == 0 { 0 } else { n - x };
        ResidueMatrix { modulus: n, a: neg(self.a), b: neg(self.b), c: neg(self.c), d: neg(self.d) }
    }

    /// Reduce further to a divisor `m` of the modulus.
    pub fn reduce_to(&self, m: u32) -> Result<ResidueMatrix> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        if self.modulus % m != 0 {
            return Err(Error::LevelNotDividingModulus { level: m, modulus: self.modulus });
        }
        Ok(ResidueMatrix { modulus: m, a: self.a % m, b: self.b % m, c: self.c % m, d: self.d % m })
    }

    /// Pack `(a, b, c, d)` into `((a·n + b)·n + c)·n + d`.
    #[inline]
    pub fn encode(&self) -> u64 {
        let n = u64::from(self.modulus);
        ((u64::from(self.a) * n + u64::from(self.b)) * n + u64::from(self.c)) * n
            + u64::from(self.d)
    }

    pub fn decode(modulus: u32, code: u64) -> ResidueMatrix {
        let n = u64::from(modulus);
        let d = (code % n) as u32;
        let c = (code / n % n) as u32;
        let b = (code / n / n % n) as u32;
        let a = (code / n / n / n) as u32;
        ResidueMatrix { modulus, a, b, c, d }
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl PartialOrd for ResidueMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ResidueMatrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.modulus, self.entries()).cmp(&(other.modulus, other.entries()))
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {}) mod {}", self.a, self.b, self.c, self.d, self.modulus)
    }
}
