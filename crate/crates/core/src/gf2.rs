//! Dense linear algebra over F₂ with bit-packed rows.

/// A vector over F₂ of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn from_mask(len: usize, mask: u64) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len.min(64) {
            v.set(i, mask >> i & 1 == 1);
        }
        v
    }
}

/// Solution set `particular + span(kernel)` of an affine system.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: BitVec,
    pub kernel: Vec<BitVec>,
}

/// Accumulates equations `row · x = rhs` in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Gf2System {
    vars: usize,
    /// (pivot column, row, rhs); every pivot column is cleared in the other rows.
    rows: Vec<(usize, BitVec, bool)>,
    consistent: bool,
}

impl Gf2System {
    pub fn new(vars: usize) -> Self {
        Gf2System { vars, rows: Vec::new(), consistent: true }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// Reduce `(row, rhs)` against the current pivots.
    fn reduce(&self, row: &mut BitVec, rhs: &mut bool) {
        for (pivot, r, b) in &self.rows {
            if row.get(*pivot) {
                row.xor_assign(r);
                *rhs ^= b;
            }
        }
    }

    /// Adds an equation. Returns false if it made the system inconsistent.
    pub fn add_equation(&mut self, mut row: BitVec, mut rhs: bool) -> bool {
        assert_eq!(row.len(), self.vars);
        self.reduce(&mut row, &mut rhs);
        match row.first_one() {
            None => {
                if rhs {
                    self.consistent = false;
                }
            }
            Some(pivot) => {
                for (_, r, b) in self.rows.iter_mut() {
                    if r.get(pivot) {
                        r.xor_assign(&row);
                        *b ^= rhs;
                    }
                }
                self.rows.push((pivot, row, rhs));
            }
        }
        self.consistent
    }

    /// Whether `row · x = rhs` is implied by or consistent with the system:
    /// returns `Some(true)` if implied, `Some(false)` if contradicted, `None`
    /// if independent.
    pub fn implies(&self, row: &BitVec, rhs: bool) -> Option<bool> {
        let mut row = row.clone();
        let mut rhs = rhs;
        self.reduce(&mut row, &mut rhs);
        if row.is_zero() {
            Some(!rhs)
        } else {
            None
        }
    }

    pub fn solve(&self) -> Option<AffineSolution> {
        if !self.consistent {
            return None;
        }
        let mut pivot_of = vec![None; self.vars];
        for (i, (p, _, _)) in self.rows.iter().enumerate() {
            pivot_of[*p] = Some(i);
        }
        let mut particular = BitVec::zeros(self.vars);
        for (p, _, b) in &self.rows {
            particular.set(*p, *b);
        }
        let mut kernel = Vec::new();
        for free in (0..self.vars).filter(|&c| pivot_of[c].is_none()) {
            let mut v = BitVec::zeros(self.vars);
            v.set(free, true);
            for (p, r, _) in &self.rows {
                if r.get(free) {
                    v.set(*p, true);
                }
            }
            kernel.push(v);
        }
        Some(AffineSolution { particular, kernel })
    }
}

/// Solve the square-or-not system `A x = b` for small dense matrices given as
/// row masks. Returns one solution, if any.
pub fn solve_masks(rows: &[u64], rhs: &[bool], vars: usize) -> Option<u64> {
    let mut sys = Gf2System::new(vars);
    for (r, b) in rows.iter().zip(rhs) {
        if !sys.add_equation(BitVec::from_mask(vars, *r), *b) {
            return None;
        }
    }
    let sol = sys.solve()?;
    Some((0..vars).filter(|&i| sol.particular.get(i)).fold(0u64, |m, i| m | 1 << i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inconsistent_system() {
        let mut sys = Gf2System::new(2);
        sys.add_equation(BitVec::from_mask(2, 0b11), true);
        sys.add_equation(BitVec::from_mask(2, 0b01), false);
        assert!(!sys.add_equation(BitVec::from_mask(2, 0b10), false));
        assert!(sys.solve().is_none());
    }

    proptest! {
        #[test]
        fn solutions_satisfy_equations(
            rows in proptest::collection::vec(0u64..256, 0..10),
            x in 0u64..256,
        ) {
            let vars = 8;
            let rhs: Vec<bool> = rows.iter().map(|r| (r & x).count_ones() % 2 == 1).collect();
            let mut sys = Gf2System::new(vars);
            for (r, b) in rows.iter().zip(&rhs) {
                prop_assert!(sys.add_equation(BitVec::from_mask(vars, *r), *b));
            }
            let sol = sys.solve().unwrap();
            prop_assert_eq!(sol.kernel.len(), vars - sys.rank());
            for k in 0..(1u32 << sol.kernel.len().min(4)) {
                let mut v = sol.particular.clone();
                for (j, kv) in sol.kernel.iter().enumerate().take(4) {
                    if k >> j & 1 == 1 { v.xor_assign(kv); }
                }
                for (r, b) in rows.iter().zip(&rhs) {
                    prop_assert_eq!(BitVec::from_mask(vars, *r).dot(&v), *b);
                }
            }
        }
    }
}
