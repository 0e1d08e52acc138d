use std::fmt;

use smallvec::SmallVec;

pub type Exponent = u16;

/// Power product over the variables of a ring, indexed by variable position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[Exponent; 16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize, exp: Exponent) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exp;
        m
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn exp(&self, index: usize) -> Exponent {
        self.0[index]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(
                other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set iff variable `i` (mod 64) occurs.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
    }

    /// Copy into a ring with `nvars` variables via `map[i] = new index of old variable i`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Monomial {
        let mut m = Self::one(nvars);
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                m.0[map[i]] += e;
            }
        }
        m
    }

    pub(crate) fn exps_mut(&mut self) -> &mut [Exponent] {
        &mut self.0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}
