//! Free-group words.
//!
//! A [`Word`] is a freely reduced sequence of [`Letter`]s. Every constructor
//! reduces, so two words are equal as values exactly when they are equal as
//! elements of the free group.
//!
//! Conventions used throughout the crate:
//!
//! * conjugation is `w^g = g⁻¹ w g`;
//! * the commutator is `[u, v] = u⁻¹ v⁻¹ u v`.

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter for generator {generator} is outside arity {arity}")]
    ArityMismatch { generator: usize, arity: usize },
}

/// A generator or its formal inverse.
///
/// Letters are encoded as `2 * generator + (inverse as u32)`, so the derived
/// ordering is the alphabet order `g₀ < g₀⁻¹ < g₁ < g₁⁻¹ < …` used by the
/// shortlex rewriting order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u32) << 1 | inverse as u32)
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub fn from_code(code: u32) -> Self {
        Letter(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}'", self.generator())
        } else {
            write!(f, "g{}", self.generator())
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduce an arbitrary letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for l in raw {
        match letters.last() {
            Some(&last) if last == l.inverse() => {
                letters.pop();
            }
            _ => letters.push(l),
        }
    }
    Word { letters }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn new<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        free_reduce(raw)
    }

    /// A single generator `g`.
    pub fn generator(g: usize) -> Self {
        Word {
            letters: vec![Letter::pos(g)],
        }
    }

    /// Build from `(generator, exponent)` syllables, e.g. `[(0, 2), (1, -3)]`
    /// is `g₀² g₁⁻³`.
    pub fn from_syllables(syllables: &[(usize, i64)]) -> Self {
        free_reduce(syllables.iter().flat_map(|&(g, e)| {
            let l = Letter::new(g, e < 0);
            std::iter::repeat_n(l, e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index plus one, or 0 for the identity.
    pub fn min_arity(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.generator() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn multiply(&self, other: &Word) -> Word {
        // Only the seam can cancel, since both halves are already reduced.
        let mut cancel = 0;
        let (a, b) = (&self.letters, &other.letters);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == b[cancel].inverse()
        {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        letters.extend_from_slice(&a[..a.len() - cancel]);
        letters.extend_from_slice(&b[cancel..]);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.inverse().multiply(self).multiply(g)
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse()
            .multiply(&other.inverse())
            .multiply(self)
            .multiply(other)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        if n == 0 || base.is_identity() {
            return Word::identity();
        }
        // Cancellation between copies only happens across the cyclic seam.
        let (core, conj) = base.cyclic_reduce();
        let mut letters = Vec::with_capacity(core.len() * n + 2 * conj.len());
        letters.extend(conj.inverse().letters);
        for _ in 0..n {
            letters.extend_from_slice(&core.letters);
        }
        letters.extend_from_slice(&conj.letters);
        free_reduce(letters)
    }

    /// Signed letter counts per generator.
    pub fn exponent_vector(&self, arity: usize) -> Result<Vec<i64>, WordError> {
        let mut v = vec![0i64; arity];
        for l in &self.letters {
            let g = l.generator();
            if g >= arity {
                return Err(WordError::ArityMismatch { generator: g, arity });
            }
            v[g] += l.sign();
        }
        Ok(v)
    }

    /// Split `self = conjugator⁻¹ · core · conjugator` with `core` cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.letters;
        let mut i = 0;
        while 2 * i + 1 < w.len() && w[i] == w[w.len() - 1 - i].inverse() {
            i += 1;
        }
        let core = Word {
            letters: w[i..w.len() - i].to_vec(),
        };
        let conjugator = Word {
            letters: w[w.len() - i..].to_vec(),
        };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) => self.letters.len() == 1 || a != b.inverse(),
            _ => true,
        }
    }

    /// Rotate a cyclically reduced word left by `k` letters.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::identity();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        free_reduce(letters)
    }

    /// Canonical representative of the conjugacy class of `self` and of its
    /// inverse: the least rotation of either cyclically reduced core.
    pub fn cyclic_key(&self) -> Word {
        let (core, _) = self.cyclic_reduce();
        let inv = core.inverse();
        (0..core.len().max(1))
            .flat_map(|k| [core.rotate(k), inv.rotate(k)])
            .min()
            .unwrap_or_default()
    }

    /// True when the cyclically reduced core is `s^m` for some `m ≥ 2`.
    pub fn is_proper_power(&self) -> bool {
        let (core, _) = self.cyclic_reduce();
        let n = core.len();
        (1..n).any(|d| n % d == 0 && (0..n).all(|i| core.letters[i] == core.letters[i % d]))
    }

    /// Render with generator names in the presentation grammar, e.g.
    /// `z^-3*b1*z^3`. The identity renders as `1`.
    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }

    /// `(generator, exponent)` runs.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((g, e)) if *g == l.generator() && (*e < 0) == l.is_inverse() => {
                    *e += l.sign()
                }
                _ => out.push((l.generator(), l.sign())),
            }
        }
        out
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syl = self.word.syllables();
        if syl.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in syl.into_iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            let name = self.names.get(g).map(|s| s.as_ref()).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Word {
        Word::generator(0)
    }
    fn b() -> Word {
        Word::generator(1)
    }
    fn c() -> Word {
        Word::generator(2)
    }

    #[test]
    fn free_reduce_cases() {
        assert!(free_reduce([Letter::pos(0), Letter::neg(0)]).is_identity());
        assert!(free_reduce([]).is_identity());
        let w = free_reduce([Letter::pos(0), Letter::pos(1), Letter::neg(1), Letter::pos(0)]);
        assert_eq!(w, Word::from_syllables(&[(0, 2)]));
    }

    #[test]
    fn multiply_cases() {
        assert!(a().multiply(&a().inverse()).is_identity());
        let ab = &a() * &b();
        let binv_c = &b().inverse() * &c();
        assert_eq!(&ab * &binv_c, &a() * &c());
        assert_eq!(Word::identity().multiply(&ab), ab);
    }

    #[test]
    fn invert_cases() {
        let w = &a() * &b().inverse();
        assert_eq!(w.inverse(), &b() * &a().inverse());
        assert!(Word::identity().inverse().is_identity());
        let abc = &(&a() * &b()) * &c();
        assert_eq!(
            abc.inverse(),
            Word::from_syllables(&[(2, -1), (1, -1), (0, -1)])
        );
    }

    #[test]
    fn conjugate_cases() {
        assert_eq!(a().conjugate(&Word::identity()), a());
        // b0 ↦ z⁻³ b1 z³ reads as b1 conjugated by z³ (z = 0, b1 = 1)
        let z3 = Word::from_syllables(&[(0, 3)]);
        assert_eq!(
            b().conjugate(&z3),
            Word::from_syllables(&[(0, -3), (1, 1), (0, 3)])
        );
    }

    #[test]
    fn commutator_cases() {
        assert!(a().commutator(&a()).is_identity());
        assert_eq!(
            a().commutator(&b()),
            Word::from_syllables(&[(0, -1), (1, -1), (0, 1), (1, 1)])
        );
    }

    #[test]
    fn power_cases() {
        assert_eq!(a().pow(7), Word::from_syllables(&[(0, 7)]));
        assert!((&a() * &b()).pow(0).is_identity());
        assert_eq!(
            (&a() * &b()).pow(-2),
            Word::from_syllables(&[(1, -1), (0, -1), (1, -1), (0, -1)])
        );
        // a non-cyclically-reduced base still powers correctly
        let w = Word::from_syllables(&[(1, -1), (0, 2), (1, 1)]);
        assert_eq!(w.pow(3), Word::from_syllables(&[(1, -1), (0, 6), (1, 1)]));
    }

    #[test]
    fn exponent_vector_cases() {
        let w = Word::from_syllables(&[(0, 2), (1, -3)]);
        assert_eq!(w.exponent_vector(2).unwrap(), vec![2, -3]);
        assert_eq!(a().commutator(&b()).exponent_vector(2).unwrap(), vec![0, 0]);
        assert_eq!(
            w.exponent_vector(1),
            Err(WordError::ArityMismatch {
                generator: 1,
                arity: 1
            })
        );
    }

    #[test]
    fn cyclic_reduce_cases() {
        let w = Word::from_syllables(&[(0, -1), (1, 1), (0, 1)]);
        assert_eq!(w.cyclic_reduce(), (b(), a()));
        assert_eq!(
            Word::identity().cyclic_reduce(),
            (Word::identity(), Word::identity())
        );
        let w = Word::from_syllables(&[(1, -1), (0, 2), (1, 1)]);
        let (core, conj) = w.cyclic_reduce();
        assert_eq!(core, Word::from_syllables(&[(0, 2)]));
        assert_eq!(conj, b());
        assert_eq!(core.conjugate(&conj), w);
    }

    #[test]
    fn proper_powers() {
        assert!(Word::from_syllables(&[(0, 4)]).is_proper_power());
        assert!((&a() * &b()).pow(3).is_proper_power());
        assert!(!a().commutator(&b()).is_proper_power());
        assert!(!a().is_proper_power());
    }

    #[test]
    fn cyclic_key_identifies_rotations_and_inverses() {
        let r = a().commutator(&b());
        let rot = r.rotate(1);
        assert_eq!(r.cyclic_key(), rot.cyclic_key());
        assert_eq!(r.cyclic_key(), r.inverse().cyclic_key());
        assert_eq!(r.conjugate(&c()).cyclic_key(), r.cyclic_key());
    }

    #[test]
    fn display_uses_runs() {
        let names = ["z", "b1"];
        let w = Word::from_syllables(&[(0, -3), (1, 1), (0, 3)]);
        assert_eq!(w.display(&names).to_string(), "z^-3*b1*z^3");
        assert_eq!(Word::identity().display(&names).to_string(), "1");
    }
}
