//! Word calculus in a free group of rank at most 26.
//!
//! Letters are packed as `2 * (generator - 1) + inverse`, so the natural
//! integer order is the letter order `a < A < b < B < ...` and inversion is a
//! single bit flip. The same packing doubles as the end index of the letter in
//! a one-vertex fat graph (see [`crate::surface`]).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::Error;

pub const MAX_GENERATORS: usize = 26;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: usize, inverse: bool) -> Result<Self, Error> {
        if !(1..=MAX_GENERATORS).contains(&generator) {
            return Err(Error::GeneratorOutOfRange { generator, k: MAX_GENERATORS });
        }
        Ok(Letter(((generator - 1) * 2) as u8 | inverse as u8))
    }

    pub fn from_code(code: usize) -> Self {
        debug_assert!(code < 2 * MAX_GENERATORS);
        Letter(code as u8)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// 1-based generator index.
    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize + 1
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + (self.0 >> 1)) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self, Error> {
        match c {
            'a'..='z' => Ok(Letter((c as u8 - b'a') * 2)),
            'A'..='Z' => Ok(Letter((c as u8 - b'A') * 2 + 1)),
            _ => Err(Error::BadLetter(c)),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>, Error> {
    s.chars().filter(|c| !c.is_whitespace()).map(Letter::from_char).collect()
}

/// Free reduction of an arbitrary letter sequence.
pub fn free_reduce<I>(letters: I) -> Word
where
    I: IntoIterator<Item = Letter>,
{
    let mut out: Vec<Letter> = Vec::new();
    for x in letters {
        if out.last() == Some(&x.inverse()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    Word(out)
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Strips matching inverse pairs from the two ends.
    pub fn cyclic_reduce(&self) -> Word {
        let w = &self.0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(x), Some(y)) => self.0.len() == 1 || *x != y.inverse(),
            _ => true,
        }
    }

    /// Largest generator index appearing, 0 for the empty word.
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|x| x.generator()).max().unwrap_or(0)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(free_reduce(parse_letters(s)?))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{}", x.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

/// Start index of the lexicographically least rotation (Booth).
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let at = |i: isize| s[i as usize % n];
    let mut fail = vec![-1isize; 2 * n];
    let mut k: isize = 0;
    for j in 1..(2 * n) as isize {
        let sj = at(j);
        let mut i = fail[(j - k - 1) as usize];
        while i != -1 && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = fail[i as usize];
        }
        if sj != at(k + i + 1) {
            if sj < at(k) {
                k = j;
            }
            fail[(j - k) as usize] = -1;
        } else {
            fail[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n.max(1)
}

/// A nontrivial free homotopy class of directed loops, stored as its
/// cyclically reduced, least-rotation representative.
///
/// The order on classes is lexicographic in the letter order (shorter
/// prefixes first), which is the derived order on the stored words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjClass(Word);

/// Canonical class of `w`; `None` is the trivial class.
pub fn canonical_class(w: &Word) -> Option<ConjClass> {
    let c = w.cyclic_reduce();
    if c.is_empty() {
        return None;
    }
    Some(ConjClass::from_cyclic_unchecked(&c.0))
}

impl ConjClass {
    /// Canonicalizes a letter sequence that is already cyclically reduced
    /// (as a cyclic word). Used on hot paths that build words by rotation.
    pub(crate) fn from_cyclic_unchecked(letters: &[Letter]) -> Self {
        debug_assert!(!letters.is_empty());
        let r = least_rotation(letters);
        let mut v = Vec::with_capacity(letters.len());
        v.extend_from_slice(&letters[r..]);
        v.extend_from_slice(&letters[..r]);
        ConjClass(Word(v))
    }

    /// Canonical class of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Option<Self> {
        canonical_class(&free_reduce(letters))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0 .0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; classes are nontrivial.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Rotation starting at position `t`, i.e. the loop read from pass `t`.
    pub fn rotation(&self, t: usize) -> impl Iterator<Item = Letter> + '_ {
        let l = self.letters();
        l[t..].iter().chain(l[..t].iter()).copied()
    }

    pub fn inverse(&self) -> ConjClass {
        ConjClass::from_cyclic_unchecked(self.0.inverse().letters())
    }

    /// Primitive root and multiplicity: `self = root^m`.
    pub fn primitive_root(&self) -> (ConjClass, usize) {
        let l = self.letters();
        let n = l.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| l[i] == l[i - p]) {
                // a rotation of a least rotation is least on the prefix too
                return (ConjClass::from_cyclic_unchecked(&l[..p]), n / p);
            }
        }
        unreachable!()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_root().1 == 1
    }

    pub fn pow(&self, n: i64) -> Result<ConjClass, Error> {
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let m = n.unsigned_abs() as usize;
        let mut v = Vec::with_capacity(base.len() * m);
        for _ in 0..m {
            v.extend_from_slice(base.letters());
        }
        Ok(ConjClass(Word(v)))
    }
}

impl FromStr for ConjClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        canonical_class(&s.parse()?).ok_or(Error::TrivialClass)
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl serde::Serialize for ConjClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ConjClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Is `w` (cyclically reduced) equal to its own least rotation?
fn is_least_rotation(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        for i in 0..n {
            match w[(r + i) % n].cmp(&w[i]) {
                Ordering::Less => return false,
                Ordering::Greater => return true,
                Ordering::Equal => {}
            }
        }
        true
    })
}

/// Canonical classes of one exact length whose representative starts with
/// `prefix`, in lexicographic order. The `(len, prefix)` pairs are the
/// units of parallel work in [`crate::search`].
pub fn enumerate_stratum(
    k: usize,
    len: usize,
    prefix: &[Letter],
    primitive_only: bool,
) -> Vec<ConjClass> {
    let mut out = Vec::new();
    if len == 0 || prefix.len() > len {
        return out;
    }
    if prefix.iter().any(|x| x.generator() > k) || prefix.windows(2).any(|p| p[1] == p[0].inverse()) {
        return out;
    }
    let mut buf = prefix.to_vec();
    extend(k, len, &mut buf, primitive_only, &mut out);
    out
}

fn extend(k: usize, len: usize, buf: &mut Vec<Letter>, primitive_only: bool, out: &mut Vec<ConjClass>) {
    if buf.len() == len {
        let w = Word(buf.clone());
        if w.is_cyclically_reduced() && is_least_rotation(buf) {
            let c = ConjClass(w);
            if !primitive_only || c.is_primitive() {
                out.push(c);
            }
        }
        return;
    }
    for code in 0..2 * k {
        let x = Letter::from_code(code);
        if let Some(&last) = buf.last() {
            if x == last.inverse() {
                continue;
            }
        }
        // the first letter of a least rotation is the minimum letter
        if !buf.is_empty() && x < buf[0] {
            continue;
        }
        buf.push(x);
        extend(k, len, buf, primitive_only, out);
        buf.pop();
    }
}

/// Every nontrivial class of length `1..=max_len`, ordered by length and
/// then lexicographically.
pub fn enumerate_classes(k: usize, max_len: usize, primitive_only: bool) -> Vec<ConjClass> {
    (1..=max_len)
        .flat_map(|len| enumerate_stratum(k, len, &[], primitive_only))
        .collect()
}
