//! Words over a symmetrized alphabet.
//!
//! Letters are small integers `0..2k`; generator `i` is `2i` and its inverse
//! is `2i + 1`, so inversion is `x ^ 1`. The [`Alphabet`] carries a
//! user-chosen total order on the `2k` letters which drives every
//! lexicographic comparison in the crate.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Letter(pub u8);

impl Letter {
    pub fn generator(i: usize) -> Letter {
        Letter((2 * i) as u8)
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_inverse_letter(self) -> bool {
        self.0 & 1 == 1
    }
}

/// Generators named by lowercase characters; capitals denote inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<char>,
    order: Vec<Letter>,
    position: Vec<u8>,
}

impl Alphabet {
    pub fn new(names: Vec<char>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidParameter("alphabet needs at least one generator".into()));
        }
        for (i, c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::InvalidParameter(format!(
                    "generator names must be lowercase ascii letters, got '{c}'"
                )));
            }
            if names[..i].contains(c) {
                return Err(Error::InvalidParameter(format!("generator '{c}' declared twice")));
            }
        }
        let size = 2 * names.len();
        let order: Vec<Letter> = (0..size as u8).map(Letter).collect();
        let position = (0..size as u8).collect();
        Ok(Alphabet { names, order, position })
    }

    /// Free alphabet on `a, b, c, ...` with the default order `a < A < b < B < ...`.
    pub fn free(rank: usize) -> Self {
        assert!((1..=26).contains(&rank), "rank must be in 1..=26");
        let names = (0..rank as u8).map(|i| (b'a' + i) as char).collect();
        Alphabet::new(names).expect("valid generated names")
    }

    pub fn with_order(mut self, order: Vec<Letter>) -> Result<Self> {
        let size = self.size();
        if order.len() != size {
            return Err(Error::InvalidParameter(format!(
                "order lists {} letters, alphabet has {size}",
                order.len()
            )));
        }
        let mut position = vec![u8::MAX; size];
        for (p, l) in order.iter().enumerate() {
            if l.index() >= size || position[l.index()] != u8::MAX {
                return Err(Error::InvalidParameter(
                    "order must be a permutation of the symmetrized alphabet".into(),
                ));
            }
            position[l.index()] = p as u8;
        }
        self.order = order;
        self.position = position;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// Number of letters, `2k`.
    pub fn size(&self) -> usize {
        2 * self.names.len()
    }

    /// Letters in increasing alphabet order.
    pub fn letters(&self) -> &[Letter] {
        &self.order
    }

    pub fn generator_names(&self) -> &[char] {
        &self.names
    }

    #[inline]
    pub fn position(&self, l: Letter) -> u8 {
        self.position[l.index()]
    }

    pub fn letter_char(&self, l: Letter) -> char {
        let c = self.names[l.index() / 2];
        if l.is_inverse_letter() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn parse_letter(&self, c: char) -> Result<Letter> {
        let lower = c.to_ascii_lowercase();
        let i = self
            .names
            .iter()
            .position(|&n| n == lower)
            .ok_or(Error::UnknownLetter(c))?;
        Ok(if c.is_ascii_uppercase() {
            Letter::generator(i).inverse()
        } else {
            Letter::generator(i)
        })
    }

    /// Parses a word such as `abAB`. `1` and the empty string denote the identity.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::identity());
        }
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.parse_letter(c))
            .collect()
    }

    pub fn format(&self, w: &Word) -> String {
        w.letters().iter().map(|&l| self.letter_char(l)).collect()
    }

    pub fn format_letter_order(&self) -> String {
        self.order
            .iter()
            .map(|&l| self.letter_char(l).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[inline]
    pub fn cmp_letters(&self, a: Letter, b: Letter) -> Ordering {
        self.position(a).cmp(&self.position(b))
    }

    /// Lexicographic comparison under the alphabet order; a strict prefix is smaller.
    pub fn lex_compare(&self, w1: &Word, w2: &Word) -> Ordering {
        for (&a, &b) in w1.letters().iter().zip(w2.letters()) {
            match self.cmp_letters(a, b) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        w1.len().cmp(&w2.len())
    }

    /// Length first, then lexicographic.
    pub fn shortlex_compare(&self, w1: &Word, w2: &Word) -> Ordering {
        w1.len()
            .cmp(&w2.len())
            .then_with(|| self.lex_compare(w1, w2))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn with_letter(&self, l: Letter) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(l);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn power(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[1] != p[0].inverse())
    }

    /// Reduced and no cancellation between the last and first letter.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0.iter().map(|l| l.0).collect::<Vec<_>>())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Free reduction.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Strips conjugating layers `x v x⁻¹` from a reduced word.
pub fn cyclic_reduce(w: &Word) -> Word {
    let w = reduce(w);
    let s = w.letters();
    let (mut i, mut j) = (0, s.len());
    while j - i >= 2 && s[i] == s[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    Word(s[i..j].to_vec())
}

pub fn lex_compare(alphabet: &Alphabet, w1: &Word, w2: &Word) -> Ordering {
    alphabet.lex_compare(w1, w2)
}

/// Every reduced word of length `<= max_len`, in length-then-lex order.
pub fn enumerate_reduced(alphabet: &Alphabet, max_len: usize) -> ReducedWords<'_> {
    ReducedWords {
        alphabet,
        max_len,
        current: Some(Vec::new()),
    }
}

pub struct ReducedWords<'a> {
    alphabet: &'a Alphabet,
    max_len: usize,
    // Positions in the alphabet order, not letters.
    current: Option<Vec<u8>>,
}

impl ReducedWords<'_> {
    fn letter_at(&self, p: u8) -> Letter {
        self.alphabet.letters()[p as usize]
    }

    fn admissible(&self, prev: Option<u8>, p: u8) -> bool {
        match prev {
            None => true,
            Some(q) => self.letter_at(p) != self.letter_at(q).inverse(),
        }
    }

    fn fill_from(&self, pos: &mut Vec<u8>, start: usize, len: usize) {
        pos.truncate(start);
        while pos.len() < len {
            let prev = pos.last().copied();
            let p = (0..self.alphabet.size() as u8)
                .find(|&p| self.admissible(prev, p))
                .expect("alphabets have at least two letters");
            pos.push(p);
        }
    }

    fn advance(&self, mut pos: Vec<u8>) -> Option<Vec<u8>> {
        let n = pos.len();
        let size = self.alphabet.size() as u8;
        for i in (0..n).rev() {
            let prev = if i == 0 { None } else { Some(pos[i - 1]) };
            if let Some(p) = (pos[i] + 1..size).find(|&p| self.admissible(prev, p)) {
                pos[i] = p;
                self.fill_from(&mut pos, i + 1, n);
                return Some(pos);
            }
        }
        if n < self.max_len {
            self.fill_from(&mut pos, 0, n + 1);
            Some(pos)
        } else {
            None
        }
    }
}

impl Iterator for ReducedWords<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let pos = self.current.take()?;
        let word = pos.iter().map(|&p| self.letter_at(p)).collect();
        self.current = self.advance(pos);
        Some(word)
    }
}
