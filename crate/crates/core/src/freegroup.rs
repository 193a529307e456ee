//! Words in `Free⟨a, b, c⟩` and in the groupoid alphabet `q1..q4` of the
//! two-vertex graph underlying the egg-beater annuli.
//!
//! The graph has vertices `A`, `B`, edges `q1, q3: A → B` and
//! `q2, q4: B → A`, with `a = q1 q2`, `b = q3 q4`, `c = q3 q2` (paths compose
//! left to right). Contracting `q2` gives `q1 = a`, `q3 = c`, `q4 = c⁻¹ b`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("letters {0} and {1} do not compose in the groupoid")]
    NotComposable(String, String),
    #[error("itinerary segment {0} does not start where segment {1} ends")]
    Broken(usize, usize),
    #[error("itinerary segments {0} and {1} use the same flow")]
    NotAlternating(usize, usize),
    #[error("itinerary is not a loop at A")]
    NotLoop,
    #[error("segment {0} changes square but has winding 0")]
    ZeroWinding(usize),
    #[error("self-intersection needs m, n >= 1")]
    NonPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Letter {
    fn name(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::B => "b",
            Letter::C => "c",
            Letter::Q1 => "q1",
            Letter::Q2 => "q2",
            Letter::Q3 => "q3",
            Letter::Q4 => "q4",
        }
    }

    fn is_edge(self) -> bool {
        matches!(self, Letter::Q1 | Letter::Q2 | Letter::Q3 | Letter::Q4)
    }

    /// Source and target vertex of a groupoid edge.
    fn ends(self) -> (Square, Square) {
        match self {
            Letter::Q1 | Letter::Q3 => (Square::A, Square::B),
            Letter::Q2 | Letter::Q4 => (Square::B, Square::A),
            _ => (Square::A, Square::A),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signed {
    pub letter: Letter,
    pub inverse: bool,
}

impl Signed {
    pub fn new(letter: Letter) -> Self {
        Self { letter, inverse: false }
    }

    pub fn inv(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }

    fn ends(self) -> (Square, Square) {
        let (s, t) = self.letter.ends();
        if self.inverse {
            (t, s)
        } else {
            (s, t)
        }
    }

    /// One character per signed letter, for substring search.
    fn code(self) -> char {
        let base = b"abcdefg"[self.letter as usize] as char;
        if self.inverse {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }
}

/// A word as a sequence of signed letters. Products keep the letters as
/// given; call [`Word::reduce`] for the normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Signed>);

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(l: Letter) -> Self {
        Self(vec![Signed::new(l)])
    }

    /// `l^e` for any integer `e`.
    pub fn power(l: Letter, e: i64) -> Self {
        let s = if e < 0 { Signed::new(l).inv() } else { Signed::new(l) };
        Self(vec![s; e.unsigned_abs() as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word([self.0.as_slice(), other.0.as_slice()].concat())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inv()).collect())
    }

    /// Free reduction (cancels adjacent `x x⁻¹`).
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Signed> = Vec::with_capacity(self.0.len());
        for &s in &self.0 {
            if out.last() == Some(&s.inv()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Reduced word whose cyclic rotations are all reduced, conjugate to `self`.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.reduce().0;
        let mut i = 0;
        let mut j = w.len();
        while j - i >= 2 && w[i] == w[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced() && (self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inv())
    }

    /// Rotation moving the last `k` letters to the front.
    pub fn rotate_right(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_right(k);
        }
        Word(v)
    }

    fn codes(&self) -> String {
        self.0.iter().map(|s| s.code()).collect()
    }

    pub fn uses_edges(&self) -> bool {
        self.0.iter().any(|s| s.letter.is_edge())
    }

    /// Checks that consecutive groupoid edges compose.
    pub fn check_composable(&self) -> Result<(), FreeGroupError> {
        for w in self.0.windows(2) {
            if w[0].letter.is_edge() && w[1].letter.is_edge() && w[0].ends().1 != w[1].ends().0 {
                return Err(FreeGroupError::NotComposable(
                    Word(vec![w[0]]).to_string(),
                    Word(vec![w[1]]).to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Image in `Free⟨a, b, c⟩` (reduced), contracting `q2`.
    pub fn to_free(&self) -> Result<Word, FreeGroupError> {
        self.check_composable()?;
        let mut out = Word::empty();
        for &s in &self.0 {
            let image = match s.letter {
                Letter::Q1 => Word::letter(Letter::A),
                Letter::Q2 => Word::empty(),
                Letter::Q3 => Word::letter(Letter::C),
                Letter::Q4 => Word::letter(Letter::C).inverse().concat(&Word::letter(Letter::B)),
                l => Word::letter(l),
            };
            out = out.concat(&if s.inverse { image.inverse() } else { image });
        }
        Ok(out.reduce())
    }
}

/// Whether `w1` and `w2` are conjugate in the free group: their cyclic
/// reductions are rotations of each other.
pub fn conjugate_eq(w1: &Word, w2: &Word) -> bool {
    let (a, b) = (w1.cyclic_reduce(), w2.cyclic_reduce());
    if a.len() != b.len() {
        return false;
    }
    let doubled = a.codes().repeat(2);
    doubled.contains(&b.codes())
}

impl fmt::Display for Word {
    /// Caret notation with run-length exponents, e.g. `a^3 b^-2 c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let s = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == s {
                j += 1;
            }
            let e = (j - i) as i64 * if s.inverse { -1 } else { 1 };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match e {
                1 => write!(f, "{}", s.letter.name())?,
                _ => write!(f, "{}^{}", s.letter.name(), e)?,
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = FreeGroupError;

    /// Accepts tokens like `a`, `b^-2`, `q1`, `q4^3`, separated by spaces or
    /// juxtaposed; `1` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FreeGroupError::Parse(s.to_string());
        let chars: Vec<char> = s.chars().collect();
        let mut out = Word::empty();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() || ch == '*' || ch == '.' {
                i += 1;
                continue;
            }
            if ch == '1' && out.is_empty() && s.trim() == "1" {
                return Ok(out);
            }
            let letter = match ch {
                'a' => Letter::A,
                'b' => Letter::B,
                'c' => Letter::C,
                'q' => {
                    i += 1;
                    match chars.get(i) {
                        Some('1') => Letter::Q1,
                        Some('2') => Letter::Q2,
                        Some('3') => Letter::Q3,
                        Some('4') => Letter::Q4,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(bad()),
            };
            i += 1;
            let mut exp = 1i64;
            if chars.get(i) == Some(&'^') {
                i += 1;
                let start = i;
                if matches!(chars.get(i), Some('-') | Some('+')) {
                    i += 1;
                }
                while chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                exp = text.parse().map_err(|_| bad())?;
            }
            out = out.concat(&Word::power(letter, exp));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Square {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flow {
    V,
    H,
}

/// One trajectory of `f_V` or `f_H` between the squares, winding `winding`
/// times around its annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub flow: Flow,
    pub from: Square,
    pub to: Square,
    pub winding: u64,
}

impl Segment {
    pub fn new(flow: Flow, from: Square, to: Square, winding: u64) -> Self {
        Self { flow, from, to, winding }
    }

    /// Groupoid word of the trajectory: `a^m`, `a^{n−1} q1`, `q2 a^{n−1}`,
    /// `q2 a^{n−1} q1` for `f_V`, and the same with `b, q3, q4` for `f_H`.
    fn word(&self, index: usize) -> Result<Word, FreeGroupError> {
        let (gen, out_edge, in_edge) = match self.flow {
            Flow::V => (Letter::A, Letter::Q1, Letter::Q2),
            Flow::H => (Letter::B, Letter::Q3, Letter::Q4),
        };
        if self.from == Square::A && self.to == Square::A {
            return Ok(Word::power(gen, self.winding as i64));
        }
        if self.winding == 0 {
            return Err(FreeGroupError::ZeroWinding(index));
        }
        let core = Word::power(gen, self.winding as i64 - 1);
        let head = if self.from == Square::B { Word::letter(in_edge) } else { Word::empty() };
        let tail = if self.to == Square::B { Word::letter(out_edge) } else { Word::empty() };
        Ok(head.concat(&core).concat(&tail))
    }
}

pub type Itinerary = Vec<Segment>;

/// Free-group word of a loop at `A` made of alternating flow segments.
pub fn itinerary_to_word(it: &[Segment]) -> Result<Word, FreeGroupError> {
    let Some((first, last)) = it.first().zip(it.last()) else {
        return Ok(Word::empty());
    };
    if first.from != Square::A || last.to != Square::A {
        return Err(FreeGroupError::NotLoop);
    }
    for (i, w) in it.windows(2).enumerate() {
        if w[0].to != w[1].from {
            return Err(FreeGroupError::Broken(i + 1, i));
        }
        if w[0].flow == w[1].flow {
            return Err(FreeGroupError::NotAlternating(i, i + 1));
        }
    }
    let mut word = Word::empty();
    for (i, s) in it.iter().enumerate() {
        word = word.concat(&s.word(i)?);
    }
    word.to_free()
}

/// `α̃ = a^{m_1} b^{n_1} ⋯ a^{m_p} b^{n_p}`.
pub fn alpha_tilde(m: &[u64], n: &[u64]) -> Word {
    m.iter().zip(n).fold(Word::empty(), |w, (&mi, &ni)| {
        w.concat(&Word::power(Letter::A, mi as i64))
            .concat(&Word::power(Letter::B, ni as i64))
    })
}

/// `α̃^{(j)}`: the last `j` blocks `a^{m_i} b^{n_i}` moved to the front.
pub fn alpha_tilde_rotation(m: &[u64], n: &[u64], j: usize) -> Word {
    let p = m.len();
    let j = if p == 0 { 0 } else { j % p };
    let idx: Vec<usize> = (p - j..p).chain(0..p - j).collect();
    let (ms, ns): (Vec<u64>, Vec<u64>) = idx.iter().map(|&i| (m[i], n[i])).unzip();
    alpha_tilde(&ms, &ns)
}

/// The `2p` segments of an egg-beater orbit staying in `A`.
pub fn eggbeater_itinerary(m: &[u64], n: &[u64]) -> Itinerary {
    m.iter()
        .zip(n)
        .flat_map(|(&mi, &ni)| {
            [
                Segment::new(Flow::V, Square::A, Square::A, mi),
                Segment::new(Flow::H, Square::A, Square::A, ni),
            ]
        })
        .collect()
}

/// `si = m·n + (m − 1)(n − 1)`, the self-intersection number of the class of
/// `a^m b^n`.
pub fn self_intersection(m: u64, n: u64) -> Result<u64, FreeGroupError> {
    if m == 0 || n == 0 {
        return Err(FreeGroupError::NonPositive);
    }
    Ok(m * n + (m - 1) * (n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("a^3 b^-2 c").to_string(), "a^3 b^-2 c");
        assert_eq!(w("aab").to_string(), "a^2 b");
        assert_eq!(w("q1 q4^-1").to_string(), "q1 q4^-1");
        assert_eq!(w("1"), Word::empty());
        assert_eq!(w(""), Word::empty());
        assert!("d".parse::<Word>().is_err());
        assert!("q5".parse::<Word>().is_err());
        assert!("a^x".parse::<Word>().is_err());
    }

    #[test]
    fn reductions() {
        assert!(w("a b b^-1 a^-1").reduce().is_empty());
        assert_eq!(w("a^-1 b a").cyclic_reduce(), w("b"));
        let alpha = alpha_tilde(&[1, 2], &[3, 1]);
        assert_eq!(alpha.cyclic_reduce(), alpha);
        assert!(alpha.is_cyclically_reduced());
    }

    #[test]
    fn conjugacy() {
        let x = w("a^2 b c^-1 b");
        for k in 0..x.len() {
            assert!(conjugate_eq(&x, &x.rotate_right(k)));
        }
        assert!(!conjugate_eq(&w("a^2 b"), &w("a b^2")));
        assert!(conjugate_eq(&w("c a b^2 c^-1"), &w("b a b")));
        let (m, n) = ([2, 5, 3], [7, 1, 4]);
        let alpha = alpha_tilde(&m, &n);
        for j in 1..=3 {
            assert!(conjugate_eq(&alpha, &alpha_tilde_rotation(&m, &n, j)));
        }
        assert_eq!(alpha_tilde_rotation(&m, &n, 3), alpha);
    }

    #[test]
    fn groupoid_translation() {
        assert_eq!(w("q1 q2").to_free().unwrap(), w("a"));
        assert_eq!(w("q3 q4").to_free().unwrap(), w("b"));
        assert_eq!(w("q3 q2").to_free().unwrap(), w("c"));
        assert_eq!(w("q1 q4").to_free().unwrap(), w("a c^-1 b"));
        assert!(w("q1 q3").to_free().is_err());
    }

    #[test]
    fn itineraries() {
        let aa = [
            Segment::new(Flow::V, Square::A, Square::A, 3),
            Segment::new(Flow::H, Square::A, Square::A, 2),
        ];
        assert_eq!(itinerary_to_word(&aa).unwrap(), w("a^3 b^2"));
        let ab = [
            Segment::new(Flow::V, Square::A, Square::B, 4),
            Segment::new(Flow::H, Square::B, Square::A, 2),
        ];
        assert_eq!(itinerary_to_word(&ab).unwrap(), w("a^4 c^-1 b^2"));
        assert_eq!(itinerary_to_word(&[]).unwrap(), Word::empty());
        assert_eq!(itinerary_to_word(&ab[..1]), Err(FreeGroupError::NotLoop));
        let broken = [aa[0], ab[1]];
        assert!(matches!(itinerary_to_word(&broken), Err(FreeGroupError::NotLoop | FreeGroupError::Broken(..))));
        let same = [aa[0], aa[0]];
        assert_eq!(itinerary_to_word(&same), Err(FreeGroupError::NotAlternating(0, 1)));
        let zero = [
            Segment::new(Flow::V, Square::A, Square::B, 0),
            Segment::new(Flow::H, Square::B, Square::A, 1),
        ];
        assert_eq!(itinerary_to_word(&zero), Err(FreeGroupError::ZeroWinding(0)));
    }

    #[test]
    fn eggbeater_loop_is_alpha() {
        let (m, n) = ([1, 4], [2, 3]);
        assert_eq!(itinerary_to_word(&eggbeater_itinerary(&m, &n)).unwrap(), alpha_tilde(&m, &n));
    }

    #[test]
    fn self_intersection_values() {
        assert_eq!(self_intersection(1, 1), Ok(1));
        assert_eq!(self_intersection(2, 3), Ok(8));
        assert_eq!(self_intersection(3, 2), Ok(8));
        assert_eq!(self_intersection(0, 2), Err(FreeGroupError::NonPositive));
    }
}
