use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::{self, Display};
use std::str::FromStr;

/// The two-letter alphabet used for iterated-integral words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bin {
    X,
    Y,
}

/// A decoration: a positive integer or one of {x, y}. Variant order gives
/// the canonical letter order (numeric on naturals, x before y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Nat(u64),
    Bin(Bin),
}

impl Letter {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Letter::Nat(_) => Alphabet::Nat,
            Letter::Bin(_) => Alphabet::Bin,
        }
    }

    /// Nat letters weigh their value, x and y weigh one.
    pub fn weight(&self) -> u64 {
        match self {
            Letter::Nat(n) => *n,
            Letter::Bin(_) => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Letter::Nat(0) => Err(Error::Parse("letters must be >= 1".into())),
            _ => Ok(()),
        }
    }
}

impl Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Nat(n) => write!(f, "{n}"),
            Letter::Bin(Bin::X) => write!(f, "x"),
            Letter::Bin(Bin::Y) => write!(f, "y"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    Nat,
    Bin,
}

/// A finite word over one alphabet. The empty word belongs to both.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn nat(parts: &[u64]) -> Result<Self> {
        Word::from_letters(parts.iter().map(|&n| Letter::Nat(n)).collect())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        let mut alphabet = None;
        for l in &letters {
            l.validate()?;
            match alphabet {
                None => alphabet = Some(l.alphabet()),
                Some(a) if a == l.alphabet() => {}
                Some(_) => {
                    return Err(Error::AlphabetMismatch(
                        "words cannot mix natural and {x,y} letters".into(),
                    ))
                }
            }
        }
        Ok(Word(letters))
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

    /// None only for the empty word.
    pub fn alphabet(&self) -> Option<Alphabet> {
        self.0.first().map(|l| l.alphabet())
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|l| l.weight()).sum()
    }

    /// Number of zeta exponents this word stands for: the length on the
    /// natural alphabet, the number of y letters on {x,y}.
    pub fn depth(&self) -> usize {
        match self.alphabet() {
            None => 0,
            Some(Alphabet::Nat) => self.len(),
            Some(Alphabet::Bin) => self
                .0
                .iter()
                .filter(|l| matches!(l, Letter::Bin(Bin::Y)))
                .count(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() || t == "[]" {
            return Ok(Word::empty());
        }
        if let Some(body) = t.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated word {t:?}")))?;
            if body.trim().is_empty() {
                return Ok(Word::empty());
            }
            let mut parts = Vec::new();
            for piece in body.split(',') {
                let n: u64 = piece
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad letter {:?} in {t:?}", piece.trim())))?;
                parts.push(n);
            }
            return Word::nat(&parts);
        }
        let mut letters = Vec::new();
        for ch in t.chars() {
            match ch {
                'x' => letters.push(Letter::Bin(Bin::X)),
                'y' => letters.push(Letter::Bin(Bin::Y)),
                _ => {
                    return Err(Error::Parse(format!(
                        "expected [s1,...] or a word over x,y, got {t:?}"
                    )))
                }
            }
        }
        Word::from_letters(letters)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet() {
            None => write!(f, "[]"),
            Some(Alphabet::Nat) => {
                write!(f, "[")?;
                for (i, l) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "]")
            }
            Some(Alphabet::Bin) => {
                for l in &self.0 {
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

/// Canonical word order: by length, then letterwise.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_compatible(w: &Word, v: &Word) -> Result<()> {
    match (w.alphabet(), v.alphabet()) {
        (Some(a), Some(b)) if a != b => Err(Error::AlphabetMismatch(
            format!("{w} and {v} live over different alphabets"),
        )),
        _ => Ok(()),
    }
}

pub fn concat(w: &Word, v: &Word) -> Result<Word> {
    check_compatible(w, v)?;
    let mut letters = w.0.clone();
    letters.extend_from_slice(&v.0);
    Ok(Word(letters))
}

pub fn cons(l: Letter, w: &Word) -> Result<Word> {
    let mut letters = Vec::with_capacity(w.len() + 1);
    letters.push(l);
    letters.extend_from_slice(&w.0);
    Word::from_letters(letters)
}

pub(crate) fn stick(a: &Letter, b: &Letter) -> Result<Letter> {
    match (a, b) {
        (Letter::Nat(x), Letter::Nat(y)) => x
            .checked_add(*y)
            .map(Letter::Nat)
            .ok_or_else(|| Error::Unsupported("letter sum overflows".into())),
        _ => Err(Error::UnsupportedSemigroup(
            "only natural letters can be added".into(),
        )),
    }
}

/// The shuffle product: all interleavings of `w` and `v` with multiplicity.
pub fn shuffle<S: Scalar>(w: &Word, v: &Word) -> Result<LinComb<Word, S>> {
    lambda_shuffle(w, v, &S::zero())
}

/// The lambda-shuffle: interleavings plus lambda-weighted sticking of one
/// letter from each side. lambda = 1 is the stuffle, lambda = -1 the
/// anti-stuffle, lambda = 0 the plain shuffle (the only case allowed over
/// {x,y}, which has no letter addition).
pub fn lambda_shuffle<S: Scalar>(w: &Word, v: &Word, lambda: &S) -> Result<LinComb<Word, S>> {
    check_compatible(w, v)?;
    let stick_terms = !lambda.is_zero();
    if stick_terms
        && (w.alphabet() == Some(Alphabet::Bin) || v.alphabet() == Some(Alphabet::Bin))
    {
        return Err(Error::UnsupportedSemigroup(
            "lambda-shuffle with lambda != 0 needs natural letters".into(),
        ));
    }
    let n = w.len();
    let m = v.len();
    // dp[i][j] = suffix w[i..] against suffix v[j..], merged by word.
    let mut dp: Vec<Vec<HashMap<Word, S>>> = vec![vec![HashMap::new(); m + 1]; n + 1];
    dp[n][m].insert(Word::empty(), S::one());
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            let mut acc: HashMap<Word, S> = HashMap::new();
            let mut absorb = |word: Word, c: S| {
                let slot = acc.entry(word).or_insert_with(S::zero);
                *slot += c;
            };
            if i < n {
                for (u, c) in &dp[i + 1][j] {
                    absorb(cons(w.0[i], u)?, c.clone());
                }
            }
            if j < m {
                for (u, c) in &dp[i][j + 1] {
                    absorb(cons(v.0[j], u)?, c.clone());
                }
            }
            if stick_terms && i < n && j < m {
                let s = stick(&w.0[i], &v.0[j])?;
                for (u, c) in &dp[i + 1][j + 1] {
                    absorb(cons(s, u)?, c.clone() * lambda.clone());
                }
            }
            dp[i][j] = acc;
        }
    }
    Ok(LinComb::from_terms(std::mem::take(&mut dp[0][0])))
}

/// Nat words: empty or first exponent >= 2 (so the strict sum converges).
/// {x,y} words: empty or starting with x and ending with y; with `semi`,
/// only the ending-in-y half is required.
pub fn is_convergent_word(w: &Word, semi: bool) -> bool {
    match w.alphabet() {
        None => true,
        Some(Alphabet::Nat) => matches!(w.0[0], Letter::Nat(n) if n >= 2),
        Some(Alphabet::Bin) => {
            let ends_y = matches!(w.0.last(), Some(Letter::Bin(Bin::Y)));
            if semi {
                ends_y
            } else {
                matches!(w.0[0], Letter::Bin(Bin::X)) && ends_y
            }
        }
    }
}

/// Sends the exponent word (s1,...,sk) to x^{s1-1} y ... x^{sk-1} y.
pub fn binarize(w: &Word) -> Result<Word> {
    let mut letters = Vec::new();
    for l in &w.0 {
        match l {
            Letter::Nat(n) => {
                for _ in 0..(n - 1) {
                    letters.push(Letter::Bin(Bin::X));
                }
                letters.push(Letter::Bin(Bin::Y));
            }
            Letter::Bin(_) => {
                return Err(Error::AlphabetMismatch(
                    "binarize expects a word over natural letters".into(),
                ))
            }
        }
    }
    Word::from_letters(letters)
}

/// Inverse of `binarize`; defined exactly on {x,y} words ending in y.
pub fn debinarize(w: &Word) -> Result<Word> {
    if w.alphabet() == Some(Alphabet::Nat) {
        return Err(Error::AlphabetMismatch(
            "debinarize expects a word over x,y".into(),
        ));
    }
    let mut parts = Vec::new();
    let mut run = 0u64;
    for l in &w.0 {
        match l {
            Letter::Bin(Bin::X) => run += 1,
            Letter::Bin(Bin::Y) => {
                parts.push(run + 1);
                run = 0;
            }
            Letter::Nat(_) => unreachable!(),
        }
    }
    if run > 0 {
        return Err(Error::NotInImage(format!(
            "{w} ends in x, so it is not a binarised exponent word"
        )));
    }
    Word::nat(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn comb(pairs: &[(&str, i64)]) -> LinComb<Word, Q> {
        LinComb::from_terms(
            pairs
                .iter()
                .map(|(w, c)| (Word::parse(w).unwrap(), q(*c))),
        )
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["[]", "[2,1,1]", "[10,3]", "xxyy", "y"] {
            let w = Word::parse(text).unwrap();
            assert_eq!(w.to_string(), text);
        }
        assert_eq!(Word::parse("").unwrap(), Word::empty());
        assert_eq!(Word::parse(" [ 2 , 1 ] ").unwrap(), Word::nat(&[2, 1]).unwrap());
        assert!(Word::parse("[0]").is_err());
        assert!(Word::parse("[2,a]").is_err());
        assert!(Word::parse("xz").is_err());
        assert!(Word::parse("[2").is_err());
    }

    #[test]
    fn canonical_order_is_length_then_lex() {
        let mut ws = vec![
            Word::parse("[1,3]").unwrap(),
            Word::parse("[4]").unwrap(),
            Word::parse("[1,1,2]").unwrap(),
            Word::parse("[2,2]").unwrap(),
        ];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["[4]", "[1,3]", "[2,2]", "[1,1,2]"]);
    }

    #[test]
    fn shuffle_of_xx_and_xy() {
        let w = Word::parse("xx").unwrap();
        let v = Word::parse("xy").unwrap();
        let got: LinComb<Word, Q> = shuffle(&w, &v).unwrap();
        assert_eq!(got, comb(&[("xxxy", 3), ("xxyx", 2), ("xyxx", 1)]));
        assert_eq!(got.format_with(|w| w.to_string(), " "), "3 xxxy + 2 xxyx + xyxx");
    }

    #[test]
    fn shuffle_of_213_and_51() {
        let w = Word::parse("[2,1,3]").unwrap();
        let v = Word::parse("[5,1]").unwrap();
        let got: LinComb<Word, Q> = shuffle(&w, &v).unwrap();
        assert_eq!(
            got,
            comb(&[
                ("[2,1,3,5,1]", 1),
                ("[2,1,5,3,1]", 1),
                ("[2,1,5,1,3]", 1),
                ("[2,5,1,3,1]", 1),
                ("[2,5,1,1,3]", 2),
                ("[5,2,1,3,1]", 1),
                ("[5,2,1,1,3]", 2),
                ("[5,1,2,1,3]", 1),
            ])
        );
        // Shuffle mass is the binomial (2+3 choose 2).
        assert_eq!(got.mass(), q(10));
    }

    #[test]
    fn stuffle_of_213_and_51() {
        let w = Word::parse("[2,1,3]").unwrap();
        let v = Word::parse("[5,1]").unwrap();
        let got = lambda_shuffle(&w, &v, &q(1)).unwrap();
        assert_eq!(
            got,
            comb(&[
                ("[2,1,3,5,1]", 1),
                ("[2,1,5,3,1]", 1),
                ("[2,1,5,1,3]", 1),
                ("[2,1,8,1]", 1),
                ("[2,1,5,4]", 1),
                ("[2,5,1,3,1]", 1),
                ("[2,5,1,1,3]", 2),
                ("[2,5,1,4]", 1),
                ("[2,5,2,3]", 1),
                ("[2,6,3,1]", 1),
                ("[2,6,1,3]", 1),
                ("[2,6,4]", 1),
                ("[5,2,1,3,1]", 1),
                ("[5,2,1,1,3]", 2),
                ("[5,1,2,1,3]", 1),
                ("[5,2,1,4]", 1),
                ("[5,2,2,3]", 1),
                ("[5,3,1,3]", 1),
                ("[7,1,3,1]", 1),
                ("[7,1,1,3]", 2),
                ("[7,2,3]", 1),
                ("[7,1,4]", 1),
            ])
        );
        assert_eq!(got.mass(), q(25));
    }

    #[test]
    fn empty_word_is_the_unit() {
        let w = Word::parse("[2,1]").unwrap();
        let got: LinComb<Word, Q> = lambda_shuffle(&w, &Word::empty(), &q(1)).unwrap();
        assert_eq!(got, LinComb::unit(w));
    }

    #[test]
    fn binary_words_reject_sticking() {
        let w = Word::parse("xy").unwrap();
        let err = lambda_shuffle::<Q>(&w, &w, &q(1)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSemigroup(_)));
        assert!(lambda_shuffle::<Q>(&w, &w, &q(0)).is_ok());
    }

    #[test]
    fn alphabets_do_not_mix() {
        let w = Word::parse("[2]").unwrap();
        let v = Word::parse("xy").unwrap();
        assert!(matches!(
            shuffle::<Q>(&w, &v).unwrap_err(),
            Error::AlphabetMismatch(_)
        ));
        assert!(matches!(
            concat(&w, &v).unwrap_err(),
            Error::AlphabetMismatch(_)
        ));
    }

    #[test]
    fn convergence_predicates() {
        assert!(is_convergent_word(&Word::empty(), false));
        assert!(is_convergent_word(&Word::parse("[2,1]").unwrap(), false));
        assert!(!is_convergent_word(&Word::parse("[1,2]").unwrap(), false));
        assert!(is_convergent_word(&Word::parse("xy").unwrap(), false));
        assert!(!is_convergent_word(&Word::parse("yx").unwrap(), false));
        assert!(!is_convergent_word(&Word::parse("yy").unwrap(), false));
        assert!(is_convergent_word(&Word::parse("yy").unwrap(), true));
        assert!(!is_convergent_word(&Word::parse("xyx").unwrap(), true));
    }

    #[test]
    fn binarize_and_debinarize() {
        let w = Word::parse("[2,1,1]").unwrap();
        let b = binarize(&w).unwrap();
        assert_eq!(b.to_string(), "xyyy");
        assert_eq!(debinarize(&b).unwrap(), w);
        assert_eq!(binarize(&Word::empty()).unwrap(), Word::empty());
        let err = debinarize(&Word::parse("yx").unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotInImage(_)));
        // Binarisation is a concatenation morphism.
        let u = Word::parse("[3]").unwrap();
        let v = Word::parse("[1,2]").unwrap();
        assert_eq!(
            binarize(&concat(&u, &v).unwrap()).unwrap(),
            concat(&binarize(&u).unwrap(), &binarize(&v).unwrap()).unwrap()
        );
    }

    #[test]
    fn weight_and_depth() {
        let w = Word::parse("[2,1,3]").unwrap();
        assert_eq!(w.weight(), 6);
        assert_eq!(w.depth(), 3);
        let b = binarize(&w).unwrap();
        assert_eq!(b.weight(), 6);
        assert_eq!(b.depth(), 3);
    }
}
