use crate::error::{Error, Result};
use crate::lincomb::{bilinear, LinComb};
use crate::scalar::Scalar;
use crate::word::{cons, lambda_shuffle, Alphabet, Bin, Letter, Word};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::{self, Display};
use std::str::FromStr;

/// A rooted tree with decorated vertices. Children form a canonical sorted
/// multiset, so isomorphic trees are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    dec: Letter,
    children: Forest,
}

/// A multiset of trees, stored sorted; the free commutative monoid on trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Forest(Vec<Tree>);

impl Tree {
    pub fn decoration(&self) -> Letter {
        self.dec
    }

    pub fn children(&self) -> &Forest {
        &self.children
    }

    pub fn size(&self) -> usize {
        1 + self.children.size()
    }

    pub fn weight(&self) -> u64 {
        self.dec.weight() + self.children.weight()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.dec.alphabet()
    }

    /// True when no vertex has more than one child.
    pub fn is_ladder(&self) -> bool {
        match self.children.len() {
            0 => true,
            1 => self.children.trees()[0].is_ladder(),
            _ => false,
        }
    }
}

/// Canonical tree order: size, then root decoration, then the child list.
/// It makes a ladder compare exactly like the word of its decorations.
impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.dec.cmp(&other.dec))
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Forest {
    pub fn empty() -> Self {
        Forest(Vec::new())
    }

    pub fn single(t: Tree) -> Self {
        Forest(vec![t])
    }

    pub fn from_trees(trees: Vec<Tree>) -> Result<Self> {
        let mut alphabet = None;
        for t in &trees {
            match alphabet {
                None => alphabet = Some(t.alphabet()),
                Some(a) if a == t.alphabet() => {}
                Some(_) => {
                    return Err(Error::AlphabetMismatch(
                        "forests cannot mix natural and {x,y} decorations".into(),
                    ))
                }
            }
        }
        let mut trees = trees;
        trees.sort();
        Ok(Forest(trees))
    }

    pub fn trees(&self) -> &[Tree] {
        &self.0
    }

    /// Number of trees (not vertices).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total vertex count.
    pub fn size(&self) -> usize {
        self.0.iter().map(|t| t.size()).sum()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|t| t.weight()).sum()
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        self.0.first().map(|t| t.alphabet())
    }

    /// The forest with tree `idx` removed.
    pub fn without(&self, idx: usize) -> Forest {
        let mut trees = self.0.clone();
        trees.remove(idx);
        Forest(trees)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).run()
    }
}

impl FromStr for Forest {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Forest::parse(s)
    }
}

/// Grafts the trees of `children` under a new root decorated `dec`.
pub fn b_plus(dec: Letter, children: Forest) -> Result<Tree> {
    dec.validate()?;
    if let Some(a) = children.alphabet() {
        if a != dec.alphabet() {
            return Err(Error::AlphabetMismatch(format!(
                "root {dec} does not match the decorations of {children}"
            )));
        }
    }
    Ok(Tree { dec, children })
}

pub fn leaf(dec: Letter) -> Result<Tree> {
    b_plus(dec, Forest::empty())
}

pub fn concat_forests(f: &Forest, g: &Forest) -> Result<Forest> {
    let mut trees = f.0.clone();
    trees.extend_from_slice(&g.0);
    Forest::from_trees(trees)
}

/// The linear tree whose root-to-leaf decorations spell `w`.
pub fn ladder_of_word(w: &Word) -> Forest {
    let mut forest = Forest::empty();
    for l in w.letters().iter().rev() {
        forest = Forest::single(b_plus(*l, forest).expect("ladder of a valid word"));
    }
    forest
}

/// Inverse of `ladder_of_word`; None unless the forest is empty or one ladder.
pub fn word_of_ladder(f: &Forest) -> Option<Word> {
    if f.is_empty() {
        return Some(Word::empty());
    }
    if f.len() != 1 || !f.trees()[0].is_ladder() {
        return None;
    }
    let mut letters = Vec::new();
    let mut cur = Some(&f.trees()[0]);
    while let Some(t) = cur {
        letters.push(t.decoration());
        cur = t.children().trees().first();
    }
    Some(Word::from_letters(letters).expect("ladder decorations are homogeneous"))
}

/// Folds the unique operated-algebra morphism out of the free structure:
/// forests multiply with `mul` starting from `unit`, and a tree maps to
/// `beta(decoration, fold of its children)`.
pub fn operated_fold<T>(
    f: &Forest,
    unit: &dyn Fn() -> T,
    mul: &dyn Fn(T, T) -> T,
    beta: &dyn Fn(Letter, T) -> T,
) -> T {
    let mut acc = unit();
    for t in f.trees() {
        let sub = operated_fold(t.children(), unit, mul, beta);
        acc = mul(acc, beta(t.decoration(), sub));
    }
    acc
}

/// Fallible variant of `operated_fold`.
pub fn try_operated_fold<T>(
    f: &Forest,
    unit: &dyn Fn() -> Result<T>,
    mul: &dyn Fn(T, T) -> Result<T>,
    beta: &dyn Fn(Letter, T) -> Result<T>,
) -> Result<T> {
    let mut acc = unit()?;
    for t in f.trees() {
        let sub = try_operated_fold(t.children(), unit, mul, beta)?;
        acc = mul(acc, beta(t.decoration(), sub)?)?;
    }
    Ok(acc)
}

/// Replaces every decoration through `phi`, keeping the shape.
pub fn map_decorations(f: &Forest, phi: &dyn Fn(&Letter) -> Letter) -> Result<Forest> {
    try_operated_fold(
        f,
        &|| Ok(Forest::empty()),
        &|a, b| concat_forests(&a, &b),
        &|dec, g| Ok(Forest::single(b_plus(phi(&dec), g)?)),
    )
}

struct ForestShuffler<'a, S: Scalar> {
    lambda: &'a S,
    stick: bool,
    memo: HashMap<(Forest, Forest), LinComb<Forest, S>>,
}

impl<'a, S: Scalar> ForestShuffler<'a, S> {
    fn graft(dec: Letter, comb: &LinComb<Forest, S>) -> Result<LinComb<Forest, S>> {
        comb.try_map_basis(|h| Ok(Forest::single(b_plus(dec, h.clone())?)))
    }

    fn go(&mut self, f: &Forest, g: &Forest) -> Result<LinComb<Forest, S>> {
        if f.is_empty() {
            return Ok(LinComb::unit(g.clone()));
        }
        if g.is_empty() {
            return Ok(LinComb::unit(f.clone()));
        }
        let key = (f.clone(), g.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = if f.len() == 1 && g.len() == 1 {
            let t1 = &f.trees()[0];
            let t2 = &g.trees()[0];
            let mut out = LinComb::zero();
            let left = self.go(t1.children(), &Forest::single(t2.clone()))?;
            out.add_comb(&Self::graft(t1.decoration(), &left)?);
            let right = self.go(&Forest::single(t1.clone()), t2.children())?;
            out.add_comb(&Self::graft(t2.decoration(), &right)?);
            if self.stick {
                let stuck = crate::word::stick(&t1.decoration(), &t2.decoration())?;
                let both = self.go(t1.children(), t2.children())?;
                out.add_scaled(&Self::graft(stuck, &both)?, self.lambda);
            }
            out
        } else {
            // k + n >= 3: pair every tree of f with every tree of g, shuffle
            // the pair, and multiply by the untouched rest, averaging by kn.
            let k = f.len();
            let n = g.len();
            let weight = S::one() / S::from_u64((k * n) as u64);
            let mut out = LinComb::zero();
            for i in 0..k {
                for j in 0..n {
                    let rest = concat_forests(&f.without(i), &g.without(j))?;
                    let pair = self.go(
                        &Forest::single(f.trees()[i].clone()),
                        &Forest::single(g.trees()[j].clone()),
                    )?;
                    let attached = pair.try_map_basis(|h| concat_forests(h, &rest))?;
                    out.add_scaled(&attached, &weight);
                }
            }
            out
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// The forest λ-shuffle: commutative, unital, compatible with concatenation,
/// but not associative. λ = 0 is the only case allowed over {x,y}.
pub fn forest_shuffle<S: Scalar>(f: &Forest, g: &Forest, lambda: &S) -> Result<LinComb<Forest, S>> {
    match (f.alphabet(), g.alphabet()) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::AlphabetMismatch(format!(
                "{f} and {g} live over different alphabets"
            )))
        }
        _ => {}
    }
    let stick = !lambda.is_zero();
    if stick
        && (f.alphabet() == Some(Alphabet::Bin) || g.alphabet() == Some(Alphabet::Bin))
    {
        return Err(Error::UnsupportedSemigroup(
            "forest lambda-shuffle with lambda != 0 needs natural decorations".into(),
        ));
    }
    let mut shuffler = ForestShuffler {
        lambda,
        stick,
        memo: HashMap::new(),
    };
    shuffler.go(f, g)
}

/// The flattening map of weight λ: the operated morphism sending B₊^ω to
/// left-concatenation of ω and forest concatenation to the word λ-shuffle.
pub fn flatten<S: Scalar>(f: &Forest, lambda: &S) -> Result<LinComb<Word, S>> {
    if !lambda.is_zero() && f.alphabet() == Some(Alphabet::Bin) {
        return Err(Error::UnsupportedSemigroup(
            "flattening with lambda != 0 needs natural decorations".into(),
        ));
    }
    try_operated_fold(
        f,
        &|| Ok(LinComb::unit(Word::empty())),
        &|a, b| bilinear(&a, &b, |u, v| lambda_shuffle(u, v, lambda)),
        &|dec, a| a.try_map_basis(|w| cons(dec, w)),
    )
}

/// Branched binarisation: replaces a vertex decorated n by an x-chain of
/// length n-1 ending in a y carrying the children. A bijection onto the
/// semi-convergent {x,y} forests; the image size is the weight of the input.
pub fn branched_binarize(f: &Forest) -> Result<Forest> {
    try_operated_fold(
        f,
        &|| Ok(Forest::empty()),
        &|a, b| concat_forests(&a, &b),
        &|dec, g| match dec {
            Letter::Nat(n) => {
                let mut t = b_plus(Letter::Bin(Bin::Y), g)?;
                for _ in 0..(n - 1) {
                    t = b_plus(Letter::Bin(Bin::X), Forest::single(t))?;
                }
                Ok(Forest::single(t))
            }
            Letter::Bin(_) => Err(Error::AlphabetMismatch(
                "branched binarisation expects natural decorations".into(),
            )),
        },
    )
}

fn path_text(path: &[usize]) -> String {
    path.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

fn debinarize_tree(t: &Tree, path: &mut Vec<usize>) -> Result<Tree> {
    let mut exponent = 1u64;
    let mut cur = t;
    let mut descended = 0usize;
    loop {
        match cur.decoration() {
            Letter::Bin(Bin::X) => {
                if cur.children().len() != 1 {
                    let err = Err(Error::NotInImage(format!(
                        "x-decorated vertex at path {} has {} children (expected exactly 1)",
                        path_text(path),
                        cur.children().len()
                    )));
                    path.truncate(path.len() - descended);
                    return err;
                }
                exponent += 1;
                cur = &cur.children().trees()[0];
                path.push(0);
                descended += 1;
            }
            Letter::Bin(Bin::Y) => {
                let children = debinarize_forest(cur.children(), path)?;
                path.truncate(path.len() - descended);
                return b_plus(Letter::Nat(exponent), children);
            }
            Letter::Nat(_) => unreachable!("alphabet checked at entry"),
        }
    }
}

fn debinarize_forest(f: &Forest, path: &mut Vec<usize>) -> Result<Forest> {
    let mut trees = Vec::with_capacity(f.len());
    for (i, t) in f.trees().iter().enumerate() {
        path.push(i);
        let out = debinarize_tree(t, path);
        path.pop();
        trees.push(out?);
    }
    Forest::from_trees(trees)
}

/// Inverse of `branched_binarize`, defined exactly on its image: every
/// x-decorated vertex must carry exactly one child, so maximal x-chains end
/// in a y vertex.
pub fn branched_debinarize(f: &Forest) -> Result<Forest> {
    if f.alphabet() == Some(Alphabet::Nat) {
        return Err(Error::AlphabetMismatch(
            "branched debinarisation expects {x,y} decorations".into(),
        ));
    }
    debinarize_forest(f, &mut Vec::new())
}

fn bin_tree_convergent(t: &Tree) -> bool {
    let arity = t.children().len();
    let y = t.decoration() == Letter::Bin(Bin::Y);
    if (arity == 0 || arity >= 2) && !y {
        return false;
    }
    t.children().trees().iter().all(bin_tree_convergent)
}

/// Nat forests: every root >= 2 (`semi` waives this; every Nat forest is
/// semi-convergent). {x,y} forests: leaves and branching vertices y, and,
/// unless `semi`, every root x.
pub fn is_convergent_forest(f: &Forest, semi: bool) -> bool {
    match f.alphabet() {
        None => true,
        Some(Alphabet::Nat) => {
            semi || f
                .trees()
                .iter()
                .all(|t| matches!(t.decoration(), Letter::Nat(n) if n >= 2))
        }
        Some(Alphabet::Bin) => {
            f.trees().iter().all(bin_tree_convergent)
                && (semi
                    || f.trees()
                        .iter()
                        .all(|t| t.decoration() == Letter::Bin(Bin::X)))
        }
    }
}

impl Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dec)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.trees().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn tree_text_sugared(t: &Tree) -> String {
    if t.size() >= 2 && t.is_ladder() {
        let w = word_of_ladder(&Forest::single(t.clone())).expect("ladder");
        let decs: Vec<String> = w.letters().iter().map(|l| l.to_string()).collect();
        return format!("ladder({})", decs.join(","));
    }
    let mut out = t.decoration().to_string();
    if !t.children().is_empty() {
        out.push('(');
        for (i, c) in t.children().trees().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&tree_text_sugared(c));
        }
        out.push(')');
    }
    out
}

/// Like `Display`, but renders every maximal linear tree of two or more
/// vertices as `ladder(d1,...,dk)`. The parser accepts both forms.
pub fn forest_text_sugared(f: &Forest) -> String {
    if f.is_empty() {
        return "()".to_string();
    }
    f.trees()
        .iter()
        .map(tree_text_sugared)
        .collect::<Vec<_>>()
        .join(" ")
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {:?} at byte {} of forest text",
                b as char, self.pos
            )))
        }
    }

    fn run(mut self) -> Result<Forest> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            // "()" is the empty forest.
            self.expect(b'(')?;
            self.skip_ws();
            self.expect(b')')?;
            self.skip_ws();
            if self.pos != self.bytes.len() {
                return Err(Error::Parse("trailing input after ()".into()));
            }
            return Ok(Forest::empty());
        }
        let mut trees = Vec::new();
        loop {
            trees.push(self.tree()?);
            let before = self.pos;
            self.skip_ws();
            if self.pos == self.bytes.len() {
                break;
            }
            if self.pos == before {
                return Err(Error::Parse(format!(
                    "expected a space between trees at byte {}",
                    self.pos
                )));
            }
        }
        Forest::from_trees(trees)
    }

    fn decoration(&mut self) -> Result<Letter> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Letter::Bin(Bin::X))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Letter::Bin(Bin::Y))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let n: u64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("decoration {text:?} out of range")))?;
                if n == 0 {
                    return Err(Error::Parse("decorations must be >= 1".into()));
                }
                Ok(Letter::Nat(n))
            }
            other => Err(Error::Parse(format!(
                "expected a decoration at byte {}, found {:?}",
                self.pos,
                other.map(|b| b as char)
            ))),
        }
    }

    fn tree(&mut self) -> Result<Tree> {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(b"ladder") {
            self.pos += "ladder".len();
            self.skip_ws();
            self.expect(b'(')?;
            let mut decs = Vec::new();
            loop {
                self.skip_ws();
                decs.push(self.decoration()?);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(Error::Parse("expected ',' or ')' in ladder".into())),
                }
            }
            let word = Word::from_letters(decs)?;
            return Ok(ladder_of_word(&word).trees()[0].clone());
        }
        let dec = self.decoration()?;
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(b')') {
                self.pos += 1;
            } else {
                loop {
                    children.push(self.tree()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => {
                            return Err(Error::Parse(format!(
                                "expected ',' or ')' at byte {} of forest text",
                                self.pos
                            )))
                        }
                    }
                }
            }
        }
        b_plus(dec, Forest::from_trees(children)?)
    }
}
