//! The ϒ product (read "Upsilon") on forests with natural-number decorations,
//! together with its flattening to words.
//!
//! ϒ is what the forest shuffle at λ = 0 becomes when transported through
//! branched binarisation: binarise both factors, shuffle over {x, y}, read the
//! result back. [`yew`] computes it directly by a binomial recursion and is the
//! production route; [`yew_via_definition`] performs the transport literally
//! and serves as the independent oracle. The two agree on every input.
//!
//! ϒ is commutative and unital but *not* associative on general forests; it is
//! associative on ladders, which is what makes the flattening [`fl_yew`]
//! well defined.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::forest::{
    b_plus, branched_binarize, branched_debinarize, concat_forests, forest_shuffle,
    ladder_of_word, word_of_ladder, Forest, Tree,
};
use crate::lincomb::{bilinear, LinComb};
use crate::scalar::{Q, Scalar};
use crate::word::{cons, Alphabet, Letter, Word};

fn require_nat(f: &Forest) -> Result<()> {
    if f.alphabet() == Some(Alphabet::Bin) {
        return Err(Error::AlphabetMismatch(format!(
            "the Upsilon product needs natural decorations, got the {{x,y}}-forest {f}"
        )));
    }
    Ok(())
}

fn nat_dec(t: &Tree) -> u64 {
    match t.decoration() {
        Letter::Nat(n) => n,
        Letter::Bin(_) => unreachable!("callers check the alphabet before recursing"),
    }
}

fn binom<S: Scalar>(top: u64, bot: u64) -> S {
    S::from_bigint(&binomial(BigInt::from(top), BigInt::from(bot)))
}

/// Memoised computer for ϒ and its word/flattening companions. Reusing one
/// value across calls shares the cache; the free functions below are one-shot
/// wrappers.
pub struct Upsilon<S: Scalar = Q> {
    memo: HashMap<(Forest, Forest), LinComb<Forest, S>>,
}

impl<S: Scalar> Default for Upsilon<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Upsilon<S> {
    pub fn new() -> Self {
        Upsilon {
            memo: HashMap::new(),
        }
    }

    /// The ϒ product of two forests over ℕ*. Weight-preserving, commutative,
    /// unital; fails only on {x, y} decorations.
    pub fn yew(&mut self, f: &Forest, g: &Forest) -> Result<LinComb<Forest, S>> {
        require_nat(f)?;
        require_nat(g)?;
        Ok(self.go(f, g))
    }

    fn go(&mut self, f: &Forest, g: &Forest) -> LinComb<Forest, S> {
        if f.is_empty() {
            return LinComb::unit(g.clone());
        }
        if g.is_empty() {
            return LinComb::unit(f.clone());
        }
        let key = (f.clone(), g.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = if f.len() == 1 && g.len() == 1 {
            self.two_trees(&f.trees()[0], &g.trees()[0])
        } else {
            // k + n >= 3: pair every tree of f with every tree of g and carry
            // the untouched rest along, averaging by kn.
            let k = f.len();
            let n = g.len();
            let weight = S::one() / S::from_u64((k * n) as u64);
            let mut out = LinComb::zero();
            for i in 0..k {
                for j in 0..n {
                    let rest = concat_forests(&f.without(i), &g.without(j))
                        .expect("decorations stay natural");
                    let pair = self.go(
                        &Forest::single(f.trees()[i].clone()),
                        &Forest::single(g.trees()[j].clone()),
                    );
                    let attached = pair.map_basis(|h| {
                        concat_forests(h, &rest).expect("decorations stay natural")
                    });
                    out.add_scaled(&attached, &weight);
                }
            }
            out
        };
        self.memo.insert(key, out.clone());
        out
    }

    /// The two-tree clause: for roots n, m with child forests f₁, f₂,
    ///
    ///   B₊ⁿ(f₁) ϒ B₊ᵐ(f₂) = Σ_{i=0}^{m-1} C(n-1+i, i) B₊^{n+i}[f₁ ϒ B₊^{m-i}(f₂)]
    ///                      + Σ_{j=0}^{n-1} C(m-1+j, j) B₊^{m+j}[B₊^{n-j}(f₁) ϒ f₂].
    fn two_trees(&mut self, t1: &Tree, t2: &Tree) -> LinComb<Forest, S> {
        let n = nat_dec(t1);
        let m = nat_dec(t2);
        let mut out = LinComb::zero();
        for i in 0..m {
            let shrunk = regraft(m - i, t2);
            let inner = self.go(t1.children(), &shrunk);
            out.add_scaled(&graft(n + i, &inner), &binom::<S>(n - 1 + i, i));
        }
        for j in 0..n {
            let shrunk = regraft(n - j, t1);
            let inner = self.go(&shrunk, t2.children());
            out.add_scaled(&graft(m + j, &inner), &binom::<S>(m - 1 + j, j));
        }
        out
    }

    /// ϒ restricted to words via the ladder embedding. Closed: the ϒ product
    /// of two ladders is again a combination of ladders.
    pub fn yew_words(&mut self, w: &Word, v: &Word) -> Result<LinComb<Word, S>> {
        let out = self.yew(&ladder_of_word(w), &ladder_of_word(v))?;
        out.try_map_basis(|f| {
            word_of_ladder(f).ok_or_else(|| {
                Error::NotInImage(format!(
                    "the Upsilon product of two ladders left the ladder span at {f}"
                ))
            })
        })
    }

    /// The ϒ-flattening: the operated-algebra morphism determined by
    /// fl_ϒ(∅) = ∅, fl_ϒ(F₁F₂) = fl_ϒ(F₁) ϒ fl_ϒ(F₂) and
    /// fl_ϒ(B₊ⁿ F) = (n)⊔fl_ϒ(F), with ϒ acting on words through ladders.
    pub fn fl_yew(&mut self, f: &Forest) -> Result<LinComb<Word, S>> {
        require_nat(f)?;
        self.fl_go(f)
    }

    fn fl_go(&mut self, f: &Forest) -> Result<LinComb<Word, S>> {
        let mut acc = LinComb::unit(Word::empty());
        for t in f.trees() {
            let sub = self.fl_go(t.children())?;
            let lifted = sub.try_map_basis(|w| cons(t.decoration(), w))?;
            acc = bilinear(&acc, &lifted, |u, v| self.yew_words(u, v))?;
        }
        Ok(acc)
    }
}

/// Wraps every basis forest of `comb` under a new root decorated `dec`.
fn graft<S: Scalar>(dec: u64, comb: &LinComb<Forest, S>) -> LinComb<Forest, S> {
    comb.map_basis(|h| {
        Forest::single(b_plus(Letter::Nat(dec), h.clone()).expect("decorations stay natural"))
    })
}

/// The single-tree forest with the shape of `t` but root decoration `dec`.
fn regraft(dec: u64, t: &Tree) -> Forest {
    Forest::single(
        b_plus(Letter::Nat(dec), t.children().clone()).expect("decorations stay natural"),
    )
}

/// One-shot [`Upsilon::yew`]: the ϒ product by the binomial recursion.
pub fn yew<S: Scalar>(f: &Forest, g: &Forest) -> Result<LinComb<Forest, S>> {
    Upsilon::new().yew(f, g)
}

/// ϒ computed from its definition: branched-binarise both factors, take the
/// forest shuffle at λ = 0 over {x, y}, and debinarise every basis forest.
/// Exists as an independent cross-check for [`yew`]; a `NotInImage` error would
/// indicate an implementation bug, since the shuffle of two binarised forests
/// stays inside the binarisation image.
pub fn yew_via_definition<S: Scalar>(f: &Forest, g: &Forest) -> Result<LinComb<Forest, S>> {
    require_nat(f)?;
    require_nat(g)?;
    let bf = branched_binarize(f)?;
    let bg = branched_binarize(g)?;
    let shuffled = forest_shuffle(&bf, &bg, &S::zero())?;
    shuffled.try_map_basis(branched_debinarize)
}

/// One-shot [`Upsilon::yew_words`].
pub fn yew_words<S: Scalar>(w: &Word, v: &Word) -> Result<LinComb<Word, S>> {
    Upsilon::new().yew_words(w, v)
}

/// One-shot [`Upsilon::fl_yew`].
pub fn fl_yew<S: Scalar>(f: &Forest) -> Result<LinComb<Word, S>> {
    Upsilon::new().fl_yew(f)
}
