//! Brute-force oracles shared by the property suites. Everything here is
//! deliberately naive — position subsets, odometers over tuples — so that it
//! cannot share a bug with the recursive implementations under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use zeta_forest::{Forest, Letter, LinComb, Q, Tree, Word};

pub fn q(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn word(text: &str) -> Word {
    Word::parse(text).expect("test word parses")
}

pub fn forest(text: &str) -> Forest {
    Forest::parse(text).expect("test forest parses")
}

/// One over v^s as an exact rational, built directly from BigInt::pow.
pub fn recip(v: u64, s: u64) -> Q {
    Q::new(BigInt::one(), BigInt::from(v).pow(s as u32))
}

/// Shuffle product by enumerating the positions of the first word's letters
/// among all |u| + |v| slots.
pub fn brute_shuffle(u: &Word, v: &Word) -> LinComb<Word, Q> {
    let a = u.letters();
    let b = v.letters();
    let n = a.len() + b.len();
    assert!(n < 24, "brute shuffle is for short words");
    let mut out = LinComb::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let mut from_a = a.iter();
        let mut from_b = b.iter();
        let letters: Vec<Letter> = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    *from_a.next().expect("popcount matches")
                } else {
                    *from_b.next().expect("remaining slots")
                }
            })
            .collect();
        out.add_term(Word::from_letters(letters).expect("same alphabet"), q(1));
    }
    out
}

/// Truncated nested sum over tuples n >= n1 > n2 > ... (or >= when weak),
/// written as an explicit recursion over the letters.
pub fn brute_word_sum(w: &Word, n: u64, strict: bool) -> Q {
    fn go(letters: &[Letter], max: u64, strict: bool) -> Q {
        let Some((first, rest)) = letters.split_first() else {
            return Q::one();
        };
        let s = match first {
            Letter::Nat(s) => *s,
            Letter::Bin(_) => panic!("brute word sums are for Nat words"),
        };
        let mut total = Q::zero();
        for v in 1..=max {
            let inner_max = if strict { v - 1 } else { v };
            total += recip(v, s) * go(rest, inner_max, strict);
        }
        total
    }
    go(w.letters(), n, strict)
}

/// Vertices of a forest in preorder, each with its decoration exponent and
/// the preorder index of its parent.
pub fn flatten_vertices(f: &Forest) -> Vec<(u64, Option<usize>)> {
    fn walk(t: &Tree, parent: Option<usize>, out: &mut Vec<(u64, Option<usize>)>) {
        let s = match t.decoration() {
            Letter::Nat(s) => s,
            Letter::Bin(_) => panic!("brute forest sums are for Nat forests"),
        };
        let me = out.len();
        out.push((s, parent));
        for child in t.children().trees() {
            walk(child, Some(me), out);
        }
    }
    let mut out = Vec::new();
    for t in f.trees() {
        walk(t, None, &mut out);
    }
    out
}

/// Truncated forest sum by odometer: assign every vertex a value in 1..=n,
/// keep assignments where each child is below (strictly or weakly) its
/// parent, and add up the products of reciprocal powers.
pub fn brute_forest_sum(f: &Forest, n: u64, strict: bool) -> Q {
    let vertices = flatten_vertices(f);
    if vertices.is_empty() {
        return Q::one();
    }
    if n == 0 {
        return Q::zero();
    }
    let mut values = vec![1u64; vertices.len()];
    let mut total = Q::zero();
    loop {
        let admissible = vertices.iter().enumerate().all(|(i, (_, parent))| {
            parent.is_none_or(|p| {
                if strict {
                    values[i] < values[p]
                } else {
                    values[i] <= values[p]
                }
            })
        });
        if admissible {
            let mut term = Q::one();
            for (i, (s, _)) in vertices.iter().enumerate() {
                term *= recip(values[i], *s);
            }
            total += term;
        }
        let mut pos = 0;
        loop {
            if pos == values.len() {
                return total;
            }
            if values[pos] < n {
                values[pos] += 1;
                break;
            }
            values[pos] = 1;
            pos += 1;
        }
    }
}
