//! Exhaustive generators for small words and forests, used by the property
//! suites and the oracle subcommands.

use crate::forest::{b_plus, Forest, Tree};
use crate::word::{Bin, Letter, Word};

/// All Nat words of exactly this length with letters in 1..=max_letter.
pub fn nat_words_of_length(len: usize, max_letter: u64) -> Vec<Word> {
    fn rec(len: usize, max_letter: u64, current: &mut Vec<u64>, out: &mut Vec<Word>) {
        if current.len() == len {
            out.push(Word::nat(current).expect("letters >= 1"));
            return;
        }
        for l in 1..=max_letter {
            current.push(l);
            rec(len, max_letter, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, max_letter, &mut Vec::new(), &mut out);
    out
}

pub fn nat_words_up_to_length(len: usize, max_letter: u64) -> Vec<Word> {
    (0..=len)
        .flat_map(|k| nat_words_of_length(k, max_letter))
        .collect()
}

/// All {x,y} words of exactly this length.
pub fn bin_words_of_length(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << len) {
        let letters: Vec<Letter> = (0..len)
            .map(|i| {
                if mask >> i & 1 == 0 {
                    Letter::Bin(Bin::X)
                } else {
                    Letter::Bin(Bin::Y)
                }
            })
            .collect();
        out.push(Word::from_letters(letters).expect("single alphabet"));
    }
    out
}

pub fn bin_words_up_to_length(len: usize) -> Vec<Word> {
    (0..=len).flat_map(bin_words_of_length).collect()
}

/// menu[s] lists every tree with s vertices, sorted by the canonical order.
fn tree_menu(max_size: usize, max_dec: u64) -> Vec<Vec<Tree>> {
    let mut menu: Vec<Vec<Tree>> = vec![Vec::new()];
    for s in 1..=max_size {
        let mut ts = Vec::new();
        for dec in 1..=max_dec {
            for children in forests_from_menu(s - 1, &menu, None) {
                ts.push(b_plus(Letter::Nat(dec), children).expect("valid decoration"));
            }
        }
        ts.sort();
        menu.push(ts);
    }
    menu
}

/// Forests of the given total size assembled from `menu`; multisets appear
/// once because tree choices are kept non-decreasing starting from `min`.
fn forests_from_menu(size: usize, menu: &[Vec<Tree>], min: Option<&Tree>) -> Vec<Forest> {
    if size == 0 {
        return vec![Forest::empty()];
    }
    let mut out = Vec::new();
    for first_size in 1..=size {
        for t in &menu[first_size] {
            if let Some(m) = min {
                if t < m {
                    continue;
                }
            }
            for rest in forests_from_menu(size - first_size, menu, Some(t)) {
                let mut trees = vec![t.clone()];
                trees.extend_from_slice(rest.trees());
                out.push(Forest::from_trees(trees).expect("same alphabet"));
            }
        }
    }
    out
}

/// All Nat trees with exactly `size` vertices, decorations in 1..=max_dec.
pub fn trees_of_size(size: usize, max_dec: u64) -> Vec<Tree> {
    if size == 0 {
        return Vec::new();
    }
    tree_menu(size, max_dec).swap_remove(size)
}

/// All Nat forests with exactly `size` vertices, decorations in 1..=max_dec.
pub fn forests_of_size(size: usize, max_dec: u64) -> Vec<Forest> {
    let menu = tree_menu(size, max_dec);
    forests_from_menu(size, &menu, None)
}

pub fn forests_up_to_size(size: usize, max_dec: u64) -> Vec<Forest> {
    let menu = tree_menu(size, max_dec);
    (0..=size)
        .flat_map(|s| forests_from_menu(s, &menu, None))
        .collect()
}

/// All Nat forests of exactly this weight (sum of decorations). Decorations
/// are bounded by the weight itself, so no separate cap is needed.
pub fn forests_of_weight(weight: u64) -> Vec<Forest> {
    fn trees_of_weight(weight: u64, memo: &mut Vec<Option<Vec<Tree>>>) -> Vec<Tree> {
        if let Some(hit) = &memo[weight as usize] {
            return hit.clone();
        }
        let mut out = Vec::new();
        for dec in 1..=weight {
            for children in forests_rec(weight - dec, memo, None) {
                out.push(b_plus(Letter::Nat(dec), children).expect("valid decoration"));
            }
        }
        out.sort();
        memo[weight as usize] = Some(out.clone());
        out
    }
    fn forests_rec(
        weight: u64,
        memo: &mut Vec<Option<Vec<Tree>>>,
        min: Option<Tree>,
    ) -> Vec<Forest> {
        if weight == 0 {
            return vec![Forest::empty()];
        }
        let mut out = Vec::new();
        for first_weight in 1..=weight {
            for t in trees_of_weight(first_weight, memo) {
                if let Some(m) = &min {
                    if &t < m {
                        continue;
                    }
                }
                for rest in forests_rec(weight - first_weight, memo, Some(t.clone())) {
                    let mut trees = vec![t.clone()];
                    trees.extend_from_slice(rest.trees());
                    out.push(Forest::from_trees(trees).expect("same alphabet"));
                }
            }
        }
        out
    }
    let mut memo = vec![None; weight as usize + 1];
    forests_rec(weight, &mut memo, None)
}
