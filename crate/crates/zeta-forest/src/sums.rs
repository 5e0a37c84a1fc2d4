//! Exact finite-horizon nested sums: truncations of (starred) multiple zeta
//! values, their arborified analogues, and tree zeta values.
//!
//! All identities of the algebraic layer hold *exactly* at every finite
//! horizon N, because the summation operator behind them is Rota–Baxter of
//! weight ±1 already before taking limits: strict chains pair with the
//! stuffle (λ = 1), weak chains with λ = −1. The property tests exercise
//! precisely that.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::forest::{Forest, Tree};
use crate::scalar::Scalar;
use crate::word::{Alphabet, Letter, Word};

/// Truncation bound for every summation variable; stands in for the N → ∞
/// limit of the convergent series.
pub type Horizon = u64;

fn nat_exponent(l: &Letter) -> u64 {
    match l {
        Letter::Nat(s) => *s,
        Letter::Bin(_) => unreachable!("callers check the alphabet before summing"),
    }
}

fn require_nat_word(w: &Word) -> Result<()> {
    if w.alphabet() == Some(Alphabet::Bin) {
        return Err(Error::AlphabetMismatch(format!(
            "partial sums need natural exponents, got the {{x,y}}-word {w}"
        )));
    }
    Ok(())
}

fn require_nat_forest(f: &Forest) -> Result<()> {
    if f.alphabet() == Some(Alphabet::Bin) {
        return Err(Error::AlphabetMismatch(format!(
            "partial sums need natural decorations, got the {{x,y}}-forest {f}"
        )));
    }
    Ok(())
}

/// One summation layer: from m ↦ a(m) to m ↦ Σ_{p=1}^{m} p^{−s}·a(p−1)
/// (strict) or Σ_{p=1}^{m} p^{−s}·a(p) (weak). This is the weight −1 summation
/// operator, pre-composed with the shift for the strict variant.
fn beta_step<S: Scalar>(s: u64, a: &[S], strict: bool) -> Vec<S> {
    let mut b = Vec::with_capacity(a.len());
    b.push(S::zero());
    for m in 1..a.len() {
        let src = if strict { &a[m - 1] } else { &a[m] };
        let term = S::recip_pow(m as u64, s) * src.clone();
        let next = b[m - 1].clone() + term;
        b.push(next);
    }
    b
}

/// The truncated (starred) multiple zeta value
/// Σ over N ≥ n₁ > … > n_k ≥ 1 (strict) or N ≥ n₁ ≥ … ≥ n_k ≥ 1 (weak)
/// of Π nᵢ^{−sᵢ}, by prefix-sum dynamic programming in O(N·k) steps.
pub fn word_sum<S: Scalar>(w: &Word, n: Horizon, strict: bool) -> Result<S> {
    require_nat_word(w)?;
    let mut cur = vec![S::one(); (n + 1) as usize];
    for l in w.letters().iter().rev() {
        cur = beta_step(nat_exponent(l), &cur, strict);
    }
    Ok(cur[n as usize].clone())
}

/// The truncated arborified zeta value: Σ over maps V(F) → [1, N] that
/// decrease strictly (resp. weakly) along every root-to-leaf edge of
/// Π_v n_v^{−d(v)}. Computed by the operated fold whose carrier is the vector
/// of partial sums m ↦ S_F(m); repeated subtrees are folded once thanks to a
/// memo keyed by the subtree's canonical form.
pub fn forest_sum<S: Scalar>(f: &Forest, n: Horizon, strict: bool) -> Result<S> {
    require_nat_forest(f)?;
    let mut memo: HashMap<Tree, Vec<S>> = HashMap::new();
    Ok(forest_vec(f, n, strict, &mut memo)[n as usize].clone())
}

fn forest_vec<S: Scalar>(
    f: &Forest,
    n: Horizon,
    strict: bool,
    memo: &mut HashMap<Tree, Vec<S>>,
) -> Vec<S> {
    let mut acc = vec![S::one(); (n + 1) as usize];
    for t in f.trees() {
        let tv = tree_vec(t, n, strict, memo);
        for (a, b) in acc.iter_mut().zip(tv.iter()) {
            *a *= b.clone();
        }
    }
    acc
}

fn tree_vec<S: Scalar>(
    t: &Tree,
    n: Horizon,
    strict: bool,
    memo: &mut HashMap<Tree, Vec<S>>,
) -> Vec<S> {
    if let Some(hit) = memo.get(t) {
        return hit.clone();
    }
    let child = forest_vec(t.children(), n, strict, memo);
    let out = beta_step(nat_exponent(&t.decoration()), &child, strict);
    memo.insert(t.clone(), out.clone());
    out
}

/// The truncated tree zeta value: Σ over all maps n: V(F) → [1, N] of
/// Π_v (Σ_{v′ ⪰ v} n_{v′})^{−d(v)}, where v′ ranges over the subtree above v.
/// Deliberately brute force over all N^{|V|} assignments — this is the
/// oracle-grade reference the reduction routes are checked against.
pub fn tzv_sum<S: Scalar>(f: &Forest, n: Horizon) -> Result<S> {
    require_nat_forest(f)?;
    struct Vertex {
        dec: u64,
        children: Vec<usize>,
    }
    // Post-order list: every child sits before its parent, so one forward
    // pass turns an assignment into subtree totals.
    fn collect(t: &Tree, out: &mut Vec<Vertex>) -> usize {
        let children = t.children().trees().iter().map(|c| collect(c, out)).collect();
        out.push(Vertex {
            dec: nat_exponent(&t.decoration()),
            children,
        });
        out.len() - 1
    }
    let mut vertices = Vec::new();
    for t in f.trees() {
        collect(t, &mut vertices);
    }
    if vertices.is_empty() {
        return Ok(S::one());
    }
    if n == 0 {
        return Ok(S::zero());
    }
    let count = vertices.len();
    let mut assign = vec![1u64; count];
    let mut acc = S::zero();
    loop {
        let mut totals = assign.clone();
        for (i, v) in vertices.iter().enumerate() {
            for &c in &v.children {
                totals[i] += totals[c];
            }
        }
        let mut term = S::one();
        for (i, v) in vertices.iter().enumerate() {
            term *= S::recip_pow(totals[i], v.dec);
        }
        acc += term;
        let mut k = 0;
        loop {
            if k == count {
                return Ok(acc);
            }
            if assign[k] < n {
                assign[k] += 1;
                break;
            }
            assign[k] = 1;
            k += 1;
        }
    }
}
