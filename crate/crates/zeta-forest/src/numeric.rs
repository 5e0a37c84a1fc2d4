//! Floating-point evaluation of multiple, tree and Mordell–Tornheim zeta
//! values and of exact zeta expressions, with truncation-based error
//! estimates.
//!
//! Every evaluator computes the same truncated sum at two horizons, N and 2N;
//! the reported value is the 2N result and the error estimate is the absolute
//! difference — a heuristic, not a rigorous tail bound. Summation always runs
//! in a fixed ascending variable order and reciprocal powers come from a
//! plain multiply loop, so every result is bit-reproducible for a given N.

use num_traits::ToPrimitive;

use crate::cones::bradley_zhou_failure;
use crate::error::{Error, Result};
use crate::forest::{is_convergent_forest, Forest};
use crate::lincomb::LinComb;
use crate::scalar::{Q, Scalar};
use crate::sums::{tzv_sum, word_sum, Horizon};
use crate::word::{debinarize, is_convergent_word, Alphabet, Word};

/// A truncation-based numeric value: the sum at horizon `horizon` (already
/// the doubled one), with `error_estimate = |value(2N) − value(N)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericResult {
    pub value: f64,
    pub error_estimate: f64,
    pub horizon: Horizon,
}

impl NumericResult {
    fn from_two_horizons(at_half: f64, at_full: f64, full: Horizon) -> Self {
        NumericResult {
            value: at_full,
            error_estimate: (at_full - at_half).abs(),
            horizon: full,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "error_estimate": self.error_estimate,
            "horizon": self.horizon,
        })
    }
}

impl std::fmt::Display for NumericResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} ± {} (N={})",
            self.value, self.error_estimate, self.horizon
        )
    }
}

/// The default horizon for a word of the given depth: 10⁵ through depth 3,
/// 2·10⁴ beyond.
pub fn default_horizon(depth: usize) -> Horizon {
    if depth <= 3 {
        100_000
    } else {
        20_000
    }
}

/// ζ_⋆(w) (strict) or ζ⋆_⋆(w) (weak chains) at horizons N and 2N through the
/// same prefix-sum dynamic programming as the exact [`word_sum`], run in
/// `f64`.
pub fn eval_mzv(w: &Word, n: Horizon, strict: bool) -> Result<NumericResult> {
    if !is_convergent_word(w, false) {
        return Err(Error::Divergent(format!(
            "{w} does not converge: the leading exponent must be at least 2"
        )));
    }
    let lo: f64 = word_sum(w, n, strict)?;
    let hi: f64 = word_sum(w, 2 * n, strict)?;
    Ok(NumericResult::from_two_horizons(lo, hi, 2 * n))
}

/// ζ_⧢ on a convergent {x, y} word, numerically defined through the exponent
/// word it binarises: eval_mzv(debinarize(w)).
pub fn eval_binary(w: &Word, n: Horizon) -> Result<NumericResult> {
    if w.alphabet() == Some(Alphabet::Nat) {
        return Err(Error::AlphabetMismatch(format!(
            "eval_binary expects an {{x,y}} word, got {w}"
        )));
    }
    if !is_convergent_word(w, false) {
        return Err(Error::Divergent(format!(
            "{w} does not converge: it must start with x and end with y"
        )));
    }
    eval_mzv(&debinarize(w)?, n, true)
}

/// Evaluates a ℚ-combination of zeta symbols: natural words stand for strict
/// stuffle MZVs, {x, y} words for shuffle MZVs (converted by debinarising).
/// Divergent words must have cancelled exactly in the combination already —
/// a surviving one is an error naming the word. With `n = None` every term
/// picks [`default_horizon`] for its depth; error estimates add up weighted
/// by |coefficient|, and the reported horizon is the largest one used.
pub fn eval_expr(comb: &LinComb<Word, Q>, n: Option<Horizon>) -> Result<NumericResult> {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut horizon = 0;
    for (w, c) in comb.iter() {
        let nat = match w.alphabet() {
            Some(Alphabet::Bin) => {
                if !is_convergent_word(w, false) {
                    return Err(Error::Divergent(format!(
                        "the divergent word {w} survives in the combination"
                    )));
                }
                debinarize(w)?
            }
            _ => w.clone(),
        };
        if !is_convergent_word(&nat, false) {
            return Err(Error::Divergent(format!(
                "the divergent word {nat} survives in the combination"
            )));
        }
        let term_n = n.unwrap_or_else(|| default_horizon(nat.depth()));
        let term = eval_mzv(&nat, term_n, true)?;
        let coeff = c.to_f64_approx();
        value += coeff * term.value;
        error += coeff.abs() * term.error_estimate;
        horizon = horizon.max(term.horizon);
    }
    Ok(NumericResult {
        value,
        error_estimate: error,
        horizon,
    })
}

/// The tree zeta value of a convergent forest by direct summation over all
/// vertex assignments at horizons N and 2N. Brute force — the independent
/// check for the reduction routes.
pub fn eval_tzv_direct(f: &Forest, n: Horizon) -> Result<NumericResult> {
    if !is_convergent_forest(f, false) {
        return Err(Error::Divergent(format!(
            "the forest {f} does not converge: every root must be decorated at least 2"
        )));
    }
    let lo: f64 = tzv_sum(f, n)?;
    let hi: f64 = tzv_sum(f, 2 * n)?;
    Ok(NumericResult::from_two_horizons(lo, hi, 2 * n))
}

/// Default horizon for the direct Mordell–Tornheim sum: the r-fold loop is
/// O(N^r), so the bound shrinks with the depth.
pub fn default_mt_horizon(r: usize) -> Horizon {
    if r <= 2 {
        2000
    } else {
        300
    }
}

fn mt_truncated(s: &[u64], s0: u64, n: Horizon) -> f64 {
    let r = s.len();
    // total exponent table up to the largest reachable argument r·n.
    let top = (r as u64) * n;
    let pow0: Vec<f64> = (0..=top).map(|v| f64::recip_pow(v.max(1), s0)).collect();
    let table = |si: u64| -> Vec<f64> { (0..=n).map(|v| f64::recip_pow(v.max(1), si)).collect() };
    match r {
        1 => {
            let p1 = table(s[0]);
            let mut acc = 0.0;
            for n1 in 1..=n {
                acc += p1[n1 as usize] * pow0[n1 as usize];
            }
            acc
        }
        2 => {
            let p1 = table(s[0]);
            let p2 = table(s[1]);
            let mut acc = 0.0;
            for n1 in 1..=n {
                for n2 in 1..=n {
                    acc += p1[n1 as usize] * p2[n2 as usize] * pow0[(n1 + n2) as usize];
                }
            }
            acc
        }
        3 => {
            let p1 = table(s[0]);
            let p2 = table(s[1]);
            let p3 = table(s[2]);
            let mut acc = 0.0;
            for n1 in 1..=n {
                for n2 in 1..=n {
                    let partial = p1[n1 as usize] * p2[n2 as usize];
                    let base = n1 + n2;
                    for n3 in 1..=n {
                        acc += partial * p3[n3 as usize] * pow0[(base + n3) as usize];
                    }
                }
            }
            acc
        }
        _ => unreachable!("guarded by eval_mt_direct"),
    }
}

/// MT(s₁,…,s_r | s₀) by the direct truncated r-fold sum (r ≤ 3) at horizons
/// N and 2N. The independent check for [`crate::cones::mt_reduce`].
pub fn eval_mt_direct(s: &[u64], s0: u64, n: Option<Horizon>) -> Result<NumericResult> {
    if s.is_empty() {
        return Err(Error::Parse("MT needs at least one exponent".into()));
    }
    if s.len() > 3 {
        return Err(Error::Unsupported(format!(
            "direct MT summation supports up to 3 exponents, got {}",
            s.len()
        )));
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    if let Some(k) = bradley_zhou_failure(&sorted, s0) {
        return Err(Error::Divergent(format!(
            "MT({:?} | {s0}) diverges: s0 plus the {k} smallest exponents is not larger than {k}",
            s
        )));
    }
    let n = n.unwrap_or_else(|| default_mt_horizon(s.len()));
    let lo = mt_truncated(s, s0, n);
    let hi = mt_truncated(s, s0, 2 * n);
    Ok(NumericResult::from_two_horizons(lo, hi, 2 * n))
}

/// Converts an exact rational to the nearest double for reporting.
pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::mt_reduce;

    fn w(parts: &[u64]) -> Word {
        Word::nat(parts).unwrap()
    }

    #[test]
    fn zeta_two_matches_pi_squared_over_six() {
        let r = eval_mzv(&w(&[2]), 100_000, true).unwrap();
        let target = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((r.value - target).abs() < 1e-4, "got {}", r.value);
        assert_eq!(r.horizon, 200_000);
        assert!(r.error_estimate > 0.0 && r.error_estimate < 1e-4);
    }

    #[test]
    fn euler_relation() {
        let lhs = eval_mzv(&w(&[2, 1]), 100_000, true).unwrap();
        let rhs = eval_mzv(&w(&[3]), 100_000, true).unwrap();
        assert!((lhs.value - rhs.value).abs() < 1e-4);
    }

    #[test]
    fn divergent_words_are_rejected() {
        assert!(matches!(
            eval_mzv(&w(&[1, 2]), 100, true),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            eval_binary(&Word::parse("yxy").unwrap(), 100),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn kontsevich_at_small_depth() {
        let xy = eval_binary(&Word::parse("xy").unwrap(), 50_000).unwrap();
        let z2 = eval_mzv(&w(&[2]), 50_000, true).unwrap();
        assert_eq!(xy, z2);
        let xyy = eval_binary(&Word::parse("xyy").unwrap(), 50_000).unwrap();
        let z21 = eval_mzv(&w(&[2, 1]), 50_000, true).unwrap();
        assert_eq!(xyy, z21);
    }

    #[test]
    fn expr_linearity_and_zero() {
        let expr = LinComb::term(w(&[2, 1, 1]), Q::from_integer(2.into()));
        let r = eval_expr(&expr, Some(10_000)).unwrap();
        let single = eval_mzv(&w(&[2, 1, 1]), 10_000, true).unwrap();
        assert!((r.value - 2.0 * single.value).abs() < 1e-12);
        let zero: LinComb<Word, Q> = LinComb::zero();
        let rz = eval_expr(&zero, None).unwrap();
        assert_eq!(rz.value, 0.0);
        assert_eq!(rz.error_estimate, 0.0);
    }

    #[test]
    fn expr_surviving_divergence_is_named() {
        let expr = LinComb::unit(w(&[1, 2]));
        match eval_expr(&expr, Some(100)) {
            Err(Error::Divergent(msg)) => assert!(msg.contains("[1,2]"), "message: {msg}"),
            other => panic!("expected a divergence error, got {other:?}"),
        }
    }

    #[test]
    fn default_horizons_by_depth() {
        assert_eq!(default_horizon(1), 100_000);
        assert_eq!(default_horizon(3), 100_000);
        assert_eq!(default_horizon(4), 20_000);
        assert_eq!(default_horizon(7), 20_000);
    }

    #[test]
    fn tzv_direct_basics() {
        let dot2 = eval_tzv_direct(&Forest::parse("2").unwrap(), 1000).unwrap();
        let z2 = eval_mzv(&w(&[2]), 1000, true).unwrap();
        assert_eq!(dot2, z2);
        let empty = eval_tzv_direct(&Forest::empty(), 10).unwrap();
        assert_eq!(empty.value, 1.0);
        assert!(matches!(
            eval_tzv_direct(&Forest::parse("1(2)").unwrap(), 10),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn mt_direct_basics() {
        // r = 1 collapses: MT(1 | 2) = ζ(3).
        let r = eval_mt_direct(&[1], 2, Some(2000)).unwrap();
        let z3 = eval_mzv(&w(&[3]), 2000, true).unwrap();
        assert!((r.value - z3.value).abs() < 1e-6);
        // MT(0,1 | 2) ≈ ζ(2,1); the double-sum tail decays like ln(N)/N, so
        // the default horizon is too small for a 2e-3 comparison.
        let r = eval_mt_direct(&[0, 1], 2, Some(8000)).unwrap();
        let z21 = eval_mzv(&w(&[2, 1]), 100_000, true).unwrap();
        assert!((r.value - z21.value).abs() < 2e-3, "gap {}", (r.value - z21.value).abs());
        // MT(1,1 | 2) against the exact reduction.
        let r = eval_mt_direct(&[1, 1], 2, None).unwrap();
        let reduced = mt_reduce(&[1, 1], 2).unwrap();
        let via_words = eval_expr(reduced.binary_words(), None).unwrap();
        assert!((r.value - via_words.value).abs() < 2e-3);
        // Errors.
        assert!(matches!(
            eval_mt_direct(&[0, 1], 1, None),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            eval_mt_direct(&[1, 1, 1, 1], 9, None),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn determinism() {
        let a = eval_mzv(&w(&[3, 1]), 12_345, true).unwrap();
        let b = eval_mzv(&w(&[3, 1]), 12_345, true).unwrap();
        assert_eq!(a, b);
        let c = eval_tzv_direct(&Forest::parse("2(1,1)").unwrap(), 60).unwrap();
        let d = eval_tzv_direct(&Forest::parse("2(1,1)").unwrap(), 60).unwrap();
        assert_eq!(c, d);
    }
}
