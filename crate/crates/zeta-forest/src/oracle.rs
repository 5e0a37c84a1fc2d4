//! Exhaustive cross-checks behind the `oracle` subcommands.
//!
//! Each check enumerates a finite family in increasing size, computes the same
//! quantity along two independent routes, and stops at the first mismatch, so
//! a reported counterexample is minimal for the enumeration order.

use crate::cones::{phi, psi};
use crate::enumerate::{forests_of_size, forests_of_weight, nat_words_up_to_length};
use crate::forest::{
    branched_binarize, branched_debinarize, flatten, forest_shuffle, Forest, Tree,
};
use crate::lincomb::bilinear;
use crate::scalar::Q;
use crate::upsilon::{yew_via_definition, Upsilon};
use crate::word::{binarize, debinarize, lambda_shuffle, Letter};
use num_bigint::BigInt;
use num_traits::One;

/// Decoration bound shared by every oracle enumeration.
const MAX_DEC: u64 = 3;

/// A failed cross-check: the smallest case found and what differed on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub check: &'static str,
    pub case: String,
    pub detail: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} mismatch on {}: {}",
            self.check, self.case, self.detail
        )
    }
}

/// Ok carries the number of cases checked.
pub type OracleOutcome = std::result::Result<usize, Mismatch>;

fn max_decoration(t: &Tree) -> u64 {
    let own = match t.decoration() {
        Letter::Nat(n) => n,
        Letter::Bin(_) => 0,
    };
    t.children()
        .trees()
        .iter()
        .map(max_decoration)
        .fold(own, u64::max)
}

fn small_forests_by_size(max_size: usize) -> Vec<Vec<Forest>> {
    (0..=max_size)
        .map(|s| forests_of_size(s, MAX_DEC))
        .collect()
}

/// fl is a morphism of products: `fl(F shuffle_lambda G) = fl(F) shuffle_lambda fl(G)`
/// for every lambda in {-1, 0, 1, 2} and every pair of forests with
/// `size(F) + size(G) <= max_size` and decorations at most 3.
pub fn check_flattening(max_size: usize) -> OracleOutcome {
    let lambdas: Vec<Q> = [-1i64, 0, 1, 2]
        .iter()
        .map(|&l| Q::from(BigInt::from(l)))
        .collect();
    let by_size = small_forests_by_size(max_size);
    let mut checked = 0usize;
    for total in 0..=max_size {
        for left in 0..=total {
            for f in &by_size[left] {
                for g in &by_size[total - left] {
                    for lambda in &lambdas {
                        let product = forest_shuffle(f, g, lambda)
                            .and_then(|comb| comb.try_flat_map(|forest| flatten(forest, lambda)));
                        let factored = flatten(f, lambda).and_then(|a| {
                            let b = flatten(g, lambda)?;
                            bilinear(&a, &b, |u, v| lambda_shuffle(u, v, lambda))
                        });
                        let case = format!("lambda = {lambda}, F = {f}, G = {g}");
                        match (product, factored) {
                            (Ok(p), Ok(q)) if p == q => checked += 1,
                            (Ok(p), Ok(q)) => {
                                return Err(Mismatch {
                                    check: "flattening",
                                    case,
                                    detail: format!(
                                        "fl(F shuffle G) = {} but fl(F) shuffle fl(G) = {}",
                                        p.format_with(|w| w.to_string(), " "),
                                        q.format_with(|w| w.to_string(), " "),
                                    ),
                                })
                            }
                            (p, q) => {
                                return Err(Mismatch {
                                    check: "flattening",
                                    case,
                                    detail: format!("unexpected error: {p:?} vs {q:?}"),
                                })
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// The recursive product agrees with its definition through branched
/// binarisation: `yew(F, G) = debinarize(binarize(F) shuffle_0 binarize(G))`
/// for every pair with `weight(F) + weight(G) <= max_norm`, decorations <= 3.
pub fn check_yew(max_norm: u64) -> OracleOutcome {
    let by_weight: Vec<Vec<Forest>> = (0..=max_norm)
        .map(|w| {
            forests_of_weight(w)
                .into_iter()
                .filter(|f| f.trees().iter().map(max_decoration).max().unwrap_or(0) <= MAX_DEC)
                .collect()
        })
        .collect();
    let mut upsilon: Upsilon = Upsilon::new();
    let mut checked = 0usize;
    for total in 0..=max_norm {
        for left in 0..=total {
            for f in &by_weight[left as usize] {
                for g in &by_weight[(total - left) as usize] {
                    let case = format!("F = {f}, G = {g}");
                    let fast = upsilon.yew(f, g);
                    let slow = yew_via_definition(f, g);
                    match (fast, slow) {
                        (Ok(a), Ok(b)) if a == b => checked += 1,
                        (Ok(a), Ok(b)) => {
                            return Err(Mismatch {
                                check: "yew",
                                case,
                                detail: format!(
                                    "recursion gives {} but the definition gives {}",
                                    a.format_with(|t| t.to_string(), " "),
                                    b.format_with(|t| t.to_string(), " "),
                                ),
                            })
                        }
                        (a, b) => {
                            return Err(Mismatch {
                                check: "yew",
                                case,
                                detail: format!("unexpected error: {a:?} vs {b:?}"),
                            })
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

fn roundtrip_case<T: PartialEq + std::fmt::Debug>(
    check: &'static str,
    case: String,
    through: &str,
    got: T,
    expected: &T,
    checked: &mut usize,
) -> Result<(), Mismatch> {
    if &got == expected {
        *checked += 1;
        Ok(())
    } else {
        Err(Mismatch {
            check,
            case,
            detail: format!("{through} returned {got:?}, expected {expected:?}"),
        })
    }
}

/// Round trips: word and branched binarisation followed by the matching
/// debinarisation, display followed by parse, and the cone maps `psi . phi`.
pub fn check_roundtrip(max_size: usize) -> OracleOutcome {
    let mut checked = 0usize;
    for w in nat_words_up_to_length(max_size, MAX_DEC) {
        let back = binarize(&w).and_then(|b| debinarize(&b));
        roundtrip_case(
            "roundtrip",
            format!("word {w}"),
            "debinarize . binarize",
            back,
            &Ok(w),
            &mut checked,
        )?;
    }
    for size in 0..=max_size {
        for f in forests_of_size(size, MAX_DEC) {
            let back = branched_binarize(&f).and_then(|b| branched_debinarize(&b));
            roundtrip_case(
                "roundtrip",
                format!("forest {f}"),
                "branched_debinarize . branched_binarize",
                back,
                &Ok(f.clone()),
                &mut checked,
            )?;
            let reparsed = f.to_string().parse::<Forest>();
            roundtrip_case(
                "roundtrip",
                format!("forest {f}"),
                "parse . display",
                reparsed,
                &Ok(f.clone()),
                &mut checked,
            )?;
            if !f.is_empty() {
                let reconstructed = phi(&f).and_then(|cone| psi(&cone));
                roundtrip_case(
                    "roundtrip",
                    format!("forest {f}"),
                    "psi . phi",
                    reconstructed,
                    &Ok(f.clone()),
                    &mut checked,
                )?;
            }
        }
    }
    Ok(checked)
}

/// Finite-horizon factorisation: `forest_sum` respects the lambda = 1 forest
/// product under strict summation, on pairs up to `max_size` total vertices.
pub fn check_sums(max_size: usize, horizon: u64) -> OracleOutcome {
    use crate::sums::forest_sum;
    let by_size = small_forests_by_size(max_size);
    let one = Q::one();
    let mut checked = 0usize;
    for total in 0..=max_size {
        for left in 0..=total {
            for f in &by_size[left] {
                for g in &by_size[total - left] {
                    let case = format!("F = {f}, G = {g}, N = {horizon}");
                    let outcome = (|| -> crate::error::Result<(Q, Q)> {
                        let direct = forest_sum::<Q>(f, horizon, true)?
                            * forest_sum::<Q>(g, horizon, true)?;
                        let mut through_product = Q::from(BigInt::from(0));
                        for (forest, coeff) in forest_shuffle(f, g, &one)?.iter() {
                            through_product +=
                                coeff.clone() * forest_sum::<Q>(forest, horizon, true)?;
                        }
                        Ok((direct, through_product))
                    })();
                    match outcome {
                        Ok((a, b)) if a == b => checked += 1,
                        Ok((a, b)) => {
                            return Err(Mismatch {
                                check: "sums",
                                case,
                                detail: format!("product of sums {a} vs sum over product {b}"),
                            })
                        }
                        Err(e) => {
                            return Err(Mismatch {
                                check: "sums",
                                case,
                                detail: format!("unexpected error: {e}"),
                            })
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattening_suite_passes_on_small_sizes() {
        // Sizes 0..=2 with three decorations: 1, 3, and 15 forests, so
        // 1 + 2*3 + 2*15 + 9 = 46 pairs, each under four lambdas.
        assert_eq!(check_flattening(2), Ok(46 * 4));
    }

    #[test]
    fn yew_suite_passes_on_small_norms() {
        let checked = check_yew(4).expect("no mismatch");
        assert!(checked > 0);
    }

    #[test]
    fn roundtrip_suite_passes_on_small_sizes() {
        let checked = check_roundtrip(3).expect("no mismatch");
        assert!(checked > 0);
    }

    #[test]
    fn sums_suite_passes_on_small_sizes() {
        let checked = check_sums(2, 6).expect("no mismatch");
        assert_eq!(checked, 46);
    }
}
