use crate::error::Result;
use crate::scalar::{Q, Scalar};
use std::collections::BTreeMap;
use std::fmt::Display;

/// Finite linear combination of basis elements with scalar coefficients.
///
/// Invariants: no stored coefficient is zero, and iteration follows the `Ord`
/// of the basis type, so equal combinations have identical representations
/// and identical printed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinComb<B: Ord, S = Q> {
    terms: BTreeMap<B, S>,
}

impl<B: Ord, S> Default for LinComb<B, S> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord, S: Scalar> LinComb<B, S> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element `b` with coefficient one.
    pub fn unit(b: B) -> Self {
        Self::term(b, S::one())
    }

    pub fn term(b: B, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &S)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn coeff(&self, b: &B) -> Option<&S> {
        self.terms.get(b)
    }

    /// Adds `c * b`, removing the entry if the total cancels to zero.
    pub fn add_term(&mut self, b: B, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let mut sum = o.get().clone();
                sum += c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_comb(&mut self, other: &Self)
    where
        B: Clone,
    {
        for (b, c) in other.iter() {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &S)
    where
        B: Clone,
    {
        if factor.is_zero() {
            return;
        }
        for (b, c) in other.iter() {
            self.add_term(b.clone(), c.clone() * factor.clone());
        }
    }

    pub fn scale(&self, factor: &S) -> Self
    where
        B: Clone,
    {
        let mut out = Self::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn negate(&self) -> Self
    where
        B: Clone,
    {
        self.scale(&-S::one())
    }

    /// Sum of all coefficients; the counting image of the combination.
    pub fn mass(&self) -> S {
        let mut m = S::zero();
        for (_, c) in self.iter() {
            m += c.clone();
        }
        m
    }

    pub fn map_basis<B2: Ord, F: Fn(&B) -> B2>(&self, f: F) -> LinComb<B2, S> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_term(f(b), c.clone());
        }
        out
    }

    pub fn try_map_basis<B2: Ord, F: Fn(&B) -> Result<B2>>(&self, f: F) -> Result<LinComb<B2, S>> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_term(f(b)?, c.clone());
        }
        Ok(out)
    }

    pub fn flat_map<B2: Ord + Clone, F: Fn(&B) -> LinComb<B2, S>>(&self, f: F) -> LinComb<B2, S> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b), c);
        }
        out
    }

    pub fn try_flat_map<B2: Ord + Clone, F: Fn(&B) -> Result<LinComb<B2, S>>>(
        &self,
        f: F,
    ) -> Result<LinComb<B2, S>> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b)?, c);
        }
        Ok(out)
    }

    pub fn from_terms<I: IntoIterator<Item = (B, S)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    /// Renders the combination with the canonical term order, e.g.
    /// `3 xxxy + 2 xxyx + xyxx` (separator " ") or `2 * zeta(2,1)`
    /// (separator " * "). Unit coefficients are omitted and negative
    /// coefficients join with " - ".
    pub fn format_with<F: Fn(&B) -> String>(&self, render: F, times: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (b, c)) in self.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            if mag.is_one() {
                out.push_str(&render(b));
            } else {
                out.push_str(&format!("{}{}{}", mag, times, render(b)));
            }
        }
        out
    }
}

/// Extends a product on basis elements bilinearly to combinations.
pub fn bilinear<B1, B2, B3, S, F>(
    a: &LinComb<B1, S>,
    b: &LinComb<B2, S>,
    mut product: F,
) -> Result<LinComb<B3, S>>
where
    B1: Ord,
    B2: Ord,
    B3: Ord + Clone,
    S: Scalar,
    F: FnMut(&B1, &B2) -> Result<LinComb<B3, S>>,
{
    let mut out = LinComb::zero();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_scaled(&product(x, y)?, &(cx.clone() * cy.clone()));
        }
    }
    Ok(out)
}

impl<B: Ord + Clone, S: Scalar> std::ops::Add for &LinComb<B, S> {
    type Output = LinComb<B, S>;
    fn add(self, rhs: Self) -> LinComb<B, S> {
        let mut out = self.clone();
        out.add_comb(rhs);
        out
    }
}

impl<B: Ord + Clone, S: Scalar> std::ops::Sub for &LinComb<B, S> {
    type Output = LinComb<B, S>;
    fn sub(self, rhs: Self) -> LinComb<B, S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-S::one());
        out
    }
}

impl<B: Ord + Display, S: Scalar> Display for LinComb<B, S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format_with(|b| b.to_string(), " "))
    }
}
