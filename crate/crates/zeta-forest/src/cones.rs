//! Decorated unimodular cones, the tree-like characterization, the maps
//! between forests and cones, and the reduction of conical and
//! Mordell–Tornheim zeta values to rational combinations of multiple zeta
//! values.
//!
//! A maximal cone is stored by its representing matrix A (row i holds the
//! coefficients of the linear form lᵢ) together with one decoration per row.
//! Tree-like cones are exactly the images of decorated forests under the path
//! matrix map [`phi`]; [`psi`] inverts it. Reduction of a conical zeta value
//! therefore goes cone → forest → words: route A flattens with the ϒ product
//! into stuffle-MZV symbols, route B branched-binarises and flattens at λ = 0
//! into {x, y} shuffle words. The two routes agree numerically but not
//! termwise (the zeta symbols satisfy relations).

use std::collections::HashMap;
use std::fmt::{self, Display};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forest::{
    b_plus, branched_binarize, flatten, is_convergent_forest, Forest, Tree,
};
use crate::lincomb::{bilinear, LinComb};
use crate::scalar::{parse_rational, Q};
use crate::upsilon::fl_yew;
use crate::word::{
    binarize, concat, debinarize, is_convergent_word, shuffle, Alphabet, Letter, Word,
};

/// A maximal decorated cone: a square integer matrix with independent rows
/// and one decoration ≥ 1 per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    a: Vec<Vec<i64>>,
    s: Vec<u64>,
}

impl Cone {
    pub fn new(a: Vec<Vec<i64>>, s: Vec<u64>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Parse("a cone needs at least one row".into()));
        }
        for row in &a {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "the representing matrix must be square, got a row of length {} in a {}-row matrix",
                    row.len(),
                    n
                )));
            }
        }
        if s.len() != n {
            return Err(Error::Parse(format!(
                "expected {} decorations for a {}-row matrix, got {}",
                n,
                n,
                s.len()
            )));
        }
        if let Some(bad) = s.iter().position(|&d| d == 0) {
            return Err(Error::Parse(format!(
                "decorations must be at least 1, got 0 at position {bad}"
            )));
        }
        Ok(Cone { a, s })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn decorations(&self) -> &[u64] {
        &self.s
    }

    /// All entries in {0, 1} — the class the tree-like theory speaks about.
    pub fn is_unimodular(&self) -> bool {
        self.a
            .iter()
            .all(|row| row.iter().all(|&e| e == 0 || e == 1))
    }

    /// The rows span the whole space, i.e. the cone is maximal. Tree-like
    /// cones are automatically maximal (path matrices are triangular under a
    /// topological vertex order), so this is informational for them.
    pub fn is_maximal(&self) -> bool {
        rows_independent(&self.a)
    }

    /// Reads `{"A": [[…]], "s": […]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("cone JSON: {e}")))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("cone JSON must be an object".into()))?;
        let a_val = obj
            .get("A")
            .ok_or_else(|| Error::Parse("cone JSON misses the \"A\" matrix".into()))?;
        let s_val = obj
            .get("s")
            .ok_or_else(|| Error::Parse("cone JSON misses the \"s\" decorations".into()))?;
        let mut a = Vec::new();
        for row in a_val
            .as_array()
            .ok_or_else(|| Error::Parse("\"A\" must be an array of rows".into()))?
        {
            let mut out_row = Vec::new();
            for e in row
                .as_array()
                .ok_or_else(|| Error::Parse("every row of \"A\" must be an array".into()))?
            {
                out_row.push(
                    e.as_i64()
                        .ok_or_else(|| Error::Parse(format!("matrix entry {e} is not an integer")))?,
                );
            }
            a.push(out_row);
        }
        let mut s = Vec::new();
        for e in s_val
            .as_array()
            .ok_or_else(|| Error::Parse("\"s\" must be an array of integers".into()))?
        {
            s.push(
                e.as_u64()
                    .ok_or_else(|| Error::Parse(format!("decoration {e} is not a nonnegative integer")))?,
            );
        }
        Self::new(a, s)
    }

    pub fn to_json_value(&self) -> Value {
        json!({ "A": self.a, "s": self.s })
    }
}

/// Exact rank check by Gaussian elimination over ℚ.
fn rows_independent(a: &[Vec<i64>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .map(|row| row.iter().map(|&e| Q::from_integer(e.into())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in rank + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / lead.clone();
            for c in col..n {
                let delta = factor.clone() * m[rank][c].clone();
                m[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank == n
}

/// The relation i ⪯ j iff lᵢ − lⱼ ≥ 0 componentwise, as a full boolean
/// matrix. Reflexivity and transitivity are automatic; antisymmetry fails
/// exactly on duplicate rows, which is reported as [`Error::NotAPoset`].
pub fn poset_of_cone(c: &Cone) -> Result<Vec<Vec<bool>>> {
    let rel = raw_relation(c);
    let n = c.dim();
    for i in 0..n {
        for j in i + 1..n {
            if rel[i][j] && rel[j][i] {
                return Err(Error::NotAPoset(format!(
                    "rows {} and {} coincide, so antisymmetry fails",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(rel)
}

fn raw_relation(c: &Cone) -> Vec<Vec<bool>> {
    let n = c.dim();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = (0..n).all(|k| c.a[i][k] >= c.a[j][k]);
        }
    }
    rel
}

/// True iff every nonzero entry a_ij certifies the relation i ⪯ j.
pub fn is_poset_compatible(c: &Cone) -> bool {
    let rel = raw_relation(c);
    let n = c.dim();
    (0..n).all(|i| (0..n).all(|j| c.a[i][j] == 0 || rel[i][j]))
}

/// The incidence matrix of the Hasse diagram of ⪯: b_ij = 1 iff j covers i.
pub fn second_representing_matrix(c: &Cone) -> Result<Vec<Vec<u8>>> {
    let rel = poset_of_cone(c)?;
    let n = c.dim();
    let mut b = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !rel[i][j] {
                continue;
            }
            let direct = (0..n).all(|k| k == i || k == j || !(rel[i][k] && rel[k][j]));
            if direct {
                b[i][j] = 1;
            }
        }
    }
    Ok(b)
}

/// A unimodular cone is tree-like iff it is poset compatible and no column of
/// the Hasse incidence matrix holds two entries (no vertex has two parents).
/// Non-unimodular input is outside the theory and rejected.
pub fn is_tree_like(c: &Cone) -> Result<bool> {
    if !c.is_unimodular() {
        return Err(Error::Unsupported(
            "tree-likeness is only decided for unimodular matrices (entries 0 or 1)".into(),
        ));
    }
    let b = second_representing_matrix(c)?;
    let n = c.dim();
    let single_parents = (0..n).all(|j| (0..n).filter(|&i| b[i][j] == 1).count() <= 1);
    Ok(is_poset_compatible(c) && single_parents)
}

/// The decorated forest whose vertex order is ⪯ and whose vertex for row i
/// carries decoration sᵢ. Fails with [`Error::NotTreeLike`] unless
/// [`is_tree_like`] holds. The output is in canonical form; row labels are
/// forgotten.
pub fn psi(c: &Cone) -> Result<Forest> {
    if !is_tree_like(c)? {
        return Err(Error::NotTreeLike(
            "the cone is not tree-like: its Hasse diagram is not a forest compatible with the matrix"
                .into(),
        ));
    }
    let b = second_representing_matrix(c)?;
    let n = c.dim();
    let mut children = vec![Vec::new(); n];
    let mut has_parent = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            if b[i][j] == 1 {
                children[i].push(j);
                has_parent[j] = true;
            }
        }
    }
    fn build(i: usize, children: &[Vec<usize>], s: &[u64]) -> Result<Tree> {
        let subtrees = children[i]
            .iter()
            .map(|&j| build(j, children, s))
            .collect::<Result<Vec<_>>>()?;
        b_plus(Letter::Nat(s[i]), Forest::from_trees(subtrees)?)
    }
    let roots = (0..n)
        .filter(|&j| !has_parent[j])
        .map(|i| build(i, &children, &c.s))
        .collect::<Result<Vec<_>>>()?;
    Forest::from_trees(roots)
}

/// The path matrix of a forest: with vertices numbered in pre-order,
/// a_ij = 1 iff vertex j lies in the subtree of vertex i. Together with the
/// copied decorations this is a tree-like cone, and [`psi`] ∘ [`phi`] is the
/// identity on canonical forests.
pub fn phi(f: &Forest) -> Result<Cone> {
    if f.alphabet() == Some(Alphabet::Bin) {
        return Err(Error::AlphabetMismatch(format!(
            "cones carry natural decorations, got the {{x,y}}-forest {f}"
        )));
    }
    if f.is_empty() {
        return Err(Error::Parse(
            "the empty forest has no representing matrix (a cone needs at least one row)".into(),
        ));
    }
    fn walk(t: &Tree, decs: &mut Vec<u64>, spans: &mut Vec<(usize, usize)>) {
        let idx = decs.len();
        match t.decoration() {
            Letter::Nat(d) => decs.push(d),
            Letter::Bin(_) => unreachable!("alphabet checked above"),
        }
        spans.push((idx, idx));
        for child in t.children().trees() {
            walk(child, decs, spans);
        }
        spans[idx] = (idx, decs.len());
    }
    let mut decs = Vec::new();
    let mut spans = Vec::new();
    for t in f.trees() {
        walk(t, &mut decs, &mut spans);
    }
    let n = decs.len();
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i64::from(spans[i].0 <= j && j < spans[i].1))
                .collect()
        })
        .collect();
    Cone::new(a, decs)
}

/// A finite ℚ-combination of convergent stuffle-MZV symbols ζ_⋆(s₁,…,s_k).
#[derive(Debug, Clone, PartialEq)]
pub struct MzvExpr(LinComb<Word, Q>);

impl MzvExpr {
    /// Validates that every basis word is a convergent word over ℕ*.
    pub fn new(comb: LinComb<Word, Q>) -> Result<Self> {
        for (w, _) in comb.iter() {
            if w.alphabet() == Some(Alphabet::Bin) {
                return Err(Error::AlphabetMismatch(format!(
                    "zeta symbols take natural exponents, got the {{x,y}}-word {w}"
                )));
            }
            if !is_convergent_word(w, false) {
                return Err(Error::Divergent(format!(
                    "zeta({}) diverges: the leading exponent must be at least 2",
                    zeta_args(w)
                )));
            }
        }
        Ok(MzvExpr(comb))
    }

    pub fn comb(&self) -> &LinComb<Word, Q> {
        &self.0
    }

    pub fn into_comb(self) -> LinComb<Word, Q> {
        self.0
    }

    /// `[{"coeff": "p/q", "zeta": [s₁,…,s_k]}, …]` in canonical term order.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(w, c)| {
                    json!({
                        "coeff": c.to_string(),
                        "zeta": w.letters().iter().map(|l| l.weight()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("a zeta expression is a JSON array of terms".into()))?;
        let mut comb = LinComb::zero();
        for term in arr {
            let obj = term
                .as_object()
                .ok_or_else(|| Error::Parse("every term must be an object".into()))?;
            let coeff_val = obj
                .get("coeff")
                .ok_or_else(|| Error::Parse("term misses \"coeff\"".into()))?;
            let coeff = match coeff_val {
                Value::String(t) => parse_rational(t)?,
                Value::Number(n) => {
                    let i = n.as_i64().ok_or_else(|| {
                        Error::Parse(format!("coefficient {n} is not an integer or \"p/q\" string"))
                    })?;
                    Q::from_integer(i.into())
                }
                other => {
                    return Err(Error::Parse(format!(
                        "coefficient {other} is not an integer or \"p/q\" string"
                    )))
                }
            };
            let exponents = obj
                .get("zeta")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term misses the \"zeta\" exponent array".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .ok_or_else(|| Error::Parse(format!("exponent {e} is not a positive integer")))
                })
                .collect::<Result<Vec<_>>>()?;
            comb.add_term(Word::nat(&exponents)?, coeff);
        }
        Self::new(comb)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("zeta expression JSON: {e}")))?;
        Self::from_json_value(&v)
    }
}

fn zeta_args(w: &Word) -> String {
    w.letters()
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl Display for MzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.0
                .format_with(|w| format!("zeta({})", zeta_args(w)), " * ")
        )
    }
}

fn convergent_forest_of(c: &Cone) -> Result<Forest> {
    let f = psi(c)?;
    if !is_convergent_forest(&f, false) {
        return Err(Error::Divergent(format!(
            "the forest {f} of the cone has a root decorated 1, so the conical zeta value diverges"
        )));
    }
    Ok(f)
}

/// Route A: reduce the conical zeta value of a tree-like cone to stuffle-MZV
/// symbols through ζ_⋆ ∘ fl_ϒ ∘ ψ. Integer coefficients, weight conserved.
pub fn czv_reduce(c: &Cone) -> Result<MzvExpr> {
    let f = convergent_forest_of(c)?;
    MzvExpr::new(fl_yew::<Q>(&f)?)
}

/// Route B: the same conical zeta value as a combination of convergent
/// {x, y} shuffle words, through fl₀ of the branched binarisation of ψ.
/// Debinarising the words block by block recovers route A exactly.
pub fn czv_reduce_shuffle_words(c: &Cone) -> Result<LinComb<Word, Q>> {
    let f = convergent_forest_of(c)?;
    let bin = branched_binarize(&f)?;
    flatten::<Q>(&bin, &Q::zero())
}

/// The outcome of reducing MT(s₁,…,s_r | s₀): the sorted exponents, the
/// sorting permutation, and the reduction as a combination of convergent
/// {x, y} shuffle words (one per term of the iterated decomposition).
#[derive(Debug, Clone, PartialEq)]
pub struct MtReduction {
    sorted: Vec<u64>,
    s0: u64,
    permutation: Vec<usize>,
    words: LinComb<Word, Q>,
}

impl MtReduction {
    /// Ascending exponents; `sorted[k] = s[permutation[k]]`.
    pub fn sorted_exponents(&self) -> &[u64] {
        &self.sorted
    }

    pub fn s0(&self) -> u64 {
        self.s0
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn binary_words(&self) -> &LinComb<Word, Q> {
        &self.words
    }

    /// The same value in the ζ_⋆ basis, debinarising every word.
    pub fn zeta_expr(&self) -> Result<MzvExpr> {
        MzvExpr::new(self.words.try_map_basis(debinarize)?)
    }

    pub fn to_json_value(&self) -> Result<Value> {
        Ok(json!({
            "sorted": self.sorted,
            "s0": self.s0,
            "permutation": self.permutation,
            "words": Value::Array(
                self.words
                    .iter()
                    .map(|(w, c)| json!({ "coeff": c.to_string(), "basis": w.to_string() }))
                    .collect(),
            ),
            "zeta": self.zeta_expr()?.to_json_value(),
        }))
    }
}

/// The Bradley–Zhou convergence criterion on ascending exponents:
/// s₀ + s₁ + … + s_k > k for every k in [1, r]. Returns the first failing k.
pub(crate) fn bradley_zhou_failure(sorted: &[u64], s0: u64) -> Option<usize> {
    let mut partial = s0;
    for (k, &sk) in sorted.iter().enumerate() {
        partial += sk;
        if partial <= (k + 1) as u64 {
            return Some(k + 1);
        }
    }
    None
}

/// x^{s−1}y for s ≥ 1.
fn binary_letterword(s: u64) -> Result<Word> {
    binarize(&Word::nat(&[s])?)
}

fn mt_words(
    sorted: &[u64],
    s0: u64,
    memo: &mut HashMap<(Vec<u64>, u64), LinComb<Word, Q>>,
) -> Result<LinComb<Word, Q>> {
    let key = (sorted.to_vec(), s0);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let r = sorted.len();
    let out = if r == 1 {
        // One variable: the sum collapses to a single zeta of the total.
        LinComb::unit(binary_letterword(sorted[0] + s0)?)
    } else if sorted[0] == 0 {
        // One exponent cancelled: shuffle the remaining binary blocks and
        // prefix the block of s₀.
        debug_assert!(sorted[1] > 0, "two zero exponents are rejected upfront");
        let mut acc = LinComb::unit(Word::empty());
        for &si in &sorted[1..] {
            let block = LinComb::unit(binary_letterword(si)?);
            acc = bilinear(&acc, &block, |u, v| shuffle(u, v))?;
        }
        let head = binary_letterword(s0)?;
        acc.try_map_basis(|w| concat(&head, w))?
    } else {
        // All exponents positive: decrement each in turn against s₀ + 1.
        let mut acc = LinComb::zero();
        for i in 0..r {
            let mut next = sorted.to_vec();
            next[i] -= 1;
            next.sort_unstable();
            acc.add_comb(&mt_words(&next, s0 + 1, memo)?);
        }
        acc
    };
    memo.insert(key, out.clone());
    Ok(out)
}

/// Reduces the Mordell–Tornheim value MT(s₁,…,s_r | s₀) = Σ_{n₁,…,n_r ≥ 1}
/// (Π nᵢ^{−sᵢ})·(n₁+…+n_r)^{−s₀} to shuffle words. Arguments are sorted
/// internally (MT is symmetric); divergent parameters are rejected by the
/// Bradley–Zhou criterion, and more than one zero exponent is outside the
/// one-cancellation reduction and reported as unsupported.
pub fn mt_reduce(s: &[u64], s0: u64) -> Result<MtReduction> {
    if s.is_empty() {
        return Err(Error::Parse("MT needs at least one exponent".into()));
    }
    let mut permutation: Vec<usize> = (0..s.len()).collect();
    permutation.sort_by_key(|&i| s[i]);
    let sorted: Vec<u64> = permutation.iter().map(|&i| s[i]).collect();
    if let Some(k) = bradley_zhou_failure(&sorted, s0) {
        return Err(Error::Divergent(format!(
            "MT({:?} | {s0}) diverges: s0 plus the {k} smallest exponents is not larger than {k}",
            s
        )));
    }
    if sorted.len() >= 2 && sorted[1] == 0 {
        return Err(Error::Unsupported(
            "more than one zero exponent: the one-cancellation reduction does not apply".into(),
        ));
    }
    let mut memo = HashMap::new();
    let words = mt_words(&sorted, s0, &mut memo)?;
    debug_assert!(words
        .iter()
        .all(|(w, _)| is_convergent_word(w, false)));
    Ok(MtReduction {
        sorted,
        s0,
        permutation,
        words,
    })
}
