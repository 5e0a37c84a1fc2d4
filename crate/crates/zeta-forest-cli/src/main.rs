//! Command line surface for the `zeta-forest` library.
//!
//! One subcommand per library operation; `--json` switches every command to a
//! single-line JSON rendering of the same data. Output is byte-deterministic
//! for fixed inputs and flags.
//!
//! Exit codes:
//!   0  success
//!   2  parse or usage error (bad word/forest grammar, malformed JSON, flags)
//!   3  domain error (divergence, alphabet mismatch, non-tree-like cone, ...)
//!   4  oracle mismatch (an exhaustive self-check found a counterexample)

use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zeta_forest::forest::forest_text_sugared;
use zeta_forest::{
    binarize, branched_binarize, check_flattening, check_roundtrip, check_yew, czv_reduce,
    czv_reduce_shuffle_words, debinarize, default_horizon, eval_binary, eval_expr, eval_mt_direct,
    eval_mzv, eval_tzv_direct, flatten, forest_shuffle, is_poset_compatible, is_tree_like,
    lambda_shuffle, mt_reduce, parse_rational, psi, shuffle, Alphabet, Cone, Error, Forest,
    Horizon, LinComb, Mismatch, MzvExpr, Q, Word,
};

/// Exact combinatorics of words, rooted forests and lattice cones underlying
/// multiple zeta values, with a floating-point evaluator.
#[derive(Parser)]
#[command(name = "zeta-forest", version, max_term_width = 100)]
struct Cli {
    /// Print results as single-line JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shuffle product of two words over the same alphabet.
    ///
    /// Natural words are written "[2,1]" ("[]" is empty), binary words "xxy".
    Shuffle { u: String, v: String },

    /// Lambda-shuffle of two natural words; the default lambda = 1 is the
    /// stuffle (quasi-shuffle) product.
    Stuffle {
        u: String,
        v: String,
        /// Sticking parameter, a rational like "1", "-1" or "3/7".
        #[arg(long, default_value = "1")]
        lambda: String,
    },

    /// Lambda-shuffle of two decorated forests; the default lambda = 0 is the
    /// plain forest shuffle, lambda = 1 the forest stuffle.
    ///
    /// Forests are written like "2(1,1)", "3 2(1)", "ladder(2,1,1)"; "()" is
    /// the empty forest.
    ForestShuffle {
        f: String,
        g: String,
        /// Sticking parameter, a rational like "1", "-1" or "3/7".
        #[arg(long, default_value = "0")]
        lambda: String,
    },

    /// Flatten a forest to a linear combination of words.
    Flatten {
        f: String,
        /// Sticking parameter of the flattening, e.g. "0", "1", "-1".
        #[arg(long)]
        lambda: String,
    },

    /// Binarise a natural word (s -> x^(s-1) y blocks) or a natural forest
    /// (branched binarisation) into the {x,y} alphabet.
    Binarize {
        #[command(subcommand)]
        target: BinarizeTarget,
    },

    /// Upsilon product of two natural forests: a combination of forests of
    /// ladder trees.
    Yew { f: String, g: String },

    /// Upsilon flattening of a natural forest: the word combination obtained
    /// by folding the upsilon product over the tree structure.
    FlYew { f: String },

    /// Operations on lattice cones given as JSON files {"A": [[...]], "s": [...]}.
    Cone {
        #[command(subcommand)]
        op: ConeOp,
    },

    /// Mordell-Tornheim reductions.
    Mt {
        #[command(subcommand)]
        op: MtOp,
    },

    /// Numeric evaluation with two-horizon error estimates.
    ///
    /// The horizon is taken from --N, else from the ZETA_FOREST_N environment
    /// variable, else from a per-object default.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },

    /// Exhaustive self-check oracles over all small instances; exits with
    /// code 4 and prints the smallest counterexample on the first mismatch.
    Oracle {
        #[command(subcommand)]
        which: OracleKind,
    },
}

#[derive(Subcommand)]
enum BinarizeTarget {
    /// Binarise a natural word, e.g. "[2,1]" -> "xyy".
    Word { w: String },
    /// Branched-binarise a natural forest, e.g. "2(1,1)" -> "x(y(y,y))".
    Forest { f: String },
}

#[derive(Subcommand)]
enum ConeOp {
    /// Report dimension, poset compatibility, tree-likeness, unimodularity,
    /// maximality and (if tree-like) the forest of the cone. Exits 3 unless
    /// the cone is tree-like with a convergent forest, i.e. reducible.
    Check { file: PathBuf },
    /// Reduce the conical zeta value of a tree-like cone.
    Reduce {
        file: PathBuf,
        /// Route a: stuffle-MZV symbols via the upsilon flattening of the
        /// forest of the cone. Route b: convergent {x,y} shuffle words via
        /// the branched binarisation; debinarising recovers route a.
        #[arg(long, value_enum, default_value_t = Route::A)]
        route: Route,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Route {
    A,
    B,
}

#[derive(Subcommand)]
enum MtOp {
    /// Reduce MT(s1,...,sr | s0), written "s1,...,sr|s0", to stuffle-MZV
    /// symbols.
    Reduce { spec: String },
}

#[derive(Subcommand)]
enum EvalTarget {
    /// A single zeta value: natural words sum strictly-nested series, binary
    /// words are debinarised first (Kontsevich's correspondence).
    Mzv {
        w: String,
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// A zeta expression from a JSON file [{"coeff": "p/q", "zeta": [s1,...]}, ...];
    /// divergent symbols must cancel exactly before evaluation.
    Expr {
        file: PathBuf,
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// The tree zeta value of a convergent natural forest by direct nested
    /// summation (default N = 50).
    Tzv {
        f: String,
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// MT(s1,...,sr | s0), written "s1,...,sr|s0", by direct summation.
    Mt {
        spec: String,
        #[arg(long = "N")]
        n: Option<u64>,
    },
}

#[derive(Subcommand)]
enum OracleKind {
    /// fl_lambda(F sh_lambda G) = fl_lambda(F) sh_lambda fl_lambda(G) for all
    /// forest pairs up to the given total size, at lambda in {-1, 0, 1, 2}.
    Flattening {
        /// Bound on |F| + |G|.
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// The recursive upsilon product against its defining formula for all
    /// forest pairs up to the given total weight.
    Yew {
        /// Bound on the total weight of the pair.
        #[arg(long, default_value_t = 6)]
        max_size: usize,
    },
    /// Round trips: debinarise(binarise(w)) = w, branched variants, and
    /// display/parse on all words and forests up to the given size.
    Roundtrip {
        /// Bound on word length and forest size.
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

enum Failure {
    /// Library error; exit 2 when it is a parse error, 3 otherwise.
    Lib(Error),
    /// Bad invocation outside the library: unreadable file, bad env var.
    Usage(String),
    /// An oracle found a counterexample; exit 4.
    Oracle(Mismatch),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit(if e.is_parse() { 2 } else { 3 });
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            exit(2);
        }
        Err(Failure::Oracle(m)) => {
            eprintln!("error: {m}");
            exit(4);
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Shuffle { u, v } => {
            let comb = shuffle::<Q>(&Word::parse(u)?, &Word::parse(v)?)?;
            emit_word_comb(cli.json, &comb);
        }
        Command::Stuffle { u, v, lambda } => {
            let comb = lambda_shuffle(&Word::parse(u)?, &Word::parse(v)?, &parse_rational(lambda)?)?;
            emit_word_comb(cli.json, &comb);
        }
        Command::ForestShuffle { f, g, lambda } => {
            let comb = forest_shuffle(
                &Forest::parse(f)?,
                &Forest::parse(g)?,
                &parse_rational(lambda)?,
            )?;
            emit_forest_comb(cli.json, &comb);
        }
        Command::Flatten { f, lambda } => {
            let comb = flatten(&Forest::parse(f)?, &parse_rational(lambda)?)?;
            emit_word_comb(cli.json, &comb);
        }
        Command::Binarize { target } => match target {
            BinarizeTarget::Word { w } => {
                let bin = binarize(&Word::parse(w)?)?;
                if cli.json {
                    println!("{}", json!({ "word": bin.to_string() }));
                } else {
                    println!("{bin}");
                }
            }
            BinarizeTarget::Forest { f } => {
                let bin = branched_binarize(&Forest::parse(f)?)?;
                if cli.json {
                    println!("{}", json!({ "forest": bin.to_string() }));
                } else {
                    println!("{bin}");
                }
            }
        },
        Command::Yew { f, g } => {
            let comb = zeta_forest::yew::<Q>(&Forest::parse(f)?, &Forest::parse(g)?)?;
            emit_forest_comb(cli.json, &comb);
        }
        Command::FlYew { f } => {
            let comb = zeta_forest::fl_yew::<Q>(&Forest::parse(f)?)?;
            emit_word_comb(cli.json, &comb);
        }
        Command::Cone { op } => match op {
            ConeOp::Check { file } => cone_check(cli.json, file)?,
            ConeOp::Reduce { file, route } => {
                let cone = Cone::from_json(&read_file(file)?)?;
                match route {
                    Route::A => {
                        let expr = czv_reduce(&cone)?;
                        if cli.json {
                            println!("{}", expr.to_json_value());
                        } else {
                            println!("{expr}");
                        }
                    }
                    Route::B => {
                        let words = czv_reduce_shuffle_words(&cone)?;
                        emit_word_comb(cli.json, &words);
                    }
                }
            }
        },
        Command::Mt { op } => match op {
            MtOp::Reduce { spec } => {
                let (s, s0) = parse_mt_spec(spec)?;
                let reduction = mt_reduce(&s, s0)?;
                if cli.json {
                    println!("{}", reduction.to_json_value()?);
                } else {
                    println!("{}", reduction.zeta_expr()?);
                }
            }
        },
        Command::Eval { target } => {
            let result = match target {
                EvalTarget::Mzv { w, n } => {
                    let w = Word::parse(w)?;
                    match w.alphabet() {
                        Some(Alphabet::Bin) => {
                            let depth = debinarize(&w)?.len();
                            eval_binary(&w, resolve_horizon(*n)?.unwrap_or(default_horizon(depth)))?
                        }
                        _ => {
                            let n = resolve_horizon(*n)?.unwrap_or(default_horizon(w.len()));
                            eval_mzv(&w, n, true)?
                        }
                    }
                }
                EvalTarget::Expr { file, n } => {
                    let expr = MzvExpr::from_json(&read_file(file)?)?;
                    eval_expr(expr.comb(), resolve_horizon(*n)?)?
                }
                EvalTarget::Tzv { f, n } => {
                    let f = Forest::parse(f)?;
                    eval_tzv_direct(&f, resolve_horizon(*n)?.unwrap_or(50))?
                }
                EvalTarget::Mt { spec, n } => {
                    let (s, s0) = parse_mt_spec(spec)?;
                    eval_mt_direct(&s, s0, resolve_horizon(*n)?)?
                }
            };
            if cli.json {
                println!("{}", result.to_json_value());
            } else {
                println!("{result}");
            }
        }
        Command::Oracle { which } => {
            let outcome = match which {
                OracleKind::Flattening { max_size } => check_flattening(*max_size),
                OracleKind::Yew { max_size } => check_yew(*max_size as u64),
                OracleKind::Roundtrip { max_size } => check_roundtrip(*max_size),
            };
            match outcome {
                Ok(checked) => {
                    if cli.json {
                        println!("{}", json!({ "checked": checked }));
                    } else {
                        println!("checked {checked} cases");
                    }
                }
                Err(m) => return Err(Failure::Oracle(m)),
            }
        }
    }
    Ok(())
}

fn cone_check(as_json: bool, file: &Path) -> Result<(), Failure> {
    let cone = Cone::from_json(&read_file(file)?)?;
    let poset_compatible = is_poset_compatible(&cone);
    let tree_like = poset_compatible && is_tree_like(&cone)?;
    let forest = if tree_like { Some(psi(&cone)?) } else { None };
    if as_json {
        println!(
            "{}",
            json!({
                "dimension": cone.dim(),
                "poset_compatible": poset_compatible,
                "tree_like": tree_like,
                "unimodular": cone.is_unimodular(),
                "maximal": cone.is_maximal(),
                "forest": forest.as_ref().map(ToString::to_string),
            })
        );
    } else {
        println!("dimension: {}", cone.dim());
        println!("poset-compatible: {poset_compatible}");
        println!("tree-like: {tree_like}");
        println!("unimodular: {}", cone.is_unimodular());
        println!("maximal: {}", cone.is_maximal());
        if let Some(f) = &forest {
            println!("forest: {f}");
        }
    }
    match forest {
        Some(_) => {
            // The reduction itself re-checks convergence; surface it here so
            // `cone check` exits 0 exactly when `cone reduce` would succeed.
            czv_reduce(&cone)?;
            Ok(())
        }
        None => Err(Failure::Lib(Error::NotTreeLike(
            "the cone is not tree-like, so its conical zeta value has no forest reduction".into(),
        ))),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// "s1,...,sr|s0" -> (vec![s1,...,sr], s0).
fn parse_mt_spec(spec: &str) -> Result<(Vec<u64>, u64), Failure> {
    let bad = |detail: &str| {
        Failure::Lib(Error::Parse(format!(
            "Mordell-Tornheim spec {spec:?}: {detail} (expected \"s1,...,sr|s0\")"
        )))
    };
    let (left, right) = spec.split_once('|').ok_or_else(|| bad("missing '|'"))?;
    let s = left
        .split(',')
        .map(|part| part.trim().parse::<u64>().map_err(|_| bad("bad exponent")))
        .collect::<Result<Vec<u64>, Failure>>()?;
    let s0 = right.trim().parse::<u64>().map_err(|_| bad("bad s0"))?;
    Ok((s, s0))
}

/// --N beats ZETA_FOREST_N beats the caller's default (None).
fn resolve_horizon(flag: Option<u64>) -> Result<Option<Horizon>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("ZETA_FOREST_N") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("ZETA_FOREST_N must be an integer, got {text:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("ZETA_FOREST_N: {e}"))),
    }
}

fn emit_word_comb(as_json: bool, comb: &LinComb<Word, Q>) {
    if as_json {
        let terms: Vec<Value> = comb
            .iter()
            .map(|(w, c)| json!({ "coeff": c.to_string(), "word": w.to_string() }))
            .collect();
        println!("{}", Value::Array(terms));
    } else {
        println!("{}", comb.format_with(|w| w.to_string(), " "));
    }
}

fn emit_forest_comb(as_json: bool, comb: &LinComb<Forest, Q>) {
    if as_json {
        let terms: Vec<Value> = comb
            .iter()
            .map(|(f, c)| json!({ "coeff": c.to_string(), "forest": forest_text_sugared(f) }))
            .collect();
        println!("{}", Value::Array(terms));
    } else {
        println!("{}", comb.format_with(forest_text_sugared, " "));
    }
}
