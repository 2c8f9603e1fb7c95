//! Command-line interface to the rooted-tree-map toolkit.
//!
//! Exit codes: 0 = success / all checks passed, 1 = a check failed (a
//! witness is printed on stdout), 2 = usage or domain error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use treezeta_core::error::Error;
use treezeta_core::forest::{enumerate_forests, parse_forest, Forest, ForestSum};
use treezeta_core::hopf::{
    antipode, antipode_axiom_lhs, coproduct_forest, coproduct_left_iterated,
    coproduct_right_iterated, counit, dynkin, ladder,
};
use treezeta_core::mzv::{fmt_rat_scientific, kernel_check, zeta_num, PrecisionConfig};
use treezeta_core::rational::{rat_int, Rat};
use treezeta_core::relations::{generate, span_inclusion, RelationSet, RunConfig};
use treezeta_core::series::{delta_u, exp_derivation_series, lambda_series, PolySeries};
use treezeta_core::tree_map::{apply, apply_forest, partial_as_forest_sum, partial_n};
use treezeta_core::word::{all_words, z_decode, Word, WordSum, ZIndex};
use treezeta_core::Result;

#[derive(Parser)]
#[command(
    name = "treezeta",
    version,
    about = "Rooted tree maps, the forest Hopf algebra, and multiple zeta value relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coproduct of a forest as (left, right, coefficient) triples
    Coproduct { forest: String },
    /// Print the antipode of a forest
    Antipode { forest: String },
    /// Print the Dynkin operator applied to a forest
    Dynkin { forest: String },
    /// Apply the rooted tree map of a forest to a word
    Apply { forest: String, word: String },
    /// Apply the n-th derivation to a word
    Partial { n: u32, word: String },
    /// Print the n-th derivation as a combination of ladder forests
    LadderDecomp { n: u32 },
    /// Generate relation rows over a sweep of forests and words
    Relations {
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        max_weight: usize,
        /// Also generate derivation rows
        #[arg(long)]
        derivations: bool,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
        /// Output path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symbolic verification suites
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Numerical evaluation
    #[command(subcommand)]
    Mzv(MzvCmd),
    /// Numerical kernel checks
    #[command(subcommand)]
    Check(CheckCmd),
    /// Exact rank per weight of a persisted relation file
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exact span inclusion: every row of --sub inside the row space of --sup
    Span {
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        sup: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check the ladder expansion of the derivations, as operators on words
    MainTheorem {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_word_weight: usize,
    },
    /// Check coassociativity, the counit laws and the antipode axiom
    HopfAxioms {
        #[arg(long)]
        max_degree: usize,
    },
    /// Check the truncated-series identities
    Series {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Subcommand)]
enum MzvCmd {
    /// Evaluate a zeta value for a z-index like "(2,1)" or a word like "xy"
    Eval {
        target: String,
        #[arg(long, default_value = "1e-30")]
        eps: String,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Check numerically that Z(forest(word)) vanishes
    Kernel {
        forest: String,
        word: String,
        #[arg(long, default_value = "1e-30")]
        eps: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e @ Error::Internal(_)) => {
            println!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_forest_arg(text: &str) -> Result<Forest> {
    if text == "I" || text == "1" {
        return Ok(Forest::empty());
    }
    parse_forest(text)
}

fn parse_word_arg(text: &str) -> Result<Word> {
    text.parse()
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Coproduct { forest } => {
            let f = parse_forest_arg(&forest)?;
            for ((left, right), c) in coproduct_forest(&f).terms() {
                println!("{left}\t{right}\t{}", treezeta_core::rational::fmt_rat(c));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Antipode { forest } => {
            let f = parse_forest_arg(&forest)?;
            println!("{}", antipode(&ForestSum::from_forest(f)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Dynkin { forest } => {
            let f = parse_forest_arg(&forest)?;
            println!("{}", dynkin(&ForestSum::from_forest(f)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Apply { forest, word } => {
            let f = parse_forest_arg(&forest)?;
            let w = parse_word_arg(&word)?;
            println!("{}", apply_forest(&f, &WordSum::from_word(w)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Partial { n, word } => {
            if n == 0 {
                return Err(Error::domain("derivation index must be >= 1"));
            }
            let w = parse_word_arg(&word)?;
            println!("{}", partial_n(n, &WordSum::from_word(w)));
            Ok(ExitCode::SUCCESS)
        }
        Command::LadderDecomp { n } => {
            if n == 0 {
                return Err(Error::domain("derivation index must be >= 1"));
            }
            println!("{}", partial_as_forest_sum(n));
            Ok(ExitCode::SUCCESS)
        }
        Command::Relations {
            max_degree,
            max_weight,
            derivations,
            format,
            out,
        } => {
            let set = generate(&RunConfig {
                max_degree,
                max_weight,
                derivations,
            })?;
            let rendered = match format {
                Format::Jsonl => set.to_jsonl(),
                Format::Text => set.to_text(),
            };
            match out {
                Some(path) => std::fs::write(&path, rendered)
                    .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(v) => run_verify(v),
        Command::Mzv(MzvCmd::Eval { target, eps }) => {
            let cfg = PrecisionConfig::from_text(&eps)?;
            let word = if target.starts_with('(') {
                let idx: ZIndex = target.parse()?;
                if !idx.is_admissible() || idx.depth() == 0 {
                    return Err(Error::domain(format!(
                        "z-index {idx} is not admissible (leading part must be >= 2)"
                    )));
                }
                z_decode(&idx)
            } else {
                parse_word_arg(&target)?
            };
            let result = zeta_num(&word, &cfg)?;
            let digits = decimal_digits_for(cfg.eps());
            println!(
                "{} ± {}",
                result.to_decimal(digits),
                fmt_rat_scientific(result.bound(), 3)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(CheckCmd::Kernel { forest, word, eps }) => {
            let cfg = PrecisionConfig::from_text(&eps)?;
            let f = parse_forest_arg(&forest)?;
            let w = parse_word_arg(&word)?;
            let report = kernel_check(&f, &w, &cfg)?;
            println!("forest: {f}");
            println!("word:   {w}");
            println!("image terms: {}", report.image_terms);
            println!(
                "Z(f(w)) = {} (bound {}, eps {})",
                fmt_rat_scientific(report.result.value(), 3),
                fmt_rat_scientific(report.result.bound(), 3),
                fmt_rat_scientific(cfg.eps(), 3),
            );
            if report.pass {
                println!("PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL: value exceeds certified bound + eps");
                Ok(ExitCode::from(1))
            }
        }
        Command::Rank { input } => {
            let set = read_relations(&input)?;
            let ranks = set.ranks_by_weight()?;
            let mut total = 0;
            for (weight, rank) in &ranks {
                println!(
                    "weight {weight}: rows {} rank {rank}",
                    set.rows_of_weight(*weight).len()
                );
                total += rank;
            }
            println!("total rank: {total}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Span { sub, sup } => {
            let sub_set = read_relations(&sub)?;
            let sup_set = read_relations(&sup)?;
            let check = span_inclusion(&sub_set, &sup_set)?;
            if check.contained {
                println!("contained: every sub row lies in the sup row space");
                Ok(ExitCode::SUCCESS)
            } else {
                let (weight, source, word) = check.witness.expect("witness on failure");
                println!("NOT contained; witness: weight={weight} source={source} word={word}");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn decimal_digits_for(eps: &Rat) -> u32 {
    // enough digits to show everything the bound certifies, plus slack
    let mut digits = 1u32;
    let mut v = eps.clone();
    let ten = rat_int(10);
    while v < rat_int(1) && digits < 120 {
        v = &v * &ten;
        digits += 1;
    }
    digits + 4
}

fn read_relations(path: &PathBuf) -> Result<RelationSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    RelationSet::parse_jsonl(&text)
}

// -------------------------------------------------------------------
// verification suites
// -------------------------------------------------------------------

fn run_verify(cmd: VerifyCmd) -> Result<ExitCode> {
    match cmd {
        VerifyCmd::MainTheorem { n, max_word_weight } => {
            if n == 0 {
                return Err(Error::domain("--n must be >= 1"));
            }
            for k in 1..=n {
                let expansion = partial_as_forest_sum(k);
                let scaled = expansion.scale(&two_pow_minus_one(k));
                let d = dynkin(&ForestSum::from_forest(ladder(k as usize)));
                if scaled != d {
                    println!("FAIL: (2^{k}-1) * ladder-decomposition differs from D(lambda_{k})");
                    return Ok(ExitCode::from(1));
                }
                let mut words_checked = 0usize;
                for weight in 1..=max_word_weight {
                    for w in all_words(weight) {
                        let ws = WordSum::from_word(w.clone());
                        if apply(&expansion, &ws) != partial_n(k, &ws) {
                            println!(
                                "FAIL: derivation {k} differs from its ladder expansion on {w}"
                            );
                            return Ok(ExitCode::from(1));
                        }
                        words_checked += 1;
                    }
                }
                println!("n={k}: ladder expansion matches the derivation on {words_checked} words (weight <= {max_word_weight})");
            }
            println!("main theorem verified for n <= {n}");
            Ok(ExitCode::SUCCESS)
        }
        VerifyCmd::HopfAxioms { max_degree } => {
            let mut forests = vec![Forest::empty()];
            for d in 1..=max_degree {
                forests.extend(enumerate_forests(d));
            }
            for f in &forests {
                if coproduct_left_iterated(f) != coproduct_right_iterated(f) {
                    println!("FAIL: coassociativity fails on {f}");
                    return Ok(ExitCode::from(1));
                }
                // counit laws: (eps (x) id) delta = id = (id (x) eps) delta
                let mut left = ForestSum::zero();
                let mut right = ForestSum::zero();
                for ((l, r), c) in coproduct_forest(f).terms() {
                    if l.is_empty() {
                        left.add_term(r.clone(), c.clone());
                    }
                    if r.is_empty() {
                        right.add_term(l.clone(), c.clone());
                    }
                }
                let id = ForestSum::from_forest(f.clone());
                if left != id || right != id {
                    println!("FAIL: counit law fails on {f}");
                    return Ok(ExitCode::from(1));
                }
                let a = ForestSum::from_forest(f.clone());
                if antipode_axiom_lhs(&a) != ForestSum::unit().scale(&counit(&a)) {
                    println!("FAIL: antipode axiom fails on {f}");
                    return Ok(ExitCode::from(1));
                }
            }
            println!(
                "hopf axioms hold on all {} forests of degree <= {max_degree}",
                forests.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        VerifyCmd::Series { order } => run_verify_series(order),
    }
}

fn two_pow_minus_one(n: u32) -> Rat {
    rat_int(2).pow(n as i32) - rat_int(1)
}

/// x (x+2y)^(n-1) y expanded as a word sum.
fn x_x2y_pow_y(n: usize) -> WordSum {
    let x_plus_2y = &WordSum::x() + &WordSum::y().scale(&rat_int(2));
    let mut mid = WordSum::one();
    for _ in 1..n {
        mid = &mid * &x_plus_2y;
    }
    &(&WordSum::x() * &mid) * &WordSum::y()
}

fn run_verify_series(order: usize) -> Result<ExitCode> {
    // the right-hand side x + sum_n x(x+2y)^{n-1}y u^n
    let mut rhs = PolySeries::constant(&WordSum::x(), order);
    for n in 1..=order {
        rhs.set_coeff(n, x_x2y_pow_y(n));
    }

    // ladder maps on x reproduce the geometric words
    for n in 1..=order {
        let image = apply_forest(&ladder(n), &WordSum::x());
        if image != x_x2y_pow_y(n) {
            println!("FAIL: lambda_{n}(x) differs from x(x+2y)^{}y", n - 1);
            return Ok(ExitCode::from(1));
        }
    }
    println!("ladder images on x match x(x+2y)^(n-1)y for n <= {order}");

    // composite automorphism identity
    let shifted = delta_u(&rat_int(-2), order);
    let inverse = delta_u(&rat_int(-1), order).inverse();
    let composed = shifted.compose(&inverse);
    if composed.image_of_x() != &rhs {
        println!("FAIL: (delta_(-2u) o delta_(-u)^-1)(x) differs from the geometric series");
        return Ok(ExitCode::from(1));
    }
    println!("composite automorphism identity holds at order {order}");

    // exponential of the alternating derivation series reproduces delta_u
    let du = delta_u(&rat_int(1), order);
    for target in [WordSum::x(), WordSum::y(), word_sum("xy"), word_sum("xxy")] {
        let via_exp = exp_derivation_series(
            |n| {
                let sign = if n % 2 == 1 { rat_int(-1) } else { rat_int(1) };
                sign / rat_int(n as i64)
            },
            &target,
            order,
        );
        if du.apply(&target) != via_exp {
            println!(
                "FAIL: exp of the derivation series differs from the automorphism on {target:?}"
            );
            return Ok(ExitCode::from(1));
        }
    }
    println!("derivation exponential matches the automorphism at order {order}");

    // exp(sum (2^n - 1)/n d_n u^n)(x) gives the same geometric series
    let via_exp = exp_derivation_series(
        |n| two_pow_minus_one(n) / rat_int(n as i64),
        &WordSum::x(),
        order,
    );
    if via_exp != rhs {
        println!("FAIL: exp((2^n-1)/n d_n) on x differs from the geometric series");
        return Ok(ExitCode::from(1));
    }
    println!("scaled derivation exponential matches at order {order}");

    // log of the ladder series has coefficients D(lambda_n)/n
    let log = lambda_series(order).log()?;
    for n in 1..=order {
        let expected =
            dynkin(&ForestSum::from_forest(ladder(n))).scale(&(rat_int(1) / rat_int(n as i64)));
        if log.coeff(n) != &expected {
            println!("FAIL: log of the ladder series differs from D(lambda_{n})/{n}");
            return Ok(ExitCode::from(1));
        }
    }
    println!("ladder-series logarithm matches the Dynkin coefficients for n <= {order}");

    println!("series identities verified at order {order}");
    Ok(ExitCode::SUCCESS)
}

fn word_sum(s: &str) -> WordSum {
    WordSum::from_word(s.parse().expect("valid word literal"))
}
