//! The `prefmon` command line.
//!
//! Every subcommand is a pure function of its arguments and input files;
//! [`run`] returns the exit code and writes to the given streams.

pub mod structure;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use prefmon_core::constructions::{
    add_free_generator, build_mqw, group_case_restriction, hnn_identity_extension, monoid_to_group, prefix_generators,
    ru_generators, special_inverse_of_rc, star_construction,
};
use prefmon_core::enumerate::{prove_equal, run_task, Outcome, Proof, RcClose, RcReason, Rewrite, RuleKind};
use prefmon_core::greens::AmbientSubmonoid;
use prefmon_core::munn::MunnTree;
use prefmon_core::oracle::Budget;
use prefmon_core::presentation::{parse_presentation, parse_word, parse_word_list, word_names};
use prefmon_core::stallings::SubgroupAutomaton;
use prefmon_core::{Alphabet, Presentation, Word};

use structure::parse_structure;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prefmon", version, about = "Prefix monoids, right units and their word problems")]
pub struct Cli {
    /// Ball radius for bounded enumerations.
    #[arg(long, global = true, default_value_t = 6)]
    pub radius: usize,
    /// Step budget for oracles and provers.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub steps: u64,
    /// Seed for randomized utilities.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a presentation file and summarize it.
    Parse { file: PathBuf },
    /// Print a presentation in canonical form.
    Print { file: PathBuf },
    /// Prefix generators of a special group presentation.
    Prefixes { file: PathBuf },
    /// Right-unit generators of a special inverse monoid presentation.
    RuPrefixes { file: PathBuf },
    /// Presentation transformers.
    Transform {
        #[command(subcommand)]
        transform: Transform,
    },
    /// Decide equality of two words in a group.
    Eq {
        #[arg(long)]
        structure: String,
        u: String,
        v: String,
    },
    /// Munn tree of a word.
    Munn { word: String },
    /// Products of at most `--radius` generators, up to equality.
    Ball {
        #[arg(long, default_value = "free")]
        structure: String,
        /// Comma-separated generator words.
        generators: String,
    },
    /// Generators that are units, as certified inside the ball.
    Units {
        #[arg(long, default_value = "free")]
        structure: String,
        generators: String,
    },
    /// Schützenberger group of `x` in a submonoid of a free group.
    Schutz {
        #[arg(long, default_value = "free")]
        structure: String,
        generators: String,
        x: String,
        /// Unit group generators; computed from the ball when omitted.
        #[arg(long)]
        units: Option<String>,
    },
    /// Search for a derivation of `u = v` from the defining relations.
    Prove {
        file: PathBuf,
        u: String,
        v: String,
        /// Use right cancellative closure (monoid presentations).
        #[arg(long)]
        rc: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Compact,
    Expanded,
    Special,
    Relations,
}

#[derive(Debug, Subcommand)]
pub enum Transform {
    /// Group presentation with the same relations.
    Mon2gp { file: PathBuf },
    /// `K = Gp<A, s, t | ...>` from a group and a generator subset.
    Star {
        #[arg(long)]
        subset: String,
        file: PathBuf,
    },
    /// Add one free generator.
    Freegen { file: PathBuf },
    /// Group-case restriction of an inverse monoid presentation.
    Restrict { file: PathBuf },
    /// Special inverse monoid of a right cancellative monoid presentation.
    Mt {
        #[arg(long, value_enum)]
        form: Option<Form>,
        file: PathBuf,
    },
    /// `M_{Q,W}` from `Gp<A | Q>` and a word list `W`.
    Mqw {
        #[arg(long)]
        words: String,
        #[arg(long, value_enum)]
        form: Option<Form>,
        file: PathBuf,
    },
    /// HNN extension fixing the subgroup generated by `--words`.
    Hnn {
        #[arg(long)]
        words: String,
        #[arg(long, default_value = "z")]
        stable: String,
        file: PathBuf,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut text = String::new();
    match execute(&cli, &mut text) {
        Ok(code) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn read_presentation(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let p = parse_presentation(&text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))?;
    let diagnostics = p.validate();
    if let Some(d) = diagnostics.first() {
        bail!("{}: {d}", path.display());
    }
    Ok(p)
}

fn join(alphabet: &Alphabet, words: &[Word]) -> String {
    words.iter().map(|w| alphabet.display(w).to_string()).collect::<Vec<_>>().join(", ")
}

fn alphabet_of(texts: &[&str]) -> Result<Alphabet> {
    let mut names: Vec<String> = Vec::new();
    for text in texts {
        for name in word_names(text)? {
            if !names.contains(&name) {
                names.push(name);
            }
        }
    }
    Ok(Alphabet::new(names)?)
}

fn execute(cli: &Cli, out: &mut String) -> Result<i32> {
    match &cli.command {
        Command::Parse { file } => {
            let p = read_presentation(file)?;
            writeln!(out, "kind: {}", p.kind)?;
            writeln!(out, "generators: {}", p.alphabet.names().join(", "))?;
            writeln!(out, "relations: {}", p.relations.len())?;
            writeln!(out, "special: {}", if p.is_special() { "yes" } else { "no" })?;
            Ok(EXIT_OK)
        }
        Command::Print { file } => {
            writeln!(out, "{}", read_presentation(file)?)?;
            Ok(EXIT_OK)
        }
        Command::Prefixes { file } => {
            let p = read_presentation(file)?;
            write!(out, "{}", prefix_generators(&p)?.display(&p.alphabet))?;
            writeln!(out, "mu: unknown")?;
            Ok(EXIT_OK)
        }
        Command::RuPrefixes { file } => {
            let p = read_presentation(file)?;
            write!(out, "{}", ru_generators(&p)?.display(&p.alphabet))?;
            Ok(EXIT_OK)
        }
        Command::Transform { transform } => self::transform(transform, out),
        Command::Eq { structure, u, v } => {
            let s = parse_structure(structure)?;
            let alphabet = s.alphabet_for(&[u, v])?;
            let (u, v) = (parse_word(u, &alphabet)?, parse_word(v, &alphabet)?);
            let answer = s.oracle.decide_within(&u, &v, &mut Budget::new(cli.steps));
            writeln!(out, "{answer}")?;
            Ok(if answer.is_decisive() { EXIT_OK } else { EXIT_UNKNOWN })
        }
        Command::Munn { word } => {
            let alphabet = alphabet_of(&[word])?;
            let tree = MunnTree::new(&parse_word(word, &alphabet)?);
            write!(out, "{}", tree.display(&alphabet))?;
            writeln!(out, "idempotent: {}", if tree.is_idempotent() { "yes" } else { "no" })?;
            Ok(EXIT_OK)
        }
        Command::Ball { structure, generators } => {
            let s = parse_structure(structure)?;
            let alphabet = s.alphabet_for(&[generators])?;
            let gens = parse_word_list(generators, &alphabet)?;
            let m = AmbientSubmonoid::new(s.oracle, gens);
            let ball = m.ball(cli.radius, &mut Budget::new(cli.steps));
            writeln!(out, "radius: {}", ball.radius)?;
            writeln!(out, "elements: {}", ball.len())?;
            writeln!(out, "complete: {}", if ball.complete { "yes" } else { "no" })?;
            for e in &ball.elements {
                writeln!(out, "{}", e.display(&alphabet, &m.generators))?;
            }
            Ok(if ball.complete { EXIT_OK } else { EXIT_UNKNOWN })
        }
        Command::Units { structure, generators } => {
            let s = parse_structure(structure)?;
            let alphabet = s.alphabet_for(&[generators])?;
            let gens = parse_word_list(generators, &alphabet)?;
            let m = AmbientSubmonoid::new(s.oracle, gens);
            let units = m.unit_generators_in_ball(cli.radius, &mut Budget::new(cli.steps))?;
            for (i, g) in m.generators.iter().enumerate() {
                let verdict = if units.contains(&i) { "unit" } else { "unknown" };
                writeln!(out, "{}: {verdict}", alphabet.display(g))?;
            }
            Ok(EXIT_OK)
        }
        Command::Schutz { structure, generators, x, units } => {
            let s = parse_structure(structure)?;
            if !s.is_free {
                bail!("schutz needs --structure free");
            }
            let mut texts: Vec<&str> = vec![generators, x];
            if let Some(u) = units {
                texts.push(u);
            }
            let alphabet = s.alphabet_for(&texts)?;
            let gens = parse_word_list(generators, &alphabet)?;
            let x = parse_word(x, &alphabet)?;
            let m = AmbientSubmonoid::new(s.oracle, gens);
            let mut budget = Budget::new(cli.steps);
            let unit_words = match units {
                Some(u) => parse_word_list(u, &alphabet)?,
                None => {
                    let idx = m.unit_generators_in_ball(cli.radius, &mut budget)?;
                    idx.into_iter().map(|i| m.generators[i].clone()).collect()
                }
            };
            let u = SubgroupAutomaton::from_generators(alphabet.len(), &unit_words);
            let m = m.with_units(u.clone());
            let schutz = m.schutz_free_ambient(&x)?;
            let stabilizer = m.right_stabilizer_in_ball(&x, cli.radius, &mut budget)?;
            writeln!(out, "units: <{}>", join(&alphabet, &u.basis()))?;
            writeln!(out, "rank: {}", schutz.rank())?;
            writeln!(out, "basis: <{}>", join(&alphabet, &schutz.basis()))?;
            writeln!(out, "automaton:")?;
            write!(out, "{}", schutz.dump(&alphabet))?;
            writeln!(out, "stabilizer in ball: {}", join(&alphabet, &stabilizer))?;
            Ok(EXIT_OK)
        }
        Command::Prove { file, u, v, rc } => {
            let p = read_presentation(file)?;
            let (uw, vw) = (parse_word(u, &p.alphabet)?, parse_word(v, &p.alphabet)?);
            if *rc {
                prove_rc(&p, &uw, &vw, cli.steps, out)
            } else {
                let (proof, steps) = prove_equal(&p, &uw, &vw, cli.steps);
                match proof {
                    Proof::Accepted(d) => {
                        writeln!(out, "Accepted after {steps} steps")?;
                        writeln!(out, "{}", p.alphabet.display(&d.words[0]))?;
                        for (w, r) in d.words[1..].iter().zip(&d.rewrites) {
                            writeln!(out, "{}    [{}]", p.alphabet.display(w), rewrite_note(&p.alphabet, r))?;
                        }
                        Ok(EXIT_OK)
                    }
                    Proof::Rejected => {
                        writeln!(out, "Rejected after {steps} steps")?;
                        Ok(EXIT_REJECTED)
                    }
                    Proof::Unknown => {
                        writeln!(out, "Unknown after {steps} steps")?;
                        Ok(EXIT_UNKNOWN)
                    }
                }
            }
        }
    }
}

fn rewrite_note(alphabet: &Alphabet, r: &Rewrite) -> String {
    let rule = match r.rule {
        RuleKind::Relation => "relation",
        RuleKind::Free => "free",
        RuleKind::WagnerRetract => "retract",
        RuleKind::WagnerCommute => "commute",
    };
    format!("{rule} at {}: {} -> {}", r.pos, alphabet.display(&r.from), alphabet.display(&r.to))
}

fn prove_rc(p: &Presentation, u: &Word, v: &Word, steps: u64, out: &mut String) -> Result<i32> {
    let mut task = RcClose::new(p, u, v)?;
    let (outcome, used) = run_task(&mut task, steps);
    match outcome {
        Outcome::Accepted => {
            writeln!(out, "Accepted after {used} steps")?;
            for e in task.certificate().edges {
                let reason = match e.reason {
                    RcReason::Relation(i) => format!("relation {}", i + 1),
                    RcReason::Right => "right".to_string(),
                    RcReason::Left => "left".to_string(),
                    RcReason::Cancel(a) => format!("cancel {}", p.alphabet.display(&Word::letter(a))),
                };
                writeln!(out, "{} = {}    [{reason}]", p.alphabet.display(&e.x), p.alphabet.display(&e.y))?;
            }
            Ok(EXIT_OK)
        }
        Outcome::Rejected => {
            writeln!(out, "Rejected after {used} steps")?;
            Ok(EXIT_REJECTED)
        }
        Outcome::Unknown => {
            writeln!(out, "Unknown after {used} steps (words up to length {})", task.length_bound())?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn both_forms(out: &mut String, first: (&str, &Presentation), second: (&str, &Presentation)) -> Result<()> {
    writeln!(out, "# {}", first.0)?;
    writeln!(out, "{}", first.1)?;
    writeln!(out, "# {}", second.0)?;
    writeln!(out, "{}", second.1)?;
    Ok(())
}

fn transform(t: &Transform, out: &mut String) -> Result<i32> {
    match t {
        Transform::Mon2gp { file } => writeln!(out, "{}", monoid_to_group(&read_presentation(file)?)?)?,
        Transform::Star { subset, file } => {
            let p = read_presentation(file)?;
            let names: Vec<&str> = subset.split([',', ' ']).filter(|s| !s.is_empty()).collect();
            writeln!(out, "{}", star_construction(&p, &names)?)?;
        }
        Transform::Freegen { file } => writeln!(out, "{}", add_free_generator(&read_presentation(file)?)?)?,
        Transform::Restrict { file } => writeln!(out, "{}", group_case_restriction(&read_presentation(file)?)?)?,
        Transform::Mt { form, file } => {
            let r = special_inverse_of_rc(&read_presentation(file)?)?;
            match form {
                None => both_forms(out, ("special", &r.special), ("relations", &r.relations))?,
                Some(Form::Special) => writeln!(out, "{}", r.special)?,
                Some(Form::Relations) => writeln!(out, "{}", r.relations)?,
                Some(f) => bail!("mt has forms special and relations, not {f:?}"),
            }
        }
        Transform::Mqw { words, form, file } => {
            let p = read_presentation(file)?;
            let q: Vec<Word> = p.relators().cloned().collect();
            let w = parse_word_list(words, &p.alphabet)?;
            let m = build_mqw(&p.alphabet, &q, &w)?;
            match form {
                None => both_forms(out, ("compact", &m.compact), ("expanded", &m.expanded))?,
                Some(Form::Compact) => writeln!(out, "{}", m.compact)?,
                Some(Form::Expanded) => writeln!(out, "{}", m.expanded)?,
                Some(f) => bail!("mqw has forms compact and expanded, not {f:?}"),
            }
        }
        Transform::Hnn { words, stable, file } => {
            let p = read_presentation(file)?;
            let w = parse_word_list(words, &p.alphabet)?;
            writeln!(out, "{}", hnn_identity_extension(&p, &w, stable)?)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs with `args` and returns `(exit code, stdout, stderr)`.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}
