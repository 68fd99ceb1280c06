//! `--structure` annotations: which oracle decides equality, and over which
//! alphabet.
//!
//! ```text
//! free
//! cyclic:N
//! fp:a=cyclic:3,s t=free
//! hnn:a b/z/a
//! ```

use anyhow::{anyhow, bail, Context, Result};
use prefmon_core::oracle::{CyclicGroupOracle, FreeGroupOracle, FreeProduct, GroupOracle, HnnExtension};
use prefmon_core::presentation::{parse_word_list, word_names};
use prefmon_core::stallings::SubgroupAutomaton;
use prefmon_core::Alphabet;

pub struct Structure {
    /// Declared generators; `None` when they are read off the input words.
    pub alphabet: Option<Alphabet>,
    /// At most this many generators may be inferred.
    pub max_generators: Option<usize>,
    pub oracle: Box<dyn GroupOracle>,
    pub is_free: bool,
}

impl Structure {
    /// The alphabet for words given as `texts`.
    pub fn alphabet_for(&self, texts: &[&str]) -> Result<Alphabet> {
        let mut names: Vec<String> = Vec::new();
        for text in texts {
            for name in word_names(text).with_context(|| format!("in `{text}`"))? {
                if !names.contains(&name) {
                    names.push(name);
                }
            }
        }
        match &self.alphabet {
            Some(declared) => {
                if let Some(name) = names.iter().find(|n| declared.index_of(n).is_none()) {
                    bail!("`{name}` is not a generator of the structure");
                }
                Ok(declared.clone())
            }
            None => {
                if let Some(max) = self.max_generators {
                    if names.len() > max {
                        bail!("structure allows at most {max} generator(s), words use {}", names.len());
                    }
                }
                Ok(Alphabet::new(names)?)
            }
        }
    }
}

enum Factor {
    Free,
    Cyclic(u64),
}

fn factor(text: &str) -> Result<Factor> {
    match text.trim() {
        "free" => Ok(Factor::Free),
        other => match other.strip_prefix("cyclic:") {
            Some(n) => Ok(Factor::Cyclic(order(n)?)),
            None => bail!("unknown factor `{other}`, expected free or cyclic:N"),
        },
    }
}

fn order(text: &str) -> Result<u64> {
    let n: u64 = text.trim().parse().with_context(|| format!("bad order `{text}`"))?;
    if n == 0 {
        bail!("cyclic order must be positive");
    }
    Ok(n)
}

pub fn parse_structure(spec: &str) -> Result<Structure> {
    let spec = spec.trim();
    if spec == "free" {
        return Ok(Structure { alphabet: None, max_generators: None, oracle: Box::new(FreeGroupOracle), is_free: true });
    }
    if let Some(n) = spec.strip_prefix("cyclic:") {
        let oracle = CyclicGroupOracle::new(order(n)?, 0).map_err(|e| anyhow!("{e:?}"))?;
        return Ok(Structure { alphabet: None, max_generators: Some(1), oracle: Box::new(oracle), is_free: false });
    }
    if let Some(rest) = spec.strip_prefix("fp:") {
        return free_product(rest);
    }
    if let Some(rest) = spec.strip_prefix("hnn:") {
        return hnn(rest);
    }
    bail!("unknown structure `{spec}`, expected free, cyclic:N, fp:... or hnn:...")
}

fn free_product(text: &str) -> Result<Structure> {
    let mut names: Vec<String> = Vec::new();
    let mut assignment = Vec::new();
    let mut factors: Vec<Box<dyn GroupOracle>> = Vec::new();
    for (i, part) in text.split(',').enumerate() {
        let (letters, kind) = part.split_once('=').with_context(|| format!("factor `{part}` needs letters=kind"))?;
        let letters: Vec<&str> = letters.split_whitespace().collect();
        if letters.is_empty() {
            bail!("factor `{part}` has no generators");
        }
        match factor(kind)? {
            Factor::Free => factors.push(Box::new(FreeGroupOracle)),
            Factor::Cyclic(n) => {
                if letters.len() != 1 {
                    bail!("a cyclic factor takes exactly one generator");
                }
                factors.push(Box::new(CyclicGroupOracle::new(n, names.len()).map_err(|e| anyhow!("{e:?}"))?));
            }
        }
        for letter in letters {
            names.push(letter.to_string());
            assignment.push(Some(i));
        }
    }
    let alphabet = Alphabet::new(names)?;
    let oracle = FreeProduct::new(assignment, factors).map_err(|e| anyhow!("{e:?}"))?;
    Ok(Structure { alphabet: Some(alphabet), max_generators: None, oracle: Box::new(oracle), is_free: false })
}

fn hnn(text: &str) -> Result<Structure> {
    let parts: Vec<&str> = text.split('/').collect();
    let [base, stable, subgroup] = parts[..] else {
        bail!("hnn structure is hnn:BASE/STABLE/SUBGROUP");
    };
    let mut alphabet = Alphabet::new(base.split_whitespace())?;
    let words = parse_word_list(subgroup, &alphabet).context("associated subgroup")?;
    let z = alphabet.push(stable.trim())?;
    let automaton = SubgroupAutomaton::from_generators(alphabet.len(), &words);
    let oracle = HnnExtension::identity_over_free(z, automaton);
    Ok(Structure { alphabet: Some(alphabet), max_generators: None, oracle: Box::new(oracle), is_free: false })
}
