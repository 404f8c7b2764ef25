//! Finite presentations, shortlex Knuth–Bendix completion and the resulting
//! word-problem oracle.
//!
//! Presentation files are plain UTF-8 text:
//!
//! ```text
//! # genus-2 surface group
//! gens: a b c d
//! order: a A b B c d C D
//! rel: abABcdCD
//! assert: torsion-free
//! ```
//!
//! Lowercase letters are generators and capitals their inverses. `order` is
//! optional and defaults to `a A b B ...`.

mod kb;
mod oracle;

pub use kb::{kb_complete, normal_form, CompletionLimits, RewritingSystem};
pub use oracle::{equal, GroupOracle, OracleKind};

use std::path::Path;

use crate::error::{Error, Result};
use crate::words::{cyclic_reduce, Alphabet, Word};

#[derive(Clone, Debug)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
    /// Recorded from `assert: torsion-free`; never checked.
    pub torsion_free: bool,
}

impl Presentation {
    pub fn free(rank: usize) -> Self {
        Presentation {
            alphabet: Alphabet::free(rank),
            relators: Vec::new(),
            torsion_free: true,
        }
    }

    /// Relators are cyclically reduced on the way in; trivial ones are rejected.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>, torsion_free: bool) -> Result<Self> {
        let mut out = Vec::with_capacity(relators.len());
        for r in relators {
            let c = cyclic_reduce(&r);
            if c.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "relator '{}' is freely trivial",
                    alphabet.format(&r)
                )));
            }
            out.push(c);
        }
        Ok(Presentation {
            alphabet,
            relators: out,
            torsion_free,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<Vec<char>> = None;
        let mut order: Option<(usize, String)> = None;
        let mut rels: Vec<(usize, String)> = Vec::new();
        let mut torsion_free = false;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected 'key: value', got '{line}'"),
            })?;
            let value = value.trim();
            match key.trim() {
                "gens" => {
                    if gens.is_some() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "duplicate 'gens' line".into(),
                        });
                    }
                    let mut names = Vec::new();
                    for tok in value.split_whitespace() {
                        let mut cs = tok.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) if c.is_ascii_lowercase() => names.push(c),
                            _ => {
                                return Err(Error::Parse {
                                    line: line_no,
                                    message: format!(
                                        "generator '{tok}' must be a single lowercase letter"
                                    ),
                                })
                            }
                        }
                    }
                    gens = Some(names);
                }
                "order" => order = Some((line_no, value.to_string())),
                "rel" => rels.push((line_no, value.to_string())),
                "assert" => match value {
                    "torsion-free" => torsion_free = true,
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("unknown assertion '{other}'"),
                        })
                    }
                },
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown key '{other}'"),
                    })
                }
            }
        }

        let names = gens.ok_or(Error::Parse {
            line: 0,
            message: "missing 'gens' line".into(),
        })?;
        let mut alphabet = Alphabet::new(names).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        if let Some((line, order_text)) = order {
            let letters = order_text
                .split_whitespace()
                .map(|tok| {
                    let mut cs = tok.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => alphabet.parse_letter(c),
                        _ => Err(Error::UnknownLetter(tok.chars().next().unwrap_or('?'))),
                    }
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            alphabet = alphabet.with_order(letters).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        let mut relators = Vec::new();
        for (line, s) in rels {
            let w = alphabet.parse_word(&s).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            relators.push(w);
        }
        Presentation::new(alphabet, relators, torsion_free)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Presentation::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let a = &self.alphabet;
        let gens: Vec<String> = a.generator_names().iter().map(|c| c.to_string()).collect();
        let mut out = format!("gens: {}\norder: {}\n", gens.join(" "), a.format_letter_order());
        for r in &self.relators {
            out.push_str(&format!("rel: {}\n", a.format(r)));
        }
        if self.torsion_free {
            out.push_str("assert: torsion-free\n");
        }
        out
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }
}
