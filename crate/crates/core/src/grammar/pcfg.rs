use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::GrammarError;
use crate::text::TaggedToken;

const SUM_TOL: f64 = 1e-6;

/// Right-hand side of a lexical rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Terminal {
    /// A literal word, matched case-insensitively. Stored lower-cased.
    Word(String),
    /// Any token carrying this part-of-speech tag.
    Tag(String),
}

impl Terminal {
    pub fn matches(&self, token: &TaggedToken) -> bool {
        match self {
            Terminal::Word(w) => token.word.to_lowercase() == *w,
            Terminal::Tag(t) => token.tag == *t,
        }
    }

    fn sort_key(&self) -> String {
        match self {
            Terminal::Word(w) => format!("'{w}'"),
            Terminal::Tag(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRule {
    pub lhs: usize,
    pub left: usize,
    pub right: usize,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexicalRule {
    pub lhs: usize,
    pub terminal: Terminal,
    pub prob: f64,
}

/// A PCFG in Chomsky normal form. Rules are kept in lexicographic order of
/// their symbol names.
#[derive(Debug, Clone, PartialEq)]
pub struct Pcfg {
    symbols: Vec<String>,
    start: usize,
    binary: Vec<BinaryRule>,
    lexical: Vec<LexicalRule>,
    warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Reject left-hand sides whose probabilities sum above one instead of
    /// recording a warning.
    pub strict: bool,
}

enum Rhs {
    Pair(String, String),
    Single(String),
    Word(String),
}

struct RawRule {
    line: usize,
    lhs: String,
    rhs: Rhs,
    prob: f64,
}

fn unquote(s: &str) -> Option<&str> {
    s.strip_prefix('\'')
        .and_then(|r| r.strip_suffix('\''))
        .or_else(|| s.strip_prefix('"').and_then(|r| r.strip_suffix('"')))
        .filter(|inner| !inner.is_empty())
}

fn parse_line(line_no: usize, line: &str) -> Result<Option<RawRule>, GrammarError> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let parts: Vec<&str> = body.split_whitespace().collect();
    if parts.len() < 4 || parts[1] != "->" {
        return Err(GrammarError::Parse {
            line: line_no,
            message: "expected `LHS -> RHS... probability`".to_string(),
        });
    }
    let prob: f64 = parts[parts.len() - 1].parse().map_err(|_| GrammarError::Parse {
        line: line_no,
        message: format!("bad probability `{}`", parts[parts.len() - 1]),
    })?;
    if !(prob > 0.0 && prob <= 1.0) {
        return Err(GrammarError::Probability {
            line: line_no,
            value: prob,
        });
    }
    let lhs = parts[0];
    if unquote(lhs).is_some() {
        return Err(GrammarError::Parse {
            line: line_no,
            message: "left-hand side must be a nonterminal".to_string(),
        });
    }
    let rhs = &parts[2..parts.len() - 1];
    let rhs = match rhs {
        [one] => match unquote(one) {
            Some(word) => Rhs::Word(word.to_lowercase()),
            None => Rhs::Single((*one).to_string()),
        },
        [a, b] => {
            if unquote(a).is_some() || unquote(b).is_some() {
                return Err(GrammarError::NotCnf { line: line_no });
            }
            Rhs::Pair((*a).to_string(), (*b).to_string())
        }
        _ => return Err(GrammarError::NotCnf { line: line_no }),
    };
    Ok(Some(RawRule {
        line: line_no,
        lhs: lhs.to_string(),
        rhs,
        prob,
    }))
}

impl Pcfg {
    /// Parses one rule per line: `A -> B C p`, `A -> 'word' p` or `A -> TAG p`.
    /// A bare single symbol is a tag unless it also appears as a left-hand
    /// side, in which case the rule is a unit production and rejected. The
    /// first rule's left-hand side is the start symbol. `#` starts a comment.
    pub fn parse(text: &str, opts: LoadOptions) -> Result<Self, GrammarError> {
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if let Some(rule) = parse_line(i + 1, line)? {
                raw.push(rule);
            }
        }
        if raw.is_empty() {
            return Err(GrammarError::Empty);
        }

        let mut names: Vec<String> = raw.iter().map(|r| r.lhs.clone()).collect();
        names.sort();
        names.dedup();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let lookup = |line: usize, sym: &str| {
            index.get(sym).copied().ok_or_else(|| GrammarError::UnknownSymbol {
                line,
                symbol: sym.to_string(),
            })
        };

        let mut binary = Vec::new();
        let mut lexical = Vec::new();
        let mut seen = BTreeMap::new();
        for r in &raw {
            let lhs = index[r.lhs.as_str()];
            let key = match &r.rhs {
                Rhs::Pair(a, b) => {
                    let (left, right) = (lookup(r.line, a)?, lookup(r.line, b)?);
                    binary.push(BinaryRule {
                        lhs,
                        left,
                        right,
                        prob: r.prob,
                    });
                    format!("{} {} {}", r.lhs, a, b)
                }
                Rhs::Single(sym) => {
                    if index.contains_key(sym.as_str()) {
                        return Err(GrammarError::NotCnf { line: r.line });
                    }
                    lexical.push(LexicalRule {
                        lhs,
                        terminal: Terminal::Tag(sym.clone()),
                        prob: r.prob,
                    });
                    format!("{} {}", r.lhs, sym)
                }
                Rhs::Word(w) => {
                    lexical.push(LexicalRule {
                        lhs,
                        terminal: Terminal::Word(w.clone()),
                        prob: r.prob,
                    });
                    format!("{} '{}'", r.lhs, w)
                }
            };
            if let Some(first) = seen.insert(key, r.line) {
                return Err(GrammarError::Parse {
                    line: r.line,
                    message: format!("duplicate of the rule on line {first}"),
                });
            }
        }

        let mut sums = alloc::vec![0.0; names.len()];
        for r in &binary {
            sums[r.lhs] += r.prob;
        }
        for r in &lexical {
            sums[r.lhs] += r.prob;
        }
        let mut warnings = Vec::new();
        for (i, &sum) in sums.iter().enumerate() {
            if sum > 1.0 + SUM_TOL {
                if opts.strict {
                    return Err(GrammarError::ProbabilitySum {
                        lhs: names[i].clone(),
                        sum,
                    });
                }
                warnings.push(format!("probabilities of `{}` sum to {sum}", names[i]));
            }
        }

        binary.sort_by(|a, b| {
            (&names[a.lhs], &names[a.left], &names[a.right]).cmp(&(&names[b.lhs], &names[b.left], &names[b.right]))
        });
        lexical.sort_by(|a, b| (&names[a.lhs], a.terminal.sort_key()).cmp(&(&names[b.lhs], b.terminal.sort_key())));

        Ok(Self {
            start: index[raw[0].lhs.as_str()],
            symbols: names,
            binary,
            lexical,
            warnings,
        })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, id: usize) -> &str {
        &self.symbols[id]
    }

    pub fn symbol_id(&self, name: &str) -> Option<usize> {
        self.symbols.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn binary_rules(&self) -> &[BinaryRule] {
        &self.binary
    }

    pub fn lexical_rules(&self) -> &[LexicalRule] {
        &self.lexical
    }

    pub fn rule_count(&self) -> usize {
        self.binary.len() + self.lexical.len()
    }

    /// Non-fatal validation findings, such as probability mass above one.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn binary_prob(&self, lhs: &str, left: &str, right: &str) -> Option<f64> {
        let (l, a, b) = (self.symbol_id(lhs)?, self.symbol_id(left)?, self.symbol_id(right)?);
        self.binary
            .iter()
            .find(|r| r.lhs == l && r.left == a && r.right == b)
            .map(|r| r.prob)
    }

    pub fn lexical_prob(&self, lhs: &str, terminal: &Terminal) -> Option<f64> {
        let l = self.symbol_id(lhs)?;
        self.lexical
            .iter()
            .find(|r| r.lhs == l && r.terminal == *terminal)
            .map(|r| r.prob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_small_grammar() {
        let g = Pcfg::parse(
            "S -> NP VP 1.0\nNP -> 'a' 0.5\nNP -> DT 0.5\nVP -> 'runs' 1.0\n",
            LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(g.symbol(g.start()), "S");
        assert_eq!(g.binary_rules().len(), 1);
        assert_eq!(g.lexical_rules().len(), 3);
        assert_eq!(g.binary_prob("S", "NP", "VP"), Some(1.0));
        assert_eq!(g.lexical_prob("NP", &Terminal::Tag("DT".into())), Some(0.5));
    }

    #[test]
    fn ternary_rule_is_not_cnf() {
        let err = Pcfg::parse("S -> NP VP PP 1.0\nNP -> 'a' 1.0", LoadOptions::default()).unwrap_err();
        assert_eq!(err, GrammarError::NotCnf { line: 1 });
    }

    #[test]
    fn unit_production_is_not_cnf() {
        let err = Pcfg::parse("S -> NP 1.0\nNP -> 'a' 1.0", LoadOptions::default()).unwrap_err();
        assert_eq!(err, GrammarError::NotCnf { line: 1 });
    }

    #[test]
    fn terminal_in_binary_rule_is_not_cnf() {
        let err = Pcfg::parse("S -> 'a' NP 1.0\nNP -> 'a' 1.0", LoadOptions::default()).unwrap_err();
        assert_eq!(err, GrammarError::NotCnf { line: 1 });
    }

    #[test]
    fn unknown_rhs_symbol() {
        let err = Pcfg::parse("S -> NP VP 1.0\nNP -> 'a' 1.0", LoadOptions::default()).unwrap_err();
        assert_eq!(
            err,
            GrammarError::UnknownSymbol {
                line: 1,
                symbol: "VP".into()
            }
        );
    }

    #[test]
    fn probability_range_checked() {
        let err = Pcfg::parse("S -> 'a' 1.5", LoadOptions::default()).unwrap_err();
        assert_eq!(err, GrammarError::Probability { line: 1, value: 1.5 });
        assert!(Pcfg::parse("S -> 'a' 0", LoadOptions::default()).is_err());
    }

    #[test]
    fn overfull_lhs_warns_or_fails() {
        let text = "S -> 'a' 0.6\nS -> 'b' 0.6";
        let g = Pcfg::parse(text, LoadOptions::default()).unwrap();
        assert_eq!(g.warnings().len(), 1);
        let err = Pcfg::parse(text, LoadOptions { strict: true }).unwrap_err();
        assert!(matches!(err, GrammarError::ProbabilitySum { .. }));
    }

    #[test]
    fn comments_blank_lines_and_errors_with_line_numbers() {
        let err = Pcfg::parse("# header\n\nS -> 'a' 1.0\nS => x 1.0", LoadOptions::default()).unwrap_err();
        assert!(matches!(err, GrammarError::Parse { line: 4, .. }));
    }

    #[test]
    fn duplicates_rejected() {
        let err = Pcfg::parse("S -> 'a' 0.5\nS -> 'A' 0.5", LoadOptions::default()).unwrap_err();
        assert!(matches!(err, GrammarError::Parse { line: 2, .. }));
    }
}
