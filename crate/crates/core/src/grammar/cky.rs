use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::pcfg::{Pcfg, Terminal};
use crate::text::TaggedToken;

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Leaf { token: TaggedToken, terminal: Terminal },
    Branch(Box<Node>, Box<Node>),
}

/// A labelled constituent over tokens `[start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub kind: NodeKind,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    pub fn leaf_token(&self) -> Option<&TaggedToken> {
        match &self.kind {
            NodeKind::Leaf { token, .. } => Some(token),
            NodeKind::Branch(..) => None,
        }
    }

    pub fn children(&self) -> Option<(&Node, &Node)> {
        match &self.kind {
            NodeKind::Branch(a, b) => Some((a, b)),
            NodeKind::Leaf { .. } => None,
        }
    }

    pub fn leaves(&self) -> Vec<&TaggedToken> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a TaggedToken>) {
        match &self.kind {
            NodeKind::Leaf { token, .. } => out.push(token),
            NodeKind::Branch(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Natural-log probability of this subtree recomputed from `grammar`.
    /// `None` if a rule used by the tree is missing from the grammar.
    pub fn log_prob_under(&self, grammar: &Pcfg) -> Option<f64> {
        match &self.kind {
            NodeKind::Leaf { terminal, .. } => grammar.lexical_prob(&self.label, terminal).map(libm::log),
            NodeKind::Branch(a, b) => {
                let p = grammar.binary_prob(&self.label, &a.label, &b.label)?;
                Some(libm::log(p) + a.log_prob_under(grammar)? + b.log_prob_under(grammar)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseTree {
    pub root: Node,
    pub log_prob: f64,
}

impl ParseTree {
    pub fn probability(&self) -> f64 {
        libm::exp(self.log_prob)
    }

    pub fn tokens(&self) -> Vec<&TaggedToken> {
        self.root.leaves()
    }
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Lexical(usize),
    Binary { rule: usize, split: usize },
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    log_prob: f64,
    back: Back,
}

/// Viterbi CKY. Returns the most probable parse rooted at the start symbol
/// and spanning the whole sentence, or `None` if there is none.
///
/// Equal-probability candidates keep the one found first: splits are visited
/// left to right and rules in lexicographic order.
pub fn cky_parse(tokens: &[TaggedToken], grammar: &Pcfg) -> Option<ParseTree> {
    let n = tokens.len();
    if n == 0 {
        return None;
    }
    let nsym = grammar.symbols().len();
    // chart[span_index(i, j)][symbol]
    let span_index = |i: usize, j: usize| i * (n + 1) + j;
    let mut chart: Vec<Vec<Option<Cell>>> = vec![vec![None; nsym]; (n + 1) * (n + 1)];

    for (i, tok) in tokens.iter().enumerate() {
        let cells = &mut chart[span_index(i, i + 1)];
        for (r, rule) in grammar.lexical_rules().iter().enumerate() {
            if !rule.terminal.matches(tok) {
                continue;
            }
            let lp = libm::log(rule.prob);
            if cells[rule.lhs].is_none_or(|c| lp > c.log_prob) {
                cells[rule.lhs] = Some(Cell {
                    log_prob: lp,
                    back: Back::Lexical(r),
                });
            }
        }
        if cells.iter().all(Option::is_none) {
            return None;
        }
    }

    for width in 2..=n {
        for i in 0..=(n - width) {
            let j = i + width;
            let mut cells: Vec<Option<Cell>> = vec![None; nsym];
            for split in (i + 1)..j {
                let left = &chart[span_index(i, split)];
                let right = &chart[span_index(split, j)];
                for (r, rule) in grammar.binary_rules().iter().enumerate() {
                    let (Some(lc), Some(rc)) = (left[rule.left], right[rule.right]) else {
                        continue;
                    };
                    let lp = libm::log(rule.prob) + lc.log_prob + rc.log_prob;
                    if cells[rule.lhs].is_none_or(|c| lp > c.log_prob) {
                        cells[rule.lhs] = Some(Cell {
                            log_prob: lp,
                            back: Back::Binary { rule: r, split },
                        });
                    }
                }
            }
            chart[span_index(i, j)] = cells;
        }
    }

    let top = chart[span_index(0, n)][grammar.start()]?;
    let root = build(&chart, &span_index, grammar, tokens, grammar.start(), 0, n);
    Some(ParseTree {
        root,
        log_prob: top.log_prob,
    })
}

fn build(
    chart: &[Vec<Option<Cell>>],
    span_index: &dyn Fn(usize, usize) -> usize,
    grammar: &Pcfg,
    tokens: &[TaggedToken],
    sym: usize,
    i: usize,
    j: usize,
) -> Node {
    let cell = chart[span_index(i, j)][sym].expect("backpointer to a filled cell");
    let label = String::from(grammar.symbol(sym));
    let kind = match cell.back {
        Back::Lexical(r) => NodeKind::Leaf {
            token: tokens[i].clone(),
            terminal: grammar.lexical_rules()[r].terminal.clone(),
        },
        Back::Binary { rule, split } => {
            let rule = &grammar.binary_rules()[rule];
            NodeKind::Branch(
                Box::new(build(chart, span_index, grammar, tokens, rule.left, i, split)),
                Box::new(build(chart, span_index, grammar, tokens, rule.right, split, j)),
            )
        }
    };
    Node {
        label,
        start: i,
        end: j,
        kind,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::LoadOptions;

    fn toks(words: &[(&str, &str)]) -> Vec<TaggedToken> {
        words.iter().map(|(w, t)| TaggedToken::new(*w, *t)).collect()
    }

    #[test]
    fn single_parse_probability() {
        let g = Pcfg::parse(
            "S -> NP VP 1.0\nNP -> 'a' 0.5\nNP -> 'b' 0.5\nVP -> 'runs' 1.0",
            LoadOptions::default(),
        )
        .unwrap();
        let t = cky_parse(&toks(&[("a", "DT"), ("runs", "VBZ")]), &g).unwrap();
        assert!((t.probability() - 0.5).abs() < 1e-15);
        assert_eq!(t.root.label, "S");
        assert_eq!(t.tokens().len(), 2);
    }

    #[test]
    fn uncovered_token_gives_none() {
        let g = Pcfg::parse(
            "S -> NP VP 1.0\nNP -> 'a' 1.0\nVP -> 'runs' 1.0",
            LoadOptions::default(),
        )
        .unwrap();
        assert!(cky_parse(&toks(&[("a", "DT"), ("walks", "VBZ")]), &g).is_none());
        assert!(cky_parse(&[], &g).is_none());
    }

    #[test]
    fn picks_more_probable_attachment() {
        let g = Pcfg::parse(
            "S -> A B 0.6\nS -> B A 0.4\nA -> B B 0.5\nA -> 'x' 0.5\nB -> 'x' 1.0",
            LoadOptions::default(),
        )
        .unwrap();
        let sent = toks(&[("x", "X"), ("x", "X"), ("x", "X")]);
        let t = cky_parse(&sent, &g).unwrap();
        // S -> A B with A -> B B over the first two tokens: 0.6 · 0.5 = 0.30.
        // S -> B A with A -> B B over the last two: 0.4 · 0.5 = 0.20.
        assert!((t.probability() - 0.30).abs() < 1e-12);
        let (a, _) = t.root.children().unwrap();
        assert_eq!((a.label.as_str(), a.start, a.end), ("A", 0, 2));
        assert!((t.root.log_prob_under(&g).unwrap() - t.log_prob).abs() < 1e-12);
    }

    #[test]
    fn ties_prefer_lower_split() {
        let g = Pcfg::parse("S -> S S 0.5\nS -> 'x' 0.5", LoadOptions::default()).unwrap();
        let sent = toks(&[("x", "X"), ("x", "X"), ("x", "X")]);
        let t = cky_parse(&sent, &g).unwrap();
        let (l, _) = t.root.children().unwrap();
        assert_eq!(l.end, 1);
    }
}
