use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::cky::{Node, ParseTree};

/// A sentence opening with a one-word connective phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectiveMatch {
    /// Lower-cased connective word.
    pub connective: String,
    /// Token span of the clause that follows the connective.
    pub remainder: Range<usize>,
}

/// Binarization helpers such as `@S` or `S|<NP-VP>` are not constituents of
/// their own; their children belong to the parent.
fn is_helper(label: &str) -> bool {
    label.starts_with('@') || label.contains('|')
}

fn constituents<'a>(node: &'a Node, out: &mut Vec<&'a Node>) {
    match node.children() {
        Some((a, b)) => {
            for child in [a, b] {
                if is_helper(&child.label) {
                    constituents(child, out);
                } else {
                    out.push(child);
                }
            }
        }
        None => out.push(node),
    }
}

fn is_punctuation(node: &Node) -> bool {
    node.leaf_token().is_some_and(|t| t.is_punctuation())
}

/// Matches a sentence whose first top-level constituent is an ADJP or ADVP
/// covering one JJ or RB token, followed (punctuation aside) directly by an
/// `S` made of exactly an NP and a VP.
pub fn matches_connective_pattern(tree: &ParseTree) -> Option<ConnectiveMatch> {
    let mut top = Vec::new();
    constituents(&tree.root, &mut top);
    let (first, rest) = top.split_first()?;

    if !matches!(first.label.as_str(), "ADJP" | "ADVP") || first.start != 0 || first.end != 1 {
        return None;
    }
    let token = first.leaf_token()?;
    if !matches!(token.tag.as_str(), "JJ" | "RB") {
        return None;
    }

    let clause = rest.iter().find(|n| !is_punctuation(n))?;
    if clause.label != "S" {
        return None;
    }
    let mut parts = Vec::new();
    constituents(clause, &mut parts);
    let labels: Vec<&str> = parts
        .iter()
        .filter(|n| !is_punctuation(n))
        .map(|n| n.label.as_str())
        .collect();
    if labels != ["NP", "VP"] {
        return None;
    }

    Some(ConnectiveMatch {
        connective: token.word.to_lowercase(),
        remainder: clause.start..tree.root.end,
    })
}
