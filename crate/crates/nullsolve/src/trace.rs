//! Path traces: one `TRACE` line per step, and a replay that re-derives every
//! step from the pairing function.
//!
//! ```text
//! TRACE step 0: at leaf w via unmatched -> term (1,1,1)
//! TRACE step 1: at term (1,1,1) via leaf w -> vector (1,1)
//! TRACE step 4: at vector (1,0) via term (1,1,2) -> unmatched
//! TRACE path w → (1,1,1) → (1,1) → (1,1,2) → (1,0)
//! ```

use nullsolve_core::ppa::{mate, Node};
use nullsolve_core::{GeneralFormPoly, TermTuple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("trace line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("step {step}: pairing gives {expected}, trace says {found}")]
    Mismatch { step: u64, expected: String, found: String },
    #[error("step {step} does not continue from step {}", step - 1)]
    Broken { step: u64 },
    #[error("trace contains no steps")]
    Empty,
}

fn labelled(node: &Node, m: usize) -> String {
    format!("{} {}", node.kind(), node.display(m))
}

fn target(node: Option<&Node>, m: usize) -> String {
    node.map_or_else(|| "unmatched".to_string(), |n| labelled(n, m))
}

/// `TRACE step k: at <node> via <node|unmatched> -> <node|unmatched>`.
pub fn step_line(step: u64, at: &Node, via: Option<&Node>, to: Option<&Node>, m: usize) -> String {
    format!("TRACE step {step}: at {} via {} -> {}", labelled(at, m), target(via, m), target(to, m))
}

/// `TRACE path w → … → s`.
pub fn path_line(nodes: &[Node], m: usize) -> String {
    let shown: Vec<String> = nodes.iter().map(|n| n.display(m)).collect();
    format!("TRACE path {}", shown.join(" → "))
}

fn parse_node(kind: &str, text: &str, m: usize) -> Result<Node, String> {
    let numbers = || -> Result<Vec<usize>, String> {
        text.strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| format!("`{text}` is not parenthesised"))?
            .split(',')
            .map(|s| s.parse().map_err(|_| format!("`{s}` is not a number")))
            .collect()
    };
    match kind {
        "leaf" if text == "w" => Ok(Node::Leaf),
        "vector" => {
            let coords = numbers()?;
            if coords.len() != m || coords.iter().any(|&c| c > 1) {
                return Err(format!("`{text}` is not a 0/1 vector of length {m}"));
            }
            Ok(Node::Vector(coords.iter().rev().fold(0, |acc, &c| acc << 1 | c as u64)))
        }
        "term" => {
            let parts = numbers()?;
            let (&block, choice) = parts.split_first().ok_or("empty tuple")?;
            TermTuple::from_one_based(block, choice)
                .map(Node::Term)
                .map_err(|e| e.to_string())
        }
        _ => Err(format!("unknown node `{kind} {text}`")),
    }
}

fn parse_target(words: &[&str], m: usize) -> Result<Option<Node>, String> {
    match words {
        ["unmatched"] => Ok(None),
        [kind, text] => parse_node(kind, text, m).map(Some),
        _ => Err("expected `<kind> <node>` or `unmatched`".into()),
    }
}

struct Step {
    number: u64,
    at: Node,
    via: Option<Node>,
    to: Option<Node>,
}

fn parse_step(line: &str, m: usize) -> Result<Step, String> {
    let rest = line.strip_prefix("TRACE step ").ok_or("not a step line")?;
    let (number, rest) = rest.split_once(": at ").ok_or("missing `: at`")?;
    let number = number.parse().map_err(|_| format!("`{number}` is not a step number"))?;
    let (at, rest) = rest.split_once(" via ").ok_or("missing `via`")?;
    let (via, to) = rest.split_once(" -> ").ok_or("missing `->`")?;
    let at_words: Vec<&str> = at.split_whitespace().collect();
    let at = match parse_target(&at_words, m)? {
        Some(node) => node,
        None => return Err("a step cannot start at `unmatched`".into()),
    };
    let via = parse_target(&via.split_whitespace().collect::<Vec<_>>(), m)?;
    let to = parse_target(&to.split_whitespace().collect::<Vec<_>>(), m)?;
    Ok(Step { number, at, via, to })
}

/// Checks every `TRACE step` line of `text` against the pairing function and
/// that consecutive steps chain. Returns the number of steps verified.
pub fn replay(inst: &GeneralFormPoly, text: &str) -> Result<u64, ReplayError> {
    let m = inst.m();
    let mut previous: Option<Step> = None;
    let mut count = 0;
    for (index, line) in text.lines().enumerate() {
        if !line.starts_with("TRACE step ") {
            continue;
        }
        let step = parse_step(line, m).map_err(|message| ReplayError::Malformed { line: index + 1, message })?;
        let expected = match &step.via {
            Some(via) => mate(inst, &step.at, via),
            // The walk opens on the leaf's unmatched edge.
            None => match &step.to {
                Some(to) => mate(inst, &step.at, to).map(|mate| match mate {
                    None => step.to.clone(),
                    Some(other) => Some(other),
                }),
                None => Ok(None),
            },
        }
        .map_err(|e| ReplayError::Malformed { line: index + 1, message: e.to_string() })?;
        if expected != step.to {
            return Err(ReplayError::Mismatch {
                step: step.number,
                expected: target(expected.as_ref(), m),
                found: target(step.to.as_ref(), m),
            });
        }
        if let Some(prev) = &previous {
            let chained = step.number == prev.number + 1
                && prev.to.as_ref() == Some(&step.at)
                && step.via.as_ref() == Some(&prev.at);
            if !chained {
                return Err(ReplayError::Broken { step: step.number });
            }
        }
        previous = Some(step);
        count += 1;
    }
    if count == 0 {
        return Err(ReplayError::Empty);
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_genpoly;

    fn worked() -> GeneralFormPoly {
        parse_genpoly("genpoly 2 1\nblock 2\nx1\nx2 + 1\nfullpairs:\nleftover: (1,1,1)\n").unwrap()
    }

    const TRACE: &str = "\
TRACE step 0: at leaf w via unmatched -> term (1,1,1)
TRACE step 1: at term (1,1,1) via leaf w -> vector (1,1)
TRACE step 2: at vector (1,1) via term (1,1,1) -> term (1,1,2)
TRACE step 3: at term (1,1,2) via vector (1,1) -> vector (1,0)
TRACE step 4: at vector (1,0) via term (1,1,2) -> unmatched
";

    #[test]
    fn replays_worked_example() {
        assert_eq!(replay(&worked(), TRACE), Ok(5));
    }

    #[test]
    fn detects_tampering() {
        let bad = TRACE.replace("-> vector (1,0)", "-> vector (0,0)");
        assert!(matches!(replay(&worked(), &bad), Err(ReplayError::Mismatch { step: 3, .. })));
        let gap: String = TRACE.lines().filter(|l| !l.contains("step 2")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(replay(&worked(), &gap), Err(ReplayError::Broken { step: 3 })));
        assert_eq!(replay(&worked(), "RESULT nothing\n"), Err(ReplayError::Empty));
    }

    #[test]
    fn path_line_format() {
        let nodes = [Node::Leaf, Node::Vector(0b01)];
        assert_eq!(path_line(&nodes, 2), "TRACE path w → (1,0)");
        assert_eq!(
            step_line(7, &Node::Vector(0b01), None, None, 2),
            "TRACE step 7: at vector (1,0) via unmatched -> unmatched"
        );
    }
}
