//! Reader for bracketed Penn-Treebank-style trees.

use crate::error::{Error, Result};
use crate::tree::{ParseTree, RawNode};

/// Parse a single bracketed s-expression like
/// `(S (NP (NN Malaria)) (VP (VBZ causes) ...))` into a [`ParseTree`].
///
/// A preterminal — a constituent whose only item is a bare token — becomes a
/// leaf labeled with the POS tag. Bare tokens sitting next to other items
/// (as in `(NP the dog)`) become leaves labeled with the token itself, which
/// keeps serialization round-trips exact for both conventions.
pub fn parse_ptb(text: &str) -> Result<ParseTree> {
    let mut parser = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    let raw = parser.parse_node()?;
    parser.skip_ws();
    if parser.pos != parser.input.len() {
        return Err(err_at(parser.pos, "trailing content after tree"));
    }
    ParseTree::build(raw)
}

fn err_at(offset: usize, msg: impl Into<String>) -> Error {
    Error::TreeSyntax {
        offset,
        msg: msg.into(),
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

enum Item {
    Node(RawNode),
    Word(String),
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn atom(&mut self) -> String {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b'(' || b == b')' {
                break;
            }
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.input[start..self.pos]).into_owned()
    }

    fn parse_node(&mut self) -> Result<RawNode> {
        match self.peek() {
            Some(b'(') => {}
            Some(_) => return Err(err_at(self.pos, "expected '('")),
            None => return Err(err_at(self.pos, "unexpected end of input")),
        }
        self.pos += 1;
        self.skip_ws();
        let label = self.atom();
        if label.is_empty() {
            return Err(err_at(self.pos, "empty constituent label"));
        }
        let mut items: Vec<Item> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(err_at(self.pos, "unbalanced parentheses")),
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(b'(') => items.push(Item::Node(self.parse_node()?)),
                Some(_) => items.push(Item::Word(self.atom())),
            }
        }
        if items.is_empty() {
            return Err(err_at(self.pos, format!("empty constituent ({label})")));
        }
        if items.len() == 1 {
            if let Item::Word(w) = &items[0] {
                return Ok(RawNode::leaf(label, w.clone()));
            }
        }
        let children = items
            .into_iter()
            .map(|item| match item {
                Item::Node(n) => n,
                Item::Word(w) => RawNode::leaf(w.clone(), w),
            })
            .collect();
        Ok(RawNode::internal(label, children))
    }
}
