//! Result trees and their text, JSON and LaTeX renderings.
//!
//! Commands build a [`Node`] tree once; the three emitters walk the same
//! tree, so every rendering shows the same canonical expressions.

use jetvar::{DiffForm, Expr};
use serde_json::{Map, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Expr(Expr),
    Form(DiffForm),
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    List(Vec<Node>),
    Map(BTreeMap<String, Node>),
    Null,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl Node {
    pub fn map<K: Into<String>>(items: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(items.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    /// `{"1": e₁, "2": e₂, …}`.
    pub fn indexed(items: &[Expr]) -> Node {
        Node::map(items.iter().enumerate().map(|(k, e)| ((k + 1).to_string(), Node::Expr(e.clone()))))
    }

    pub fn expr(e: &Expr) -> Node {
        Node::Expr(e.clone())
    }

    pub fn to_json(&self) -> Value {
        match self {
            Node::Expr(e) => Value::String(e.to_string()),
            Node::Form(f) => Value::Object(
                f.terms().map(|(b, c)| (b.to_string(), Value::String(c.to_string()))).collect::<Map<_, _>>(),
            ),
            Node::Bool(b) => Value::Bool(*b),
            Node::Int(i) => Value::from(*i),
            Node::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Node::Str(s) => Value::String(s.clone()),
            Node::List(v) => Value::Array(v.iter().map(Node::to_json).collect()),
            Node::Map(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
            Node::Null => Value::Null,
        }
    }

    fn leaves(&self, path: &mut Vec<String>, out: &mut Vec<(String, Leaf)>) {
        match self {
            Node::Map(m) => {
                for (k, v) in m {
                    path.push(k.clone());
                    v.leaves(path, out);
                    path.pop();
                }
            }
            Node::List(items) => {
                for (k, v) in items.iter().enumerate() {
                    path.push(k.to_string());
                    v.leaves(path, out);
                    path.pop();
                }
            }
            other => out.push((path.join("."), Leaf(other.clone()))),
        }
    }
}

struct Leaf(Node);

impl Leaf {
    fn text(&self) -> String {
        match &self.0 {
            Node::Expr(e) => e.to_string(),
            Node::Form(f) => f.to_string(),
            Node::Bool(b) => b.to_string(),
            Node::Int(i) => i.to_string(),
            Node::Float(x) => format!("{x:e}"),
            Node::Str(s) => s.clone(),
            Node::Null => "none".into(),
            Node::List(_) | Node::Map(_) => unreachable!("flattened"),
        }
    }

    fn latex(&self) -> String {
        match &self.0 {
            Node::Expr(e) => e.to_latex(),
            Node::Form(f) => f.to_latex(),
            Node::Str(s) => format!("\\text{{{}}}", s.replace('_', "\\_")),
            Node::Null => "\\text{none}".into(),
            Node::Bool(b) => format!("\\text{{{b}}}"),
            _ => self.text(),
        }
    }
}

/// The full document: model context, command result and parse warnings.
pub struct Document {
    pub context: Node,
    pub result: Node,
    pub warnings: Vec<String>,
}

impl Document {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut top = Map::new();
                top.insert("context".into(), self.context.to_json());
                top.insert("result".into(), self.result.to_json());
                top.insert("warnings".into(), Value::Array(self.warnings.iter().cloned().map(Value::String).collect()));
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut leaves = Vec::new();
                self.result.leaves(&mut Vec::new(), &mut leaves);
                let mut s = String::new();
                for w in &self.warnings {
                    s.push_str(&format!("warning: {w}\n"));
                }
                for (k, v) in leaves {
                    s.push_str(&format!("{k} = {}\n", v.text()));
                }
                s
            }
            Format::Latex => {
                let mut leaves = Vec::new();
                self.result.leaves(&mut Vec::new(), &mut leaves);
                let mut s = String::from("\\begin{align*}\n");
                for (k, v) in leaves {
                    s.push_str(&format!("\\mathrm{{{}}} &= {} \\\\\n", k.replace('_', "\\_"), v.latex()));
                }
                s.push_str("\\end{align*}\n");
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetvar::symbolic::qr;

    #[test]
    fn json_is_sorted_and_stable() {
        let e = Expr::z(1, &[1]).pow(2).scale(&qr(1, 2));
        let doc = Document {
            context: Node::map([("n", Node::Int(1))]),
            result: Node::map([("b", Node::Bool(true)), ("a", Node::expr(&e))]),
            warnings: vec![],
        };
        let s = doc.render(Format::Json);
        assert_eq!(s, doc.render(Format::Json));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("\"1/2*y1_1^2\""));
        assert_eq!(doc.render(Format::Text), "a = 1/2*y1_1^2\nb = true\n");
    }
}
