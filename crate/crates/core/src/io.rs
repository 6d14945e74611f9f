//! Edge-list and GML reading and writing.
//!
//! Edge lists are whitespace separated, one `u v [w]` edge per line, with `#`
//! starting a comment. A line holding a single label declares a node, which
//! lets isolated nodes and index order survive a round trip.
//!
//! The GML reader understands the subset used by the usual benchmark files:
//! `graph [ node [ id label value ] edge [ source target weight ] ]`.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::graph::{GraphBuilder, GraphError, NodeLabels, WeightedGraph};

/// Parses an edge list. Missing weights default to 1, duplicates are summed.
pub fn load_edgelist<R: Read>(mut reader: R) -> Result<WeightedGraph, GraphError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_edgelist(&text)
}

pub fn parse_edgelist(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [node] => {
                b.add_node(node);
            }
            [u, v] => add(&mut b, u, v, 1.0, line)?,
            [u, v, w] => {
                let w: f64 = w.parse().map_err(|_| GraphError::Parse {
                    line,
                    message: format!("invalid weight {w:?}"),
                })?;
                add(&mut b, u, v, w, line)?;
            }
            _ => {
                return Err(GraphError::Parse {
                    line,
                    message: format!("expected `u v [w]`, found {} fields", tokens.len()),
                })
            }
        }
    }
    Ok(b.build())
}

fn add(b: &mut GraphBuilder, u: &str, v: &str, w: f64, line: usize) -> Result<(), GraphError> {
    if !(w.is_finite() && w > 0.0) {
        return Err(GraphError::Weight { line, weight: w });
    }
    b.add_labeled_edge(u, v, w)?;
    Ok(())
}

fn check_token(label: &str) -> Result<(), GraphError> {
    if label.is_empty() || label.contains(char::is_whitespace) || label.contains('#') {
        return Err(GraphError::Export(format!(
            "label {label:?} cannot be written to an edge list"
        )));
    }
    Ok(())
}

/// Writes every node (ascending index) then every edge `u v w`.
pub fn write_edgelist<W: Write>(g: &WeightedGraph, mut out: W) -> Result<(), GraphError> {
    let mut s = String::new();
    for label in g.labels() {
        check_token(label)?;
        writeln!(s, "{label}").unwrap();
    }
    for (u, v, w) in g.edges() {
        writeln!(s, "{} {} {}", g.label(u), g.label(v), w).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

pub fn edgelist_string(g: &WeightedGraph) -> Result<String, GraphError> {
    let mut buf = Vec::new();
    write_edgelist(g, &mut buf)?;
    Ok(String::from_utf8(buf).expect("labels are utf-8"))
}

#[derive(Debug, Clone, PartialEq)]
enum GmlValue {
    Number(f64, String),
    Str(String),
    List(Vec<(String, GmlValue, usize)>),
}

impl GmlValue {
    fn as_text(&self) -> Option<String> {
        match self {
            GmlValue::Number(_, raw) => Some(raw.clone()),
            GmlValue::Str(s) => Some(s.clone()),
            GmlValue::List(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Str(String),
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, GraphError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '[' => {
                out.push((Token::Open, line));
                chars.next();
            }
            ']' => {
                out.push((Token::Close, line));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => {
                            return Err(GraphError::Parse {
                                line: start,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                out.push((Token::Str(s), start));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '[' || c == ']' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((Token::Word(s), line));
            }
        }
    }
    Ok(out)
}

struct GmlParser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl GmlParser {
    fn last_line(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.1)
    }

    /// Key/value pairs until a closing bracket (nested) or end of input (top).
    fn parse_list(&mut self, nested: bool, open_line: usize) -> Result<Vec<(String, GmlValue, usize)>, GraphError> {
        let mut items = Vec::new();
        loop {
            let Some((tok, line)) = self.tokens.get(self.pos).cloned() else {
                if nested {
                    return Err(GraphError::Parse {
                        line: open_line,
                        message: "unbalanced brackets: `[` is never closed".into(),
                    });
                }
                return Ok(items);
            };
            self.pos += 1;
            let key = match tok {
                Token::Close if nested => return Ok(items),
                Token::Close => {
                    return Err(GraphError::Parse {
                        line,
                        message: "unbalanced brackets: unexpected `]`".into(),
                    })
                }
                Token::Word(w) if w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') => w,
                other => {
                    return Err(GraphError::Parse {
                        line,
                        message: format!("expected a key, found {other:?}"),
                    })
                }
            };
            let Some((tok, vline)) = self.tokens.get(self.pos).cloned() else {
                return Err(GraphError::Parse {
                    line: self.last_line(),
                    message: format!("key `{key}` has no value"),
                });
            };
            self.pos += 1;
            let value = match tok {
                Token::Open => GmlValue::List(self.parse_list(true, vline)?),
                Token::Str(s) => GmlValue::Str(s),
                Token::Word(w) => match w.parse::<f64>() {
                    Ok(x) => GmlValue::Number(x, w),
                    Err(_) => {
                        return Err(GraphError::Parse {
                            line: vline,
                            message: format!("invalid value {w:?} for key `{key}`"),
                        })
                    }
                },
                Token::Close => {
                    return Err(GraphError::Parse {
                        line: vline,
                        message: format!("key `{key}` has no value"),
                    })
                }
            };
            items.push((key, value, line));
        }
    }
}

fn get<'a>(items: &'a [(String, GmlValue, usize)], key: &str) -> Option<&'a GmlValue> {
    items.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v)
}

fn int_id(v: Option<&GmlValue>, what: &str, line: usize) -> Result<i64, GraphError> {
    match v {
        Some(GmlValue::Number(x, _)) if x.fract() == 0.0 => Ok(*x as i64),
        Some(_) => Err(GraphError::Parse {
            line,
            message: format!("`{what}` must be an integer"),
        }),
        None => Err(GraphError::Parse {
            line,
            message: format!("missing `{what}`"),
        }),
    }
}

/// Parses a GML graph. Returns ground-truth labels when nodes carry `value`.
pub fn load_gml<R: Read>(mut reader: R) -> Result<(WeightedGraph, Option<NodeLabels>), GraphError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_gml(&text)
}

pub fn parse_gml(text: &str) -> Result<(WeightedGraph, Option<NodeLabels>), GraphError> {
    let mut parser = GmlParser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let top = parser.parse_list(false, 1)?;
    let graph = top
        .iter()
        .find_map(|(k, v, _)| match (k.as_str(), v) {
            ("graph", GmlValue::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            message: "no `graph [ ... ]` block".into(),
        })?;

    if let Some(GmlValue::Number(d, _)) = get(graph, "directed") {
        if *d != 0.0 {
            log::warn!("directed GML input read as undirected");
        }
    }

    let mut b = GraphBuilder::new();
    let mut ids = std::collections::HashMap::new();
    let mut values: Vec<Option<String>> = Vec::new();
    for (key, value, line) in graph {
        if key != "node" {
            continue;
        }
        let GmlValue::List(attrs) = value else {
            return Err(GraphError::Parse {
                line: *line,
                message: "`node` must be a list".into(),
            });
        };
        let id = int_id(get(attrs, "id"), "id", *line)?;
        let label = get(attrs, "label")
            .and_then(GmlValue::as_text)
            .unwrap_or_else(|| id.to_string());
        if ids.contains_key(&id) {
            return Err(GraphError::Parse {
                line: *line,
                message: format!("duplicate node id {id}"),
            });
        }
        let fresh = b.node_count();
        let idx = b.add_node(&label);
        if idx != fresh {
            return Err(GraphError::Parse {
                line: *line,
                message: format!("duplicate node label {label:?}"),
            });
        }
        ids.insert(id, idx);
        values.push(get(attrs, "value").and_then(GmlValue::as_text));
    }

    for (key, value, line) in graph {
        if key != "edge" {
            continue;
        }
        let GmlValue::List(attrs) = value else {
            return Err(GraphError::Parse {
                line: *line,
                message: "`edge` must be a list".into(),
            });
        };
        let endpoint = |name: &str| -> Result<usize, GraphError> {
            let id = int_id(get(attrs, name), name, *line)?;
            ids.get(&id).copied().ok_or_else(|| GraphError::Parse {
                line: *line,
                message: format!("edge {name} {id} refers to an unknown node"),
            })
        };
        let u = endpoint("source")?;
        let v = endpoint("target")?;
        let w = match get(attrs, "weight") {
            None => 1.0,
            Some(GmlValue::Number(x, _)) => *x,
            Some(_) => {
                return Err(GraphError::Parse {
                    line: *line,
                    message: "`weight` must be numeric".into(),
                })
            }
        };
        if !(w.is_finite() && w > 0.0) {
            return Err(GraphError::Weight { line: *line, weight: w });
        }
        b.add_edge(u, v, w)?;
    }

    let labels = if values.iter().any(Option::is_some) {
        let mut raw = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => raw.push(v),
                None => {
                    return Err(GraphError::Parse {
                        line: 0,
                        message: format!("node {} has no `value` while others do", i),
                    })
                }
            }
        }
        Some(NodeLabels::from_values(&raw))
    } else {
        None
    };
    Ok((b.build(), labels))
}

fn escape_gml(s: &str) -> String {
    s.replace('"', "&quot;")
}

/// Writes a GML document; node ids are dense indices.
pub fn write_gml<W: Write>(
    g: &WeightedGraph,
    labels: Option<&NodeLabels>,
    mut out: W,
) -> Result<(), GraphError> {
    if let Some(l) = labels {
        if l.len() != g.node_count() {
            return Err(GraphError::Export(format!(
                "{} labels for {} nodes",
                l.len(),
                g.node_count()
            )));
        }
    }
    let mut s = String::from("graph [\n");
    for (i, label) in g.labels().iter().enumerate() {
        write!(s, "  node [\n    id {i}\n    label \"{}\"\n", escape_gml(label)).unwrap();
        if let Some(l) = labels {
            let name = &l.class_names()[l.class_of(i)];
            writeln!(s, "    value \"{}\"", escape_gml(name)).unwrap();
        }
        s.push_str("  ]\n");
    }
    for (u, v, w) in g.edges() {
        writeln!(s, "  edge [\n    source {u}\n    target {v}\n    weight {w}\n  ]").unwrap();
    }
    s.push_str("]\n");
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Loads a graph file, choosing the format by extension (`.gml` or edge list).
pub fn load_graph_file(path: &Path) -> Result<(WeightedGraph, Option<NodeLabels>), GraphError> {
    let text = fs::read_to_string(path)?;
    let is_gml = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("gml"));
    if is_gml {
        parse_gml(&text)
    } else {
        Ok((parse_edgelist(&text)?, None))
    }
}

/// Reads `node_label,community_id` rows (header required). Community ids are
/// arbitrary strings.
pub fn parse_partition_csv(text: &str) -> Result<Vec<(String, String)>, GraphError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(&e))?.clone();
    if header.len() < 2 {
        return Err(GraphError::Parse {
            line: 1,
            message: "expected a `node_label,community_id` header".into(),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        rows.push((record[0].to_owned(), record[1].to_owned()));
    }
    Ok(rows)
}

/// Writes `node_label,community_id` rows in ascending node index.
pub fn partition_csv_string(g: &WeightedGraph, p: &crate::community::Partition) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["node_label", "community_id"]).expect("in-memory write");
    for (v, c) in p.assignment().iter().enumerate() {
        w.write_record([g.label(v), &c.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn csv_error(e: &csv::Error) -> GraphError {
    GraphError::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        message: e.to_string(),
    }
}
