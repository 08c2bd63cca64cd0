//! Output formats: pretty JSON, CSV for tabular commands, and plain text.

use clap::ValueEnum;
use hyperosc_core::census::CSV_HEADER;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Text,
}

/// Row layouts of the commands that produce lists.
#[derive(Debug, Clone, Copy)]
pub enum Table {
    Exceptional,
    Catalog,
    Family,
    Census,
}

/// (header, JSON pointer into a row)
fn columns(table: Table) -> Vec<(String, String)> {
    fn vec4(name: &'static str) -> impl Iterator<Item = (String, String)> {
        (0..4).map(move |i| (format!("{name}{i}"), format!("/{name}/{i}")))
    }
    let plain = |name: &str, ptr: &str| (name.to_string(), ptr.to_string());
    match table {
        Table::Exceptional => vec4("alpha")
            .chain([plain("a", "/a"), plain("k", "/k"), plain("expr", "/pullback/expr")])
            .collect(),
        Table::Catalog => vec![
            plain("name", "/name"),
            plain("self", "/self"),
            plain("expr", "/pullback/expr"),
        ],
        Table::Family => std::iter::once(plain("n", "/n"))
            .chain(vec4("gamma"))
            .chain(vec4("eps"))
            .collect(),
        Table::Census => CSV_HEADER
            .iter()
            .map(|h| {
                let split = h.len() - 1;
                match h.as_bytes()[split] {
                    b'0'..=b'3' => (h.to_string(), format!("/{}/{}", &h[..split], &h[split..])),
                    _ => (h.to_string(), format!("/{h}")),
                }
            })
            .collect(),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn rows(value: &Value, table: Table) -> (Vec<String>, Vec<Vec<String>>) {
    let cols = columns(table);
    let header = cols.iter().map(|(h, _)| h.clone()).collect();
    let body = value
        .as_array()
        .map(|items| {
            items
                .iter()
                .map(|row| {
                    cols.iter()
                        .map(|(_, ptr)| row.pointer(ptr).map(scalar).unwrap_or_default())
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default();
    (header, body)
}

fn text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(m) if m.contains_key("expr") => {
                        out.push_str(&format!("{pad}{k}: {}\n", scalar(&m["expr"])));
                    }
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(v, indent + 1, out);
                    }
                    Value::Array(a) if !a.iter().all(is_flat) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(m) if m.contains_key("expr") => {
                        out.push_str(&format!("{pad}- {}\n", scalar(&m["expr"])));
                    }
                    _ if !is_flat(item) => {
                        out.push_str(&format!("{pad}-\n"));
                        text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", inline(item))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

/// Scalars and arrays of scalars print on one line.
fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(a) => format!("({})", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Null => "-".into(),
        other => scalar(other),
    }
}

pub fn render<T: Serialize>(output: Output, value: &T, table: Option<Table>) -> Result<String, String> {
    let value = serde_json::to_value(value).map_err(|e| e.to_string())?;
    match (output, table) {
        (Output::Json, _) => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        (Output::Csv, Some(t)) => {
            let (header, body) = rows(&value, t);
            let mut s = header.join(",");
            s.push('\n');
            for r in body {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            Ok(s)
        }
        (Output::Csv, None) => Err("csv output is only available for list commands".into()),
        (Output::Text, Some(t)) => {
            let (header, body) = rows(&value, t);
            let widths: Vec<usize> = (0..header.len())
                .map(|i| {
                    body.iter()
                        .map(|r| r[i].len())
                        .chain([header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                let mut l = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ");
                l.truncate(l.trim_end().len());
                l.push('\n');
                l
            };
            let mut s = line(&header);
            for r in &body {
                s.push_str(&line(r));
            }
            Ok(s)
        }
        (Output::Text, None) => {
            let mut s = String::new();
            text(&value, 0, &mut s);
            Ok(s)
        }
    }
}

pub fn print<T: Serialize>(output: Output, value: &T, table: Option<Table>) -> Result<(), String> {
    print!("{}", render(output, value, table)?);
    Ok(())
}
