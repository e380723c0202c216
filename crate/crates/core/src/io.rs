//! JSON instance files.
//!
//! A graph file is `{"n": 3, "edges": [[0, 1, "0.5"], ...]}`; a game file
//! adds `"beliefs": ["0.25", ...]`. Weights and beliefs are strings so they
//! round-trip exactly. Beliefs may also be written as `"num/den"`.

use rust_decimal::Decimal;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::OpinionGame;
use crate::graph::SocialGraph;
use crate::rational::{
    decimal_to_rational, format_rational, parse_decimal, parse_rational, rational_to_decimal,
    Rational,
};

fn schema(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("{path}: {msg}"))
}

fn index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn decimal(v: &Value, path: &str) -> Result<Decimal> {
    let s = v
        .as_str()
        .ok_or_else(|| schema(path, "expected a decimal string"))?;
    s.trim()
        .parse::<Decimal>()
        .map_err(|_| schema(path, format!("{s:?} is not a decimal number")))
}

fn graph_from_value(root: &Value) -> Result<SocialGraph> {
    let obj = root
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    let n = index(obj.get("n").ok_or_else(|| schema("n", "missing"))?, "n")?;
    let edges = obj
        .get("edges")
        .ok_or_else(|| schema("edges", "missing"))?
        .as_array()
        .ok_or_else(|| schema("edges", "expected an array"))?;
    let mut parsed = Vec::with_capacity(edges.len());
    for (k, e) in edges.iter().enumerate() {
        let path = format!("edges[{k}]");
        let triple = e
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| schema(&path, "expected [i, j, \"weight\"]"))?;
        parsed.push((
            index(&triple[0], &format!("{path}[0]"))?,
            index(&triple[1], &format!("{path}[1]"))?,
            decimal(&triple[2], &format!("{path}[2]"))?,
        ));
    }
    SocialGraph::new(n, &parsed)
}

/// Parses a graph file.
pub fn parse_graph(text: &str) -> Result<SocialGraph> {
    let root: Value = serde_json::from_str(text).map_err(|e| schema("$", e))?;
    graph_from_value(&root)
}

/// Parses a game file.
pub fn parse_game(text: &str) -> Result<OpinionGame> {
    let root: Value = serde_json::from_str(text).map_err(|e| schema("$", e))?;
    let graph = graph_from_value(&root)?;
    let beliefs = root
        .get("beliefs")
        .ok_or_else(|| schema("beliefs", "missing"))?
        .as_array()
        .ok_or_else(|| schema("beliefs", "expected an array"))?;
    let mut parsed = Vec::with_capacity(beliefs.len());
    for (i, b) in beliefs.iter().enumerate() {
        let path = format!("beliefs[{i}]");
        let s = b
            .as_str()
            .ok_or_else(|| schema(&path, "expected a decimal or \"num/den\" string"))?;
        parsed.push(parse_belief(s).map_err(|e| match e {
            Error::InvalidGame(m) => Error::InvalidGame(format!("{path}: {m}")),
            _ => schema(
                &path,
                format!("{s:?} is not a decimal or \"num/den\" number"),
            ),
        })?);
    }
    OpinionGame::with_rational_beliefs(graph, &parsed)
}

/// A belief written as a decimal or `"num/den"`, checked to lie in `[0, 1]`.
pub fn parse_belief(s: &str) -> Result<Rational> {
    let r = if s.contains('/') {
        parse_rational(s)?
    } else {
        decimal_to_rational(parse_decimal(s)?)
    };
    if r < Rational::from_integer(0) || r > Rational::from_integer(1) {
        return Err(Error::InvalidGame(format!("{s} is outside [0, 1]")));
    }
    Ok(r)
}

fn weight_string(graph: &SocialGraph, scaled: i64) -> String {
    graph.unscale_decimal(scaled).normalize().to_string()
}

/// Beliefs with a terminating expansion are written as decimals.
fn belief_string(b: &Rational) -> String {
    match rational_to_decimal(b) {
        Some(d) => d.to_string(),
        None => format_rational(b),
    }
}

pub fn graph_to_value(graph: &SocialGraph) -> Value {
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .map(|e| json!([e.u, e.v, weight_string(graph, e.weight)]))
        .collect();
    json!({ "n": graph.n(), "edges": edges })
}

pub fn game_to_value(game: &OpinionGame) -> Value {
    let mut v = graph_to_value(game.graph());
    let beliefs: Vec<String> = game.beliefs().iter().map(belief_string).collect();
    v["beliefs"] = json!(beliefs);
    v
}

pub fn write_graph(graph: &SocialGraph) -> String {
    serde_json::to_string_pretty(&graph_to_value(graph)).expect("json values serialize")
}

pub fn write_game(game: &OpinionGame) -> String {
    serde_json::to_string_pretty(&game_to_value(game)).expect("json values serialize")
}

/// A rational as a `"num/den"` JSON string.
pub fn rational_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// A probability or other real with 17 significant digits.
pub fn real_string(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn real_value(x: f64) -> Value {
    Value::String(real_string(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3: &str = r#"{"n": 3, "edges": [[0, 1, "1"], [0, 2, "1"], [1, 2, "0.25"]],
        "beliefs": ["0", "0.5", "1"]}"#;

    #[test]
    fn reads_a_triangle() {
        let game = parse_game(K3).unwrap();
        assert_eq!(game.graph().edges().len(), 3);
        assert_eq!(game.graph().precision(), 2);
        assert_eq!(game.belief(1), Rational::new(1, 2));
    }

    #[test]
    fn round_trip_is_exact() {
        let game = parse_game(K3).unwrap();
        assert_eq!(parse_game(&write_game(&game)).unwrap(), game);
        let third = OpinionGame::uniform(game.graph().clone(), Rational::new(1, 3)).unwrap();
        let text = write_game(&third);
        assert!(text.contains("\"1/3\""));
        assert_eq!(parse_game(&text).unwrap(), third);
        assert_eq!(
            parse_graph(&write_graph(game.graph())).unwrap(),
            *game.graph()
        );
    }

    #[test]
    fn belief_errors_name_the_index() {
        let bad = K3.replace("\"0.5\"", "\"1.5\"");
        let msg = parse_game(&bad).unwrap_err().to_string();
        assert!(msg.contains("beliefs[1]"), "{msg}");
        let msg = parse_game(&K3.replace("\"0.5\"", "0.5"))
            .unwrap_err()
            .to_string();
        assert!(msg.contains("beliefs[1]"), "{msg}");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let cases = [
            (r#"{"edges": []}"#, "n"),
            (r#"{"n": 2, "edges": [[0, 1, 1]]}"#, "edges[0][2]"),
            (r#"{"n": 2, "edges": [[0, -1, "1"]]}"#, "edges[0][1]"),
            (r#"{"n": 2, "edges": [[0, 1, "-1"]]}"#, "edges[0]"),
            (r#"{"n": 2, "edges": [[0, 1]]}"#, "edges[0]"),
        ];
        for (text, path) in cases {
            let msg = parse_graph(text).unwrap_err().to_string();
            assert!(msg.contains(path), "{text}: {msg}");
        }
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        let msg = parse_graph(r#"{"n": 4, "edges": [[0, 1, "1"], [2, 3, "1"]]}"#)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("not connected"), "{msg}");
    }

    #[test]
    fn reals_have_seventeen_digits() {
        let s = real_string(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
    }
}
