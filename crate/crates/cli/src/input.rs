//! Reading polytopes and digraphs from files, stdin or the bundled data.

use std::io::Read;

use ehrhart_core::data;
use ehrhart_core::digraph::{arc_polytope, Digraph};
use ehrhart_core::io::{DigraphJson, PolytopeJson};
use ehrhart_core::polytope::Polytope;

use crate::Failure;

fn read_source(src: &str) -> Result<String, Failure> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(src).map_err(|e| Failure::input(format!("reading {src}: {e}")))
}

/// `@theorem1`, `@theorem2`, `@figure1` (its arc polytope), `-` or a path.
pub fn polytope(src: &str) -> Result<Polytope, Failure> {
    match src {
        "@theorem1" => return Ok(data::theorem1()),
        "@theorem2" => return Ok(data::theorem2()),
        "@figure1" => return Ok(arc_polytope(&data::figure1())?),
        s if s.starts_with('@') => return Err(Failure::input(format!("unknown bundled dataset {s}"))),
        _ => {}
    }
    Ok(PolytopeJson::parse(&read_source(src)?)?.to_polytope()?)
}

/// `@figure1`, `-` or a path.
pub fn digraph(src: &str) -> Result<Digraph, Failure> {
    match src {
        "@figure1" => return Ok(data::figure1()),
        s if s.starts_with('@') => return Err(Failure::input(format!("unknown bundled digraph {s}"))),
        _ => {}
    }
    Ok(DigraphJson::parse(&read_source(src)?)?.to_digraph()?)
}
