//! WebAssembly bindings for the static page in `www/`.
//!
//! Each export has a plain Rust counterpart returning `Result<String, String>`
//! so it can be tested natively.

use ptolemy::farey_dehn::{farey_walk, fill, Filling, Slope};
use ptolemy::numeric_verify::solve_complete;
use ptolemy::triangulation::{parse_gluing_table, Triangulation};
use std::fmt::Write;
use wasm_bindgen::prelude::*;

const WHITEHEAD: &str = include_str!("../../core/fixtures/whitehead.tri");

fn parse_slope(s: &str) -> Result<Slope, String> {
    s.trim().parse::<Slope>().map_err(|e| format!("slope `{}`: {e}", s.trim()))
}

fn whitehead() -> Triangulation {
    parse_gluing_table(WHITEHEAD).expect("bundled triangulation parses")
}

fn fill_whitehead(slope: &str) -> Result<Filling, String> {
    fill(&whitehead(), 1, parse_slope(slope)?).map_err(|e| e.to_string())
}

/// Walk table from a comma-separated Farey triangle to `slope`.
pub fn walk_text(triangle: &str, slope: &str) -> Result<String, String> {
    let parts: Vec<Slope> = triangle.split(',').map(parse_slope).collect::<Result<_, _>>()?;
    let tri: [Slope; 3] = parts
        .try_into()
        .map_err(|v: Vec<Slope>| format!("a triangle has 3 slopes, got {}", v.len()))?;
    let w = farey_walk(tri, parse_slope(slope)?).map_err(|e| e.to_string())?;
    Ok(w.table())
}

/// `NZ(r)`, `C(r)` and `B(r)` after filling the second Whitehead cusp.
pub fn filled_nz_text(slope: &str) -> Result<String, String> {
    let f = fill_whitehead(slope)?;
    let mut out = format!("word {}  tetrahedra {}\n", f.walk.word_string(), f.filled.nz.n);
    out.push_str(&f.filled.nz.to_text());
    let b: Vec<String> = f.filled.b.0.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "[b]\n{}", b.join(" "));
    Ok(out)
}

/// Ptolemy equations of the filled manifold, with complete-structure
/// shapes when Newton's method finds them.
pub fn ptolemy_text(slope: &str) -> Result<String, String> {
    let f = fill_whitehead(slope)?;
    let p = f.combined_ptolemy().map_err(|e| e.to_string())?;
    let mut out = p.render();
    match solve_complete(&f.filled.nz) {
        Ok(sol) => {
            let kind = if sol.geometric { "geometric" } else { "not geometric" };
            let _ = writeln!(out, "\nshapes ({kind}, residual {:.1e}):", sol.residual);
            for (name, z) in f.filled.tet_names.iter().zip(&sol.shapes.z) {
                let _ = writeln!(out, "  {name}: {:+.9} {:+.9}i", z.re, z.im);
            }
        }
        Err(e) => {
            let _ = writeln!(out, "\nno complete structure: {e}");
        }
    }
    Ok(out)
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn walk(triangle: &str, slope: &str) -> Result<String, JsError> {
    js(walk_text(triangle, slope))
}

#[wasm_bindgen]
pub fn filled_nz(slope: &str) -> Result<String, JsError> {
    js(filled_nz_text(slope))
}

#[wasm_bindgen]
pub fn ptolemy(slope: &str) -> Result<String, JsError> {
    js(ptolemy_text(slope))
}
