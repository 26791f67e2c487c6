use super::{parse_problem, CatalogError, Problem};

pub const BUILTIN_NAMES: [&str; 3] = ["G1", "G6", "G21"];

const G1: &str = include_str!("../../catalog/g1.json");
const G6: &str = include_str!("../../catalog/g6.json");
const G21: &str = include_str!("../../catalog/g21.json");

/// The built-in examples. G6 ships without brackets.
pub fn builtin(name: &str) -> Result<Problem, CatalogError> {
    let text = match name.to_ascii_uppercase().as_str() {
        "G1" => G1,
        "G6" => G6,
        "G21" => G21,
        _ => return Err(CatalogError::UnknownBuiltin(name.to_string())),
    };
    parse_problem(text, &format!("builtin:{}", name))
}
