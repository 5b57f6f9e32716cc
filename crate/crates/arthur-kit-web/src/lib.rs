//! JSON-in, JSON-out bindings for the browser page in `www/`.

use arthur_kit::component_group::SignVector;
use arthur_kit::packet_enum::{packet as packet_of, Level};
use arthur_kit::param_core::{parse_parameter, parse_signs};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn reply(r: arthur_kit::Result<Value>) -> String {
    let v = r.unwrap_or_else(|e| json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
    serde_json::to_string_pretty(&v).expect("values serialize")
}

#[wasm_bindgen]
pub fn classify(parameter: &str) -> String {
    reply(parse_parameter(parameter).map(|p| arthur_kit::cli::classify(&p)))
}

#[wasm_bindgen]
pub fn centralizer(parameter: &str) -> String {
    reply(parse_parameter(parameter).and_then(|p| arthur_kit::cli::centralizer(&p)))
}

/// `epsilon` may be empty for the whole packet.
#[wasm_bindgen]
pub fn packet(parameter: &str, level: &str, epsilon: &str) -> String {
    reply((|| {
        let psi = parse_parameter(parameter)?;
        let eps = match epsilon.trim() {
            "" => None,
            e => Some(SignVector::from_signs(&parse_signs(e)?)),
        };
        Ok(packet_of(&psi, Level::parse(level)?, eps.as_ref())?.to_value())
    })())
}
