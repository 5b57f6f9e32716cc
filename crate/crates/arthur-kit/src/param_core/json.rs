use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use super::block::JordanBlock;
use super::label::{sign_from_json, Cuspidal, Parity, QuadTag};
use super::parameter::{ArthurParameter, Family, GroupDescriptor};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    family: Family,
    rank: u32,
    #[serde(default = "trivial_tag")]
    discriminant: String,
}

fn trivial_tag() -> String {
    "trivial".into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RhoDoc {
    name: String,
    dim: u32,
    parity: Parity,
    #[serde(default = "trivial_tag")]
    eta: String,
    #[serde(default)]
    self_dual: Option<bool>,
    #[serde(default)]
    dual: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    rho: String,
    a: u32,
    b: u32,
    #[serde(default)]
    zeta: Option<Value>,
    #[serde(default)]
    mult: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamDoc {
    group: GroupDoc,
    #[serde(default)]
    rho: Vec<RhoDoc>,
    blocks: Vec<BlockDoc>,
}

fn schema<E: std::fmt::Display>(e: E) -> Error {
    Error::Schema(e.to_string())
}

pub fn parse_group(v: &Value) -> Result<GroupDescriptor> {
    let g: GroupDoc = serde_json::from_value(v.clone()).map_err(schema)?;
    Ok(GroupDescriptor {
        family: g.family,
        rank: g.rank,
        discriminant: QuadTag::parse(&g.discriminant)?,
    })
}

/// Parse and validate a parameter document.
pub fn parse_parameter(text: &str) -> Result<ArthurParameter> {
    let v: Value = serde_json::from_str(text).map_err(schema)?;
    parameter_from_value(&v)
}

pub fn parameter_from_value(v: &Value) -> Result<ArthurParameter> {
    let doc: ParamDoc = serde_json::from_value(v.clone()).map_err(schema)?;
    let group = GroupDescriptor {
        family: doc.group.family,
        rank: doc.group.rank,
        discriminant: QuadTag::parse(&doc.group.discriminant)?,
    };
    let mut labels: BTreeMap<String, Cuspidal> = BTreeMap::new();
    for r in doc.rho {
        if let Some(sd) = r.self_dual {
            if sd != (r.parity != Parity::None) {
                return Err(Error::InvalidLabel(format!(
                    "{}: self_dual disagrees with parity",
                    r.name
                )));
            }
        }
        let label = Cuspidal {
            name: r.name.clone(),
            dim: r.dim,
            parity: r.parity,
            eta: QuadTag::parse(&r.eta)?,
            dual: r.dual,
        };
        label.validate()?;
        if labels.insert(r.name.clone(), label).is_some() {
            return Err(Error::Schema(format!("label {} declared twice", r.name)));
        }
    }
    let mut blocks = Vec::new();
    for b in doc.blocks {
        let rho = labels
            .get(&b.rho)
            .cloned()
            .ok_or_else(|| Error::Schema(format!("block refers to undeclared label {:?}", b.rho)))?;
        let zeta = b.zeta.as_ref().map(sign_from_json).transpose()?;
        let mult = b.mult.unwrap_or(1);
        if mult == 0 {
            return Err(Error::Schema("multiplicity must be at least 1".into()));
        }
        blocks.push((JordanBlock::from_ab(rho, b.a, b.b, zeta)?, mult));
    }
    let p = ArthurParameter::new(group, blocks);
    p.validate()?;
    Ok(p)
}

pub fn group_to_value(g: &GroupDescriptor) -> Value {
    json!({
        "family": g.family,
        "rank": g.rank,
        "discriminant": g.discriminant.to_string(),
    })
}

pub fn label_to_value(r: &Cuspidal) -> Value {
    let mut v = json!({
        "name": r.name,
        "dim": r.dim,
        "parity": r.parity,
        "eta": r.eta.to_string(),
    });
    if let Some(d) = &r.dual {
        v["dual"] = Value::String(d.clone());
    }
    v
}

pub fn block_to_value(b: &JordanBlock, mult: u32) -> Value {
    json!({ "rho": b.rho.name, "a": b.a, "b": b.b, "zeta": b.zeta, "mult": mult })
}

/// Serialized form with every optional field spelled out.
pub fn parameter_to_value(p: &ArthurParameter) -> Value {
    json!({
        "group": group_to_value(&p.group),
        "rho": p.labels().iter().map(label_to_value).collect::<Vec<_>>(),
        "blocks": p.blocks.iter().map(|(b, m)| block_to_value(b, *m)).collect::<Vec<_>>(),
    })
}

pub fn parameter_to_string(p: &ArthurParameter) -> String {
    serde_json::to_string_pretty(&parameter_to_value(p)).expect("values serialize")
}
