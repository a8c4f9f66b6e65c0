//! JSON file formats.
//!
//! * specification: `{"cardinalities":[d0,d1,…],"pairs":[{"R":[1,2],"x":[0,1]},{"R":[3],"x":"ALL"}]}`
//! * state set: `{"states":[0,5,…]}` or `{"coords":[[0,1,0],…]}`
//! * structure: `{"blocks":[[0,1],[6]]}`
//! * kernel: `{"cardinalities":[…],"domain":[1,2],"rows":{"0":["1/2","1/2"],…}}`;
//!   `cardinalities` may be omitted when a specification supplies the space
//! * modalities: `{"cardinalities":[…],"modalities":[{"domain":[],"rows":{…}},…]}`
//! * potentials: same layout as modalities with key `"potentials"` and real entries
//! * distribution: `{"cardinalities":[…],"entries":{"(x0,x)":"p/q",…}}`, absent entries are 0
//!
//! Probabilities are written as `"p/q"` strings in rational mode and as JSON
//! numbers in float mode; both forms are accepted on input.

use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gibbs::GibbsPotentials;
use crate::joint::JointDistribution;
use crate::kernels::{FunctionalModalities, StochasticMap};
use crate::robustness::{Assignments, RobustnessSpec};
use crate::scalar::Scalar;
use crate::space::{NodeSet, StateSpace};
use crate::structures::RobustnessStructure;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| perr(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| perr(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| perr(format!("{what} must be an array")))?
        .iter()
        .map(|e| e.as_u64().map(|u| u as usize).ok_or_else(|| perr(format!("{what} must hold non-negative integers"))))
        .collect()
}

fn node_set(v: &Value, space: &StateSpace) -> Result<NodeSet> {
    let nodes = usize_list(v, "node list")?;
    for &node in &nodes {
        space.check_node(node)?;
    }
    Ok(NodeSet::from_nodes(nodes))
}

fn node_list(set: NodeSet) -> Value {
    Value::from(set.nodes().collect::<Vec<_>>())
}

pub fn parse_space(obj: &Value) -> Result<StateSpace> {
    StateSpace::new(usize_list(field(obj, "cardinalities")?, "cardinalities")?)
}

/// The space declared in `obj`, or `fallback` when the file omits
/// `cardinalities`. Both present must agree.
pub fn space_or(obj: &Value, fallback: Option<&StateSpace>) -> Result<StateSpace> {
    match (obj.get("cardinalities"), fallback) {
        (None, Some(s)) => Ok(s.clone()),
        (None, None) => Err(perr("missing field \"cardinalities\"")),
        (Some(_), fallback) => {
            let space = parse_space(obj)?;
            if fallback.is_some_and(|f| f != &space) {
                return Err(Error::Shape("cardinalities differ from the specification".into()));
            }
            Ok(space)
        }
    }
}

pub fn spec_from_json(obj: &Value) -> Result<RobustnessSpec> {
    let space = parse_space(obj)?;
    let mut spec = RobustnessSpec::empty(space.clone());
    let pairs = field(obj, "pairs")?.as_array().ok_or_else(|| perr("pairs must be an array"))?;
    for pair in pairs {
        let set = node_set(field(pair, "R")?, &space)?;
        match field(pair, "x")? {
            Value::String(s) if s == "ALL" => spec.insert_all(set)?,
            v => spec.insert(set, usize_list(v, "x")?)?,
        }
    }
    Ok(spec)
}

pub fn spec_to_json(spec: &RobustnessSpec) -> Value {
    let mut pairs = Vec::new();
    for (set, assign) in spec.groups() {
        match assign {
            Assignments::All => pairs.push(json!({"R": node_list(set), "x": "ALL"})),
            Assignments::Some(vals) => {
                for v in vals {
                    pairs.push(json!({"R": node_list(set), "x": v}));
                }
            }
        }
    }
    json!({"cardinalities": spec.space().cardinalities(), "pairs": pairs})
}

pub fn states_from_json(obj: &Value, space: &StateSpace) -> Result<Vec<usize>> {
    let states = if let Some(v) = obj.get("states") {
        usize_list(v, "states")?
    } else if let Some(v) = obj.get("coords") {
        v.as_array()
            .ok_or_else(|| perr("coords must be an array"))?
            .iter()
            .map(|c| space.index_of(&usize_list(c, "coordinates")?))
            .collect::<Result<_>>()?
    } else {
        return Err(perr("state set needs \"states\" or \"coords\""));
    };
    for &x in &states {
        space.check_state(x)?;
    }
    let unique: BTreeSet<usize> = states.into_iter().collect();
    Ok(unique.into_iter().collect())
}

pub fn states_to_json(states: &[usize]) -> Value {
    json!({ "states": states })
}

pub fn structure_from_json(obj: &Value, space: &StateSpace) -> Result<RobustnessStructure> {
    let blocks = field(obj, "blocks")?
        .as_array()
        .ok_or_else(|| perr("blocks must be an array"))?
        .iter()
        .map(|b| usize_list(b, "block"))
        .collect::<Result<Vec<_>>>()?;
    RobustnessStructure::new(space.input_size(), blocks)
}

pub fn structure_to_json(structure: &RobustnessStructure) -> Value {
    json!({ "blocks": structure.blocks() })
}

fn rows_object<T>(rows: &[Vec<T>], cell: impl Fn(&T) -> Value) -> Value {
    let mut map = Map::new();
    for (i, row) in rows.iter().enumerate() {
        map.insert(i.to_string(), Value::from(row.iter().map(&cell).collect::<Vec<_>>()));
    }
    Value::Object(map)
}

fn rows_from_object<T>(
    obj: &Value,
    count: usize,
    width: usize,
    cell: impl Fn(&Value) -> Result<T>,
) -> Result<Vec<Vec<T>>> {
    let map = obj.as_object().ok_or_else(|| perr("rows must be an object keyed by state index"))?;
    let mut rows: Vec<Option<Vec<T>>> = (0..count).map(|_| None).collect();
    for (key, value) in map {
        let i: usize = key.trim().parse().map_err(|_| perr(format!("bad row key {key:?}")))?;
        if i >= count {
            return Err(perr(format!("row key {i} out of range (0..{count})")));
        }
        let row = value
            .as_array()
            .ok_or_else(|| perr(format!("row {i} must be an array")))?
            .iter()
            .map(&cell)
            .collect::<Result<Vec<T>>>()?;
        if row.len() != width {
            return Err(perr(format!("row {i} has {} entries, expected {width}", row.len())));
        }
        rows[i] = Some(row);
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| perr(format!("row {i} is missing"))))
        .collect()
}

fn map_body_from_json<T: Scalar>(obj: &Value, space: &StateSpace) -> Result<StochasticMap<T>> {
    let domain = node_set(field(obj, "domain")?, space)?;
    let rows = rows_from_object(field(obj, "rows")?, space.sub_size(domain), space.output_size(), T::from_json)?;
    StochasticMap::new(space, domain, rows)
}

fn map_body_to_json<T: Scalar>(map: &StochasticMap<T>) -> Value {
    json!({"domain": node_list(map.domain()), "rows": rows_object(map.rows(), T::to_json)})
}

pub fn kernel_from_json<T: Scalar>(obj: &Value, fallback: Option<&StateSpace>) -> Result<StochasticMap<T>> {
    map_body_from_json(obj, &space_or(obj, fallback)?)
}

pub fn kernel_to_json<T: Scalar>(map: &StochasticMap<T>) -> Value {
    let body = map_body_to_json(map);
    json!({"cardinalities": map.space().cardinalities(), "domain": body["domain"], "rows": body["rows"]})
}

pub fn modalities_from_json<T: Scalar>(
    obj: &Value,
    fallback: Option<&StateSpace>,
) -> Result<FunctionalModalities<T>> {
    let space = space_or(obj, fallback)?;
    let list = field(obj, "modalities")?.as_array().ok_or_else(|| perr("modalities must be an array"))?;
    let mut slots: Vec<Option<StochasticMap<T>>> = (0..1usize << space.n()).map(|_| None).collect();
    for item in list {
        let m = map_body_from_json::<T>(item, &space)?;
        let slot = m.domain().bits() as usize;
        slots[slot] = Some(m);
    }
    let maps = slots
        .into_iter()
        .enumerate()
        .map(|(bits, m)| m.ok_or(Error::MissingBase(NodeSet(bits as u32))))
        .collect::<Result<Vec<_>>>()?;
    FunctionalModalities::new(&space, maps)
}

pub fn modalities_to_json<T: Scalar>(m: &FunctionalModalities<T>) -> Value {
    let list: Vec<Value> = m.maps().iter().map(map_body_to_json).collect();
    json!({"cardinalities": m.space().cardinalities(), "modalities": list})
}

pub fn potentials_from_json(obj: &Value) -> Result<GibbsPotentials> {
    let space = parse_space(obj)?;
    let list = field(obj, "potentials")?.as_array().ok_or_else(|| perr("potentials must be an array"))?;
    let mut slots: Vec<Option<Vec<Vec<f64>>>> = vec![None; 1 << space.n()];
    for item in list {
        let domain = node_set(field(item, "domain")?, &space)?;
        let rows = rows_from_object(field(item, "rows")?, space.sub_size(domain), space.output_size(), f64::from_json)?;
        slots[domain.bits() as usize] = Some(rows);
    }
    let tables = slots
        .into_iter()
        .enumerate()
        .map(|(bits, t)| t.ok_or(Error::MissingBase(NodeSet(bits as u32))))
        .collect::<Result<Vec<_>>>()?;
    GibbsPotentials::new(&space, tables)
}

pub fn potentials_to_json(p: &GibbsPotentials) -> Value {
    let list: Vec<Value> = NodeSet::all(p.space().n())
        .map(|a| json!({"domain": node_list(a), "rows": rows_object(p.get(a), |v: &f64| v.to_json())}))
        .collect();
    json!({"cardinalities": p.space().cardinalities(), "potentials": list})
}

fn parse_entry_key(key: &str) -> Result<(usize, usize)> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or_else(|| perr(format!("bad entry key {key:?}, expected \"(x0,x)\"")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| perr(format!("bad entry key {key:?}")))?;
    let a = a.trim().parse().map_err(|_| perr(format!("bad entry key {key:?}")))?;
    let b = b.trim().parse().map_err(|_| perr(format!("bad entry key {key:?}")))?;
    Ok((a, b))
}

pub fn distribution_from_json<T: Scalar>(obj: &Value) -> Result<JointDistribution<T>> {
    let space = parse_space(obj)?;
    let entries = field(obj, "entries")?.as_object().ok_or_else(|| perr("entries must be an object"))?;
    let mut fibers = vec![vec![T::zero(); space.output_size()]; space.input_size()];
    for (key, value) in entries {
        let (x0, x) = parse_entry_key(key)?;
        if x0 >= space.output_size() {
            return Err(Error::InvalidValue { node: 0, value: x0, card: space.output_size() });
        }
        space.check_state(x)?;
        fibers[x][x0] = T::from_json(value)?;
    }
    JointDistribution::new(&space, fibers)
}

/// Nonzero entries only, ordered by input state then output.
pub fn distribution_to_json<T: Scalar>(p: &JointDistribution<T>) -> Value {
    let mut map = Map::new();
    for (x, fiber) in p.fibers().iter().enumerate() {
        for (x0, v) in fiber.iter().enumerate() {
            if !v.is_zero() {
                map.insert(format!("({x0},{x})"), v.to_json());
            }
        }
    }
    json!({"cardinalities": p.space().cardinalities(), "entries": map})
}
