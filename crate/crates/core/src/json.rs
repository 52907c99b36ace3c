//! JSON codecs for every value the command line reads or writes.
//!
//! Output is canonical: object keys are sorted and floats use the shortest
//! representation that round-trips, with integral values written without a
//! fractional part. Decoding errors carry a JSON pointer to the offending
//! value.
//!
//! Matrices are `{"rows":n,"cols":m,"data":[[re,im],…]}` in row-major order.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgElem, BlockShape};
use crate::cpmaps::LinMapAB;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GAction, GroupFn, UnitaryRep};
use crate::hmod::HModule;
use crate::linalg::{CVec, Mat};
use crate::povm::Povm;
use crate::states::{Representation, State};

/// Conversion to and from the canonical JSON form.
pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

/// Serialises with sorted keys and shortest round-trip floats.
pub fn encode(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    serde_json::to_string(v).expect("values built from finite numbers serialise")
}

pub fn decode(s: &str) -> Result<Value> {
    Ok(serde_json::from_str(s)?)
}

pub fn read_value(path: &Path) -> Result<Value> {
    decode(&std::fs::read_to_string(path)?)
}

pub fn read<T: Json>(path: &Path) -> Result<T> {
    T::from_json(&read_value(path)?)
}

/// A number, written as an integer when that loses nothing.
pub fn num(x: f64) -> Value {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15 && !(x == 0.0 && x.is_sign_negative()) {
        Value::from(x as i64)
    } else {
        // Non-finite values have no JSON form and become null.
        Value::from(x)
    }
}

pub fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn complex_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn vector(v: &CVec) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

pub fn list<T: Json>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(Json::to_json).collect())
}

/// A cursor into a document that remembers its JSON pointer.
#[derive(Clone, Copy)]
pub struct At<'a> {
    value: &'a Value,
    parent: Option<&'a At<'a>>,
    token: Token<'a>,
}

#[derive(Clone, Copy)]
enum Token<'a> {
    Root,
    Key(&'a str),
    Index(usize),
}

impl<'a> At<'a> {
    pub fn root(value: &'a Value) -> Self {
        At {
            value,
            parent: None,
            token: Token::Root,
        }
    }

    pub fn value(&self) -> &'a Value {
        self.value
    }

    pub fn pointer(&self) -> String {
        let own = match self.token {
            Token::Root => return String::new(),
            Token::Key(k) => k.replace('~', "~0").replace('/', "~1"),
            Token::Index(i) => i.to_string(),
        };
        let head = self.parent.map(At::pointer).unwrap_or_default();
        format!("{head}/{own}")
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let pointer = self.pointer();
        Error::Schema {
            pointer: if pointer.is_empty() { "/".into() } else { pointer },
            message: message.into(),
        }
    }

    pub fn field(&'a self, key: &'a str) -> Result<At<'a>> {
        let obj = self
            .value
            .as_object()
            .ok_or_else(|| self.error("expected an object"))?;
        let value = obj
            .get(key)
            .ok_or_else(|| self.error(format!("missing field {key:?}")))?;
        Ok(At {
            value,
            parent: Some(self),
            token: Token::Key(key),
        })
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some()
    }

    pub fn items(&'a self) -> Result<Vec<At<'a>>> {
        let arr = self
            .value
            .as_array()
            .ok_or_else(|| self.error("expected an array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, value)| At {
                value,
                parent: Some(self),
                token: Token::Index(i),
            })
            .collect())
    }

    pub fn f64(&self) -> Result<f64> {
        self.value
            .as_f64()
            .ok_or_else(|| self.error("expected a number"))
    }

    pub fn usize(&self) -> Result<usize> {
        self.value
            .as_u64()
            .map(|u| u as usize)
            .ok_or_else(|| self.error("expected a non-negative integer"))
    }

    pub fn str(&self) -> Result<&'a str> {
        self.value
            .as_str()
            .ok_or_else(|| self.error("expected a string"))
    }

    pub fn complex(&self) -> Result<C64> {
        let parts = self.items()?;
        if parts.len() != 2 {
            return Err(self.error("expected [re, im]"));
        }
        let z = C64::new(parts[0].f64()?, parts[1].f64()?);
        Ok(z)
    }

    pub fn complex_list(&self) -> Result<Vec<C64>> {
        self.items()?.iter().map(At::complex).collect()
    }

    pub fn usize_list(&self) -> Result<Vec<usize>> {
        self.items()?.iter().map(At::usize).collect()
    }

    pub fn mat(&self) -> Result<Mat> {
        let rows = self.field("rows")?;
        let cols = self.field("cols")?;
        let (r, c) = (rows.usize()?, cols.usize()?);
        if r == 0 {
            return Err(rows.error("rows must be positive"));
        }
        if c == 0 {
            return Err(cols.error("cols must be positive"));
        }
        let data = self.field("data")?;
        let entries = data.items()?;
        if entries.len() != r * c {
            let k = entries.len().min(r * c);
            let msg = format!("expected {} entries, found {}", r * c, entries.len());
            return Err(match entries.get(k) {
                Some(extra) => extra.error(msg),
                None => At {
                    value: data.value,
                    parent: Some(&data),
                    token: Token::Index(k),
                }
                .error(msg),
            });
        }
        let vals = entries.iter().map(At::complex).collect::<Result<Vec<_>>>()?;
        if let Some(k) = vals.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(entries[k].error("entry is not finite"));
        }
        Ok(Mat::from_row_slice(r, c, &vals))
    }

    pub fn mats(&self) -> Result<Vec<Mat>> {
        self.items()?.iter().map(At::mat).collect()
    }

    pub fn shape(&self) -> Result<BlockShape> {
        let dims = self.usize_list()?;
        BlockShape::new(dims).map_err(|e| self.error(e.to_string()))
    }

    /// Runs a constructor, reporting its failure as a schema error here.
    pub fn build<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| self.error(e.to_string()))
    }
}

impl Json for Mat {
    fn to_json(&self) -> Value {
        let data: Vec<Value> = (0..self.nrows())
            .flat_map(|i| (0..self.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| complex(self[(i, j)]))
            .collect();
        json!({"rows": self.nrows(), "cols": self.ncols(), "data": data})
    }

    fn from_json(v: &Value) -> Result<Self> {
        At::root(v).mat()
    }
}

impl Json for BlockShape {
    fn to_json(&self) -> Value {
        json!(self.dims())
    }

    /// Accepts a bare list of block sizes or `{"shape":[…]}`.
    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        if v.is_object() {
            at.field("shape")?.shape()
        } else {
            at.shape()
        }
    }
}

impl Json for AlgElem {
    fn to_json(&self) -> Value {
        json!({"shape": self.shape().to_json(), "blocks": list(self.blocks())})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let shape = at.field("shape")?.shape()?;
        let blocks_at = at.field("blocks")?;
        let blocks = blocks_at.mats()?;
        blocks_at.build(AlgElem::new(shape, blocks))
    }
}

impl Json for State {
    fn to_json(&self) -> Value {
        json!({"shape": self.shape().to_json(), "densities": list(self.densities())})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let shape = at.field("shape")?.shape()?;
        let d = at.field("densities")?;
        d.build(State::new(shape, d.mats()?))
    }
}

impl Json for LinMapAB {
    fn to_json(&self) -> Value {
        json!({
            "source": self.source().to_json(),
            "target_dim": self.target_dim(),
            "images": list(self.images()),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let source = at.field("source")?.shape()?;
        let target_dim = at.field("target_dim")?.usize()?;
        let images = at.field("images")?;
        images.build(LinMapAB::new(source, target_dim, images.mats()?))
    }
}

impl Json for Representation {
    fn to_json(&self) -> Value {
        json!({
            "source": self.source().to_json(),
            "dim": self.dim(),
            "images": list(self.images()),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let source = at.field("source")?.shape()?;
        let dim = at.field("dim")?.usize()?;
        let images = at.field("images")?;
        images.build(Representation::new(source, dim, images.mats()?))
    }
}

impl Json for Povm {
    fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "outcomes": self.outcomes(),
            "effects": list(self.effects()),
        })
    }

    /// `outcomes` may be omitted, in which case outcomes are numbered.
    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let dim = at.field("dim")?.usize()?;
        let effects_at = at.field("effects")?;
        let effects = effects_at.mats()?;
        if at.has("outcomes") {
            let o = at.field("outcomes")?;
            let outcomes = o
                .items()?
                .iter()
                .map(|x| x.str().map(str::to_owned))
                .collect::<Result<Vec<_>>>()?;
            o.build(Povm::new(dim, outcomes, effects))
        } else {
            effects_at.build(Povm::unlabeled(dim, effects))
        }
    }
}

impl Json for FiniteGroup {
    fn to_json(&self) -> Value {
        json!({"order": self.order(), "table": self.table()})
    }

    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        group_at(&at)
    }
}

fn group_at(at: &At<'_>) -> Result<FiniteGroup> {
    let order_at = at.field("order")?;
    let order = order_at.usize()?;
    let table_at = at.field("table")?;
    let table = table_at
        .items()?
        .iter()
        .map(At::usize_list)
        .collect::<Result<Vec<_>>>()?;
    if table.len() != order {
        return Err(order_at.error(format!("order {order} but the table has {} rows", table.len())));
    }
    table_at.build(FiniteGroup::new(table))
}

impl Json for GAction {
    fn to_json(&self) -> Value {
        // The group is not stored on the action; callers that need the full
        // document use [`action_to_json`].
        json!({"set_size": self.set_size(), "table": self.table()})
    }

    fn from_json(v: &Value) -> Result<Self> {
        Ok(action_from_json(v)?.1)
    }
}

pub fn action_to_json(group: &FiniteGroup, action: &GAction) -> Value {
    json!({"group": group.to_json(), "set_size": action.set_size(), "table": action.table()})
}

/// `{"group":…,"set_size":m,"table":[[…]]}` where `table[x][q] = x·q`.
pub fn action_from_json(v: &Value) -> Result<(FiniteGroup, GAction)> {
    let at = At::root(v);
    let group = group_at(&at.field("group")?)?;
    let set_size = at.field("set_size")?.usize()?;
    let table_at = at.field("table")?;
    let table = table_at
        .items()?
        .iter()
        .map(At::usize_list)
        .collect::<Result<Vec<_>>>()?;
    let action = table_at.build(GAction::new(&group, set_size, table))?;
    Ok((group, action))
}

impl Json for GroupFn {
    fn to_json(&self) -> Value {
        json!({"values": complex_list(&self.values)})
    }

    /// Accepts `{"values":[[re,im],…]}` or the bare list.
    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let values = if v.is_object() {
            at.field("values")?.complex_list()?
        } else {
            at.complex_list()?
        };
        Ok(GroupFn::new(values))
    }
}

impl Json for UnitaryRep {
    fn to_json(&self) -> Value {
        json!({"dim": self.dim(), "mats": list(self.mats())})
    }

    /// Decodes without checking the homomorphism property; see
    /// [`unitary_rep_for`].
    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let dim = at.field("dim")?.usize()?;
        let mats_at = at.field("mats")?;
        let mats = mats_at.mats()?;
        if let Some(k) = mats.iter().position(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(mats_at.items()?[k].error(format!("expected a {dim}x{dim} matrix")));
        }
        Ok(UnitaryRep::from_parts(dim, mats))
    }
}

/// Decodes a representation and checks it against `group`.
pub fn unitary_rep_for(v: &Value, group: &FiniteGroup, tol: &crate::Tolerances) -> Result<UnitaryRep> {
    let raw = UnitaryRep::from_json(v)?;
    if raw.mats().len() != group.order() {
        return Err(At::root(v).field("mats")?.error(format!(
            "{} matrices for a group of order {}",
            raw.mats().len(),
            group.order()
        )));
    }
    UnitaryRep::new(group, raw.dim(), raw.mats().to_vec(), tol)
}

impl Json for HModule {
    /// `right_action[b]` is the carrier matrix of the `b`-th matrix unit of
    /// the base (block-major, row-major within a block); `inner[p·c + q]` is
    /// `⟨ψ_p, ψ_q⟩`, antilinear in `p`.
    fn to_json(&self) -> Value {
        json!({
            "base": self.base().to_json(),
            "carrier_dim": self.carrier_dim(),
            "right_action": list(self.right_action()),
            "inner": list(self.inner_table()),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let at = At::root(v);
        let base = at.field("base")?.shape()?;
        let carrier_dim = at.field("carrier_dim")?.usize()?;
        let right_action = at.field("right_action")?.mats()?;
        let inner_at = at.field("inner")?;
        let inner = inner_at
            .items()?
            .iter()
            .map(|x| {
                let shape = x.field("shape")?.shape()?;
                let blocks = x.field("blocks")?;
                blocks.build(AlgElem::new(shape, blocks.mats()?))
            })
            .collect::<Result<Vec<_>>>()?;
        at.build(HModule::new(base, carrier_dim, right_action, inner))
    }
}

/// The machine-readable error object printed by the command line.
pub fn error_object(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(e.kind()));
    m.insert("message".into(), json!(e.to_string()));
    match e {
        Error::NotCompletelyPositive { min_choi_eig } => {
            m.insert("min_choi_eig".into(), num(*min_choi_eig));
        }
        Error::Precondition { measured, .. } => {
            m.insert("measured".into(), num(*measured));
        }
        Error::Schema { pointer, .. } => {
            m.insert("pointer".into(), json!(pointer));
        }
        _ => {}
    }
    json!({ "error": Value::Object(m) })
}
