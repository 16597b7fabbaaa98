//! Typed experiment parameters with TOML-literal defaults.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{bad, CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    List(Vec<Value>),
}

impl Value {
    pub fn from_toml(name: &str, v: &toml::Value) -> CliResult<Self> {
        Ok(match v {
            toml::Value::Boolean(b) => Value::Bool(*b),
            toml::Value::Integer(i) => Value::Int(*i),
            toml::Value::Float(f) => Value::Float(*f),
            toml::Value::String(s) => Value::Str(s.clone()),
            toml::Value::Array(items) => {
                let items = items.iter().map(|x| Value::from_toml(name, x)).collect::<CliResult<Vec<_>>>()?;
                if items.iter().any(|x| matches!(x, Value::List(_))) {
                    return Err(bad(name, "nested lists are not supported"));
                }
                Value::List(items)
            }
            toml::Value::Table(_) => return Err(bad(name, "tables are not supported; the config is flat")),
            toml::Value::Datetime(_) => return Err(bad(name, "datetimes are not supported")),
        })
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Bool,
    Int,
    Float,
    Str,
    IntList,
    FloatList,
    StrList,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Bool => "bool",
            Kind::Int => "int",
            Kind::Float => "float",
            Kind::Str => "string",
            Kind::IntList => "int list",
            Kind::FloatList => "float list",
            Kind::StrList => "string list",
        }
    }

    fn accepts(&self, v: &Value) -> bool {
        let all = |items: &[Value], f: &dyn Fn(&Value) -> bool| items.iter().all(f);
        match (self, v) {
            (Kind::Bool, Value::Bool(_)) | (Kind::Int, Value::Int(_)) | (Kind::Str, Value::Str(_)) => true,
            (Kind::Float, Value::Int(_) | Value::Float(_)) => true,
            (Kind::IntList, Value::List(xs)) => all(xs, &|x| matches!(x, Value::Int(_))),
            (Kind::FloatList, Value::List(xs)) => all(xs, &|x| matches!(x, Value::Int(_) | Value::Float(_))),
            (Kind::StrList, Value::List(xs)) => all(xs, &|x| matches!(x, Value::Str(_))),
            _ => false,
        }
    }
}

/// A declared parameter. `default` is a TOML literal.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

impl ParamSpec {
    pub fn default_value(&self) -> Value {
        let table: toml::Table = toml::from_str(&format!("v = {}", self.default)).expect("default is a TOML literal");
        let v = Value::from_toml(self.name, &table["v"]).expect("default is a scalar or list");
        assert!(self.kind.accepts(&v), "default of {} does not match its kind", self.name);
        v
    }
}

/// Resolved parameters of one run: declared defaults overridden by the config.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

impl Params {
    pub fn resolve(experiment: &str, specs: &[ParamSpec], given: &BTreeMap<String, Value>) -> CliResult<Self> {
        for name in given.keys() {
            if !specs.iter().any(|s| s.name == name) {
                return Err(CliError::UnknownParameter { experiment: experiment.to_string(), name: name.clone() });
            }
        }
        let mut values = BTreeMap::new();
        for s in specs {
            let v = match given.get(s.name) {
                Some(v) if s.kind.accepts(v) => v.clone(),
                Some(_) => return Err(bad(s.name, format!("expected {}", s.kind.name()))),
                None => s.default_value(),
            };
            values.insert(s.name.to_string(), v);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }

    fn get(&self, name: &str) -> &Value {
        self.values.get(name).unwrap_or_else(|| panic!("undeclared parameter {name}"))
    }

    pub fn bool(&self, name: &str) -> bool {
        matches!(self.get(name), Value::Bool(true))
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.get(name) {
            Value::Int(i) => *i,
            v => panic!("{name} is not an int: {v:?}"),
        }
    }

    /// Integer in `[lo, hi]`.
    pub fn usize_in(&self, name: &str, lo: usize, hi: usize) -> CliResult<usize> {
        let v = self.int(name);
        if v < lo as i64 || v > hi as i64 {
            return Err(bad(name, format!("{v} outside [{lo}, {hi}]")));
        }
        Ok(v as usize)
    }

    pub fn float(&self, name: &str) -> f64 {
        self.get(name).as_f64().unwrap_or_else(|| panic!("{name} is not numeric"))
    }

    /// Finite float strictly above `lo`.
    pub fn float_above(&self, name: &str, lo: f64) -> CliResult<f64> {
        let v = self.float(name);
        if !(v > lo && v.is_finite()) {
            return Err(bad(name, format!("{v} must be finite and greater than {lo}")));
        }
        Ok(v)
    }

    pub fn string(&self, name: &str) -> &str {
        match self.get(name) {
            Value::Str(s) => s,
            v => panic!("{name} is not a string: {v:?}"),
        }
    }

    fn list(&self, name: &str) -> &[Value] {
        match self.get(name) {
            Value::List(xs) => xs,
            v => panic!("{name} is not a list: {v:?}"),
        }
    }

    /// Integers each in `[lo, hi]`.
    pub fn usize_list(&self, name: &str, lo: usize, hi: usize) -> CliResult<Vec<usize>> {
        self.list(name)
            .iter()
            .map(|v| match v {
                Value::Int(i) if *i >= lo as i64 && *i <= hi as i64 => Ok(*i as usize),
                v => Err(bad(name, format!("entry {v:?} outside [{lo}, {hi}]"))),
            })
            .collect()
    }

    /// Finite floats each strictly above `lo`.
    pub fn float_list(&self, name: &str, lo: f64) -> CliResult<Vec<f64>> {
        self.list(name)
            .iter()
            .map(|v| match v.as_f64() {
                Some(x) if x > lo && x.is_finite() => Ok(x),
                _ => Err(bad(name, format!("entry {v:?} must be finite and greater than {lo}"))),
            })
            .collect()
    }

    pub fn string_list(&self, name: &str) -> Vec<String> {
        self.list(name)
            .iter()
            .map(|v| match v {
                Value::Str(s) => s.clone(),
                v => panic!("{name} entry is not a string: {v:?}"),
            })
            .collect()
    }

    /// A two-element float list `[lo, hi]` with `lo <= hi`.
    pub fn range(&self, name: &str, lo: f64) -> CliResult<(f64, f64)> {
        match self.float_list(name, lo)?[..] {
            [a, b] if a <= b => Ok((a, b)),
            _ => Err(bad(name, "expected [lo, hi] with lo <= hi")),
        }
    }
}
