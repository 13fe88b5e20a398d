//! Versioned machine-readable reports and weight table dumps.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{LaurentPoly, Registry};
use crate::error::{Error, Result};
use crate::weights::{
    all_crystal_configs, all_r_configs, all_t_configs, crystal_r_weight, crystal_t_weight, describe_fused,
    describe_r, describe_t, RKind, RowType, WeightRegime,
};

pub const SCHEMA: &str = "icebox.report/1";

/// Envelope for every JSON document the tools emit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub pass: bool,
    pub params: Value,
    pub results: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, pass: bool, params: Value, results: Value) -> Self {
        Report { schema: SCHEMA, command: command.into(), pass, params, results }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    /// Checks the schema tag of a parsed report.
    pub fn check_schema(v: &Value) -> Result<()> {
        match v.get("schema").and_then(Value::as_str) {
            Some(SCHEMA) => Ok(()),
            other => Err(Error::Parse(format!("unexpected report schema {other:?}"))),
        }
    }
}

/// Which weight table to dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    T(RowType),
    R(RKind),
    CrystalT(RowType),
    CrystalR(RKind),
}

impl Table {
    /// Parses names like `T_R`, `T_L`, `R_LR`, `crystal_T_R`, `crystal_R_RL`.
    pub fn parse(s: &str) -> Result<Table> {
        let (crystal, rest) = match s.strip_prefix("crystal_") {
            Some(r) => (true, r),
            None => (false, s),
        };
        let bad = || Error::Parse(format!("unknown table {s:?}"));
        let row = |c: char| RowType::parse(&c.to_string());
        if let Some(f) = rest.strip_prefix("T_") {
            let mut cs = f.chars();
            let (Some(c), None) = (cs.next(), cs.next()) else { return Err(bad()) };
            let t = row(c)?;
            return Ok(if crystal { Table::CrystalT(t) } else { Table::T(t) });
        }
        if let Some(f) = rest.strip_prefix("R_") {
            let cs: Vec<char> = f.chars().collect();
            if cs.len() != 2 {
                return Err(bad());
            }
            let k = RKind::of(row(cs[0])?, row(cs[1])?);
            return Ok(if crystal { Table::CrystalR(k) } else { Table::R(k) });
        }
        Err(bad())
    }
}

/// Every nonzero entry of a table, keyed by configuration descriptor, with
/// polynomial values in the JSON form.
pub fn table_dump(table: Table, m: usize, regime: &WeightRegime) -> Result<BTreeMap<String, Value>> {
    let reg: &std::sync::Arc<Registry> = regime.registry();
    let z1 = LaurentPoly::var(reg, "z1")?;
    let z2 = LaurentPoly::var(reg, "z2")?;
    let mut out = BTreeMap::new();
    let mut put = |key: String, w: LaurentPoly| {
        if !w.is_zero() {
            out.insert(key, w.to_json());
        }
    };
    match table {
        Table::T(f) => {
            for c in all_t_configs(m) {
                put(describe_t(f, &c), regime.t_weight(f, &c, &z1)?);
            }
        }
        Table::R(kind) => {
            for c in all_r_configs(m) {
                for k in 1..=m as u8 {
                    put(format!("k={k} {}", describe_r(kind, &c)), regime.r_weight(kind, &c, &z1, &z2, k)?);
                }
            }
        }
        Table::CrystalT(f) => {
            for c in all_crystal_configs(m) {
                put(describe_fused(f, &c), crystal_t_weight(f, &c, &z1));
            }
        }
        Table::CrystalR(kind) => {
            for c in all_r_configs(m) {
                put(describe_r(kind, &c), crystal_r_weight(kind, &c, &z1, &z2, m)?);
            }
        }
    }
    Ok(out)
}

/// Table dump wrapped in a report.
pub fn table_report(name: &str, m: usize, regime: &WeightRegime) -> Result<Report> {
    let table = Table::parse(name)?;
    let dump = table_dump(table, m, regime)?;
    Ok(Report::new(
        "table",
        true,
        json!({"table": name, "m": m, "regime": regime.tag.to_string()}),
        serde_json::to_value(dump).map_err(|e| Error::Internal(e.to_string()))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_names() {
        assert_eq!(Table::parse("T_R").unwrap(), Table::T(RowType::R));
        assert_eq!(Table::parse("crystal_R_LR").unwrap(), Table::CrystalR(RKind::LR));
        assert!(Table::parse("Q_R").is_err());
    }

    #[test]
    fn dump_round_trips() {
        let reg = Registry::standard(2, 2);
        let g = WeightRegime::generic(&reg, 2);
        let rep = table_report("T_L", 2, &g).unwrap();
        let text = rep.to_pretty();
        let v: Value = serde_json::from_str(&text).unwrap();
        Report::check_schema(&v).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap(), text);
        for val in v["results"].as_object().unwrap().values() {
            LaurentPoly::from_json(val, Some(&reg)).unwrap();
        }
    }
}
