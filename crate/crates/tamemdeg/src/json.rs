//! JSON formats for maps, documents and witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::construct3::{self, Witness, WitnessRecipe};
use crate::error::{Error, Result};
use crate::parse::default_var_names;
use crate::poly::Polynomial;
use crate::polymap::{Multidegree, PolyMap};

/// `{"n": 3, "vars": ["x","y","z"], "components": ["x + y^2", ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub components: Vec<String>,
}

impl MapJson {
    pub fn from_map(map: &PolyMap) -> MapJson {
        let vars = default_var_names(map.n());
        MapJson {
            n: map.n(),
            components: map.to_strings(&vars),
            vars: Some(vars),
        }
    }

    pub fn to_map(&self) -> Result<PolyMap> {
        let vars = self
            .vars
            .clone()
            .unwrap_or_else(|| default_var_names(self.n));
        check_vars(&vars, self.n)?;
        if self.components.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: self.components.len(),
            });
        }
        PolyMap::parse(&self.components, &vars)
    }
}

fn check_vars(vars: &[String], n: usize) -> Result<()> {
    if vars.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: vars.len(),
        });
    }
    let mut seen = vars.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != vars.len() {
        return Err(Error::InvalidArgument(format!(
            "duplicate variable names in {vars:?}"
        )));
    }
    Ok(())
}

/// A file with shared variable names and several named maps and polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub vars: Vec<String>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub polynomials: BTreeMap<String, String>,
}

impl Document {
    pub fn map(&self, name: &str) -> Result<PolyMap> {
        let comps = self
            .maps
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no map named `{name}`")))?;
        self.check()?;
        if comps.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                found: comps.len(),
            });
        }
        PolyMap::parse(comps, &self.vars)
    }

    pub fn polynomial(&self, name: &str) -> Result<Polynomial> {
        let text = self
            .polynomials
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no polynomial named `{name}`")))?;
        self.check()?;
        Polynomial::parse(text, &self.vars)
    }

    fn check(&self) -> Result<()> {
        check_vars(&self.vars, self.vars.len())
    }
}

/// Reads a map from a single map object, a list of maps or a document.  A
/// list with several maps needs `name` as an index, a document needs it as a
/// key.
pub fn read_map(text: &str, name: Option<&str>) -> Result<PolyMap> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("components").is_some() {
        let m: MapJson = serde_json::from_value(value)?;
        return m.to_map();
    }
    if let serde_json::Value::Array(items) = value {
        let index = match name {
            Some(n) => n.parse::<usize>().map_err(|_| {
                Error::InvalidArgument(format!("map list is indexed by position, got {n:?}"))
            })?,
            None if items.len() == 1 => 0,
            None => {
                return Err(Error::InvalidArgument(format!(
                    "list holds {} maps; pick one by index",
                    items.len()
                )))
            }
        };
        let item = items
            .into_iter()
            .nth(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no map at index {index}")))?;
        let m: MapJson = serde_json::from_value(item)?;
        return m.to_map();
    }
    let doc: Document = serde_json::from_value(value)?;
    match name {
        Some(n) => doc.map(n),
        None if doc.maps.len() == 1 => doc.map(doc.maps.keys().next().expect("one map")),
        None => Err(Error::InvalidArgument(format!(
            "document holds {} maps; pick one by name",
            doc.maps.len()
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub target: Vec<u64>,
    pub recipe: WitnessRecipe,
    pub factors: Vec<MapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composed: Option<MapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cancellation_degree: Option<u32>,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> WitnessJson {
        WitnessJson {
            target: w.target.clone(),
            recipe: w.recipe.clone(),
            factors: w
                .factors
                .iter()
                .map(|f| MapJson::from_map(&f.to_map()))
                .collect(),
            composed: Some(MapJson::from_map(&w.composed)),
            cancellation_degree: w.cancellation_degree,
        }
    }
}

pub fn witness_to_json(w: &Witness) -> Result<String> {
    Ok(serde_json::to_string_pretty(&WitnessJson::from(w))?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub target: Vec<u64>,
    pub found: Multidegree,
    pub factors: usize,
    pub ok: bool,
}

/// Recomposes the stored factors, certifies each as affine or triangular and
/// compares the measured multidegree with the target.  The stored `composed`
/// map, when present, must agree with the recomposition.
pub fn verify_witness_json(text: &str) -> Result<VerifyReport> {
    let wj: WitnessJson = serde_json::from_str(text)?;
    let maps = wj
        .factors
        .iter()
        .map(MapJson::to_map)
        .collect::<Result<Vec<_>>>()?;
    let n = wj.target.len();
    let composed = PolyMap::compose_chain(n, &maps)?;
    let found = composed.mdeg();
    let stored_ok = match &wj.composed {
        Some(c) => c.to_map()? == composed,
        None => true,
    };
    let certified = construct3::verify_chain(&wj.target, &maps);
    if let Err(e @ (Error::InvalidGenerator(_) | Error::ArityMismatch { .. })) = certified {
        return Err(e);
    }
    Ok(VerifyReport {
        ok: stored_ok && certified.is_ok(),
        target: wj.target,
        found,
        factors: maps.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct3::realize;

    #[test]
    fn map_roundtrip() {
        let m = crate::gallery::gallery("su_example").unwrap();
        let j = MapJson::from_map(&m);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(read_map(&text, None).unwrap(), m);
    }

    #[test]
    fn document_lookup() {
        let text = r#"{"vars":["a","b"],"maps":{"f":["a + b^2","b"],"g":["b","a"]},
                       "polynomials":{"p":"a*b"}}"#;
        assert!(read_map(text, None).is_err());
        let g = read_map(text, Some("g")).unwrap();
        assert_eq!(g.to_string(), "(y, x)");
        let doc: Document = serde_json::from_str(text).unwrap();
        assert_eq!(doc.polynomial("p").unwrap().to_string(), "x*y");
    }

    #[test]
    fn witness_roundtrip_verifies() {
        let w = realize(4, 6, 9).unwrap().unwrap();
        let text = witness_to_json(&w).unwrap();
        let r = verify_witness_json(&text).unwrap();
        assert!(r.ok);
        let tampered = text.replace(
            "\"target\": [\n    4,\n    6,\n    9\n  ]",
            "\"target\": [4, 6, 11]",
        );
        assert_ne!(tampered, text);
        assert!(!verify_witness_json(&tampered).unwrap().ok);
    }

    #[test]
    fn rejects_non_tame_factor() {
        let text = r#"{"target":[2,2,1],"recipe":{"kind":"Gallery","name":"x"},
            "factors":[{"n":3,"components":["x + y^2","y + x^2","z"]}]}"#;
        assert!(matches!(
            verify_witness_json(text),
            Err(Error::InvalidGenerator(_))
        ));
    }
}
