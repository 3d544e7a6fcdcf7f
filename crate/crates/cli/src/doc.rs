//! Workspace documents: a JSON file binding one instance and naming
//! objects, spaces, morphisms, and quotients.
//!
//! Object syntax: `finset:4`, `finmod:Z/4:gens=2:rels=[[2,0]]`, `rose:2`.
//! Morphism payloads depend on the instance: an index array for finite
//! sets, a column list for modules, a word list (`a b^-1 a`, `e`) for the
//! rose.

use std::collections::BTreeMap;

use daffine::affine::Space;
use daffine::error::{Error, Result};
use daffine::instances::{FinMod, FinSet, Instance, ModMap, ModObj, Rose, RoseMap, SetMap};
use daffine::zariski::{quotient, Quotient};
use daffine::ReducedWord;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WorkspaceDocument {
    pub instance: String,
    #[serde(default)]
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceDoc>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismDoc>,
    #[serde(default)]
    pub quotients: BTreeMap<String, QuotientDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpaceDoc {
    pub object: String,
    pub structure: StructureDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum StructureDoc {
    /// "full" or "discrete".
    Keyword(String),
    Generators { generators: Vec<Value> },
    Elements { elements: Vec<Value> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MorphismDoc {
    pub dom: String,
    pub cod: String,
    pub map: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuotientDoc {
    /// Name of the source space.
    pub source: String,
    /// Name of the quotient morphism.
    pub map: String,
}

impl WorkspaceDocument {
    pub fn from_json(text: &str) -> Result<WorkspaceDocument> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("document parse: {e}")))
    }

    /// Canonical emission; the round-trip tests feed this back to
    /// `from_json`.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization")
    }
}

/// The instance a document binds, parsed from its `instance` string.
pub enum BoundInstance {
    Set(FinSet),
    Module(FinMod),
    Rose(Rose),
}

pub fn parse_instance(s: &str) -> Result<BoundInstance> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts[0] {
        "finset" if parts.len() == 1 => Ok(BoundInstance::Set(FinSet)),
        "rose" if parts.len() == 1 => Ok(BoundInstance::Rose(Rose)),
        "finmod" if parts.len() == 3 => {
            let m = parse_modulus(parts[1])?;
            match parts[2] {
                "empty" => Ok(BoundInstance::Module(FinMod::empty_theory(m)?)),
                "module" => Ok(BoundInstance::Module(FinMod::module_theory(m)?)),
                t => Err(Error::domain(format!("unknown theory `{t}` (use empty|module)"))),
            }
        }
        _ => Err(Error::domain(format!(
            "unknown instance `{s}` (use finset, finmod:Z/m:empty, finmod:Z/m:module, rose)"
        ))),
    }
}

fn parse_modulus(s: &str) -> Result<u64> {
    s.strip_prefix("Z/")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::domain(format!("bad ring `{s}` (expected Z/m)")))
}

/// Instance-specific document parsing and printing.
pub trait CliInstance: Instance {
    fn parse_obj(&self, s: &str) -> Result<Self::Obj>;
    fn parse_mor(&self, dom: &Self::Obj, cod: &Self::Obj, v: &Value) -> Result<Self::Mor>;
    fn show_obj(&self, o: &Self::Obj) -> String;
    fn mor_value(&self, m: &Self::Mor) -> Value;
    fn show_mor(&self, m: &Self::Mor) -> String {
        self.mor_value(m).to_string()
    }
}

impl CliInstance for FinSet {
    fn parse_obj(&self, s: &str) -> Result<usize> {
        let n = s
            .strip_prefix("finset:")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::domain(format!("bad object `{s}` (expected finset:N)")))?;
        Ok(n)
    }

    fn parse_mor(&self, dom: &usize, cod: &usize, v: &Value) -> Result<SetMap> {
        let arr = as_usize_array(v)?;
        SetMap::new(*dom, *cod, arr)
    }

    fn show_obj(&self, o: &usize) -> String {
        format!("finset:{o}")
    }

    fn mor_value(&self, m: &SetMap) -> Value {
        serde_json::json!(m.map)
    }
}

impl CliInstance for FinMod {
    fn parse_obj(&self, s: &str) -> Result<ModObj> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 3 || parts[0] != "finmod" {
            return Err(Error::domain(format!(
                "bad object `{s}` (expected finmod:Z/m:gens=K[:rels=[[..]]])"
            )));
        }
        let m = parse_modulus(parts[1])?;
        if m != self.modulus {
            return Err(Error::domain(format!(
                "object ring Z/{m} differs from the bound instance ring Z/{}",
                self.modulus
            )));
        }
        let gens: usize = parts[2]
            .strip_prefix("gens=")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::domain(format!("bad generator count in `{s}`")))?;
        let rels: Vec<Vec<u64>> = match parts.get(3) {
            None => vec![],
            Some(r) => {
                let body = r
                    .strip_prefix("rels=")
                    .ok_or_else(|| Error::domain(format!("bad relation list in `{s}`")))?;
                serde_json::from_str(body)
                    .map_err(|e| Error::domain(format!("bad relation list in `{s}`: {e}")))?
            }
        };
        self.obj(gens, &rels)
    }

    fn parse_mor(&self, dom: &ModObj, cod: &ModObj, v: &Value) -> Result<ModMap> {
        let cols: Vec<Vec<u64>> = serde_json::from_value(v.clone())
            .map_err(|e| Error::domain(format!("bad column list: {e}")))?;
        self.mor(dom, cod, &cols)
    }

    fn show_obj(&self, o: &ModObj) -> String {
        if o.rels.is_empty() {
            format!("finmod:Z/{}:gens={}", self.modulus, o.gens)
        } else {
            format!(
                "finmod:Z/{}:gens={}:rels={}",
                self.modulus,
                o.gens,
                serde_json::json!(o.rels)
            )
        }
    }

    fn mor_value(&self, m: &ModMap) -> Value {
        serde_json::json!(m.cols)
    }
}

impl CliInstance for Rose {
    fn parse_obj(&self, s: &str) -> Result<usize> {
        let n = s
            .strip_prefix("rose:")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::domain(format!("bad object `{s}` (expected rose:N)")))?;
        Ok(n)
    }

    fn parse_mor(&self, dom: &usize, cod: &usize, v: &Value) -> Result<RoseMap> {
        let words: Vec<String> = serde_json::from_value(v.clone())
            .map_err(|e| Error::domain(format!("bad word list: {e}")))?;
        let words = words
            .iter()
            .map(|w| ReducedWord::parse(w))
            .collect::<Result<Vec<_>>>()?;
        self.mor(*dom, *cod, words)
    }

    fn show_obj(&self, o: &usize) -> String {
        format!("rose:{o}")
    }

    fn mor_value(&self, m: &RoseMap) -> Value {
        serde_json::json!(m.words.iter().map(|w| w.to_string()).collect::<Vec<_>>())
    }
}

fn as_usize_array(v: &Value) -> Result<Vec<usize>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::domain(format!("bad index array: {e}")))
}

/// A document resolved against its instance: every reference checked, every
/// space's structure validated, every quotient's map verified regular epi.
pub struct Workspace<I: Instance> {
    pub spaces: BTreeMap<String, Space<I>>,
    pub morphisms: BTreeMap<String, I::Mor>,
    pub quotients: BTreeMap<String, Quotient<I>>,
}

pub fn resolve<I: CliInstance>(inst: &I, doc: &WorkspaceDocument) -> Result<Workspace<I>> {
    let mut objects = BTreeMap::new();
    for (name, spec) in &doc.objects {
        objects.insert(name.clone(), inst.parse_obj(spec)?);
    }
    let lookup_obj = |name: &str, objects: &BTreeMap<String, I::Obj>| -> Result<I::Obj> {
        objects
            .get(name)
            .cloned()
            .ok_or_else(|| Error::domain(format!("unknown object `{name}`")))
    };
    let mut morphisms = BTreeMap::new();
    for (name, m) in &doc.morphisms {
        let dom = lookup_obj(&m.dom, &objects)?;
        let cod = lookup_obj(&m.cod, &objects)?;
        morphisms.insert(name.clone(), inst.parse_mor(&dom, &cod, &m.map)?);
    }
    let mut spaces = BTreeMap::new();
    for (name, sd) in &doc.spaces {
        let x = lookup_obj(&sd.object, &objects)?;
        let parse_elems = |vals: &Vec<Value>| -> Result<Vec<I::Mor>> {
            vals.iter().map(|v| inst.parse_mor(&inst.s(), &x, v)).collect()
        };
        let a = match &sd.structure {
            StructureDoc::Keyword(k) if k == "full" => inst.struct_full(&x)?,
            StructureDoc::Keyword(k) if k == "discrete" => inst.struct_discrete(&x)?,
            StructureDoc::Keyword(k) => {
                return Err(Error::domain(format!(
                    "unknown structure keyword `{k}` in space `{name}`"
                )))
            }
            StructureDoc::Generators { generators } => {
                inst.struct_from_generators(&x, &parse_elems(generators)?)?
            }
            StructureDoc::Elements { elements } => {
                // Validates closure under the induced operations at load.
                inst.struct_from_elements(&x, &parse_elems(elements)?)?
            }
        };
        spaces.insert(name.clone(), Space { x, a });
    }
    let mut quotients = BTreeMap::new();
    for (name, qd) in &doc.quotients {
        let source = spaces
            .get(&qd.source)
            .ok_or_else(|| Error::domain(format!("unknown space `{}`", qd.source)))?;
        let p = morphisms
            .get(&qd.map)
            .ok_or_else(|| Error::domain(format!("unknown morphism `{}`", qd.map)))?;
        quotients.insert(name.clone(), quotient(inst, source, p)?);
    }
    Ok(Workspace { spaces, morphisms, quotients })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_doc() -> WorkspaceDocument {
        WorkspaceDocument::from_json(
            r#"{
                "instance": "finset",
                "objects": {"X": "finset:3", "Y": "finset:2"},
                "spaces": {
                    "XS": {"object": "X", "structure": {"elements": [[0], [1]]}},
                    "YS": {"object": "Y", "structure": "full"}
                },
                "morphisms": {"p": {"dom": "X", "cod": "Y", "map": [0, 0, 1]}},
                "quotients": {"q": {"source": "XS", "map": "p"}}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn document_roundtrips_through_json() {
        let doc = sample_doc();
        let again = WorkspaceDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn resolved_workspaces_agree_after_roundtrip() {
        let doc = sample_doc();
        let again = WorkspaceDocument::from_json(&doc.to_json()).unwrap();
        let inst = FinSet;
        let w1 = resolve(&inst, &doc).unwrap();
        let w2 = resolve(&inst, &again).unwrap();
        assert_eq!(w1.morphisms, w2.morphisms);
        assert_eq!(w1.spaces.len(), w2.spaces.len());
        for (k, sp) in &w1.spaces {
            assert_eq!(sp.a, w2.spaces[k].a);
        }
    }

    #[test]
    fn structures_validate_at_load() {
        // A module structure that is not closed under addition must be
        // rejected when given as explicit elements.
        let doc = WorkspaceDocument::from_json(
            r#"{
                "instance": "finmod:Z/2:module",
                "objects": {"X": "finmod:Z/2:gens=2"},
                "spaces": {"bad": {"object": "X", "structure": {"elements": [[[1,0]], [[0,1]]]}}}
            }"#,
        )
        .unwrap();
        let inst = match parse_instance(&doc.instance).unwrap() {
            BoundInstance::Module(i) => i,
            _ => unreachable!(),
        };
        assert!(resolve(&inst, &doc).is_err());
    }

    #[test]
    fn rose_words_parse_in_documents() {
        let doc = WorkspaceDocument::from_json(
            r#"{
                "instance": "rose",
                "objects": {"F2": "rose:2"},
                "spaces": {"H": {"object": "F2", "structure": {"generators": [["a b^-1"]]}}},
                "morphisms": {"f": {"dom": "F2", "cod": "F2", "map": ["b", "a"]}}
            }"#,
        )
        .unwrap();
        let inst = Rose;
        let ws = resolve(&inst, &doc).unwrap();
        assert_eq!(ws.morphisms["f"].words.len(), 2);
        assert!(ws.spaces.contains_key("H"));
    }
}

pub fn load(path: &std::path::Path) -> Result<WorkspaceDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    WorkspaceDocument::from_json(&text)
}
