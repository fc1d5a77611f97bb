//! The JSON chart-file format: chart data, named sections and named point
//! sets. See `docs/schemas.md` for the layout.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bgg::Bundle;
use crate::error::{Error, Result};
use crate::loci::affine_zero_set;
use crate::rational::{format_q, parse_q, Q};
use crate::tensor::serial::{poly_from_json, poly_to_json, tensor_from_json, tensor_to_json};
use crate::tensor::{IndexedTensor, TWO_FORM_SLOTS};
use crate::weyl::{check_n, normalize_rho, validate, weylize, ChartWeylData, PMat, Shear, Soldering};

/// A parsed chart file.
#[derive(Clone, Debug)]
pub struct ChartFile {
    pub data: ChartWeylData,
    pub sections: BTreeMap<String, IndexedTensor>,
    pub points: BTreeMap<String, Vec<Vec<Q>>>,
    pub seed: Option<u64>,
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(path, format!("missing \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, path: &str, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, format!("{what} must be an array")))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse(path, "expected a non-negative integer"))
}

fn parse_matrix(v: &Value, rows: usize, cols: usize, nv: usize, path: &str) -> Result<PMat> {
    let rs = as_array(v, path, "matrix")?;
    if rs.len() != rows {
        return Err(Error::parse(path, format!("expected {rows} rows, got {}", rs.len())));
    }
    let mut m = PMat::zeros(rows, cols, nv);
    for (i, r) in rs.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cs = as_array(r, &rp, "matrix row")?;
        if cs.len() != cols {
            return Err(Error::parse(&rp, format!("expected {cols} entries, got {}", cs.len())));
        }
        for (j, c) in cs.iter().enumerate() {
            m.set(i, j, poly_from_json(c, nv, &format!("{rp}[{j}]"))?);
        }
    }
    Ok(m)
}

fn matrix_to_json(m: &PMat) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| poly_to_json(m.get(i, j))).collect())).collect(),
    )
}

fn parse_gammas(v: Option<&Value>, dim: usize, nv: usize, path: &str) -> Result<Vec<PMat>> {
    let Some(v) = v else {
        return Ok(vec![PMat::zeros(dim, dim, nv); nv]);
    };
    let ms = as_array(v, path, "connection coefficients")?;
    if ms.len() != nv {
        return Err(Error::parse(path, format!("expected one matrix per coordinate ({nv}), got {}", ms.len())));
    }
    ms.iter().enumerate().map(|(mu, m)| parse_matrix(m, dim, dim, nv, &format!("{path}[{mu}]"))).collect()
}

fn parse_soldering(v: Option<&Value>, n: usize) -> Result<Soldering> {
    let nv = 2 * n;
    let Some(v) = v else {
        return Ok(Soldering::identity(n));
    };
    if v.as_str() == Some("identity") {
        return Ok(Soldering::identity(n));
    }
    let obj = v.as_object().ok_or_else(|| Error::parse("soldering", "expected \"identity\" or an object"))?;
    if let Some(sh) = obj.get("shears") {
        let list = as_array(sh, "soldering.shears", "shears")?;
        let mut shears = Vec::with_capacity(list.len());
        for (k, s) in list.iter().enumerate() {
            let p = format!("soldering.shears[{k}]");
            let o = s.as_object().ok_or_else(|| Error::parse(&p, "shear must be an object"))?;
            let row = as_usize(get(o, "row", &p)?, &format!("{p}.row"))?;
            let col = as_usize(get(o, "col", &p)?, &format!("{p}.col"))?;
            let entry = poly_from_json(get(o, "entry", &p)?, nv, &format!("{p}.entry"))?;
            shears.push(Shear { row, col, entry });
        }
        return Soldering::from_shears(n, shears).map_err(|e| Error::parse("soldering.shears", e.to_string()));
    }
    let m = parse_matrix(get(obj, "matrix", "soldering")?, nv, nv, nv, "soldering.matrix")?;
    let i = parse_matrix(get(obj, "inverse", "soldering")?, nv, nv, nv, "soldering.inverse")?;
    Ok(Soldering::from_matrices(m, i))
}

fn parse_point(v: &Value, nv: usize, path: &str) -> Result<Vec<Q>> {
    let cs = as_array(v, path, "point")?;
    if cs.len() != nv {
        return Err(Error::parse(path, format!("expected {nv} coordinates, got {}", cs.len())));
    }
    cs.iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_str()
                .and_then(parse_q)
                .ok_or_else(|| Error::parse(format!("{path}[{i}]"), "coordinate must be a \"p/q\" string"))
        })
        .collect()
}

impl ChartFile {
    /// Parses a chart file; `degree_cap` overrides the file's own cap.
    pub fn parse(text: &str, degree_cap: Option<u32>) -> Result<Self> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        let obj = root.as_object().ok_or_else(|| Error::parse("$", "chart file must be a JSON object"))?;
        let n = as_usize(get(obj, "n", "$")?, "n")?;
        check_n(n).map_err(|e| Error::parse("n", e.to_string()))?;
        let nv = 2 * n;
        if let Some(v) = obj.get("nvars") {
            if as_usize(v, "nvars")? != nv {
                return Err(Error::parse("nvars", format!("must be 2n = {nv}")));
            }
        }
        let meta = obj.get("metadata").and_then(Value::as_object);
        let file_cap = match meta.and_then(|m| m.get("degree_cap")) {
            Some(v) => Some(as_usize(v, "metadata.degree_cap")? as u32),
            None => None,
        };
        let seed = meta.and_then(|m| m.get("seed")).and_then(Value::as_u64);

        let soldering = parse_soldering(obj.get("soldering"), n)?;
        let gamma_e = parse_gammas(obj.get("gamma_e"), 2, nv, "gamma_e")?;
        let gamma_f = parse_gammas(obj.get("gamma_f"), n, nv, "gamma_f")?;
        let rho = match obj.get("rho") {
            Some(v) => {
                let t = tensor_from_json(v, n, nv, "rho")?;
                if t.slots() != TWO_FORM_SLOTS {
                    return Err(Error::parse("rho.slots", format!("expected {TWO_FORM_SLOTS:?}")));
                }
                t
            }
            None => IndexedTensor::zeros(n, nv, &TWO_FORM_SLOTS),
        };
        let mut data = ChartWeylData::new(n, soldering, gamma_e, gamma_f, rho)?;
        if let Some(cap) = degree_cap.or(file_cap) {
            data = data.with_degree_cap(cap);
        }
        let check = validate(&data);
        if let Some(f) = check.failures().next() {
            let path = match f.id.as_str() {
                "validate.soldering_inverse" => "soldering",
                "validate.trace_compatibility" => "gamma_e",
                _ => "$",
            };
            return Err(Error::parse(path, f.detail.clone().unwrap_or_else(|| f.id.clone())));
        }
        if obj.get("normalize").and_then(Value::as_bool).unwrap_or(false) {
            data = normalize_rho(&weylize(&data)?)?;
        }

        let mut sections = BTreeMap::new();
        if let Some(v) = obj.get("sections") {
            let so = v.as_object().ok_or_else(|| Error::parse("sections", "must be an object"))?;
            for (name, s) in so {
                let p = format!("sections.{name}");
                let o = s.as_object().ok_or_else(|| Error::parse(&p, "section must be an object"))?;
                let bundle: Bundle = get(o, "bundle", &p)?
                    .as_str()
                    .ok_or_else(|| Error::parse(format!("{p}.bundle"), "must be a string"))?
                    .parse()
                    .map_err(|e: Error| Error::parse(format!("{p}.bundle"), e.to_string()))?;
                let comps = as_array(get(o, "components", &p)?, &format!("{p}.components"), "components")?;
                let slot = bundle.slot();
                if comps.len() != slot.dim(n) {
                    return Err(Error::parse(
                        format!("{p}.components"),
                        format!("expected {} components, got {}", slot.dim(n), comps.len()),
                    ));
                }
                let polys = comps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| poly_from_json(c, nv, &format!("{p}.components[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let t = IndexedTensor::from_components(n, nv, &[slot], polys)?;
                t.check_degree(data.degree_cap(), &p).map_err(|e| Error::parse(&p, e.to_string()))?;
                sections.insert(name.clone(), t);
            }
        }

        let mut points = BTreeMap::new();
        if let Some(v) = obj.get("points") {
            let po = v.as_object().ok_or_else(|| Error::parse("points", "must be an object"))?;
            for (name, pv) in po {
                let p = format!("points.{name}");
                let list = match pv {
                    Value::Array(a) => a
                        .iter()
                        .enumerate()
                        .map(|(i, x)| parse_point(x, nv, &format!("{p}[{i}]")))
                        .collect::<Result<Vec<_>>>()?,
                    Value::Object(o) => {
                        let of = get(o, "zero_set_of", &p)?
                            .as_str()
                            .ok_or_else(|| Error::parse(format!("{p}.zero_set_of"), "must be a section name"))?;
                        let s = sections
                            .get(of)
                            .ok_or_else(|| Error::parse(format!("{p}.zero_set_of"), format!("no section {of:?}")))?;
                        let count = as_usize(get(o, "count", &p)?, &format!("{p}.count"))?;
                        let pseed = match o.get("seed") {
                            Some(v) => {
                                v.as_u64().ok_or_else(|| Error::parse(format!("{p}.seed"), "must be an integer"))?
                            }
                            None => seed.unwrap_or(0),
                        };
                        let z = affine_zero_set(s)
                            .map_err(|e| Error::parse(format!("{p}.zero_set_of"), e.to_string()))?
                            .ok_or_else(|| Error::parse(format!("{p}.zero_set_of"), "the zero set is empty"))?;
                        z.sample(count, pseed)
                    }
                    _ => return Err(Error::parse(&p, "expected a list of points or a zero_set_of object")),
                };
                points.insert(name.clone(), list);
            }
        }
        Ok(ChartFile { data, sections, points, seed })
    }

    pub fn load(path: &Path, degree_cap: Option<u32>) -> Result<Self> {
        ChartFile::parse(&std::fs::read_to_string(path)?, degree_cap)
    }

    pub fn section(&self, name: &str) -> Result<&IndexedTensor> {
        self.sections.get(name).ok_or_else(|| Error::parse(format!("sections.{name}"), "no such section"))
    }

    pub fn point_set(&self, name: &str) -> Result<&[Vec<Q>]> {
        self.points
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::parse(format!("points.{name}"), "no such point set"))
    }

    /// The explicit form: all connection data written out, points listed.
    pub fn to_json(&self) -> Value {
        let d = &self.data;
        let soldering = match d.soldering().shears() {
            Some([]) => json!("identity"),
            Some(sh) => json!({
                "shears": sh.iter().map(|s| json!({"row": s.row, "col": s.col, "entry": poly_to_json(&s.entry)})).collect::<Vec<_>>()
            }),
            None => json!({
                "matrix": matrix_to_json(d.soldering().matrix()),
                "inverse": matrix_to_json(d.soldering().inverse()),
            }),
        };
        let sections: Map<String, Value> = self
            .sections
            .iter()
            .map(|(k, s)| {
                let b = Bundle::of_section(s).expect("sections are BGG sections");
                (
                    k.clone(),
                    json!({"bundle": b, "components": s.components().iter().map(poly_to_json).collect::<Vec<_>>()}),
                )
            })
            .collect();
        let points: Map<String, Value> = self
            .points
            .iter()
            .map(|(k, ps)| {
                (
                    k.clone(),
                    Value::Array(ps.iter().map(|x| json!(x.iter().map(format_q).collect::<Vec<_>>())).collect()),
                )
            })
            .collect();
        let mut meta = Map::new();
        meta.insert("degree_cap".into(), json!(d.degree_cap()));
        if let Some(s) = self.seed {
            meta.insert("seed".into(), json!(s));
        }
        json!({
            "n": d.n(),
            "nvars": d.nvars(),
            "soldering": soldering,
            "gamma_e": d.gamma_e().iter().map(matrix_to_json).collect::<Vec<_>>(),
            "gamma_f": d.gamma_f().iter().map(matrix_to_json).collect::<Vec<_>>(),
            "rho": tensor_to_json(d.rho()),
            "sections": sections,
            "points": points,
            "metadata": meta,
        })
    }
}
