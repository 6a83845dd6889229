//! The interchange document format: a JSON-compatible grammar with a
//! canonical emitter (sorted keys, %.17g floats) so output is
//! byte-reproducible.

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::bimod::{Bimodule, BimoduleMap};
use crate::linalg::{CMatrix, C64};
use crate::modcat::{ModuleMorphism, ModuleObject, Presentation};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DocError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },
}

fn schema(field: &str, message: &str) -> DocError {
    DocError::Schema {
        field: field.to_string(),
        message: message.to_string(),
    }
}

/// printf-style %.17g: 17 significant digits, scientific notation for
/// extreme exponents, trailing zeros stripped.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        // Normalize the sign of zero; it carries no information here.
        return "0".to_string();
    }
    let sci = format!("{:.*e}", 16, x);
    let epos = sci.find('e').unwrap();
    let exp: i32 = sci[epos + 1..].parse().unwrap();
    if exp < -4 || exp >= 17 {
        let mant = sci[..epos].trim_end_matches('0').trim_end_matches('.');
        format!(
            "{}e{}{:02}",
            mant,
            if exp < 0 { "-" } else { "+" },
            exp.abs()
        )
    } else {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    }
}

/// Canonical emission: object keys sorted, floats via fmt_g17, no
/// insignificant whitespace.
pub fn emit_value(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_g17(n.as_f64().unwrap()));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            // serde_json's default map is ordered by key.
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

/// A parsed, schema-validated document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(MultiMatrixAlgebra),
    Module(ModuleObject),
    Morphism(ModuleMorphism),
    Bimodule(Bimodule),
    BimoduleMap(BimoduleMap),
    Functor(Bimodule),
    Presentation(Presentation),
    Nat(BimoduleMap),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::Module(_) => "module",
            Document::Morphism(_) => "morphism",
            Document::Bimodule(_) => "bimodule",
            Document::BimoduleMap(_) => "bimodule-map",
            Document::Functor(_) => "functor",
            Document::Presentation(_) => "presentation",
            Document::Nat(_) => "nat",
        }
    }
}

pub fn parse(text: &str) -> Result<Document, DocError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value(&value)
}

fn get<'a>(obj: &'a Value, field: &str) -> Result<&'a Value, DocError> {
    obj.get(field)
        .ok_or_else(|| schema(field, "missing required field"))
}

fn usize_list(v: &Value, field: &str) -> Result<Vec<usize>, DocError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(field, "expected an array of non-negative integers"))?;
    arr.iter()
        .map(|x| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| schema(field, "expected a non-negative integer"))
        })
        .collect()
}

fn usize_grid(v: &Value, field: &str) -> Result<Vec<Vec<usize>>, DocError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(field, "expected an array of rows"))?;
    arr.iter().map(|row| usize_list(row, field)).collect()
}

fn complex(v: &Value, field: &str) -> Result<C64, DocError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(field, "complex scalar must be [re, im]"))?;
    if arr.len() != 2 {
        return Err(schema(field, "complex scalar must be [re, im]"));
    }
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| schema(field, "complex part must be a number"))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| schema(field, "complex part must be a number"))?;
    Ok(C64::new(re, im))
}

fn matrix(v: &Value, field: &str) -> Result<CMatrix, DocError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema(field, "matrix must be an array of rows"))?;
    let nrows = rows.len();
    let mut data = Vec::new();
    let mut ncols = 0;
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| schema(field, "matrix row must be an array"))?;
        if i == 0 {
            ncols = entries.len();
        } else if entries.len() != ncols {
            return Err(schema(field, "ragged matrix rows"));
        }
        for e in entries {
            data.push(complex(e, field)?);
        }
    }
    Ok(CMatrix {
        rows: nrows,
        cols: ncols,
        data,
    })
}

fn algebra_from(v: &Value, field: &str) -> Result<MultiMatrixAlgebra, DocError> {
    let blocks = usize_list(v, field)?;
    if blocks.is_empty() || blocks.iter().any(|&b| b == 0) {
        return Err(schema(field, "block sizes must be positive"));
    }
    Ok(MultiMatrixAlgebra::new(blocks))
}

fn bimodule_from(obj: &Value) -> Result<Bimodule, DocError> {
    let left = algebra_from(get(obj, "left_blocks")?, "left_blocks")?;
    let right = algebra_from(get(obj, "right_blocks")?, "right_blocks")?;
    let mult = usize_grid(get(obj, "mult")?, "mult")?;
    if mult.len() != left.num_blocks() || mult.iter().any(|r| r.len() != right.num_blocks()) {
        return Err(schema("mult", "multiplicity grid shape must match block counts"));
    }
    Ok(Bimodule::new(left, right, mult))
}

fn bimodule_map_from(obj: &Value) -> Result<BimoduleMap, DocError> {
    let left = algebra_from(get(obj, "left_blocks")?, "left_blocks")?;
    let right = algebra_from(get(obj, "right_blocks")?, "right_blocks")?;
    let smult = usize_grid(get(obj, "source_mult")?, "source_mult")?;
    let tmult = usize_grid(get(obj, "target_mult")?, "target_mult")?;
    for (name, m) in [("source_mult", &smult), ("target_mult", &tmult)] {
        if m.len() != left.num_blocks() || m.iter().any(|r| r.len() != right.num_blocks()) {
            return Err(schema(name, "multiplicity grid shape must match block counts"));
        }
    }
    let source = Bimodule::new(left.clone(), right.clone(), smult);
    let target = Bimodule::new(left, right, tmult);
    let cells_v = get(obj, "cells")?
        .as_array()
        .ok_or_else(|| schema("cells", "expected an array of rows of matrices"))?;
    if cells_v.len() != source.mult.len() {
        return Err(schema("cells", "cell grid must match block counts"));
    }
    let mut cells = Vec::new();
    for row in cells_v {
        let row_v = row
            .as_array()
            .ok_or_else(|| schema("cells", "expected an array of matrices"))?;
        let mut out_row = Vec::new();
        for cell in row_v {
            out_row.push(matrix(cell, "cells")?);
        }
        cells.push(out_row);
    }
    BimoduleMap::new(source, target, cells)
        .map_err(|e| schema("cells", &format!("cell shapes inconsistent with multiplicities: {e}")))
}

pub fn from_value(value: &Value) -> Result<Document, DocError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("<root>", "document must be a JSON object"))?;
    let _ = obj;
    let kind = get(value, "kind")?
        .as_str()
        .ok_or_else(|| schema("kind", "kind must be a string"))?;
    match kind {
        "algebra" => Ok(Document::Algebra(algebra_from(
            get(value, "blocks")?,
            "blocks",
        )?)),
        "module" => {
            let algebra = algebra_from(get(value, "blocks")?, "blocks")?;
            let mult = usize_list(get(value, "mult")?, "mult")?;
            if mult.len() != algebra.num_blocks() {
                return Err(schema("mult", "multiplicity length must match block count"));
            }
            Ok(Document::Module(ModuleObject::new(algebra, mult)))
        }
        "morphism" => {
            let algebra = algebra_from(get(value, "blocks")?, "blocks")?;
            let smult = usize_list(get(value, "source_mult")?, "source_mult")?;
            let tmult = usize_list(get(value, "target_mult")?, "target_mult")?;
            if smult.len() != algebra.num_blocks() || tmult.len() != algebra.num_blocks() {
                return Err(schema("source_mult", "multiplicity length must match block count"));
            }
            let source = ModuleObject::new(algebra.clone(), smult);
            let target = ModuleObject::new(algebra, tmult);
            let cells_v = get(value, "cells")?
                .as_array()
                .ok_or_else(|| schema("cells", "expected an array of matrices"))?;
            let mut blocks = Vec::new();
            for cell in cells_v {
                blocks.push(matrix(cell, "cells")?);
            }
            ModuleMorphism::new(source, target, blocks)
                .map(Document::Morphism)
                .map_err(|e| schema("cells", &format!("{e}")))
        }
        "bimodule" => Ok(Document::Bimodule(bimodule_from(value)?)),
        "bimodule-map" => Ok(Document::BimoduleMap(bimodule_map_from(value)?)),
        "functor" => Ok(Document::Functor(bimodule_from(value)?)),
        "nat" => Ok(Document::Nat(bimodule_map_from(value)?)),
        "presentation" => {
            let algebra = algebra_from(get(value, "blocks")?, "blocks")?;
            let projs_v = get(value, "projections")?
                .as_array()
                .ok_or_else(|| schema("projections", "expected an array of elements"))?;
            let mut projections = Vec::new();
            for p in projs_v {
                let blocks_v = p
                    .as_array()
                    .ok_or_else(|| schema("projections", "element must be an array of block matrices"))?;
                if blocks_v.len() != algebra.num_blocks() {
                    return Err(schema("projections", "element must have one matrix per block"));
                }
                let mut blocks = Vec::new();
                for (i, b) in blocks_v.iter().enumerate() {
                    let m = matrix(b, "projections")?;
                    if m.rows != algebra.blocks()[i] || m.cols != algebra.blocks()[i] {
                        return Err(schema("projections", "block matrix size mismatch"));
                    }
                    blocks.push(m);
                }
                projections.push(
                    AlgebraElement::new(algebra.clone(), blocks)
                        .map_err(|e| schema("projections", &format!("{e}")))?,
                );
            }
            Ok(Document::Presentation(Presentation {
                algebra,
                projections,
            }))
        }
        other => Err(schema("kind", &format!("unknown document kind `{other}`"))),
    }
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|r| {
                Value::Array(
                    (0..m.cols)
                        .map(|c| {
                            let z = m[(r, c)];
                            Value::Array(vec![json_f64(z.re), json_f64(z.im)])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn usize_value(xs: &[usize]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Number(x.into())).collect())
}

pub fn to_value(doc: &Document) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("kind".into(), Value::String(doc.kind().into()));
    match doc {
        Document::Algebra(a) => {
            map.insert("blocks".into(), usize_value(a.blocks()));
        }
        Document::Module(m) => {
            map.insert("blocks".into(), usize_value(m.algebra.blocks()));
            map.insert("mult".into(), usize_value(&m.mult));
        }
        Document::Morphism(f) => {
            map.insert("blocks".into(), usize_value(f.source.algebra.blocks()));
            map.insert("source_mult".into(), usize_value(&f.source.mult));
            map.insert("target_mult".into(), usize_value(&f.target.mult));
            map.insert(
                "cells".into(),
                Value::Array(f.blocks.iter().map(matrix_value).collect()),
            );
        }
        Document::Bimodule(b) | Document::Functor(b) => {
            map.insert("left_blocks".into(), usize_value(b.left.blocks()));
            map.insert("right_blocks".into(), usize_value(b.right.blocks()));
            map.insert(
                "mult".into(),
                Value::Array(b.mult.iter().map(|r| usize_value(r)).collect()),
            );
        }
        Document::BimoduleMap(f) | Document::Nat(f) => {
            map.insert("left_blocks".into(), usize_value(f.source.left.blocks()));
            map.insert("right_blocks".into(), usize_value(f.source.right.blocks()));
            map.insert(
                "source_mult".into(),
                Value::Array(f.source.mult.iter().map(|r| usize_value(r)).collect()),
            );
            map.insert(
                "target_mult".into(),
                Value::Array(f.target.mult.iter().map(|r| usize_value(r)).collect()),
            );
            map.insert(
                "cells".into(),
                Value::Array(
                    f.cells
                        .iter()
                        .map(|row| Value::Array(row.iter().map(matrix_value).collect()))
                        .collect(),
                ),
            );
        }
        Document::Presentation(p) => {
            map.insert("blocks".into(), usize_value(p.algebra.blocks()));
            map.insert(
                "projections".into(),
                Value::Array(
                    p.projections
                        .iter()
                        .map(|e| Value::Array(e.blocks.iter().map(matrix_value).collect()))
                        .collect(),
                ),
            );
        }
    }
    Value::Object(map)
}

pub fn emit(doc: &Document) -> String {
    emit_value(&to_value(doc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_g17_cases() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-0.0), "0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(1e-9), "1.0000000000000001e-09");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        // Round-trips double precision exactly.
        for &x in &[1.0 / 3.0, 2.0_f64.sqrt(), 6.02214076e23, -1.2345e-300] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn parse_emit_roundtrip_algebra() {
        let text = r#"{"blocks":[2,3],"kind":"algebra"}"#;
        let doc = parse(text).unwrap();
        assert_eq!(emit(&doc), text);
        match doc {
            Document::Algebra(a) => assert_eq!(a.blocks(), &[2, 3]),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn parse_module() {
        let doc = parse(r#"{"kind":"module","blocks":[2,3],"mult":[1,2]}"#).unwrap();
        match doc {
            Document::Module(m) => {
                assert_eq!(m.mult, vec![1, 2]);
                assert_eq!(m.dim(), 8);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn schema_error_names_field() {
        let err = parse(r#"{"kind":"module","blocks":[2,3],"mult":[1]}"#).unwrap_err();
        match err {
            DocError::Schema { field, .. } => assert_eq!(field, "mult"),
            _ => panic!("expected schema error"),
        }
    }

    #[test]
    fn parse_error_has_position() {
        let err = parse("{\"kind\":\n!").unwrap_err();
        match err {
            DocError::Parse { line, .. } => assert_eq!(line, 2),
            _ => panic!("expected parse error"),
        }
    }

    #[test]
    fn canonical_emit_sorts_keys() {
        let v: Value = serde_json::from_str(r#"{"z":1,"a":[1.5,true,null]}"#).unwrap();
        assert_eq!(emit_value(&v), r#"{"a":[1.5,true,null],"z":1}"#);
    }

    #[test]
    fn morphism_roundtrip() {
        let text = r#"{"cells":[[[[1,0],[0,-1]]]],"kind":"morphism","blocks":[2],"source_mult":[2],"target_mult":[1]}"#;
        let doc = parse(text).unwrap();
        let emitted = emit(&doc);
        let doc2 = parse(&emitted).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(emit(&doc2), emitted);
    }

    #[test]
    fn bimodule_map_roundtrip() {
        let text = r#"{"kind":"bimodule-map","left_blocks":[1],"right_blocks":[2],"source_mult":[[1]],"target_mult":[[1]],"cells":[[[[[0,1]]]]]}"#;
        let doc = parse(text).unwrap();
        let emitted = emit(&doc);
        assert_eq!(parse(&emitted).unwrap(), doc);
    }
}
