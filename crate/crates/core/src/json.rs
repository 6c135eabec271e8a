//! JSON forms of matrices, modules, complexes, reduction traces and reports.
//!
//! Reading goes through typed DTOs so that structural errors carry the
//! path of the offending key; semantic errors (shapes, ring membership,
//! invalid identities) are reported with the same kind of path.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::complex::{ChainComplex, ChainMap, Shape};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::matrix::Matrix;
use crate::minimality::Reduction;
use crate::module::FPModule;
use crate::ring::RingSpec;

/// A matrix entry: an integer, or `[num, den]` for localizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryDto {
    Int(Int),
    Frac(Int, Int),
}

impl Serialize for EntryDto {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EntryDto::Int(n) => n.serialize(s),
            EntryDto::Frac(n, d) => (n, d).serialize(s),
        }
    }
}

struct IntLit(Int);

impl<'de> Deserialize<'de> for IntLit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = IntLit;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<IntLit, E> {
                Ok(IntLit(Int::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<IntLit, E> {
                Ok(IntLit(Int::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<IntLit, E> {
                v.parse().map(IntLit).map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for EntryDto {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = EntryDto;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a [num, den] pair")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<EntryDto, E> {
                Ok(EntryDto::Int(Int::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<EntryDto, E> {
                Ok(EntryDto::Int(Int::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<EntryDto, E> {
                v.parse().map(EntryDto::Int).map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<EntryDto, A::Error> {
                let n: IntLit = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let d: IntLit = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(EntryDto::Frac(n.0, d.0))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<EntryDto>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<MatrixDto>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeDto {
    Bounded { min: i64, max: i64 },
    Periodic { period: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDto {
    pub ring: RingSpec,
    pub shape: ShapeDto,
    #[serde(default)]
    pub modules: BTreeMap<i64, ModuleDto>,
    #[serde(default)]
    pub differentials: BTreeMap<i64, MatrixDto>,
}

fn is_localization(r: &RingSpec) -> bool {
    matches!(r, RingSpec::IntInvert(_) | RingSpec::IntLocalAt(_))
}

impl From<&Matrix> for MatrixDto {
    fn from(m: &Matrix) -> MatrixDto {
        let frac = is_localization(m.ring());
        let entries = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|e| if frac { EntryDto::Frac(e.num().clone(), e.den().clone()) } else { EntryDto::Int(e.num().clone()) })
                    .collect()
            })
            .collect();
        MatrixDto { rows: m.rows(), cols: m.cols(), entries }
    }
}

impl From<&FPModule> for ModuleDto {
    fn from(m: &FPModule) -> ModuleDto {
        if m.is_visibly_free() {
            ModuleDto { free_rank: Some(m.gens()), generators: None, relations: None }
        } else {
            ModuleDto { free_rank: None, generators: Some(m.gens()), relations: Some(m.relations().into()) }
        }
    }
}

impl From<&ChainComplex> for ComplexDto {
    fn from(c: &ChainComplex) -> ComplexDto {
        let shape = match c.shape() {
            Shape::Bounded { min, max } => ShapeDto::Bounded { min, max },
            Shape::Periodic { period } => ShapeDto::Periodic { period },
        };
        let modules = c.degrees().into_iter().filter(|&d| c.gens(d) > 0).map(|d| (d, c.module(d).into())).collect();
        let differentials = c
            .degrees()
            .into_iter()
            .filter(|&d| c.gens(d) > 0 && c.gens(d - 1) > 0)
            .map(|d| (d, MatrixDto::from(c.diff(d).as_ref())))
            .collect();
        ComplexDto { ring: c.ring().clone(), shape, modules, differentials }
    }
}

fn at(path: &str, msg: impl fmt::Display) -> Error {
    Error::Json(format!("{path}: {msg}"))
}

impl MatrixDto {
    pub fn to_matrix(&self, ring: &RingSpec, path: &str) -> Result<Matrix> {
        if self.entries.len() != self.rows {
            return Err(at(&format!("{path}.entries"), format!("expected {} rows, found {}", self.rows, self.entries.len())));
        }
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(at(&format!("{path}.entries[{i}]"), format!("expected {} entries, found {}", self.cols, row.len())));
            }
            for (j, e) in row.iter().enumerate() {
                let elem = match e {
                    EntryDto::Int(n) => Ok(ring.from_int(n)),
                    EntryDto::Frac(n, d) => ring.fraction(n, d),
                };
                data.push(elem.map_err(|err| at(&format!("{path}.entries[{i}][{j}]"), err))?);
            }
        }
        Matrix::new(ring, self.rows, self.cols, data).map_err(|e| at(path, e))
    }
}

impl ModuleDto {
    pub fn to_module(&self, ring: &RingSpec, path: &str) -> Result<FPModule> {
        match (self.free_rank, self.generators, &self.relations) {
            (Some(r), None, None) => Ok(FPModule::free(ring, r)),
            (None, Some(g), Some(rel)) => {
                let m = rel.to_matrix(ring, &format!("{path}.relations"))?;
                FPModule::new(ring, g, m).map_err(|e| at(&format!("{path}.relations"), e))
            }
            (None, Some(g), None) => Ok(FPModule::free(ring, g)),
            (Some(_), _, _) => Err(at(path, "free_rank cannot be combined with generators/relations")),
            (None, None, _) => Err(at(path, "missing key \"generators\" (or \"free_rank\")")),
        }
    }
}

impl ComplexDto {
    /// Builds and validates the complex.
    pub fn to_complex(&self) -> Result<ChainComplex> {
        let r = &self.ring;
        let shape = match self.shape {
            ShapeDto::Bounded { min, max } => Shape::Bounded { min, max },
            ShapeDto::Periodic { period } => {
                if period == 0 {
                    return Err(at("shape.period", "must be positive"));
                }
                Shape::Periodic { period }
            }
        };
        let inside = |d: i64| match shape {
            Shape::Bounded { min, max } => d >= min && d <= max,
            Shape::Periodic { period } => d >= 0 && d < period as i64,
        };
        let mut mods = Vec::new();
        for (d, m) in &self.modules {
            let path = format!("modules.{d}");
            if !inside(*d) {
                return Err(at(&path, "degree lies outside the shape"));
            }
            mods.push((*d, m.to_module(r, &path)?));
        }
        let mut diffs = Vec::new();
        for (d, m) in &self.differentials {
            let path = format!("differentials.{d}");
            if !inside(*d) {
                return Err(at(&path, "degree lies outside the shape"));
            }
            diffs.push((*d, m.to_matrix(r, &path)?));
        }
        let proto = ChainComplex::new(r, shape, mods.clone(), []).map_err(|e| at("modules", e))?;
        for (d, m) in &diffs {
            let want = (proto.gens(d - 1), proto.gens(*d));
            if m.shape() != want {
                return Err(at(
                    &format!("differentials.{d}"),
                    format!("is {}x{}, expected {}x{} (rows index degree {} generators)", m.rows(), m.cols(), want.0, want.1, d - 1),
                ));
            }
        }
        let c = ChainComplex::new(r, shape, mods, diffs).map_err(|e| at("differentials", e))?;
        let issues = c.validate();
        if issues.is_empty() {
            Ok(c)
        } else {
            Err(Error::InvalidComplex(issues))
        }
    }
}

/// Parses JSON text into a DTO, reporting the path of the first bad key.
pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            Error::Json(inner.to_string())
        } else {
            Error::Json(format!("{path}: {inner}"))
        }
    })
}

pub fn parse_complex(text: &str) -> Result<ChainComplex> {
    from_str::<ComplexDto>(text)?.to_complex()
}

/// A module file: `{"ring": ..., "module": FPModule-JSON}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFileDto {
    pub ring: RingSpec,
    pub module: ModuleDto,
}

pub fn parse_module(text: &str) -> Result<FPModule> {
    let dto: ModuleFileDto = from_str(text)?;
    dto.module.to_module(&dto.ring, "module")
}

/// Either a complex or a module file; a module is read as a sphere in degree 0.
pub fn parse_complex_or_module(text: &str) -> Result<ChainComplex> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if v.get("module").is_some() {
        Ok(ChainComplex::sphere(&parse_module(text)?, 0))
    } else {
        parse_complex(text)
    }
}

pub fn complex_to_string(c: &ChainComplex) -> String {
    serde_json::to_string_pretty(&ComplexDto::from(c)).expect("serializable")
}

pub fn module_to_string(m: &FPModule) -> String {
    let dto = ModuleFileDto { ring: m.ring().clone(), module: m.into() };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

/// The serialized form of a reduction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDto {
    pub source: ComplexDto,
    pub moves: Vec<serde_json::Value>,
    pub split_part: ComplexDto,
    pub reduced: ComplexDto,
    /// Per degree: `source → split_part ⊕ reduced` and its inverse.
    pub iso: BTreeMap<i64, MatrixDto>,
    pub iso_inv: BTreeMap<i64, MatrixDto>,
}

impl From<&Reduction> for TraceDto {
    fn from(r: &Reduction) -> TraceDto {
        let degs = r.source.degrees();
        TraceDto {
            source: (&r.source).into(),
            moves: r.moves.iter().map(|m| serde_json::to_value(m).expect("serializable")).collect(),
            split_part: (&r.split_part).into(),
            reduced: (&r.reduced).into(),
            iso: degs.iter().map(|&d| (d, MatrixDto::from(r.iso.component(d).as_ref()))).collect(),
            iso_inv: degs.iter().map(|&d| (d, MatrixDto::from(r.iso_inv.component(d).as_ref()))).collect(),
        }
    }
}

pub fn trace_to_string(r: &Reduction) -> String {
    serde_json::to_string_pretty(&TraceDto::from(r)).expect("serializable")
}

/// Rebuilds a reduction from its serialized trace, checks the iso data
/// and that reducing the source again reproduces the recorded moves.
pub fn replay_trace(text: &str) -> Result<Reduction> {
    let dto: TraceDto = from_str(text)?;
    let source = dto.source.to_complex().map_err(|e| prefix("source", e))?;
    let split = dto.split_part.to_complex().map_err(|e| prefix("split_part", e))?;
    let reduced = dto.reduced.to_complex().map_err(|e| prefix("reduced", e))?;
    let target = ChainComplex::direct_sum(&[&split, &reduced])?;
    let ring = source.ring().clone();
    let mut iso = BTreeMap::new();
    let mut iso_inv = BTreeMap::new();
    for d in source.degrees() {
        let m = dto.iso.get(&d).ok_or_else(|| at(&format!("iso.{d}"), "missing"))?;
        iso.insert(d, m.to_matrix(&ring, &format!("iso.{d}"))?);
        let m = dto.iso_inv.get(&d).ok_or_else(|| at(&format!("iso_inv.{d}"), "missing"))?;
        iso_inv.insert(d, m.to_matrix(&ring, &format!("iso_inv.{d}"))?);
    }
    let iso = ChainMap::new(&source, &target, |d| iso[&d].clone()).map_err(|e| prefix("iso", e))?;
    let iso_inv = ChainMap::new(&target, &source, |d| iso_inv[&d].clone()).map_err(|e| prefix("iso_inv", e))?;
    let again = crate::minimality::reduce(&source)?;
    let moves: Vec<serde_json::Value> = again.moves.iter().map(|m| serde_json::to_value(m).unwrap()).collect();
    if moves != dto.moves {
        return Err(at("moves", "reducing the source does not reproduce the recorded moves"));
    }
    let red = Reduction { source, split_part: split, reduced, iso, iso_inv, moves: again.moves };
    red.verify().map_err(|e| at("iso", e))?;
    Ok(red)
}

fn prefix(p: &str, e: Error) -> Error {
    match e {
        Error::Json(m) => Error::Json(format!("{p}.{m}")),
        other => at(p, other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOLD: &str = r#"{
        "ring": "Z/4",
        "shape": {"kind": "periodic", "period": 1},
        "modules": {"0": {"free_rank": 1}},
        "differentials": {"0": {"rows": 1, "cols": 1, "entries": [[2]]}}
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let c = parse_complex(DOLD).unwrap();
        assert_eq!(c.shape(), Shape::Periodic { period: 1 });
        let text = complex_to_string(&c);
        assert_eq!(parse_complex(&text).unwrap(), c);
        assert_eq!(complex_to_string(&parse_complex(&text).unwrap()), text);
    }

    #[test]
    fn localization_entries_are_pairs() {
        let r = RingSpec::invert(&[5]).unwrap();
        let m = Matrix::new(&r, 1, 2, vec![r.from_i64(2), r.fraction(&Int::from(1), &Int::from(5)).unwrap()]).unwrap();
        let v = serde_json::to_value(MatrixDto::from(&m)).unwrap();
        assert_eq!(v["entries"], serde_json::json!([[[2, 1], [1, 5]]]));
        let back: MatrixDto = serde_json::from_value(v).unwrap();
        assert_eq!(back.to_matrix(&r, "m").unwrap(), m);
    }

    #[test]
    fn errors_name_the_offending_key() {
        let bad = DOLD.replace("\"period\": 1", "\"period\": \"one\"");
        let e = parse_complex(&bad).unwrap_err().to_string();
        assert!(e.contains("shape"), "{e}");
        let bad = DOLD.replace("free_rank", "free_rnak");
        let e = parse_complex(&bad).unwrap_err().to_string();
        assert!(e.contains("modules.0") && e.contains("free_rnak"), "{e}");
        let bad = DOLD.replace("[[2]]", "[[2, 3]]");
        let e = parse_complex(&bad).unwrap_err().to_string();
        assert!(e.contains("differentials.0.entries[0]"), "{e}");
        let bad = DOLD.replace("[[2]]", "[[1]]");
        assert!(matches!(parse_complex(&bad), Err(Error::InvalidComplex(_))));
        let bad = DOLD.replace("Z/4", "Z/1");
        assert!(parse_complex(&bad).unwrap_err().to_string().contains("ring"));
    }

    #[test]
    fn trace_replays() {
        let r = RingSpec::Int;
        let c = ChainComplex::free_bounded(&r, 0, &[2, 2], vec![Matrix::from_ints(&r, &[vec![2, 1], vec![4, 3]])]).unwrap();
        let red = crate::minimality::reduce(&c).unwrap();
        let text = trace_to_string(&red);
        let back = replay_trace(&text).unwrap();
        assert_eq!(back.reduced, red.reduced);
        let tampered = text.replacen("\"degree\": 1", "\"degree\": 0", 1);
        assert!(replay_trace(&tampered).is_err());
    }
}
