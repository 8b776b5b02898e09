//! JSON artifacts. Every file records its schema version, its kind and the
//! field it lives in. Words are written as hex strings (`"0x1f"`); subspaces
//! are reduced again on load, so any spanning list is accepted.

use std::path::Path;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::analysis::AnalysisReport;
use crate::error::{Error, Result};
use crate::families::WzFamily;
use crate::field::{Elem, FieldCtx, GoldParams};
use crate::linalg::Subspace;
use crate::pairs::{Provenance, TiPair};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses a word written in hex, with or without `0x`.
pub fn parse_hex(s: &str) -> std::result::Result<u32, String> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u32::from_str_radix(digits, 16).map_err(|e| format!("bad hex word {s:?}: {e}"))
}

pub fn hex(w: u32) -> String {
    format!("{w:#x}")
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&hex(self.0))
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Elem, D::Error> {
        let s = String::deserialize(d)?;
        parse_hex(&s).map(Elem).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    width: u32,
    basis: Vec<Elem>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            width: self.width(),
            basis: self.basis().iter().map(|&w| Elem(w)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Subspace, D::Error> {
        let r = SubspaceRepr::deserialize(d)?;
        if r.width > 32 {
            return Err(de::Error::custom(format!("width {} exceeds 32", r.width)));
        }
        if let Some(w) = r.basis.iter().find(|w| r.width < 32 && w.0 >> r.width != 0) {
            return Err(de::Error::custom(format!("{w} does not fit in {} bits", r.width)));
        }
        Ok(Subspace::span(r.width, r.basis.iter().map(|w| w.0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub n: u32,
    #[serde(rename = "modulus_bits")]
    pub modulus: Elem,
}

impl FieldInfo {
    pub fn of(ctx: &FieldCtx) -> FieldInfo {
        FieldInfo {
            n: ctx.n(),
            modulus: Elem(ctx.modulus()),
        }
    }

    pub fn context(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.n, Some(self.modulus.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WzSpaceArtifact {
    pub gold_i: u32,
    pub space: Subspace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<WzFamily>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiPairArtifact {
    pub gold_i: u32,
    pub y: Subspace,
    pub z: Subspace,
    pub provenance: Provenance,
    pub verified: bool,
}

impl TiPairArtifact {
    pub fn of(gp: &GoldParams, pair: &TiPair) -> TiPairArtifact {
        TiPairArtifact {
            gold_i: gp.i(),
            y: pair.y.clone(),
            z: pair.z.clone(),
            provenance: pair.provenance,
            verified: pair.verified,
        }
    }

    pub fn pair(&self) -> TiPair {
        TiPair {
            y: self.y.clone(),
            z: self.z.clone(),
            provenance: self.provenance,
            verified: self.verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationArtifact {
    pub gold_i: u32,
    pub provenance: Provenance,
    pub codes_equal: bool,
    /// `g(x)` for `x = 0, 1, ..., 2^n - 1`.
    pub table: Vec<Elem>,
    pub report: AnalysisReport,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    WzSpace(WzSpaceArtifact),
    TiPair(TiPairArtifact),
    Permutation(PermutationArtifact),
    Report(serde_json::Value),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::WzSpace(_) => "wz_space",
            Payload::TiPair(_) => "ti_pair",
            Payload::Permutation(_) => "permutation",
            Payload::Report(_) => "report",
        }
    }

    fn to_value(&self) -> serde_json::Result<serde_json::Value> {
        match self {
            Payload::WzSpace(p) => serde_json::to_value(p),
            Payload::TiPair(p) => serde_json::to_value(p),
            Payload::Permutation(p) => serde_json::to_value(p),
            Payload::Report(v) => Ok(v.clone()),
        }
    }

    fn from_value(kind: &str, v: serde_json::Value) -> serde_json::Result<Payload> {
        use serde::de::Error as _;
        Ok(match kind {
            "wz_space" => Payload::WzSpace(serde_json::from_value(v)?),
            "ti_pair" => Payload::TiPair(serde_json::from_value(v)?),
            "permutation" => Payload::Permutation(serde_json::from_value(v)?),
            "report" => Payload::Report(v),
            other => {
                return Err(serde_json::Error::custom(format!(
                    "unknown artifact kind {other:?}"
                )))
            }
        })
    }
}

/// On-disk layout; the payload is decoded once `kind` is known.
#[derive(Serialize, Deserialize)]
struct RawFile {
    schema_version: u32,
    kind: String,
    field: FieldInfo,
    payload: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArtifactFile {
    pub schema_version: u32,
    pub field: FieldInfo,
    pub payload: Payload,
}

impl Serialize for ArtifactFile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        RawFile {
            schema_version: self.schema_version,
            kind: self.payload.kind().into(),
            field: self.field,
            payload: self.payload.to_value().map_err(S::Error::custom)?,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArtifactFile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ArtifactFile, D::Error> {
        let raw = RawFile::deserialize(d)?;
        let payload = Payload::from_value(&raw.kind, raw.payload).map_err(de::Error::custom)?;
        Ok(ArtifactFile {
            schema_version: raw.schema_version,
            field: raw.field,
            payload,
        })
    }
}

impl ArtifactFile {
    pub fn new(ctx: &FieldCtx, payload: Payload) -> ArtifactFile {
        ArtifactFile {
            schema_version: SCHEMA_VERSION,
            field: FieldInfo::of(ctx),
            payload,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<ArtifactFile> {
        let file: ArtifactFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        file.field.context()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<ArtifactFile> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        ArtifactFile::from_json(&text)
    }
}
