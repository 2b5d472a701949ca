//! JSON documents for board covers and short covers.
//!
//! Both kinds share one layout. Board centers are `[a, b]` residue pairs;
//! short-cover centers are triples of coefficient lists, constant term first.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use shortcover::board::{is_cover, BoardCover, BoardPoint, BoardVariant};
use shortcover::{FieldSpec, Plane, ShortCover};

pub const ZERO_BASED: &str = "zero-based";

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Board,
    Short,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub generator: Vec<u32>,
}

impl FieldDoc {
    pub fn of(spec: &FieldSpec) -> FieldDoc {
        FieldDoc {
            p: spec.p(),
            k: spec.k(),
            modulus: spec.modulus().to_vec(),
            generator: spec.coeffs(spec.generator()),
        }
    }

    pub fn spec(&self) -> Result<FieldSpec, String> {
        let spec = FieldSpec::with_modulus(self.p, self.k, self.modulus.clone())
            .map_err(|e| format!("field: {e}"))?;
        if spec.coeffs(spec.generator()) != self.generator {
            return Err(format!(
                "field.generator: {:?} is not the canonical generator {:?}",
                self.generator,
                spec.coeffs(spec.generator())
            ));
        }
        Ok(spec)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<BoardVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDoc>,
    pub indexing: String,
    pub centers: Vec<Value>,
    pub size: usize,
    pub verified: bool,
    pub producer: String,
}

pub fn parse(text: &str) -> Result<CoverDoc, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn render(doc: &CoverDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn board_doc(cover: &BoardCover, field: Option<&FieldSpec>, producer: &str) -> CoverDoc {
    CoverDoc {
        kind: Kind::Board,
        n: Some(cover.n()),
        q: None,
        variant: Some(cover.variant()),
        field: field.map(FieldDoc::of),
        indexing: ZERO_BASED.to_string(),
        centers: cover
            .centers()
            .iter()
            .map(|p| serde_json::json!([p.a, p.b]))
            .collect(),
        size: cover.len(),
        verified: is_cover(cover).covered,
        producer: producer.to_string(),
    }
}

pub fn short_doc(plane: &Plane, cover: &ShortCover, producer: &str) -> CoverDoc {
    let verified = plane
        .is_short_cover(cover)
        .map(|r| r.covered)
        .unwrap_or(false);
    CoverDoc {
        kind: Kind::Short,
        n: None,
        q: Some(cover.q()),
        variant: None,
        field: Some(FieldDoc::of(plane.field())),
        indexing: ZERO_BASED.to_string(),
        centers: cover
            .centers()
            .iter()
            .map(|&v| serde_json::json!(plane.vector_coeffs(v)))
            .collect(),
        size: cover.len(),
        verified,
        producer: producer.to_string(),
    }
}

impl CoverDoc {
    fn expect_kind(&self, kind: Kind) -> Result<(), String> {
        if self.kind != kind {
            return Err(format!("kind: expected {kind:?}, found {:?}", self.kind).to_lowercase());
        }
        if self.indexing != ZERO_BASED {
            return Err(format!(
                "indexing: expected \"{ZERO_BASED}\", found {:?}",
                self.indexing
            ));
        }
        Ok(())
    }

    pub fn board(&self) -> Result<BoardCover, String> {
        self.expect_kind(Kind::Board)?;
        let n = self.n.ok_or("n: missing")?;
        let variant = self.variant.ok_or("variant: missing")?;
        let centers = self
            .centers
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let pair: [u32; 2] = serde_json::from_value(v.clone())
                    .map_err(|_| format!("centers[{i}]: expected [a, b], found {v}"))?;
                let p = BoardPoint {
                    a: pair[0],
                    b: pair[1],
                };
                if p.is_valid(n) {
                    Ok(p)
                } else {
                    Err(format!("centers[{i}]: {v} is not a cell of Z_{n}^2"))
                }
            })
            .collect::<Result<Vec<_>, String>>()?;
        BoardCover::new(n, variant, centers).map_err(|e| e.to_string())
    }

    /// The plane the document lives in and its cover. Without field
    /// metadata the canonical field of order `q` is assumed.
    pub fn short(&self) -> Result<(Plane, ShortCover), String> {
        self.expect_kind(Kind::Short)?;
        let q = self.q.ok_or("q: missing")?;
        let spec = match &self.field {
            Some(f) => {
                let spec = f.spec()?;
                if spec.q() != q {
                    return Err(format!("field: describes GF({}), but q = {q}", spec.q()));
                }
                spec
            }
            None => shortcover::field(q).map_err(|e| format!("q: {e}"))?,
        };
        let plane = Plane::over(Arc::new(spec));
        let centers = self
            .centers
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let coeffs: Vec<Vec<u32>> = serde_json::from_value(v.clone()).map_err(|_| {
                    format!("centers[{i}]: expected three coefficient lists, found {v}")
                })?;
                plane
                    .vector_from_coeffs(&coeffs)
                    .map_err(|e| format!("centers[{i}]: {e}"))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let cover = ShortCover::new(plane.field_arc().clone(), centers)
            .map_err(|e| format!("centers: {e}"))?;
        Ok((plane, cover))
    }
}
