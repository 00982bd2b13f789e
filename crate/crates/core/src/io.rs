//! JSON input formats.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.
//! Every loader reports problems as [`Error::Schema`] with a path to the
//! offending field.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::circle::{CircleModel, Perturbation, Reference};
use crate::complex_torsion::{BilinearStructure, CohomologyData, GradedComplex};
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, C64};
use crate::thom_smale::{make_circle_morse, CriticalForms, CriticalPoint, Instanton, MorseSystem};
use crate::turaev::{EulerStructure, KnotPresentation};

type Pair = [f64; 2];
type Rows = Vec<Vec<Pair>>;

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { field: field.into(), message: message.into() }
}

/// Parse JSON text, reporting the failing path on error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })
}

fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn matrix(field: &str, rows: &Rows, shape: Option<(usize, usize)>) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(k) = rows.iter().position(|row| row.len() != c) {
        return Err(schema(format!("{field}[{k}]"), format!("row has {} entries, expected {c}", rows[k].len())));
    }
    // An empty list stands for any matrix with a zero dimension.
    if let Some((er, ec)) = shape {
        if r == 0 {
            return Ok(CMatrix::zeros(er, ec));
        }
        if (r, c) != (er, ec) {
            return Err(schema(field, format!("matrix is {r}x{c}, expected {er}x{ec}")));
        }
    }
    let data = rows.iter().flatten().map(|&p| complex(p)).collect();
    CMatrix::from_vec(r, c, data)
}

/// `complex.json`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub dims: Vec<usize>,
    pub differentials: Vec<Rows>,
    pub grams: Vec<Rows>,
    #[serde(default)]
    pub cohomology: Option<Vec<Rows>>,
}

impl ComplexFile {
    pub fn build(&self) -> Result<(GradedComplex, BilinearStructure, Option<CohomologyData>)> {
        let n = self.dims.len();
        if n == 0 {
            return Err(schema("dims", "at least one degree is required"));
        }
        if self.differentials.len() + 1 != n {
            return Err(schema("differentials", format!("{} differentials for {n} degrees", self.differentials.len())));
        }
        if self.grams.len() != n {
            return Err(schema("grams", format!("{} Gram matrices for {n} degrees", self.grams.len())));
        }
        let ds = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, d)| matrix(&format!("differentials[{i}]"), d, Some((self.dims[i + 1], self.dims[i]))))
            .collect::<Result<Vec<_>>>()?;
        let gs = self
            .grams
            .iter()
            .enumerate()
            .map(|(i, g)| matrix(&format!("grams[{i}]"), g, Some((self.dims[i], self.dims[i]))))
            .collect::<Result<Vec<_>>>()?;
        let h = match &self.cohomology {
            None => None,
            Some(hs) => {
                if hs.len() != n {
                    return Err(schema("cohomology", format!("{} bases for {n} degrees", hs.len())));
                }
                let bases = hs
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        // Columns of the basis are given as rows of the list.
                        let field = format!("cohomology[{i}]");
                        if rows.iter().any(|v| v.len() != self.dims[i]) {
                            return Err(schema(field, format!("representatives must have {} entries", self.dims[i])));
                        }
                        Ok(matrix(&field, rows, None)?.transpose().resized(self.dims[i]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(CohomologyData::new(bases))
            }
        };
        Ok((GradedComplex::new(self.dims.clone(), ds)?, BilinearStructure::new(gs)?, h))
    }
}

trait Resized {
    fn resized(self, rows: usize) -> CMatrix;
}

impl Resized for CMatrix {
    /// A `0x0` matrix becomes `rows x 0`.
    fn resized(self, rows: usize) -> CMatrix {
        if self.cols() == 0 {
            CMatrix::zeros(rows, 0)
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub id: String,
    pub index: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstantonEntry {
    pub from: String,
    pub to: String,
    pub sign: i8,
    pub holonomy: Rows,
}

/// A circle system generated instead of listed.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleEntry {
    pub pairs: usize,
    pub seam: Option<usize>,
    pub lambda: Pair,
}

/// `morse.json`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseFile {
    #[serde(default = "one")]
    pub rank: usize,
    #[serde(default)]
    pub points: Vec<PointEntry>,
    #[serde(default)]
    pub instantons: Vec<InstantonEntry>,
    #[serde(default)]
    pub forms: BTreeMap<String, Rows>,
    #[serde(default)]
    pub circle: Option<CircleEntry>,
}

fn one() -> usize {
    1
}

impl MorseFile {
    pub fn system(&self) -> Result<MorseSystem> {
        if let Some(c) = &self.circle {
            if !self.points.is_empty() || !self.instantons.is_empty() {
                return Err(schema("circle", "give either `circle` or `points`/`instantons`, not both"));
            }
            if c.pairs == 0 {
                return Err(schema("circle.pairs", "must be positive"));
            }
            let seam = c.seam.unwrap_or(crate::thom_smale::default_seam(c.pairs));
            if seam >= 2 * c.pairs {
                return Err(schema("circle.seam", format!("must be below {}", 2 * c.pairs)));
            }
            return make_circle_morse(c.pairs, complex(c.lambda), seam);
        }
        let mut points = Vec::new();
        for (k, p) in self.points.iter().enumerate() {
            if self.points[..k].iter().any(|q| q.id == p.id) {
                return Err(schema(format!("points[{k}].id"), format!("duplicate id `{}`", p.id)));
            }
            points.push(CriticalPoint { label: p.id.clone(), index: p.index });
        }
        let find = |field: String, id: &str| {
            self.points.iter().position(|p| p.id == id).ok_or_else(|| schema(field, format!("unknown point `{id}`")))
        };
        let mut instantons = Vec::new();
        for (k, g) in self.instantons.iter().enumerate() {
            let from = find(format!("instantons[{k}].from"), &g.from)?;
            let to = find(format!("instantons[{k}].to"), &g.to)?;
            if g.sign != 1 && g.sign != -1 {
                return Err(schema(format!("instantons[{k}].sign"), "must be 1 or -1"));
            }
            let holonomy = matrix(&format!("instantons[{k}].holonomy"), &g.holonomy, Some((self.rank, self.rank)))?;
            instantons.push(Instanton { from, to, sign: g.sign, holonomy });
        }
        MorseSystem::new(self.rank, points, instantons)
    }

    /// Forms keyed by point label; missing points get the identity.
    pub fn forms(&self, ms: &MorseSystem) -> Result<CriticalForms> {
        for id in self.forms.keys() {
            if ms.position(id).is_none() {
                return Err(schema(format!("forms.{id}"), "no critical point with this id"));
            }
        }
        let forms = ms
            .points()
            .iter()
            .map(|p| match self.forms.get(&p.label) {
                Some(rows) => matrix(&format!("forms.{}", p.label), rows, Some((ms.rank(), ms.rank()))),
                None => Ok(CMatrix::identity(ms.rank())),
            })
            .collect::<Result<Vec<_>>>()?;
        CriticalForms::new(forms)
    }
}

/// Parse an Euler structure given as `base:w0,w1,…` or `w0,w1,…` (base is
/// then the first point). Windings are around the circle generator.
pub fn parse_euler(spec: &str, ms: &MorseSystem) -> Result<EulerStructure> {
    let (base, list) = match spec.split_once(':') {
        Some((b, l)) => (b.trim().to_string(), l),
        None => (ms.points()[0].label.clone(), spec),
    };
    if ms.position(&base).is_none() {
        return Err(schema("euler", format!("unknown base point `{base}`")));
    }
    let windings = list
        .split(',')
        .map(|w| w.trim().parse::<i32>().map_err(|_| schema("euler", format!("`{w}` is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    if windings.len() != ms.points().len() {
        return Err(schema("euler", format!("{} windings for {} points", windings.len(), ms.points().len())));
    }
    Ok(EulerStructure::circle(&base, &windings))
}

/// `knot.json`.
pub fn load_knot(text: &str) -> Result<KnotPresentation> {
    let raw: KnotPresentation = from_json(text)?;
    KnotPresentation::new(raw.generators, raw.relators).map_err(|e| match e {
        Error::Presentation(m) => schema("relators", m),
        other => other,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PhiEntry {
    Zero,
    Sin {
        amp: f64,
        #[serde(default = "one_u32")]
        freq: u32,
    },
    Cos {
        amp: f64,
        #[serde(default = "one_u32")]
        freq: u32,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialEntry {
    Cos { wells: u32 },
}

fn one_u32() -> u32 {
    1
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

/// `circle.json`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleFile {
    #[serde(rename = "L", default = "two_pi")]
    pub length: f64,
    /// One holonomy, or a list for a diagonal representation.
    pub lambda: Holonomy,
    #[serde(default)]
    pub phi: Option<PhiEntry>,
    #[serde(default)]
    pub f: Option<PotentialEntry>,
    /// Width of the flat windows around critical points, as a fraction of
    /// the arc between them. Absent means the linear reference.
    #[serde(default)]
    pub flatten: Option<f64>,
    #[serde(rename = "N", default)]
    pub n: Option<usize>,
    #[serde(rename = "T", default)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Holonomy {
    One(Pair),
    Many(Vec<Pair>),
}

impl CircleFile {
    /// The undeformed model; `T` is left to the caller.
    pub fn model(&self) -> Result<CircleModel> {
        let hol: Vec<C64> = match &self.lambda {
            Holonomy::One(p) => vec![complex(*p)],
            Holonomy::Many(ps) => ps.iter().map(|&p| complex(p)).collect(),
        };
        let wrap = |field: &'static str| move |e: Error| schema(field, e.to_string());
        let mut m = CircleModel::with_holonomies(self.length, hol).map_err(wrap("lambda"))?;
        if let Some(PotentialEntry::Cos { wells }) = self.f {
            m = m.with_potential(wells).map_err(wrap("f.wells"))?;
        }
        if let Some(w) = self.flatten {
            m = m.with_reference(Reference::Flattened { window: w }).map_err(wrap("flatten"))?;
        }
        let p = match self.phi {
            None | Some(PhiEntry::Zero) => Perturbation::Zero,
            Some(PhiEntry::Sin { amp, freq }) => Perturbation::Sin { amp, freq },
            Some(PhiEntry::Cos { amp, freq }) => Perturbation::Cos { amp, freq },
        };
        m.with_perturbation(p).map_err(wrap("phi"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_torsion::torsion_form;

    #[test]
    fn two_term_complex() {
        let text = r#"{"dims":[1,1],"differentials":[[[[3,0]]]],"grams":[[[[1,0]]],[[[1,0]]]]}"#;
        let f: ComplexFile = from_json(text).unwrap();
        let (c, b, h) = f.build().unwrap();
        assert!(h.is_none());
        let h = crate::complex_torsion::cohomology(&c);
        let t = torsion_form(&c, &b, &h).unwrap();
        assert!((t - C64::new(1.0 / 9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn bad_field_is_located() {
        let text = r#"{"dims":[1,1],"differentials":[[[[3,0,7]]]],"grams":[]}"#;
        match from_json::<ComplexFile>(text) {
            Err(Error::Schema { field, .. }) => assert!(field.starts_with("differentials[0]"), "{field}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shape_mismatch() {
        let text = r#"{"dims":[1,2],"differentials":[[[[3,0]]]],"grams":[[[[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        let f: ComplexFile = from_json(text).unwrap();
        assert!(matches!(f.build(), Err(Error::Schema { field, .. }) if field == "differentials[0]"));
    }

    #[test]
    fn circle_morse_from_file() {
        let f: MorseFile = from_json(r#"{"circle":{"pairs":2,"lambda":[2,0]}}"#).unwrap();
        let ms = f.system().unwrap();
        assert_eq!(ms.points().len(), 4);
        let e = parse_euler("c0:0,0,0,0", &ms).unwrap();
        assert_eq!(e.base, "c0");
        assert!(parse_euler("0,0", &ms).is_err());
    }

    #[test]
    fn listed_morse_system() {
        let text = r#"{
            "rank": 1,
            "points": [{"id":"m","index":0},{"id":"M","index":1}],
            "instantons": [
                {"from":"M","to":"m","sign":1,"holonomy":[[[2,0]]]},
                {"from":"M","to":"m","sign":-1,"holonomy":[[[1,0]]]}
            ],
            "forms": {"m": [[[2,0]]]}
        }"#;
        let f: MorseFile = from_json(text).unwrap();
        let ms = f.system().unwrap();
        let forms = f.forms(&ms).unwrap();
        assert_eq!(forms.forms()[0][(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn circle_file() {
        let text = r#"{"L":6.283185307179586,"lambda":[2,0],"phi":{"kind":"sin","amp":0.3},"f":{"kind":"cos","wells":1},"N":64,"T":5}"#;
        let f: CircleFile = from_json(text).unwrap();
        let m = f.model().unwrap();
        assert_eq!(m.potential().unwrap().wells, 1);
        assert_eq!(f.n, Some(64));
        assert!(from_json::<CircleFile>(r#"{"lambda":[2,0],"phi":{"kind":"tan"}}"#).is_err());
    }
}
