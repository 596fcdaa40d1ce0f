//! JSON operator documents.
//!
//! ```json
//! {
//!   "kind": "cubic",
//!   "n": 3,
//!   "payload": { "entries": [[0, 0, 0, 1.0], [1, 2, 0, 0.5], ...] },
//!   "schema_version": "1"
//! }
//! ```
//!
//! `kind` selects the payload:
//!
//! * `cubic`: `entries` lists `[i, j, k, value]` with `i <= j`; omitted
//!   entries are zero and each entry also sets `p[j][i][k]`.
//! * `f_qso`: `females` plus `mixed`, one `{female, male, distribution}`
//!   row per female-male pair.
//! * `volterra_skew`: `entries` lists `[k, i, a_ki]`; `a_ik = -a_ki` is implied.
//! * `preset`: a named preset with its fields, e.g.
//!   `{"name": "fqso_v0_m2", "a": 0.0, "b": 0.5, "c": 0.5}`.
//!
//! Canonical output sorts keys and writes every float with 17 significant
//! digits, so a saved document reloads bit for bit.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::cubic::{CubicMatrix, RawCubic};
use crate::error::{QsoError, Result};
use crate::operators::{f_qso_raw, FQsoSpec, Preset, SkewMatrix};

pub const SCHEMA_VERSION: &str = "1";

/// Entries in `(1 - NEAR_ONE, 1)` on the empty-body slice draw a warning.
const NEAR_ONE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    pub schema_version: String,
    pub n: usize,
    #[serde(flatten)]
    pub body: OperatorBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum OperatorBody {
    Cubic {
        entries: Vec<(usize, usize, usize, f64)>,
    },
    FQso {
        females: Vec<usize>,
        mixed: Vec<MixedRow>,
    },
    VolterraSkew {
        entries: Vec<(usize, usize, f64)>,
    },
    Preset(Preset),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedRow {
    pub female: usize,
    pub male: usize,
    pub distribution: Vec<f64>,
}

fn doc_err(msg: impl Into<String>) -> QsoError {
    QsoError::Document(msg.into())
}

impl OperatorDocument {
    fn new(n: usize, body: OperatorBody) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            n,
            body,
        }
    }

    /// Sparse cubic document with the nonzero entries `i <= j`.
    pub fn from_matrix(p: &CubicMatrix) -> Self {
        let n = p.n();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let v = p.get(i, j, k);
                    if v != 0.0 {
                        entries.push((i, j, k, v));
                    }
                }
            }
        }
        Self::new(n, OperatorBody::Cubic { entries })
    }

    pub fn from_spec(spec: &FQsoSpec) -> Self {
        let mixed = spec
            .mixed()
            .iter()
            .map(|(&(female, male), d)| MixedRow {
                female,
                male,
                distribution: d.clone(),
            })
            .collect();
        Self::new(
            spec.n(),
            OperatorBody::FQso {
                females: spec.females().to_vec(),
                mixed,
            },
        )
    }

    pub fn from_skew(skew: &SkewMatrix) -> Self {
        let m = skew.m();
        let entries = (0..m)
            .flat_map(|k| ((k + 1)..m).map(move |i| (k, i)))
            .filter(|&(k, i)| skew.get(k, i) != 0.0)
            .map(|(k, i)| (k, i, skew.get(k, i)))
            .collect();
        Self::new(m, OperatorBody::VolterraSkew { entries })
    }

    pub fn from_preset(preset: Preset) -> Result<Self> {
        let n = preset.matrix()?.n();
        Ok(Self::new(n, OperatorBody::Preset(preset)))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(doc_err(format!(
                "schema_version {:?} is not supported (expected {SCHEMA_VERSION:?})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Sorted keys, two-space indent, floats with 17 significant digits.
    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Canonical::default());
        value.serialize(&mut ser)?;
        buf.push(b'\n');
        Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_canonical_json()?)?;
        Ok(())
    }

    /// Expands the payload without the stochasticity check.
    ///
    /// With `symmetrize`, a cubic entry given in both parent orders is
    /// averaged; otherwise that is an error.
    pub fn expand_raw(&self, symmetrize: bool) -> Result<RawCubic> {
        let n = self.n;
        match &self.body {
            OperatorBody::Cubic { entries } => expand_cubic(n, entries, symmetrize),
            OperatorBody::FQso { females, mixed } => {
                let mut table = BTreeMap::new();
                for row in mixed {
                    if table
                        .insert((row.female, row.male), row.distribution.clone())
                        .is_some()
                    {
                        return Err(doc_err(format!(
                            "mixed pair ({}, {}) listed twice",
                            row.female, row.male
                        )));
                    }
                }
                f_qso_raw(n, females, &table)
            }
            OperatorBody::VolterraSkew { entries } => {
                let mut a = vec![0.0; n * n];
                let mut seen = BTreeMap::new();
                for &(k, i, v) in entries {
                    if k >= n || i >= n || k == i {
                        return Err(doc_err(format!("skew entry ({k}, {i}) is out of range")));
                    }
                    if seen.insert((k.min(i), k.max(i)), ()).is_some() {
                        return Err(doc_err(format!("skew pair ({k}, {i}) listed twice")));
                    }
                    a[k * n + i] = v;
                    a[i * n + k] = -v;
                }
                Ok(SkewMatrix::new(n, a)?.to_cubic()?.raw().clone())
            }
            OperatorBody::Preset(preset) => {
                let p = preset.matrix()?;
                if p.n() != n {
                    return Err(doc_err(format!(
                        "preset has {} states but the document declares n = {n}",
                        p.n()
                    )));
                }
                Ok(p.raw().clone())
            }
        }
    }

    pub fn matrix(&self) -> Result<CubicMatrix> {
        self.expand_raw(false)?.try_into()
    }

    /// Empty-body entries just below 1, which count as `< 1` when counting.
    pub fn warnings(&self) -> Vec<String> {
        let OperatorBody::Cubic { entries } = &self.body else {
            return Vec::new();
        };
        entries
            .iter()
            .filter(|e| e.2 == 0 && e.3 < 1.0 && e.3 > 1.0 - NEAR_ONE)
            .map(|&(i, j, _, v)| {
                format!("p[{i}][{j}][0] = {v:?} is within {NEAR_ONE:e} of 1 but counts as < 1")
            })
            .collect()
    }
}

fn expand_cubic(
    n: usize,
    entries: &[(usize, usize, usize, f64)],
    symmetrize: bool,
) -> Result<RawCubic> {
    let mut p = RawCubic::zeros(n)?;
    // keyed by (min, max, k); value holds the entry per parent order
    let mut cells: BTreeMap<(usize, usize, usize), [Option<f64>; 2]> = BTreeMap::new();
    for &(i, j, k, v) in entries {
        if i >= n || j >= n || k >= n {
            return Err(doc_err(format!(
                "entry ({i}, {j}, {k}) is out of range for n = {n}"
            )));
        }
        let slot = usize::from(i > j);
        let cell = match cells.entry((i.min(j), i.max(j), k)) {
            Entry::Vacant(e) => e.insert([None, None]),
            Entry::Occupied(e) => e.into_mut(),
        };
        if cell[slot].replace(v).is_some() {
            return Err(doc_err(format!("entry ({i}, {j}, {k}) listed twice")));
        }
    }
    for ((i, j, k), cell) in cells {
        let v = match cell {
            [Some(a), Some(b)] if i != j => {
                if !symmetrize {
                    return Err(doc_err(format!(
                        "entry ({i}, {j}, {k}) given in both parent orders; \
                         list it once or pass --symmetrize"
                    )));
                }
                0.5 * (a + b)
            }
            [Some(v), _] | [None, Some(v)] => v,
            [None, None] => unreachable!("cells are only created with a value"),
        };
        p.set_symmetric(i, j, k, v);
    }
    Ok(p)
}

/// Pretty JSON with fixed-width floats.
#[derive(Default)]
struct Canonical {
    inner: PrettyFormatter<'static>,
}

impl Formatter for Canonical {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}
