//! Orchestration: per-field runs, the report and manifest types, the JSON
//! cache, table rendering, and geometry export.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::polytope::{
    build_polytope, classify, cusp_orbit_count, CombinatorialType, Cusp, IdealPolytope,
    PolytopeKind,
};
use crate::qfield::{make_context, FieldContext};
use crate::voronoi::{enumerate_classes, PerfectFormGraph};

pub const SCHEMA_VERSION: u32 = 1;

pub fn engine_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// One cusp of a class record: exact ω-coordinates of the numerator, the
/// integer denominator (0 for infinity), and the display form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRecord {
    pub display: String,
    pub numer: [i64; 2],
    pub denom: i64,
}

impl CuspRecord {
    fn from_cusp(c: &Cusp) -> Self {
        use num_traits::ToPrimitive;
        let to_i64 = |x: &crate::linalg::Rat| -> i64 {
            x.to_integer().to_i64().expect("cusp coordinate fits i64")
        };
        CuspRecord {
            display: c.to_string(),
            numer: [to_i64(c.numer().x()), to_i64(c.numer().y())],
            denom: c.denom().to_i64().expect("cusp denominator fits i64"),
        }
    }

    /// Boundary point in the upper half-space model, `None` for infinity.
    pub fn boundary_point(&self, ctx: FieldContext) -> Option<(f64, f64)> {
        if self.denom == 0 {
            return None;
        }
        let q = self.denom as f64;
        let x = self.numer[0] as f64;
        let y = self.numer[1] as f64;
        let (re_w, im_w) = if ctx.omega_is_half() {
            (0.5, 0.5 * (-(ctx.d() as f64)).sqrt())
        } else {
            (0.0, (-(ctx.d() as f64)).sqrt())
        };
        Some(((x + y * re_w) / q, (y * im_w) / q))
    }
}

/// Everything reported about one GL₂(O)-class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub index: usize,
    pub polytope_type: String,
    pub f_vector: [usize; 3],
    pub cusps: Vec<CuspRecord>,
    /// Facets as vertex index lists into `cusps`.
    pub facets: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
    pub stabilizer_order: usize,
    pub stabilizer_cyclic: bool,
    /// Generator entries row-major, each as the (x, y) pair of x + y·ω.
    pub stabilizer_generator: [[i64; 2]; 4],
}

/// Per-discriminant summary of the class enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TessellationReport {
    pub schema: u32,
    pub engine_version: String,
    pub d: i64,
    pub discriminant: i64,
    pub class_number: u64,
    pub cusp_orbits: u64,
    pub total_classes: usize,
    pub type_counts: BTreeMap<String, usize>,
    pub classes: Vec<ClassRecord>,
    /// Wall-clock duration; excluded from the serialized report so that
    /// report bytes are a pure function of (d, engine version).
    #[serde(skip)]
    pub duration_ms: u64,
}

impl TessellationReport {
    /// Canonical serialized bytes, the basis of determinism checks and the
    /// cache content hash.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec_pretty(self).expect("report serializes")
    }

    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_bytes());
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// The full in-memory result of one field: the graph, polytopes, types and
/// the distilled report.
pub struct FieldComputation {
    pub ctx: FieldContext,
    pub graph: PerfectFormGraph,
    pub polytopes: Vec<IdealPolytope>,
    pub types: Vec<CombinatorialType>,
    pub report: TessellationReport,
}

/// Full pipeline for one discriminant: context, initial form, class
/// enumeration, polytopes, classification, stabilizers, report.
pub fn compute_field(d: i64) -> Result<FieldComputation> {
    let start = Instant::now();
    let ctx = make_context(d)?;
    let graph = enumerate_classes(ctx)?;
    let mut polytopes = Vec::with_capacity(graph.classes().len());
    let mut types = Vec::with_capacity(graph.classes().len());
    for pf in graph.classes() {
        let p = build_polytope(pf)?;
        types.push(classify(&p));
        polytopes.push(p);
    }
    let cusp_orbits = cusp_orbit_count(&graph)?;

    let mut type_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut classes = Vec::with_capacity(polytopes.len());
    for (i, (p, t)) in polytopes.iter().zip(&types).enumerate() {
        *type_counts.entry(t.name.clone()).or_insert(0) += 1;
        let stab = &graph.stabilizers()[i];
        let g = stab.generator();
        let entry = |r: usize, c: usize| -> [i64; 2] {
            use num_traits::ToPrimitive;
            let e = g.entry(r, c);
            [
                e.x().to_integer().to_i64().expect("entry fits i64"),
                e.y().to_integer().to_i64().expect("entry fits i64"),
            ]
        };
        classes.push(ClassRecord {
            index: i,
            polytope_type: t.name.clone(),
            f_vector: p.f_vector(),
            cusps: p.vertices().iter().map(CuspRecord::from_cusp).collect(),
            facets: p.facets().to_vec(),
            edges: p.edges().to_vec(),
            stabilizer_order: stab.order(),
            stabilizer_cyclic: stab.is_cyclic(),
            stabilizer_generator: [entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)],
        });
    }
    let total_classes = classes.len();
    debug_assert_eq!(type_counts.values().sum::<usize>(), total_classes);
    let report = TessellationReport {
        schema: SCHEMA_VERSION,
        engine_version: engine_version().to_string(),
        d,
        discriminant: ctx.discriminant(),
        class_number: ctx.class_number(),
        cusp_orbits,
        total_classes,
        type_counts,
        classes,
        duration_ms: start.elapsed().as_millis() as u64,
    };
    Ok(FieldComputation {
        ctx,
        graph,
        polytopes,
        types,
        report,
    })
}

/// The report alone.
pub fn run_field(d: i64) -> Result<TessellationReport> {
    compute_field(d).map(|c| c.report)
}

// ---- cache ----

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    schema: u32,
    engine_version: String,
    content_hash: String,
    report: TessellationReport,
}

pub fn cache_path(dir: &Path, d: i64) -> PathBuf {
    dir.join(format!("v{SCHEMA_VERSION}"))
        .join(format!("d{d}.json"))
}

/// Loads a cached report, re-verifying the stored content hash. Returns
/// `Ok(None)` on a miss (absent, or written by a different engine
/// version); a present entry that fails verification is an error.
pub fn load_cached(dir: &Path, d: i64) -> Result<Option<TessellationReport>> {
    let path = cache_path(dir, d);
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let entry: CacheEntry = serde_json::from_slice(&bytes)?;
    if entry.schema != SCHEMA_VERSION || entry.engine_version != engine_version() {
        return Ok(None);
    }
    if entry.report.content_hash() != entry.content_hash {
        return Err(Error::CacheCorrupt(path.display().to_string()));
    }
    Ok(Some(entry.report))
}

pub fn store_cached(dir: &Path, report: &TessellationReport) -> Result<PathBuf> {
    let path = cache_path(dir, report.d);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let entry = CacheEntry {
        schema: SCHEMA_VERSION,
        engine_version: report.engine_version.clone(),
        content_hash: report.content_hash(),
        report: report.clone(),
    };
    std::fs::write(&path, serde_json::to_vec_pretty(&entry)?)?;
    Ok(path)
}

// ---- batch runs ----

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FieldStatus {
    Done {
        cached: bool,
        path: String,
        duration_ms: u64,
        total_classes: usize,
    },
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub d: i64,
    pub status: FieldStatus,
}

/// Summary of one `run_range` invocation, ordered by |d|.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub requested: Vec<i64>,
    pub jobs: usize,
    pub cache_dir: String,
    pub force: bool,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn all_done(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.status, FieldStatus::Done { .. }))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cache_dir: PathBuf,
    pub jobs: usize,
    pub force: bool,
}

/// Runs every requested field with a bounded worker pool, serving from the
/// cache unless forced. Partial failure is tolerated and recorded.
pub fn run_range(ds: &[i64], config: &RunConfig) -> RunManifest {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .expect("worker pool");
    let mut entries: Vec<ManifestEntry> = pool.install(|| {
        use rayon::prelude::*;
        ds.par_iter()
            .map(|&d| ManifestEntry {
                d,
                status: run_one(d, config),
            })
            .collect()
    });
    entries.sort_by_key(|e| (e.d.unsigned_abs(), e.d));
    RunManifest {
        requested: ds.to_vec(),
        jobs: config.jobs,
        cache_dir: config.cache_dir.display().to_string(),
        force: config.force,
        entries,
    }
}

fn run_one(d: i64, config: &RunConfig) -> FieldStatus {
    let start = Instant::now();
    if !config.force {
        match load_cached(&config.cache_dir, d) {
            Ok(Some(report)) => {
                return FieldStatus::Done {
                    cached: true,
                    path: cache_path(&config.cache_dir, d).display().to_string(),
                    duration_ms: start.elapsed().as_millis() as u64,
                    total_classes: report.total_classes,
                }
            }
            Ok(None) => {}
            // A corrupt entry is recomputed and overwritten.
            Err(Error::CacheCorrupt(_)) => {}
            Err(e) => {
                return FieldStatus::Failed {
                    error: e.to_string(),
                }
            }
        }
    }
    match run_field(d) {
        Ok(report) => match store_cached(&config.cache_dir, &report) {
            Ok(path) => FieldStatus::Done {
                cached: false,
                path: path.display().to_string(),
                duration_ms: start.elapsed().as_millis() as u64,
                total_classes: report.total_classes,
            },
            Err(e) => FieldStatus::Failed {
                error: e.to_string(),
            },
        },
        Err(e) => FieldStatus::Failed {
            error: e.to_string(),
        },
    }
}

// ---- table rendering ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
    Markdown,
}

/// Column order mirrors the combinatorial-type table of the survey: the
/// eight named types, then any unrecognized type names that occur.
fn table_columns(reports: &[TessellationReport]) -> Vec<String> {
    let mut cols: Vec<String> = PolytopeKind::NAMED
        .iter()
        .map(|k| k.name().to_string())
        .collect();
    let mut extra: Vec<String> = reports
        .iter()
        .flat_map(|r| r.type_counts.keys().cloned())
        .filter(|name| !cols.contains(name))
        .collect();
    extra.sort();
    extra.dedup();
    cols.extend(extra);
    cols
}

/// Renders the per-type class counts, rows sorted by (h_F, |d|).
pub fn render_table(reports: &[TessellationReport], format: TableFormat) -> String {
    let mut sorted: Vec<&TessellationReport> = reports.iter().collect();
    sorted.sort_by_key(|r| (r.class_number, r.d.unsigned_abs(), r.d));
    let cols = table_columns(reports);
    let count = |r: &TessellationReport, name: &str| -> usize {
        r.type_counts.get(name).copied().unwrap_or(0)
    };
    match format {
        TableFormat::Csv => {
            let mut out = String::new();
            out.push_str("h,d");
            for c in &cols {
                out.push(',');
                out.push_str(c);
            }
            out.push('\n');
            for r in &sorted {
                out.push_str(&format!("{},{}", r.class_number, r.d));
                for c in &cols {
                    out.push_str(&format!(",{}", count(r, c)));
                }
                out.push('\n');
            }
            out
        }
        TableFormat::Markdown => {
            let mut out = String::new();
            out.push_str("| h | d |");
            for c in &cols {
                out.push_str(&format!(" {c} |"));
            }
            out.push('\n');
            out.push_str("|---|---|");
            for _ in &cols {
                out.push_str("---|");
            }
            out.push('\n');
            for r in &sorted {
                out.push_str(&format!("| {} | {} |", r.class_number, r.d));
                for c in &cols {
                    out.push_str(&format!(" {} |", count(r, c)));
                }
                out.push('\n');
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = sorted
                .iter()
                .map(|r| {
                    let counts: BTreeMap<String, usize> =
                        cols.iter().map(|c| (c.clone(), count(r, c))).collect();
                    serde_json::json!({
                        "h": r.class_number,
                        "d": r.d,
                        "total": r.total_classes,
                        "counts": counts,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("table serializes")
        }
    }
}

// ---- geometry export ----

/// Writes one JSON file per class: exact cusp data with floating-point
/// boundary coordinates, the face lattice and type. With `off`, also one
/// OFF mesh per class using an inverse-stereographic (Klein ball)
/// placement of the ideal vertices, for display only.
pub fn export_geometry(
    report: &TessellationReport,
    out_dir: &Path,
    off: bool,
) -> Result<Vec<PathBuf>> {
    let ctx = make_context(report.d)?;
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for class in &report.classes {
        let cusps: Vec<serde_json::Value> = class
            .cusps
            .iter()
            .map(|c| {
                let boundary = match c.boundary_point(ctx) {
                    Some((re, im)) => serde_json::json!({ "re": re, "im": im }),
                    None => serde_json::json!({ "infinity": true }),
                };
                serde_json::json!({
                    "display": c.display,
                    "numer": c.numer,
                    "denom": c.denom,
                    "boundary": boundary,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "d": report.d,
            "class": class.index,
            "type": class.polytope_type,
            "f_vector": class.f_vector,
            "cusps": cusps,
            "facets": class.facets,
            "edges": class.edges,
        });
        let path = out_dir.join(format!("d{}_class{}.json", report.d, class.index));
        std::fs::write(&path, serde_json::to_vec_pretty(&doc)?)?;
        written.push(path);
        if off {
            let path = out_dir.join(format!("d{}_class{}.off", report.d, class.index));
            std::fs::write(&path, off_mesh(ctx, class))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Klein-model placement: boundary points map onto the unit sphere by
/// inverse stereographic projection, infinity to the north pole.
fn sphere_point(ctx: FieldContext, c: &CuspRecord) -> [f64; 3] {
    match c.boundary_point(ctx) {
        None => [0.0, 0.0, 1.0],
        Some((re, im)) => {
            let n = re * re + im * im + 1.0;
            [2.0 * re / n, 2.0 * im / n, (re * re + im * im - 1.0) / n]
        }
    }
}

fn off_mesh(ctx: FieldContext, class: &ClassRecord) -> String {
    let points: Vec<[f64; 3]> = class.cusps.iter().map(|c| sphere_point(ctx, c)).collect();
    let mut out = String::from("OFF\n");
    out.push_str(&format!(
        "{} {} {}\n",
        points.len(),
        class.facets.len(),
        class.edges.len()
    ));
    for p in &points {
        out.push_str(&format!("{:.12} {:.12} {:.12}\n", p[0], p[1], p[2]));
    }
    for facet in &class.facets {
        let cycle = order_cycle(&points, facet);
        out.push_str(&format!("{}", cycle.len()));
        for v in cycle {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

/// Orders a facet's vertices angularly around their centroid; the vertices
/// of an ideal polygon are concyclic, hence coplanar in this model.
fn order_cycle(points: &[[f64; 3]], facet: &[usize]) -> Vec<usize> {
    let sub: Vec<[f64; 3]> = facet.iter().map(|&v| points[v]).collect();
    let n = sub.len() as f64;
    let centroid = [
        sub.iter().map(|p| p[0]).sum::<f64>() / n,
        sub.iter().map(|p| p[1]).sum::<f64>() / n,
        sub.iter().map(|p| p[2]).sum::<f64>() / n,
    ];
    let sub_c: Vec<[f64; 3]> = sub
        .iter()
        .map(|p| [p[0] - centroid[0], p[1] - centroid[1], p[2] - centroid[2]])
        .collect();
    let cross = |a: &[f64; 3], b: &[f64; 3]| -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let norm = |a: &[f64; 3]| (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let mut axis = cross(&sub_c[0], &sub_c[1]);
    if norm(&axis) < 1e-12 {
        axis = cross(&sub_c[0], &sub_c[2.min(sub_c.len() - 1)]);
    }
    let a_len = norm(&axis);
    let axis = [axis[0] / a_len, axis[1] / a_len, axis[2] / a_len];
    let u = sub_c[0];
    let u_len = norm(&u);
    let u = [u[0] / u_len, u[1] / u_len, u[2] / u_len];
    let v = cross(&axis, &u);
    let mut order: Vec<(f64, usize)> = facet
        .iter()
        .enumerate()
        .map(|(i, &vid)| {
            let p = &sub_c[i];
            let x = p[0] * u[0] + p[1] * u[1] + p[2] * u[2];
            let y = p[0] * v[0] + p[1] * v[1] + p[2] * v[2];
            (y.atan2(x), vid)
        })
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    order.into_iter().map(|(_, v)| v).collect()
}

/// The discriminant list of the survey: all square-free d with
/// −100 ≤ d ≤ −1 together with eight larger class-number-2 fields.
pub fn paper_range() -> Vec<i64> {
    let mut out: Vec<i64> = (-100..=-1)
        .rev()
        .filter(|&d| make_context(d).is_ok())
        .collect();
    out.sort_by_key(|d| d.unsigned_abs());
    for d in [-115, -123, -163, -187, -235, -267, -403, -427] {
        out.push(d);
    }
    out
}
