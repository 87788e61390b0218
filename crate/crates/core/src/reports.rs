//! Graph exports, verification reports and the parameter survey.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{
    brute_force_aut, compare_reported_claim, connection_set, decide_cayley, verify_cayley_isomorphism, ClaimComparison,
    Decision, AUT_MAX_ORDER, BASE_VERTEX,
};
use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::perm::{is_automorphism, is_regular_action, DEFAULT_ELEMENT_CAP};
use crate::symmetry::{make_generators, subgroups, transport_with, verify_group_structure_with, verify_relations_with};
use crate::torus::{TorusGraph, TorusParams};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: &str = "1.0";

/// Environment variable overriding the survey cache directory.
pub const CACHE_DIR_ENV: &str = "C4C8_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".c4c8-cache";

/// Exhaustive transport checks are run up to this many points.
pub const TRANSPORT_CHECK_MAX_ORDER: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    EdgeList,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "edgelist" => Ok(ExportFormat::EdgeList),
            other => Err(Error::Parameter(format!("unknown export format {other:?}"))),
        }
    }
}

#[derive(Serialize)]
struct JsonVertex {
    index: usize,
    j: usize,
    i: usize,
    t: u8,
}

#[derive(Serialize)]
struct JsonGraph {
    params: TorusParams,
    vertices: Vec<JsonVertex>,
    edges: Vec<[usize; 2]>,
}

pub fn export_graph(graph: &TorusGraph, format: ExportFormat) -> Vec<u8> {
    let params = graph.params();
    let edges = graph.edges();
    match format {
        ExportFormat::EdgeList => {
            let mut out = String::new();
            for (a, b) in edges {
                writeln!(out, "{a} {b}").unwrap();
            }
            out.into_bytes()
        }
        ExportFormat::Dot => {
            let name = |p: usize| {
                let v = params.decode(p).expect("point in range");
                format!("t{}_r{}_c{}", v.t, v.i, v.j)
            };
            let mut out = String::new();
            writeln!(out, "graph trc4c8_m{}_n{} {{", params.m, params.n).unwrap();
            for p in 0..graph.order() {
                writeln!(out, "  {};", name(p)).unwrap();
            }
            for (a, b) in edges {
                writeln!(out, "  {} -- {};", name(a), name(b)).unwrap();
            }
            out.push_str("}\n");
            out.into_bytes()
        }
        ExportFormat::Json => {
            let doc = JsonGraph {
                params,
                vertices: params
                    .vertices()
                    .enumerate()
                    .map(|(index, v)| JsonVertex { index, j: v.j, i: v.i, t: v.t })
                    .collect(),
                edges: edges.into_iter().map(|(a, b)| [a, b]).collect(),
            };
            let mut out = serde_json::to_vec_pretty(&doc).expect("graph serialises");
            out.push(b'\n');
            out
        }
    }
}

/// A check that either ran or was deliberately skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Check<T> {
    Done(T),
    Skipped { reason: String },
}

impl<T> Check<T> {
    pub fn done(&self) -> Option<&T> {
        match self {
            Check::Done(v) => Some(v),
            Check::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub automorphism: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremChecks {
    pub transitive: bool,
    pub stabilizer_trivial: bool,
    pub regular: bool,
    pub group_order: usize,
    pub expected_order: usize,
    pub connection_set_size: usize,
    pub connection_set_identity_free: bool,
    pub connection_set_inverse_closed: bool,
    pub cayley_isomorphism_verified: bool,
    pub transport: Check<TransportChecks>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportChecks {
    pub pairs_checked: usize,
    pub all_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceChecks {
    pub aut_order: usize,
    pub contains_generated_group: bool,
    pub index_of_generated_group: usize,
    pub claim_check: Option<ClaimComparison>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started: String,
    pub finished: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub tool_version: String,
    pub params: TorusParams,
    pub all_passed: bool,
    pub lemma1: Vec<GeneratorCheck>,
    pub lemma2: Vec<crate::symmetry::RelationCheck>,
    pub lemma3: crate::symmetry::StructureReport,
    pub theorem: TheoremChecks,
    pub brute_force: Check<BruteForceChecks>,
    /// Run-dependent values live here and nowhere else.
    pub timestamps: Timestamps,
}

impl VerificationReport {
    fn compute_all_passed(&self) -> bool {
        let n = self.params.n;
        let l3 = &self.lemma3;
        let th = &self.theorem;
        let lemma3_ok = l3.h_order == n * n
            && l3.h_is_cn_x_cn
            && l3.k_order == 4
            && l3.k_elementary_abelian
            && l3.g_order == 4 * n * n
            && l3.is_semidirect();
        let transport_ok = th.transport.done().map_or(true, |t| t.all_verified);
        let brute_ok = self.brute_force.done().map_or(true, |b| b.contains_generated_group);
        self.lemma1.iter().all(|g| g.automorphism)
            && self.lemma2.iter().all(|r| r.holds)
            && lemma3_ok
            && th.regular
            && th.group_order == th.expected_order
            && th.connection_set_size == 3
            && th.connection_set_identity_free
            && th.connection_set_inverse_closed
            && th.cayley_isomorphism_verified
            && transport_ok
            && brute_ok
    }
}

/// Runs every symmetry check on `[n, n]`.
pub fn verify_square(n: usize, aut_budget: usize) -> Result<VerificationReport> {
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let params = TorusParams::square(n)?;
    let gens = make_generators(params)?;
    let graph = gens.graph();

    let lemma1 = gens
        .present()
        .into_iter()
        .map(|(g, p)| Ok(GeneratorCheck { generator: g.to_string(), automorphism: is_automorphism(graph, p)? }))
        .collect::<Result<Vec<_>>>()?;
    let lemma2 = verify_relations_with(&gens)?.relations;
    let lemma3 = verify_group_structure_with(&gens, DEFAULT_ELEMENT_CAP)?;

    let group = subgroups(&gens, DEFAULT_ELEMENT_CAP)?.g;
    let regular = is_regular_action(&group);
    let s = connection_set(graph, &group, BASE_VERTEX)?;
    let transport = if params.order() <= TRANSPORT_CHECK_MAX_ORDER {
        let mut pairs = 0usize;
        let mut ok = true;
        for v in params.vertices() {
            for w in params.vertices() {
                pairs += 1;
                ok &= transport_with(&gens, v, w).is_ok();
            }
        }
        Check::Done(TransportChecks { pairs_checked: pairs, all_verified: ok })
    } else {
        Check::Skipped { reason: format!("order {} exceeds {TRANSPORT_CHECK_MAX_ORDER}", params.order()) }
    };
    let theorem = TheoremChecks {
        transitive: regular.transitive,
        stabilizer_trivial: regular.stabilizer_trivial,
        regular: regular.is_regular(),
        group_order: group.order(),
        expected_order: 4 * n * n,
        connection_set_size: s.len(),
        connection_set_identity_free: s.elements().iter().all(|p| !p.is_identity()),
        connection_set_inverse_closed: s.elements().iter().all(|p| s.elements().contains(&p.inverse())),
        cayley_isomorphism_verified: verify_cayley_isomorphism(graph, &group, BASE_VERTEX)?,
        transport,
    };

    let brute_force = if graph.order() > AUT_MAX_ORDER {
        Check::Skipped { reason: format!("order {} exceeds the brute-force cap of {AUT_MAX_ORDER}", graph.order()) }
    } else {
        match brute_force_aut(graph, aut_budget) {
            Ok(aut) => Check::Done(BruteForceChecks {
                aut_order: aut.order(),
                contains_generated_group: group.is_subgroup_of(&aut),
                index_of_generated_group: aut.order() / group.order(),
                claim_check: compare_reported_claim(params, aut.order()),
            }),
            Err(Error::Budget { cap, .. }) => {
                Check::Skipped { reason: format!("automorphism search exceeded {cap} nodes") }
            }
            Err(e) => return Err(e),
        }
    };

    let mut report = VerificationReport {
        schema_version: SCHEMA_VERSION.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        params,
        all_passed: false,
        lemma1,
        lemma2,
        lemma3,
        theorem,
        brute_force,
        timestamps: Timestamps {
            started: started.to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            finished: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            elapsed_ms: clock.elapsed().as_millis(),
        },
    };
    report.all_passed = report.compute_all_passed();
    Ok(report)
}

pub fn render_report(report: &VerificationReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serialises");
    out.push('\n');
    out
}

pub fn write_report(report: &VerificationReport, path: &Path) -> Result<()> {
    fs::write(path, render_report(report))?;
    Ok(())
}

/// Parses a report, rejecting schema major versions other than ours.
pub fn parse_report(text: &str) -> Result<VerificationReport> {
    let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let version = raw.get("schema_version").and_then(|v| v.as_str()).unwrap_or("");
    let major = |v: &str| v.split('.').next().unwrap_or("").to_string();
    if version.is_empty() || major(version) != major(SCHEMA_VERSION) {
        return Err(Error::Schema(version.to_string()));
    }
    serde_json::from_value(raw).map_err(|e| Error::Schema(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    pub size: usize,
    /// `true`, `false` or `unknown`.
    pub vertex_transitive: String,
    /// An integer or `unknown`.
    pub aut_order: String,
    pub is_cayley: Decision,
    pub wall_time_ms: u128,
}

pub fn survey_row(params: TorusParams, budget: usize) -> Result<SurveyRow> {
    let start = Instant::now();
    let verdict = decide_cayley(params, budget)?;
    let unknown = || "unknown".to_string();
    Ok(SurveyRow {
        m: params.m,
        n: params.n,
        order: params.order(),
        size: params.size(),
        vertex_transitive: verdict.vertex_transitive.map_or_else(unknown, |b| b.to_string()),
        aut_order: verdict.aut_order.map_or_else(unknown, |o| o.to_string()),
        is_cayley: verdict.is_cayley,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

pub fn cache_dir_from_env() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn cache_path(cache_dir: &Path, params: TorusParams) -> PathBuf {
    cache_dir.join(format!("v{TOOL_VERSION}")).join(format!("m{}_n{}.json", params.m, params.n))
}

fn cached_row(cache_dir: &Path, params: TorusParams) -> Option<SurveyRow> {
    let text = fs::read_to_string(cache_path(cache_dir, params)).ok()?;
    let row: SurveyRow = serde_json::from_str(&text).ok()?;
    (row.m == params.m && row.n == params.n).then_some(row)
}

fn store_row(cache_dir: &Path, row: &SurveyRow) -> Result<()> {
    let path = cache_path(cache_dir, TorusParams { m: row.m, n: row.n });
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_string(row).expect("row serialises"))?;
    Ok(())
}

pub const SURVEY_HEADER: [&str; 8] =
    ["m", "n", "order", "size", "vertex_transitive", "aut_order", "is_cayley", "wall_time_ms"];

/// Computes (or loads from cache) one row per `(m, n)` and writes the CSV.
/// Rows come out sorted by `(m, n)`.
pub fn survey(
    m_range: std::ops::RangeInclusive<usize>,
    n_range: std::ops::RangeInclusive<usize>,
    out_path: &Path,
    budget: usize,
    cache_dir: Option<&Path>,
) -> Result<Vec<SurveyRow>> {
    if m_range.is_empty() || n_range.is_empty() {
        return Err(Error::Parameter("survey ranges must be nonempty".into()));
    }
    let pairs: Vec<TorusParams> = m_range
        .flat_map(|m| n_range.clone().map(move |n| TorusParams::new(m, n)))
        .collect::<Result<_>>()?;
    let rows = pairs
        .par_iter()
        .map(|&params| {
            if let Some(row) = cache_dir.and_then(|dir| cached_row(dir, params)) {
                return Ok(row);
            }
            let row = survey_row(params, budget)?;
            if let Some(dir) = cache_dir {
                store_row(dir, &row)?;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut writer = csv::Writer::from_path(out_path).map_err(|e| Error::Io(e.to_string()))?;
    writer.write_record(SURVEY_HEADER).map_err(|e| Error::Io(e.to_string()))?;
    for r in &rows {
        writer
            .write_record([
                r.m.to_string(),
                r.n.to_string(),
                r.order.to_string(),
                r.size.to_string(),
                r.vertex_transitive.clone(),
                r.aut_order.clone(),
                r.is_cayley.to_string(),
                r.wall_time_ms.to_string(),
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    writer.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::build_torus;

    fn torus(m: usize, n: usize) -> TorusGraph {
        build_torus(TorusParams::new(m, n).unwrap()).unwrap()
    }

    #[test]
    fn k4_edgelist() {
        let out = String::from_utf8(export_graph(&torus(1, 1), ExportFormat::EdgeList)).unwrap();
        assert_eq!(out, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    }

    #[test]
    fn json_counts() {
        let bytes = export_graph(&torus(3, 2), ExportFormat::Json);
        let doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(doc["vertices"].as_array().unwrap().len(), 24);
        assert_eq!(doc["edges"].as_array().unwrap().len(), 36);
        assert_eq!(doc["params"]["m"], 3);
        assert_eq!(doc["vertices"][23], serde_json::json!({"index": 23, "j": 2, "i": 3, "t": 3}));
    }

    #[test]
    fn dot_shape() {
        let out = String::from_utf8(export_graph(&torus(1, 1), ExportFormat::Dot)).unwrap();
        assert!(out.starts_with("graph trc4c8_m1_n1 {\n  t0_r1_c1;\n"));
        assert!(out.contains("  t0_r1_c1 -- t1_r1_c1;\n"));
        assert_eq!(out.matches(" -- ").count(), 6);
        assert!(out.ends_with("}\n"));
    }

    #[test]
    fn exports_are_deterministic() {
        let g = torus(3, 3);
        for f in [ExportFormat::Dot, ExportFormat::Json, ExportFormat::EdgeList] {
            assert_eq!(export_graph(&g, f), export_graph(&g, f));
        }
    }

    #[test]
    fn format_parsing() {
        assert_eq!("dot".parse::<ExportFormat>().unwrap(), ExportFormat::Dot);
        assert!("svg".parse::<ExportFormat>().is_err());
    }

    #[test]
    fn report_n2() {
        let r = verify_square(2, 1_000_000).unwrap();
        assert_eq!(r.lemma2.len(), 9);
        assert!(r.lemma2.iter().all(|c| c.holds));
        assert!(r.lemma2.iter().any(|c| c.relation == "g2*g3 = g3*g1^-1"));
        assert!(r.all_passed);
    }

    #[test]
    fn report_n3_orders() {
        let r = verify_square(3, 1_000_000).unwrap();
        assert_eq!((r.lemma3.h_order, r.lemma3.k_order), (9, 4));
        let text = render_report(&r);
        assert!(text.contains("\"h_order\": 9"));
        assert!(text.contains("\"k_order\": 4"));
        let back = parse_report(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn brute_force_section_skipped_above_cap() {
        let r = verify_square(5, 1_000_000).unwrap();
        assert!(matches!(r.brute_force, Check::Skipped { .. }));
        let text = render_report(&r);
        assert!(text.contains("\"status\": \"skipped\""));
        assert!(r.all_passed);
    }

    #[test]
    fn parse_rejects_other_major_versions() {
        let r = verify_square(1, 1000).unwrap();
        let text = render_report(&r).replace("\"schema_version\": \"1.0\"", "\"schema_version\": \"2.0\"");
        assert!(matches!(parse_report(&text), Err(Error::Schema(v)) if v == "2.0"));
        assert!(parse_report("{}").is_err());
    }

    #[test]
    fn survey_rows_and_cache() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("survey.csv");
        let cache = dir.path().join("cache");
        let rows = survey(2..=3, 2..=3, &out, 1_000_000, Some(&cache)).unwrap();
        assert_eq!(rows.len(), 4);
        let verdicts: Vec<_> = rows.iter().map(|r| (r.m, r.n, r.is_cayley)).collect();
        assert_eq!(
            verdicts,
            vec![(2, 2, Decision::Yes), (2, 3, Decision::No), (3, 2, Decision::No), (3, 3, Decision::Yes)]
        );
        for r in &rows {
            assert_eq!((r.order, r.size), (4 * r.m * r.n, 6 * r.m * r.n));
        }
        let csv = fs::read_to_string(&out).unwrap();
        assert!(csv.starts_with("m,n,order,size,vertex_transitive,aut_order,is_cayley,wall_time_ms\n"));
        assert!(cache_path(&cache, TorusParams::new(3, 2).unwrap()).exists());

        // Second run is served from the cache.
        let again = survey(2..=3, 2..=3, &out, 1, Some(&cache)).unwrap();
        assert_eq!(again, rows);
    }

    #[test]
    fn survey_rejects_empty_ranges() {
        let dir = tempfile::tempdir().unwrap();
        #[allow(clippy::reversed_empty_ranges)]
        let err = survey(3..=2, 1..=1, &dir.path().join("x.csv"), 10, None);
        assert!(err.is_err());
    }
}
