use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{parse_gem, Cache, GemFile};
use crate::diagram::{assemble_diagram, TrisectionDiagram};
use crate::embedding::CyclicPermutation;
use crate::error::{Error, Result};
use crate::graph::{Color, ColorSet};
use crate::invariants::{bound_ledger, BoundLedger};
use crate::trisection::{apex_candidates, minimize_k, sweep, ApexFrame, MinimizeOptions, Mode, TrisectionCertificate, APEX};
use crate::validation::{certify_gs4, Attestations, Boundary, ValidationReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeChoice {
    /// closed when the apex residue is a sphere, capped off when it is an
    /// attested `#_m(S^1 x S^2)`, generalized otherwise
    #[default]
    Auto,
    Closed,
    Gts,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    /// fixed permutation in input colors; ignored with `sweep`
    pub eps: Option<Vec<Color>>,
    pub sweep: bool,
    pub apex: Option<Color>,
    /// exhaustive search budget for [`minimize_k`]
    pub budget: u64,
    pub mode: ModeChoice,
}

/// Wall-clock milliseconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub validate_ms: f64,
    pub trisect_ms: f64,
    pub diagram_ms: f64,
    pub ledger_ms: f64,
}

/// One pipeline result, in the colors and edge ids of the input gem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    /// sha256 of the canonical gem text
    pub input_hash: String,
    pub name: Option<String>,
    pub options: RunOptions,
    pub apex: Color,
    pub mode: Mode,
    pub boundary: Boundary,
    pub attestations_used: Vec<String>,
    pub certificate: TrisectionCertificate,
    pub ledger: BoundLedger,
    pub diagram: TrisectionDiagram,
    /// sha256 of the record without `record_hash` and `timings`
    pub record_hash: String,
    pub timings: Timings,
}

impl RunRecord {
    pub fn to_json(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("records serialize")
    }

    fn content_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("records serialize");
        let obj = v.as_object_mut().expect("records are objects");
        obj.remove("record_hash");
        obj.remove("timings");
        hex::encode(Sha256::digest(serde_json::to_vec(&v).expect("values serialize")))
    }
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

fn swap_set(s: ColorSet, frame: &ApexFrame) -> ColorSet {
    s.iter().fold(ColorSet::EMPTY, |acc, c| acc.with(frame.color_to_working(c)))
}

fn working_attestations(att: &Attestations, frame: &ApexFrame) -> Attestations {
    let mut out = att.clone();
    out.spheres = att.spheres.iter().map(|&s| swap_set(s, frame)).collect();
    out.spheres.sort();
    out
}

fn not_in_class(report: &ValidationReport) -> String {
    let bad: Vec<String> = report.colors[..4]
        .iter()
        .filter(|s| s.verdict != crate::validation::Verdict::Sphere)
        .map(|s| format!("color {} residues: {}", s.color, s.verdict))
        .collect();
    bad.join("; ")
}

/// Pick the apex and certify the gem in the frame where the apex is color 4.
/// Without an explicit apex, 4 is tried first and then the other colors
/// with a connected complementary residue.
fn certify(gem: &GemFile, opts: &RunOptions) -> Result<(ApexFrame, ValidationReport)> {
    let g = &gem.graph;
    if g.n() != 4 {
        return Err(crate::error::ValidationError::WrongDimension(g.n()).into());
    }
    let candidates: Vec<Color> = match opts.apex {
        Some(c) if c > 4 => return Err(Error::NotInClass(format!("apex color {c} is outside 0..=4"))),
        Some(c) => vec![c],
        None => {
            let set = apex_candidates(g);
            let mut v: Vec<Color> = set.iter().copied().filter(|&c| c == APEX).collect();
            v.extend(set.iter().copied().filter(|&c| c != APEX));
            v
        }
    };
    if candidates.is_empty() {
        return Err(Error::NotInClass("no color has a connected complementary residue".into()));
    }
    let mut reasons = Vec::new();
    for apex in candidates {
        let frame = ApexFrame::new(g, apex);
        let att = working_attestations(&gem.attestations, &frame);
        match certify_gs4(&frame.graph, &att) {
            Ok(report) if report.gs4_member => return Ok((frame, report)),
            Ok(report) => reasons.push(format!("apex {apex}: {}", not_in_class(&report))),
            Err(crate::error::ValidationError::MultipleApexResidues(m)) => {
                reasons.push(format!("apex {apex}: {m} residues miss it"))
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(Error::NotInClass(reasons.join(" | ")))
}

fn choose_mode(choice: ModeChoice, boundary: &Boundary) -> Result<Mode> {
    Ok(match (choice, boundary) {
        (ModeChoice::Gts, _) => Mode::GTrisection,
        (_, Boundary::Closed) => Mode::TrisectionClosed,
        (ModeChoice::Closed, _) => {
            return Err(Error::NotInClass("closed mode needs a 3-sphere apex residue".into()))
        }
        (ModeChoice::Auto, Boundary::Bounded { sphere_bundles: Some(_), .. }) => Mode::TrisectionOfClosure,
        (ModeChoice::Auto, _) => Mode::GTrisection,
    })
}

/// Validate, trisect, build and verify the diagram, and assemble the ledger.
pub fn run_pipeline(gem: &GemFile, opts: &RunOptions) -> Result<RunRecord> {
    let mut timings = Timings::default();
    let t = Instant::now();
    let (frame, report) = certify(gem, opts)?;
    let mode = choose_mode(opts.mode, &report.boundary)?;
    timings.validate_ms = ms(t);

    let t = Instant::now();
    let g = &frame.graph;
    let mk = MinimizeOptions { budget: opts.budget };
    let cert = if opts.sweep {
        sweep(g, mk)?
    } else {
        let eps = match &opts.eps {
            None => CyclicPermutation::identity(4),
            Some(seq) => frame
                .working_permutation(seq)
                .map_err(|e| crate::error::ParseError::Syntax { line: 0, message: format!("--eps: {e}") })?,
        };
        minimize_k(g, &eps, mk)?
    };
    timings.trisect_ms = ms(t);

    let t = Instant::now();
    let eps = CyclicPermutation::new(cert.permutation.clone()).expect("certificates carry permutations");
    let diagram = assemble_diagram(g, &eps, &cert, mode)?;
    let verification = diagram.verification.as_ref().expect("assembled diagrams are verified");
    if !verification.passed() {
        return Err(Error::Internal(format!(
            "diagram failed verification: {:?}",
            [&verification.counts, &verification.disjointness, &verification.homology, &verification.completeness, &verification.heegaard]
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.detail.as_str())
                .collect::<Vec<_>>()
        )));
    }
    timings.diagram_ms = ms(t);

    let t = Instant::now();
    let ledger = bound_ledger(g, Some(&cert), &report)?;
    timings.ledger_ms = ms(t);

    let mut record = RunRecord {
        tool_version: TOOL_VERSION.to_string(),
        input_hash: sha256_hex(gem.to_text().as_bytes()),
        name: gem.name.clone(),
        options: opts.clone(),
        apex: frame.apex,
        mode,
        boundary: report.boundary.clone(),
        attestations_used: report.attestations_used.clone(),
        certificate: frame.certificate_to_input(cert),
        ledger,
        diagram: diagram.to_input(&frame),
        record_hash: String::new(),
        timings,
    };
    record.record_hash = record.content_hash();
    Ok(record)
}

/// Run through the cache: the stored bytes are returned unchanged on a hit.
pub fn run_cached(gem: &GemFile, opts: &RunOptions, cache: Option<&Cache>) -> Result<(Vec<u8>, bool)> {
    let key = cache.map(|c| c.key(gem, opts));
    if let (Some(c), Some(k)) = (cache, &key) {
        if let Some(bytes) = c.get(k)? {
            return Ok((bytes, true));
        }
    }
    let bytes = run_pipeline(gem, opts)?.to_json();
    if let (Some(c), Some(k)) = (cache, &key) {
        c.put(k, &bytes)?;
    }
    Ok((bytes, false))
}

/// One row of a batch run.
#[derive(Debug)]
pub struct BatchRow {
    pub path: PathBuf,
    /// serialized [`RunRecord`]
    pub output: std::result::Result<Vec<u8>, Error>,
    pub cache_hit: bool,
}

impl BatchRow {
    pub fn exit_code(&self) -> i32 {
        self.output.as_ref().err().map_or(0, Error::exit_code)
    }
}

fn run_path(path: &Path, opts: &RunOptions, cache: Option<&Cache>) -> Result<(Vec<u8>, bool)> {
    let bytes = std::fs::read(path)?;
    let gem = parse_gem(&bytes)?;
    run_cached(&gem, opts, cache)
}

/// Independent runs in parallel, rows sorted by path. Errors stay in their row.
pub fn batch(paths: &[PathBuf], opts: &RunOptions, cache: Option<&Cache>) -> Vec<BatchRow> {
    let mut sorted = paths.to_vec();
    sorted.sort();
    sorted
        .into_par_iter()
        .map(|path| {
            let r = run_path(&path, opts, cache);
            let cache_hit = matches!(r, Ok((_, true)));
            BatchRow { path, output: r.map(|(b, _)| b), cache_hit }
        })
        .collect()
}
