//! On-disk bundles: generated artifacts plus a text manifest that indexes
//! the component files with dimensions, expected answers and checksums.
//!
//! Manifest format ("manifest v1"):
//!
//! ```text
//! manifest v1 <kind>
//! meta <key> <value>
//! item <role> <idx> <file> [extra...]
//! expect <idx> <YES|NO>
//! hash <file> <sha256-hex>
//! ```
//!
//! Lines are grouped in that order; files are relative to the manifest's
//! directory. `verify` re-reads every component, re-derives the oracle
//! answers and size bounds, and compares.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, CompressedMatrix, CompressedVector, MatrixLayout, Strategy};
use crate::oracle::{brute_3sum, brute_ksum, Answer, TargetMode};
use crate::reductions::{
    self, MmBundle, ReductionBundle, UniverseReducedInstance,
};
use crate::rle::RleSeq;
use crate::slp::Slp;
use crate::sum::{Form, SumInstance};

#[derive(Debug, Clone)]
pub struct ManifestItem {
    pub role: String,
    pub idx: usize,
    pub file: String,
    pub extra: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub kind: String,
    pub meta: BTreeMap<String, String>,
    pub items: Vec<ManifestItem>,
    pub expected: Vec<(usize, Answer)>,
    pub hashes: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(kind: &str) -> Manifest {
        Manifest {
            kind: kind.to_string(),
            meta: BTreeMap::new(),
            items: Vec::new(),
            expected: Vec::new(),
            hashes: BTreeMap::new(),
        }
    }

    pub fn meta_u64(&self, key: &str) -> Result<u64> {
        self.meta
            .get(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("manifest missing numeric meta {key:?}")))
    }

    pub fn items_with_role(&self, role: &str) -> Vec<&ManifestItem> {
        let mut items: Vec<&ManifestItem> = self.items.iter().filter(|i| i.role == role).collect();
        items.sort_by_key(|i| i.idx);
        items
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "manifest v1 {}", self.kind).unwrap();
        for (k, v) in &self.meta {
            writeln!(out, "meta {k} {v}").unwrap();
        }
        for item in &self.items {
            write!(out, "item {} {} {}", item.role, item.idx, item.file).unwrap();
            for e in &item.extra {
                write!(out, " {e}").unwrap();
            }
            out.push('\n');
        }
        for (idx, ans) in &self.expected {
            writeln!(out, "expect {idx} {ans}").unwrap();
        }
        for (file, hash) in &self.hashes {
            writeln!(out, "hash {file} {hash}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Manifest> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty manifest".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "manifest" || fields[1] != "v1" {
            return Err(Error::Parse(format!("bad manifest header: {header:?}")));
        }
        let mut m = Manifest::new(fields[2]);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [] => continue,
                ["meta", k, v] => {
                    m.meta.insert((*k).to_string(), (*v).to_string());
                }
                ["item", role, idx, file, extra @ ..] => {
                    let idx = idx.parse().map_err(|_| Error::Parse("bad item index".into()))?;
                    m.items.push(ManifestItem {
                        role: (*role).to_string(),
                        idx,
                        file: (*file).to_string(),
                        extra: extra.iter().map(|s| s.to_string()).collect(),
                    });
                }
                ["expect", idx, ans] => {
                    let idx = idx.parse().map_err(|_| Error::Parse("bad expect index".into()))?;
                    let ans = match *ans {
                        "YES" => Answer::Yes,
                        "NO" => Answer::No,
                        other => return Err(Error::Parse(format!("bad answer {other:?}"))),
                    };
                    m.expected.push((idx, ans));
                }
                ["hash", file, hex] => {
                    m.hashes.insert((*file).to_string(), (*hex).to_string());
                }
                _ => return Err(Error::Parse(format!("bad manifest line: {line:?}"))),
            }
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        Manifest::from_text(&fs::read_to_string(path)?)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().fold(String::with_capacity(64), |mut acc, b| {
        write!(acc, "{b:02x}").unwrap();
        acc
    })
}

/// Writes one component file and records its checksum.
fn emit(dir: &Path, manifest: &mut Manifest, name: &str, content: &str) -> Result<()> {
    fs::write(dir.join(name), content)?;
    manifest.hashes.insert(name.to_string(), sha256_hex(content.as_bytes()));
    Ok(())
}

fn push_item(manifest: &mut Manifest, role: &str, idx: usize, file: &str, extra: Vec<String>) {
    manifest.items.push(ManifestItem {
        role: role.to_string(),
        idx,
        file: file.to_string(),
        extra,
    });
}

const MANIFEST_FILE: &str = "bundle.manifest";

fn finish(dir: &Path, manifest: Manifest) -> Result<PathBuf> {
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_text())?;
    Ok(path)
}

fn vector_text(v: &CompressedVector) -> Result<(String, &'static str)> {
    match v {
        CompressedVector::Slp(g) => Ok((g.to_text(), "slp")),
        CompressedVector::Rle(r) => Ok((r.to_text(), "rle")),
        CompressedVector::Dense(_) => {
            Err(Error::InvalidInstance("dense vectors are not bundled".into()))
        }
    }
}

/// Writes an inner-product or matrix-vector bundle produced by the
/// generators: sources, compressed vectors/rows, expected answers.
pub fn write_reduction_bundle(
    dir: &Path,
    bundle: &ReductionBundle,
    seed: Option<u64>,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest::new(bundle.kind.name());
    m.meta.insert("dim".into(), bundle.dimension.to_string());
    m.meta.insert("block-len".into(), bundle.block_len.to_string());
    m.meta.insert("block-count".into(), bundle.block_count.to_string());
    if let Some(t) = bundle.target {
        m.meta.insert("target".into(), t.to_string());
    }
    if let Some(s) = bundle.group_size {
        m.meta.insert("group-size".into(), s.to_string());
    }
    if let Some(seed) = seed {
        m.meta.insert("seed".into(), seed.to_string());
    }
    for (i, src) in bundle.sources.iter().enumerate() {
        let name = format!("source_{i}.sum");
        emit(dir, &mut m, &name, &src.to_text())?;
        push_item(&mut m, "source", i, &name, vec![]);
    }
    for (i, v) in bundle.vectors.iter().enumerate() {
        let (text, ext) = vector_text(v)?;
        let name = format!("vector_{i}.{ext}");
        emit(dir, &mut m, &name, &text)?;
        push_item(&mut m, "vector", i, &name, vec![v.dim().to_string()]);
    }
    if let Some(CompressedMatrix::RowWise { rows, cols }) = &bundle.matrix {
        for (i, row) in rows.iter().enumerate() {
            let name = format!("row_{i}.slp");
            emit(dir, &mut m, &name, &row.to_text())?;
            push_item(&mut m, "row", i, &name, vec![cols.to_string()]);
        }
    }
    for (i, ans) in bundle.expected.iter().enumerate() {
        m.expected.push((i, *ans));
    }
    finish(dir, m)
}

/// Writes a self-reduction bundle: the source instance, every non-trivial
/// signed subproblem, and the direct answer as expect 0.
pub fn write_selfred_bundle(
    dir: &Path,
    source: &SumInstance,
    s: usize,
    subs: &[SumInstance],
    direct: Answer,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest::new("selfred");
    m.meta.insert("group-size".into(), s.to_string());
    m.meta.insert("m".into(), source.m().to_string());
    let name = "source_0.sum";
    emit(dir, &mut m, name, &source.to_text())?;
    push_item(&mut m, "source", 0, name, vec![]);
    for (i, sub) in subs.iter().enumerate() {
        let name = format!("sub_{i}.sum");
        emit(dir, &mut m, &name, &sub.to_text())?;
        push_item(&mut m, "sub", i, &name, vec![]);
    }
    m.expected.push((0, direct));
    finish(dir, m)
}

/// Writes a universe-reduction bundle: the signed source, one reduced
/// instance per prime trial (prime and the three targets as item extras),
/// and the source's answer as expect 0.
pub fn write_unired_bundle(
    dir: &Path,
    source: &SumInstance,
    trials: &[UniverseReducedInstance],
    source_answer: Answer,
    seed: u64,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest::new("unired");
    m.meta.insert("seed".into(), seed.to_string());
    m.meta.insert("trials".into(), trials.len().to_string());
    let name = "source_0.sum";
    emit(dir, &mut m, name, &source.to_text())?;
    push_item(&mut m, "source", 0, name, vec![]);
    for (i, trial) in trials.iter().enumerate() {
        let name = format!("reduced_{i}.sum");
        emit(dir, &mut m, &name, &trial.instance.to_text())?;
        push_item(
            &mut m,
            "reduced",
            i,
            &name,
            vec![
                trial.prime.to_string(),
                trial.targets[0].to_string(),
                trial.targets[1].to_string(),
                trial.targets[2].to_string(),
            ],
        );
    }
    m.expected.push((0, source_answer));
    finish(dir, m)
}

/// Multi-row RLE container ("rlemat v1"): one line of `<bit> <len>` pairs
/// per row, prefixed by the run count.
pub fn rlemat_to_text(rows: &[RleSeq], cols: u64) -> String {
    let mut out = String::new();
    writeln!(out, "rlemat v1 {} {}", rows.len(), cols).unwrap();
    for row in rows {
        write!(out, "{}", row.n_rle()).unwrap();
        for &(bit, len) in row.runs() {
            write!(out, " {bit} {len}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn rlemat_from_text(text: &str) -> Result<(Vec<RleSeq>, u64)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty rlemat file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "rlemat" || fields[1] != "v1" {
        return Err(Error::Parse(format!("bad rlemat header: {header:?}")));
    }
    let n: usize = fields[2].parse().map_err(|_| Error::Parse("bad row count".into()))?;
    let cols: u64 = fields[3].parse().map_err(|_| Error::Parse("bad column count".into()))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.by_ref().take(n).enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            return Err(Error::Parse(format!("empty rlemat row {i}")));
        }
        let count: usize =
            toks[0].parse().map_err(|_| Error::Parse(format!("bad run count on row {i}")))?;
        if toks.len() != 1 + 2 * count {
            return Err(Error::Parse(format!("row {i} declares {count} runs, tokens disagree")));
        }
        let mut runs = Vec::with_capacity(count);
        for pair in toks[1..].chunks(2) {
            let bit: u8 =
                pair[0].parse().map_err(|_| Error::Parse(format!("bad bit on row {i}")))?;
            let len: u64 =
                pair[1].parse().map_err(|_| Error::Parse(format!("bad length on row {i}")))?;
            runs.push((bit, len));
        }
        let row = RleSeq::from_runs(runs)?;
        if row.total_len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has length {}, expected {cols}",
                row.total_len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse("fewer rows than header declares".into()));
    }
    Ok((rows, cols))
}

/// Writes the matrix-product bundle: strong grammars and RLE row/column
/// sets for A and B.
pub fn write_mm_bundle(dir: &Path, mm: &MmBundle) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest::new("mm");
    m.meta.insert("ell".into(), mm.ell.to_string());
    m.meta.insert("dim".into(), mm.n.to_string());

    emit(dir, &mut m, "a_strong.slp", &mm.strong_a_slp().to_text())?;
    push_item(&mut m, "strong-a", 0, "a_strong.slp", vec![]);
    emit(dir, &mut m, "b_strong.slp", &mm.strong_b_slp().to_text())?;
    push_item(&mut m, "strong-b", 0, "b_strong.slp", vec![]);
    emit(dir, &mut m, "a_rows.rlemat", &rlemat_to_text(&mm.a_rows, mm.n))?;
    push_item(&mut m, "rlemat-a", 0, "a_rows.rlemat", vec![]);
    emit(dir, &mut m, "b_cols.rlemat", &rlemat_to_text(&mm.b_cols, mm.n))?;
    push_item(&mut m, "rlemat-b", 0, "b_cols.rlemat", vec![]);
    finish(dir, m)
}

/// One verification line: item label, pass/fail, detail.
#[derive(Debug, Clone)]
pub struct VerifyLine {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub lines: Vec<VerifyLine>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.lines.push(VerifyLine { label: label.into(), pass, detail: detail.into() });
    }
}

fn read_slp(dir: &Path, file: &str) -> Result<Slp> {
    Slp::from_text(&fs::read_to_string(dir.join(file))?)
}

fn single_item<'a>(manifest: &'a Manifest, role: &str) -> Result<&'a ManifestItem> {
    let items = manifest.items_with_role(role);
    match items.as_slice() {
        [item] => Ok(item),
        [] => Err(Error::Parse(format!("manifest lists no {role:?} item"))),
        _ => Err(Error::Parse(format!("manifest lists multiple {role:?} items"))),
    }
}

fn read_sum(dir: &Path, file: &str) -> Result<SumInstance> {
    SumInstance::from_text(&fs::read_to_string(dir.join(file))?)
}

fn expected_map(manifest: &Manifest) -> BTreeMap<usize, Answer> {
    manifest.expected.iter().copied().collect()
}

/// Re-checks a bundle from disk: checksums, dimensions, recomputed
/// compressed-domain answers against re-run oracles, and the frozen size
/// bounds. Returns one line per check; the report passes iff all lines do.
pub fn verify_manifest(
    manifest_path: &Path,
    expand_budget: u64,
    oracle_budget: u64,
) -> Result<VerifyReport> {
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
    let manifest = Manifest::read(manifest_path)?;
    let mut report = VerifyReport::default();

    if manifest.items.is_empty() {
        report.warnings.push("manifest lists no items (vacuously passing)".into());
        return Ok(report);
    }

    for (file, want) in &manifest.hashes {
        match fs::read(dir.join(file)) {
            Ok(bytes) => {
                let got = sha256_hex(&bytes);
                report.check(
                    format!("checksum {file}"),
                    got == *want,
                    if got == *want { "ok".to_string() } else { format!("expected {want}, got {got}") },
                );
            }
            Err(e) => report.check(format!("checksum {file}"), false, e.to_string()),
        }
    }
    if !report.passed() {
        return Ok(report);
    }

    match manifest.kind.as_str() {
        "ip3" | "ipk" => verify_ip(&dir, &manifest, expand_budget, oracle_budget, &mut report)?,
        "mv" => verify_mv(&dir, &manifest, expand_budget, oracle_budget, &mut report)?,
        "selfred" => verify_selfred(&dir, &manifest, oracle_budget, &mut report)?,
        "unired" => verify_unired(&dir, &manifest, oracle_budget, &mut report)?,
        "mm" => verify_mm_bundle(&dir, &manifest, expand_budget, &mut report)?,
        other => {
            report.check("kind", false, format!("unknown bundle kind {other:?}"));
        }
    }
    Ok(report)
}

fn verify_ip(
    dir: &Path,
    manifest: &Manifest,
    expand_budget: u64,
    oracle_budget: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    let dim = manifest.meta_u64("dim")?;
    let source = read_sum(dir, &single_item(manifest, "source")?.file)?;
    let vectors: Vec<Slp> = manifest
        .items_with_role("vector")
        .iter()
        .map(|i| read_slp(dir, &i.file))
        .collect::<Result<_>>()?;
    if vectors.len() != 2 {
        report.check("vectors", false, format!("expected 2 vectors, found {}", vectors.len()));
        return Ok(());
    }
    for (i, v) in vectors.iter().enumerate() {
        report.check(
            format!("vector {i} dimension"),
            v.expansion_length() == dim,
            format!("{} vs {dim}", v.expansion_length()),
        );
    }

    let oracle = if manifest.kind == "ip3" {
        brute_3sum(&source, TargetMode::Convolution, oracle_budget)?.answer
    } else {
        brute_ksum(&source, oracle_budget)?.answer
    };
    let expected =
        expected_map(manifest).get(&0).copied().unwrap_or(oracle);
    report.check("stored expected answer matches oracle", expected == oracle, format!("{oracle}"));

    let a = CompressedVector::Slp(vectors[0].clone());
    let b = CompressedVector::Slp(vectors[1].clone());
    let mut values = Vec::new();
    for strategy in
        [Strategy::Decompress { budget: expand_budget }, Strategy::RunMerge, Strategy::Rle]
    {
        values.push(linalg::inner_product(&a, &b, strategy)?);
    }
    report.check(
        "strategies agree",
        values.windows(2).all(|w| w[0] == w[1]),
        format!("{values:?}"),
    );
    report.check(
        "inner product matches oracle",
        (values[0] >= 1) == oracle.is_yes(),
        format!("ip={} oracle={oracle}", values[0]),
    );

    let log = crate::ceil_log2(source.universe() as u64 + 1);
    let factor = if manifest.kind == "ip3" {
        reductions::IP3_SIZE_FACTOR * source.m() as u64
    } else {
        reductions::KSUM_SIZE_FACTOR * source.k() as u64 * source.m() as u64
    };
    let bound = factor * log;
    for (i, v) in vectors.iter().enumerate() {
        report.check(
            format!("vector {i} size bound"),
            (v.size() as u64) <= bound,
            format!("{} <= {bound}", v.size()),
        );
    }
    Ok(())
}

fn verify_mv(
    dir: &Path,
    manifest: &Manifest,
    expand_budget: u64,
    oracle_budget: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    let dim = manifest.meta_u64("dim")?;
    let target = manifest.meta_u64("target")? as i64;
    let s = manifest.meta_u64("group-size")?;
    let sources: Vec<SumInstance> = manifest
        .items_with_role("source")
        .iter()
        .map(|i| read_sum(dir, &i.file))
        .collect::<Result<_>>()?;
    let rows: Vec<Slp> = manifest
        .items_with_role("row")
        .iter()
        .map(|i| read_slp(dir, &i.file))
        .collect::<Result<_>>()?;
    let vector = read_slp(dir, &single_item(manifest, "vector")?.file)?;
    if rows.len() != sources.len() {
        report.check(
            "row/source counts",
            false,
            format!("{} rows vs {} sources", rows.len(), sources.len()),
        );
        return Ok(());
    }

    report.check(
        "vector dimension",
        vector.expansion_length() == dim,
        format!("{} vs {dim}", vector.expansion_length()),
    );
    let matrix = CompressedMatrix::RowWise { rows: rows.clone(), cols: dim };
    match matrix.validate() {
        Ok(()) => report.check("row dimensions", true, "ok"),
        Err(e) => report.check("row dimensions", false, e.to_string()),
    }

    let entries = linalg::mat_vec(&matrix, &CompressedVector::Slp(vector), Strategy::RunMerge)?;
    let expected = expected_map(manifest);
    for (i, src) in sources.iter().enumerate() {
        let oracle = brute_3sum(src, TargetMode::Target(target), oracle_budget)?.answer;
        if let Some(stored) = expected.get(&i) {
            report.check(format!("instance {i} stored answer"), *stored == oracle, format!("{oracle}"));
        }
        report.check(
            format!("instance {i} entry matches oracle"),
            (entries[i] >= 1) == oracle.is_yes(),
            format!("entry={} oracle={oracle}", entries[i]),
        );
        let log = crate::ceil_log2(src.universe() as u64 + 1);
        let bound = reductions::MV_ROW_SIZE_FACTOR * s * log;
        report.check(
            format!("row {i} size bound"),
            (rows[i].size() as u64) <= bound,
            format!("{} <= {bound}", rows[i].size()),
        );
    }
    let _ = expand_budget;
    Ok(())
}

fn verify_selfred(
    dir: &Path,
    manifest: &Manifest,
    oracle_budget: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    let s = manifest.meta_u64("group-size")? as usize;
    let source = read_sum(dir, &single_item(manifest, "source")?.file)?;
    let subs: Vec<SumInstance> = manifest
        .items_with_role("sub")
        .iter()
        .map(|i| read_sum(dir, &i.file))
        .collect::<Result<_>>()?;

    let direct = brute_3sum(&source, TargetMode::Convolution, oracle_budget)?.answer;
    if let Some(stored) = expected_map(manifest).get(&0) {
        report.check("stored direct answer", *stored == direct, format!("{direct}"));
    }
    let mut union = false;
    for sub in &subs {
        if brute_3sum(sub, TargetMode::Target(0), oracle_budget)?.is_yes() {
            union = true;
        }
    }
    report.check(
        "union of subproblem answers equals direct answer",
        union == direct.is_yes(),
        format!("union={union} direct={direct}"),
    );
    let per_side = source.m().div_ceil(s);
    report.check(
        "subproblem count bound",
        subs.len() <= 9 * per_side * per_side,
        format!("{} <= {}", subs.len(), 9 * per_side * per_side),
    );
    Ok(())
}

fn verify_unired(
    dir: &Path,
    manifest: &Manifest,
    oracle_budget: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    let source = read_sum(dir, &single_item(manifest, "source")?.file)?;
    let source = if source.form() == Form::Signed { source } else { source.to_signed() };
    let direct = brute_3sum(&source, TargetMode::Target(0), oracle_budget)?.answer;
    if let Some(stored) = expected_map(manifest).get(&0) {
        report.check("stored source answer", *stored == direct, format!("{direct}"));
    }
    let mut false_positives = 0usize;
    let mut trials = 0usize;
    for item in manifest.items_with_role("reduced") {
        let inst = read_sum(dir, &item.file)?;
        if item.extra.len() != 4 {
            report.check(format!("trial {}", item.idx), false, "missing prime/targets");
            continue;
        }
        let targets: Vec<i64> = item.extra[1..]
            .iter()
            .map(|t| t.parse().map_err(|_| Error::Parse("bad target".into())))
            .collect::<Result<_>>()?;
        let mut yes = false;
        for &t in &targets {
            if t <= 3 * inst.universe()
                && brute_3sum(&inst, TargetMode::Target(t), oracle_budget)?.is_yes()
            {
                yes = true;
            }
        }
        trials += 1;
        if direct.is_yes() {
            report.check(
                format!("trial {} preserves YES (p={})", item.idx, item.extra[0]),
                yes,
                if yes { "ok" } else { "completeness violated" },
            );
        } else if yes {
            false_positives += 1;
        }
    }
    if !direct.is_yes() && trials > 0 {
        report.warnings.push(format!(
            "NO instance: {false_positives}/{trials} false-positive trials (allowed, bounded by 1/2 per prime)"
        ));
    }
    Ok(())
}

fn verify_mm_bundle(
    dir: &Path,
    manifest: &Manifest,
    expand_budget: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    let ell = manifest.meta_u64("ell")? as u32;
    let n = manifest.meta_u64("dim")?;
    let a_strong = read_slp(dir, &single_item(manifest, "strong-a")?.file)?;
    let b_strong = read_slp(dir, &single_item(manifest, "strong-b")?.file)?;
    let (a_rows, ca) =
        rlemat_from_text(&fs::read_to_string(dir.join(&single_item(manifest, "rlemat-a")?.file))?)?;
    let (b_cols, cb) =
        rlemat_from_text(&fs::read_to_string(dir.join(&single_item(manifest, "rlemat-b")?.file))?)?;
    report.check("rlemat dimensions", ca == n && cb == n, format!("{ca},{cb} vs {n}"));

    let bundle = MmBundle {
        ell,
        n,
        a_rows,
        b_cols,
        a_strong: CompressedMatrix::Strong {
            slp: a_strong,
            rows: n,
            cols: n,
            layout: MatrixLayout::ColMajor,
        },
        b_strong: CompressedMatrix::Strong {
            slp: b_strong,
            rows: n,
            cols: n,
            layout: MatrixLayout::RowMajor,
        },
    };
    let certs = reductions::certify_mm(&bundle, expand_budget)?;
    report.check(
        "product contains all substrings",
        certs.contains_all,
        format!("{}/{}", certs.distinct_substrings, certs.expected_substrings),
    );
    report.check(
        "grammar lower bound",
        certs.c_grammar_lower_bound >= certs.expected_substrings / (2 * ell as u64),
        format!("{}", certs.c_grammar_lower_bound),
    );
    report.check("strong A expands to flattening", certs.strong_a_matches, "byte-exact");
    report.check("strong B expands to flattening", certs.strong_b_matches, "byte-exact");
    report.check("RLE rows match dense", certs.rle_rows_match, "ok");
    report.check("RLE columns match dense", certs.rle_cols_match, "ok");
    let log = crate::ceil_log2(n);
    report.check(
        "RLE run-count bound",
        (certs.max_row_runs as u64) <= reductions::MM_RLE_RUNS_FACTOR * log
            && (certs.max_col_runs as u64) <= reductions::MM_RLE_RUNS_FACTOR * log,
        format!("max runs {},{} <= {}", certs.max_row_runs, certs.max_col_runs, reductions::MM_RLE_RUNS_FACTOR * log),
    );
    report.check(
        "strong grammar size bound",
        (certs.strong_a_size as u64) <= reductions::MM_STRONG_SIZE_FACTOR * log * log
            && (certs.strong_b_size as u64) <= reductions::MM_STRONG_SIZE_FACTOR * log * log,
        format!(
            "sizes {},{} <= {}",
            certs.strong_a_size,
            certs.strong_b_size,
            reductions::MM_STRONG_SIZE_FACTOR * log * log
        ),
    );
    Ok(())
}
