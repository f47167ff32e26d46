use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use slickcw::diag::{self, KBox, Options};
use slickcw::generate::{
    joined_cograph_pair, copies_of_k2, copies_of_p4, random_cograph, random_sized_slick, random_slick, rng,
};
use slickcw::oracle::{build_matrix, determinant, oracle_inertia};
use slickcw::scalar::{format_scalar, int, parse_scalar, ratio};
use slickcw::translate::{classic_to_slick, slick_to_classic};
use slickcw::{
    inertia, parse_classic, parse_slick, DiagError, Inertia, Interval, MatrixSpec, Scalar, SlickExpr, SpectralError,
};
use thiserror::Error;

use crate::{BenchArgs, CheckArgs, CountArgs, DiagArgs, Family, Format, GenArgs, InputArgs, SpecArgs, SpecName};

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        let _ = writeln!($out, $($arg)*);
    }};
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
    #[error("engine and oracle disagree")]
    Mismatch,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Mismatch => 3,
        }
    }
}

impl From<DiagError> for CliError {
    fn from(e: DiagError) -> Self {
        match e {
            DiagError::Invariant { .. } => CliError::Invariant(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Diag(d) => d.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn format_of(path: &Path, format: Option<Format>) -> Format {
    format.unwrap_or(match path.extension().and_then(|x| x.to_str()) {
        Some("classic") => Format::Classic,
        _ => Format::Slick,
    })
}

/// Reads an expression; classic input is translated to slick.
fn load(path: &Path, format: Option<Format>) -> Result<SlickExpr, CliError> {
    let text = read(path)?;
    let at = |e: slickcw::ParseError| CliError::Input(format!("{}:{e}", path.display()));
    match format_of(path, format) {
        Format::Slick => parse_slick(&text).map_err(at),
        Format::Classic => parse_classic(&text).map(|c| classic_to_slick(&c)).map_err(at),
    }
}

fn scalar(text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).map_err(input_err)
}

fn read_diagonal(path: &Path) -> Result<HashMap<String, Scalar>, CliError> {
    let mut table = HashMap::new();
    for (no, line) in read(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::Input(format!("{}:{}: expected `vertex value`", path.display(), no + 1));
        let mut parts = line.split_whitespace();
        let (Some(v), Some(x), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let value = parse_scalar(x).map_err(|_| bad())?;
        if table.insert(v.to_string(), value).is_some() {
            return Err(CliError::Input(format!(
                "{}:{}: vertex {v} listed twice",
                path.display(),
                no + 1
            )));
        }
    }
    Ok(table)
}

fn matrix_spec(args: &SpecArgs, e: &SlickExpr) -> Result<MatrixSpec, CliError> {
    Ok(match args.spec {
        SpecName::Adjacency => MatrixSpec::adjacency(),
        SpecName::Laplacian => MatrixSpec::laplacian(e),
        SpecName::SignlessLaplacian => MatrixSpec::signless_laplacian(e),
        SpecName::Custom => {
            let path = args
                .diagonal
                .as_deref()
                .ok_or_else(|| CliError::Input("--spec custom needs --diagonal".into()))?;
            MatrixSpec::custom(scalar(&args.w)?, read_diagonal(path)?)?
        }
    })
}

fn checked() -> Options {
    Options {
        check_invariants: true,
        ..Options::default()
    }
}

pub fn diag(a: DiagArgs, out: &mut String) -> Result<(), CliError> {
    let e = load(&a.input.input, a.input.format)?;
    let spec = matrix_spec(&a.spec, &e)?;
    let c = scalar(&a.c)?;
    let opts = Options {
        check_invariants: true,
        trace: a.trace || a.dump_boxes.is_some(),
        keep_boxes: a.dump_boxes.is_some(),
    };
    let run = diag::run(&e, &c, &spec, opts)?;
    if let Some(path) = &a.dump_boxes {
        let mut dump = format!("k {}\n", e.width());
        for t in &run.trace {
            if let Some(b) = &t.boxed {
                let _ = writeln!(dump, "node={} {}", t.node, b.grouped());
            }
        }
        fs::write(path, dump).map_err(|err| CliError::Input(format!("{}: {err}", path.display())))?;
    }
    if a.trace {
        for t in &run.trace {
            outln!(out, "{t}");
        }
    }
    for entry in run.entries.iter() {
        outln!(out, "{}", format_scalar(&entry.value));
    }
    outln!(out, "inertia: {}", inertia(&run.entries));
    Ok(())
}

pub fn count(a: CountArgs, out: &mut String) -> Result<(), CliError> {
    let e = load(&a.input.input, a.input.format)?;
    let spec = matrix_spec(&a.spec, &e)?;
    let iv: Interval = a.interval.parse()?;
    outln!(out, "count: {}", slickcw::count_eigenvalues(&e, &iv, &spec)?);
    Ok(())
}

pub fn translate(a: InputArgs, out: &mut String) -> Result<(), CliError> {
    let text = read(&a.input)?;
    let at = |e: slickcw::ParseError| CliError::Input(format!("{}:{e}", a.input.display()));
    let _ = match format_of(&a.input, a.format) {
        Format::Slick => write!(out, "{}", slick_to_classic(&parse_slick(&text).map_err(at)?)),
        Format::Classic => write!(out, "{}", classic_to_slick(&parse_classic(&text).map_err(at)?)),
    };
    Ok(())
}

/// Engine inertia and oracle inertia, plus whether the determinant agrees.
fn compare(e: &SlickExpr, c: &Scalar, spec: &MatrixSpec) -> Result<(Inertia, Inertia, bool), CliError> {
    let run = diag::run(e, c, spec, checked())?;
    let oracle = oracle_inertia(e, c, spec)?;
    let dense = build_matrix(&e.eval(), c, spec)?;
    let same_det = run.entries.product() == determinant(&dense);
    Ok((inertia(&run.entries), oracle, same_det))
}

fn check_boxes(path: &Path, out: &mut String) -> Result<(), CliError> {
    let text = read(path)?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let k: usize = lines
        .next()
        .and_then(|(_, l)| l.trim().strip_prefix("k "))
        .and_then(|k| k.trim().parse().ok())
        .ok_or_else(|| CliError::Input(format!("{}: missing `k <int>` header", path.display())))?;
    let mut count = 0;
    for (no, line) in lines {
        let bad = |msg: String| CliError::Input(format!("{}:{}: {msg}", path.display(), no + 1));
        let (node, record) = line
            .trim()
            .strip_prefix("node=")
            .and_then(|rest| rest.split_once(' '))
            .ok_or_else(|| bad("expected `node=<id> <box>`".into()))?;
        let node: usize = node.parse().map_err(|_| bad(format!("bad node id {node:?}")))?;
        let b: KBox = record.parse().map_err(|e| bad(format!("{e}")))?;
        b.validate(k)
            .map_err(|detail| CliError::Invariant(DiagError::Invariant { node, detail }.to_string()))?;
        count += 1;
    }
    outln!(out, "{count} boxes OK");
    Ok(())
}

pub fn check(a: CheckArgs, out: &mut String) -> Result<(), CliError> {
    if let Some(path) = &a.boxes {
        return check_boxes(path, out);
    }
    if let Some(fuzz) = a.fuzz {
        let shifts = [int(-2), int(-1), ratio(-1, 2), int(0), ratio(1, 2), int(1), int(2)];
        let mut matched = 0;
        for seed in a.seed..a.seed + fuzz {
            let e = random_sized_slick(a.max_n, a.max_k, &mut rng(seed));
            let spec = matrix_spec(&a.spec, &e)?;
            let mut ok = true;
            for c in &shifts {
                let (engine, oracle, same_det) = compare(&e, c, &spec)?;
                if engine != oracle || !same_det {
                    eprintln!("seed {seed} c={c}: engine {engine}, oracle {oracle}");
                    ok = false;
                }
            }
            matched += usize::from(ok);
        }
        let verdict = if matched as u64 == fuzz { "MATCH" } else { "MISMATCH" };
        outln!(out, "{matched}/{fuzz} {verdict}");
        return if matched as u64 == fuzz {
            Ok(())
        } else {
            Err(CliError::Mismatch)
        };
    }
    let path = a
        .input
        .as_deref()
        .ok_or_else(|| CliError::Input("check needs --input, --fuzz or --boxes".into()))?;
    let e = load(path, a.format)?;
    if e.atom_count() > a.oracle_limit {
        return Err(CliError::Input(format!(
            "{} vertices exceed the oracle limit {}",
            e.atom_count(),
            a.oracle_limit
        )));
    }
    let spec = matrix_spec(&a.spec, &e)?;
    let (engine, oracle, same_det) = compare(&e, &scalar(&a.c)?, &spec)?;
    outln!(out, "engine: {engine}");
    outln!(out, "oracle: {oracle}");
    if engine == oracle && same_det {
        outln!(out, "MATCH");
        Ok(())
    } else {
        outln!(out, "MISMATCH");
        Err(CliError::Mismatch)
    }
}

pub fn gen(a: GenArgs, out: &mut String) -> Result<(), CliError> {
    if a.n == 0 || a.k == 0 {
        return Err(CliError::Input("--n and --k must be at least 1".into()));
    }
    let mut r = rng(a.seed);
    let e = match a.family {
        Family::Slick => random_slick(a.n, a.k, &mut r),
        Family::Cograph => random_cograph(a.n, &mut r),
        Family::Construction => {
            let left = a.n.div_ceil(2);
            if a.n < 2 {
                return Err(CliError::Input("construction needs --n >= 2".into()));
            }
            joined_cograph_pair(left, a.n - left, &mut r)
        }
        Family::P4 => copies_of_p4(a.n),
        Family::K2 => copies_of_k2(a.n),
    };
    let _ = write!(out, "{e}");
    Ok(())
}

pub fn bench(a: BenchArgs, out: &mut String) -> Result<(), CliError> {
    if a.k == 0 || a.sizes.contains(&0) {
        return Err(CliError::Input("sizes and --k must be at least 1".into()));
    }
    let c = scalar(&a.c)?;
    outln!(out, "{:>10} {:>14} {:>12} {:>8}", "n", "ops", "time_ms", "ratio");
    let mut prev: Option<u64> = None;
    for &n in &a.sizes {
        let e = random_slick(n, a.k, &mut rng(a.seed));
        let start = Instant::now();
        let run = diag::run(&e, &c, &MatrixSpec::adjacency(), Options::default())?;
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        let ratio = prev.map_or("-".to_string(), |p| format!("{:.3}", run.ops as f64 / p as f64));
        outln!(out, "{n:>10} {:>14} {ms:>12.1} {ratio:>8}", run.ops);
        prev = Some(run.ops);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_follows_extension() {
        assert_eq!(format_of(Path::new("x.classic"), None), Format::Classic);
        assert_eq!(format_of(Path::new("x.slick"), None), Format::Slick);
        assert_eq!(format_of(Path::new("x"), None), Format::Slick);
        assert_eq!(format_of(Path::new("x.classic"), Some(Format::Slick)), Format::Slick);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input(String::new()).exit_code(), 1);
        assert_eq!(CliError::Mismatch.exit_code(), 3);
        let inv: CliError = DiagError::Invariant {
            node: 4,
            detail: "x".into(),
        }
        .into();
        assert_eq!(inv.exit_code(), 2);
        let wrapped: CliError = SpectralError::Diag(DiagError::Invariant {
            node: 1,
            detail: "y".into(),
        })
        .into();
        assert_eq!(wrapped.exit_code(), 2);
        let missing: CliError = DiagError::MissingDiagonal("a".into()).into();
        assert_eq!(missing.exit_code(), 1);
        let root: CliError = SpectralError::RootIsAtom.into();
        assert_eq!(root.exit_code(), 1);
    }
}
