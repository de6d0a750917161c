use std::io::{Read, Write};
use std::path::Path;

use super::{CommitRecord, Label};
use crate::{Error, Result};

pub const COMMITS_CSV_HEADER: [&str; 19] = [
    "hash",
    "author",
    "timestamp",
    "ns",
    "nd",
    "nf",
    "entropy",
    "la",
    "ld",
    "lt",
    "fix",
    "ndev",
    "age",
    "nuc",
    "exp",
    "rexp",
    "sexp",
    "label",
    "release",
];

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

/// Write commits as UTF-8 CSV with LF line endings and six-decimal floats.
pub fn write_commits_csv<W: Write>(out: W, commits: &[CommitRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COMMITS_CSV_HEADER)?;
    for c in commits {
        w.write_record([
            c.hash.clone(),
            c.author.clone(),
            c.timestamp.to_string(),
            c.ns.to_string(),
            c.nd.to_string(),
            c.nf.to_string(),
            f6(c.entropy),
            c.la.to_string(),
            c.ld.to_string(),
            f6(c.lt),
            u8::from(c.fix).to_string(),
            c.ndev.to_string(),
            f6(c.age),
            c.nuc.to_string(),
            c.exp.to_string(),
            f6(c.rexp),
            c.sexp.to_string(),
            c.label.as_str().to_string(),
            c.release.map(|r| r.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

/// Read a commits CSV written by [`write_commits_csv`]. `origin` is only used
/// in error messages.
pub fn read_commits_csv<R: Read>(input: R, origin: &Path) -> Result<Vec<CommitRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(COMMITS_CSV_HEADER.iter().copied()) {
        return Err(Error::Parse {
            path: origin.to_path_buf(),
            line: 1,
            message: format!("unexpected header, want {}", COMMITS_CSV_HEADER.join(",")),
        });
    }
    let mut commits = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let field = |k: usize| row.get(k).unwrap_or("");
        let int = |k: usize| {
            field(k).parse::<u64>().map_err(|_| {
                err(format!(
                    "{} is not a count: {:?}",
                    COMMITS_CSV_HEADER[k],
                    field(k)
                ))
            })
        };
        let float = |k: usize| {
            field(k)
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    err(format!(
                        "{} is not a number: {:?}",
                        COMMITS_CSV_HEADER[k],
                        field(k)
                    ))
                })
        };
        let label = match field(17) {
            "defective" => Label::Defective,
            "clean" => Label::Clean,
            other => return Err(err(format!("unknown label {other:?}"))),
        };
        let fix = match field(10) {
            "1" | "true" => true,
            "0" | "false" => false,
            other => return Err(err(format!("fix must be 0/1, got {other:?}"))),
        };
        let release = match field(18) {
            "" => None,
            s => Some(
                s.parse()
                    .map_err(|_| err(format!("bad release index {s:?}")))?,
            ),
        };
        commits.push(CommitRecord {
            hash: field(0).to_string(),
            author: field(1).to_string(),
            timestamp: field(2)
                .parse()
                .map_err(|_| err(format!("bad timestamp {:?}", field(2))))?,
            ns: int(3)?,
            nd: int(4)?,
            nf: int(5)?,
            entropy: float(6)?,
            la: int(7)?,
            ld: int(8)?,
            lt: float(9)?,
            fix,
            ndev: int(11)?,
            age: float(12)?,
            nuc: int(13)?,
            exp: int(14)?,
            rexp: float(15)?,
            sexp: int(16)?,
            label,
            release,
            message: String::new(),
            parent: None,
        });
    }
    Ok(commits)
}
