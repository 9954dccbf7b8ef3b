//! Text format for representations.
//!
//! ```text
//! algebra k2.alg
//! dims 1 1
//! matrix a rows 1 cols 1
//! 1
//! matrix b rows 1 cols 1
//! -1/2
//! ```
//!
//! The `dims` line is optional when every vertex is touched by a matrix block. Arrows without
//! a block are zero maps. Blank lines and `#` comments are ignored.

use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use num_traits::Zero;

use super::Representation;
use crate::bound_quiver::{parse_algebra, BoundQuiverAlgebra};
use crate::error::{Error, Result};
use crate::exactalg::{Rat, RatMatrix};

/// Parsed representation file before it is attached to an algebra.
#[derive(Clone, Debug)]
pub struct RepFile {
    pub algebra: String,
    pub dims: Option<Vec<usize>>,
    pub blocks: Vec<(String, RatMatrix)>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col: 1, msg: msg.into() }
}

fn parse_rat(tok: &str, line: usize) -> Result<Rat> {
    tok.parse::<Rat>().map_err(|_| perr(line, format!("invalid rational '{tok}'")))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| perr(line, format!("expected {what}")))
}

pub fn parse_rep_file(text: &str) -> Result<RepFile> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut it = lines.into_iter().peekable();
    let (ln, first) = it.next().ok_or_else(|| perr(1, "empty representation file"))?;
    let mut toks = first.split_whitespace();
    if toks.next() != Some("algebra") {
        return Err(perr(ln, "expected 'algebra <file>'"));
    }
    let algebra = toks.collect::<Vec<_>>().join(" ");
    if algebra.is_empty() {
        return Err(perr(ln, "missing algebra file name"));
    }
    let mut dims = None;
    let mut blocks: Vec<(String, RatMatrix)> = Vec::new();
    while let Some((ln, line)) = it.next() {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("dims") => {
                if dims.is_some() {
                    return Err(perr(ln, "duplicate 'dims' line"));
                }
                let d: Result<Vec<usize>> =
                    toks.map(|t| t.parse().map_err(|_| perr(ln, format!("invalid dimension '{t}'")))).collect();
                dims = Some(d?);
            }
            Some("matrix") => {
                let name = toks.next().ok_or_else(|| perr(ln, "missing arrow name"))?.to_string();
                if toks.next() != Some("rows") {
                    return Err(perr(ln, "expected 'rows'"));
                }
                let r = parse_usize(toks.next(), ln, "row count")?;
                if toks.next() != Some("cols") {
                    return Err(perr(ln, "expected 'cols'"));
                }
                let c = parse_usize(toks.next(), ln, "column count")?;
                if blocks.iter().any(|(n, _)| *n == name) {
                    return Err(perr(ln, format!("duplicate matrix for arrow '{name}'")));
                }
                let mut rows = Vec::with_capacity(r);
                if c > 0 {
                    for _ in 0..r {
                        let (rl, row) = it.next().ok_or_else(|| perr(ln, format!("matrix '{name}' is missing rows")))?;
                        let vals: Result<Vec<Rat>> = row.split_whitespace().map(|t| parse_rat(t, rl)).collect();
                        let vals = vals?;
                        if vals.len() != c {
                            return Err(perr(rl, format!("expected {c} entries, found {}", vals.len())));
                        }
                        rows.push(vals);
                    }
                } else {
                    rows = vec![Vec::new(); r];
                }
                let m = if c == 0 { RatMatrix::zeros(r, 0) } else { RatMatrix::from_rows(c, rows)? };
                blocks.push((name, m));
            }
            Some(other) => return Err(perr(ln, format!("unexpected '{other}'"))),
            None => {}
        }
    }
    Ok(RepFile { algebra, dims, blocks })
}

impl RepFile {
    /// Attaches the blocks to `alg`, inferring or checking the dimension vector.
    pub fn build(&self, alg: Arc<BoundQuiverAlgebra>) -> Result<Representation> {
        let q = alg.quiver();
        let n = q.vertex_count();
        let mut dims: Vec<Option<usize>> = match &self.dims {
            Some(d) if d.len() != n => {
                return Err(Error::DimensionMismatch(format!("dims has {} entries, algebra has {n} vertices", d.len())))
            }
            Some(d) => d.iter().copied().map(Some).collect(),
            None => vec![None; n],
        };
        let mut set = |v: usize, k: usize, name: &str| -> Result<()> {
            match dims[v] {
                Some(x) if x != k => Err(Error::DimensionMismatch(format!(
                    "matrix '{name}' implies dimension {k} at vertex {}, expected {x}",
                    q.vertices()[v]
                ))),
                _ => {
                    dims[v] = Some(k);
                    Ok(())
                }
            }
        };
        let mut maps: Vec<Option<RatMatrix>> = vec![None; q.arrows().len()];
        for (name, m) in &self.blocks {
            let a = q.arrow_index(name).ok_or_else(|| Error::Semantic(format!("unknown arrow '{name}'")))?;
            let arrow = q.arrow(a);
            set(arrow.head, m.rows(), name)?;
            set(arrow.tail, m.cols(), name)?;
            maps[a] = Some(m.clone());
        }
        let dims: Vec<usize> = dims
            .into_iter()
            .enumerate()
            .map(|(v, d)| d.ok_or_else(|| Error::Semantic(format!("dimension at vertex {} is not determined", q.vertices()[v]))))
            .collect::<Result<_>>()?;
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(a, m)| m.unwrap_or_else(|| RatMatrix::zeros(dims[q.arrow(a).head], dims[q.arrow(a).tail])))
            .collect();
        Representation::new_validated(alg, dims, maps)
    }
}

/// Reads a representation file, loading the algebra it names relative to the file's directory.
pub fn load_rep(path: &FsPath) -> Result<(Arc<BoundQuiverAlgebra>, Representation)> {
    let text = std::fs::read_to_string(path)?;
    let rf = parse_rep_file(&text)?;
    let alg_path = resolve(path, &rf.algebra);
    let alg = Arc::new(parse_algebra(&std::fs::read_to_string(&alg_path)?)?);
    let m = rf.build(alg.clone())?;
    Ok((alg, m))
}

/// Reads a representation file against an already loaded algebra (the header is not followed).
pub fn load_rep_with(path: &FsPath, alg: Arc<BoundQuiverAlgebra>) -> Result<Representation> {
    parse_rep_file(&std::fs::read_to_string(path)?)?.build(alg)
}

fn resolve(file: &FsPath, name: &str) -> PathBuf {
    let p = PathBuf::from(name);
    if p.is_absolute() {
        p
    } else {
        file.parent().map_or(p.clone(), |d| d.join(&p))
    }
}

fn fmt_rat(x: &Rat) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        x.to_string()
    }
}

/// Prints `m` in the representation file format.
pub fn print_rep(m: &Representation, algebra_file: &str) -> String {
    let q = m.algebra().quiver();
    let mut s = format!("algebra {algebra_file}\ndims");
    for d in m.dims() {
        s.push_str(&format!(" {d}"));
    }
    s.push('\n');
    for (a, arrow) in q.arrows().iter().enumerate() {
        let mat = m.map(a);
        s.push_str(&format!("matrix {} rows {} cols {}\n", arrow.name, mat.rows(), mat.cols()));
        if mat.cols() == 0 {
            continue;
        }
        for r in 0..mat.rows() {
            let row: Vec<String> = mat.row(r).iter().map(fmt_rat).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Arc<BoundQuiverAlgebra> {
        Arc::new(parse_algebra("vertices 1 2; arrows a:1->2 b:1->2;").unwrap())
    }

    #[test]
    fn roundtrip() {
        let text = "algebra k2.alg\nmatrix a rows 1 cols 1\n1\nmatrix b rows 1 cols 1\n-1/2\n";
        let rf = parse_rep_file(text).unwrap();
        assert_eq!(rf.algebra, "k2.alg");
        let m = rf.build(k2()).unwrap();
        assert_eq!(m.dims(), &[1, 1]);
        let again = parse_rep_file(&print_rep(&m, "k2.alg")).unwrap().build(k2()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn zero_columns_and_missing_arrows() {
        let text = "algebra k2.alg\ndims 0 2\nmatrix a rows 2 cols 0\n";
        let m = parse_rep_file(text).unwrap().build(k2()).unwrap();
        assert_eq!(m.dims(), &[0, 2]);
        assert_eq!(m.map(1).rows(), 2);
        let printed = print_rep(&m, "k2.alg");
        assert_eq!(parse_rep_file(&printed).unwrap().build(k2()).unwrap(), m);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_rep_file("dims 1 1"), Err(Error::Parse { line: 1, .. })));
        let bad = "algebra x\nmatrix a rows 1 cols 2\n1\n";
        assert!(matches!(parse_rep_file(bad), Err(Error::Parse { line: 3, .. })));
        let rf = parse_rep_file("algebra x\nmatrix c rows 1 cols 1\n1\n").unwrap();
        assert!(matches!(rf.build(k2()), Err(Error::Semantic(_))));
        let rf = parse_rep_file("algebra x\nmatrix a rows 1 cols 1\n1\nmatrix b rows 2 cols 1\n1\n1\n").unwrap();
        assert!(matches!(rf.build(k2()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn relation_violations_are_rejected() {
        let a3 = Arc::new(parse_algebra("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;").unwrap());
        let rf = parse_rep_file("algebra a3\nmatrix a rows 1 cols 1\n1\nmatrix b rows 1 cols 1\n1\n").unwrap();
        assert!(rf.build(a3).is_err());
    }
}
