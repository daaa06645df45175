//! Line-oriented complex format: one simplex per line, vertex indices
//! separated by spaces, dimension given by the number of entries.

use std::io::{BufRead, Write};

use super::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub fn write_text<W: Write>(c: &SimplicialComplex, mut out: W) -> Result<()> {
    for level in c.levels() {
        for s in level.iter() {
            let line: Vec<String> = s.iter().map(u32::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
    }
    Ok(())
}

/// Parse the text format and close downward. Blank lines and `#` comments are
/// skipped. The cap defaults to the largest dimension present.
pub fn read_text<R: BufRead>(input: R, k_cap: Option<usize>) -> Result<SimplicialComplex> {
    let mut simplices = Vec::new();
    let mut max_vertex = None;
    let mut top = 0;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let verts: std::result::Result<Vec<u32>, _> = t.split_whitespace().map(str::parse::<u32>).collect();
        let verts = verts.map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        let s = Simplex::new(verts).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        top = top.max(s.dim());
        max_vertex = max_vertex.max(s.vertices().last().copied());
        simplices.push(s);
    }
    let n = max_vertex.map_or(0, |v| v as usize + 1);
    SimplicialComplex::from_simplices(n, k_cap.unwrap_or(top), simplices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = SimplicialComplex::from_vertex_lists(5, 2, &[vec![0, 1, 2], vec![2, 3], vec![4]]).unwrap();
        let mut buf = Vec::new();
        write_text(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("0\n1\n2\n3\n4\n0 1\n"));
        assert_eq!(read_text(&buf[..], Some(2)).unwrap(), c);
    }

    #[test]
    fn closes_downward_and_reports_bad_lines() {
        let c = read_text("# tetra\n0 1 2 3\n".as_bytes(), None).unwrap();
        assert_eq!(super::super::count_simplices(&c).0, vec![4, 6, 4, 1]);
        assert!(matches!(read_text("0 1\n1 x\n".as_bytes(), None), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_text("2 2\n".as_bytes(), None), Err(Error::Parse { line: 1, .. })));
    }
}
