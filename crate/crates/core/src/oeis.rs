//! OEIS b-file reading and writing, sequence comparison, and DOT export of
//! generation trees.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_bigint::BigUint;

use crate::enumerate::{GenTree, TreeKind};
use crate::error::{invalid, Error, Result};

/// Node values with more decimal digits than this are labeled by their
/// factored form in DOT output.
pub const DOT_GIANT_DIGITS: usize = 30;

/// An indexed integer sequence. Indices run consecutively from `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFile {
    pub sequence_id: String,
    offset: i64,
    values: Vec<BigUint>,
}

impl SequenceFile {
    pub fn new(sequence_id: impl Into<String>, offset: i64, values: Vec<BigUint>) -> Self {
        SequenceFile { sequence_id: sequence_id.into(), offset, values }
    }

    /// Offset-1 sequence of word-sized values.
    pub fn from_u64s(sequence_id: impl Into<String>, values: impl IntoIterator<Item = u64>) -> Self {
        Self::new(sequence_id, 1, values.into_iter().map(BigUint::from).collect())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the last entry, if any.
    pub fn last_index(&self) -> Option<i64> {
        (!self.values.is_empty()).then(|| self.offset + self.values.len() as i64 - 1)
    }

    pub fn get(&self, index: i64) -> Option<&BigUint> {
        let i = index.checked_sub(self.offset)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i))
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &BigUint)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (self.offset + i as i64, v))
    }
}

/// Writes `<index> <value>` lines, no header.
pub fn write_bfile<W: Write>(seq: &SequenceFile, mut out: W) -> Result<()> {
    for (i, v) in seq.entries() {
        writeln!(out, "{i} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_bfile_path(seq: &SequenceFile, path: impl AsRef<Path>) -> Result<()> {
    write_bfile(seq, BufWriter::new(File::create(path)?))
}

/// Parses a b-file. Blank lines and lines starting with `#` are skipped.
/// An empty file yields an empty sequence with offset 1.
pub fn read_bfile<R: BufRead>(sequence_id: impl Into<String>, input: R) -> Result<SequenceFile> {
    let mut offset = None;
    let mut values = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: lineno, message };
        let mut parts = text.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(format!("expected `<index> <value>`, got {text:?}")));
        };
        let idx: i64 = idx.parse().map_err(|_| parse_err(format!("bad index {idx:?}")))?;
        if !val.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(format!("bad value {val:?}")));
        }
        let val: BigUint = val.parse().map_err(|_| parse_err(format!("bad value {val:?}")))?;
        let expected = *offset.get_or_insert(idx) + values.len() as i64;
        if idx != expected {
            return Err(Error::Validation(format!(
                "line {lineno}: index {idx} follows {}, expected {expected}",
                expected - 1
            )));
        }
        values.push(val);
    }
    Ok(SequenceFile::new(sequence_id, offset.unwrap_or(1), values))
}

pub fn read_bfile_path(sequence_id: impl Into<String>, path: impl AsRef<Path>) -> Result<SequenceFile> {
    read_bfile(sequence_id, BufReader::new(File::open(path)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Every overlapping index agrees.
    Match { first: i64, last: i64 },
    Divergence { index: i64, computed: BigUint, reference: BigUint },
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        matches!(self, Comparison::Match { .. })
    }
}

/// Compares two sequences over their common index range.
pub fn compare_sequences(computed: &SequenceFile, reference: &SequenceFile) -> Result<Comparison> {
    let (Some(c_last), Some(r_last)) = (computed.last_index(), reference.last_index()) else {
        return invalid("cannot compare an empty sequence");
    };
    let first = computed.offset().max(reference.offset());
    let last = c_last.min(r_last);
    if first > last {
        return invalid(format!(
            "index ranges [{}, {c_last}] and [{}, {r_last}] do not overlap",
            computed.offset(),
            reference.offset()
        ));
    }
    for index in first..=last {
        let (c, r) = (computed.get(index).unwrap(), reference.get(index).unwrap());
        if c != r {
            return Ok(Comparison::Divergence {
                index,
                computed: c.clone(),
                reference: r.clone(),
            });
        }
    }
    Ok(Comparison::Match { first, last })
}

/// Writes the tree as a DOT digraph: nodes in breadth-first order labeled
/// by value, then edges labeled by how the child was produced.
pub fn export_dot<W: Write>(tree: &GenTree, mut out: W) -> Result<()> {
    let name = match tree.kind {
        TreeKind::Murthy => "murthy",
        TreeKind::ExtendedFermat => "extended_fermat",
    };
    writeln!(out, "digraph {name} {{")?;
    for (i, node) in tree.nodes().iter().enumerate() {
        let digits = node.value.to_string();
        let label = if digits.len() > DOT_GIANT_DIGITS {
            node.form.to_string()
        } else {
            digits
        };
        writeln!(out, "  n{i} [label=\"{label}\"];")?;
    }
    for (i, node) in tree.nodes().iter().enumerate() {
        if let (Some(p), Some(edge)) = (node.parent, node.edge) {
            writeln!(out, "  n{p} -> n{i} [label=\"{edge}\"];")?;
        }
    }
    writeln!(out, "}}")?;
    out.flush()?;
    Ok(())
}
