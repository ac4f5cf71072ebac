//! On-disk index format.
//!
//! All integers except the version are unsigned LEB128 varints; strings are a
//! varint byte length followed by UTF-8 bytes.
//!
//! ```text
//! magic        8 bytes  "TETUNIDX"
//! version      u16 LE
//! scheme       u8       1=T 2=T+C 3=L+C 4=T+L+C
//! analyzer id  string
//! doc count    varint
//!   id         string   } per document, in internal order
//!   length     varint   }
//! term count   varint
//!   term       string   } per term, in byte order
//!   df         varint   }
//!   postings   df × (doc delta varint, tf varint); the first delta is the doc number
//! end marker   4 bytes  "IDX."
//! ```
//!
//! The encoding depends only on index contents, so identical indexes
//! serialize to identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{FieldScheme, IndexError, InvertedIndex, Posting};

pub const MAGIC: &[u8; 8] = b"TETUNIDX";
pub const FORMAT_VERSION: u16 = 1;
const END_MARKER: &[u8; 4] = b"IDX.";

pub fn save_index(index: &InvertedIndex, path: impl AsRef<Path>) -> Result<(), IndexError> {
    let path = path.as_ref();
    let bytes = encode(index);
    let io_err = |source| IndexError::Io { path: path.display().to_string(), source };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(&bytes).map_err(io_err)?;
    file.sync_all().map_err(io_err)
}

pub fn load_index(path: impl AsRef<Path>) -> Result<InvertedIndex, IndexError> {
    let path = path.as_ref();
    let bytes = fs::read(path)
        .map_err(|source| IndexError::Io { path: path.display().to_string(), source })?;
    decode(&bytes)
}

pub fn encode(index: &InvertedIndex) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(index.scheme.code());
    put_str(&mut out, &index.analyzer_id);

    put_varint(&mut out, index.doc_ids.len() as u64);
    for (id, len) in index.doc_ids.iter().zip(&index.doc_lengths) {
        put_str(&mut out, id);
        put_varint(&mut out, u64::from(*len));
    }

    put_varint(&mut out, index.postings.len() as u64);
    for (term, list) in &index.postings {
        put_str(&mut out, term);
        put_varint(&mut out, list.len() as u64);
        let mut prev = 0u32;
        for (i, p) in list.iter().enumerate() {
            let delta = if i == 0 { p.doc } else { p.doc - prev };
            put_varint(&mut out, u64::from(delta));
            put_varint(&mut out, u64::from(p.tf));
            prev = p.doc;
        }
    }
    out.extend_from_slice(END_MARKER);
    out
}

pub fn decode(bytes: &[u8]) -> Result<InvertedIndex, IndexError> {
    let mut r = Reader { bytes, pos: 0 };

    let magic = r.take(MAGIC.len(), "magic")?;
    if magic != MAGIC {
        return Err(r.corrupt_at(0, "not an index file (bad magic)"));
    }
    let version = u16::from_le_bytes(r.take(2, "version")?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(IndexError::Version { found: version, supported: FORMAT_VERSION });
    }
    let code_at = r.pos;
    let code = r.take(1, "scheme")?[0];
    let scheme = FieldScheme::from_code(code)
        .ok_or_else(|| r.corrupt_at(code_at, &format!("unknown scheme code {code}")))?;
    let analyzer_id = r.string("analyzer id")?;

    let doc_count = r.count("document count")?;
    let mut doc_ids = Vec::with_capacity(doc_count);
    let mut doc_lengths = Vec::with_capacity(doc_count);
    for _ in 0..doc_count {
        doc_ids.push(r.string("document id")?);
        doc_lengths.push(r.u32("document length")?);
    }

    let term_count = r.count("term count")?;
    let mut postings = BTreeMap::new();
    let mut prev_term: Option<String> = None;
    for _ in 0..term_count {
        let term_at = r.pos;
        let term = r.string("term")?;
        if prev_term.as_ref().is_some_and(|p| *p >= term) {
            return Err(r.corrupt_at(term_at, "terms out of order"));
        }
        let df = r.count("document frequency")?;
        let mut list = Vec::with_capacity(df);
        let mut doc = 0u32;
        for i in 0..df {
            let at = r.pos;
            let delta = r.u32("posting delta")?;
            if i > 0 && delta == 0 {
                return Err(r.corrupt_at(at, "duplicate document in postings"));
            }
            doc = doc
                .checked_add(delta)
                .filter(|d| (*d as usize) < doc_count)
                .ok_or_else(|| r.corrupt_at(at, "posting points past the document table"))?;
            let tf = r.u32("term frequency")?;
            list.push(Posting { doc, tf });
        }
        prev_term = Some(term.clone());
        postings.insert(term, list);
    }

    let end_at = r.pos;
    if r.take(END_MARKER.len(), "end marker")? != END_MARKER {
        return Err(r.corrupt_at(end_at, "missing end marker"));
    }
    if r.pos != bytes.len() {
        return Err(r.corrupt_at(r.pos, "trailing bytes after end marker"));
    }

    let index = InvertedIndex::from_parts(scheme, analyzer_id, doc_ids, doc_lengths, postings);
    index.check_invariants().map_err(|reason| IndexError::Corrupt { offset: end_at as u64, reason })?;
    Ok(index)
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_varint(out, s.len() as u64);
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn corrupt_at(&self, offset: usize, reason: &str) -> IndexError {
        IndexError::Corrupt { offset: offset as u64, reason: reason.to_string() }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], IndexError> {
        let end = self.pos.checked_add(n).filter(|e| *e <= self.bytes.len());
        match end {
            Some(end) => {
                let slice = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(slice)
            }
            None => Err(self.corrupt_at(self.pos, &format!("unexpected end of file reading {what}"))),
        }
    }

    fn varint(&mut self, what: &str) -> Result<u64, IndexError> {
        let start = self.pos;
        let mut value = 0u64;
        for shift in (0..64).step_by(7) {
            let byte = self.take(1, what)?[0];
            value |= u64::from(byte & 0x7f) << shift;
            if byte & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(self.corrupt_at(start, &format!("overlong varint in {what}")))
    }

    fn u32(&mut self, what: &str) -> Result<u32, IndexError> {
        let at = self.pos;
        let v = self.varint(what)?;
        u32::try_from(v).map_err(|_| self.corrupt_at(at, &format!("{what} out of range")))
    }

    /// A count, bounded by the remaining input so corrupt lengths cannot
    /// trigger huge allocations.
    fn count(&mut self, what: &str) -> Result<usize, IndexError> {
        let at = self.pos;
        let v = self.varint(what)?;
        if v > (self.bytes.len() - self.pos) as u64 {
            return Err(self.corrupt_at(at, &format!("{what} exceeds file size")));
        }
        Ok(v as usize)
    }

    fn string(&mut self, what: &str) -> Result<String, IndexError> {
        let len = self.count(what)?;
        let at = self.pos;
        let raw = self.take(len, what)?;
        String::from_utf8(raw.to_vec()).map_err(|_| self.corrupt_at(at, &format!("{what} is not UTF-8")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{Lexicons, Preset};
    use crate::index::{build_index, Document};

    fn toy_index() -> InvertedIndex {
        let docs = vec![Document::new("d1", "uma uma", "", ""), Document::new("d2", "uma rai", "", "")];
        build_index(&docs, FieldScheme::Title, &Preset::Default.config(), &Lexicons::bundled()).unwrap()
    }

    #[test]
    fn round_trip() {
        let idx = toy_index();
        let back = decode(&encode(&idx)).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.avg_doc_length(), idx.avg_doc_length());
        assert_eq!(back.doc_number("d2"), Some(1));
    }

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.idx");
        let idx = toy_index();
        save_index(&idx, &path).unwrap();
        assert_eq!(load_index(&path).unwrap(), idx);
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let bytes = encode(&toy_index());
        for cut in [0, 5, 10, bytes.len() / 2, bytes.len() - 1] {
            match decode(&bytes[..cut]) {
                Err(IndexError::Corrupt { offset, .. }) => assert!(offset as usize <= cut),
                other => panic!("cut at {cut}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn future_version_is_rejected() {
        let mut bytes = encode(&toy_index());
        bytes[8..10].copy_from_slice(&(FORMAT_VERSION + 1).to_le_bytes());
        assert!(matches!(
            decode(&bytes),
            Err(IndexError::Version { found, supported }) if found == FORMAT_VERSION + 1 && supported == FORMAT_VERSION
        ));
    }

    #[test]
    fn bad_magic_and_trailing_bytes() {
        let mut bytes = encode(&toy_index());
        bytes.push(0);
        assert!(matches!(decode(&bytes), Err(IndexError::Corrupt { .. })));
        bytes[0] = b'X';
        assert!(matches!(decode(&bytes), Err(IndexError::Corrupt { offset: 0, .. })));
    }

    #[test]
    fn inconsistent_lengths_are_corrupt() {
        let mut idx = toy_index();
        idx.doc_lengths[0] = 7;
        assert!(matches!(decode(&encode(&idx)), Err(IndexError::Corrupt { .. })));
    }

    #[test]
    fn varint_edges() {
        for v in [0u64, 1, 127, 128, 300, u32::MAX as u64, u64::MAX] {
            let mut out = Vec::new();
            put_varint(&mut out, v);
            let mut r = Reader { bytes: &out, pos: 0 };
            assert_eq!(r.varint("v").unwrap(), v);
            assert_eq!(r.pos, out.len());
        }
    }
}
