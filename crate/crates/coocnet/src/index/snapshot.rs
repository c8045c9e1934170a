//! Binary index snapshots.
//!
//! Layout: an 8-byte magic (`COOCIDX` plus a version byte), a payload, and
//! a trailing SHA-256 digest over everything before it. The payload stores
//! the tokenizer configuration, document metadata, and per-term posting
//! lists with delta-encoded document ordinals and positions (unsigned
//! LEB128 varints). Strings are u32-length-prefixed UTF-8; fixed integers
//! are little-endian.
//!
//! Embedding the tokenizer configuration makes a snapshot self-contained:
//! loading one yields an index that tokenizes exactly like the builder did.

use super::{DocId, DocMeta, InvertedIndex, Posting};
use crate::corpus::{Field, TokenizerConfig};
use sha2::{Digest, Sha256};
use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use thiserror::Error;

const MAGIC: &[u8; 7] = b"COOCIDX";
const VERSION: u8 = b'1';
const DIGEST_LEN: usize = 32;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not an index snapshot (bad magic)")]
    BadMagic,
    #[error("unsupported snapshot version {found:?}")]
    VersionMismatch { found: char },
    #[error("checksum mismatch: snapshot is truncated or corrupted")]
    ChecksumMismatch,
    #[error("malformed snapshot: {0}")]
    Corrupt(String),
}

fn io_err(path: &Path, source: std::io::Error) -> SnapshotError {
    SnapshotError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Serialize the index to `path`, atomically enough for our purposes: the
/// whole file is built in memory and written in one call.
pub fn save_snapshot(index: &InvertedIndex, path: &Path) -> Result<(), SnapshotError> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    write_payload(index, &mut buf);
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    std::fs::write(path, &buf).map_err(|e| io_err(path, e))
}

/// Read an index back from `path`, verifying magic, version and checksum
/// before parsing.
pub fn load_snapshot(path: &Path) -> Result<InvertedIndex, SnapshotError> {
    let buf = std::fs::read(path).map_err(|e| io_err(path, e))?;
    if buf.len() < 8 || &buf[..7] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    if buf[7] != VERSION {
        return Err(SnapshotError::VersionMismatch {
            found: buf[7] as char,
        });
    }
    if buf.len() < 8 + DIGEST_LEN {
        return Err(SnapshotError::ChecksumMismatch);
    }
    let (body, stored) = buf.split_at(buf.len() - DIGEST_LEN);
    let digest = Sha256::digest(body);
    if digest.as_slice() != stored {
        return Err(SnapshotError::ChecksumMismatch);
    }
    parse_payload(&body[8..])
}

fn write_payload(index: &InvertedIndex, buf: &mut Vec<u8>) {
    let cfg = &index.cfg;
    buf.push(cfg.lowercase as u8);
    buf.push(cfg.fields_used.len() as u8);
    for f in &cfg.fields_used {
        buf.push(field_code(*f));
    }
    write_u32(buf, cfg.stopwords.len() as u32);
    for s in &cfg.stopwords {
        write_str(buf, s);
    }
    write_u32(buf, cfg.user_dictionary.len() as u32);
    for s in &cfg.user_dictionary {
        write_str(buf, s);
    }

    write_u32(buf, index.docs.len() as u32);
    for d in &index.docs {
        write_str(buf, &d.doc_id);
        write_str(buf, &d.discipline);
        write_str(buf, &d.category);
    }

    write_u32(buf, index.terms.len() as u32);
    for (term, pl) in index.terms.iter().zip(&index.postings) {
        write_str(buf, term);
        write_varint(buf, pl.len() as u64);
        let mut prev_doc = 0u32;
        for (i, p) in pl.iter().enumerate() {
            let delta = if i == 0 { p.doc.0 } else { p.doc.0 - prev_doc };
            write_varint(buf, delta as u64);
            prev_doc = p.doc.0;
            write_varint(buf, p.positions.len() as u64);
            let mut prev_pos = 0u32;
            for (j, &pos) in p.positions.iter().enumerate() {
                let pdelta = if j == 0 { pos } else { pos - prev_pos };
                write_varint(buf, pdelta as u64);
                prev_pos = pos;
            }
        }
    }
}

fn parse_payload(payload: &[u8]) -> Result<InvertedIndex, SnapshotError> {
    let mut r = Reader { buf: payload, pos: 0 };

    let lowercase = match r.u8()? {
        0 => false,
        1 => true,
        other => return Err(corrupt(format!("bad lowercase flag {other}"))),
    };
    let n_fields = r.u8()? as usize;
    let mut fields_used = Vec::with_capacity(n_fields);
    for _ in 0..n_fields {
        fields_used.push(field_from_code(r.u8()?)?);
    }
    let mut stopwords = BTreeSet::new();
    for _ in 0..r.u32()? {
        stopwords.insert(r.str()?);
    }
    let mut user_dictionary = BTreeSet::new();
    for _ in 0..r.u32()? {
        user_dictionary.insert(r.str()?);
    }
    let cfg = TokenizerConfig {
        stopwords,
        user_dictionary,
        fields_used,
        lowercase,
    };

    let n_docs = r.u32()?;
    let mut docs = Vec::with_capacity(n_docs as usize);
    let mut doc_lookup = HashMap::with_capacity(n_docs as usize);
    for ord in 0..n_docs {
        let doc_id = r.str()?;
        let discipline = r.str()?;
        let category = r.str()?;
        if doc_lookup.insert(doc_id.clone(), DocId(ord)).is_some() {
            return Err(corrupt(format!("duplicate doc_id {doc_id:?}")));
        }
        docs.push(DocMeta {
            doc_id,
            discipline,
            category,
            distinct_terms: 0,
        });
    }

    let n_terms = r.u32()?;
    let mut terms: Vec<String> = Vec::with_capacity(n_terms as usize);
    let mut postings: Vec<Vec<Posting>> = Vec::with_capacity(n_terms as usize);
    for _ in 0..n_terms {
        let term = r.str()?;
        if let Some(last) = terms.last() {
            if *last >= term {
                return Err(corrupt(format!("terms out of order at {term:?}")));
            }
        }
        let n_postings = r.varint()? as usize;
        let mut pl = Vec::with_capacity(n_postings);
        let mut doc = 0u32;
        for i in 0..n_postings {
            let delta = r.varint()?;
            if i > 0 && delta == 0 {
                return Err(corrupt("zero doc delta".into()));
            }
            doc = doc
                .checked_add(u32::try_from(delta).map_err(|_| corrupt("doc delta overflow".into()))?)
                .ok_or_else(|| corrupt("doc ordinal overflow".into()))?;
            if doc >= n_docs {
                return Err(corrupt(format!("posting references doc {doc} of {n_docs}")));
            }
            let n_positions = r.varint()? as usize;
            if n_positions == 0 {
                return Err(corrupt("posting with no positions".into()));
            }
            let mut positions = Vec::with_capacity(n_positions);
            let mut pos = 0u32;
            for j in 0..n_positions {
                let pdelta = r.varint()?;
                if j > 0 && pdelta == 0 {
                    return Err(corrupt("zero position delta".into()));
                }
                pos = pos
                    .checked_add(
                        u32::try_from(pdelta).map_err(|_| corrupt("position delta overflow".into()))?,
                    )
                    .ok_or_else(|| corrupt("position overflow".into()))?;
                positions.push(pos);
            }
            docs[doc as usize].distinct_terms += 1;
            pl.push(Posting {
                doc: DocId(doc),
                tf: n_positions as u32,
                positions,
            });
        }
        terms.push(term);
        postings.push(pl);
    }

    if r.pos != payload.len() {
        return Err(corrupt("trailing bytes after payload".into()));
    }
    Ok(InvertedIndex::assemble(docs, doc_lookup, terms, postings, cfg))
}

fn field_code(f: Field) -> u8 {
    match f {
        Field::Title => 0,
        Field::Abstract => 1,
        Field::Keywords => 2,
    }
}

fn field_from_code(code: u8) -> Result<Field, SnapshotError> {
    match code {
        0 => Ok(Field::Title),
        1 => Ok(Field::Abstract),
        2 => Ok(Field::Keywords),
        other => Err(corrupt(format!("bad field code {other}"))),
    }
}

fn corrupt(msg: String) -> SnapshotError {
    SnapshotError::Corrupt(msg)
}

fn write_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn write_str(buf: &mut Vec<u8>, s: &str) {
    write_u32(buf, s.len() as u32);
    buf.extend_from_slice(s.as_bytes());
}

fn write_varint(buf: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            buf.push(byte);
            break;
        }
        buf.push(byte | 0x80);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], SnapshotError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| corrupt("unexpected end of payload".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, SnapshotError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, SnapshotError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn str(&mut self) -> Result<String, SnapshotError> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| corrupt("invalid utf-8 in string".into()))
    }

    fn varint(&mut self) -> Result<u64, SnapshotError> {
        let mut out = 0u64;
        let mut shift = 0u32;
        loop {
            let byte = self.u8()?;
            if shift >= 64 {
                return Err(corrupt("varint overflow".into()));
            }
            out |= u64::from(byte & 0x7f) << shift;
            if byte & 0x80 == 0 {
                return Ok(out);
            }
            shift += 7;
        }
    }
}
