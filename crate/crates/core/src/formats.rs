//! On-disk formats: flat key-value config files, the versioned angle text
//! format, CSV series, JSON payload wrappers, the run manifest, and the
//! binary eigen-decomposition cache. Layouts are documented in
//! `docs/formats.md`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ed::{EdBasis, ParityBlock, ParityBlocks};
use crate::error::{Error, Result};
use crate::model::{Boundary, CouplingSet};
use crate::mzm::MzmProfile;
use crate::topo::ZkSeries;
use crate::vqe::{AngleKind, AnsatzAngles};

pub const FORMAT_VERSION: u32 = 1;

/// FNV-1a 64-bit digest, hex encoded; used for manifest digests and cache keys.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

// ---------------------------------------------------------------- config ---

/// Flat `key = value` config; `#` starts a comment, blank lines ignored.
pub fn parse_config_str(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Format(format!("config line {}: expected 'key = value'", lineno + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn parse_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut text = String::new();
    std::fs::File::open(path)?.read_to_string(&mut text)?;
    parse_config_str(&text)
}

// ---------------------------------------------------------------- angles ---

/// Text format v1: header lines, then one `layer index kind value` line per
/// angle, where `index` is the bond for a/b/c and the site for theta.
pub fn write_angles<W: Write>(mut w: W, angles: &AnsatzAngles) -> Result<()> {
    writeln!(w, "# kitaev-qc angles v{FORMAT_VERSION}")?;
    writeln!(w, "n_sites = {}", angles.n_sites)?;
    writeln!(w, "layers = {}", angles.layers)?;
    for (i, v) in angles.values.iter().enumerate() {
        let (m, j, kind) = angles.label(i);
        let kind = match kind {
            AngleKind::A => "a",
            AngleKind::B => "b",
            AngleKind::C => "c",
            AngleKind::Theta => "theta",
        };
        writeln!(w, "{m} {j} {kind} {v:.17e}")?;
    }
    Ok(())
}

pub fn save_angles(path: &Path, angles: &AnsatzAngles) -> Result<()> {
    write_angles(BufWriter::new(std::fs::File::create(path)?), angles)
}

pub fn read_angles<R: Read>(r: R) -> Result<AnsatzAngles> {
    let mut lines = BufReader::new(r).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty angle file".into()))??;
    if !header.starts_with("# kitaev-qc angles v") {
        return Err(Error::Format("missing angle-file header".into()));
    }
    let version: u32 = header
        .trim_start_matches("# kitaev-qc angles v")
        .trim()
        .parse()
        .map_err(|_| Error::Format("bad angle-file version".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported angle-file version {version}"
        )));
    }
    let mut n_sites = None;
    let mut layers = None;
    let mut entries: Vec<(usize, usize, String, f64)> = Vec::new();
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            match k.trim() {
                "n_sites" => n_sites = Some(v.trim().parse().map_err(|_| Error::Format("bad n_sites".into()))?),
                "layers" => layers = Some(v.trim().parse().map_err(|_| Error::Format("bad layers".into()))?),
                other => return Err(Error::Format(format!("unknown header key '{other}'"))),
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Format(format!("bad angle line '{line}'")));
        }
        let m = parts[0].parse().map_err(|_| Error::Format("bad layer".into()))?;
        let j = parts[1].parse().map_err(|_| Error::Format("bad index".into()))?;
        let v = parts[3].parse().map_err(|_| Error::Format("bad value".into()))?;
        entries.push((m, j, parts[2].to_string(), v));
    }
    let n_sites = n_sites.ok_or_else(|| Error::Format("missing n_sites".into()))?;
    let layers = layers.ok_or_else(|| Error::Format("missing layers".into()))?;
    let mut angles = AnsatzAngles::zeros(n_sites, layers);
    if entries.len() != angles.values.len() {
        return Err(Error::Format(format!(
            "expected {} angle lines, found {}",
            angles.values.len(),
            entries.len()
        )));
    }
    let mut seen = vec![false; angles.values.len()];
    for (m, j, kind, v) in entries {
        let idx = match kind.as_str() {
            "a" => angles.bond_index(m, j, AngleKind::A),
            "b" => angles.bond_index(m, j, AngleKind::B),
            "c" => angles.bond_index(m, j, AngleKind::C),
            "theta" => angles.site_index(m, j),
            other => return Err(Error::Format(format!("unknown angle kind '{other}'"))),
        };
        if idx >= seen.len() || seen[idx] {
            return Err(Error::Format(format!("duplicate or out-of-range slot ({m}, {j}, {kind})")));
        }
        seen[idx] = true;
        angles.values[idx] = v;
    }
    Ok(angles)
}

pub fn load_angles(path: &Path) -> Result<AnsatzAngles> {
    read_angles(std::fs::File::open(path)?)
}

// ------------------------------------------------------------------- csv ---

pub fn write_zk_csv(path: &Path, zk: &ZkSeries) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# kitaev-qc zk v{FORMAT_VERSION}")?;
    writeln!(w, "k,re_zk,im_zk")?;
    for (k, z) in zk.momenta.iter().zip(&zk.values) {
        writeln!(w, "{k:.17e},{:.17e},{:.17e}", z.re, z.im)?;
    }
    Ok(())
}

pub fn write_profile_csv(path: &Path, p: &MzmProfile) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# kitaev-qc mzm-profile v{FORMAT_VERSION}")?;
    writeln!(w, "site,amplitude_s,amplitude_a")?;
    for j in 0..p.n_sites {
        writeln!(w, "{},{:.17e},{:.17e}", j + 1, p.amplitude_s[j], p.amplitude_a[j])?;
    }
    Ok(())
}

/// `(k, eps_k, delta_k, phi_k)` table for the TB layer.
pub fn write_tb_csv(path: &Path, cs: &CouplingSet, k_points: usize) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# kitaev-qc tb v{FORMAT_VERSION}")?;
    writeln!(w, "k,eps_k,delta_k,phi_k")?;
    for i in 0..=k_points {
        let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / k_points as f64;
        let (e, d) = crate::topo::tb_pseudo_vector(cs, k);
        writeln!(w, "{k:.17e},{e:.17e},{d:.17e},{:.17e}", d.atan2(e))?;
    }
    Ok(())
}

// ------------------------------------------------------------------ json ---

/// Versioned JSON envelope for structured outputs.
#[derive(Debug, Serialize, Deserialize)]
pub struct Payload<T> {
    pub format_version: u32,
    #[serde(flatten)]
    pub body: T,
}

pub fn write_json<T: Serialize>(path: &Path, body: &T) -> Result<()> {
    let wrapped = Payload { format_version: FORMAT_VERSION, body };
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &wrapped)
        .map_err(|e| Error::Format(format!("json write: {e}")))?;
    writeln!(w)?;
    Ok(())
}

/// Run provenance: resolved config, library version, wall clock, and digests
/// of every emitted file.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub library_version: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<ManifestEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub fnv1a64: String,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.outputs.push(ManifestEntry {
            path: path.display().to_string(),
            fnv1a64: fnv1a_hex(&bytes),
        });
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

// ----------------------------------------------------------- eigen cache ---

const EIGEN_MAGIC: &[u8; 8] = b"KQCEIG1\n";

/// Cache key: couplings, size, boundary, and basis, digested.
pub fn eigen_cache_key(cs: &CouplingSet, n_sites: usize, boundary: Boundary, basis: EdBasis) -> String {
    let mut bytes = Vec::with_capacity(128);
    for v in [cs.jx, cs.jy, cs.jz, cs.hz] {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    bytes.extend_from_slice(&(n_sites as u64).to_le_bytes());
    bytes.push(match boundary {
        Boundary::Open => 0,
        Boundary::Periodic => 1,
    });
    bytes.push(match basis {
        EdBasis::Spin => 0,
        EdBasis::Fermion => 1,
    });
    fnv1a_hex(&bytes)
}

fn write_block(w: &mut impl Write, b: &ParityBlock) -> Result<()> {
    w.write_all(&(b.dim() as u64).to_le_bytes())?;
    for &i in &b.indices {
        w.write_all(&(i as u64).to_le_bytes())?;
    }
    for &e in &b.energies {
        w.write_all(&e.to_le_bytes())?;
    }
    for &v in &b.vectors {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64s(r: &mut impl Read, n: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; n * 8];
    r.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

fn read_block(r: &mut impl Read) -> Result<ParityBlock> {
    let dim = read_u64(r)? as usize;
    let mut indices = Vec::with_capacity(dim);
    for _ in 0..dim {
        indices.push(read_u64(r)? as usize);
    }
    let energies = read_f64s(r, dim)?;
    let vectors = read_f64s(r, dim * dim)?;
    Ok(ParityBlock { indices, energies, vectors })
}

/// Binary layout v1 (all integers u64 LE, floats f64 LE): magic, key digest
/// (16 ASCII bytes), n_sites, basis tag, then both blocks as
/// dim, indices, energies, row-major eigenvector block.
pub fn save_eigen_cache(path: &Path, key: &str, blocks: &ParityBlocks) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(EIGEN_MAGIC)?;
    let kb = key.as_bytes();
    if kb.len() != 16 {
        return Err(Error::Format("cache key must be a 16-char digest".into()));
    }
    w.write_all(kb)?;
    w.write_all(&(blocks.n_sites as u64).to_le_bytes())?;
    w.write_all(&(matches!(blocks.basis, EdBasis::Fermion) as u64).to_le_bytes())?;
    write_block(&mut w, &blocks.even)?;
    write_block(&mut w, &blocks.odd)?;
    Ok(())
}

/// `Ok(None)` when the file exists but was written for a different key.
pub fn load_eigen_cache(path: &Path, key: &str) -> Result<Option<ParityBlocks>> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != EIGEN_MAGIC {
        return Err(Error::Format("not an eigen cache file".into()));
    }
    let mut kb = [0u8; 16];
    r.read_exact(&mut kb)?;
    if kb != key.as_bytes() {
        return Ok(None);
    }
    let n_sites = read_u64(&mut r)? as usize;
    let basis = if read_u64(&mut r)? == 1 { EdBasis::Fermion } else { EdBasis::Spin };
    let even = read_block(&mut r)?;
    let odd = read_block(&mut r)?;
    Ok(Some(ParityBlocks { n_sites, basis, even, odd }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ed::solve_parity_blocks;

    #[test]
    fn config_parse_and_errors() {
        let m = parse_config_str("jx = 1.0\n# comment\n n = 12 # inline\n\n").unwrap();
        assert_eq!(m["jx"], "1.0");
        assert_eq!(m["n"], "12");
        assert!(parse_config_str("not a pair").is_err());
    }

    #[test]
    fn angles_roundtrip() {
        let mut a = AnsatzAngles::zeros(8, 2);
        for (i, v) in a.values.iter_mut().enumerate() {
            *v = (i as f64) * 0.1 - 2.0;
        }
        let mut buf = Vec::new();
        write_angles(&mut buf, &a).unwrap();
        let b = read_angles(&buf[..]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn angles_reject_bad_input() {
        assert!(read_angles(&b"garbage"[..]).is_err());
        let text = "# kitaev-qc angles v1\nn_sites = 8\nlayers = 1\n1 1 a 0.5\n";
        assert!(read_angles(text.as_bytes()).is_err()); // wrong count
        let v2 = "# kitaev-qc angles v2\nn_sites = 8\nlayers = 1\n";
        assert!(read_angles(v2.as_bytes()).is_err()); // future version
    }

    #[test]
    fn eigen_cache_roundtrip() {
        let cs = CouplingSet::from_spin(1.0, 0.5, 0.2, 0.1);
        let blocks = solve_parity_blocks(&cs, 4, Boundary::Open, EdBasis::Spin).unwrap();
        let key = eigen_cache_key(&cs, 4, Boundary::Open, EdBasis::Spin);
        let dir = std::env::temp_dir().join("kqc-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("blocks.bin");
        save_eigen_cache(&path, &key, &blocks).unwrap();
        let loaded = load_eigen_cache(&path, &key).unwrap().unwrap();
        assert_eq!(loaded.even.energies, blocks.even.energies);
        assert_eq!(loaded.odd.vectors, blocks.odd.vectors);
        assert_eq!(loaded.even.indices, blocks.even.indices);
        // different key: miss, not error
        let other = eigen_cache_key(&cs, 4, Boundary::Periodic, EdBasis::Spin);
        assert!(load_eigen_cache(&path, &other).unwrap().is_none());
    }

    #[test]
    fn digest_stable() {
        assert_eq!(fnv1a_hex(b""), "cbf29ce484222325");
        assert_eq!(fnv1a_hex(b"a"), fnv1a_hex(b"a"));
        assert_ne!(fnv1a_hex(b"a"), fnv1a_hex(b"b"));
    }
}
