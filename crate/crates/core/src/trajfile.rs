//! On-disk trajectory format: one binary file per trajectory plus a text
//! manifest for the ensemble.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//!      0     8  magic  b"RHEOTRAJ"
//!      8     4  format version (u32), currently 1
//!     12     8  time step dt (f64, seconds)
//!     20     8  samples per channel n_steps (u64)
//!     28     4  medium tag (u32, see MEDIUM_TAGS)
//!     32  8·n   velocity samples (f64, m/s)
//! 32+8·n  8·n   position samples (f64, m)
//! ```
//!
//! The format stores raw samples only; physical parameters, seed, and
//! digests live in the sidecar manifest, so a trajectory file is
//! meaningful only next to its manifest. Readers must reject wrong magic,
//! unknown versions, unknown tags, and length mismatches rather than
//! guess.

use std::fs;
use std::io::{self, Write as IoWrite};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::simkit::Ensemble;

/// File magic, first eight bytes of every trajectory file.
pub const TRAJ_MAGIC: [u8; 8] = *b"RHEOTRAJ";

/// Current format version.
pub const TRAJ_VERSION: u32 = 1;

/// Medium tags in file headers, index = tag code.
pub const MEDIUM_TAGS: [&str; 6] = [
    "viscous",
    "trap",
    "maxwell",
    "jeffreys",
    "subdiffusive",
    "hydrodynamic",
];

/// Tag code of a medium name, if it is one of the six supported media.
pub fn medium_tag_code(name: &str) -> Option<u32> {
    MEDIUM_TAGS
        .iter()
        .position(|t| *t == name)
        .map(|i| i as u32)
}

/// One trajectory as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub medium: &'static str,
    pub velocity: Vec<f64>,
    pub position: Vec<f64>,
}

/// Serialize one trajectory to the binary layout.
pub fn encode_trajectory(
    dt: f64,
    medium_tag: u32,
    velocity: &[f64],
    position: &[f64],
) -> io::Result<Vec<u8>> {
    if velocity.len() != position.len() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!(
                "velocity has {} samples but position has {}",
                velocity.len(),
                position.len()
            ),
        ));
    }
    if medium_tag as usize >= MEDIUM_TAGS.len() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("medium tag {medium_tag} is not defined"),
        ));
    }
    let n = velocity.len();
    let mut buf = Vec::with_capacity(32 + 16 * n);
    buf.extend_from_slice(&TRAJ_MAGIC);
    buf.extend_from_slice(&TRAJ_VERSION.to_le_bytes());
    buf.extend_from_slice(&dt.to_le_bytes());
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    buf.extend_from_slice(&medium_tag.to_le_bytes());
    for v in velocity {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for r in position {
        buf.extend_from_slice(&r.to_le_bytes());
    }
    Ok(buf)
}

fn bad_data(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

/// Parse the binary layout back into a trajectory.
pub fn decode_trajectory(bytes: &[u8]) -> io::Result<Trajectory> {
    if bytes.len() < 32 {
        return Err(bad_data(format!(
            "trajectory file holds {} bytes, header alone needs 32",
            bytes.len()
        )));
    }
    if bytes[0..8] != TRAJ_MAGIC {
        return Err(bad_data("trajectory file magic mismatch".to_string()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != TRAJ_VERSION {
        return Err(bad_data(format!(
            "trajectory format version {version} is not supported (expected {TRAJ_VERSION})"
        )));
    }
    let dt = f64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let n = u64::from_le_bytes(bytes[20..28].try_into().unwrap()) as usize;
    let tag = u32::from_le_bytes(bytes[28..32].try_into().unwrap());
    let medium = MEDIUM_TAGS
        .get(tag as usize)
        .copied()
        .ok_or_else(|| bad_data(format!("medium tag {tag} is not defined")))?;
    let want = 32 + 16 * n;
    if bytes.len() != want {
        return Err(bad_data(format!(
            "trajectory file holds {} bytes, header promises {want}",
            bytes.len()
        )));
    }
    let mut velocity = Vec::with_capacity(n);
    let mut position = Vec::with_capacity(n);
    for i in 0..n {
        let at = 32 + 8 * i;
        velocity.push(f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap()));
    }
    for i in 0..n {
        let at = 32 + 8 * (n + i);
        position.push(f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap()));
    }
    Ok(Trajectory {
        dt,
        medium,
        velocity,
        position,
    })
}

/// Hex SHA-256 of a byte string, as used in manifests.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Write every trajectory of an ensemble into `dir` as
/// `traj_NNNN.bin`, returning `(file name, sha256)` pairs in trajectory
/// order for the manifest.
pub fn write_ensemble(dir: &Path, ens: &Ensemble) -> io::Result<Vec<(String, String)>> {
    let tag = medium_tag_code(ens.medium.medium.name()).ok_or_else(|| {
        io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("medium `{}` has no tag", ens.medium.medium.name()),
        )
    })?;
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(ens.n_traj());
    for (idx, (vel, pos)) in ens
        .velocities
        .iter()
        .zip(ens.positions.iter())
        .enumerate()
    {
        let name = format!("traj_{idx:04}.bin");
        let bytes = encode_trajectory(ens.dt, tag, vel, pos)?;
        let digest = sha256_hex(&bytes);
        let mut file = fs::File::create(dir.join(&name))?;
        file.write_all(&bytes)?;
        entries.push((name, digest));
    }
    Ok(entries)
}

/// Read one trajectory file.
pub fn read_trajectory(path: &Path) -> io::Result<Trajectory> {
    decode_trajectory(&fs::read(path)?)
}
