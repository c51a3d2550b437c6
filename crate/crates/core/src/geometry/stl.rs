//! STL read/write. Binary output; input auto-detects ASCII vs binary.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::Point3;

use super::SurfaceMesh;
use crate::error::{Error, Result};

/// Writes a binary STL. Face normals are recomputed from winding.
pub fn write_stl_binary<W: Write>(mesh: &SurfaceMesh, mut out: W) -> Result<()> {
    let mut header = [0u8; 80];
    let tag = b"tacsim binary stl";
    header[..tag.len()].copy_from_slice(tag);
    out.write_all(&header)?;
    out.write_all(&(mesh.triangles.len() as u32).to_le_bytes())?;
    for t in 0..mesh.triangles.len() {
        let n = mesh.face_normal(t);
        for v in [n.x, n.y, n.z] {
            out.write_all(&(v as f32).to_le_bytes())?;
        }
        for p in mesh.triangle_vertices(t) {
            for v in [p.x, p.y, p.z] {
                out.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        out.write_all(&[0u8; 2])?;
    }
    Ok(())
}

/// Reads STL (binary or ASCII), welding identical vertex positions.
pub fn read_stl<R: Read>(mut input: R) -> Result<SurfaceMesh> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if looks_ascii(&bytes) {
        read_ascii(&bytes)
    } else {
        read_binary(&bytes)
    }
}

fn looks_ascii(bytes: &[u8]) -> bool {
    let head = &bytes[..bytes.len().min(512)];
    let Ok(text) = std::str::from_utf8(head) else {
        return false;
    };
    let trimmed = text.trim_start();
    trimmed.starts_with("solid") && text.contains("facet")
}

struct Welder {
    map: HashMap<[u64; 3], usize>,
    vertices: Vec<Point3<f64>>,
}

impl Welder {
    fn new() -> Self {
        Self {
            map: HashMap::new(),
            vertices: Vec::new(),
        }
    }

    fn add(&mut self, p: Point3<f64>) -> usize {
        let key = [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()];
        *self.map.entry(key).or_insert_with(|| {
            self.vertices.push(p);
            self.vertices.len() - 1
        })
    }
}

fn read_binary(bytes: &[u8]) -> Result<SurfaceMesh> {
    if bytes.len() < 84 {
        return Err(Error::Format("binary STL shorter than its header".into()));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let expected = 84 + count * 50;
    if bytes.len() < expected {
        return Err(Error::Format(format!(
            "binary STL truncated: {} bytes for {count} triangles",
            bytes.len()
        )));
    }
    let mut welder = Welder::new();
    let mut triangles = Vec::with_capacity(count);
    for t in 0..count {
        let base = 84 + t * 50 + 12; // skip facet normal
        let mut idx = [0usize; 3];
        for (k, slot) in idx.iter_mut().enumerate() {
            let off = base + k * 12;
            let read = |o: usize| {
                f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as f64
            };
            *slot = welder.add(Point3::new(read(off), read(off + 4), read(off + 8)));
        }
        if idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2] {
            triangles.push(idx);
        }
    }
    SurfaceMesh::new(welder.vertices, triangles)
}

fn read_ascii(bytes: &[u8]) -> Result<SurfaceMesh> {
    let reader = BufReader::new(bytes);
    let mut welder = Welder::new();
    let mut triangles = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("vertex") => {
                let mut coord = [0.0f64; 3];
                for slot in &mut coord {
                    *slot = tokens
                        .next()
                        .ok_or_else(|| Error::Format("vertex line missing coordinate".into()))?
                        .parse()
                        .map_err(|e| Error::Format(format!("bad vertex coordinate: {e}")))?;
                }
                current.push(welder.add(Point3::new(coord[0], coord[1], coord[2])));
            }
            Some("endfacet") => {
                if current.len() != 3 {
                    return Err(Error::Format(format!(
                        "facet with {} vertices (expected 3)",
                        current.len()
                    )));
                }
                let idx = [current[0], current[1], current[2]];
                if idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2] {
                    triangles.push(idx);
                }
                current.clear();
            }
            _ => {}
        }
    }
    SurfaceMesh::new(welder.vertices, triangles)
}
