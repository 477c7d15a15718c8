//! Image, orbit and tree file formats.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use carpet_core::family::Orbit;
use carpet_core::render::ImageBuffer;
use carpet_core::trees::WeightedDynamicalTree;
use carpet_core::SpherePoint;
use serde::{Deserialize, Serialize};

/// Binary PPM: `P6\n<w> <h>\n255\n` then row-major RGB bytes.
pub fn encode_ppm(img: &ImageBuffer) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.rgb);
    out
}

/// 8-bit RGB PNG with default compression.
pub fn encode_png(img: &ImageBuffer) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width as u32, img.height as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(io::Error::other)?;
        w.write_image_data(&img.rgb).map_err(io::Error::other)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// `.png` selects PNG; anything else is PPM.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Ppm,
        }
    }
}

pub fn write_image(img: &ImageBuffer, path: &Path) -> io::Result<()> {
    let bytes = match ImageFormat::from_path(path) {
        ImageFormat::Ppm => encode_ppm(img),
        ImageFormat::Png => encode_png(img)?,
    };
    std::fs::write(path, bytes)
}

/// `step,re,im,chart` rows; points beyond the chart switch are written as
/// `w = 1/z` with chart `inverted`.
pub fn write_orbit_csv<W: Write>(orbit: &Orbit, mut out: W) -> io::Result<()> {
    writeln!(out, "step,re,im,chart")?;
    for (k, p) in orbit.points.iter().enumerate() {
        let (u, chart) = match *p {
            SpherePoint::Finite(z) => (z, "standard"),
            SpherePoint::Inverted(w) => (w, "inverted"),
        };
        writeln!(out, "{k},{:?},{:?},{chart}", u.re, u.im)?;
    }
    Ok(())
}

pub fn save_orbit_csv(orbit: &Orbit, path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_orbit_csv(orbit, &mut w)?;
    w.flush()
}

/// `{"edges": N, "images": [[...]], "weights": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub edges: usize,
    pub images: Vec<Vec<usize>>,
    pub weights: Vec<u32>,
}

impl TreeFile {
    pub fn from_tree(tree: &WeightedDynamicalTree) -> Self {
        TreeFile { edges: tree.edge_count(), images: tree.images().to_vec(), weights: tree.weights().to_vec() }
    }

    pub fn into_tree(self) -> anyhow::Result<WeightedDynamicalTree> {
        if self.images.len() != self.edges {
            anyhow::bail!("tree declares {} edges but lists {} images", self.edges, self.images.len());
        }
        Ok(WeightedDynamicalTree::new(self.images, self.weights)?)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree fields are plain values")
    }
}
