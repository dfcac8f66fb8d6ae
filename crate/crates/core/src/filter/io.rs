//! PNG/JPEG reading and writing for [`RgbImage`] and frame directories.

use std::path::{Path, PathBuf};

use ::image::{DynamicImage, ImageReader, Rgb, RgbImage as Rgb8};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::raster::{FrameSequence, RgbImage};

const EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

fn image_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Image {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub(crate) fn decode(path: &Path) -> Result<DynamicImage> {
    ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| image_err(path, e))
}

/// Converts a decoded image to `[0, 1]` RGB. 16-bit sources keep their depth.
pub fn from_dynamic<T: Scalar>(img: &DynamicImage) -> RgbImage<T> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data: Vec<[T; 3]> = if img.color().bytes_per_pixel() / img.color().channel_count() > 1 {
        img.to_rgb16()
            .pixels()
            .map(|p| p.0.map(|c| T::of(c as f64 / 65535.0)))
            .collect()
    } else {
        img.to_rgb8()
            .pixels()
            .map(|p| p.0.map(|c| T::of(c as f64 / 255.0)))
            .collect()
    };
    RgbImage::new(h, w, data).expect("decoded pixels are in range")
}

pub fn read_image<T: Scalar>(path: impl AsRef<Path>) -> Result<RgbImage<T>> {
    let path = path.as_ref();
    Ok(from_dynamic(&decode(path)?))
}

/// Writes an 8-bit RGB image; the format follows the extension.
pub fn write_image<T: Scalar>(img: &RgbImage<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = Rgb8::new(img.width() as u32, img.height() as u32);
    for (i, px) in img.pixels().iter().enumerate() {
        let (y, x) = (i / img.width(), i % img.width());
        let q = px.map(|c| (c.to_f64_lossy().clamp(0.0, 1.0) * 255.0).round() as u8);
        out.put_pixel(x as u32, y as u32, Rgb(q));
    }
    out.save(path).map_err(|e| image_err(path, e))
}

pub fn is_image_file(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Last run of ASCII digits in the file stem.
fn frame_index(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let end = stem.rfind(|c: char| c.is_ascii_digit())? + 1;
    let start = stem[..end].rfind(|c: char| !c.is_ascii_digit()).map_or(0, |i| i + 1);
    stem[start..end].parse().ok()
}

/// Image files in `dir`, ordered by the trailing number in their names.
pub fn list_frames(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let mut frames: Vec<(u64, PathBuf)> = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() || !is_image_file(&path) {
            continue;
        }
        let idx = frame_index(&path)
            .ok_or_else(|| Error::invalid(format!("{}: frame name has no number", path.display())))?;
        frames.push((idx, path));
    }
    if frames.is_empty() {
        return Err(Error::invalid(format!("{}: no image frames", dir.display())));
    }
    frames.sort();
    if let Some(w) = frames.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::invalid(format!(
            "{} and {} share frame number {}",
            w[0].1.display(),
            w[1].1.display(),
            w[0].0
        )));
    }
    Ok(frames.into_iter().map(|(_, p)| p).collect())
}

pub fn read_sequence<T: Scalar>(dir: impl AsRef<Path>, frame_rate: f64) -> Result<FrameSequence<T>> {
    let frames = list_frames(dir)?.iter().map(read_image).collect::<Result<Vec<_>>>()?;
    FrameSequence::new(frames, frame_rate)
}

/// Writes frames as `frame_00000.png`, ... into `dir`.
pub fn write_sequence<T: Scalar>(seq: &FrameSequence<T>, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    seq.frames()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let p = dir.join(format!("frame_{i:05}.png"));
            write_image(f, &p).map(|_| p)
        })
        .collect()
}
