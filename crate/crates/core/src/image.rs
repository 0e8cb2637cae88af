//! Rasters, PGM/PNG file IO and edge padding.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("empty image {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Panics if either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        Self { width, height, data: vec![value; width * height] }
    }

    /// Panics if either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Top-left `width`×`height` window.
    pub fn crop(&self, width: usize, height: usize) -> Result<Image> {
        if width == 0 || height == 0 || width > self.width || height > self.height {
            return Err(Error::Dimension(format!("cannot crop {}x{} to {width}x{height}", self.width, self.height)));
        }
        Ok(Image::from_fn(width, height, |x, y| self.get(x, y)))
    }
}

/// Real-valued raster used for transform arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} plane needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![0.0; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn from_image(img: &Image) -> Self {
        Self { width: img.width, height: img.height, data: img.data.iter().map(|&v| f64::from(v)).collect() }
    }

    /// Rounds half away from zero and clamps to [0, 255].
    pub fn to_image(&self) -> Result<Image> {
        Image::new(self.width, self.height, self.data.iter().map(|&v| to_u8(v)).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane { width: self.width, height: self.height, data: self.data.iter().map(|&v| f(v)).collect() }
    }
}

/// `f64::round` is half-away-from-zero, which is the convention used throughout.
#[inline]
pub fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Interleaved 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height * 3 {
            return Err(Error::Dimension(format!(
                "{width}x{height} RGB image needs {} bytes, got {}",
                width * height * 3,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Replicates a grayscale image into all three channels.
    pub fn from_gray(img: &Image) -> Self {
        let data = img.data.iter().flat_map(|&v| [v, v, v]).collect();
        Self { width: img.width, height: img.height, data }
    }

    pub fn from_channels(r: &Image, g: &Image, b: &Image) -> Result<Self> {
        if !r.same_dims(g) || !r.same_dims(b) {
            return Err(Error::Dimension("channel dimensions differ".into()));
        }
        let data = (0..r.data.len()).flat_map(|i| [r.data[i], g.data[i], b.data[i]]).collect();
        Ok(Self { width: r.width, height: r.height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Channel `c` (0 = R, 1 = G, 2 = B) as a grayscale image.
    pub fn channel(&self, c: usize) -> Image {
        assert!(c < 3);
        let data = self.data.iter().skip(c).step_by(3).copied().collect();
        Image { width: self.width, height: self.height, data }
    }

    pub fn to_luma(&self) -> Image {
        let data = self.data.chunks_exact(3).map(|p| luma(p[0], p[1], p[2])).collect();
        Image { width: self.width, height: self.height, data }
    }
}

/// BT.601 luma, rounded half away from zero.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    to_u8(0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Png,
}

impl ImageFormat {
    /// Guesses from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "pgm" | "pnm" => Some(Self::Pgm),
            "png" => Some(Self::Png),
            _ => None,
        }
    }
}

pub fn load_image(path: impl AsRef<Path>, format: ImageFormat) -> Result<Image> {
    let bytes = fs::read(path.as_ref())?;
    match format {
        ImageFormat::Pgm => decode_pgm(&bytes),
        ImageFormat::Png => Ok(decode_png(&bytes)?.to_luma()),
    }
}

/// Loads three channels; a PGM (or gray PNG) is replicated into R, G and B.
pub fn load_rgb(path: impl AsRef<Path>, format: ImageFormat) -> Result<RgbImage> {
    let bytes = fs::read(path.as_ref())?;
    match format {
        ImageFormat::Pgm => Ok(RgbImage::from_gray(&decode_pgm(&bytes)?)),
        ImageFormat::Png => decode_png(&bytes),
    }
}

pub fn save_image(img: &Image, path: impl AsRef<Path>, format: ImageFormat) -> Result<()> {
    let bytes = match format {
        ImageFormat::Pgm => encode_pgm(img),
        ImageFormat::Png => encode_png(img)?,
    };
    fs::write(path.as_ref(), bytes)?;
    Ok(())
}

/// Binary P5 with maxval 255: `P5\n<w> <h>\n255\n` followed by the samples.
pub fn encode_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.data);
    out
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::Format("not a binary (P5) PGM".into()));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and '#' comments may separate header tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::Format("PGM header ends early".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("expected a number in PGM header".into()));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text.parse().map_err(|_| Error::Format(format!("bad PGM header value {text}")))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::Format(format!("PGM maxval {maxval} unsupported, expected 255")));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format("PGM has a zero dimension".into()));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Format("missing whitespace after PGM maxval".into())),
    }
    let n = width * height;
    let payload = &bytes[pos..];
    if payload.len() < n {
        return Err(Error::Format(format!("PGM payload has {} of {n} bytes", payload.len())));
    }
    Image::new(width, height, payload[..n].to_vec())
}

#[cfg(feature = "png")]
fn decode_png(bytes: &[u8]) -> Result<RgbImage> {
    use png::{BitDepth, ColorType, Transformations};

    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(png_err)?;
    let info = reader.info();
    if info.bit_depth != BitDepth::Eight {
        return Err(Error::Format(format!("PNG bit depth {:?} unsupported", info.bit_depth)));
    }
    let size = reader.output_buffer_size().ok_or_else(|| Error::Format("PNG too large".into()))?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(png_err)?;
    let (w, h) = (frame.width as usize, frame.height as usize);
    let buf = &buf[..frame.buffer_size()];
    let rgb: Vec<u8> = match frame.color_type {
        ColorType::Grayscale => buf.iter().flat_map(|&v| [v, v, v]).collect(),
        ColorType::GrayscaleAlpha => buf.chunks_exact(2).flat_map(|p| [p[0], p[0], p[0]]).collect(),
        ColorType::Rgb => buf.to_vec(),
        ColorType::Rgba => buf.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect(),
        ColorType::Indexed => return Err(Error::Format("unexpanded palette PNG".into())),
    };
    RgbImage::new(w, h, rgb)
}

#[cfg(feature = "png")]
fn encode_png(img: &Image) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width as u32, img.height as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().map_err(png_err)?;
        writer.write_image_data(&img.data).map_err(png_err)?;
    }
    Ok(out)
}

#[cfg(feature = "png")]
fn png_err(e: impl std::fmt::Display) -> Error {
    Error::Format(format!("png: {e}"))
}

#[cfg(not(feature = "png"))]
fn decode_png(_: &[u8]) -> Result<RgbImage> {
    Err(Error::Format("built without PNG support".into()))
}

#[cfg(not(feature = "png"))]
fn encode_png(_: &Image) -> Result<Vec<u8>> {
    Err(Error::Format("built without PNG support".into()))
}

/// Grows both dimensions to the next multiple of `multiple` by replicating
/// the last column and row.
pub fn pad_replicate(img: &Image, multiple: usize) -> Image {
    assert!(multiple > 0);
    let w = img.width.div_ceil(multiple) * multiple;
    let h = img.height.div_ceil(multiple) * multiple;
    if w == img.width && h == img.height {
        return img.clone();
    }
    Image::from_fn(w, h, |x, y| img.get(x.min(img.width - 1), y.min(img.height - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_tiny_pgm() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 128, 255, 7]);
        let img = decode_pgm(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.data(), &[0, 128, 255, 7]);
    }

    #[test]
    fn writes_exact_header() {
        let img = Image::filled(3, 5, 9);
        let bytes = encode_pgm(&img);
        assert!(bytes.starts_with(b"P5\n3 5\n255\n"));
        assert_eq!(bytes.len(), 11 + 15);
        assert_eq!(encode_pgm(&Image::filled(1, 1, 42)), b"P5\n1 1\n255\n*");
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut bytes = b"P5 # made by hand\n1 # width\n1\n255\n".to_vec();
        bytes.push(3);
        assert_eq!(decode_pgm(&bytes).unwrap().data(), &[3]);
    }

    #[test]
    fn rejects_bad_pgm() {
        assert!(matches!(decode_pgm(b"P2\n1 1\n255\n0"), Err(Error::Format(_))));
        assert!(matches!(decode_pgm(b"P5\n1 1\n65535\n00"), Err(Error::Format(_))));
        assert!(matches!(decode_pgm(b"P5\n2 2\n255\n\x01"), Err(Error::Format(_))));
        assert!(matches!(decode_pgm(b"P5\n2"), Err(Error::Format(_))));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_image("/nonexistent/definitely/not/here.pgm", ImageFormat::Pgm).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }

    #[test]
    fn luma_values() {
        assert_eq!(luma(255, 255, 255), 255);
        assert_eq!(luma(255, 0, 0), 76);
        assert_eq!(luma(0, 0, 0), 0);
        for v in 0..=255u8 {
            assert_eq!(luma(v, v, v), v);
        }
    }

    #[test]
    fn padding() {
        let img = Image::from_fn(32, 32, |x, y| (x * 3 + y) as u8);
        assert_eq!(pad_replicate(&img, 8), img);

        let img = Image::from_fn(33, 32, |x, y| (x * 7 + y) as u8);
        let padded = pad_replicate(&img, 8);
        assert_eq!((padded.width(), padded.height()), (40, 32));
        for y in 0..32 {
            for x in 32..40 {
                assert_eq!(padded.get(x, y), img.get(32, y));
            }
        }

        let padded = pad_replicate(&Image::filled(1, 1, 77), 8);
        assert_eq!(padded, Image::filled(8, 8, 77));
    }

    #[cfg(feature = "png")]
    #[test]
    fn png_round_trip_and_color_conversion() {
        let img = Image::from_fn(5, 4, |x, y| (x * 50 + y) as u8);
        let bytes = encode_png(&img).unwrap();
        assert_eq!(decode_png(&bytes).unwrap().to_luma(), img);

        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 2, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[255, 0, 0, 255, 255, 255]).unwrap();
        }
        assert_eq!(decode_png(&out).unwrap().to_luma().data(), &[76, 255]);
    }

    #[cfg(feature = "png")]
    #[test]
    fn png_16_bit_rejected() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 1, 1);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Sixteen);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[1, 2]).unwrap();
        }
        assert!(matches!(decode_png(&out), Err(Error::Format(_))));
    }

    fn arb_image() -> impl Strategy<Value = Image> {
        (1usize..24, 1usize..24).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h).prop_map(move |d| Image::new(w, h, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn pgm_round_trip(img in arb_image()) {
            prop_assert_eq!(decode_pgm(&encode_pgm(&img)).unwrap(), img);
        }

        #[test]
        fn padding_is_idempotent(img in arb_image()) {
            let once = pad_replicate(&img, 8);
            prop_assert_eq!(once.width() % 8, 0);
            prop_assert_eq!(once.height() % 8, 0);
            prop_assert_eq!(pad_replicate(&once, 8), once.clone());
            prop_assert_eq!(once.crop(img.width(), img.height()).unwrap(), img);
        }
    }
}
