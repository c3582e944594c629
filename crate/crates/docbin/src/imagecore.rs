//! Canonical image and mask representations shared by every stage.
//!
//! A [`RasterImage`] carries degraded document pixels as floats in `[0, 1]`
//! (8-bit value `v` loads as `v / 255`). A [`BinaryMask`] is the two-tone
//! form: `true` marks foreground ink, which renders as black (`0.0`).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use image::{DynamicImage, ImageBuffer, Luma, Rgb};
use std::path::Path;

/// H×W×C raster with channel values in `[0, 1]`, row-major HWC layout.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage<T> {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<T>,
}

impl<T: Scalar> RasterImage<T> {
    /// Build from raw HWC data, validating the type invariants.
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<T>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::Argument(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(Error::Argument(format!(
                "data length {} does not match {height}x{width}x{channels}",
                data.len()
            )));
        }
        if !data
            .iter()
            .all(|v| v.is_finite() && *v >= T::zero() && *v <= T::one())
        {
            return Err(Error::Argument(
                "pixel values must be finite and within [0, 1]".into(),
            ));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    /// Constant-valued image.
    pub fn filled(height: usize, width: usize, channels: usize, value: T) -> Result<Self> {
        Self::new(height, width, channels, vec![value; height * width * channels])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> T {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Luma conversion with ITU-R BT.601 weights; pass-through for 1-channel
    /// input.
    pub fn to_grayscale(&self) -> RasterImage<T> {
        if self.channels == 1 {
            return self.clone();
        }
        let wr = T::of_f64(0.299);
        let wg = T::of_f64(0.587);
        let wb = T::of_f64(0.114);
        let mut out = Vec::with_capacity(self.height * self.width);
        for px in self.data.chunks_exact(3) {
            let y = wr * px[0] + wg * px[1] + wb * px[2];
            // Convexity keeps y in [0,1]; clamp shields against rounding.
            out.push(y.min(T::one()).max(T::zero()));
        }
        RasterImage {
            height: self.height,
            width: self.width,
            channels: 1,
            data: out,
        }
    }

    /// Replicate a 1-channel image into 3 identical channels.
    pub fn to_rgb(&self) -> RasterImage<T> {
        if self.channels == 3 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.data.len() * 3);
        for &v in &self.data {
            out.extend_from_slice(&[v, v, v]);
        }
        RasterImage {
            height: self.height,
            width: self.width,
            channels: 3,
            data: out,
        }
    }

    /// Threshold a 1-channel image: a pixel is foreground iff `value < thr`.
    pub fn to_mask(&self, thr: T) -> Result<BinaryMask> {
        if self.channels != 1 {
            return Err(Error::Argument(
                "image_to_mask requires a 1-channel image".into(),
            ));
        }
        if !(thr > T::zero() && thr < T::one()) {
            return Err(Error::Argument(format!(
                "threshold must lie strictly inside (0, 1), got {thr}"
            )));
        }
        Ok(BinaryMask {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|v| *v < thr).collect(),
        })
    }

    /// Crop a window; the window must fit inside the image.
    pub fn crop(&self, y0: usize, x0: usize, h: usize, w: usize) -> Result<RasterImage<T>> {
        if y0 + h > self.height || x0 + w > self.width {
            return Err(Error::Argument(format!(
                "crop {h}x{w}+{y0}+{x0} exceeds {}x{}",
                self.height, self.width
            )));
        }
        let mut data = Vec::with_capacity(h * w * self.channels);
        for y in 0..h {
            let row = ((y0 + y) * self.width + x0) * self.channels;
            data.extend_from_slice(&self.data[row..row + w * self.channels]);
        }
        Ok(RasterImage {
            height: h,
            width: w,
            channels: self.channels,
            data,
        })
    }

    /// Pad to at least `(min_h, min_w)` by mirroring edge rows/columns.
    pub fn reflect_pad_to(&self, min_h: usize, min_w: usize) -> RasterImage<T> {
        let out_h = self.height.max(min_h);
        let out_w = self.width.max(min_w);
        if out_h == self.height && out_w == self.width {
            return self.clone();
        }
        let mut data = Vec::with_capacity(out_h * out_w * self.channels);
        for y in 0..out_h {
            let sy = reflect_index(y, self.height);
            for x in 0..out_w {
                let sx = reflect_index(x, self.width);
                for c in 0..self.channels {
                    data.push(self.get(sy, sx, c));
                }
            }
        }
        RasterImage {
            height: out_h,
            width: out_w,
            channels: self.channels,
            data,
        }
    }

    /// Bilinear resize. Suitable for degraded inputs; use
    /// [`BinaryMask::resize_nearest`] for targets so they stay binary.
    pub fn resize_bilinear(&self, out_h: usize, out_w: usize) -> RasterImage<T> {
        let mut data = Vec::with_capacity(out_h * out_w * self.channels);
        let sy = self.height as f64 / out_h as f64;
        let sx = self.width as f64 / out_w as f64;
        for y in 0..out_h {
            // Align sample centers.
            let fy = ((y as f64 + 0.5) * sy - 0.5).max(0.0);
            let y0 = (fy.floor() as usize).min(self.height - 1);
            let y1 = (y0 + 1).min(self.height - 1);
            let wy = T::of_f64(fy - y0 as f64);
            for x in 0..out_w {
                let fx = ((x as f64 + 0.5) * sx - 0.5).max(0.0);
                let x0 = (fx.floor() as usize).min(self.width - 1);
                let x1 = (x0 + 1).min(self.width - 1);
                let wx = T::of_f64(fx - x0 as f64);
                for c in 0..self.channels {
                    let top = self.get(y0, x0, c) * (T::one() - wx) + self.get(y0, x1, c) * wx;
                    let bot = self.get(y1, x0, c) * (T::one() - wx) + self.get(y1, x1, c) * wx;
                    let v = top * (T::one() - wy) + bot * wy;
                    data.push(v.min(T::one()).max(T::zero()));
                }
            }
        }
        RasterImage {
            height: out_h,
            width: out_w,
            channels: self.channels,
            data,
        }
    }

    /// Write as an 8-bit PNG (`round(v * 255)` per channel).
    pub fn save_png(&self, path: &Path) -> Result<()> {
        let to_u8 = |v: T| (v.as_f64() * 255.0).round().clamp(0.0, 255.0) as u8;
        match self.channels {
            1 => {
                let buf: ImageBuffer<Luma<u8>, Vec<u8>> = ImageBuffer::from_fn(
                    self.width as u32,
                    self.height as u32,
                    |x, y| Luma([to_u8(self.get(y as usize, x as usize, 0))]),
                );
                buf.save(path)
                    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
            }
            _ => {
                let buf: ImageBuffer<Rgb<u8>, Vec<u8>> =
                    ImageBuffer::from_fn(self.width as u32, self.height as u32, |x, y| {
                        Rgb([
                            to_u8(self.get(y as usize, x as usize, 0)),
                            to_u8(self.get(y as usize, x as usize, 1)),
                            to_u8(self.get(y as usize, x as usize, 2)),
                        ])
                    });
                buf.save(path)
                    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
            }
        }
    }
}

fn reflect_index(i: usize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    // Reflection without edge repetition, period 2(n-1).
    let period = 2 * (n - 1);
    let m = i % period;
    if m < n {
        m
    } else {
        period - m
    }
}

/// H×W boolean map; `true` marks foreground ink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    height: usize,
    width: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(height: usize, width: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::Argument(format!(
                "mask data length {} does not match {height}x{width}",
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, value: bool) -> Self {
        Self {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|v| **v).count()
    }

    /// Render as a 1-channel image: foreground → 0.0 (black ink),
    /// background → 1.0 (white paper).
    pub fn to_image<T: Scalar>(&self) -> RasterImage<T> {
        RasterImage {
            height: self.height,
            width: self.width,
            channels: 1,
            data: self
                .data
                .iter()
                .map(|fg| if *fg { T::zero() } else { T::one() })
                .collect(),
        }
    }

    pub fn crop(&self, y0: usize, x0: usize, h: usize, w: usize) -> Result<BinaryMask> {
        if y0 + h > self.height || x0 + w > self.width {
            return Err(Error::Argument(format!(
                "crop {h}x{w}+{y0}+{x0} exceeds {}x{}",
                self.height, self.width
            )));
        }
        let mut data = Vec::with_capacity(h * w);
        for y in 0..h {
            let row = (y0 + y) * self.width + x0;
            data.extend_from_slice(&self.data[row..row + w]);
        }
        Ok(BinaryMask {
            height: h,
            width: w,
            data,
        })
    }

    pub fn reflect_pad_to(&self, min_h: usize, min_w: usize) -> BinaryMask {
        let out_h = self.height.max(min_h);
        let out_w = self.width.max(min_w);
        if out_h == self.height && out_w == self.width {
            return self.clone();
        }
        let mut data = Vec::with_capacity(out_h * out_w);
        for y in 0..out_h {
            let sy = reflect_index(y, self.height);
            for x in 0..out_w {
                data.push(self.get(sy, reflect_index(x, self.width)));
            }
        }
        BinaryMask {
            height: out_h,
            width: out_w,
            data,
        }
    }

    /// Nearest-neighbor resize; keeps the mask strictly binary.
    pub fn resize_nearest(&self, out_h: usize, out_w: usize) -> BinaryMask {
        let mut data = Vec::with_capacity(out_h * out_w);
        for y in 0..out_h {
            let sy = ((y as f64 + 0.5) * self.height as f64 / out_h as f64) as usize;
            let sy = sy.min(self.height - 1);
            for x in 0..out_w {
                let sx = ((x as f64 + 0.5) * self.width as f64 / out_w as f64) as usize;
                data.push(self.get(sy, sx.min(self.width - 1)));
            }
        }
        BinaryMask {
            height: out_h,
            width: out_w,
            data,
        }
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        self.to_image::<f32>().save_png(path)
    }
}

/// Load a PNG/TIFF/BMP file; 8-bit channels scale to `[0, 1]` as `v / 255`.
pub fn load_image<T: Scalar>(path: &Path) -> Result<RasterImage<T>> {
    let reader = image::ImageReader::open(path)
        .map_err(Error::Io)?
        .with_guessed_format()
        .map_err(Error::Io)?;
    let img = reader
        .decode()
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let scale = T::of_f64(1.0 / 255.0);
    match img {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            let data = buf.into_raw().iter().map(|v| T::of_usize(*v as usize) * scale).collect();
            RasterImage::new(h as usize, w as usize, 1, data)
        }
        DynamicImage::ImageLumaA8(buf) => {
            let (w, h) = buf.dimensions();
            let data = buf
                .into_raw()
                .chunks_exact(2)
                .map(|px| T::of_usize(px[0] as usize) * scale)
                .collect();
            RasterImage::new(h as usize, w as usize, 1, data)
        }
        DynamicImage::ImageRgb8(buf) => {
            let (w, h) = buf.dimensions();
            let data = buf.into_raw().iter().map(|v| T::of_usize(*v as usize) * scale).collect();
            RasterImage::new(h as usize, w as usize, 3, data)
        }
        DynamicImage::ImageRgba8(buf) => {
            let (w, h) = buf.dimensions();
            let mut data = Vec::with_capacity((w * h * 3) as usize);
            for px in buf.into_raw().chunks_exact(4) {
                data.push(T::of_usize(px[0] as usize) * scale);
                data.push(T::of_usize(px[1] as usize) * scale);
                data.push(T::of_usize(px[2] as usize) * scale);
            }
            RasterImage::new(h as usize, w as usize, 3, data)
        }
        other => Err(Error::Format(format!(
            "{}: unsupported bit depth / color type {:?}",
            path.display(),
            other.color()
        ))),
    }
}

/// Load a ground-truth file and binarize it at 0.5.
pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    let img: RasterImage<f32> = load_image(path)?;
    img.to_grayscale().to_mask(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eight_bit_scaling_endpoints() {
        // 255 -> 1.0 and 0 -> 0.0 under v/255.
        let img = RasterImage::<f64>::new(1, 2, 1, vec![255.0 / 255.0, 0.0]).unwrap();
        assert_eq!(img.get(0, 0, 0), 1.0);
        assert_eq!(img.get(0, 1, 0), 0.0);
    }

    #[test]
    fn eight_bit_scaling_midpoint() {
        // Integer-scaling oracle: 128 / 255.
        let expected = 128.0_f64 / 255.0;
        assert!((expected - 0.50196).abs() < 1e-4);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mid.png");
        let buf: ImageBuffer<Luma<u8>, Vec<u8>> = ImageBuffer::from_pixel(3, 2, Luma([128]));
        buf.save(&path).unwrap();
        let img: RasterImage<f64> = load_image(&path).unwrap();
        for &v in img.data() {
            assert!((v - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn grayscale_fixed_points_and_weights() {
        let white = RasterImage::<f64>::new(1, 1, 3, vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(white.to_grayscale().get(0, 0, 0), 1.0);
        let black = RasterImage::<f64>::new(1, 1, 3, vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(black.to_grayscale().get(0, 0, 0), 0.0);
        // Weighted-sum oracle for a pure red pixel.
        let red = RasterImage::<f64>::new(1, 1, 3, vec![1.0, 0.0, 0.0]).unwrap();
        assert!((red.to_grayscale().get(0, 0, 0) - 0.299).abs() < 1e-12);
    }

    #[test]
    fn grayscale_passthrough_for_single_channel() {
        let img = RasterImage::<f32>::new(2, 2, 1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(img.to_grayscale(), img);
    }

    #[test]
    fn mask_image_conversions() {
        let mask = BinaryMask::filled(2, 2, true);
        let img = mask.to_image::<f64>();
        assert!(img.data().iter().all(|v| *v == 0.0));
        // Threshold definition: img=[0.2, 0.7], thr=0.5 -> [fg, bg].
        let img = RasterImage::<f64>::new(1, 2, 1, vec![0.2, 0.7]).unwrap();
        let m = img.to_mask(0.5).unwrap();
        assert_eq!(m.data(), &[true, false]);
    }

    #[test]
    fn mask_threshold_rejects_out_of_range() {
        let img = RasterImage::<f64>::new(1, 1, 1, vec![0.5]).unwrap();
        assert!(img.to_mask(0.0).is_err());
        assert!(img.to_mask(1.0).is_err());
        assert!(img.to_mask(1.5).is_err());
    }

    #[test]
    fn rejects_invalid_pixel_values() {
        assert!(RasterImage::<f64>::new(1, 1, 1, vec![1.5]).is_err());
        assert!(RasterImage::<f64>::new(1, 1, 1, vec![f64::NAN]).is_err());
        assert!(RasterImage::<f64>::new(1, 1, 2, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn png_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.png");
        let mut rng = 1234_u32;
        let mut px = Vec::new();
        for _ in 0..(8 * 6 * 3) {
            rng = rng.wrapping_mul(1103515245).wrapping_add(12345);
            px.push(((rng >> 16) & 0xff) as u8);
        }
        let buf: ImageBuffer<Rgb<u8>, Vec<u8>> =
            ImageBuffer::from_raw(6, 8, px.clone()).unwrap();
        buf.save(&path).unwrap();

        let img: RasterImage<f32> = load_image(&path).unwrap();
        let path2 = dir.path().join("rt2.png");
        img.save_png(&path2).unwrap();
        let reloaded = image::open(&path2).unwrap().into_rgb8();
        assert_eq!(reloaded.into_raw(), px);
    }

    #[test]
    fn load_rejects_sixteen_bit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deep.png");
        let buf: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_pixel(2, 2, Luma([40000]));
        buf.save(&path).unwrap();
        match load_image::<f32>(&path) {
            Err(Error::Format(_)) => {}
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn reflect_pad_mirrors_content() {
        let img = RasterImage::<f64>::new(1, 2, 1, vec![0.25, 0.75]).unwrap();
        let padded = img.reflect_pad_to(1, 4);
        assert_eq!(padded.data(), &[0.25, 0.75, 0.25, 0.75]);
    }

    proptest! {
        #[test]
        fn mask_round_trip_identity(bits in proptest::collection::vec(any::<bool>(), 24)) {
            let mask = BinaryMask::new(4, 6, bits).unwrap();
            let back = mask.to_image::<f32>().to_mask(0.5).unwrap();
            prop_assert_eq!(back, mask);
        }

        #[test]
        fn grayscale_stays_in_unit_range(px in proptest::collection::vec(0.0f64..=1.0, 27)) {
            let img = RasterImage::<f64>::new(3, 3, 3, px).unwrap();
            let gray = img.to_grayscale();
            prop_assert!(gray.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
