//! Classical thresholding baselines: Otsu plus the Niblack and Sauvola local
//! adaptive methods.
//!
//! Local statistics use integral images over a replication-padded frame, so
//! borders see a full window of edge samples instead of artificial dark
//! margins.

use crate::error::{Error, Result};
use crate::imagecore::{BinaryMask, RasterImage};
use crate::scalar::Scalar;

/// Window parameters for the local adaptive methods.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LocalWindowParams<T> {
    /// Window side length in pixels; odd, at least 3.
    pub window: usize,
    /// Sensitivity factor `k`.
    pub k: T,
    /// Sauvola dynamic range `R`, on the `[0, 1]` pixel scale.
    pub r_dynamic: T,
}

impl<T: Scalar> LocalWindowParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::Argument(format!(
                "window must be odd and >= 3, got {}",
                self.window
            )));
        }
        if self.r_dynamic <= T::zero() {
            return Err(Error::Argument("r_dynamic must be positive".into()));
        }
        Ok(())
    }

    /// Niblack defaults: 25×25 window, k = −0.2.
    pub fn niblack_default() -> Self {
        Self {
            window: 25,
            k: T::of_f64(-0.2),
            r_dynamic: T::of_f64(0.5),
        }
    }

    /// Sauvola defaults: 25×25 window, k = 0.5, R = 0.5 (the classical 128
    /// rescaled to unit pixel range).
    pub fn sauvola_default() -> Self {
        Self {
            window: 25,
            k: T::of_f64(0.5),
            r_dynamic: T::of_f64(0.5),
        }
    }
}

fn require_gray<T: Scalar>(img: &RasterImage<T>) -> Result<()> {
    if img.channels() != 1 {
        return Err(Error::Argument("expected a 1-channel image".into()));
    }
    Ok(())
}

/// Global thresholding by maximizing inter-class variance over a 256-bin
/// histogram. Returns the threshold (on the `[0, 1]` scale) and the mask of
/// pixels strictly below it.
///
/// A constant image is a documented degenerate case: the pixel value itself
/// is returned and the mask is all background.
pub fn otsu<T: Scalar>(gray: &RasterImage<T>) -> Result<(T, BinaryMask)> {
    require_gray(gray)?;
    if gray.data().is_empty() {
        return Err(Error::Argument("empty image".into()));
    }

    let mut hist = [0u64; 256];
    for &v in gray.data() {
        hist[bin_of(v)] += 1;
    }

    let occupied = hist.iter().filter(|c| **c > 0).count();
    if occupied <= 1 {
        let value = gray.data()[0];
        return Ok((value, BinaryMask::filled(gray.height(), gray.width(), false)));
    }

    let total = gray.data().len() as f64;
    let total_sum: f64 = hist
        .iter()
        .enumerate()
        .map(|(b, c)| b as f64 * *c as f64)
        .sum();

    let mut best_cut = 0usize;
    let mut best_var = -1.0f64;
    let mut w0 = 0.0f64;
    let mut sum0 = 0.0f64;
    // Cut k assigns bins <= k to the dark (foreground) class.
    for (k, &count) in hist.iter().enumerate().take(255) {
        w0 += count as f64;
        sum0 += k as f64 * count as f64;
        if w0 == 0.0 {
            continue;
        }
        let w1 = total - w0;
        if w1 == 0.0 {
            break;
        }
        let m0 = sum0 / w0;
        let m1 = (total_sum - sum0) / w1;
        let between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if between > best_var {
            best_var = between;
            best_cut = k;
        }
    }

    let threshold = T::of_f64((best_cut as f64 + 0.5) / 255.0);
    let mask = gray.to_mask(threshold)?;
    Ok((threshold, mask))
}

#[inline]
fn bin_of<T: Scalar>(v: T) -> usize {
    (v.as_f64() * 255.0).round().clamp(0.0, 255.0) as usize
}

/// Per-pixel window mean and standard deviation for every pixel, computed on
/// a replication-padded frame via integral images.
fn window_stats<T: Scalar>(gray: &RasterImage<T>, window: usize) -> Result<(Vec<T>, Vec<T>)> {
    let (h, w) = (gray.height(), gray.width());
    if window > h || window > w {
        return Err(Error::Argument(format!(
            "window {window} larger than image {h}x{w}"
        )));
    }
    let r = window / 2;
    let (ph, pw) = (h + 2 * r, w + 2 * r);

    // Integral images of value and squared value over the padded frame.
    let mut sum = vec![T::zero(); (ph + 1) * (pw + 1)];
    let mut sq = vec![T::zero(); (ph + 1) * (pw + 1)];
    let stride = pw + 1;
    for y in 0..ph {
        for x in 0..pw {
            let v = gray.get(clamp_pad(y, r, h), clamp_pad(x, r, w), 0);
            let idx = (y + 1) * stride + (x + 1);
            sum[idx] = v + sum[idx - 1] + sum[idx - stride] - sum[idx - stride - 1];
            sq[idx] = v * v + sq[idx - 1] + sq[idx - stride] - sq[idx - stride - 1];
        }
    }

    let area = T::of_usize(window * window);
    let mut means = Vec::with_capacity(h * w);
    let mut stds = Vec::with_capacity(h * w);
    for y in 0..h {
        for x in 0..w {
            // Window around (y, x) maps to padded coords [y, y+window).
            let (y0, x0, y1, x1) = (y, x, y + window, x + window);
            let s = sum[y1 * stride + x1] - sum[y0 * stride + x1] - sum[y1 * stride + x0]
                + sum[y0 * stride + x0];
            let s2 = sq[y1 * stride + x1] - sq[y0 * stride + x1] - sq[y1 * stride + x0]
                + sq[y0 * stride + x0];
            let mean = s / area;
            let var = (s2 / area - mean * mean).max(T::zero());
            means.push(mean);
            stds.push(var.sqrt());
        }
    }
    Ok((means, stds))
}

#[inline]
fn clamp_pad(padded: usize, r: usize, n: usize) -> usize {
    (padded.saturating_sub(r)).min(n - 1)
}

/// Niblack local thresholding: `T = μ_w + k·σ_w`, foreground iff pixel < T.
pub fn niblack<T: Scalar>(gray: &RasterImage<T>, p: &LocalWindowParams<T>) -> Result<BinaryMask> {
    require_gray(gray)?;
    p.validate()?;
    let (means, stds) = window_stats(gray, p.window)?;
    let data = gray
        .data()
        .iter()
        .zip(means.iter().zip(stds.iter()))
        .map(|(&v, (&m, &s))| v < m + p.k * s)
        .collect();
    BinaryMask::new(gray.height(), gray.width(), data)
}

/// Sauvola local thresholding: `T = μ_w · (1 + k·(σ_w/R − 1))`.
pub fn sauvola<T: Scalar>(gray: &RasterImage<T>, p: &LocalWindowParams<T>) -> Result<BinaryMask> {
    require_gray(gray)?;
    p.validate()?;
    let (means, stds) = window_stats(gray, p.window)?;
    let data = gray
        .data()
        .iter()
        .zip(means.iter().zip(stds.iter()))
        .map(|(&v, (&m, &s))| {
            let t = m * (T::one() + p.k * (s / p.r_dynamic - T::one()));
            v < t
        })
        .collect();
    BinaryMask::new(gray.height(), gray.width(), data)
}
