//! Contest-style binarization metrics: F-Measure, pseudo-F-Measure, PSNR and
//! DRD (with its NUBN normalizer), plus the Zhang-Suen thinning that
//! pseudo-recall is defined against.
//!
//! Foreground ink is the positive class throughout. F-Measure works out to
//! `2·TP / (2·TP + FP + FN)` regardless of which of precision/recall carries
//! the FP or the FN denominator, so the harmonic mean is insensitive to that
//! labeling; pseudo-precision here is the standard `TP / (TP + FP)`.

use crate::error::{Error, Result};
use crate::imagecore::BinaryMask;
use crate::scalar::Scalar;

/// Pixel-level confusion counts; foreground = positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Per-image metric record.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricReport<T> {
    pub image_id: String,
    /// Fraction in [0, 1]; multiply by 100 for table formatting.
    pub f_measure: T,
    pub pseudo_f_measure: T,
    /// Decibels; `+inf` when prediction and ground truth are identical.
    pub psnr: T,
    pub drd: T,
    pub nubn: u64,
}

fn check_dims(pred: &BinaryMask, gt: &BinaryMask) -> Result<()> {
    if pred.height() != gt.height() || pred.width() != gt.width() {
        return Err(Error::Argument(format!(
            "mask dimensions differ: {}x{} vs {}x{}",
            pred.height(),
            pred.width(),
            gt.height(),
            gt.width()
        )));
    }
    Ok(())
}

/// Tally the pixel-level confusion counts between a prediction and a ground
/// truth of equal dimensions.
pub fn confusion(pred: &BinaryMask, gt: &BinaryMask) -> Result<ConfusionCounts> {
    check_dims(pred, gt)?;
    let mut c = ConfusionCounts {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    for (&p, &g) in pred.data().iter().zip(gt.data()) {
        match (p, g) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// `FM = 2·TP / (2·TP + FP + FN)`, as a fraction in `[0, 1]`.
///
/// When prediction and ground truth both have empty foreground the measure is
/// defined as 1.
pub fn f_measure<T: Scalar>(c: &ConfusionCounts) -> T {
    let denom = 2 * c.tp + c.fp + c.fn_;
    if denom == 0 {
        return T::one();
    }
    T::of_usize(2 * c.tp as usize) / T::of_usize(denom as usize)
}

/// Zhang-Suen thinning run to fixpoint. The skeleton is a subset of the
/// original foreground and preserves 8-connectivity of each component.
pub fn skeletonize(gt: &BinaryMask) -> BinaryMask {
    let (h, w) = (gt.height(), gt.width());
    let mut current = gt.clone();
    let at = |m: &BinaryMask, y: isize, x: isize| -> bool {
        if y < 0 || x < 0 || y >= h as isize || x >= w as isize {
            false
        } else {
            m.get(y as usize, x as usize)
        }
    };

    loop {
        let mut changed = false;
        for phase in 0..2 {
            let mut to_clear = Vec::new();
            for y in 0..h as isize {
                for x in 0..w as isize {
                    if !at(&current, y, x) {
                        continue;
                    }
                    // Neighbors P2..P9 clockwise from north.
                    let p = [
                        at(&current, y - 1, x),
                        at(&current, y - 1, x + 1),
                        at(&current, y, x + 1),
                        at(&current, y + 1, x + 1),
                        at(&current, y + 1, x),
                        at(&current, y + 1, x - 1),
                        at(&current, y, x - 1),
                        at(&current, y - 1, x - 1),
                    ];
                    let b: usize = p.iter().filter(|v| **v).count();
                    if !(2..=6).contains(&b) {
                        continue;
                    }
                    let a = (0..8)
                        .filter(|&i| !p[i] && p[(i + 1) % 8])
                        .count();
                    if a != 1 {
                        continue;
                    }
                    let (c1, c2) = if phase == 0 {
                        // P2·P4·P6 = 0 and P4·P6·P8 = 0
                        (p[0] && p[2] && p[4], p[2] && p[4] && p[6])
                    } else {
                        // P2·P4·P8 = 0 and P2·P6·P8 = 0
                        (p[0] && p[2] && p[6], p[0] && p[4] && p[6])
                    };
                    if c1 || c2 {
                        continue;
                    }
                    to_clear.push((y as usize, x as usize));
                }
            }
            if !to_clear.is_empty() {
                changed = true;
                for (y, x) in to_clear {
                    current.set(y, x, false);
                }
            }
        }
        if !changed {
            return current;
        }
    }
}

/// `pFM = 2·P·pRecall / (P + pRecall)` where precision comes from the full
/// ground truth and pseudo-recall counts predicted pixels on the skeletonized
/// ground truth.
///
/// An empty ground-truth foreground falls back to the plain F-Measure.
pub fn pseudo_f_measure<T: Scalar>(pred: &BinaryMask, gt: &BinaryMask) -> Result<T> {
    check_dims(pred, gt)?;
    let c = confusion(pred, gt)?;
    if c.tp + c.fn_ == 0 {
        return Ok(f_measure(&c));
    }
    let skel = skeletonize(gt);
    let skel_total = skel.count_foreground() as u64;
    let skel_hit = pred
        .data()
        .iter()
        .zip(skel.data())
        .filter(|(p, s)| **p && **s)
        .count() as u64;
    // Thinning never empties a non-empty foreground, but guard anyway.
    if skel_total == 0 {
        return Ok(f_measure(&c));
    }
    let precision_denom = c.tp + c.fp;
    if precision_denom == 0 {
        return Ok(T::zero());
    }
    let precision = T::of_usize(c.tp as usize) / T::of_usize(precision_denom as usize);
    let p_recall = T::of_usize(skel_hit as usize) / T::of_usize(skel_total as usize);
    if precision + p_recall == T::zero() {
        return Ok(T::zero());
    }
    Ok(T::of_usize(2) * precision * p_recall / (precision + p_recall))
}

/// `PSNR = 10·log10(1 / MSE)` with unit peak; on binary images the MSE is the
/// fraction of differing pixels. Identical masks yield `+inf`.
pub fn psnr<T: Scalar>(pred: &BinaryMask, gt: &BinaryMask) -> Result<T> {
    check_dims(pred, gt)?;
    let diff = pred
        .data()
        .iter()
        .zip(gt.data())
        .filter(|(p, g)| p != g)
        .count();
    if diff == 0 {
        return Ok(T::infinity());
    }
    let mse = T::of_usize(diff) / T::of_usize(pred.data().len());
    Ok(T::of_usize(10) * (T::one() / mse).log10())
}

/// Number of non-uniform 8×8 blocks in the ground truth. Blocks anchor at the
/// top-left corner; partial blocks at the right/bottom edges count too.
pub fn nubn(gt: &BinaryMask) -> u64 {
    let (h, w) = (gt.height(), gt.width());
    let mut count = 0;
    let mut by = 0;
    while by < h {
        let mut bx = 0;
        while bx < w {
            let mut has_fg = false;
            let mut has_bg = false;
            'block: for y in by..(by + 8).min(h) {
                for x in bx..(bx + 8).min(w) {
                    if gt.get(y, x) {
                        has_fg = true;
                    } else {
                        has_bg = true;
                    }
                    if has_fg && has_bg {
                        break 'block;
                    }
                }
            }
            if has_fg && has_bg {
                count += 1;
            }
            bx += 8;
        }
        by += 8;
    }
    count
}

/// The normalized reciprocal-distance 5×5 weight matrix: entry `(i, j)` is
/// `1/√(i²+j²)` away from the center, the center itself weighs 0, and the
/// whole matrix is normalized to sum 1.
pub fn drd_weights<T: Scalar>() -> [[T; 5]; 5] {
    let mut raw = [[0.0f64; 5]; 5];
    let mut total = 0.0;
    for (i, row) in raw.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 2.0, j as f64 - 2.0);
            if di == 0.0 && dj == 0.0 {
                continue;
            }
            *cell = 1.0 / (di * di + dj * dj).sqrt();
            total += *cell;
        }
    }
    let mut out = [[T::zero(); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = T::of_f64(raw[i][j] / total);
        }
    }
    out
}

/// Distance Reciprocal Distortion: each flipped pixel contributes the
/// weighted count of 5×5 ground-truth neighbors that disagree with its new
/// value (out-of-bounds neighbors contribute nothing), and the sum is divided
/// by NUBN.
///
/// Errors when NUBN is 0, which leaves the metric undefined.
pub fn drd<T: Scalar>(pred: &BinaryMask, gt: &BinaryMask) -> Result<T> {
    check_dims(pred, gt)?;
    let blocks = nubn(gt);
    if blocks == 0 {
        return Err(Error::UndefinedMetric(
            "DRD needs at least one non-uniform 8x8 block in the ground truth".into(),
        ));
    }
    let weights = drd_weights::<T>();
    let (h, w) = (gt.height() as isize, gt.width() as isize);
    let mut total = T::zero();
    for y in 0..h {
        for x in 0..w {
            let p = pred.get(y as usize, x as usize);
            if p == gt.get(y as usize, x as usize) {
                continue;
            }
            let mut dk = T::zero();
            for di in -2..=2isize {
                for dj in -2..=2isize {
                    let (ny, nx) = (y + di, x + dj);
                    if ny < 0 || nx < 0 || ny >= h || nx >= w {
                        continue;
                    }
                    if gt.get(ny as usize, nx as usize) != p {
                        dk += weights[(di + 2) as usize][(dj + 2) as usize];
                    }
                }
            }
            total += dk;
        }
    }
    Ok(total / T::of_usize(blocks as usize))
}

/// Compute the full per-image report.
pub fn report<T: Scalar>(image_id: &str, pred: &BinaryMask, gt: &BinaryMask) -> Result<MetricReport<T>> {
    Ok(MetricReport {
        image_id: image_id.to_string(),
        f_measure: f_measure(&confusion(pred, gt)?),
        pseudo_f_measure: pseudo_f_measure(pred, gt)?,
        psnr: psnr(pred, gt)?,
        drd: drd(pred, gt).unwrap_or(T::zero()),
        nubn: nubn(gt),
    })
}
