use std::collections::VecDeque;

use super::{ConvError, FeatureMap};

/// Streaming window extractor: `fs - 1` row delay lines feeding an `fs x fs`
/// register window that shifts by one column per input pixel.
///
/// Pixels are pushed in raster order. Once `fs - 1` rows and `fs - 1` columns
/// have been seen, every push completes one window.
#[derive(Debug, Clone)]
pub struct LineBuffer {
    fs: usize,
    width: usize,
    rows: Vec<VecDeque<i16>>,
    /// window[r][c], row 0 on top, column fs-1 newest
    window: Vec<Vec<i16>>,
    x: usize,
    y: usize,
}

impl LineBuffer {
    pub fn new(fs: usize, width: usize) -> Self {
        LineBuffer {
            fs,
            width,
            rows: (0..fs - 1).map(|_| VecDeque::with_capacity(width + 1)).collect(),
            window: vec![vec![0; fs]; fs],
            x: 0,
            y: 0,
        }
    }

    /// Push the next pixel. Returns the finished window, row-major, and the
    /// coordinates of its top-left corner.
    pub fn push(&mut self, pixel: i16) -> Option<(Vec<i16>, usize, usize)> {
        let fs = self.fs;
        // column[0] is the current row, column[i] is i rows above
        let mut column = vec![0i16; fs];
        column[0] = pixel;
        let mut carry = pixel;
        for (i, fifo) in self.rows.iter_mut().enumerate() {
            fifo.push_back(carry);
            carry = if fifo.len() > self.width {
                fifo.pop_front().unwrap_or(0)
            } else {
                0
            };
            column[i + 1] = carry;
        }
        for (r, row) in self.window.iter_mut().enumerate() {
            row.rotate_left(1);
            row[fs - 1] = column[fs - 1 - r];
        }

        let (x, y) = (self.x, self.y);
        self.x += 1;
        if self.x == self.width {
            self.x = 0;
            self.y += 1;
        }
        if x + 1 >= fs && y + 1 >= fs {
            let flat = self.window.iter().flatten().copied().collect();
            Some((flat, x + 1 - fs, y + 1 - fs))
        } else {
            None
        }
    }
}

fn check(fm: &FeatureMap, fs: usize) -> Result<(), ConvError> {
    if fm.width() < fs || fm.height() < fs {
        return Err(ConvError::ImageSmallerThanFilter {
            width: fm.width(),
            height: fm.height(),
            fs,
        });
    }
    Ok(())
}

/// All valid windows in raster order, produced through [`LineBuffer`].
pub fn extract_windows(fm: &FeatureMap, fs: usize) -> Result<Vec<Vec<i16>>, ConvError> {
    check(fm, fs)?;
    let mut lb = LineBuffer::new(fs, fm.width());
    Ok(fm.pixels().iter().filter_map(|&p| lb.push(p)).map(|(w, _, _)| w).collect())
}

/// Windows by direct indexing, the reference for the line buffer.
pub fn direct_windows(fm: &FeatureMap, fs: usize) -> Result<Vec<Vec<i16>>, ConvError> {
    check(fm, fs)?;
    let mut out = Vec::new();
    for y in 0..=fm.height() - fs {
        for x in 0..=fm.width() - fs {
            let mut w = Vec::with_capacity(fs * fs);
            for dy in 0..fs {
                for dx in 0..fs {
                    w.push(fm.get(x + dx, y + dy).0);
                }
            }
            out.push(w);
        }
    }
    Ok(out)
}
