//! Coloring tables: cell (π1, π2) is colored by the sum subspace π1 + π2.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::qcount::{intersect_count, samesum_count};
use crate::subspace::Subspace;

use super::MacError;

/// Largest table built, in cells.
pub const MAX_CELLS: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct ColorTable {
    /// `colors[i][j]` indexes `palette` for the cell (C1[i], C2[j]).
    pub colors: Vec<Vec<u32>>,
    pub palette: Vec<Subspace>,
    pub distinct: usize,
    pub per_row: Vec<usize>,
    pub per_col: Vec<usize>,
    pub per_row_max: usize,
    pub per_col_max: usize,
}

fn count_distinct(ids: impl Iterator<Item = u32>, scratch: &mut [u32], stamp: u32) -> usize {
    let mut n = 0;
    for id in ids {
        let slot = &mut scratch[id as usize];
        if *slot != stamp {
            *slot = stamp;
            n += 1;
        }
    }
    n
}

pub fn color_table(c1: &[Subspace], c2: &[Subspace]) -> Result<ColorTable, MacError> {
    let cells = c1.len() as u64 * c2.len() as u64;
    if cells > MAX_CELLS {
        return Err(MacError::TooLarge(cells));
    }
    let mut index: HashMap<Subspace, u32> = HashMap::new();
    let mut palette = Vec::new();
    let mut colors = Vec::with_capacity(c1.len());
    for a in c1 {
        let mut row = Vec::with_capacity(c2.len());
        for b in c2 {
            let s = a.sum(b)?;
            let id = *index.entry(s).or_insert_with_key(|k| {
                palette.push(k.clone());
                (palette.len() - 1) as u32
            });
            row.push(id);
        }
        colors.push(row);
    }
    let mut scratch = vec![u32::MAX; palette.len()];
    let mut stamp = 0u32;
    let per_row: Vec<usize> = colors
        .iter()
        .map(|row| {
            stamp += 1;
            count_distinct(row.iter().copied(), &mut scratch, stamp)
        })
        .collect();
    let per_col: Vec<usize> = (0..c2.len())
        .map(|j| {
            stamp += 1;
            count_distinct(colors.iter().map(|r| r[j]), &mut scratch, stamp)
        })
        .collect();
    Ok(ColorTable {
        distinct: palette.len(),
        per_row_max: per_row.iter().copied().max().unwrap_or(0),
        per_col_max: per_col.iter().copied().max().unwrap_or(0),
        colors,
        palette,
        per_row,
        per_col,
    })
}

/// `Σ_{d12} n(d1, d2, d12) / a(d1, d2, d12)`: the number of distinct sums a
/// fixed d1-dimensional row can form with all d2-dimensional columns.
///
/// Each quotient is rounded up, so the value stays an upper bound even if a
/// division were inexact.
pub fn row_color_bound(t: u32, d1: u32, d2: u32, q: u64) -> BigUint {
    let mut total = BigUint::zero();
    for d12 in 0..=d1.min(d2) {
        let n = intersect_count(t, d1, d2, d12, q);
        if n.is_zero() {
            continue;
        }
        let a = samesum_count(t, d1, d2, d12, q);
        total += (&n.exact + &a.exact - 1u32) / &a.exact;
    }
    total
}

/// [`row_color_bound`] as a float, for reporting.
pub fn row_color_bound_f64(t: u32, d1: u32, d2: u32, q: u64) -> f64 {
    row_color_bound(t, d1, d2, q).to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::subspace::enumerate_grassmannian;

    #[test]
    fn single_cell() {
        let f = FieldSpec::from_order(3).unwrap();
        let pi: Vec<Subspace> = enumerate_grassmannian(3, 1, &f).unwrap().take(1).collect();
        let t = color_table(&pi, &pi).unwrap();
        assert_eq!((t.distinct, t.per_row_max, t.per_col_max), (1, 1, 1));
    }

    #[test]
    fn lines_in_three_space() {
        let f = FieldSpec::from_order(2).unwrap();
        let lines: Vec<Subspace> = enumerate_grassmannian(3, 1, &f).unwrap().collect();
        assert_eq!(lines.len(), 7);
        let t = color_table(&lines, &lines).unwrap();
        assert!(t.per_row.iter().all(|&c| c == 4));
        assert!(t.per_col.iter().all(|&c| c == 4));
        // 7 lines plus 7 planes.
        assert_eq!(t.distinct, 14);
        assert_eq!(row_color_bound(3, 1, 1, 2), BigUint::from(4u32));
    }

    #[test]
    fn cell_colors_agree_with_sums() {
        let f = FieldSpec::from_order(2).unwrap();
        let c1: Vec<Subspace> = enumerate_grassmannian(4, 1, &f).unwrap().collect();
        let c2: Vec<Subspace> = enumerate_grassmannian(4, 2, &f).unwrap().collect();
        let t = color_table(&c1, &c2).unwrap();
        for (i, a) in c1.iter().enumerate() {
            for (j, b) in c2.iter().enumerate() {
                assert_eq!(t.palette[t.colors[i][j] as usize], a.sum(b).unwrap());
            }
        }
        let bound = row_color_bound(4, 1, 2, 2).to_usize().unwrap();
        assert_eq!(t.per_row_max, bound);
    }

    #[test]
    fn size_guard() {
        let f = FieldSpec::from_order(2).unwrap();
        let one: Vec<Subspace> = enumerate_grassmannian(2, 1, &f).unwrap().take(1).collect();
        let many = vec![one[0].clone(); (MAX_CELLS + 1) as usize];
        assert!(matches!(color_table(&many, &one), Err(MacError::TooLarge(_))));
    }
}
