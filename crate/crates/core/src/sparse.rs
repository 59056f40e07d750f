//! Sparse vectors over `F_p` and a column-kernel routine used by the intertwiner solver.

use std::collections::HashMap;

use crate::field::PrimeField;

/// Sorted `(index, nonzero value)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVec(pub Vec<(u32, u32)>);

impl SparseVec {
    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i as u32, 1)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> Option<(u32, u32)> {
        self.0.first().copied()
    }

    /// Builds from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries(field: PrimeField, mut entries: Vec<(u32, u32)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVec(out)
    }

    /// `self + s * other`
    pub fn axpy(&self, field: PrimeField, s: u32, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i]);
                i += 1;
            } else if take_b {
                out.push((b[j].0, field.mul(s, b[j].1)));
                j += 1;
            } else {
                let v = field.add(a[i].1, field.mul(s, b[j].1));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut v = vec![0; len];
        for &(i, x) in &self.0 {
            v[i as usize] = x;
        }
        v
    }
}

/// Basis of `{c : sum_v c_v * columns[v] = 0}`, each returned as a sparse combination
/// over column indices.
pub fn column_kernel(field: PrimeField, columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut pivots: HashMap<u32, (SparseVec, SparseVec)> = HashMap::new();
    let mut kernel = Vec::new();
    for (v, col) in columns.iter().enumerate() {
        let mut residual = col.clone();
        let mut combo = SparseVec::unit(v);
        while let Some((lead, val)) = residual.lead() {
            match pivots.get(&lead) {
                Some((prow, pcombo)) => {
                    // Pivot rows are normalised to a leading 1.
                    let s = field.neg(val);
                    residual = residual.axpy(field, s, prow);
                    combo = combo.axpy(field, s, pcombo);
                }
                None => break,
            }
        }
        match residual.lead() {
            None => kernel.push(combo),
            Some((lead, val)) => {
                let inv = field.inv(val);
                let scale = |s: &SparseVec| SparseVec(s.0.iter().map(|&(i, x)| (i, field.mul(x, inv))).collect());
                pivots.insert(lead, (scale(&residual), scale(&combo)));
            }
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels() {
        let f = PrimeField::new(7).unwrap();
        let a = SparseVec(vec![(0, 1), (3, 2)]);
        let b = SparseVec(vec![(3, 1), (5, 4)]);
        let c = a.axpy(f, 5, &b);
        assert_eq!(c, SparseVec(vec![(0, 1), (5, 6)]));
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let f = PrimeField::new(7).unwrap();
        let cols = vec![
            SparseVec(vec![(0, 1), (1, 1)]),
            SparseVec(vec![(1, 1)]),
            SparseVec(vec![(0, 1)]),
            SparseVec::default(),
        ];
        let ker = column_kernel(f, &cols);
        assert_eq!(ker.len(), 2);
        for c in &ker {
            let mut acc = SparseVec::default();
            for &(v, x) in &c.0 {
                acc = acc.axpy(f, x, &cols[v as usize]);
            }
            assert!(acc.is_empty());
        }
    }
}
