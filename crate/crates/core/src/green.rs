//! Green's relations from principal ideals, eggbox views, and sandwich matrices.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FMatrix, PrimeField};
use crate::monoid::{MonoidKind, MonoidTable};
use crate::report::Report;
use crate::transform::{Sign, Subset};

type Bits = Vec<u64>;

fn bits_of(m: usize, items: impl Iterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; m.div_ceil(64)];
    for i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

/// Numbers the distinct keys in order of first appearance.
fn classes_by_first_index(keys: &[Bits]) -> Vec<usize> {
    let mut ids: HashMap<&Bits, usize> = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct JClass {
    pub members: Vec<usize>,
    /// R-class ids inside this J-class, by least member.
    pub r_classes: Vec<usize>,
    /// L-class ids inside this J-class, by least member.
    pub l_classes: Vec<usize>,
}

/// Green's R, L, J, H classes of a [`MonoidTable`], numbered by least element index.
#[derive(Debug, Clone, Serialize)]
pub struct GreenData {
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub j_class: Vec<usize>,
    pub h_class: Vec<usize>,
    pub j_classes: Vec<JClass>,
}

impl GreenData {
    /// Computes the relations from ideal equality: `aM = bM`, `Ma = Mb`, `MaM = MbM`.
    pub fn compute(table: &MonoidTable) -> Self {
        let m = table.len();
        let right: Vec<Bits> = (0..m).map(|a| bits_of(m, (0..m).map(|x| table.mul(a, x)))).collect();
        let left: Vec<Bits> = (0..m).map(|a| bits_of(m, (0..m).map(|x| table.mul(x, a)))).collect();
        let two_sided: Vec<Bits> = (0..m)
            .map(|a| {
                let mut acc = vec![0u64; m.div_ceil(64)];
                for x in 0..m {
                    for (w, v) in acc.iter_mut().zip(&right[table.mul(x, a)]) {
                        *w |= v;
                    }
                }
                acc
            })
            .collect();
        let r_class = classes_by_first_index(&right);
        let l_class = classes_by_first_index(&left);
        let j_class = classes_by_first_index(&two_sided);
        let h_keys: Vec<Bits> = (0..m).map(|a| vec![r_class[a] as u64, l_class[a] as u64]).collect();
        let h_class = classes_by_first_index(&h_keys);

        let j_count = j_class.iter().max().map_or(0, |&j| j + 1);
        let mut j_classes: Vec<JClass> =
            (0..j_count).map(|_| JClass { members: vec![], r_classes: vec![], l_classes: vec![] }).collect();
        for a in 0..m {
            let j = &mut j_classes[j_class[a]];
            j.members.push(a);
            if !j.r_classes.contains(&r_class[a]) {
                j.r_classes.push(r_class[a]);
            }
            if !j.l_classes.contains(&l_class[a]) {
                j.l_classes.push(l_class[a]);
            }
        }
        GreenData { r_class, l_class, j_class, h_class, j_classes }
    }

    /// Members of the H-class containing `a`.
    pub fn h_members(&self, a: usize) -> Vec<usize> {
        let h = self.h_class[a];
        (0..self.h_class.len()).filter(|&b| self.h_class[b] == h).collect()
    }

    /// Members of the L-class containing `a`, in canonical order.
    pub fn l_members(&self, a: usize) -> Vec<usize> {
        let l = self.l_class[a];
        (0..self.l_class.len()).filter(|&b| self.l_class[b] == l).collect()
    }
}

/// Confirms that R, L, J, H coincide with equal image, equal kernel set, equal rank,
/// and both, over all pairs.
pub fn verify_green_characterization(table: &MonoidTable, green: &GreenData) -> Result<Report> {
    if !matches!(table.kind(), MonoidKind::OD | MonoidKind::COD | MonoidKind::Op) {
        return Err(Error::UnsupportedKind(table.kind().to_string()));
    }
    let mut report = Report::new(format!("Green characterization for {}_{}", table.kind(), table.degree()));
    let m = table.len();
    let mut first: [Option<String>; 4] = Default::default();
    for a in 0..m {
        let la = table.label(a);
        for b in 0..m {
            let lb = table.label(b);
            let tests = [
                (green.r_class[a] == green.r_class[b], la.image == lb.image),
                (green.l_class[a] == green.l_class[b], la.kernel == lb.kernel),
                (green.j_class[a] == green.j_class[b], la.rank() == lb.rank()),
                (green.h_class[a] == green.h_class[b], la.image == lb.image && la.kernel == lb.kernel),
            ];
            for (slot, (lhs, rhs)) in first.iter_mut().zip(tests) {
                if lhs != rhs && slot.is_none() {
                    *slot = Some(format!("{la} vs {lb}"));
                }
            }
        }
    }
    let names = ["R <=> same image", "L <=> same kernel set", "J <=> same rank", "H <=> same image and kernel set"];
    for (name, ce) in names.into_iter().zip(first) {
        report.check(name, ce.is_none(), ce);
    }
    Ok(report)
}

/// The J-class containing `e_{[k]}`.
pub fn j_class_of_rank(table: &MonoidTable, green: &GreenData, k: usize) -> Result<usize> {
    if k == 0 || k > table.degree() {
        return Err(Error::SizeOutOfRange { n: k, max: table.degree(), what: "J-class rank" });
    }
    let e = table
        .idempotent_of(Subset::initial(k))
        .ok_or_else(|| Error::Structure(format!("no idempotent e_[{k}]")))?;
    Ok(green.j_class[e])
}

#[derive(Debug, Clone, Serialize)]
pub struct EggboxCell {
    pub size: usize,
    pub idempotent: bool,
}

/// Eggbox of `J_k`: rows are R-classes (named by image), columns L-classes (by kernel set).
#[derive(Debug, Clone, Serialize)]
pub struct EggboxView {
    pub k: usize,
    pub r_count: usize,
    pub l_count: usize,
    pub h_size: usize,
    pub row_images: Vec<Subset>,
    pub col_kernels: Vec<Subset>,
    pub cells: Vec<Vec<EggboxCell>>,
    /// Rows whose image contains 1.
    pub ofd_rows: Vec<bool>,
    pub ofd_r_count: usize,
    /// Row-major idempotent bitmask, `"1"` where the cell is a group.
    pub idempotent_mask: Vec<String>,
}

pub fn eggbox(table: &MonoidTable, green: &GreenData, k: usize) -> Result<EggboxView> {
    let j = j_class_of_rank(table, green, k)?;
    let members = &green.j_classes[j].members;
    let mut row_images: Vec<Subset> = Vec::new();
    let mut col_kernels: Vec<Subset> = Vec::new();
    for &a in members {
        let l = table.label(a);
        if !row_images.contains(&l.image) {
            row_images.push(l.image);
        }
        if !col_kernels.contains(&l.kernel) {
            col_kernels.push(l.kernel);
        }
    }
    row_images.sort();
    col_kernels.sort();
    let mut cells: Vec<Vec<EggboxCell>> = row_images
        .iter()
        .map(|_| col_kernels.iter().map(|_| EggboxCell { size: 0, idempotent: false }).collect())
        .collect();
    for &a in members {
        let l = table.label(a);
        let r = row_images.binary_search(&l.image).expect("row");
        let c = col_kernels.binary_search(&l.kernel).expect("col");
        cells[r][c].size += 1;
        cells[r][c].idempotent |= table.is_idempotent(a);
    }
    let h_size = cells.iter().flatten().map(|c| c.size).max().unwrap_or(0);
    let ofd_rows: Vec<bool> = row_images.iter().map(|y| y.contains(1)).collect();
    let idempotent_mask = cells
        .iter()
        .map(|row| row.iter().map(|c| if c.idempotent { '1' } else { '0' }).collect())
        .collect();
    Ok(EggboxView {
        k,
        r_count: green.j_classes[j].r_classes.len(),
        l_count: green.j_classes[j].l_classes.len(),
        h_size,
        ofd_r_count: ofd_rows.iter().filter(|&&b| b).count(),
        row_images,
        col_kernels,
        cells,
        ofd_rows,
        idempotent_mask,
    })
}

impl EggboxView {
    /// Aligned text grid; `*` marks group H-classes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "J_{}: {} R-classes x {} L-classes, |H| = {}, OFD rows = {}",
            self.k, self.r_count, self.l_count, self.h_size, self.ofd_r_count
        );
        let label_w = self.row_images.iter().map(|y| y.to_string().len()).max().unwrap_or(0).max(3);
        let col_w: Vec<usize> = self.col_kernels.iter().map(|x| x.to_string().len().max(3)).collect();
        let _ = write!(out, "{:>w$} ", "", w = label_w + 1);
        for (x, w) in self.col_kernels.iter().zip(&col_w) {
            let _ = write!(out, " {:>w$}", x.to_string(), w = *w);
        }
        out.push('\n');
        for (r, y) in self.row_images.iter().enumerate() {
            let mark = if self.ofd_rows[r] { '>' } else { ' ' };
            let _ = write!(out, "{mark}{:>w$} ", y.to_string(), w = label_w);
            for (c, w) in self.cells[r].iter().zip(&col_w) {
                let cell = format!("{}{}", c.size, if c.idempotent { "*" } else { "" });
                let _ = write!(out, " {:>w$}", cell, w = *w);
            }
            out.push('\n');
        }
        out
    }
}

/// The maximal subgroup `G_J` of a J-class, up to the cases that occur here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Trivial,
    Z2,
}

impl GroupKind {
    pub fn order(self) -> usize {
        match self {
            GroupKind::Trivial => 1,
            GroupKind::Z2 => 2,
        }
    }
}

/// Sandwich matrix of `J_k` over `G_J ∪ {0}` with representatives `a_Y = f^1_{Y,Z}` and
/// `b_X = f^1_{Z,X}` for `Z = [k]`. Entries: `None` is 0, `Some(Plus)` the unit, `Some(Minus)`
/// the generator of `Z_2`.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichMatrix {
    pub kind: MonoidKind,
    pub n: usize,
    pub k: usize,
    pub group: GroupKind,
    pub base: Subset,
    /// Kernel sets `X` (rows), ordered lexicographically.
    pub row_index: Vec<Subset>,
    /// Images `Y` (columns): those containing 1 first, each group lexicographic.
    pub col_index: Vec<Subset>,
    pub entries: Vec<Vec<Option<Sign>>>,
    pub a_reps: Vec<usize>,
    pub b_reps: Vec<usize>,
}

pub fn sandwich_matrix(table: &MonoidTable, green: &GreenData, k: usize) -> Result<SandwichMatrix> {
    let j = j_class_of_rank(table, green, k)?;
    let n = table.degree();
    let base = Subset::initial(k);
    let e_base = table.idempotent_of(base).expect("e_[k]");
    let group = match green.h_members(e_base).len() {
        1 => GroupKind::Trivial,
        2 => GroupKind::Z2,
        other => return Err(Error::Structure(format!("maximal subgroup of order {other} is not handled"))),
    };
    let mut row_index: Vec<Subset> = Vec::new();
    let mut col_index: Vec<Subset> = Vec::new();
    for &a in &green.j_classes[j].members {
        let l = table.label(a);
        if !row_index.contains(&l.kernel) {
            row_index.push(l.kernel);
        }
        if !col_index.contains(&l.image) {
            col_index.push(l.image);
        }
    }
    row_index.sort();
    col_index.sort_by_key(|y| (!y.contains(1), *y));

    let rep = |kernel: Subset, image: Subset| {
        table
            .find(kernel, image, Sign::Plus)
            .ok_or_else(|| Error::Structure(format!("missing representative f^1_{{{image},{kernel}}}")))
    };
    let a_reps = col_index.iter().map(|&y| rep(base, y)).collect::<Result<Vec<_>>>()?;
    let b_reps = row_index.iter().map(|&x| rep(x, base)).collect::<Result<Vec<_>>>()?;
    let h_base = green.h_class[e_base];
    let entries = b_reps
        .iter()
        .map(|&b| {
            a_reps
                .iter()
                .map(|&a| {
                    let p = table.mul(b, a);
                    (green.h_class[p] == h_base).then(|| table.group_sign(p))
                })
                .collect()
        })
        .collect();
    Ok(SandwichMatrix { kind: table.kind(), n, k, group, base, row_index, col_index, entries, a_reps, b_reps })
}

impl SandwichMatrix {
    /// Keeps only the columns whose image satisfies `keep`.
    pub fn restrict_columns(&self, keep: impl Fn(&Subset) -> bool) -> SandwichMatrix {
        let cols: Vec<usize> = (0..self.col_index.len()).filter(|&c| keep(&self.col_index[c])).collect();
        SandwichMatrix {
            col_index: cols.iter().map(|&c| self.col_index[c]).collect(),
            a_reps: cols.iter().map(|&c| self.a_reps[c]).collect(),
            entries: self.entries.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect(),
            ..self.clone()
        }
    }

    /// Image of the matrix under the character of `G_J` sending the generator to `chi_g`.
    pub fn under_character(&self, field: PrimeField, chi_g: Sign) -> FMatrix {
        let rows: Vec<Vec<i64>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        None => 0,
                        Some(Sign::Plus) => 1,
                        Some(Sign::Minus) => chi_g.value(),
                    })
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            return FMatrix::zeros(field, 0, self.col_index.len());
        }
        FMatrix::from_rows(field, &rows)
    }

    /// Checks that `P_{X,X} = 1` and `P_{X,Y} = 0` for `Y` strictly before `X`, over the
    /// block of columns whose image contains 1.
    pub fn is_upper_unitriangular_on_ofd_block(&self) -> bool {
        self.row_index.iter().enumerate().all(|(r, x)| {
            self.col_index.iter().enumerate().filter(|(_, y)| y.contains(1)).all(|(c, y)| {
                let e = self.entries[r][c];
                match y.cmp(x) {
                    std::cmp::Ordering::Equal => e == Some(Sign::Plus),
                    std::cmp::Ordering::Less => e.is_none(),
                    std::cmp::Ordering::Greater => true,
                }
            })
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "P(J_{}) of {}_{}: {} x {} over {:?} ∪ {{0}}", self.k, self.kind, self.n,
            self.row_index.len(), self.col_index.len(), self.group);
        let w = self.col_index.iter().map(|y| y.to_string().len()).max().unwrap_or(1).max(2);
        let lw = self.row_index.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        let _ = write!(out, "{:>lw$} ", "");
        for y in &self.col_index {
            let _ = write!(out, " {:>w$}", y.to_string());
        }
        out.push('\n');
        for (x, row) in self.row_index.iter().zip(&self.entries) {
            let _ = write!(out, "{:>lw$} ", x.to_string());
            for e in row {
                let s = match e {
                    None => "0",
                    Some(Sign::Plus) => "1",
                    Some(Sign::Minus) => "g",
                };
                let _ = write!(out, " {:>w$}", s);
            }
            out.push('\n');
        }
        out
    }
}

/// One character component of the right-invertibility test.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterComponent {
    pub character: &'static str,
    pub rank: usize,
    #[serde(skip)]
    pub matrix: FMatrix,
    #[serde(skip)]
    pub right_inverse: Option<FMatrix>,
    /// `P_chi · R_chi = I` checked by multiplication.
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RightInvertibility {
    pub invertible: bool,
    pub components: Vec<CharacterComponent>,
}

/// Decides right invertibility over `k G_J` by splitting along the characters of `G_J`
/// and requiring full row rank in every component.
pub fn sandwich_right_invertible(p: &SandwichMatrix, field: PrimeField) -> Result<RightInvertibility> {
    let characters: &[(&'static str, Sign)] = match p.group {
        GroupKind::Trivial => &[("trivial", Sign::Plus)],
        GroupKind::Z2 => &[("trivial", Sign::Plus), ("sign", Sign::Minus)],
    };
    let components: Vec<CharacterComponent> = characters
        .iter()
        .map(|&(name, chi)| {
            let m = p.under_character(field, chi);
            let right_inverse = m.right_inverse();
            let verified = right_inverse
                .as_ref()
                .is_some_and(|r| m.mul(r) == FMatrix::identity(field, m.rows()));
            CharacterComponent { character: name, rank: m.rank(), matrix: m, right_inverse, verified }
        })
        .collect();
    Ok(RightInvertibility { invertible: components.iter().all(|c| c.verified), components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Subset {
        Subset::from_increasing(v).unwrap()
    }

    #[test]
    fn od3_class_sizes() {
        let t = MonoidTable::build(MonoidKind::OD, 3).unwrap();
        let g = GreenData::compute(&t);
        let sizes: Vec<usize> = g.j_classes.iter().map(|j| j.members.len()).collect();
        assert_eq!(sizes, vec![3, 12, 2]);
    }

    #[test]
    fn op2_has_two_j_classes() {
        let t = MonoidTable::build(MonoidKind::Op, 2).unwrap();
        assert_eq!(GreenData::compute(&t).j_classes.len(), 2);
    }

    #[test]
    fn cod3_h_classes_have_two_elements() {
        let t = MonoidTable::build(MonoidKind::COD, 3).unwrap();
        let g = GreenData::compute(&t);
        assert!((0..t.len()).all(|a| g.h_members(a).len() == 2));
    }

    #[test]
    fn eggbox_od4_rank2() {
        let t = MonoidTable::build(MonoidKind::OD, 4).unwrap();
        let g = GreenData::compute(&t);
        let e = eggbox(&t, &g, 2).unwrap();
        assert_eq!((e.l_count, e.r_count, e.h_size, e.ofd_r_count), (3, 6, 2, 3));
        let top = eggbox(&t, &g, 1).unwrap();
        assert_eq!((top.l_count, top.r_count, top.h_size), (1, 4, 1));
        assert!(e.to_text().contains("J_2"));
    }

    #[test]
    fn eggbox_od3_top() {
        let t = MonoidTable::build(MonoidKind::OD, 3).unwrap();
        let g = GreenData::compute(&t);
        let e = eggbox(&t, &g, 3).unwrap();
        assert_eq!((e.l_count, e.r_count, e.h_size), (1, 1, 2));
    }

    #[test]
    fn sandwich_od3_rank2() {
        let t = MonoidTable::build(MonoidKind::OD, 3).unwrap();
        let g = GreenData::compute(&t);
        let p = sandwich_matrix(&t, &g, 2).unwrap();
        assert_eq!(p.row_index, vec![s(&[1, 2]), s(&[1, 3])]);
        assert_eq!(p.col_index, vec![s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
        let pattern: Vec<Vec<bool>> = p.entries.iter().map(|r| r.iter().map(Option::is_some).collect()).collect();
        assert_eq!(pattern, vec![vec![true, true, false], vec![false, true, true]]);
        assert_eq!(p.entries[0][0], Some(Sign::Plus));
        assert_eq!(p.entries[1][1], Some(Sign::Plus));
        assert!(p.is_upper_unitriangular_on_ofd_block());
    }

    #[test]
    fn sandwich_extremes() {
        let f = PrimeField::new(7).unwrap();
        for n in 1..=4 {
            let t = MonoidTable::build(MonoidKind::OD, n).unwrap();
            let g = GreenData::compute(&t);
            let bottom = sandwich_matrix(&t, &g, 1).unwrap();
            assert_eq!(bottom.group, GroupKind::Trivial);
            assert_eq!(bottom.entries, vec![vec![Some(Sign::Plus); n]]);
            let top = sandwich_matrix(&t, &g, n).unwrap();
            assert_eq!(top.entries, vec![vec![Some(Sign::Plus)]]);
            assert!(sandwich_right_invertible(&top, f).unwrap().invertible);
        }
    }

    #[test]
    fn truncated_sandwich_is_not_right_invertible() {
        let f = PrimeField::new(7).unwrap();
        let t = MonoidTable::build(MonoidKind::OD, 3).unwrap();
        let g = GreenData::compute(&t);
        let p = sandwich_matrix(&t, &g, 2).unwrap().restrict_columns(|y| !y.contains(1));
        assert_eq!((p.row_index.len(), p.col_index.len()), (2, 1));
        assert!(!sandwich_right_invertible(&p, f).unwrap().invertible);
    }
}
