//! Whole-pipeline runs: one function per front-end command, each returning a
//! serializable result with a [`Report`].

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::Quiver;
use crate::covering::{opn_quiver_check, verify_product_decomposition, Decomposition, StraightLineCheck};
use crate::error::{Error, Result};
use crate::field::{FMatrix, PrimeField};
use crate::green::{
    eggbox, j_class_of_rank, sandwich_matrix, sandwich_right_invertible, verify_green_characterization, EggboxView,
    GreenData, GroupKind, SandwichMatrix,
};
use crate::monoid::{check_phi_isomorphism, check_psi_quotient, enumerate_elements, Limits, MonoidKind, MonoidTable};
use crate::report::Report;
use crate::schutz::{verify_hom_lemmas, HomDimTable, ModuleFamily};
use crate::skeleton::{analyze_quiver, verify_relations, AlgebraKind, CategoryAlgebra, QuiverAnalysis};
use crate::transform::Transformation;

/// Largest degree for which `n^n` maps are scanned directly.
pub const BRUTE_FORCE_MAX: usize = 8;

/// Default cap for the product decomposition; `extended` or `MONOIDLAB_MAX_N` lifts it
/// to the table cap.
pub const DECOMPOSITION_MAX: usize = 5;

fn decomposition_cap(extended: bool) -> usize {
    let limits = Limits::from_env();
    if extended || std::env::var(crate::monoid::MAX_N_ENV).is_ok() {
        limits.tables
    } else {
        DECOMPOSITION_MAX.min(limits.tables)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Counts order-preserving maps and maps that preserve or reverse order among all
/// `n^n` self-maps of `[n]`.
pub fn brute_force_counts(n: usize) -> Result<(usize, usize)> {
    if n == 0 || n > BRUTE_FORCE_MAX {
        return Err(Error::SizeOutOfRange { n, max: BRUTE_FORCE_MAX, what: "brute-force scan" });
    }
    let mut images = vec![1u8; n];
    let (mut op, mut od) = (0, 0);
    loop {
        let t = Transformation::new(images.clone())?;
        let up = t.is_order_preserving();
        if up {
            op += 1;
        }
        if up || t.is_order_reversing() {
            od += 1;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok((op, od));
            }
            i -= 1;
            if (images[i] as usize) < n {
                images[i] += 1;
                break;
            }
            images[i] = 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SizesOutput {
    pub monoid: MonoidKind,
    pub n: usize,
    pub size: usize,
    pub op: usize,
    pub od: usize,
    pub cod: usize,
    /// `C(2n-1, n)`.
    pub op_binomial: usize,
    pub op_brute_force: Option<usize>,
    pub od_brute_force: Option<usize>,
    pub report: Report,
}

impl SizesOutput {
    pub fn to_text(&self) -> String {
        let mut out = format!("|{}_{}| = {}\n", self.monoid, self.n, self.size);
        let _ = writeln!(out, "|Op_{0}| = {1}  |OD_{0}| = {2}  |COD_{0}| = {3}", self.n, self.op, self.od, self.cod);
        let _ = writeln!(out, "C({}, {}) = {}", 2 * self.n - 1, self.n, self.op_binomial);
        if let (Some(a), Some(b)) = (self.op_brute_force, self.od_brute_force) {
            let _ = writeln!(out, "brute force over {}^{} maps: {a} order-preserving, {b} monotone", self.n, self.n);
        }
        out.push_str(&self.report.to_string());
        out
    }
}

/// Element counts of `Op_n`, `OD_n`, `COD_n` and the identities relating them.
pub fn sizes(kind: MonoidKind, n: usize) -> Result<SizesOutput> {
    let op = enumerate_elements(MonoidKind::Op, n)?.len();
    let od = enumerate_elements(MonoidKind::OD, n)?.len();
    let cod = enumerate_elements(MonoidKind::COD, n)?.len();
    let size = match kind {
        MonoidKind::Op => op,
        MonoidKind::OD => od,
        MonoidKind::COD => cod,
        MonoidKind::SemidirectOpZ2 => 2 * op,
    };
    let op_binomial = binomial(2 * n - 1, n);
    let brute = (n <= BRUTE_FORCE_MAX).then(|| brute_force_counts(n)).transpose()?;
    let mut report = Report::new(format!("size identities for n = {n}"));
    report.check("|Op_n| = C(2n-1, n)", op == op_binomial, Some(format!("{op} vs {op_binomial}")));
    report.check("|OD_n| = 2|Op_n| - n", od + n == 2 * op, Some(format!("{od} vs {}", 2 * op - n)));
    report.check("|COD_n| = 2|Op_n|", cod == 2 * op, Some(format!("{cod} vs {}", 2 * op)));
    if let Some((bop, bod)) = brute {
        report.check("|Op_n| matches brute force", op == bop, Some(format!("{op} vs {bop}")));
        report.check("|OD_n| matches brute force", od == bod, Some(format!("{od} vs {bod}")));
    }
    Ok(SizesOutput {
        monoid: kind,
        n,
        size,
        op,
        od,
        cod,
        op_binomial,
        op_brute_force: brute.map(|b| b.0),
        od_brute_force: brute.map(|b| b.1),
        report,
    })
}

fn h_size_expected(kind: MonoidKind, n: usize, k: usize) -> usize {
    match kind {
        MonoidKind::Op => 1,
        MonoidKind::OD if k == 1 || n == 1 => 1,
        MonoidKind::OD | MonoidKind::COD | MonoidKind::SemidirectOpZ2 => 2,
    }
}

/// Green characterization plus eggbox class counts for every `J_k`.
pub fn verify_green(table: &MonoidTable, green: &GreenData) -> Result<Report> {
    let n = table.degree();
    let mut report = verify_green_characterization(table, green)?;
    report.check(
        "J-classes indexed by rank",
        green.j_classes.len() == n,
        Some(format!("{} classes", green.j_classes.len())),
    );
    for k in 1..=n {
        let v = eggbox(table, green, k)?;
        let (want_l, want_r) = (binomial(n - 1, k - 1), binomial(n, k));
        let want_h = h_size_expected(table.kind(), n, k);
        let ok = v.l_count == want_l && v.r_count == want_r && v.h_size == want_h;
        report.check(
            format!("J_{k}: C(n-1,k-1) L-classes, C(n,k) R-classes, |H| = {want_h}"),
            ok,
            Some(format!("{} L, {} R, |H| = {}", v.l_count, v.r_count, v.h_size)),
        );
    }
    Ok(report)
}

/// For every `J_k`: the right-inverse certificate, unitriangularity of the block with
/// `1 ∈ Y`, the choice `a_[k] = b_[k] = e_[k]`, and the idempotent pattern rule.
pub fn verify_sandwiches(table: &MonoidTable, green: &GreenData, field: PrimeField) -> Result<Report> {
    let mut report = Report::new(format!("sandwich matrices of {}_{} over {field}", table.kind(), table.degree()));
    for k in 1..=table.degree() {
        let p = sandwich_matrix(table, green, k)?;
        let inv = sandwich_right_invertible(&p, field)?;
        report.check(
            format!("J_{k}: right invertible over kG_J, certificate verified"),
            inv.invertible,
            Some(inv.components.iter().map(|c| format!("{}: rank {}", c.character, c.rank)).collect::<Vec<_>>().join(", ")),
        );
        report.check(format!("J_{k}: unitriangular on the 1 ∈ Y block"), p.is_upper_unitriangular_on_ofd_block(), None);
        let e = table.idempotent_of(p.base);
        let base_col = p.col_index.iter().position(|&y| y == p.base);
        let base_row = p.row_index.iter().position(|&x| x == p.base);
        let reps_ok = e.is_some()
            && base_col.is_some_and(|c| Some(p.a_reps[c]) == e)
            && base_row.is_some_and(|r| Some(p.b_reps[r]) == e);
        report.check(format!("J_{k}: a_[k] = b_[k] = e_[k]"), reps_ok, None);
        let j = j_class_of_rank(table, green, k)?;
        let mut bad = None;
        for (r, &x) in p.row_index.iter().enumerate() {
            for (c, &y) in p.col_index.iter().enumerate() {
                let cell_has_idempotent = green.j_classes[j].members.iter().any(|&a| {
                    let l = table.label(a);
                    l.kernel == x && l.image == y && table.is_idempotent(a)
                });
                let f = table.find(x, y, crate::transform::Sign::Plus);
                let f_idempotent = f.is_some_and(|f| table.mul(f, f) == f);
                let nonzero = p.entries[r][c].is_some();
                if cell_has_idempotent != f_idempotent || f_idempotent != nonzero {
                    bad.get_or_insert_with(|| format!("X={x} Y={y}"));
                }
            }
        }
        report.check(
            format!("J_{k}: H_(Y,X) has an idempotent iff f∘f = f iff P_(X,Y) ≠ 0"),
            bad.is_none(),
            bad,
        );
    }
    Ok(report)
}

pub fn eggbox_view(kind: MonoidKind, n: usize, k: usize) -> Result<EggboxView> {
    let table = MonoidTable::build(kind, n)?;
    let green = GreenData::compute(&table);
    eggbox(&table, &green, k)
}

/// A right-inverse certificate for one character of `G_J`, entries as signed residues.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateComponent {
    pub character: &'static str,
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
    pub right_inverse: Option<Vec<Vec<i64>>>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichOutput {
    pub prime: u32,
    pub matrix: SandwichMatrix,
    pub right_invertible: bool,
    pub certificate: Vec<CertificateComponent>,
    pub report: Report,
}

fn signed_rows(m: &FMatrix) -> Vec<Vec<i64>> {
    let f = m.field();
    (0..m.rows()).map(|r| m.row(r).iter().map(|&v| f.to_signed(v)).collect()).collect()
}

impl SandwichOutput {
    pub fn to_text(&self) -> String {
        let mut out = self.matrix.to_text();
        let _ = writeln!(out, "right invertible over kG_J (p = {}): {}", self.prime, self.right_invertible);
        for c in &self.certificate {
            let _ = writeln!(out, "character {}: rank {}, verified {}", c.character, c.rank, c.verified);
            if let Some(r) = &c.right_inverse {
                for row in r {
                    let cells: Vec<String> = row.iter().map(i64::to_string).collect();
                    let _ = writeln!(out, "  [{}]", cells.join(" "));
                }
            }
        }
        out.push_str(&self.report.to_string());
        out
    }
}

pub fn sandwich(kind: MonoidKind, n: usize, k: usize, field: PrimeField) -> Result<SandwichOutput> {
    let table = MonoidTable::build(kind, n)?;
    let green = GreenData::compute(&table);
    let matrix = sandwich_matrix(&table, &green, k)?;
    let inv = sandwich_right_invertible(&matrix, field)?;
    let mut report = Report::new(format!("sandwich matrix of J_{k} in {kind}_{n}"));
    report.check("right invertible with verified certificate", inv.invertible, None);
    report.check("unitriangular on the 1 ∈ Y block", matrix.is_upper_unitriangular_on_ofd_block(), None);
    let expected_group = if h_size_expected(kind, n, k) == 2 { GroupKind::Z2 } else { GroupKind::Trivial };
    report.check("maximal subgroup", matrix.group == expected_group, Some(format!("{:?}", matrix.group)));
    let certificate = inv
        .components
        .iter()
        .map(|c| CertificateComponent {
            character: c.character,
            rank: c.rank,
            matrix: signed_rows(&c.matrix),
            right_inverse: c.right_inverse.as_ref().map(signed_rows),
            verified: c.verified,
        })
        .collect();
    Ok(SandwichOutput { prime: field.modulus(), matrix, right_invertible: inv.invertible, certificate, report })
}

fn needs_od_or_cod(kind: MonoidKind, what: &str) -> Result<AlgebraKind> {
    AlgebraKind::from_monoid(kind).map_err(|_| Error::UnsupportedKind(format!("{kind} for {what}; use od or cod")))
}

pub fn homdims(kind: MonoidKind, n: usize, field: PrimeField) -> Result<HomDimTable> {
    needs_od_or_cod(kind, "homdims")?;
    ModuleFamily::build(kind, n)?.hom_dimensions(field)
}

pub fn relations(kind: MonoidKind, n: usize, field: PrimeField) -> Result<Report> {
    let ak = needs_od_or_cod(kind, "relations")?;
    verify_relations(ak, n, field)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuiverOutput {
    pub monoid: MonoidKind,
    pub algebra: String,
    pub n: usize,
    pub prime: u32,
    pub dim: usize,
    pub radical_dim: usize,
    pub rad_square_zero: bool,
    pub quiver: Quiver,
    pub report: Report,
}

impl QuiverOutput {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "quiver of {} (n = {}, dim {}, dim Rad {}, Rad^2 = 0: {})\n",
            self.algebra, self.n, self.dim, self.radical_dim, self.rad_square_zero
        );
        out.push_str(&self.quiver.to_text());
        out.push_str(&self.report.to_string());
        out
    }

    pub fn to_dot(&self) -> String {
        self.quiver.to_dot(&self.algebra)
    }
}

fn require_prime_above(field: PrimeField, dim: usize) -> Result<()> {
    if (field.modulus() as usize) <= dim {
        return Err(Error::TraceFormUnsound { p: field.modulus(), dim });
    }
    Ok(())
}

/// Quiver of the skeleton algebra: `A_n` for `od`, `CA_n` for `cod`, and the skeletal
/// `k_0 D_n` (Morita equivalent to `kOp_n`) for `op`.
pub fn quiver(kind: MonoidKind, n: usize, field: PrimeField) -> Result<QuiverOutput> {
    if kind == MonoidKind::Op {
        let limits = Limits::from_env();
        limits.check(n, limits.tables, "quiver degree")?;
        require_prime_above(field, 2 * n - 1)?;
        let s = opn_quiver_check(n, field)?;
        let dim = 2 * n - 1;
        let radical_dim = dim - s.op_quiver.vertices.len();
        return Ok(QuiverOutput {
            monoid: kind,
            algebra: format!("k0D_{n}"),
            n,
            prime: field.modulus(),
            dim,
            radical_dim,
            rad_square_zero: s.op_quiver.rad_square_zero,
            quiver: s.op_quiver,
            report: s.report,
        });
    }
    let ak = needs_od_or_cod(kind, "quiver")?;
    let alg = CategoryAlgebra::skeleton(ak, n, field)?;
    require_prime_above(field, alg.dim())?;
    let qa: QuiverAnalysis = analyze_quiver(&alg)?;
    Ok(QuiverOutput {
        monoid: kind,
        algebra: format!("{ak}_{n}"),
        n,
        prime: field.modulus(),
        dim: qa.dim,
        radical_dim: qa.radical.dim,
        rad_square_zero: qa.radical.rad_square_zero,
        quiver: qa.quiver,
        report: qa.report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CodDecomposition {
    pub n: usize,
    pub prime: u32,
    pub op_size: usize,
    pub dn_dim: usize,
    pub ca_dim: usize,
    pub g_rank: usize,
    pub op_quiver: Quiver,
    pub cod_quiver: Quiver,
    pub report: Report,
}

impl CodDecomposition {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "kCOD_{0} ≅ kOp_{0} x kOp_{0} over F_{1}: dim k0D_n = {2}, dim CA_n = {3}, rank G = {4}\n",
            self.n, self.prime, self.dn_dim, self.ca_dim, self.g_rank
        );
        out.push_str("skeletal k0D_n quiver:\n");
        out.push_str(&self.op_quiver.to_text());
        out.push_str("CA_n skeleton quiver:\n");
        out.push_str(&self.cod_quiver.to_text());
        out.push_str(&self.report.to_string());
        out
    }
}

/// The product decomposition of `kCOD_n` with the straight-line quiver corollaries and
/// the semidirect product comparison maps.
pub fn cod_decompose(n: usize, field: PrimeField, extended: bool) -> Result<CodDecomposition> {
    let cap = decomposition_cap(extended);
    Limits::from_env().check(n, cap, "product decomposition (extended lifts the cap to the table cap)")?;
    let d: Decomposition = verify_product_decomposition(n, field)?;
    let s: StraightLineCheck = opn_quiver_check(n, field)?;
    let mut report = Report::new(format!("kCOD_{n} decomposition over {field}"));
    report.absorb(d.report);
    report.absorb(s.report);
    report.absorb(check_phi_isomorphism(n)?);
    report.absorb(check_psi_quotient(n)?.0);
    Ok(CodDecomposition {
        n,
        prime: field.modulus(),
        op_size: d.op_size,
        dn_dim: d.dn_dim,
        ca_dim: d.ca_dim,
        g_rank: d.g_rank,
        op_quiver: s.op_quiver,
        cod_quiver: s.cod_quiver,
        report,
    })
}

/// Every check that applies to `kind` at degree `n`. For `cod` above
/// [`DECOMPOSITION_MAX`] the product decomposition runs only when `extended` is set.
pub fn verify_all(kind: MonoidKind, n: usize, field: PrimeField, extended: bool) -> Result<Report> {
    let mut report = Report::new(format!("verify-all {kind}_{n} over {field}"));
    report.absorb(sizes(kind, n)?.report);
    let table = MonoidTable::build(kind, n)?;
    let green = GreenData::compute(&table);
    let mut g = verify_green(&table, &green)?;
    g.title = "green".into();
    report.absorb(g);
    report.absorb(verify_sandwiches(&table, &green, field)?);
    match kind {
        MonoidKind::OD | MonoidKind::COD => {
            let family = ModuleFamily::with_green(table, green)?;
            report.absorb(family.hom_dimensions(field)?.report());
            report.absorb(verify_hom_lemmas(&family, field)?);
            let ak = AlgebraKind::from_monoid(kind)?;
            report.absorb(verify_relations(ak, n, field)?);
            let alg = CategoryAlgebra::from_family(&family, ak, true, field)?;
            report.absorb(analyze_quiver(&alg)?.report);
            if kind == MonoidKind::COD {
                report.absorb(check_phi_isomorphism(n)?);
                report.absorb(check_psi_quotient(n)?.0);
                report.absorb(opn_quiver_check(n, field)?.report);
                if n <= decomposition_cap(extended) {
                    report.absorb(verify_product_decomposition(n, field)?.report);
                } else {
                    report.check(format!("product decomposition skipped for n > {DECOMPOSITION_MAX}"), true, None);
                }
            }
        }
        MonoidKind::Op => report.absorb(opn_quiver_check(n, field)?.report),
        MonoidKind::SemidirectOpZ2 => return Err(Error::UnsupportedKind(kind.to_string())),
    }
    Ok(report)
}
