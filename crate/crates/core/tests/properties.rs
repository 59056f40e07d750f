use monoidlab::schutz::{intertwining_counterexample, ModuleFamily};
use monoidlab::transform::{analyze, canonical_function, MonotoneClass};
use monoidlab::{FMatrix, MonoidKind, MonoidTable, PrimeField, Sign, Subset};
use proptest::prelude::*;

fn f7() -> PrimeField {
    PrimeField::new(7).unwrap()
}

fn matrix() -> impl Strategy<Value = FMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        // Small residues make rank deficiency common.
        proptest::collection::vec(prop_oneof![Just(0u32), 0u32..7], r * c)
            .prop_map(move |data| FMatrix::from_residues(f7(), r, c, data))
    })
}

/// A subset of `[n]` from a bitmask, optionally forced to contain 1.
fn subset(n: usize, mask: u16, with_one: bool) -> Subset {
    let mut s: Vec<usize> = (1..=n).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
    if with_one && !s.contains(&1) {
        s.insert(0, 1);
    }
    if s.is_empty() {
        s.push(1);
    }
    Subset::from_increasing(&s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_of_transpose(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn reduce_is_idempotent(m in matrix()) {
        let once = m.reduce();
        let twice = once.rref.reduce();
        prop_assert_eq!(&once.rref, &twice.rref);
        prop_assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn right_inverse_iff_full_row_rank(m in matrix()) {
        match m.right_inverse() {
            Some(r) => {
                prop_assert_eq!(m.rank(), m.rows());
                prop_assert_eq!(m.mul(&r), FMatrix::identity(f7(), m.rows()));
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn nullspace_is_kernel(m in matrix()) {
        let ns = m.nullspace();
        prop_assert_eq!(ns.len(), m.cols() - m.rank());
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        if !ns.is_empty() {
            let basis = FMatrix::from_columns(f7(), m.cols(), &ns);
            prop_assert_eq!(basis.rank(), ns.len());
        }
    }

    #[test]
    fn canonical_round_trip(n in 1usize..=5, xm in any::<u16>(), ym in any::<u16>(), minus in any::<bool>()) {
        let x = subset(n, xm, true);
        // Trim or pad the image to |X| elements.
        let mut y: Vec<usize> = subset(n, ym, false).elements();
        let mut next = 1;
        while y.len() < x.len() {
            if !y.contains(&next) {
                y.push(next);
            }
            next += 1;
        }
        y.sort_unstable();
        y.truncate(x.len());
        let y = Subset::from_increasing(&y).unwrap();
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let t = canonical_function(n, y, x, sign).unwrap();
        let a = analyze(&t);
        prop_assert_eq!(a.kernel_set, Some(x));
        prop_assert_eq!(a.image, Some(y));
        let want = match (x.len(), sign) {
            (1, _) => MonotoneClass::Both,
            (_, Sign::Plus) => MonotoneClass::Preserving,
            (_, Sign::Minus) => MonotoneClass::Reversing,
        };
        prop_assert_eq!(a.class, want);
    }

    #[test]
    fn field_laws(a in 0u32..10007, b in 0u32..10007, c in 1u32..10007) {
        let f = PrimeField::new(10007).unwrap();
        prop_assert_eq!(f.mul(c, f.inv(c)), 1);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.from_i64(f.to_signed(a)), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn module_axiom_on_random_pairs(cod in any::<bool>(), xm in any::<u16>(), s in any::<usize>(), t in any::<usize>()) {
        let kind = if cod { MonoidKind::COD } else { MonoidKind::OD };
        let fam = ModuleFamily::build(kind, 5).unwrap();
        let table: &MonoidTable = fam.table();
        let (s, t) = (s % table.len(), t % table.len());
        let m = fam.module(subset(5, xm, true)).unwrap();
        let st = table.mul(s, t);
        let f = f7();
        prop_assert_eq!(m.action_matrix(s, f).mul(&m.action_matrix(t, f)), m.action_matrix(st, f));
    }

    #[test]
    fn random_hom_combinations_intertwine(
        cod in any::<bool>(), ym in any::<u16>(), xm in any::<u16>(), coeffs in proptest::collection::vec(0u32..7, 4)
    ) {
        let kind = if cod { MonoidKind::COD } else { MonoidKind::OD };
        let fam = ModuleFamily::build(kind, 4).unwrap();
        let (y, x) = (subset(4, ym, true), subset(4, xm, true));
        let f = f7();
        let hom = fam.hom_space(y, x, f).unwrap();
        let (src, dst) = (fam.module(y).unwrap(), fam.module(x).unwrap());
        let mut t = FMatrix::zeros(f, dst.dim(), src.dim());
        for (b, &c) in hom.basis.iter().zip(&coeffs) {
            t = t.add(&b.scale(c));
        }
        prop_assert!(intertwining_counterexample(fam.table(), &t, dst, src).is_none());
        let independent = FMatrix::from_columns(f, dst.dim() * src.dim(),
            &hom.basis.iter().map(|b| b.entries().to_vec()).collect::<Vec<_>>());
        prop_assert_eq!(independent.rank(), hom.dim());
    }
}
