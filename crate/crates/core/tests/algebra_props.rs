use icleak_core::instance::{MessageSet, Receiver};
use icleak_core::{AdversarySplit, Instance, MatrixGF, PrimeField};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = MatrixGF> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 0usize..6, 0usize..7).prop_flat_map(|(q, rows, cols)| {
        prop::collection::vec(0..q as u32, rows * cols).prop_map(move |data| {
            MatrixGF::new(PrimeField::new(q).unwrap(), rows, cols, data).unwrap()
        })
    })
}

/// Textbook elimination over GF(2) on bit rows, counting pivots.
fn gf2_pivots(m: &MatrixGF) -> usize {
    let mut rows: Vec<u64> = m
        .row_iter()
        .map(|r| r.iter().enumerate().fold(0u64, |acc, (c, &v)| acc | (v as u64) << c))
        .collect();
    let mut pivots = 0;
    for col in 0..m.cols() {
        let Some(p) = (pivots..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else { continue };
        rows.swap(pivots, p);
        for r in 0..rows.len() {
            if r != pivots && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[pivots];
            }
        }
        pivots += 1;
    }
    pivots
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (1usize..6).prop_flat_map(|n| {
        let receiver = (prop::collection::btree_set(0..n, 0..=2), prop::collection::btree_set(0..n, 0..n)).prop_map(
            |(wants, has): (MessageSet, MessageSet)| {
                let has = has.difference(&wants).copied().collect::<MessageSet>();
                Receiver { wants, has }
            },
        );
        prop::collection::vec(receiver, 0..6)
            .prop_map(move |rs| Instance::new(PrimeField::binary(), n, rs).unwrap())
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in matrix_strategy()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn column_selection_never_raises_rank(m in matrix_strategy(), pick in prop::collection::vec(any::<prop::sample::Index>(), 0..8)) {
        prop_assume!(m.cols() > 0);
        let idx: Vec<usize> = pick.iter().map(|i| i.index(m.cols())).collect();
        prop_assert!(m.select_columns(&idx).unwrap().rank() <= m.rank());
    }

    #[test]
    fn row_basis_spans_the_rows(m in matrix_strategy()) {
        let basis = m.row_basis();
        prop_assert_eq!(basis.rank(), m.rank());
        prop_assert_eq!(basis.rows(), m.rank());
        for row in m.row_iter() {
            prop_assert!(basis.in_row_space(row).unwrap());
        }
    }

    #[test]
    fn gf2_rank_matches_pivot_count(rows in 0usize..9, cols in 0usize..9, bits in prop::collection::vec(0u32..2, 81)) {
        let m = MatrixGF::new(PrimeField::binary(), rows, cols, bits[..rows * cols].to_vec()).unwrap();
        prop_assert_eq!(m.rank(), gf2_pivots(&m));
    }

    #[test]
    fn normalization_is_idempotent(inst in instance_strategy()) {
        let once = inst.normalize_singleton_wants();
        prop_assert!(once.is_singleton_normalized());
        prop_assert_eq!(once.normalize_singleton_wants(), once);
    }

    #[test]
    fn nested_induction_matches_intersection(
        inst in instance_strategy(),
        a in prop::collection::btree_set(0usize..5, 0..5),
        b in prop::collection::btree_set(0usize..5, 0..5),
    ) {
        let n = inst.message_count();
        let a: MessageSet = a.into_iter().filter(|&j| j < n).collect();
        let b: MessageSet = b.into_iter().filter(|&j| j < n).collect();
        let both: MessageSet = a.intersection(&b).copied().collect();
        let direct = inst.induce_subproblem(&both).unwrap();

        let outer = inst.induce_subproblem(&a).unwrap();
        // b ∩ a in the re-indexed labels of the outer subproblem
        let inner_subset: MessageSet = outer.original.iter().enumerate().filter(|(_, j)| b.contains(j)).map(|(i, _)| i).collect();
        let nested = outer.instance.induce_subproblem(&inner_subset).unwrap();
        let composed: Vec<usize> = nested.original.iter().map(|&i| outer.original[i]).collect();
        prop_assert_eq!(&composed, &direct.original);
        prop_assert_eq!(nested.instance, direct.instance);
    }

    #[test]
    fn adversary_receiver_only_appends(inst in instance_strategy(), seed in 0u64..1000) {
        let n = inst.message_count();
        let sensitive: MessageSet = [seed as usize % n].into();
        let rest: MessageSet = (0..n).filter(|j| !sensitive.contains(j)).collect();
        let (known, nonsensitive): (MessageSet, MessageSet) = rest.iter().partition(|&&j| (seed >> j) & 1 == 1);
        let split = AdversarySplit::new(n, known, sensitive, nonsensitive).unwrap();
        let ext = inst.extend_with_adversary_receiver(&split);
        prop_assert_eq!(ext.receiver_count(), inst.receiver_count() + 1);
        prop_assert_eq!(&ext.receivers()[..inst.receiver_count()], inst.receivers());
    }
}
