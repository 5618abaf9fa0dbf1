use proptest::prelude::*;
use simplicia::bistellar::{apply_move, randomize, replay, valid_moves};
use simplicia::generators::{boundary_simplex, cross_polytope, cyclic_polytope_boundary, stacked_sphere};
use simplicia::invariants::{euler_characteristic, hg_vectors, homology, is_orientable, smith_normal_form, IntegerMatrix};
use simplicia::slicing::{ns_triangulation, slicing, VertexPartition};
use simplicia::store::{self, export, import_topaz, ComplexDocument, ExportFormat, Predicate, Query};
use simplicia::Complex;

fn sphere_strategy() -> impl Strategy<Value = Complex> {
    prop_oneof![
        (2usize..=5).prop_map(|d| boundary_simplex(d).unwrap()),
        (2usize..=4).prop_map(|d| cross_polytope(d).unwrap()),
        (6usize..=11).prop_map(|n| cyclic_polytope_boundary(4, n).unwrap()),
        (2usize..=4, 0usize..8, any::<u64>()).prop_map(|(d, extra, seed)| stacked_sphere(d, d + 2 + extra, seed).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moves_preserve_invariants(c in sphere_strategy(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..12)) {
        let h = homology(&c);
        let chi = euler_characteristic(&c);
        let mut cur = c.clone();
        for pick in picks {
            let moves = valid_moves(&cur, None).unwrap();
            prop_assume!(!moves.is_empty());
            let m = pick.get(&moves);
            let next = apply_move(&cur, m).unwrap();
            prop_assert_eq!(homology(&next), h.clone());
            prop_assert_eq!(euler_characteristic(&next), chi);
            prop_assert!(is_orientable(&next).unwrap());
            prop_assert!(next.structural_flags().is_closed_pseudomanifold());
            prop_assert_eq!(apply_move(&next, &m.inverse(&cur)).unwrap(), cur.clone());
            cur = next;
        }
    }

    #[test]
    fn randomize_log_replays(c in sphere_strategy(), n in 0usize..40, seed in any::<u64>()) {
        let r = randomize(&c, n, seed).unwrap();
        prop_assert_eq!(replay(&c, &r.moves).unwrap(), r.complex.clone());
        prop_assert_eq!(homology(&r.complex), homology(&c));
    }

    #[test]
    fn dehn_sommerville(c in sphere_strategy()) {
        let h = hg_vectors(&c).unwrap().h;
        let rev: Vec<i64> = h.iter().rev().copied().collect();
        prop_assert_eq!(h, rev);
    }

    #[test]
    fn snf_factors_divide(rows in prop::collection::vec(prop::collection::vec(-20i64..=20, 5), 1..7)) {
        let snf = smith_normal_form(&IntegerMatrix::from_dense(&rows));
        prop_assert_eq!(snf.invariant_factors.len(), snf.rank);
        prop_assert!(snf.rank <= rows.len().min(5));
        for w in snf.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]) == 0.into());
        }
        let t = smith_normal_form(&IntegerMatrix::from_dense(&rows).transpose());
        prop_assert_eq!(t, snf);
    }

    #[test]
    fn json_round_trip(c in sphere_strategy()) {
        store::fill_cache(&c);
        let doc = ComplexDocument::from_complex(&c);
        let back = ComplexDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        let rebuilt = back.to_complex().unwrap();
        prop_assert_eq!(&rebuilt, &c);
        prop_assert!(store::cache_mismatches(&rebuilt).is_empty());
    }

    #[test]
    fn topaz_round_trip(c in sphere_strategy()) {
        prop_assert_eq!(import_topaz(&export(&c, ExportFormat::Topaz)).unwrap(), c);
    }

    #[test]
    fn slicing_euler_characteristic(n in 6usize..=11, mask in any::<u16>()) {
        let c = cyclic_polytope_boundary(4, n).unwrap();
        let side_a: Vec<u32> = (1..=n as u32).filter(|v| mask & (1 << (v - 1)) != 0).collect();
        prop_assume!(!side_a.is_empty() && side_a.len() < n);
        let p = VertexPartition::complement(&c, side_a).unwrap();
        let ns = slicing(&c, &p).unwrap();
        let t = ns_triangulation(&ns);
        prop_assert_eq!(euler_characteristic(&t), ns.euler_characteristic());
        let f = ns.f_vector();
        prop_assert_eq!(t.f_vector(), vec![f[0], f[1] + f[3], f[2] + 2 * f[3]]);
        prop_assert!(t.structural_flags().is_closed_pseudomanifold());
    }

    #[test]
    fn query_parsing_never_panics(s in "\\PC{0,40}") {
        let _ = Query::parse(&s);
        let _ = Predicate::parse(&s);
    }
}
