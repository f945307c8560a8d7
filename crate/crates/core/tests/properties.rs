use ncclique::clique::extend_clique;
use ncclique::field::{prime_power, FieldSpec};
use ncclique::formulas::{
    extraspecial_bounds_odd, omega_pgl2, omega_psl2, pgl2_partition_counts, suzuki_partition_counts,
};
use ncclique::group::{
    build_extraspecial, build_linear, build_named, ExtraspecialForm, GroupFamily, GroupTable,
    LinearKind, NamedGroup,
};
use ncclique::harness::{build_group, closed_form};
use ncclique::ncgraph::{read_dimacs, write_dimacs_body, BitGraph, NcGraph};
use ncclique::structure::{omega, Analysis, OmegaOptions};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

#[test]
fn partition_identities_up_to_8192() {
    for q in 2..=8192u64 {
        if prime_power(q).is_some() {
            assert!(
                pgl2_partition_counts(q).unwrap().identity_holds(),
                "q = {q}"
            );
        }
    }
    for m in 1..=6 {
        assert!(
            suzuki_partition_counts(m).unwrap().identity_holds(),
            "m = {m}"
        );
    }
}

#[test]
fn exact_closed_forms_match_certificates() {
    let mut families = Vec::new();
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13] {
        families.push(GroupFamily::Linear {
            kind: LinearKind::Psl,
            n: 2,
            q,
        });
    }
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        families.push(GroupFamily::Linear {
            kind: LinearKind::Pgl,
            n: 2,
            q,
        });
    }
    for q in [2u32, 4, 8] {
        families.push(GroupFamily::Linear {
            kind: LinearKind::Sl,
            n: 2,
            q,
        });
        families.push(GroupFamily::Linear {
            kind: LinearKind::Gl,
            n: 2,
            q,
        });
    }
    for n in 1..=3 {
        for form in [ExtraspecialForm::Plus, ExtraspecialForm::Minus] {
            families.push(GroupFamily::Extraspecial { p: 2, n, form });
        }
    }
    for group in [
        NamedGroup::Symmetric(3),
        NamedGroup::Symmetric(4),
        NamedGroup::Symmetric(5),
        NamedGroup::Alternating(4),
        NamedGroup::Alternating(5),
        NamedGroup::Quaternion8,
    ] {
        families.push(GroupFamily::Named { group });
    }
    for fam in families {
        let e = closed_form(&fam).unwrap().expect("closed form");
        assert_eq!(e.lower, e.upper, "{fam}");
        let g = build_group(&fam, false, None).unwrap();
        let r = omega(&g, &OmegaOptions::default()).unwrap();
        assert!(r.certificate.exact, "{fam}");
        assert_eq!(r.certificate.omega, e.lower, "{fam} ({})", e.source);
    }
}

#[test]
fn odd_extraspecial_lower_bounds_hold() {
    for (p, n) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
        let g = build_extraspecial(p, n, ExtraspecialForm::Plus).unwrap();
        let graph = NcGraph::build(&g, false)
            .unwrap()
            .collapse_by_center(&g)
            .unwrap();
        let w = ncclique::clique::max_clique_exact(graph.graph(), &Default::default())
            .unwrap()
            .size;
        let lo = extraspecial_bounds_odd(p as u64, n - 1)
            .unwrap()
            .0
            .to_usize()
            .unwrap();
        assert!(w >= lo, "{p}^(1+{}) omega {w} below {lo}", 2 * n);
        if n == 1 {
            assert_eq!(w, p as usize + 1);
        }
    }
}

/// Seven pairwise non-commuting elements of `3^(1+4)`, checked on the table.
#[test]
fn three_one_plus_four_has_a_seven_clique() {
    let g = build_extraspecial(3, 2, ExtraspecialForm::Plus).unwrap();
    let graph = NcGraph::build(&g, false)
        .unwrap()
        .collapse_by_center(&g)
        .unwrap();
    let res = ncclique::clique::max_clique_exact(graph.graph(), &Default::default()).unwrap();
    let elems = graph.elements_of(&res.members);
    assert_eq!(elems.len(), 7);
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            assert!(!g.commutes(a, b));
        }
    }
    let (_, hi) = extraspecial_bounds_odd(3, 1).unwrap();
    assert!(elems.len() > hi.to_usize().unwrap());
}

/// `SL(2,5)` is an AC-group with 15 + 10 + 6 abelian centralizers.
#[test]
fn sl25_clique_number_exceeds_its_quotient() {
    let g = build_linear(LinearKind::Sl, 2, 5).unwrap();
    let a = Analysis::new(&g);
    assert!(a.is_ac_group());
    assert_eq!(a.centralizer_order_counts(), [(4, 15), (6, 10), (10, 6)]);
    assert_eq!(a.ac_omega().unwrap().omega, 31);
    assert_eq!(omega_psl2(5).unwrap().to_usize(), Some(21));
    assert_eq!(omega_pgl2(5).unwrap().to_usize(), Some(31));
}

fn small_groups() -> Vec<GroupTable> {
    vec![
        build_linear(LinearKind::Pgl, 2, 5).unwrap(),
        build_linear(LinearKind::Sl, 2, 3).unwrap(),
        build_extraspecial(3, 1, ExtraspecialForm::Minus).unwrap(),
        build_named(NamedGroup::Dihedral(6)).unwrap(),
    ]
}

fn ac_groups() -> &'static [(GroupTable, NcGraph, usize)] {
    static GROUPS: OnceLock<Vec<(GroupTable, NcGraph, usize)>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        [
            build_named(NamedGroup::Alternating(5)).unwrap(),
            build_named(NamedGroup::Alternating(4)).unwrap(),
            build_linear(LinearKind::Psl, 2, 8).unwrap(),
            build_linear(LinearKind::Sl, 2, 5).unwrap(),
            build_linear(LinearKind::Sl, 2, 7).unwrap(),
        ]
        .into_iter()
        .map(|g| {
            let a = Analysis::new(&g);
            assert!(a.is_ac_group());
            let w = a.ac_omega().unwrap().omega;
            let graph = NcGraph::build(&g, false).unwrap();
            (g, graph, w)
        })
        .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// In an AC-group every maximal clique is maximum.
    #[test]
    fn ac_group_maximal_cliques_are_maximum(which in 0usize..5, seed in any::<u64>()) {
        let (_, graph, w) = &ac_groups()[which];
        let n = graph.vertices().len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut clique: Vec<usize> = Vec::new();
        for v in order {
            if clique.iter().all(|&u| graph.graph().has_edge(u, v)) {
                clique.push(v);
            }
        }
        prop_assert_eq!(clique.len(), *w);
        let start = (seed % n as u64) as usize;
        prop_assert_eq!(extend_clique(graph.graph(), &[start]).unwrap().len(), *w);
    }

    #[test]
    fn odd_bounds_are_ordered(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 101]), n in 0u32..12) {
        let (lo, hi) = extraspecial_bounds_odd(p, n).unwrap();
        prop_assert!(lo <= hi);
    }

    #[test]
    fn field_axioms_on_random_elements(
        q in prop::sample::select(vec![2u64, 9, 25, 49, 64, 121, 343, 1024, 6561, 65536]),
        a in any::<u32>(), b in any::<u32>(), c in any::<u32>(),
    ) {
        let (p, n) = prime_power(q).unwrap();
        let f = FieldSpec::new(p, n).unwrap();
        let (a, b, c) = (
            f.from_index(a % q as u32),
            f.from_index(b % q as u32),
            f.from_index(c % q as u32),
        );
        let ab = f.mul(&a, &b).unwrap();
        prop_assert_eq!(f.mul(&ab, &c).unwrap(), f.mul(&a, &f.mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c).unwrap()).unwrap(),
            f.add(&ab, &f.mul(&a, &c).unwrap()).unwrap()
        );
        if !a.is_zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()).unwrap(), f.one());
        }
        prop_assert_eq!(f.pow(&a, q).unwrap(), a);
    }

    #[test]
    fn group_axioms_and_central_translation(which in 0usize..4, x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let g = &small_groups()[which];
        let (x, y, z) = (x % g.order(), y % g.order(), z % g.order());
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inverse(x)), g.identity());
        prop_assert_eq!(g.conjugate(g.mul(x, y), z), g.mul(g.conjugate(x, z), g.conjugate(y, z)));
        prop_assert_eq!(g.commutes(x, y), g.centralizer(x).contains(y));
        for c in g.center().iter() {
            prop_assert_eq!(g.commutes(g.mul(x, c), y), g.commutes(x, y));
        }
    }

    #[test]
    fn dimacs_round_trip(n in 1usize..40, edges in prop::collection::vec((0usize..40, 0usize..40), 0..200)) {
        let mut g = BitGraph::new(n);
        for (u, v) in edges {
            let (u, v) = (u % n, v % n);
            if u != v {
                g.add_edge(u, v);
            }
        }
        let mut a = Vec::new();
        write_dimacs_body(&g, &mut a).unwrap();
        let back = read_dimacs(a.as_slice()).unwrap();
        let mut b = Vec::new();
        write_dimacs_body(&back, &mut b).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(a, b);
    }
}
