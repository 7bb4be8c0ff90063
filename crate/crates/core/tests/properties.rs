//! Property checks on the root data, Weyl group, Chevalley basis and the
//! per-cell root tables, over randomly drawn elements and cells.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use flagorbit_core::classify::{canonical_order, dimension_prefilter, enumerate_cells, pair_orbit_count};
use flagorbit_core::grading::{check_gamma, grading_levels};
use flagorbit_core::orbits::{decide_finiteness, Verdict};
use flagorbit_core::rootspace::RootSystemType;
use flagorbit_core::{Context, GammaChoice, LieElement, OrbitProblem, ParabolicSubgroup, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn f4() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(Context::f4)
}

fn triples() -> &'static [Vec<ParabolicSubgroup>] {
    static T: OnceLock<Vec<Vec<ParabolicSubgroup>>> = OnceLock::new();
    T.get_or_init(|| dimension_prefilter(f4(), 3))
}

fn levi_set(mask: u8) -> BTreeSet<usize> {
    (0..4).filter(|i| mask >> i & 1 == 1).collect()
}

fn element(terms: &[(usize, i64)]) -> LieElement {
    let mut e = LieElement::zero();
    for &(b, c) in terms {
        e.add_term(b, Q::from_integer(c));
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_elements_permute_roots_isometrically(e in 0usize..1152, a in 0usize..48, b in 0usize..48) {
        let ctx = f4();
        let w = ctx.weyl.get(e);
        let (va, vb) = (ctx.roots.vector(a), ctx.roots.vector(b));
        prop_assert_eq!(w.act(&va), ctx.roots.vector(w.act_root(a)));
        prop_assert_eq!(w.act(&va).dot(&w.act(&vb)), va.dot(&vb));
    }

    #[test]
    fn length_counts_inverted_positive_roots(e in 0usize..1152) {
        let ctx = f4();
        let w = ctx.weyl.get(e);
        let inverted = (0..ctx.roots.num_roots())
            .filter(|&r| ctx.roots.is_positive(r) && !ctx.roots.is_positive(w.act_root(r)))
            .count();
        prop_assert_eq!(inverted, w.length);
        prop_assert_eq!(w.word.len(), w.length);
        prop_assert_eq!(ctx.weyl.from_word(&w.word).unwrap(), e);
    }

    #[test]
    fn rho_image_identifies_the_element(e in 0usize..1152, f in 0usize..1152) {
        let wg = &f4().weyl;
        prop_assert_eq!(wg.element_from_rho_image(&wg.get(e).rho_image).unwrap(), e);
        let ef = wg.multiply(e, f);
        prop_assert_eq!(wg.get(ef).rho_image.clone(), wg.get(e).act(&wg.get(f).rho_image));
        let inv = wg.inverse(e);
        prop_assert_eq!(wg.multiply(e, inv), wg.identity());
        prop_assert_eq!(wg.get(inv).length, wg.get(e).length);
    }

    #[test]
    fn double_cosets_partition_the_group(left in 0u8..16, right in 0u8..16) {
        let wg = &f4().weyl;
        let (l, r) = (levi_set(left), levi_set(right));
        let table = wg.double_cosets(&l, &r);
        prop_assert_eq!(table.coset_sizes.iter().sum::<usize>(), 1152);
        prop_assert_eq!(wg.double_cosets(&r, &l).len(), table.len());
        for &e in &table.representatives {
            let len = wg.get(e).length;
            for &i in &l {
                prop_assert!(wg.get(wg.multiply(wg.simple_reflection(i), e)).length > len);
            }
            for &j in &r {
                prop_assert!(wg.get(wg.multiply(e, wg.simple_reflection(j))).length > len);
            }
        }
        prop_assert!(wg.longest_coset_representative(&table).is_ok());
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(
        x in prop::collection::vec((0usize..52, -2i64..3), 1..4),
        y in prop::collection::vec((0usize..52, -2i64..3), 1..4),
        z in prop::collection::vec((0usize..52, -2i64..3), 1..4),
    ) {
        let lie = &f4().lie;
        let (x, y, z) = (element(&x), element(&y), element(&z));
        let mut anti = lie.bracket(&x, &y);
        anti.add_scaled(&lie.bracket(&y, &x), Q::from_integer(1));
        prop_assert!(anti.is_zero());
        let mut jac = lie.bracket(&x, &lie.bracket(&y, &z));
        jac.add_scaled(&lie.bracket(&y, &lie.bracket(&z, &x)), Q::from_integer(1));
        jac.add_scaled(&lie.bracket(&z, &lie.bracket(&x, &y)), Q::from_integer(1));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn canonical_order_forgets_the_input_order(t in 0usize..1000, perm in 0usize..6) {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let triple = &triples()[t % triples().len()];
        let mut shuffled: Vec<ParabolicSubgroup> = PERMS[perm].iter().map(|&i| triple[i].clone()).collect();
        canonical_order(&mut shuffled);
        prop_assert_eq!(&shuffled, triple);
    }

    #[test]
    fn cell_root_tables_are_consistent(t in 0usize..1000, c in 0usize..100_000) {
        let ctx = f4();
        let rs = &ctx.roots;
        let triple = &triples()[t % triples().len()];
        let (p1, p2, p3) = (&triple[0], &triple[1], &triple[2]);
        let cells = enumerate_cells(ctx, p1, p2, p3);
        let cell = cells[c % cells.len()];
        let prob = OrbitProblem::new(ctx, p1, p2, p3, cell.w, cell.v, cell.x).unwrap();

        // The nilradical of P1 splits into the absorbed roots and the quotient.
        let absorbed: BTreeSet<usize> = prob.n12_roots.iter().chain(&prob.n13_roots).copied().collect();
        prop_assert!(prob.n_roots.iter().all(|r| !absorbed.contains(r)));
        prop_assert_eq!(absorbed.len() + prob.n_roots.len(), p1.nilradical_roots.len());

        // H is closed under brackets and preserves both absorbed subalgebras.
        let m: BTreeSet<usize> = prob.m_roots.iter().copied().collect();
        let n12: BTreeSet<usize> = prob.n12_roots.iter().copied().collect();
        let n13: BTreeSet<usize> = prob.n13_roots.iter().copied().collect();
        for &a in &prob.m_roots {
            for &b in &prob.m_roots {
                if let Some(s) = rs.root_sum(a, b) {
                    prop_assert!(m.contains(&s));
                }
            }
            for &b in &prob.n12_roots {
                if let Some(s) = rs.root_sum(a, b) {
                    prop_assert!(n12.contains(&s));
                }
            }
            for &b in &prob.n13_roots {
                if let Some(s) = rs.root_sum(a, b) {
                    prop_assert!(n13.contains(&s));
                }
            }
        }

        // The default grading satisfies the sign contract and is additive.
        let pieces = grading_levels(ctx, &prob, &GammaChoice::Auto).unwrap();
        prop_assert!(check_gamma(ctx, &prob, &pieces.gamma).is_ok());
        prop_assert!(pieces.n_levels.keys().all(|l| *l > Q::zero()));
        for &a in &prob.m_roots {
            for &b in &prob.n_roots {
                if let Some(s) = rs.root_sum(a, b) {
                    if let Some(ls) = pieces.level_of(s) {
                        prop_assert_eq!(ls, pieces.level_of(a).unwrap() + pieces.level_of(b).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn finiteness_does_not_depend_on_which_parabolic_is_first() {
    let ctx = f4();
    for (labels, expected) in [
        (["C3", "B3", "B3"], Verdict::Finite),
        (["C3", "B3", "C3"], Verdict::Finite),
        (["C3", "C3", "B3"], Verdict::Finite),
        (["B3", "A2(l)xA1(s)", "B3"], Verdict::Infinite),
    ] {
        let ps: Vec<_> = labels.iter().map(|l| ctx.parse_parabolic(l).unwrap()).collect();
        let any_infinite = enumerate_cells(ctx, &ps[0], &ps[1], &ps[2]).iter().any(|c| {
            let prob = OrbitProblem::new(ctx, &ps[0], &ps[1], &ps[2], c.w, c.v, c.x).unwrap();
            decide_finiteness(ctx, &prob).unwrap().outcome == Verdict::Infinite
        });
        let got = if any_infinite { Verdict::Infinite } else { Verdict::Finite };
        assert_eq!(got, expected, "{labels:?}");
    }
}

#[test]
fn pair_orbits_are_double_cosets() {
    let ctx = f4();
    let borel = ctx.parabolic(&[]);
    assert_eq!(pair_orbit_count(ctx, &borel, &borel), 1152);
    let b3 = ctx.parse_parabolic("B3").unwrap();
    let c3 = ctx.parse_parabolic("C3").unwrap();
    assert_eq!(pair_orbit_count(ctx, &b3, &b3), 5);
    assert_eq!(pair_orbit_count(ctx, &b3, &c3), pair_orbit_count(ctx, &c3, &b3));

    let g2 = Context::new(RootSystemType::G2);
    let b = g2.parabolic(&[]);
    assert_eq!(g2.weyl.order(), 12);
    assert_eq!(pair_orbit_count(&g2, &b, &b), 12);
    let p = g2.parabolic(&[0]);
    assert_eq!(pair_orbit_count(&g2, &p, &p), 4);
}
