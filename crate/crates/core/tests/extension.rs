use std::sync::Arc;

use nilspace::abelian::{make_group, FinAbGroup, GroupExtension};
use nilspace::bundle::{sim_classes, structure_group};
use nilspace::cubes::faces_of_codim;
use nilspace::extension::{
    arrow_space, cube_action, find_section, find_section_structured, is_integer_dk_cube,
    is_translation, lift_translation, lift_translation_split, trans_group, translation_bundle,
    translation_violation, verify_extension, verify_extension_with_action, Extension,
};
use nilspace::space::{
    dk_structure, enumerate_cubes, is_morphism, product, Cubespace, GroupSpace, OracleSpace, Space,
};
use nilspace::{Error, Limits};

fn g(orders: &[i64]) -> FinAbGroup {
    make_group(orders).unwrap()
}

fn dk(orders: &[i64], k: usize) -> Space {
    dk_structure(&g(orders), k).unwrap()
}

fn twisted_z4() -> Space {
    Arc::new(GroupSpace::filtered(g(&[4]), vec![vec![1, 2, 4]]).unwrap())
}

fn shift(n: usize, by: usize) -> Vec<usize> {
    (0..n).map(|x| (x + by) % n).collect()
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&y| a[y]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

/// Translation check straight from the face-action condition, vertex by vertex.
fn face_oracle(alpha: &[usize], space: &dyn Cubespace, i: usize, upto: usize) -> bool {
    let lim = Limits::default();
    (i..=upto).all(|n| {
        let cubes = enumerate_cubes(space, n, &lim).unwrap();
        faces_of_codim(n, i).iter().all(|face| {
            cubes.iter().all(|c| {
                let moved: Vec<usize> = (0..c.len())
                    .map(|v| {
                        if face.contains(v as u32) {
                            alpha[c[v]]
                        } else {
                            c[v]
                        }
                    })
                    .collect();
                space.contains(&moved)
            })
        })
    })
}

/// All maps `N → M` over the identity of `N` that preserve cubes up to `n`.
fn brute_sections(ext: &Extension, n: usize) -> Vec<Vec<usize>> {
    let lim = Limits::default();
    let mut out = Vec::new();
    let mut idx = vec![0usize; ext.base.size()];
    loop {
        let m: Vec<usize> = idx
            .iter()
            .enumerate()
            .map(|(u, &t)| ext.fibers[u][t])
            .collect();
        if is_morphism(&m, ext.base.as_ref(), ext.total.as_ref(), n, &lim).unwrap() {
            out.push(m);
        }
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < ext.fibers[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn z4_over_z2(k: usize) -> Extension {
    let lim = Limits::default();
    verify_extension(
        dk(&[4], k),
        dk(&[2], k),
        &g(&[2]),
        &[0, 1, 0, 1],
        k,
        3,
        &lim,
    )
    .unwrap()
}

#[test]
fn trivial_extensions_pass_full_verification() {
    let lim = Limits::with_candidates(1 << 28);
    let bases = [
        dk(&[2], 1),
        dk(&[3], 1),
        dk(&[2], 2),
        dk(&[2, 2], 1),
        product(dk(&[2], 1), dk(&[2], 2)),
    ];
    for base in &bases {
        for (orders, k) in [(&[2][..], 1), (&[3], 1), (&[2], 2), (&[4], 1), (&[2, 2], 2)] {
            let ext = Extension::trivial(base.clone(), &g(orders), k, k + 1, &lim).unwrap();
            let checked = verify_extension_with_action(
                ext.total.clone(),
                ext.base.clone(),
                &ext.group,
                &ext.proj,
                ext.action.clone(),
                k,
                k + 1,
                &lim,
            )
            .unwrap();
            assert_eq!(checked.fibers, ext.fibers);
            let plain = verify_extension(
                ext.total.clone(),
                ext.base.clone(),
                &ext.group,
                &ext.proj,
                k,
                k + 1,
                &lim,
            );
            assert!(plain.is_ok(), "{base:?} × D_{k}({orders:?}): {plain:?}");
        }
    }
}

#[test]
fn extension_examples() {
    let lim = Limits::default();
    let ext = Extension::trivial(dk(&[3], 1), &g(&[2]), 2, 3, &lim).unwrap();
    assert_eq!(ext.total.size(), 6);
    assert_eq!(ext.degree, 2);

    let ext = z4_over_z2(1);
    assert_eq!(ext.fibers, vec![vec![0, 2], vec![1, 3]]);
    assert_eq!(ext.action[1], vec![2, 3, 0, 1]);

    let groups = GroupExtension::componentwise(&g(&[4]), &g(&[2])).unwrap();
    let ext = Extension::of_groups(&groups, 2, 3, &lim).unwrap();
    assert_eq!(ext.group.order(), 2);
}

#[test]
fn extension_failures() {
    let lim = Limits::default();
    // nothing but constant cubes upstairs: the base edge 0 → 1 has no lift
    let rigid: Space = Arc::new(OracleSpace::constant_cubes(4));
    let shifted = vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]];
    match verify_extension_with_action(
        rigid.clone(),
        dk(&[2], 1),
        &g(&[2]),
        &[0, 1, 0, 1],
        shifted,
        1,
        2,
        &lim,
    ) {
        Err(Error::StructuralFailure { witness, .. }) => assert_eq!(witness, vec![0, 1]),
        other => panic!("expected a structural failure, got {other:?}"),
    }
    assert!(matches!(
        verify_extension(rigid, dk(&[2], 1), &g(&[2]), &[0, 1, 0, 1], 1, 2, &lim),
        Err(Error::StructuralFailure { .. })
    ));
    // fibers of the wrong size
    assert!(matches!(
        verify_extension(
            dk(&[4], 1),
            dk(&[2], 1),
            &g(&[2]),
            &[0, 0, 0, 1],
            1,
            2,
            &lim
        ),
        Err(Error::InvalidArgument(_))
    ));
    // D_1(Z_4) is not a degree-2 extension of D_1(Z_2): lifts differ by non-constant steps
    assert!(verify_extension(
        dk(&[4], 1),
        dk(&[2], 1),
        &g(&[2]),
        &[0, 1, 0, 1],
        2,
        3,
        &lim
    )
    .is_err());
}

#[test]
fn sections_match_brute_force() {
    let lim = Limits::default();
    let cases = [
        Extension::trivial(dk(&[2], 1), &g(&[2]), 1, 3, &lim).unwrap(),
        Extension::trivial(dk(&[3], 1), &g(&[2]), 2, 3, &lim).unwrap(),
        z4_over_z2(1),
        z4_over_z2(2),
        verify_extension(
            twisted_z4(),
            dk(&[2], 1),
            &g(&[2]),
            &[0, 1, 0, 1],
            2,
            3,
            &lim,
        )
        .unwrap(),
    ];
    for ext in &cases {
        let all = brute_sections(ext, ext.n_checked);
        let found = find_section(ext, &lim).unwrap();
        assert_eq!(found.section.as_ref(), all.first());
        assert_eq!(
            found.candidates,
            (ext.group.order()).pow(ext.base.size() as u32)
        );
    }
}

#[test]
fn section_examples() {
    let lim = Limits::default();
    let ext = Extension::trivial(dk(&[3], 1), &g(&[2]), 1, 3, &lim).unwrap();
    let m = find_section(&ext, &lim).unwrap().section.unwrap();
    let prod = nilspace::space::ProductSpace::new(dk(&[3], 1), dk(&[2], 1));
    assert_eq!(m, (0..3).map(|x| prod.pair(x, 0)).collect::<Vec<_>>());

    let none = find_section(&z4_over_z2(1), &lim).unwrap();
    assert_eq!(none.section, None);
    assert_eq!((none.candidates, none.rejected), (4, 4));

    // the twisted degree-2 extension of D_1(Z_2) splits
    let twisted = verify_extension(
        twisted_z4(),
        dk(&[2], 1),
        &g(&[2]),
        &[0, 1, 0, 1],
        2,
        3,
        &lim,
    )
    .unwrap();
    assert_eq!(
        find_section(&twisted, &lim).unwrap().section,
        Some(vec![0, 1])
    );
}

#[test]
fn structured_sections_over_degree_structures() {
    let lim = Limits::default();
    // D_2(Z_4) over D_2(Z_2) does not split: the lift of v1·v2 + v3 is not a cube
    let base = GroupSpace::dk(g(&[2]), 2).unwrap();
    let s = find_section_structured(&z4_over_z2(2), &base, &lim).unwrap();
    assert_eq!((s.mode.as_str(), s.section), ("exhaustive", None));

    let ext = verify_extension(
        twisted_z4(),
        dk(&[2], 1),
        &g(&[2]),
        &[0, 1, 0, 1],
        2,
        3,
        &lim,
    )
    .unwrap();
    let base = GroupSpace::dk(g(&[2]), 1).unwrap();
    let s = find_section_structured(&ext, &base, &lim).unwrap();
    assert_eq!(s.mode, "structured");
    assert!(ext.is_section(s.section.as_ref().unwrap(), &lim).unwrap());

    let base = GroupSpace::dk(g(&[2]), 1).unwrap();
    let s = find_section_structured(&z4_over_z2(1), &base, &lim).unwrap();
    assert_eq!((s.mode.as_str(), s.section), ("exhaustive", None));

    let base = GroupSpace::dk(g(&[2, 2]), 1).unwrap();
    let ext = Extension::trivial(base.clone().into_space(), &g(&[2]), 1, 3, &lim).unwrap();
    let s = find_section_structured(&ext, &base, &lim).unwrap();
    assert!(ext.is_section(s.section.as_ref().unwrap(), &lim).unwrap());
}

#[test]
fn translation_examples() {
    let lim = Limits::default();
    let z3 = dk(&[3], 1);
    assert!(is_translation(&shift(3, 1), z3.as_ref(), 1, 2, &lim).unwrap());
    assert!(is_translation(&shift(4, 1), dk(&[4], 2).as_ref(), 2, 3, &lim).unwrap());
    let doubling = [0, 2, 1];
    let (cube, _face) = translation_violation(&doubling, z3.as_ref(), 1, 2, &lim)
        .unwrap()
        .unwrap();
    assert_eq!(cube.len(), 4);
    assert!(z3.contains(&cube));
    assert!(!face_oracle(&doubling, z3.as_ref(), 1, 2));
    assert!(matches!(
        is_translation(&[0, 0, 1], z3.as_ref(), 1, 2, &lim),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn translation_checks_agree_with_face_oracle() {
    let lim = Limits::default();
    let spaces = [
        dk(&[3], 1),
        dk(&[4], 2),
        twisted_z4(),
        product(dk(&[2], 1), dk(&[2], 2)),
    ];
    for space in &spaces {
        for alpha in permutations(space.size()) {
            for i in 1..=3 {
                assert_eq!(
                    is_translation(&alpha, space.as_ref(), i, 3, &lim).unwrap(),
                    face_oracle(&alpha, space.as_ref(), i, 3),
                    "{alpha:?} i={i}"
                );
            }
        }
    }
}

#[test]
fn translation_groups() {
    let lim = Limits::default();
    let t = trans_group(dk(&[3], 1).as_ref(), 1, 2, &lim).unwrap();
    let mut shifts: Vec<Vec<usize>> = (0..3).map(|a| shift(3, a)).collect();
    shifts.sort();
    assert_eq!(t.elements, shifts);
    assert_eq!(t.bijections_checked, 12);
    assert!(t.closed && t.nested);

    let t = trans_group(dk(&[2], 2).as_ref(), 2, 3, &lim).unwrap();
    assert_eq!(t.elements, vec![vec![0, 1], vec![1, 0]]);

    let t = trans_group(dk(&[2], 1).as_ref(), 2, 3, &lim).unwrap();
    assert_eq!(t.elements, vec![vec![0, 1]]);

    let big: Space = Arc::new(OracleSpace::full(13));
    assert!(matches!(
        trans_group(big.as_ref(), 1, 2, &lim),
        Err(Error::ResourceLimit { .. })
    ));
}

#[test]
fn nilpotency_ladder() {
    let lim = Limits::default();
    for space in [
        product(dk(&[2], 1), dk(&[2], 2)),
        twisted_z4(),
        dk(&[2], 2),
        dk(&[3], 2),
    ] {
        let k = nilspace::bundle::step_of(space.as_ref()).unwrap();
        let levels: Vec<_> = (1..=k + 1)
            .map(|i| trans_group(space.as_ref(), i, k + 1, &lim).unwrap())
            .collect();
        for (i, level) in levels.iter().enumerate() {
            assert!(level.closed && level.nested);
            // raising the check dimension by one changes nothing here
            let wider = trans_group(space.as_ref(), i + 1, k + 2, &lim).unwrap();
            assert_eq!(wider.elements, level.elements);
        }
        assert_eq!(
            levels[k].elements,
            vec![(0..space.size()).collect::<Vec<_>>()]
        );
        for i in 0..k {
            for a in &levels[0].elements {
                for b in &levels[i].elements {
                    let comm = compose(&compose(&inverse(a), &inverse(b)), &compose(a, b));
                    assert!(levels[i + 1].elements.contains(&comm));
                }
            }
        }
    }
}

#[test]
fn extension_actions_are_top_translations() {
    let lim = Limits::default();
    let exts = [
        z4_over_z2(1),
        z4_over_z2(2),
        verify_extension(
            twisted_z4(),
            dk(&[2], 1),
            &g(&[2]),
            &[0, 1, 0, 1],
            2,
            3,
            &lim,
        )
        .unwrap(),
        Extension::trivial(dk(&[2], 1), &g(&[3]), 2, 3, &lim).unwrap(),
    ];
    for ext in &exts {
        for a in &ext.action {
            assert!(face_oracle(
                a,
                ext.total.as_ref(),
                ext.degree,
                ext.degree + 1
            ));
        }
    }
}

#[test]
fn arrow_spaces() {
    let lim = Limits::default();
    let n = dk(&[2], 1);
    let arrow = arrow_space(n.clone(), 1);
    for c in enumerate_cubes(n.as_ref(), 2, &lim).unwrap() {
        let diag: Vec<usize> = c.iter().map(|&x| arrow.pair(x, x)).collect();
        assert!(arrow.contains(&diag));
    }
    // a 1-cube of the arrow space is a 2-cube of N assembled from two edges
    let n2 = dk(&[3], 1);
    let arrow = arrow_space(n2.clone(), 1);
    for x in 0..3 {
        for y in 0..3 {
            let e = [arrow.pair(0, x), arrow.pair(1, y)];
            assert_eq!(arrow.contains(&e), n2.contains(&[0, 1, x, y]));
        }
    }
}

#[test]
fn translation_bundles() {
    let lim = Limits::default();
    let n = dk(&[2], 2);
    let tb = translation_bundle(&[0], &n, 1, 3, &lim).unwrap();
    assert_eq!(tb.pairs, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    assert_eq!(tb.extension.degree, 1);
    assert_eq!(tb.extension.base.size(), 1);
    assert_eq!(tb.extension.group.order(), 2);

    let n = product(dk(&[2], 1), dk(&[2], 2));
    let lower = sim_classes(n.as_ref(), 1).unwrap();
    assert_eq!(lower.len(), 2);
    let tb = translation_bundle(&[1, 0], &n, 1, 3, &lim).unwrap();
    assert_eq!(tb.extension.degree, 1);
    assert!(tb
        .pairs
        .iter()
        .all(|&(x, y)| lower.class_of[x] != lower.class_of[y]));

    assert!(matches!(
        translation_bundle(&[1, 0], &dk(&[2], 1), 1, 3, &lim),
        Err(Error::Unsupported(_))
    ));
    assert!(translation_bundle(&[0, 1], &n, 1, 3, &lim).is_ok());
}

#[test]
fn lifting_translations() {
    let lim = Limits::default();
    let ext = z4_over_z2(1);
    let lift = lift_translation(&ext, &[1, 0], 1, &lim).unwrap();
    assert_eq!(lift.beta, Some(vec![1, 2, 3, 0]));

    for ext in [z4_over_z2(1), z4_over_z2(2)] {
        let id: Vec<usize> = (0..ext.base.size()).collect();
        let lift = lift_translation(&ext, &id, 1, &lim).unwrap();
        assert_eq!(lift.beta, Some((0..ext.total.size()).collect()));
    }

    // through T*: the generator shift of F_1(N) for N = D_1(Z_2) × D_2(Z_2)
    let n = product(dk(&[2], 1), dk(&[2], 2));
    let lower = sim_classes(n.as_ref(), 1).unwrap();
    let beta = lift_translation_split(&[1, 0], &n, 1, 3, &lim)
        .unwrap()
        .unwrap();
    for (x, &bx) in beta.iter().enumerate() {
        assert_eq!(lower.class_of[bx], 1 - lower.class_of[x]);
    }
    assert!(face_oracle(&beta, n.as_ref(), 1, 3));

    // the top structure group elements lift as themselves
    let sg = structure_group(&n, 2).unwrap();
    for a in &sg.action {
        assert!(face_oracle(a, n.as_ref(), 2, 3));
    }
}

#[test]
fn cube_actions() {
    let lim = Limits::default();
    let n = dk(&[4], 2);
    let alpha = shift(4, 1);
    for f in enumerate_cubes(n.as_ref(), 2, &lim)
        .unwrap()
        .into_iter()
        .take(20)
    {
        assert_eq!(cube_action(n.as_ref(), &f, &[0; 4], &alpha, 2).unwrap(), f);
        let shifted: Vec<usize> = f.iter().map(|&x| alpha[x]).collect();
        assert_eq!(
            cube_action(n.as_ref(), &f, &[1; 4], &alpha, 2).unwrap(),
            shifted
        );
        assert_eq!(
            cube_action(n.as_ref(), &f, &[0, 0, 0, -1], &alpha, 2).unwrap()[3],
            (f[3] + 3) % 4
        );
    }
    let z3 = dk(&[3], 1);
    let f = [0, 1, 2, 0];
    for face in faces_of_codim(2, 1) {
        let c: Vec<i64> = (0..4).map(|v| face.contains(v) as i64).collect();
        let by_face: Vec<usize> = (0..4)
            .map(|v| {
                if face.contains(v as u32) {
                    (f[v] + 1) % 3
                } else {
                    f[v]
                }
            })
            .collect();
        assert_eq!(
            cube_action(z3.as_ref(), &f, &c, &shift(3, 1), 1).unwrap(),
            by_face
        );
    }
    assert!(is_integer_dk_cube(&[0, 1, 1, 2], 1));
    assert!(!is_integer_dk_cube(&[0, 0, 0, 1], 1));
    assert!(matches!(
        cube_action(z3.as_ref(), &f, &[0, 0, 0, 1], &shift(3, 1), 1),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        cube_action(z3.as_ref(), &[1, 1, 1, 1], &[0, 1, 1, 2], &[0, 2, 1], 1),
        Err(Error::StructuralFailure { .. })
    ));
}
