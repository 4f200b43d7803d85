use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinberg::building::{
    enumerate_isotropic_subspaces, export_triplets, tits_complex, BuildingError, ChainComplex,
    SteinbergModule,
};
use steinberg::exactla::SparseMatrix;
use steinberg::groups::{build_group, vector_from_index};
use steinberg::{Family, GroupKind, PrimeField, Ring, DEFAULT_CAPACITY};

fn kind(f: Family, n: usize, p: u32) -> GroupKind {
    GroupKind::new(f, n, p).unwrap()
}

fn field(p: u32) -> Ring {
    Ring::Prime(PrimeField::new(p).unwrap())
}

#[test]
fn subspace_counts() {
    assert_eq!(
        enumerate_isotropic_subspaces(&kind(Family::GL, 3, 2), 1, DEFAULT_CAPACITY)
            .unwrap()
            .len(),
        7
    );
    assert_eq!(
        enumerate_isotropic_subspaces(&kind(Family::GL, 3, 2), 2, DEFAULT_CAPACITY)
            .unwrap()
            .len(),
        7
    );
    assert_eq!(
        enumerate_isotropic_subspaces(&kind(Family::Sp, 2, 2), 1, DEFAULT_CAPACITY)
            .unwrap()
            .len(),
        15
    );

    // Singular lines of SO_{2,2}(F2): evaluate q on every nonzero vector.
    let k = kind(Family::SOnn, 2, 2);
    let form = k.form();
    let singular = (1..16)
        .filter(|&i| form.quadratic(&vector_from_index(i, 4, 2)) == 0)
        .count();
    let lines = enumerate_isotropic_subspaces(&k, 1, DEFAULT_CAPACITY).unwrap();
    assert_eq!(lines.len(), singular);
    assert_eq!(lines.len(), 9);
}

#[test]
fn isotropic_subspaces_vanish_everywhere() {
    for k in [
        kind(Family::SOnn, 2, 2),
        kind(Family::SOnn, 2, 3),
        kind(Family::SOnn1, 2, 2),
        kind(Family::Sp, 2, 3),
    ] {
        let form = k.form();
        let p = k.p();
        for d in 1..=k.n {
            for s in enumerate_isotropic_subspaces(&k, d, DEFAULT_CAPACITY).unwrap() {
                let basis = s.basis();
                // Every linear combination of the basis is singular and
                // pairwise orthogonal.
                let combos: Vec<Vec<u8>> = (0..(p as usize).pow(d as u32))
                    .map(|idx| {
                        let c = vector_from_index(idx, d, p);
                        (0..k.m())
                            .map(|j| {
                                (0..d)
                                    .map(|i| c[i] as u32 * basis[i][j] as u32)
                                    .sum::<u32>()
                                    % p
                            })
                            .map(|x| x as u8)
                            .collect()
                    })
                    .collect();
                for v in &combos {
                    assert_eq!(form.quadratic(v), 0, "{k}");
                    for w in &combos {
                        assert_eq!(form.bilinear(v, w), 0, "{k}");
                    }
                }
            }
        }
    }
}

#[test]
fn complex_shapes() {
    let c = tits_complex(kind(Family::GL, 2, 2), DEFAULT_CAPACITY).unwrap();
    assert_eq!(c.vertices().len(), 3);
    assert_eq!(c.top_degree(), 0);

    let c = tits_complex(kind(Family::GL, 3, 2), DEFAULT_CAPACITY).unwrap();
    assert_eq!(c.vertices().len(), 14);
    assert_eq!(c.simplices(1).len(), 21);
    assert_eq!(c.top_degree(), 1);

    let c = tits_complex(kind(Family::Sp, 2, 2), DEFAULT_CAPACITY).unwrap();
    let f = PrimeField::new(2).unwrap();
    for ch in c.chambers() {
        let (a, b) = (&c.vertices()[ch[0] as usize], &c.vertices()[ch[1] as usize]);
        assert_eq!((a.dim(), b.dim()), (1, 2));
        assert!(a.is_subspace_of(b, f));
    }
    // 15 isotropic lines, each in 3 isotropic planes.
    assert_eq!(c.chambers().len(), 45);

    // SL and GL share the building.
    let gl = tits_complex(kind(Family::GL, 3, 3), DEFAULT_CAPACITY).unwrap();
    let sl = tits_complex(kind(Family::SL, 3, 3), DEFAULT_CAPACITY).unwrap();
    assert_eq!(gl.chambers(), sl.chambers());
}

#[test]
fn faces_are_present_and_chains_increase() {
    for k in [kind(Family::GL, 4, 2), kind(Family::SOnn1, 2, 3)] {
        let c = tits_complex(k, DEFAULT_CAPACITY).unwrap();
        for d in 0..=c.top_degree() {
            for s in c.simplices(d) {
                assert!(
                    s.windows(2)
                        .all(|w| c.vertices()[w[0] as usize].dim()
                            < c.vertices()[w[1] as usize].dim())
                );
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    assert!(c.simplex_id(d - 1, &face).is_some());
                }
            }
        }
    }
}

#[test]
fn reduced_homology_examples() {
    let c = tits_complex(kind(Family::GL, 2, 2), DEFAULT_CAPACITY)
        .unwrap()
        .chain_complex();
    assert_eq!(c.reduced_homology(0, Ring::Integers).rank, 2);

    let c = tits_complex(kind(Family::GL, 3, 2), DEFAULT_CAPACITY)
        .unwrap()
        .chain_complex();
    let h1 = c.reduced_homology(1, Ring::Integers);
    assert_eq!(h1.rank, 8);
    assert!(h1.torsion.is_empty());
    // Euler characteristic oracle: 14 − 21 = −7 = 1 − 8 for a connected graph.
    assert_eq!(c.dim(0) as i64 - c.dim(1) as i64, 1 - 8);
    assert!(c.reduced_homology(0, Ring::Integers).is_zero());

    // GL_1 has the empty building.
    let c = tits_complex(kind(Family::GL, 1, 3), DEFAULT_CAPACITY)
        .unwrap()
        .chain_complex();
    assert_eq!(c.top_degree(), -1);
    assert_eq!(c.reduced_homology(-1, Ring::Integers).rank, 1);
    assert_eq!(c.reduced_homology(-1, field(2)).rank, 1);
}

#[test]
fn malformed_complexes_are_rejected() {
    let d0 = SparseMatrix::from_triplets(1, 2, &[(0, 0, 1), (0, 1, 1)]);
    let d1 = SparseMatrix::from_triplets(2, 1, &[(0, 0, 1), (1, 0, 1)]);
    assert!(matches!(
        ChainComplex::new(vec![1, 2, 1], vec![d0.clone(), d1]),
        Err(BuildingError::Malformed(_))
    ));
    assert!(matches!(
        ChainComplex::new(vec![1, 3], vec![d0.clone()]),
        Err(BuildingError::Malformed(_))
    ));
    let d1 = SparseMatrix::from_triplets(2, 1, &[(0, 0, 1), (1, 0, -1)]);
    let ok = ChainComplex::new(vec![1, 2, 1], vec![d0, d1]).unwrap();
    assert_eq!(ok.reduced_homology(1, Ring::Integers).rank, 0);
    assert_eq!(ok.reduced_homology(0, Ring::Integers).rank, 0);
}

#[test]
fn torsion_over_integers() {
    // ℤ --2--> ℤ: H_0 = ℤ/2 in the unaugmented sense; here C_{-1} = ℤ.
    let d0 = SparseMatrix::from_triplets(1, 1, &[(0, 0, 2)]);
    let c = ChainComplex::new(vec![1, 1], vec![d0]).unwrap();
    let h = c.reduced_homology(-1, Ring::Integers);
    assert_eq!(h.rank, 0);
    assert_eq!(h.torsion, vec![2.into()]);
    assert_eq!(c.reduced_homology(-1, field(2)).rank, 1);
    assert_eq!(c.reduced_homology(0, field(2)).rank, 1);
    assert_eq!(c.reduced_homology(-1, Ring::Rationals).rank, 0);
}

fn steinberg_grid() -> Vec<GroupKind> {
    vec![
        kind(Family::GL, 1, 2),
        kind(Family::GL, 2, 2),
        kind(Family::GL, 2, 3),
        kind(Family::GL, 2, 5),
        kind(Family::GL, 3, 2),
        kind(Family::GL, 3, 3),
        kind(Family::SL, 3, 2),
        kind(Family::Sp, 1, 3),
        kind(Family::Sp, 2, 2),
        kind(Family::Sp, 2, 3),
        kind(Family::SOnn, 2, 2),
        kind(Family::SOnn, 2, 3),
        kind(Family::SOnn1, 2, 2),
        kind(Family::SOnn1, 0, 3),
    ]
}

#[test]
fn steinberg_ranks_and_wedge_of_spheres() {
    for k in steinberg_grid() {
        let st = SteinbergModule::new(k, DEFAULT_CAPACITY).unwrap();
        let cc = st.chain_complex();
        let top = st.complex().top_degree();
        let h = cc.reduced_homology(top, Ring::Integers);
        assert_eq!(h.rank, st.rank(), "{k}");
        assert!(h.torsion.is_empty());
        for j in -1..top {
            assert!(
                cc.reduced_homology(j, Ring::Integers).is_zero(),
                "{k} degree {j}"
            );
        }
        assert_eq!(st.rank() as u64, k.expected_steinberg_rank(), "{k}");
        for ring in [Ring::Rationals, field(2), field(3)] {
            assert_eq!(st.homology_rank_over(ring), st.rank(), "{k} over {ring}");
            assert_eq!(st.rank_over(ring), st.rank(), "{k} over {ring}");
        }
    }
    let st = SteinbergModule::new(kind(Family::Sp, 2, 2), DEFAULT_CAPACITY).unwrap();
    assert_eq!(st.homology_rank_over(field(3)), 16);
}

#[test]
fn steinberg_action_is_a_representation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in [
        kind(Family::GL, 3, 2),
        kind(Family::GL, 2, 3),
        kind(Family::Sp, 2, 2),
        kind(Family::SOnn, 2, 3),
    ] {
        let st = SteinbergModule::new(k, DEFAULT_CAPACITY).unwrap();
        let g = build_group(k, DEFAULT_CAPACITY).unwrap();
        let f = k.field;
        let id = steinberg::groups::FpMat::identity(k.m());
        assert_eq!(st.action(&id), steinberg::IMatrix::identity(st.rank()));
        for _ in 0..10 {
            let a = g.group.element(rng.gen_range(0..g.order())).clone();
            let b = g.group.element(rng.gen_range(0..g.order())).clone();
            let (ra, rb) = (st.action(&a), st.action(&b));
            assert_eq!(ra.mul(&rb), st.action(&a.mul(&b, f)), "{k}");
            assert_eq!(
                ra.mul(&st.action(&a.inverse(f).unwrap())),
                steinberg::IMatrix::identity(st.rank())
            );
            // Chain-level equivariance on a random cycle.
            let coords: Vec<i64> = (0..st.rank()).map(|_| rng.gen_range(-2..=2)).collect();
            let c = st.chain_of(&coords);
            assert!(st.is_cycle(&c));
            let moved = st.act_on_chain(&a, &st.act_on_chain(&b, &c));
            assert_eq!(moved, st.act_on_chain(&a.mul(&b, f), &c));
            assert_eq!(st.express(&moved).unwrap(), ra.mul(&rb).mul_vec(&coords));
        }
    }
}

#[test]
fn basis_columns_are_cycles() {
    for k in steinberg_grid() {
        let st = SteinbergModule::new(k, DEFAULT_CAPACITY).unwrap();
        for j in 0..st.rank() {
            assert!(st.is_cycle(&st.basis().column(j)));
        }
        assert_eq!(st.labels().len(), st.rank());
    }
}

#[test]
fn capacity_is_enforced() {
    assert!(matches!(
        tits_complex(kind(Family::GL, 3, 3), 5),
        Err(BuildingError::Capacity { .. })
    ));
}

#[test]
fn exports() {
    let c = tits_complex(kind(Family::GL, 3, 2), DEFAULT_CAPACITY).unwrap();
    let text = c.export_simplices();
    assert!(text.contains("degree 0 14"));
    assert!(text.contains("degree 1 21"));
    let d = c.chain_complex().boundary(1).clone();
    let t = export_triplets(&d);
    let mut lines = t.lines();
    assert_eq!(lines.next().unwrap(), "14 21 42");
    assert_eq!(lines.count(), 42);
}
