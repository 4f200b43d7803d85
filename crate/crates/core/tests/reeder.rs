use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinberg::apartments::{apartment_class, ApartmentInput};
use steinberg::exactla::snf;
use steinberg::groups::{build_group, hat_kappa, FpMat};
use steinberg::reeder::{
    apartment_calculation, pi_map, reeder_product, stabilization_map, unipotent_radical,
    verify_decomposition, verify_zeta_surjective, zeta_maps, Gl3Data, ReederModules,
};
use steinberg::{Family, GroupKind, DEFAULT_CAPACITY};

fn kind(f: Family, n: usize, p: u32) -> GroupKind {
    GroupKind::new(f, n, p).unwrap()
}

fn unit(len: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

#[test]
fn product_shapes() {
    for (f, n, p, rows, cols) in [
        (Family::GL, 3, 2, 8, 2),
        (Family::Sp, 2, 2, 16, 2),
        (Family::GL, 3, 3, 27, 3),
    ] {
        let m = ReederModules::new(kind(f, n, p), 1, DEFAULT_CAPACITY).unwrap();
        let prod = reeder_product(&m.big, &m.gl, &m.sub, 1).unwrap();
        assert_eq!((prod.matrix.rows(), prod.matrix.cols()), (rows, cols));
        assert!(prod.columns_are_cycles(&m.big));
    }
}

#[test]
fn product_matches_block_diagonal_apartments() {
    let k = kind(Family::GL, 3, 3);
    let f = k.field;
    let m = ReederModules::new(k, 1, DEFAULT_CAPACITY).unwrap();
    let prod = reeder_product(&m.big, &m.gl, &m.sub, 1).unwrap();
    for (j, u2) in m.sub.unipotents().iter().enumerate() {
        let g = FpMat::from_rows(
            f,
            &[
                vec![1, 0, 0],
                vec![0, 1, u2.get(0, 1) as i64],
                vec![0, 0, 1],
            ],
        );
        let class = apartment_class(&m.big, &ApartmentInput::from_matrix(&g)).unwrap();
        assert_eq!(prod.matrix.column(j), class.coords);
    }
}

#[test]
fn product_is_levi_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (f, n, p, l) in [
        (Family::GL, 3, 2, 1),
        (Family::GL, 3, 2, 2),
        (Family::SL, 3, 3, 1),
        (Family::Sp, 2, 2, 1),
        (Family::Sp, 2, 3, 2),
        (Family::SOnn1, 2, 3, 1),
    ] {
        let k = kind(f, n, p);
        let m = ReederModules::new(k, l, DEFAULT_CAPACITY).unwrap();
        let prod = reeder_product(&m.big, &m.gl, &m.sub, l).unwrap();
        let g1s = build_group(k.gl(l), DEFAULT_CAPACITY).unwrap();
        let g2s = build_group(k.with_rank(n - l), DEFAULT_CAPACITY).unwrap();
        for _ in 0..10 {
            let g1 = &g1s.elements()[rng.gen_range(0..g1s.order())];
            let g2 = &g2s.elements()[rng.gen_range(0..g2s.order())];
            assert!(
                prod.is_equivariant(&m.big, &m.gl, &m.sub, g1, g2),
                "{k} l={l}"
            );
        }
    }
}

#[test]
fn unipotent_radical_orders() {
    for (f, n, p, l, order) in [
        (Family::GL, 3, 2, 1, 4),
        (Family::GL, 3, 3, 2, 9),
        (Family::GL, 4, 2, 2, 16),
        (Family::Sp, 2, 2, 1, 8),
        (Family::Sp, 2, 3, 2, 27),
        (Family::SOnn, 2, 3, 2, 3),
    ] {
        let k = kind(f, n, p);
        let u = unipotent_radical(&k, l);
        assert_eq!(u.len(), order, "{k} l={l}");
        assert!(u[0].is_identity());
        assert!(u.iter().all(|g| k.contains(g)));
    }
}

#[test]
fn decomposition_certificates() {
    for (f, n, p, l) in [
        (Family::GL, 3, 2, 1),
        (Family::GL, 3, 2, 2),
        (Family::GL, 2, 3, 1),
        (Family::SL, 3, 2, 2),
        (Family::Sp, 2, 2, 1),
        (Family::Sp, 2, 2, 2),
        (Family::SOnn, 2, 2, 1),
        (Family::SOnn1, 2, 3, 2),
    ] {
        let c = verify_decomposition(kind(f, n, p), l, DEFAULT_CAPACITY).unwrap();
        assert!(c.holds(), "{c:?}");
        assert!(c.translates.iter().all(|&r| r == c.r1 * c.r2));
    }
}

#[test]
fn projection_inverts_translated_products() {
    for (f, n, p, l) in [
        (Family::GL, 3, 2, 1),
        (Family::GL, 3, 3, 2),
        (Family::Sp, 2, 2, 1),
    ] {
        let m = ReederModules::new(kind(f, n, p), l, DEFAULT_CAPACITY).unwrap();
        let d = m.decomposition(l).unwrap();
        let w = d.product.r1 * d.product.r2;
        for (ui, u) in d.unipotent.iter().enumerate() {
            for j in 0..w {
                let y = unit(w, j);
                let x = m.big.action(u).mul_vec(&d.product.matrix.mul_vec(&y));
                let comps = d.components(&x);
                for (vi, c) in comps.iter().enumerate() {
                    assert_eq!(c, &if vi == ui { y.clone() } else { vec![0; w] });
                }
                assert_eq!(d.project(&x), y);
                assert_eq!(
                    d.identity_component(&x),
                    if ui == 0 { y.clone() } else { vec![0; w] }
                );
                assert_eq!(d.reassemble(&comps), x);
            }
        }
        assert_eq!(
            d.projection_matrix().mul(&d.product.matrix),
            steinberg::IMatrix::identity(w)
        );
        assert_eq!(
            d.identity_component_matrix().mul(&d.product.matrix),
            steinberg::IMatrix::identity(w)
        );
    }
}

#[test]
fn stabilization_is_split_injective() {
    for (f, n, p) in [
        (Family::GL, 2, 2),
        (Family::GL, 3, 2),
        (Family::GL, 3, 3),
        (Family::Sp, 2, 2),
    ] {
        let k = kind(f, n, p);
        let s = stabilization_map(k, DEFAULT_CAPACITY).unwrap();
        assert_eq!(s.rows() as u64, k.expected_steinberg_rank());
        assert_eq!(
            s.cols() as u64,
            k.with_rank(n - 1).expected_steinberg_rank()
        );
        assert!(snf::is_unimodular_rank(&s));
    }
}

#[test]
fn stabilization_sends_b_to_diag_one_b() {
    let k = kind(Family::GL, 3, 2);
    let s = stabilization_map(k, DEFAULT_CAPACITY).unwrap();
    let m = ReederModules::new(k, 1, DEFAULT_CAPACITY).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let gl2 = build_group(k.with_rank(2), DEFAULT_CAPACITY).unwrap();
    for _ in 0..6 {
        let b = &gl2.elements()[rng.gen_range(0..gl2.order())];
        let small = apartment_class(&m.sub, &ApartmentInput::from_matrix(b))
            .unwrap()
            .coords;
        let big = k.levi_embed(1, &FpMat::identity(1), b);
        let expect = apartment_class(&m.big, &ApartmentInput::from_matrix(&big))
            .unwrap()
            .coords;
        assert_eq!(s.mul_vec(&small), expect);
    }
}

#[test]
fn pi_closed_form() {
    for p in [2, 3] {
        let d = Gl3Data::new(p, DEFAULT_CAPACITY).unwrap();
        let pi = pi_map(&d).unwrap();
        assert_eq!((pi.rows(), pi.cols()), (p as usize, (p * p * p) as usize));
        for x in 0..p as i64 {
            for z in 0..p as i64 {
                let b = [vec![1, x, 1], vec![0, 1, z], vec![0, 0, 1]];
                let got = pi.mul_vec(&d.class(&b).unwrap());
                assert_eq!(got, d.class(&[vec![1, x], vec![0, 1]]).unwrap());
            }
        }
    }
}

#[test]
fn zeta_is_surjective() {
    for p in [2, 3, 5] {
        let r = verify_zeta_surjective(p, DEFAULT_CAPACITY).unwrap();
        assert!(r.surjective(), "{r:?}");
        assert_eq!(r.rank, p as usize);
    }
}

#[test]
fn zeta_on_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for p in [2, 3] {
        let d = Gl3Data::new(p, DEFAULT_CAPACITY).unwrap();
        let z = zeta_maps(&d).unwrap();
        let gl3 = build_group(kind(Family::GL, 3, p), DEFAULT_CAPACITY).unwrap();
        for _ in 0..10 {
            let b = &gl3.elements()[rng.gen_range(0..gl3.order())];
            let lhs = z.zeta.mul_vec(
                &apartment_class(&d.st3, &ApartmentInput::from_matrix(b))
                    .unwrap()
                    .coords,
            );
            let mut rhs = vec![0; p as usize];
            for (m, sign) in [(1, 1), (2, -1), (3, 1)] {
                let moved = hat_kappa(m, d.field).mul(b, d.field);
                let c = apartment_class(&d.st3, &ApartmentInput::from_matrix(&moved))
                    .unwrap()
                    .coords;
                for (r, v) in rhs.iter_mut().zip(z.pi.mul_vec(&c)) {
                    *r += sign * v;
                }
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn apartment_calculation_every_a() {
    for p in [2, 3, 5] {
        let d = Gl3Data::new(p, DEFAULT_CAPACITY).unwrap();
        let z = zeta_maps(&d).unwrap();
        for a in 0..p {
            let steps = apartment_calculation(&d, &z, a).unwrap();
            assert!(steps.len() >= 9);
            for s in steps {
                assert!(s.holds(), "p={p} a={a}: {}", s.name);
            }
        }
    }
}

#[test]
fn transporters_move_faces() {
    let k = kind(Family::Sp, 3, 3);
    let f = k.field;
    for p in 0..3 {
        for i in 0..=p {
            let g = k.transporter(p, i);
            assert!(k.contains(&g));
            let face: Vec<usize> = (0..=p).filter(|&j| j != i).collect();
            for (t, &j) in face.iter().enumerate() {
                let img = g.apply(&k.unit(j), f);
                let nz: Vec<usize> = (0..img.len()).filter(|&r| img[r] != 0).collect();
                assert_eq!(nz, vec![t]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn decomposition_reassembles(coords in proptest::collection::vec(-3i64..4, 8), l in 1usize..3) {
        let m = ReederModules::new(kind(Family::GL, 3, 2), l, DEFAULT_CAPACITY).unwrap();
        let d = m.decomposition(l).unwrap();
        prop_assert_eq!(d.reassemble(&d.components(&coords)), coords);
    }
}
