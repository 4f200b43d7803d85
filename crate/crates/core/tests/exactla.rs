use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinberg::exactla::{
    self, kernel_basis, rank, rref, rref_over, smith_normal_form, snf, solve, LinalgError,
    SparseMatrix,
};
use steinberg::{IMatrix, Matrix, Ring, ZMatrix, F2, F3};

fn gf2(rows: &[&[i64]]) -> Matrix<F2> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| F2::new(x)).collect())
            .collect(),
    )
}

fn gf3(rows: Vec<Vec<i64>>) -> Matrix<F3> {
    Matrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(F3::new).collect())
            .collect(),
    )
}

fn random_rows(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row, mod 3.
fn det_mod3(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det_mod3(&minor);
    }
    total.rem_euclid(3)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest k with a nonzero k×k minor mod 3.
fn minor_rank_mod3(m: &[Vec<i64>]) -> usize {
    let (r, c) = (m.len(), m[0].len());
    for k in (1..=r.min(c)).rev() {
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                    .collect();
                if det_mod3(&sub) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// Exact integer determinant by cofactor expansion.
fn det_int(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let term = BigInt::from(m[0][j]) * det_int(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// gcd of all k×k minors.
fn minor_gcd(m: &[Vec<i64>], k: usize) -> BigInt {
    let (r, c) = (m.len(), m[0].len());
    let mut g = BigInt::zero();
    for rs in subsets(r, k) {
        for cs in subsets(c, k) {
            let sub: Vec<Vec<i64>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                .collect();
            g = g.gcd(&det_int(&sub));
        }
    }
    g
}

#[test]
fn rref_examples() {
    let id = gf2(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let r = rref(&id);
    assert_eq!(r.reduced, id);
    assert_eq!(r.pivots, vec![0, 1, 2]);
    assert_eq!(r.rank(), 3);

    let m = gf2(&[&[1, 1], &[1, 1]]);
    let r = rref(&m);
    assert_eq!(r.reduced, gf2(&[&[1, 1], &[0, 0]]));
    assert_eq!(r.rank(), 1);
}

#[test]
fn rref_rejects_integers() {
    let m = IMatrix::identity(2);
    assert_eq!(
        rref_over(Ring::Integers, &m).unwrap_err(),
        LinalgError::UnsupportedRing(Ring::Integers)
    );
    assert_eq!(rref_over(Ring::Rationals, &m).unwrap().rank(), 2);
}

#[test]
fn rank_matches_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let rows = random_rows(&mut rng, 5, 7, 0, 2);
        assert_eq!(rank(&gf3(rows.clone())), minor_rank_mod3(&rows), "{rows:?}");
    }
    // Rank-deficient inputs: rows built from two generators.
    for _ in 0..20 {
        let base = random_rows(&mut rng, 2, 7, 0, 2);
        let rows: Vec<Vec<i64>> = (0..5)
            .map(|_| {
                let (a, b) = (rng.gen_range(0..3), rng.gen_range(0..3));
                (0..7).map(|j| a * base[0][j] + b * base[1][j]).collect()
            })
            .collect();
        assert_eq!(rank(&gf3(rows.clone())), minor_rank_mod3(&rows));
    }
}

#[test]
fn kernel_examples() {
    assert_eq!(kernel_basis(&Matrix::<F2>::zeros(2, 3)).rows(), 3);
    assert_eq!(kernel_basis(&Matrix::<F2>::identity(4)).rows(), 0);

    let m = gf2(&[&[1, 1, 0]]);
    let k = kernel_basis(&m);
    assert_eq!(k.rows(), 2);
    // Exhaustive oracle: the null space of [1 1 0] in GF(2)^3 has 4 elements.
    let mut null = Vec::new();
    for bits in 0..8i64 {
        let v: Vec<F2> = (0..3).map(|i| F2::new((bits >> i) & 1)).collect();
        if m.mul_vec(&v)[0] == F2::new(0) {
            null.push(v);
        }
    }
    assert_eq!(null.len(), 4);
    for i in 0..k.rows() {
        assert!(null.contains(&k.row(i).to_vec()));
    }
    assert_eq!(rank(&k), 2);
}

#[test]
fn solve_examples() {
    let id = Matrix::<F3>::identity(3);
    let b = vec![F3::new(2), F3::new(0), F3::new(1)];
    assert_eq!(solve(&id, &b).unwrap(), Some(b.clone()));

    let a = gf2(&[&[1, 1], &[1, 1]]);
    assert_eq!(solve(&a, &[F2::new(1), F2::new(0)]).unwrap(), None);
    assert!(matches!(
        solve(&a, &[F2::new(1)]),
        Err(LinalgError::DimensionMismatch {
            expected: 2,
            found: 1
        })
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let a = gf3(random_rows(&mut rng, 4, 6, 0, 2));
        let x: Vec<F3> = (0..6).map(|_| F3::new(rng.gen_range(0..3))).collect();
        let b = a.mul_vec(&x);
        let y = solve(&a, &b).unwrap().expect("consistent by construction");
        assert_eq!(a.mul_vec(&y), b);
    }
}

#[test]
fn smith_examples() {
    let z = |rows: Vec<Vec<i64>>| -> ZMatrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    };
    let s = smith_normal_form(&z(vec![vec![2, 0], vec![0, 3]]));
    assert_eq!(
        s.invariant_factors(),
        vec![BigInt::from(1), BigInt::from(6)]
    );

    let s = smith_normal_form(&z(vec![vec![1, 0], vec![0, 1]]));
    assert_eq!(s.d, z(vec![vec![1, 0], vec![0, 1]]));

    let m = z(vec![vec![2, 4], vec![6, 8]]);
    let s = smith_normal_form(&m);
    assert_eq!(
        s.invariant_factors(),
        vec![BigInt::from(2), BigInt::from(4)]
    );
    assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    // The sparse engine agrees.
    let im = IMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
    assert_eq!(
        exactla::invariant_factors(&im),
        vec![BigInt::from(2), BigInt::from(4)]
    );
}

#[test]
fn integer_helpers() {
    let m = IMatrix::from_rows(vec![vec![2, 4, 6], vec![1, 1, 1]]);
    let k = exactla::integer_kernel(&m);
    assert_eq!(k.cols(), 1);
    assert!(m.mul(&k).is_zero());
    let x = exactla::solve_integer(&m, &[2, 1]).unwrap();
    assert_eq!(m.mul_vec(&x), vec![2, 1]);
    assert_eq!(exactla::solve_integer(&m, &[1, 0]), None);
    let u = IMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]);
    assert_eq!(exactla::determinant(&u), BigInt::from(1));
    assert_eq!(
        u.mul(&exactla::unimodular_inverse(&u).unwrap()),
        IMatrix::identity(2)
    );
    assert!(
        exactla::unimodular_inverse(&IMatrix::from_rows(vec![vec![2, 0], vec![0, 1]])).is_none()
    );
    assert!(snf::span_contains_dense(
        &u,
        &IMatrix::from_rows(vec![vec![5], vec![7]])
    ));
    let two = IMatrix::from_rows(vec![vec![2, 0], vec![0, 2]]);
    assert!(!snf::span_contains_dense(
        &two,
        &IMatrix::from_rows(vec![vec![1], vec![0]])
    ));
}

#[test]
fn ring_parsing() {
    assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Integers);
    assert_eq!("Q".parse::<Ring>().unwrap(), Ring::Rationals);
    assert_eq!("F3".parse::<Ring>().unwrap().to_string(), "F3");
    assert_eq!("GF(5)".parse::<Ring>().unwrap().to_string(), "F5");
    assert!("F4".parse::<Ring>().is_err());
    assert!("R".parse::<Ring>().is_err());
}

proptest! {
    #[test]
    fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(0i64..3, 5), 1..6)) {
        let m = gf3(rows);
        prop_assert_eq!(rank(&m) + kernel_basis(&m).rows(), m.cols());
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn rref_is_idempotent(rows in proptest::collection::vec(proptest::collection::vec(0i64..3, 4), 1..5)) {
        let r = rref(&gf3(rows));
        prop_assert_eq!(rref(&r.reduced), r.clone());
    }

    #[test]
    fn snf_minor_gcds(rows in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 1..=4), 1..=4)) {
        let c = rows[0].len();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| { r.resize(c, 0); r }).collect();
        let z: ZMatrix = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let s = smith_normal_form(&z);
        prop_assert_eq!(s.u.mul(&z).mul(&s.v), s.d.clone());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let mut prod = BigInt::one();
        for k in 1..=rows.len().min(c) {
            let g = minor_gcd(&rows, k);
            if k <= f.len() {
                prod *= &f[k - 1];
                prop_assert_eq!(&prod, &g);
            } else {
                prop_assert!(g.is_zero());
            }
        }
        // Sparse engine agrees with the dense one.
        let im = IMatrix::from_rows(rows.clone());
        prop_assert_eq!(exactla::invariant_factors(&im), f);
    }

    #[test]
    fn sparse_rank_mod_matches_rref(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 6), 1..7)) {
        let im = IMatrix::from_rows(rows.clone());
        let sp = SparseMatrix::from_dense(&im);
        prop_assert_eq!(sp.rank_mod(3), rank(&gf3(rows)));
        prop_assert_eq!(sp.rank_mod(2), exactla::rank_over(Ring::Prime(steinberg::PrimeField::new(2).unwrap()), &im));
    }
}
