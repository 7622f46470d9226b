use bowtie_core::analytic::checks::{
    degree_one_ratio, eigen_ratio, hecke_apply, modularity_residual, modularity_residual_e1, Generator,
};
use bowtie_core::analytic::sum::ComplexSum;
use bowtie_core::analytic::{
    bowtie_residual_numeric, coprime_pairs, decomposition_residual, degree_one_eigenvalue, eval_e1,
    klingen_residual_numeric, qexp_value, siegel_value, sym_pair_reps, Embedding, Evaluator, Executor, Sequential,
    Series, SiegelPoint, SlashVariant, Sym2, SymPairRep, TruncationPolicy,
};
use bowtie_core::elliptic::eisenstein_qexp;
use bowtie_core::exactnum::rat;
use bowtie_core::siegel2::siegel_eisenstein2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Round-robin over `threads` scoped threads.
struct Striped(usize);

impl Executor for Striped {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> ComplexSum + Sync)) -> Vec<ComplexSum> {
        let mut out = vec![ComplexSum::default(); jobs];
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..self.0)
                .map(|t| s.spawn(move || (t..jobs).step_by(self.0).map(|j| (j, job(j))).collect::<Vec<_>>()))
                .collect();
            for h in handles {
                for (j, v) in h.join().unwrap() {
                    out[j] = v;
                }
            }
        });
        out
    }
}

fn generic_point(s: f64) -> SiegelPoint {
    SiegelPoint::new(Sym2::new(c(0.1, 1.1), c(0.2, 0.1), c(-0.1, 1.0)), c(s, 0.0)).unwrap()
}

type Mat4 = [[i64; 4]; 4];

fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn random_symplectic(rng: &mut ChaCha8Rng) -> Mat4 {
    let mut g: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
    for _ in 0..rng.gen_range(1..5) {
        let step: Mat4 = match rng.gen_range(0..3) {
            0 => [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
            1 => {
                let (b1, b2, b3) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1), rng.gen_range(-1..=1));
                [[1, 0, b1, b2], [0, 1, b2, b3], [0, 0, 1, 0], [0, 0, 0, 1]]
            }
            _ => {
                // U = (1 u; 0 1), U^-t = (1 0; -u 1).
                let u = rng.gen_range(-1..=1);
                [[1, u, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -u, 1]]
            }
        };
        g = mul4(&g, &step);
    }
    g
}

fn bottom(g: &Mat4) -> SymPairRep {
    SymPairRep { c: [[g[2][0], g[2][1]], [g[3][0], g[3][1]]], d: [[g[2][2], g[2][3]], [g[3][2], g[3][3]]] }
}

fn rows(r: &SymPairRep) -> [[i64; 4]; 2] {
    [[r.c[0][0], r.c[0][1], r.d[0][0], r.d[0][1]], [r.c[1][0], r.c[1][1], r.d[1][0], r.d[1][1]]]
}

/// Whether `y = U x` for some `U` in `GL_2(Z)`, by solving on a nonsingular
/// 2x2 minor of `x`.
fn left_related(x: &SymPairRep, y: &SymPairRep) -> bool {
    let (x, y) = (rows(x), rows(y));
    for i in 0..4 {
        for j in (i + 1)..4 {
            let det = x[0][i] * x[1][j] - x[0][j] * x[1][i];
            if det == 0 {
                continue;
            }
            // U = Y_cols * adj(X_cols) / det.
            let adj = [[x[1][j], -x[0][j]], [-x[1][i], x[0][i]]];
            let mut u = [[0i64; 2]; 2];
            for r in 0..2 {
                for col in 0..2 {
                    let num = y[r][i] * adj[0][col] + y[r][j] * adj[1][col];
                    if num % det != 0 {
                        return false;
                    }
                    u[r][col] = num / det;
                }
            }
            if (u[0][0] * u[1][1] - u[0][1] * u[1][0]).abs() != 1 {
                return false;
            }
            return (0..2).all(|r| (0..4).all(|col| u[r][0] * x[0][col] + u[r][1] * x[1][col] == y[r][col]));
        }
    }
    unreachable!("rank-deficient pair")
}

#[test]
fn sym_reps_are_pairwise_inequivalent() {
    for h in 1..=2 {
        let reps = sym_pair_reps(h);
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!left_related(a, b), "{a:?} ~ {b:?}");
            }
        }
    }
    assert_eq!(sym_pair_reps(2).len(), 348);
}

#[test]
fn sym_reps_cover_symplectic_bottom_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let reps = sym_pair_reps(2);
    let mut hits = 0;
    for _ in 0..2000 {
        let g = random_symplectic(&mut rng);
        let pair = bottom(&g);
        assert!(pair.is_symmetric() && pair.is_primitive());
        let canon = pair.canonical();
        assert!(left_related(&pair, &canon));
        // Random unimodular left factor does not change the canonical form.
        let u = [[1, rng.gen_range(-2..=2)], [0, 1]];
        let swapped = if rng.gen() { [[0, 1], [1, 0]] } else { [[1, 0], [0, 1]] };
        let m = [
            [u[0][0] * swapped[0][0] + u[0][1] * swapped[1][0], u[0][0] * swapped[0][1] + u[0][1] * swapped[1][1]],
            [swapped[1][0], swapped[1][1]],
        ];
        let r = rows(&pair);
        let moved = SymPairRep {
            c: [
                [m[0][0] * r[0][0] + m[0][1] * r[1][0], m[0][0] * r[0][1] + m[0][1] * r[1][1]],
                [m[1][0] * r[0][0] + m[1][1] * r[1][0], m[1][0] * r[0][1] + m[1][1] * r[1][1]],
            ],
            d: [
                [m[0][0] * r[0][2] + m[0][1] * r[1][2], m[0][0] * r[0][3] + m[0][1] * r[1][3]],
                [m[1][0] * r[0][2] + m[1][1] * r[1][2], m[1][0] * r[0][3] + m[1][1] * r[1][3]],
            ],
        };
        assert_eq!(moved.canonical(), canon);
        if canon.max_entry() <= 2 {
            assert!(reps.contains(&canon), "{canon:?} missing");
            hits += 1;
        }
    }
    assert!(hits > 100);
}

#[test]
fn coprime_pairs_are_sign_classes() {
    let pairs = coprime_pairs(12);
    for &(a, b) in &pairs {
        assert!(!pairs.contains(&(-a, -b)) || (a, b) == (0, 0));
    }
    let all = (-12i64..=12)
        .flat_map(|x| (-12i64..=12).map(move |y| (x, y)))
        .filter(|&(x, y)| num_integer::gcd(x, y) == 1)
        .count();
    assert_eq!(2 * pairs.len(), all);
}

#[test]
fn e1_matches_q_expansion() {
    let tau = c(0.0, 1.3);
    let exact = qexp_value(&eisenstein_qexp(4, 40).unwrap(), tau);
    let mut last = f64::INFINITY;
    for h in [25u32, 50, 100] {
        let v = eval_e1(tau, c(0.0, 0.0), 4, &TruncationPolicy::with_height(h)).unwrap();
        let rel = ((v - exact) / exact).norm();
        assert!(rel < last);
        last = rel;
    }
    assert!(last < 1e-4);
}

#[test]
fn e2_matches_fourier_expansion() {
    let z = Sym2::sample();
    let exact = siegel_value(&siegel_eisenstein2(8, 8).unwrap(), &z);
    let point = SiegelPoint::new(z, c(0.0, 0.0)).unwrap();
    let mut last = f64::INFINITY;
    for h in [1u32, 2, 4] {
        let ev = Evaluator::new(TruncationPolicy::with_height(h), &Sequential).unwrap();
        let rel = ((ev.e2(&point, 8).unwrap() - exact) / exact).norm();
        assert!(rel < last, "height {h}: {rel}");
        last = rel;
    }
    assert!(last < 1e-4);
}

#[test]
fn modularity_improves_with_height() {
    let p = generic_point(0.75);
    let e1: Vec<f64> = [2u32, 4, 8, 16]
        .iter()
        .map(|&h| {
            let ev = Evaluator::new(TruncationPolicy::with_height(h), &Sequential).unwrap();
            modularity_residual_e1(&ev, c(0.1, 1.1), p.s, 8, [1.0, 1.0, 0.0, 1.0]).unwrap()
        })
        .collect();
    let e2: Vec<f64> = [1u32, 2, 4, 8]
        .iter()
        .map(|&h| {
            let ev = Evaluator::new(TruncationPolicy::with_height(h), &Sequential).unwrap();
            modularity_residual(&ev, Series::E2, &p, 8, Generator::FullInversion).unwrap()
        })
        .collect();
    let series = |series, g| -> Vec<f64> {
        [2u32, 4, 8, 16]
            .iter()
            .map(|&h| {
                let ev = Evaluator::new(TruncationPolicy::with_height(h), &Sequential).unwrap();
                modularity_residual(&ev, series, &p, 8, g).unwrap()
            })
            .collect()
    };
    let a = series(Series::A, Generator::Translation(Embedding::Upper));
    let b = series(Series::B, Generator::Translation(Embedding::Lower));
    for seq in [&e1, &e2, &a, &b] {
        assert!(seq.windows(2).all(|w| w[1] < w[0]), "{seq:?}");
    }
    // Generators under which the truncated index sets are closed leave only rounding.
    let ev = Evaluator::new(TruncationPolicy::with_height(4), &Sequential).unwrap();
    assert!(modularity_residual_e1(&ev, c(0.1, 1.1), p.s, 8, [0.0, -1.0, 1.0, 0.0]).unwrap() < 1e-12);
    assert!(modularity_residual(&ev, Series::A, &p, 8, Generator::Inversion(Embedding::Lower)).unwrap() < 1e-12);
    assert!(modularity_residual(&ev, Series::B, &p, 8, Generator::Translation(Embedding::Upper)).unwrap() < 1e-12);
}

#[test]
fn b_identity_term_and_base_independence() {
    let point = SiegelPoint::new(Sym2::sample(), c(0.75, 0.0)).unwrap();
    let z = point.z;
    let phi = z.tau + z.z * 2.0 + z.tau_t;
    let expected = phi.powi(-8) * (-(point.s * 2.0) * phi.norm().ln()).exp() * (point.s * z.delta().ln()).exp();
    let ev =
        Evaluator::new(TruncationPolicy { height: 6, shift_bound: 12, ..Default::default() }, &Sequential).unwrap();
    let term = ev.b_term(&point, 8, [1, 0, 0, 1]);
    assert!(((term - expected) / expected).norm() < 1e-14);
    // -1 acts through z -> -z, so it is a different term.
    let minus = ev.b_term(&point, 8, [-1, 0, 0, -1]);
    let phi_minus = -z.tau + z.z * 2.0 - z.tau_t;
    assert!(
        ((minus - expected * (phi / phi_minus).powi(8) * (phi.norm() / phi_minus.norm()).powf(1.5)) / minus).norm()
            < 1e-13
    );
    let b = ev.b(&point, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let offsets: Vec<i64> = (0..64).map(|_| rng.gen_range(-20..=20)).collect();
    let moved = ev.b_with_offsets(&point, 8, &|c, d| offsets[((c * 7 + d * 3).rem_euclid(64)) as usize]).unwrap();
    assert!(((b - moved) / b).norm() < 1e-12);
}

#[test]
fn b_commutes_with_both_embedded_hecke_operators() {
    let point = SiegelPoint::new(Sym2::sample(), c(0.75, 0.0)).unwrap();
    let mut last = f64::INFINITY;
    for h in [6u32, 12] {
        let ev = Evaluator::new(TruncationPolicy { height: h, shift_bound: 2 * h, ..Default::default() }, &Sequential)
            .unwrap();
        let up = hecke_apply(&ev, Series::B, &point, 8, 2, Embedding::Upper).unwrap();
        let down = hecke_apply(&ev, Series::B, &point, 8, 2, Embedding::Lower).unwrap();
        let rel = ((up - down) / up).norm();
        assert!(rel < 5e-3 && rel < last, "height {h}: {rel}");
        last = rel;
    }
}

#[test]
fn eigen_ratios_are_constant() {
    let s = c(0.75, 0.0);
    let ev = Evaluator::new(TruncationPolicy::with_height(6), &Sequential).unwrap();
    let points = [
        Sym2::sample(),
        Sym2::new(c(0.2, 1.2), c(0.0, 0.3), c(-0.1, 1.4)),
        Sym2::new(c(0.0, 1.0), c(0.05, 0.2), c(0.3, 1.1)),
    ];
    let closed = degree_one_eigenvalue(8, s, 2);
    let deg1 = degree_one_ratio(&ev, c(0.1, 1.3), s, 8, 2).unwrap();
    assert!(((deg1 - closed) / closed).norm() < 1e-6);
    for z in points {
        let p = SiegelPoint::new(z, s).unwrap();
        for emb in [Embedding::Upper, Embedding::Lower] {
            let r = eigen_ratio(&ev, Series::A, &p, 8, 2, emb).unwrap();
            assert!(((r - deg1) / deg1).norm() < 1e-4, "{r}");
        }
    }
}

#[test]
fn numeric_bowtie_separates_eisenstein_from_klingen() {
    let z = Sym2::sample();
    let ev = Evaluator::new(TruncationPolicy::with_height(6), &Sequential).unwrap();
    let e = bowtie_residual_numeric(&ev, 8, c(0.75, 0.0), &z, 2).unwrap();
    let k = klingen_residual_numeric(&rat(1), 2, &z, 30, ev.policy().y_floor).unwrap();
    assert!(e < 1e-5, "{e}");
    assert!(k > 100.0 * e, "{k} vs {e}");
    assert_eq!(bowtie_residual_numeric(&ev, 8, c(0.75, 0.0), &z, 1).unwrap(), 0.0);
}

#[test]
fn decomposition_variants() {
    let z = Sym2::sample();
    let s = c(0.75, 0.0);
    let ev =
        Evaluator::new(TruncationPolicy { height: 6, shift_bound: 12, ..Default::default() }, &Sequential).unwrap();
    let r = decomposition_residual(&ev, 8, s, &z).unwrap();
    assert_eq!(r.variants.len(), 4);
    for v in &r.variants {
        assert!(v.residual < 5e-2 && v.residual < r.without_b, "{v:?}");
    }
    let none = Evaluator::new(TruncationPolicy { height: 6, m_max: 0, ..Default::default() }, &Sequential).unwrap();
    let r0 = decomposition_residual(&none, 8, s, &z).unwrap();
    assert!(r0.variants.iter().all(|v| v.residual == r0.without_b));
    assert!(r0.without_b > 0.0);
    // Far up the cusp everything is the identity term.
    let far = Sym2::new(c(0.0, 9.0), c(0.0, 0.1), c(0.0, 8.0));
    let rf = decomposition_residual(&ev, 8, s, &far).unwrap();
    assert!(rf.variants.iter().all(|v| v.residual < 1e-8));
    assert!(matches!(r.best().unwrap().variant, SlashVariant::Pure | SlashVariant::WithS));
}

#[test]
fn executors_agree_bit_for_bit() {
    let pol = TruncationPolicy { height: 5, shift_bound: 10, ..Default::default() };
    let p = generic_point(0.75);
    let seq = Evaluator::new(pol, &Sequential).unwrap();
    for threads in [2usize, 3, 8] {
        let exec = Striped(threads);
        let par = Evaluator::new(pol, &exec).unwrap();
        for series in [Series::E2, Series::A, Series::B] {
            assert_eq!(seq.eval(series, &p, 8).unwrap(), par.eval(series, &p, 8).unwrap(), "{series:?}");
        }
        assert_eq!(seq.e1(c(0.1, 1.3), p.s, 8).unwrap(), par.e1(c(0.1, 1.3), p.s, 8).unwrap());
    }
}
