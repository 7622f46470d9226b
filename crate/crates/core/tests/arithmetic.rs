use bowtie_core::elliptic::{
    coset_reps_m, delta_qexp, eisenstein_qexp, hecke_compose, hecke_tn, HeckeElement, IntMatrix2,
};
use bowtie_core::exactnum::{
    bernoulli, cohen_h, divisor_sigma, divisors, format_rational, fundamental_split, kronecker, l_value_at_one_minus,
    mobius, parse_rational, rat, rat_frac,
};
use bowtie_core::Rational;
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Akiyama-Tanigawa; yields B_1 = +1/2.
fn akiyama_tanigawa(n: usize) -> Rational {
    let mut a: Vec<Rational> = Vec::new();
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
    }
    a[0].clone()
}

fn brute_divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn legendre_by_squares(a: i64, p: i64) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    if (1..p).any(|x| (x * x) % p == a) {
        1
    } else {
        -1
    }
}

/// `L(1 - r, chi_D) = -B_{r,chi}/r` with `B_{r,chi} = F^(r-1) sum_a chi(a) B_r(a/F)`,
/// the Bernoulli polynomial expanded from scratch.
fn l_value_oracle(r: usize, d: i64) -> Rational {
    let f = d.unsigned_abs();
    let bern: Vec<Rational> = (0..=r).map(akiyama_tanigawa).collect();
    let mut acc = Rational::zero();
    for a in 1..=f {
        let chi = kronecker(d, a as i64);
        if chi == 0 {
            continue;
        }
        let x = Rational::new(big(a), big(f));
        let mut poly = Rational::zero();
        for j in 0..=r {
            // Akiyama-Tanigawa has B_1 = +1/2; the polynomial wants -1/2.
            let bj = if j == 1 { -bern[1].clone() } else { bern[j].clone() };
            let binom = (0..j).fold(BigInt::one(), |b, i| b * BigInt::from(r - i) / BigInt::from(i + 1));
            poly += Rational::from_integer(binom) * bj * Pow::pow(&x, (r - j) as u32);
        }
        acc += poly * Rational::from_integer(BigInt::from(chi));
    }
    let b = acc * Rational::from_integer(Pow::pow(big(f), (r - 1) as u32));
    -b / Rational::from_integer(BigInt::from(r))
}

fn cohen_oracle(r: u32, n: u64) -> Rational {
    if n == 0 {
        return -bernoulli(2 * r as usize) / Rational::from_integer(BigInt::from(2 * r));
    }
    let x = if r % 2 == 0 { n as i64 } else { -(n as i64) };
    if matches!(x.rem_euclid(4), 2 | 3) {
        return Rational::zero();
    }
    let (d, f) = fundamental_split(x);
    let mut s = BigInt::zero();
    for e in brute_divisors(f) {
        let mu = mobius(e) as i64 * kronecker(d, e as i64) as i64;
        let sigma: BigInt = brute_divisors(f / e).iter().map(|&t| Pow::pow(big(t), 2 * r - 1)).sum();
        s += BigInt::from(mu) * Pow::pow(big(e), r - 1) * sigma;
    }
    l_value_oracle(r as usize, d) * Rational::from_integer(s)
}

#[test]
fn bernoulli_matches_akiyama_tanigawa() {
    for n in 0..=40 {
        let want = if n == 1 { rat_frac(-1, 2) } else { akiyama_tanigawa(n) };
        assert_eq!(bernoulli(n), want, "B_{n}");
    }
}

#[test]
fn divisors_match_brute_force() {
    for n in 1..=500 {
        assert_eq!(divisors(n), brute_divisors(n));
        let s: BigInt = brute_divisors(n).iter().map(|&d| Pow::pow(big(d), 3u32)).sum();
        assert_eq!(divisor_sigma(n, 3).unwrap(), s);
    }
    assert!(divisor_sigma(0, 1).is_err());
}

#[test]
fn kronecker_matches_quadratic_residues() {
    for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
        for d in -60i64..=60 {
            if d.rem_euclid(4) > 1 {
                continue;
            }
            assert_eq!(kronecker(d, p), legendre_by_squares(d, p), "({d}/{p})");
        }
    }
}

#[test]
fn l_values_match_character_sum() {
    // chi_D(-1) = sign(D) must match (-1)^r for a nonzero value.
    for d in [-3i64, -4, -7, -8, -11, -15, -20, -23, 5, 8, 12, 13, 17, 21, 24] {
        for r in 1..=8usize {
            assert_eq!(l_value_at_one_minus(r, d), l_value_oracle(r, d), "r={r} D={d}");
        }
    }
}

#[test]
fn cohen_matches_oracle() {
    assert_eq!(cohen_h(3, 3).unwrap(), rat_frac(-2, 9));
    assert_eq!(cohen_h(3, 4).unwrap(), rat_frac(-1, 2));
    assert_eq!(cohen_h(3, 0).unwrap(), rat_frac(-1, 252));
    for r in [2u32, 3, 5, 7] {
        for n in 0..=80 {
            assert_eq!(cohen_h(r, n).unwrap(), cohen_oracle(r, n), "H({r}, {n})");
        }
    }
    assert!(cohen_h(1, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sigma_is_multiplicative(a in 1u64..300, b in 1u64..300, e in 0u32..6) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        prop_assert_eq!(
            divisor_sigma(a * b, e).unwrap(),
            divisor_sigma(a, e).unwrap() * divisor_sigma(b, e).unwrap()
        );
    }

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = rat_frac(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)), Some(x));
    }

    #[test]
    fn hecke_multiplicative_on_coprime(m in 1u64..8, n in 1u64..8, k in prop::sample::select(vec![4u32, 6, 8, 12])) {
        prop_assume!(num_integer::gcd(m, n) == 1);
        let f = eisenstein_qexp(k, 120).unwrap();
        let d = delta_qexp(120).unwrap();
        for g in [f, d] {
            let lhs = hecke_tn(&hecke_tn(&g, n).unwrap(), m).unwrap();
            let rhs = hecke_tn(&g, m * n).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn hecke_prime_power_recurrence(p in prop::sample::select(vec![2u64, 3, 5]), r in 1u32..3) {
        let f = delta_qexp(400).unwrap();
        let pr = p.pow(r);
        let lhs = hecke_tn(&hecke_tn(&f, pr).unwrap(), p).unwrap();
        let up = hecke_tn(&f, pr * p).unwrap();
        let down = hecke_tn(&f, pr / p).unwrap().scale(&Rational::from_integer(Pow::pow(big(p), 11u32)));
        let t = lhs.trunc().min(up.trunc());
        for n in 0..=t {
            prop_assert_eq!(lhs.coeff(n).unwrap(), up.coeff(n).unwrap() + down.coeff(n).unwrap());
        }
    }

    #[test]
    fn compose_ignores_choice_of_representatives(
        a in -3i64..4, b in -3i64..4, swap in any::<bool>(), l in prop::sample::select(vec![2u64, 3, 4])
    ) {
        // gamma = (1 a; 0 1)(0 -1; 1 0)^swap (1 0; b 1) is in SL_2(Z).
        let s = if swap { IntMatrix2::new(0, -1, 1, 0) } else { IntMatrix2::IDENTITY };
        let gamma = IntMatrix2::new(1, a, 0, 1).mul(&s).mul(&IntMatrix2::new(1, 0, b, 1));
        prop_assert_eq!(gamma.det(), 1);
        let x = HeckeElement::from_cosets(&coset_reps_m(l).unwrap()).unwrap();
        let y_reps = coset_reps_m(3).unwrap();
        let y = HeckeElement::from_cosets(&y_reps).unwrap();
        let moved: Vec<IntMatrix2> = y_reps.iter().map(|g| gamma.mul(g)).collect();
        let y2 = HeckeElement::from_cosets(&moved).unwrap();
        prop_assert_eq!(&y, &y2);
        let xs: Vec<IntMatrix2> = coset_reps_m(l).unwrap().iter().map(|g| g.mul(&gamma)).collect();
        let x2 = HeckeElement::from_cosets(&xs).unwrap();
        prop_assert_eq!(hecke_compose(&x, &y).unwrap(), hecke_compose(&x2, &y2).unwrap());
    }
}

#[test]
fn coset_counts() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        assert_eq!(coset_reps_m(p).unwrap().len() as u64, p + 1);
    }
    assert_eq!(coset_reps_m(4).unwrap().len(), 7);
    assert_eq!(coset_reps_m(6).unwrap().len(), 12);
    // Pairwise inequivalent.
    let reps = coset_reps_m(12).unwrap();
    for (i, g) in reps.iter().enumerate() {
        for h in &reps[i + 1..] {
            assert!(!g.left_equivalent(h).unwrap());
        }
    }
}

#[test]
fn hecke_ring_relations() {
    let t = |n: u64| HeckeElement::from_cosets(&coset_reps_m(n).unwrap()).unwrap();
    let t23 = hecke_compose(&t(2), &t(3)).unwrap();
    assert_eq!(t23, t(6));
    assert_eq!(t23, hecke_compose(&t(3), &t(2)).unwrap());
    // T_2 T_2 = T(4) + 2 T(2, 2): the scalar coset 2I gets multiplicity 3.
    let sq = hecke_compose(&t(2), &t(2)).unwrap();
    let expected = HeckeElement::from_terms(
        coset_reps_m(4).unwrap().into_iter().map(|g| (rat(1), g)).chain([(rat(2), IntMatrix2::new(2, 0, 0, 2))]),
    )
    .unwrap();
    assert_eq!(sq, expected);
    assert_eq!(hecke_compose(&HeckeElement::identity(), &t(5)).unwrap(), t(5));
}

#[test]
fn eisenstein_series_are_eigenforms() {
    for k in [4u32, 6, 8, 10] {
        let f = eisenstein_qexp(k, 400).unwrap();
        for n in 1..=20u64 {
            let lambda = Rational::from_integer(divisor_sigma(n, k - 1).unwrap());
            assert!(hecke_tn(&f, n).unwrap().agrees_with(&f.scale(&lambda)), "k={k} n={n}");
        }
    }
}

#[test]
fn delta_is_an_eigenform() {
    let d = delta_qexp(200).unwrap();
    for n in [2u64, 3, 4, 5, 6, 7, 10] {
        let tau_n = d.coeff(n).unwrap();
        assert!(hecke_tn(&d, n).unwrap().agrees_with(&d.scale(&tau_n)));
    }
    assert_eq!(d.coeff(2).unwrap(), rat(-24));
    assert_eq!(d.coeff(11).unwrap(), rat(534_612));
}

#[test]
fn elliptic_oracle_value() {
    assert_eq!(eisenstein_qexp(12, 50).unwrap().coeff(1).unwrap(), rat_frac(65520, 691));
}
