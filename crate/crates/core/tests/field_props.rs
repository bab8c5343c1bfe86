use optcurve_core::curves::CountingField;
use optcurve_core::ff::{discriminant, enumerate_discriminant_fields, FieldElement, FieldSpec};
use proptest::prelude::*;

const ORDERS: [u64; 20] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 81, 101, 121, 125, 243, 343, 625, 1024];

fn odd_orders_upto(n: u64) -> Vec<u64> {
    (3..=n).step_by(2).filter(|&q| FieldSpec::with_order(q).is_ok()).collect()
}

/// Schoolbook product of coefficient vectors reduced by the monic modulus.
fn oracle_mul(k: &FieldSpec, x: FieldElement, y: FieldElement) -> Vec<u64> {
    let p = k.p();
    let (a, b) = (k.coeffs(x), k.coeffs(y));
    let n = a.len();
    let mut prod = vec![0u64; 2 * n];
    for i in 0..n {
        for j in 0..n {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    if let Some(modulus) = k.modulus() {
        for top in (n..2 * n).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &mc) in modulus.iter().enumerate().take(n) {
                let idx = top - n + i;
                prod[idx] = (prod[idx] + p * p - c * mc % p) % p;
            }
            prod[top] = 0;
        }
    }
    prod.truncate(n);
    prod
}

fn field_and_triple() -> impl Strategy<Value = (u64, u64, u64, u64)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|q| (Just(q), 0..q, 0..q, 0..q))
}

proptest! {
    #[test]
    fn ring_axioms_and_oracle((q, x, y, z) in field_and_triple()) {
        let k = FieldSpec::with_order(q).unwrap();
        let (x, y, z) = (k.element(x).unwrap(), k.element(y).unwrap(), k.element(z).unwrap());
        prop_assert_eq!(k.coeffs(k.mul(x, y)), oracle_mul(&k, x, y));
        let sum: Vec<u64> = k.coeffs(x).iter().zip(k.coeffs(y)).map(|(a, b)| (a + b) % k.p()).collect();
        prop_assert_eq!(k.coeffs(k.add(x, y)), sum);
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        prop_assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
        prop_assert_eq!(k.add(k.sub(x, y), y), x);
        prop_assert_eq!(k.add(x, k.neg(x)), k.zero());
        if !x.is_zero() {
            prop_assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
            prop_assert_eq!(k.pow(x, q - 1), k.one());
        } else {
            prop_assert!(k.inv(x).is_err());
        }
    }

    #[test]
    fn generator_has_full_order(q in prop::sample::select(ORDERS.to_vec())) {
        let k = FieldSpec::with_order(q).unwrap();
        let g = k.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = k.one();
        for _ in 0..q - 1 {
            prop_assert!(seen.insert(x));
            x = k.mul(x, g);
        }
        prop_assert_eq!(x, k.one());
    }
}

#[test]
fn quadratic_character_is_multiplicative_and_matches_squares() {
    for q in odd_orders_upto(101) {
        let cf = CountingField::with_order(q).unwrap();
        let k = cf.spec();
        let mut is_square = vec![false; q as usize];
        for y in k.elements() {
            is_square[k.sqr(y).index()] = true;
        }
        for x in k.elements() {
            let expect = if x.is_zero() {
                0
            } else if is_square[x.index()] {
                1
            } else {
                -1
            };
            assert_eq!(cf.chi(x), expect, "q={q} x={x:?}");
            assert_eq!(k.quadratic_character(x).unwrap(), expect);
            for y in k.elements() {
                assert_eq!(cf.chi(k.mul(x, y)), cf.chi(x) * cf.chi(y), "q={q}");
            }
        }
    }
}

#[test]
fn fifth_root_counts_match_enumeration() {
    for q in odd_orders_upto(101) {
        let cf = CountingField::with_order(q).unwrap();
        let k = cf.spec();
        let mut roots = vec![0u64; q as usize];
        for w in k.elements() {
            roots[k.pow(w, 5).index()] += 1;
        }
        for c in k.elements() {
            assert_eq!(cf.fifth_roots(c), roots[c.index()], "q={q}");
        }
        if q % 5 == 1 {
            for x in k.elements().skip(1) {
                for y in k.elements().skip(1) {
                    let s = (cf.quintic(x).unwrap() + cf.quintic(y).unwrap()) % 5;
                    assert_eq!(cf.quintic(k.mul(x, y)), Some(s));
                }
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    let limit = 200_000;
    let prime_powers: Vec<u64> = (2..=limit)
        .filter(|&q| {
            let p = (2..).take_while(|p| p * p <= q).find(|p| q % p == 0).unwrap_or(q);
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            r == 1
        })
        .collect();
    for d in [-3, -4, -7, -8, -11, -19] {
        let brute: Vec<u64> = prime_powers.iter().copied().filter(|&q| discriminant(q).d == d).collect();
        let got: Vec<u64> = enumerate_discriminant_fields(d, limit).unwrap().iter().map(|r| r.q).collect();
        assert_eq!(got, brute, "d={d}");
    }
}

#[test]
fn known_field_lists() {
    let q = |d, n| -> Vec<u64> { enumerate_discriminant_fields(d, n).unwrap().iter().map(|r| r.q).collect() };
    assert_eq!(q(-19, 150), [47, 61, 137]);
    assert_eq!(q(-11, 9999), [23, 59, 113, 243, 383, 509, 653, 1193, 1409, 3083, 4973, 6323, 8933]);
    assert_eq!(q(-19, 9999).len(), 26);
    assert_eq!(discriminant(563).d, -43);
    assert!(enumerate_discriminant_fields(-5, 100).is_err());
}
