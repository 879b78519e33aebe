//! Property tests for the arithmetic, divisor and linear-algebra invariants
//! the descent relies on.

use std::sync::OnceLock;

use proptest::prelude::*;

use ecdlog_core::algebra::{int, Tower};
use ecdlog_core::descent;
use ecdlog_core::divisor::{divisor_of_function, Func};
use ecdlog_core::dlp::{self, Echelon};
use ecdlog_core::model::{random_function, Model};
use ecdlog_core::rng;

fn model() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(|| Model::build(5, 5, Some(1)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_is_a_field(p in prop::sample::select(vec![2u32, 3, 5, 7]), d in 1usize..7, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let k = Tower::get(p).field(d);
        let size = k.order().unwrap();
        let (a, b, c) = (k.from_index(a as u128 % size), k.from_index(b as u128 % size), k.from_index(c as u128 % size));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.frob(&a, d as i64), a);
        prop_assert_eq!(k.pow(&a, size), a);
        if !a.is_zero() {
            prop_assert_eq!(k.mul(&a, &k.inv(&a)), k.one());
        }
        prop_assert_eq!(k.from_hex(&k.to_hex(&a)), Some(a));
    }

    #[test]
    fn points_form_a_group(seed in any::<u64>()) {
        let m = model();
        let k = m.level_field(1);
        let c = &m.curve;
        let mut r = rng::stream(seed, "group");
        let (a, b, d) = (c.random_point(&k, &mut r), c.random_point(&k, &mut r), c.random_point(&k, &mut r));
        prop_assert_eq!(c.add(&k, &c.add(&k, &a, &b), &d), c.add(&k, &a, &c.add(&k, &b, &d)));
        prop_assert_eq!(c.add(&k, &a, &b), c.add(&k, &b, &a));
        prop_assert!(c.add(&k, &a, &c.neg(&k, &a)).inf);
        prop_assert!(c.is_on(&k, &c.frob(&k, &a, 1)));
    }

    #[test]
    fn principal_divisors_are_additive(seed in any::<u64>()) {
        let m = model();
        let k = m.base();
        let c = &m.curve;
        let mut r = rng::stream(seed, "div");
        let f = random_function(c, k, &mut r);
        let g = random_function(c, k, &mut r);
        let df = divisor_of_function(c, k, &f);
        let dg = divisor_of_function(c, k, &g);
        prop_assert_eq!(df.degree(), 0);
        prop_assert!(df.is_principal(c));
        prop_assert_eq!(divisor_of_function(c, k, &f.mul(c, k, &g)), df.add(&dg));
    }

    #[test]
    fn representation_is_a_residue(seed in any::<u64>()) {
        let m = model();
        let mut r = rng::stream(seed, "rep");
        let v = m.field().random_nonzero(&mut r);
        let f = descent::represent(m, &v).unwrap();
        let func = Func::from_x_poly(m.base(), f);
        prop_assert_eq!(m.residue_eval(&func).unwrap(), v);
    }

    #[test]
    fn echelon_solutions_satisfy_rows(seed in any::<u64>(), which in 0usize..3) {
        let (p, e) = [(2u128, 3u32), (11, 2), (101, 1)][which];
        let md = p.pow(e);
        let mut r = rng::stream(seed, "ech");
        use rand::Rng;
        let cols = 5;
        let x: Vec<u128> = (0..cols).map(|_| r.gen_range(0..md)).collect();
        let mut ech = Echelon::new(p, md, cols);
        let mut rows = Vec::new();
        for _ in 0..200 {
            if ech.is_full() {
                break;
            }
            let row: Vec<u128> = (0..cols).map(|_| r.gen_range(0..md)).collect();
            let rhs = row.iter().zip(&x).fold(0, |acc, (a, b)| (acc + int::mulmod(*a, *b, md)) % md);
            ech.insert(&row, rhs);
            rows.push(row);
        }
        prop_assert!(ech.is_full());
        prop_assert_eq!(ech.solution().unwrap(), x);
    }

    #[test]
    fn pohlig_hellman_matches_bsgs(x in 0u128..3124) {
        let m = model();
        let f = m.field();
        let g = dlp::default_generator(m);
        let h = f.pow(&g, x);
        let order = m.group_order();
        prop_assert_eq!(dlp::bsgs(f, &g, &h, order), Some(x));
        prop_assert_eq!(dlp::pohlig_hellman(f, &g, &h, order, &int::factorize(order)), Some(x));
        prop_assert_eq!(dlp::solve_mod_s(m, &g, &h).unwrap(), x % m.s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lifted_places_keep_the_residue(seed in any::<u64>()) {
        let m = model();
        let mut r = rng::stream(seed, "lift");
        let v = m.field().random_nonzero(&mut r);
        let (g, pl) = descent::lift_to_place(m, &v, 2, &mut r, 1 << 20).unwrap();
        prop_assert_eq!(m.residue_eval(&g).unwrap(), v);
        let div = divisor_of_function(&m.curve, m.base(), &g).finite_part();
        prop_assert_eq!(div.terms.len(), 1);
        prop_assert_eq!(div.terms.get(&pl), Some(&1));
        prop_assert_eq!(pl.deg, 16);
    }
}
