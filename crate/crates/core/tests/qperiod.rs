use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use quadreg::cycle::walk_cycle;
use quadreg::field::FieldCtx;
use quadreg::qperiod::{build_run, decode_two_samples, good_js, min_q_exponent, DiscretizedH};

#[test]
fn h_tilde_follows_the_unrolled_cycle() {
    let ctx = FieldCtx::new(3).unwrap();
    let cycle = walk_cycle(&ctx, 128).unwrap();
    let n = 64u64;
    let top = (3.0 * n as f64 * cycle.regulator.to_f64()).floor() as u64;
    let mut h = DiscretizedH::new(&ctx, n, top);
    for k in 0..=top {
        let x = BigRational::new(BigInt::from(k), BigInt::from(n));
        let (i, _, delta) = cycle.member_at_or_below(&x);
        let steps = ((x - delta.to_rational()) * BigInt::from(n)).floor().to_integer();
        let v = h.value(k).unwrap();
        assert_eq!(v.ideal, cycle.entries[i].ideal, "k={k}");
        assert_eq!(v.gap_steps, steps, "k={k}");
    }
}

#[test]
fn translated_preimage_sets_share_a_distribution() {
    let ctx = FieldCtx::new(5).unwrap();
    let r = walk_cycle(&ctx, 128).unwrap().regulator.to_rational();
    let s = &r * BigInt::from(16);
    let exp = min_q_exponent(&s);
    let mut h = DiscretizedH::new(&ctx, 16, 1 << exp);
    let run = build_run(&mut h, exp, &s).unwrap();
    let q = run.q();
    let mut by_shape: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut compared = 0;
    for (g, members) in run.groups().iter().enumerate() {
        let shape: Vec<usize> = members.iter().map(|m| m - members[0]).collect();
        if let Some(&other) = by_shape.get(&shape) {
            let a = run.distribution(g).unwrap();
            let b = run.distribution(other).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
            compared += 1;
        } else {
            by_shape.insert(shape, g);
        }
    }
    assert!(compared > 0, "no translated groups among {} in q={q}", run.groups().len());
}

#[test]
fn decoder_finds_the_period_from_coprime_good_outcomes() {
    for d in [3u64, 5, 13] {
        let ctx = FieldCtx::new(d).unwrap();
        let r = walk_cycle(&ctx, 128).unwrap().regulator.to_rational();
        for n in [16u64, 64] {
            let s = &r * BigInt::from(n);
            let q = 1u64 << min_q_exponent(&s);
            let sf = s.to_f64().unwrap();
            let lo = s.floor().to_integer();
            let hi = s.ceil().to_integer();
            let good = good_js(q as usize, sf);
            for a in &good {
                for b in &good {
                    if num_integer::Integer::gcd(&a.k, &b.k) != 1 || a.k == b.k {
                        continue;
                    }
                    let cands = decode_two_samples(a.j as u64, b.j as u64, q).unwrap();
                    assert!(cands.contains(&lo) || cands.contains(&hi), "d={d} N={n} k={} l={}: {cands:?}", a.k, b.k);
                }
            }
        }
    }
}
