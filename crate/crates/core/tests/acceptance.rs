//! Acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p idl --test acceptance`. Exits non-zero when any
//! criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use idl::constructions::{build_tinf_approx, build_tn, reflect_middle_surgery, tent};
use idl::forcing::{
    cover_graph, even_period_witness, lemma1_witnesses, realize_cycle, unified_witnesses,
    verify_tail_property,
};
use idl::laps::{fixed_point_set, LapIterates};
use idl::{enumerate_orbits, is_tail, Orbit, PLMap, Rational, DEFAULT_PIECE_BUDGET};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: usize = DEFAULT_PIECE_BUDGET;

type Check = fn() -> Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Points of least period `n` of a full 2-branch map: Σ_{d|n} μ(n/d)·2^d.
fn primitive_points(n: u64) -> i64 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(n / d) * (1i64 << d))
        .sum()
}

/// Sharkovsky rank key: larger key means earlier in the order 3 ≺ 5 ≺ … ≺ 4 ≺ 2 ≺ 1.
fn rank(n: u64) -> (u8, i64, i64) {
    let e = n.trailing_zeros() as i64;
    let odd = (n >> e) as i64;
    if odd == 1 {
        (0, e, 0)
    } else {
        (1, -e, -odd)
    }
}

/// `{ k <= bound : n ≼ k }`, by direct comparison of rank keys.
fn tail_oracle(n: u64, bound: u64) -> BTreeSet<u64> {
    (1..=bound).filter(|&k| rank(n) >= rank(k)).collect()
}

fn periods_of(map: &PLMap, bound: u64) -> BTreeSet<u64> {
    verify_tail_property(map, bound, BUDGET)
        .expect("period enumeration")
        .periods
}

fn has_point(map: &PLMap, period: u64, x: &Rational) -> bool {
    enumerate_orbits(map, period, BUDGET)
        .expect("orbit enumeration")
        .iter()
        .any(|o| o.contains(x))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_tent_roots() -> Result<String, String> {
    let t = tent();
    for (i, d) in LapIterates::new(&t, BUDGET).take(12).enumerate() {
        let n = i + 1;
        let fps = fixed_point_set(&d.map_err(|e| e.to_string())?);
        ensure(fps.identity_segments.is_empty(), || {
            format!("T^{n} has an identity segment")
        })?;
        ensure(fps.points.len() == 1 << n, || {
            format!("T^{n}: {} roots, expected {}", fps.points.len(), 1 << n)
        })?;
    }
    Ok("|Fix T^n| = 2^n for n = 1..12".into())
}

fn c2_mobius() -> Result<String, String> {
    let t = tent();
    for n in 1..=12u64 {
        let orbits = enumerate_orbits(&t, n, BUDGET).map_err(|e| e.to_string())?;
        let points: i64 = orbits.iter().map(|o| o.period() as i64).sum();
        ensure(orbits.iter().all(|o| o.period() as u64 == n), || {
            format!("n = {n}: wrong period")
        })?;
        let expected = primitive_points(n);
        ensure(points == expected, || {
            format!("n = {n}: {points} points, oracle {expected}")
        })?;
    }
    Ok("least-period point counts equal the divisor-sum oracle for n = 1..12".into())
}

fn c3_tn() -> Result<String, String> {
    for n in [3u64, 5, 7, 9, 4, 6, 10, 8, 2, 1] {
        let tn = build_tn(n, BUDGET).map_err(|e| e.to_string())?;
        let got = periods_of(&tn.map, 12);
        let want = tail_oracle(n, 12);
        ensure(got == want, || {
            format!("T_{n}: periods {got:?}, expected {want:?}")
        })?;
        let count = enumerate_orbits(&tn.map, n, BUDGET)
            .map_err(|e| e.to_string())?
            .len();
        ensure(count == 1, || {
            format!("T_{n} has {count} orbits of period {n}")
        })?;
    }
    Ok("T_n period sets equal tail(n, 12) with a unique period-n orbit".into())
}

fn random_map(rng: &mut ChaCha8Rng) -> PLMap {
    const DEN: i64 = 12;
    let segments = rng.gen_range(1..=4usize);
    let mut inner: Vec<i64> = sample(rng, (DEN - 1) as usize, segments - 1)
        .into_iter()
        .map(|k| k as i64 + 1)
        .collect();
    inner.sort_unstable();
    let xs = std::iter::once(0).chain(inner).chain(std::iter::once(DEN));
    let nodes = xs
        .map(|x| (q(x, DEN), q(rng.gen_range(0..=DEN), DEN)))
        .collect();
    PLMap::new(nodes).expect("valid random map")
}

fn c4_random_tails() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut nontrivial = 0;
    for i in 0..100 {
        let f = random_map(&mut rng);
        let r = verify_tail_property(&f, 10, BUDGET)
            .map_err(|e| format!("map {i} ({}): {e}", f.to_json()))?;
        ensure(r.is_tail && is_tail(&r.periods, 10), || {
            format!("map {i} ({}): {:?} is not a tail", f.to_json(), r.periods)
        })?;
        let oracle_tail = r
            .periods
            .iter()
            .min_by_key(|&&p| std::cmp::Reverse(rank(p)))
            .map(|&p| tail_oracle(p, 10));
        ensure(oracle_tail.as_ref() == Some(&r.periods), || {
            format!("map {i}: oracle disagrees on {:?}", r.periods)
        })?;
        if r.periods.len() > 1 {
            nontrivial += 1;
        }
    }
    Ok(format!(
        "100 random maps give tails ({nontrivial} with more than period 1)"
    ))
}

fn c5_witnesses() -> Result<String, String> {
    let t = tent();
    for pts in [[q(2, 7), q(4, 7), q(6, 7)], [q(2, 9), q(4, 9), q(8, 9)]] {
        let p = Orbit::from_points(&t, pts.to_vec()).map_err(|e| e.to_string())?;
        let u = unified_witnesses(&t, &p, 1, BUDGET).map_err(|e| e.to_string())?;
        ensure(has_point(&t, 2, &u.y), || {
            format!("{:?}: y = {} is not of least period 2", p.points(), u.y)
        })?;
        ensure(has_point(&t, 5, &u.p_m2), || {
            format!("{:?}: {} is not of least period 5", p.points(), u.p_m2)
        })?;
        for n in 0..=5 {
            let w = even_period_witness(&t, &p, n, BUDGET).map_err(|e| e.to_string())?;
            let period = 2 * n + 2;
            ensure(
                w.period == period && has_point(&t, period, &w.point),
                || {
                    format!(
                        "{:?}: n = {n}: {} is not of least period {period}",
                        p.points(),
                        w.point
                    )
                },
            )?;
        }
    }
    Ok("periods 2, 5 and 2, 4, …, 12 witnessed for both period-3 orbits".into())
}

fn c6_lemma1() -> Result<String, String> {
    let t = tent();
    let w = lemma1_witnesses(&t, &q(1, 2), &q(0, 1), 2, 10, BUDGET).map_err(|e| e.to_string())?;
    for n in 1..=10u64 {
        let x = w.p.get(&n).ok_or_else(|| format!("no p_{n}"))?;
        ensure(has_point(&t, n, x), || {
            format!("p_{n} = {x} is not of least period {n}")
        })?;
    }
    Ok("p_n of least period n for n = 1..10".into())
}

fn c7_surgery() -> Result<String, String> {
    let z = q(2, 3);
    let g = reflect_middle_surgery(&tent(), &z, &z).map_err(|e| e.to_string())?;
    for m in [3u64, 5, 7] {
        let k = enumerate_orbits(&g, m, BUDGET)
            .map_err(|e| e.to_string())?
            .len();
        ensure(k == 0, || format!("g has {k} orbits of period {m}"))?;
    }
    for m in [4u64, 6, 8, 10, 12] {
        let k = enumerate_orbits(&g, m, BUDGET)
            .map_err(|e| e.to_string())?
            .len();
        ensure(k > 0, || format!("g has no orbit of period {m}"))?;
    }
    Ok("g has no period 3, 5, 7 and has periods 4, 6, 8, 10, 12".into())
}

fn c8_tinf() -> Result<String, String> {
    let mut prev: Option<(Rational, Rational)> = None;
    for d in 0..=2u32 {
        let a = build_tinf_approx(d, BUDGET).map_err(|e| e.to_string())?;
        let n = 3 << d;
        let got = periods_of(&a.map, 12);
        let want = tail_oracle(n, 12);
        ensure(got == want, || {
            format!("depth {d}: periods {got:?}, expected {want:?}")
        })?;
        if let Some((q0, q1)) = &prev {
            ensure(a.q0 > *q0 && a.q1 < *q1, || {
                format!(
                    "depth {d}: [{}, {}] not strictly inside [{q0}, {q1}]",
                    a.q0, a.q1
                )
            })?;
        }
        prev = Some((a.q0, a.q1));
    }
    let (q0, q1) = prev.expect("three depths ran");
    Ok(format!(
        "depths 0..2 match tail(3·2^d, 12); q0 ↑ {q0}, q1 ↓ {q1}"
    ))
}

fn c9_realize() -> Result<String, String> {
    let t = tent();
    let mut walks = 0;
    for p in enumerate_orbits(&t, 3, BUDGET).map_err(|e| e.to_string())? {
        let g = cover_graph(&p);
        for walk in g.closed_walks(6) {
            let x =
                realize_cycle(&t, &p, &walk, BUDGET).map_err(|e| format!("walk {walk:?}: {e}"))?;
            let mut y = x.clone();
            for &v in &walk {
                let (lo, hi) = &g.intervals[v];
                ensure(*lo <= y && y <= *hi, || {
                    format!("walk {walk:?}: itinerary leaves interval {v}")
                })?;
                y = t.eval(&y).map_err(|e| e.to_string())?;
            }
            ensure(y == x, || {
                format!("walk {walk:?}: T^{}({x}) = {y}", walk.len())
            })?;
            walks += 1;
        }
    }
    Ok(format!("{walks} closed walks realized exactly"))
}

fn main() {
    let criteria: [(u32, Check); 9] = [
        (1, c1_tent_roots),
        (2, c2_mobius),
        (3, c3_tn),
        (4, c4_random_tails),
        (5, c5_witnesses),
        (6, c6_lemma1),
        (7, c7_surgery),
        (8, c8_tinf),
        (9, c9_realize),
    ];
    let filter: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, check) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {id}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {id}: {detail} ({secs:.2}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
