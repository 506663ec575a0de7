//! Acceptance suite: each criterion runs under its time budget and prints
//! one PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semialg_core::conic::{conic_decompose, newton_halved_lattice, ConicOutcome};
use semialg_core::lasserre::{
    build_relaxation, lower_bound_bisect, parse_sdpa, sos_only, to_sdpa, verify_module_membership, BisectSettings,
};
use semialg_core::quadform::{
    diagonalize, is_psd, is_psd_by_diagonal, is_psd_by_minors, signature, signature_descartes,
    weighted_square_decomposition,
};
use semialg_core::rootcount::{
    count_complex_distinct, count_positive_roots_realrooted, count_real_roots, count_real_with_signs,
    is_real_rooted, sign_changes, sign_changes_of,
};
use semialg_core::sos::{
    cassels_descent, find_gram, gram_family, pythagorean_instance, verify_gram, InfeasibleReason, Outcome, SosCert,
};
use semialg_core::{parse_poly, rat, CharSign, Mat, MPoly, Rat, SymMat, UPoly};

fn p2(s: &str) -> MPoly {
    parse_poly(s, 2).unwrap()
}

fn descartes_golden() {
    let f = UPoly::from_i64(&[-150, 115, -21, -5, 1]);
    assert_eq!(sign_changes(&f).unwrap(), 3);
    assert_eq!(sign_changes(&f.compose_neg()).unwrap(), 1);
    let g = &UPoly::from_i64(&[1, 1]).pow(22) * &f;
    assert_eq!(sign_changes(&g).unwrap(), 1);
    assert_eq!(count_real_roots(&f).unwrap(), 2);
    assert_eq!(count_real_with_signs(&f, &[UPoly::x()]).unwrap(), 1);
}

fn symmetric_matrix_golden() {
    let f = UPoly::from_i64(&[1, 4, -1, -1]);
    assert!(is_real_rooted(&f).unwrap());
    assert_eq!(count_real_roots(&f).unwrap(), 3);
    assert_eq!(count_complex_distinct(&f).unwrap(), 3);
    assert_eq!(count_positive_roots_realrooted(&f).unwrap(), 1);
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=3))
}

fn hermite_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let mut f = UPoly::constant(Rat::from(rng.gen_range(1i64..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }));
        let mut roots: Vec<Rat> = Vec::new();
        let mut quads: Vec<(Rat, Rat)> = Vec::new();
        let mut deg = 0;
        while deg < 12 {
            if rng.gen_bool(0.3) && deg + 2 <= 12 {
                // x^2 + b x + c with b^2 < 4c
                let b = random_rat(&mut rng);
                let c = &(&b * &b) / &Rat::from(4) + rat(rng.gen_range(1i64..=9), rng.gen_range(1i64..=4));
                if !quads.contains(&(b.clone(), c.clone())) {
                    f = &f * &UPoly::new(vec![c.clone(), b.clone(), Rat::one()]);
                    quads.push((b, c));
                    deg += 2;
                }
            } else {
                let r = random_rat(&mut rng);
                let m = rng.gen_range(1..=3).min(12 - deg);
                f = &f * &UPoly::linear_root(&r).pow(m as u32);
                if !roots.contains(&r) {
                    roots.push(r);
                }
                deg += m;
            }
            if rng.gen_bool(0.2) {
                break;
            }
        }
        assert_eq!(count_real_roots(&f).unwrap(), roots.len());
        let distinct = roots.len() + 2 * quads.len();
        assert_eq!(count_complex_distinct(&f).unwrap(), distinct);
        let gcd = f.gcd(&f.derivative());
        assert_eq!(distinct, f.degree().unwrap() - gcd.degree().unwrap());

        let ng = rng.gen_range(0..=2);
        let gs: Vec<UPoly> = (0..ng)
            .map(|_| {
                let d = rng.gen_range(1..=2);
                UPoly::new((0..=d).map(|_| random_rat(&mut rng)).collect())
            })
            .filter(|g| !g.is_zero())
            .collect();
        let expected = roots.iter().filter(|r| gs.iter().all(|g| g.eval(r).is_positive())).count();
        assert_eq!(count_real_with_signs(&f, &gs).unwrap(), expected);
    }
}

fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMat {
    let mut s = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-4i64..=4) };
            s.set(i, j, rat(v, rng.gen_range(1i64..=3)));
        }
    }
    s
}

fn signature_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..200 {
        let n = 1 + k % 8;
        let m = random_sym(&mut rng, n);
        let h = m.to_mat().charpoly(CharSign::Minus).unwrap();
        let by_descartes = sign_changes_of(&h) as i64 - sign_changes_of(&h.compose_neg()) as i64;
        assert_eq!(signature(&m), by_descartes);
        assert_eq!(signature_descartes(&m), by_descartes);
        let dc = diagonalize(&m);
        assert_eq!(dc.reconstruct(), m.to_mat());
    }
}

fn psd_three_way() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut psd_seen = 0;
    for k in 0..200 {
        let n = 1 + k % 5;
        let m = if k % 2 == 0 {
            random_sym(&mut rng, n)
        } else {
            // B^T B with B of random rank is psd, often singular
            let r = rng.gen_range(1..=n);
            let b = Mat::new(r, n, (0..r * n).map(|_| Rat::from(rng.gen_range(-2i64..=2))).collect()).unwrap();
            SymMat::from_mat(&b.transpose().mul(&b).unwrap()).unwrap()
        };
        let a = is_psd_by_diagonal(&m);
        assert_eq!(a, is_psd(&m));
        assert_eq!(a, is_psd_by_minors(&m));
        psd_seen += a as usize;
    }
    assert!(psd_seen >= 100);
}

fn gram_golden() {
    let f = p2("2*x1^4 + 5*x2^4 - x1^2*x2^2 + 2*x1^3*x2");
    let v = newton_halved_lattice(&f).unwrap();
    assert_eq!(v, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    let fam = gram_family(&f, &v).unwrap();
    assert_eq!(fam.dimension(), 1);
    let t0 = fam.g0.get(0, 2).clone();
    let dir = fam.basis[0].get(0, 2).clone();
    for a in [-3i64, 1, 4] {
        let g = fam.member(&[(Rat::from(a) - &t0) / &dir]);
        assert_eq!(g, SymMat::from_i64(&[&[2, 1, a], &[1, -2 * a - 1, 0], &[a, 0, 5]]));
    }
    let g = SymMat::from_i64(&[&[2, 1, -3], &[1, 5, 0], &[-3, 0, 5]]);
    assert!(is_psd(&g));
    assert_eq!(verify_gram(&f, &g, &v), Ok(()));
    let squares = weighted_square_decomposition(&g, &v).unwrap();
    assert_eq!(squares.expand(), f);
    let paper = SosCert::from_pairs(2, vec![(rat(1, 2), p2("2*x1^2 + x1*x2 - 3*x2^2")), (rat(1, 2), p2("3*x1*x2 + x2^2"))]).unwrap();
    assert_eq!(paper.verify(&f), Ok(()));
}

fn motzkin() {
    let f = p2("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1");
    match find_gram(&f).unwrap() {
        Outcome::Infeasible(InfeasibleReason::ForcedNegativeDiagonal { value, .. }) => assert_eq!(value, Rat::from(-3)),
        other => panic!("unexpected {other:?}"),
    }
    let lifted = &p2("1 + x^2") * &f;
    let c = SosCert::from_pairs(2, vec![(Rat::one(), p2("1 - x^2*y^2")), (Rat::one(), p2("x - x*y^2")), (Rat::one(), p2("x*y - x^3*y"))]).unwrap();
    assert_eq!(c.verify(&lifted), Ok(()));
    let found = find_gram(&lifted).unwrap().certified().expect("(1+x^2) f has a Gram certificate");
    assert_eq!(verify_gram(&lifted, &found.gram, &found.monomials), Ok(()));

    let cubed = f.compose(&[p2("x^3"), p2("y^3")]).unwrap();
    let h = rat(1, 2);
    let half = |a: &str, b: &str| (&p2(a) + &p2(b)).scale(&h);
    let c = SosCert::from_pairs(
        2,
        vec![
            (Rat::one(), &p2("x^2*y") - &half("x^4*y^5", "x^6*y^3")),
            (Rat::one(), &p2("x*y^2") - &half("x^3*y^6", "x^5*y^4")),
            (Rat::one(), &p2("1") - &half("x^2*y^4", "x^4*y^2")),
            (rat(3, 4), p2("x^2*y^4 - x^4*y^2")),
            (rat(3, 4), p2("x^3*y^6 - x^5*y^4")),
            (rat(3, 4), p2("x^4*y^5 - x^6*y^3")),
        ],
    )
    .unwrap();
    assert_eq!(c.verify(&cubed), Ok(()));
}

fn cassels() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let (w, fs, g) = pythagorean_instance(&mut rng);
        let out = cassels_descent(&w, &fs, &g).unwrap();
        let degs = &out.denominator_degrees;
        assert!(degs.windows(2).all(|d| d[1] < d[0]));
        assert_eq!(degs.last(), Some(&0));
        assert!(degs.len() - 1 <= g.degree().unwrap());
        assert_eq!(out.cert.check_weights(), Ok(()));
        assert_eq!(out.cert.expand(), MPoly::from_upoly(&out.h, 1, 0));
        let num = w.iter().zip(&fs).fold(UPoly::zero(), |s, (a, f)| &s + &(f * f).scale(a));
        assert_eq!(num, &out.h * &(&g * &g));
    }
}

/// Membership by trying every linearly independent subset of size up to 3.
fn member_oracle(e: &[Vec<Rat>], x: &[Rat]) -> bool {
    if x.iter().all(Rat::is_zero) {
        return true;
    }
    let m = e.len();
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        if idx.len() > 3 {
            continue;
        }
        // columns are the chosen vectors
        let cols = Mat::from_rows(idx.iter().map(|&k| e[k].clone()).collect()).unwrap();
        if cols.rank() != idx.len() {
            continue;
        }
        if let Some(lambda) = cols.transpose().solve(x).unwrap() {
            if lambda.iter().all(|l| !l.is_negative()) {
                return true;
            }
        }
    }
    false
}

fn fundamental_theorem() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in 0..500 {
        let size = rng.gen_range(1..=8);
        let flat = k % 5 == 0;
        let vec3 = |rng: &mut ChaCha8Rng| -> Vec<Rat> {
            let mut v: Vec<Rat> = (0..3).map(|_| Rat::from(rng.gen_range(-3i64..=3))).collect();
            if flat {
                v[2] = &v[0] + &v[1];
            }
            v
        };
        let e: Vec<Vec<Rat>> = (0..size).map(|_| vec3(&mut rng)).collect();
        let x: Vec<Rat> = if k % 7 == 0 { (0..3).map(|_| Rat::from(rng.gen_range(-3i64..=3))).collect() } else { vec3(&mut rng) };
        let out = conic_decompose(&e, &x).unwrap();
        assert!(out.verify(&e, &x), "postconditions for {e:?}, {x:?}: {out:?}");
        assert_eq!(out.is_member(), member_oracle(&e, &x), "oracle disagrees on {e:?}, {x:?}");
        if let ConicOutcome::Member { basis, .. } = &out {
            assert!(basis.len() <= 3);
        }
    }
}

fn tangent_system() -> Vec<MPoly> {
    vec![p2("1 - x1 + x2"), p2("1 - x1^4 - x2^4")]
}

fn lasserre_golden() {
    let rel = build_relaxation(2, &tangent_system(), 4).unwrap();
    assert_eq!(rel.block_sizes(), vec![6, 3, 1]);
    assert_eq!(rel.num_vars(), 14);
    let prob = to_sdpa(&rel, &p2("x1")).unwrap();
    let text = prob.render();
    let lines: Vec<&str> = text.lines().take(3).collect();
    assert_eq!(lines, ["14", "3", "6 3 1"]);
    let back = parse_sdpa(&text).unwrap();
    assert_eq!(back, prob);
    assert_eq!(back.render(), text);
}

fn lasserre_tangent() {
    let h = p2("x1^4 + x2^4 - 4*x1 + 3");
    let g = find_gram(&h).unwrap().certified().expect("h is a sum of squares");
    assert_eq!(verify_gram(&h, &g.gram, &g.monomials), Ok(()));
    let squares = g.squares();
    assert_eq!(squares.verify(&h), Ok(()));
    assert_eq!(verify_module_membership(&h, &tangent_system(), 4, &sos_only(squares, 2)), Ok(()));
}

fn bisection() {
    let gs = vec![parse_poly("x", 1).unwrap(), parse_poly("1 - x", 1).unwrap()];
    let f = parse_poly("x", 1).unwrap();
    let b = lower_bound_bisect(&f, &gs, 2, 12, None, &BisectSettings::default()).unwrap().certified().expect("bracket");
    let cert = b.cert.as_ref().expect("exactly certified lower bound");
    let shifted = &f - &MPoly::constant(1, b.lo.clone());
    assert_eq!(verify_module_membership(&shifted, &gs, 2, cert), Ok(()));
    assert!(b.lo >= rat(-1, 100));
    assert!(b.width() <= rat(1, 10));
    assert!(b.lo <= Rat::zero() && b.hi >= Rat::zero());
}

fn main() {
    let criteria: [(&str, fn(), u64); 12] = [
        ("1 Descartes golden", descartes_golden, 1),
        ("2 symmetric-matrix golden", symmetric_matrix_golden, 1),
        ("3 Hermite oracle suite", hermite_suite, 30),
        ("4 signature dual-method", signature_dual, 10),
        ("5 psd three-way", psd_three_way, 10),
        ("6 Gram golden", gram_golden, 1),
        ("7 Motzkin", motzkin, 1),
        ("8 Cassels descent", cassels, 5),
        ("9 conic representation", fundamental_theorem, 30),
        ("10 Lasserre golden", lasserre_golden, 1),
        ("11 Lasserre tangent quartic", lasserre_tangent, 60),
        ("12 bisection", bisection, 30),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let ok = result.is_ok() && in_time;
        let note = match (&result, in_time) {
            (Err(_), _) => " (assertion failed)".to_string(),
            (Ok(()), false) => format!(" (over the {budget} s budget)"),
            _ => String::new(),
        };
        println!("criterion {name}: {} in {:.3} s{note}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
        if !ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
