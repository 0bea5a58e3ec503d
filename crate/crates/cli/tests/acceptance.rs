//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

use std::panic;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kstab_core::arith::{int, rat, to_f64, PiecewisePoly, Poly, Rational};
use kstab_core::autforms::{
    analyze_pencil, diagonal_pair_stabilizer, ker_h_group, lie_stabilizer_dim,
    lie_stabilizer_dim_with, signed_permutation_stabilizer, LieConditions, PencilConfig, QForm,
};
use kstab_core::classify::{
    load_table, match_invariants, smooth_limit_report, LIMIT_SINGULAR, SEED_TABLE,
};
use kstab_core::geometry::{anticanonical, triple_form, BlowupGeometry, CurveClass, DivisorClass};
use kstab_core::positivity::{ConeSpec, DivisorPath};
use kstab_core::stability::{beta_for_direction, verdict_chain, BetaReport};
use kstab_core::Error;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn report_2_23() -> BetaReport {
    beta_for_direction(
        &BlowupGeometry::mori_mukai_2_23(),
        &DivisorClass::from_ints(1, -1),
        &int(1),
        &ConeSpec::blowup_default(),
    )
    .expect("2.23 report")
}

fn within(limit: Duration, start: Instant) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed >= limit {
        return Err(format!("took {elapsed:?}, limit {limit:?}"));
    }
    Ok(())
}

fn beta_reproduction() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_kstab"))
        .args([
            "beta",
            "--preset",
            "mori-mukai-2.23",
            "--direction",
            "1,-1",
            "--A",
            "1",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start)?;
    check!(out.status.success(), "exit {:?}", out.status.code());
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    for (key, want) in [
        ("beta", "-1/12"),
        ("sValue", "13/12"),
        ("anticanonicalVolume", "30"),
        ("nefThreshold", "1"),
        ("pseudoeffectiveThreshold", "3"),
    ] {
        check!(v[key] == want, "{key} = {}, expected {want}", v[key]);
    }
    Ok(())
}

fn volume_pieces() -> Outcome {
    let first = Poly::from_ints(&[-15, 3, 3, 1]).scale(&int(-2));
    let second = Poly::from_ints(&[3, -1]).pow(3).scale(&int(2));
    let want = PiecewisePoly::new(vec![int(0), int(1), int(3)], vec![first, second])
        .map_err(|e| e.to_string())?;
    let got = report_2_23().volume_pieces;
    check!(
        got == want,
        "pieces {:?}",
        got.pieces()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    Ok(())
}

fn integral_components() -> Outcome {
    let report = report_2_23();
    let pieces = report.volume_pieces.pieces();
    let i1 = pieces[0]
        .integrate(&int(0), &int(1))
        .map_err(|e| e.to_string())?;
    let i2 = pieces[1]
        .integrate(&int(1), &int(3))
        .map_err(|e| e.to_string())?;
    check!(i1 == rat(49, 2), "first integral {i1}");
    check!(i2 == int(8), "second integral {i2}");
    check!(&i1 + &i2 == rat(65, 2), "total {}", &i1 + &i2);
    check!(
        rat(65, 2) / int(30) == report.s_value && report.s_value == rat(13, 12),
        "S = {}",
        report.s_value
    );
    Ok(())
}

fn volume_regularity() -> Outcome {
    let report = report_2_23();
    let pieces = report.volume_pieces.pieces();
    let one = int(1);
    for p in pieces {
        check!(p.eval(&one) == int(16), "value {} at t = 1", p.eval(&one));
        check!(
            p.derivative().eval(&one) == int(-24),
            "derivative {} at t = 1",
            p.derivative().eval(&one)
        );
    }
    Ok(())
}

fn curve_pairings() -> Outcome {
    let geom = BlowupGeometry::mori_mukai_2_23();
    let path = DivisorPath::new(anticanonical(&geom), DivisorClass::from_ints(1, -1));
    let fibre = path.pairing_along(&CurveClass::fibre());
    let line = path.pairing_along(&CurveClass::line());
    check!(fibre == Poly::from_ints(&[1, -1]), "path·f = {fibre}");
    check!(line == Poly::from_ints(&[3, -1]), "path·π*L = {line}");
    Ok(())
}

fn automorphism_suite() -> Outcome {
    let start = Instant::now();
    let err = |e: Error| e.to_string();
    let case1 = ker_h_group(&QForm::identity(5), 0).map_err(err)?;
    check!(case1.order == 2, "Ker_H case 1 order {}", case1.order);
    let case2 = ker_h_group(&QForm::hyperbolic(5, 0, 1), 0).map_err(err)?;
    check!(case2.order == 1, "Ker_H case 2 order {}", case2.order);

    let b = QForm::diagonal_ints(&[1, 2, 3, 5]);
    let stab = diagonal_pair_stabilizer(&b).map_err(err)?;
    let brute = signed_permutation_stabilizer(&b);
    check!(stab.order == 8, "stabilizer order {}", stab.order);
    check!(
        brute.examined == 384,
        "brute force examined {}",
        brute.examined
    );
    check!(brute.survivors == stab.elements, "brute force disagrees");

    let sample = PencilConfig::subfamily_a_sample();
    let dims = [
        lie_stabilizer_dim(&sample),
        lie_stabilizer_dim_with(&sample, LieConditions::NONE),
        lie_stabilizer_dim_with(&sample, LieConditions::QUADRIC_ONLY),
    ];
    check!(dims == [0, 24, 10], "Lie dimensions {dims:?}");
    within(Duration::from_secs(5), start)
}

fn simpson(coeffs: &[f64], a: f64, b: f64, panels: usize) -> f64 {
    let f = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels)
        .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h))
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cone = ConeSpec::blowup_default();
    let dir = DivisorClass::from_ints(1, -1);
    let mut completed = 0;
    for d in 1..=5 {
        for r in 1..=3 {
            for c in 1..=6 {
                for g in 0..=2 {
                    let geom = BlowupGeometry::from_ints(d, r, c, g).map_err(|e| e.to_string())?;
                    let Ok(report) = beta_for_direction(&geom, &dir, &int(1), &cone) else {
                        continue;
                    };
                    let integral: f64 = report
                        .volume_pieces
                        .intervals()
                        .map(|(a, b, p)| {
                            let coeffs: Vec<f64> = p.coeffs().iter().map(to_f64).collect();
                            simpson(&coeffs, to_f64(a), to_f64(b), 1 << 14)
                        })
                        .sum();
                    let numeric = integral / to_f64(&report.anticanonical_volume);
                    let exact = to_f64(&report.s_value);
                    check!(
                        (numeric - exact).abs() < 1e-9,
                        "({d},{r},{c},{g}): S = {exact}, Simpson {numeric}"
                    );
                    completed += 1;
                }
            }
        }
    }
    check!(completed > 0, "no grid point completed");

    let small = || (-20i64..20, 1i64..6).prop_map(|(n, m)| rat(n, m));
    let instance = (
        (1i64..6, 1i64..4, 0i64..7, 0u32..3),
        proptest::collection::vec(small(), 8),
    );
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    for _ in 0..100 {
        let ((d, r, c, g), q) = instance
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let form = triple_form(&BlowupGeometry::from_ints(d, r, c, g).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let x = DivisorClass::new(q[0].clone(), q[1].clone());
        let y = DivisorClass::new(q[2].clone(), q[3].clone());
        let z = DivisorClass::new(q[4].clone(), q[5].clone());
        let w = DivisorClass::new(q[6].clone(), q[7].clone());
        let v = form.triple_product(&x, &y, &z);
        for (p, s, t) in [
            (&x, &z, &y),
            (&y, &x, &z),
            (&y, &z, &x),
            (&z, &x, &y),
            (&z, &y, &x),
        ] {
            check!(
                form.triple_product(p, s, t) == v,
                "symmetry fails for ({d},{r},{c},{g})"
            );
        }
        let lambda: Rational = &q[0] + &q[3];
        for slot in 0..3 {
            let mut args = [x.clone(), y.clone(), z.clone()];
            let mut moved = args.clone();
            moved[slot] = args[slot].add(&w.scale(&lambda));
            args[slot] = w.clone();
            let lhs = form.triple_product(&moved[0], &moved[1], &moved[2]);
            let rhs = &v + &lambda * form.triple_product(&args[0], &args[1], &args[2]);
            check!(
                lhs == rhs,
                "linearity fails in slot {slot} for ({d},{r},{c},{g})"
            );
        }
    }
    within(Duration::from_secs(30), start)
}

fn classification_step() -> Outcome {
    let table = load_table(SEED_TABLE.as_bytes()).map_err(|e| e.to_string())?;
    let matches = match_invariants(&table, 2, 2, &int(30));
    check!(matches == ["2.23"], "matches {matches:?}");
    let aut = analyze_pencil(&PencilConfig::subfamily_a_sample()).map_err(|e| e.to_string())?;
    let verdict = verdict_chain(&[report_2_23()], aut.aut_finite);
    let report = smooth_limit_report(&matches, &verdict);
    check!(
        report.conclusion == LIMIT_SINGULAR,
        "conclusion {:?}",
        report.conclusion
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "beta reproduction (beta -1/12, S 13/12, V 30, thresholds 1 and 3)",
            beta_reproduction,
        ),
        ("volume pieces coefficient by coefficient", volume_pieces),
        ("integral components 49/2 + 8 = 65/2", integral_components),
        (
            "volume regularity at t = 1 (value 16, slope -24)",
            volume_regularity,
        ),
        ("curve pairings 1 - t and 3 - t", curve_pairings),
        (
            "automorphism suite (Ker_H, stabilizer vs brute force, Lie dims)",
            automorphism_suite,
        ),
        (
            "oracle equivalence (Simpson grid, triple product properties)",
            oracle_equivalence,
        ),
        (
            "classification step (seed table, singular limit)",
            classification_step,
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {} PASS  {name} ({elapsed:.3}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} ({elapsed:.3}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
