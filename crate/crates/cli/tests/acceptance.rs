//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde_json::Value;
use uembed::ckmap::{self, verify_cks, GridCompact};
use uembed::embed::{
    hb_extensions, phelps_support, probe_functionals, random_sphere_functionals,
    verify_u_embedding, FiniteEmbedding, SignedWeightVector, Verdict,
};
use uembed::oracle::hb_oracle;
use uembed::space::{NormedSpace, PolyhedralSpace};
use uembed::usuit::build_u_suitable;
use uembed::{corpus, Rat, Scalar, Vector};

const SEED: u64 = 0;
const SAMPLES: usize = 1000;

type Criterion = (&'static str, fn() -> String);

fn canonical<S: Scalar>(space: &PolyhedralSpace<S>) -> FiniteEmbedding<S> {
    let e = build_u_suitable(space, None).unwrap();
    FiniteEmbedding::build_ue(space, &e).unwrap()
}

fn exact_corpus() -> Vec<PolyhedralSpace> {
    corpus::names()
        .filter_map(|n| match corpus::load(n).unwrap() {
            NormedSpace::Exact(s) => Some(s),
            _ => None,
        })
        .collect()
}

fn theta_n() -> PolyhedralSpace<f64> {
    match corpus::load("theta_n").unwrap() {
        NormedSpace::Float(s) => s,
        other => panic!("theta_n loaded as {}", other.name()),
    }
}

fn cli(args: &[&str]) -> uembed_cli::Execution {
    uembed_cli::run(std::iter::once("uembed").chain(args.iter().copied()))
}

fn criterion_1() -> String {
    let start = Instant::now();
    for name in ["linf2", "l1_2", "linf3", "hexagon"] {
        let space = corpus::exact(name).unwrap();
        assert!(space.simplexoid().unwrap().simplexoid, "{name} simplexoid");
        let cert = verify_u_embedding(&canonical(&space), SAMPLES, SEED).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedU, "{name}");
    }
    let l1_3 = corpus::exact("l1_3").unwrap();
    let sx = l1_3.simplexoid().unwrap();
    assert!(!sx.simplexoid);
    let face = sx.offending.expect("offending facet");
    assert_eq!((face.affine_dim, face.extreme_indices.len()), (2, 4), "square facet");
    let check = cli(&["check", "l1_3"]);
    assert!(check.stdout.contains("simplexoid: NO (square facet"), "{}", check.stdout);

    let euclid = corpus::load("euclidean2d").unwrap();
    let ob = uembed::usuit::prove_no_u_suitable(&euclid).unwrap();
    assert!(ob.gateaux_smooth && !ob.u_embeddable);
    let run = cli(&["embed", "euclidean2d"]);
    assert_eq!(run.code, uembed_cli::EXIT_SMOOTH);
    assert!(run.stdout.contains("Gâteaux smooth: YES"));

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    format!("6 spaces classified in {:.3} s", elapsed.as_secs_f64())
}

fn criterion_2() -> String {
    let start = Instant::now();
    let mut compared = 0;
    for space in exact_corpus() {
        if space.dim() > 3 || space.dual_extremes().len() > 8 {
            continue;
        }
        let emb = canonical(&space);
        for (_, f) in probe_functionals(&space, SAMPLES, SEED).unwrap() {
            let ext = hb_extensions(&emb, &f).unwrap();
            let oracle = hb_oracle(&space, emb.index_points(), &f);
            assert_eq!(ext.lp_min_value, oracle.norm, "{} lp min at {f}", space.name());
            assert_eq!(ext.norm_value, oracle.norm, "{} norm at {f}", space.name());
            assert_eq!(ext.unique, oracle.unique(), "{} verdict at {f}", space.name());
            compared += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    format!("{compared} functionals agree with vertex enumeration in {:.2} s", elapsed.as_secs_f64())
}

fn criterion_3() -> String {
    let mut checked = 0;
    for space in exact_corpus() {
        let ball = FiniteEmbedding::dual_ball(&space);
        let m = ball.index_points().len();
        let pos = |p: &Vector<Rat>| ball.index_points().iter().position(|q| q == p).unwrap();
        for x in space.dual_extremes() {
            let ext = hb_extensions(&ball, x).unwrap();
            assert!(!ext.unique, "{} at {x}", space.name());
            let plus = SignedWeightVector::dirac(m, pos(x), Rat::from_int(1));
            let minus = SignedWeightVector::dirac(m, pos(&x.neg()), Rat::from_int(-1));
            let mut got = vec![ext.point.clone(), ext.second_witness.clone().unwrap()];
            let mut want = vec![plus, minus];
            got.sort_by(|a, b| a.weights.lex_cmp(&b.weights));
            want.sort_by(|a, b| a.weights.lex_cmp(&b.weights));
            assert_eq!(got, want, "{} at {x}", space.name());
            checked += 1;
        }
    }
    format!("{checked} extreme functionals, witnesses δ_x* and −δ_−x* exact")
}

fn criterion_4() -> String {
    let mut checked = 0;
    let mut worst = 0;
    for space in exact_corpus() {
        let emb = canonical(&space);
        for f in random_sphere_functionals(&space, 100, SEED).unwrap() {
            let k = phelps_support(&emb, &f).unwrap();
            assert!(k <= space.dim(), "{} support {k} at {f}", space.name());
            worst = worst.max(k);
            checked += 1;
        }
    }
    let theta = theta_n();
    let emb = canonical(&theta);
    for f in random_sphere_functionals(&theta, 100, SEED).unwrap() {
        let k = phelps_support(&emb, &f).unwrap();
        assert!(k <= theta.dim(), "theta_n support {k} at {f}");
        checked += 1;
    }
    format!("{checked} functionals, largest support {worst}")
}

fn criterion_5() -> String {
    let one = Rat::from_int(1);
    let mut checked = 0;
    for space in exact_corpus() {
        let emb = canonical(&space);
        let primal = space.primal_vertices();
        for (_, f) in probe_functionals(&space, SAMPLES, SEED).unwrap() {
            let ext = hb_extensions(&emb, &f).unwrap();
            if !ext.unique {
                continue;
            }
            let unit = f.scale(&(one.clone() / ext.norm_value.clone()));
            let x = primal.iter().find(|x| x.dot(&unit) == one).expect("norming vertex");
            let mu = &ext.point;
            for k in mu.positive_part().support() {
                assert_eq!(x.dot(&emb.index_points()[k]), one, "{} μ⁺ at {f}", space.name());
            }
            for k in mu.negative_part().support() {
                assert_eq!(x.dot(&emb.index_points()[k]), -one.clone(), "{} μ⁻ at {f}", space.name());
            }
            checked += 1;
        }
    }
    format!("{checked} unique extensions obey the sign law")
}

fn criterion_6() -> String {
    // (a)
    let step = 0.01;
    let g = 1.0 - step;
    let v = verify_cks(&ckmap::retraction_demo(step).unwrap());
    assert!(v.pass);
    assert!(v.margin >= (1.0 - g) / (1.0 + g) - 1e-9, "retraction margin {}", v.margin);

    // (b)
    let n = 10;
    let field = ckmap::bezier_field(n, 1e-4).unwrap();
    let v = verify_cks(&field);
    assert!(v.pass, "{:?}", v.reasons);
    for k in 1..=n {
        let b = 1.0 / k as f64;
        let (lo, hi) = if k == n { (0.0, b) } else { (1.0 / (k + 1) as f64, b) };
        let nearest = (0..field.domain.len())
            .filter(|&s| !v.s0.contains(&s))
            .min_by(|&a, &c| {
                let d = |s: usize| (field.domain.coord(s).unwrap() - b).abs();
                d(a).total_cmp(&d(c))
            })
            .unwrap();
        let t = field.domain.coord(nearest).unwrap();
        // parameter on whichever segment holds t
        let (lo, hi) = if t < b { (lo, hi) } else { (b, if k == 1 { 1.0 } else { 1.0 / (k - 1) as f64 }) };
        let u = (t - lo) / (hi - lo);
        let bound = 1.0 - 2.0 * u * (1.0 - u);
        assert!(field.norm_at(nearest) <= bound + 1e-12, "t = {t}");
    }
    let (a, c) = (1.0 / n as f64, 1.0 / (n - 1) as f64);
    let mid: f64 = ckmap::bezier_atoms(n, (a + c) / 2.0).iter().map(|(_, w)| w.abs()).sum();
    assert!((mid - 0.5).abs() <= 1e-6, "midpoint norm {mid}");

    // (c)
    let s = GridCompact::discrete(["1", "2"]);
    let k = GridCompact::discrete(["1"]);
    let v = verify_cks(&ckmap::composition_field(s, k, &[0, 0]).unwrap());
    assert!(!v.pass);
    assert!(v.reasons.iter().any(|r| r == "h not injective: s=1, s=2 collide"), "{:?}", v.reasons);

    // (d)
    let field = ckmap::gdelta_field(1e-3, &[0.25, 0.75], 0.2, 20).unwrap();
    assert!(field.notes.iter().any(|n| n.contains("renormalized")));
    assert!(verify_cks(&field).pass);
    "retraction, Bézier, collision and G_δ demos as required".to_string()
}

fn criterion_7() -> String {
    let theta = theta_n();
    let cert = verify_u_embedding(&canonical(&theta), SAMPLES, SEED).unwrap();
    assert_eq!(cert.verdict, Verdict::EvidenceU);
    assert!(!cert.exact);
    assert!(cert.sampling.failures.is_empty());
    assert!(cert.sampling.checked >= SAMPLES);
    format!("evidence-level U, 0 failures over {} functionals", cert.sampling.checked)
}

fn criterion_8() -> String {
    let commands: [&[&str]; 8] = [
        &["check", "l1_3", "--format", "json"],
        &["embed", "hexagon", "--format", "json", "--seed", "7"],
        &["embed", "l1_3", "--format", "json"],
        &["embed", "theta_n", "--format", "json", "--seed", "3"],
        &["extend", "linf3", "1,1/2,0", "--format", "json"],
        &["cks", "bezier", "--step", "1e-3", "--format", "json"],
        &["cks", "gdelta", "--format", "json"],
        &["embed", "euclidean2d", "--format", "json"],
    ];
    for args in commands {
        let a = cli(args);
        let b = cli(args);
        assert!(a.stderr.is_empty(), "{args:?}: {}", a.stderr);
        serde_json::from_str::<Value>(&a.stdout).expect("valid JSON");
        assert_eq!(a, b, "{args:?}");
    }
    format!("{} commands byte-identical across runs", commands.len())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("classification table", criterion_1),
        ("uniqueness oracle equivalence", criterion_2),
        ("dual-ball embedding is not U", criterion_3),
        ("Phelps support bound", criterion_4),
        ("positive/negative support law", criterion_5),
        ("C(K) to C(S) verifier", criterion_6),
        ("theta_n evidence-level U", criterion_7),
        ("determinism", criterion_8),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
