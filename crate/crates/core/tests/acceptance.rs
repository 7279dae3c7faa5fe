//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs under `cargo test` as a harness-free test target.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quatimage::classify::{classify, BasisKernel, ImageClass};
use quatimage::corpus::{entries, multilinear_entries, sampler_counterpart};
use quatimage::homogeneous::{
    eigenvalues, phi, ratio_avoiding_eval, ratio_factor, sample_image, Complex, RatioPoint, SampleVerdict,
};
use quatimage::ncpoly::parse;
use quatimage::witness::{solve_vector_conjugation, witness};
use quatimage::{random, BasisAxis, ExactScalar, Quaternion};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.2?}, limit {limit:.2?}"))
}

fn classifier_goldens() -> Outcome {
    let s4 = parse("s4").unwrap();
    let start = Instant::now();
    let verdict = classify(&s4).unwrap().verdict;
    let elapsed = start.elapsed();
    ensure(verdict == ImageClass::ZeroPi, || format!("s4 gave {verdict}"))?;
    within(elapsed, Duration::from_millis(100), "classify(s4)")?;
    let goldens = [
        ("[x1,x2]", ImageClass::VectorsV),
        ("[x1,x2][x3,x4]+[x3,x4][x1,x2]", ImageClass::ScalarsR),
        ("x1x2", ImageClass::FullH),
    ];
    for (text, want) in goldens {
        let got = classify(&parse(text).unwrap()).unwrap().verdict;
        ensure(got == want, || format!("{text}: got {got}, want {want}"))?;
    }
    Ok(format!("4 goldens, s4 in {elapsed:.2?}"))
}

fn axes_of(idx: usize, m: usize) -> Vec<BasisAxis> {
    (0..m).map(|j| BasisAxis::from_index((idx >> (2 * (m - 1 - j))) & 3)).collect()
}

fn basic_tuple_values() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tuples = 0usize;
    for _ in 0..500 {
        let m = rng.gen_range(1..=5usize);
        let max_terms = (1..=m).product::<usize>().min(12);
        let p = common::random_multilinear(&mut rng, m, max_terms);
        let kernel = BasisKernel::new(&p).unwrap();
        for idx in 0..4usize.pow(m as u32) {
            let axes = axes_of(idx, m);
            let fast = kernel.eval(&axes).unwrap().to_quaternion();
            let nonzero = fast.coords().iter().filter(|c| !c.is_zero()).count();
            ensure(nonzero <= 1, || format!("{p} at {axes:?}: {fast} is not single-axis"))?;
            let oracle = common::eval_on_axes(&p, &axes);
            let generic = p.evaluate(&axes.iter().map(|a| a.quaternion()).collect::<Vec<_>>()).unwrap();
            ensure(fast == oracle && fast == generic, || {
                format!("{p} at {axes:?}: fast {fast}, oracle {oracle}, generic {generic}")
            })?;
            tuples += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30), "basis tuple sweep")?;
    Ok(format!("500 polynomials, {tuples} tuples in {:.2?}", start.elapsed()))
}

fn degenerate_targets(class: ImageClass) -> Vec<Quaternion> {
    let texts: &[&str] = match class {
        ImageClass::ScalarsR => &["0", "1", "-1", "7/3", "-1000"],
        ImageClass::VectorsV => &["0", "i", "-i", "-3i", "5/2i", "j", "-k", "2j-2k"],
        _ => &["0", "1", "-4", "i", "-i", "-2i", "3+4i", "-1-5i", "j", "-7k", "2-3j+k"],
    };
    texts.iter().map(|t| common::q(t)).collect()
}

fn random_target(rng: &mut ChaCha8Rng, class: ImageClass) -> Quaternion {
    let q = common::rational_quat(rng, 20);
    match class {
        ImageClass::ScalarsR => Quaternion::scalar(q.re),
        ImageClass::VectorsV => q.ve_part(),
        _ => q,
    }
}

fn witness_round_trips() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = Vec::new();
    for entry in multilinear_entries() {
        let p = parse(entry.polynomial).unwrap();
        let class = classify(&p).unwrap();
        if class.verdict == ImageClass::ZeroPi {
            continue;
        }
        let mut targets = degenerate_targets(class.verdict);
        while targets.len() < 100 {
            targets.push(random_target(&mut rng, class.verdict));
        }
        for t in &targets {
            let w = witness(&p, &class, t).map_err(|e| format!("{}: target {t}: {e}", entry.polynomial))?;
            let replay = common::eval(&p, &w.args);
            ensure(w.verified && replay == *t, || {
                format!("{}: target {t}, verified {}, replay {replay}", entry.polynomial, w.verified)
            })?;
        }
        checked.push(format!("{} ({})", entry.polynomial, class.verdict));
    }
    within(start.elapsed(), Duration::from_secs(60), "witness round trips")?;
    ensure(checked.len() == 4, || format!("expected 4 non-identity polynomials, got {checked:?}"))?;
    Ok(format!("100 targets each for {} in {:.2?}", checked.join(", "), start.elapsed()))
}

fn on_negative_i_axis(v: &Quaternion) -> bool {
    v.j.is_zero() && v.k.is_zero() && v.i.is_negative()
}

fn float_mul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// `|lambda·h·v·h⁻¹ − u|₁` recomputed in floating point.
fn float_residual(h: &Quaternion, lambda: &ExactScalar, v: &Quaternion, u: &Quaternion) -> f64 {
    let f = |q: &Quaternion| [q.re.to_f64(), q.i.to_f64(), q.j.to_f64(), q.k.to_f64()];
    let hf = f(h);
    let n = hf.iter().map(|x| x * x).sum::<f64>();
    let h_inv = [hf[0] / n, -hf[1] / n, -hf[2] / n, -hf[3] / n];
    let moved = float_mul(float_mul(hf, f(v)), h_inv);
    let l = lambda.to_f64();
    moved.iter().zip(f(u)).map(|(m, t)| (l * m - t).abs()).sum()
}

fn vector_conjugation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let axis_cases = ["-i", "-5/3i", "i", "2i"];
    let mut pairs: Vec<(Quaternion, Quaternion)> = Vec::new();
    for (n, a) in axis_cases.iter().enumerate() {
        for b in axis_cases {
            pairs.push((common::q(a), common::q(b)));
        }
        for _ in 0..4 {
            let r = random::nonzero_vector(&mut rng, 30);
            if n % 2 == 0 {
                pairs.push((common::q(a), r));
            } else {
                pairs.push((r, common::q(a)));
            }
        }
    }
    while pairs.len() < 200 {
        pairs.push((random::nonzero_vector(&mut rng, 30), random::nonzero_vector(&mut rng, 30)));
    }
    let mut branch = 0usize;
    let mut radical = 0usize;
    for (v, u) in &pairs {
        let mv = solve_vector_conjugation(v, u).map_err(|e| format!("v = {v}, u = {u}: {e}"))?;
        let moved = mv.apply(v).unwrap();
        ensure(moved == *u, || format!("v = {v}, u = {u}: got {moved}"))?;
        // inverse-free form through the matrix product: lambda·h·v = u·h
        let lhs = common::mul(&mv.h, v).scale(&mv.lambda);
        let rhs = common::mul(u, &mv.h);
        ensure(lhs == rhs, || format!("v = {v}, u = {u}: lambda·h·v = {lhs}, u·h = {rhs}"))?;
        let err = float_residual(&mv.h, &mv.lambda, v, u);
        ensure(err < 1e-9 * (1.0 + u.norm_sq().to_f64()), || format!("v = {v}, u = {u}: float residual {err}"))?;
        if on_negative_i_axis(v) || on_negative_i_axis(u) {
            branch += 1;
        }
        if !mv.h.is_rational() || !mv.lambda.is_rational() {
            radical += 1;
        }
    }
    ensure(branch > 0 && radical > 0, || format!("coverage: {branch} axis-branch, {radical} radical cases"))?;
    Ok(format!("{} pairs, {branch} through the negative i-axis branch, {radical} with radicals", pairs.len()))
}

fn sampler_goldens() -> Outcome {
    let cases = [
        ("[x1,x2]^2", SampleVerdict::RNonpos),
        ("-[x1,x2]^2", SampleVerdict::RNonneg),
        ("x1", SampleVerdict::DenseH),
        ("[x1,x2]^2+[x1^2,x2^2]", SampleVerdict::DenseH),
        ("s4", SampleVerdict::Zero),
    ];
    for (text, want) in cases {
        let p = parse(text).unwrap();
        let r = sample_image(&p, 1000, 42, 100);
        ensure(r.verdict == want, || format!("{text}: got {}, want {want}", r.verdict))?;
        ensure(r == sample_image(&p, 1000, 42, 100), || format!("{text}: rerun differs"))?;
        if text == "[x1,x2]^2+[x1^2,x2^2]" {
            ensure(r.real_parts.positive == 0, || format!("{text}: {} positive real parts", r.real_parts.positive))?;
        }
    }
    Ok("5 goldens at n = 1000, seed 42, bound 100".into())
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex {
    Complex::new(common::bounded_rational(rng, 10).into(), common::bounded_rational(rng, 10).into())
}

fn phi_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let one = Complex::one();
    let two = ExactScalar::from(2);
    for _ in 0..500 {
        let (q1, q2) = (common::rational_quat(&mut rng, 20), common::rational_quat(&mut rng, 20));
        let (z1, z2) = (random_complex(&mut rng), random_complex(&mut rng));
        let (m1, m2) = (phi(&q1, &one), phi(&q2, &one));
        ensure(phi(&(&q1 + &q2), &one) == m1.add(&m2), || format!("additivity at {q1}, {q2}"))?;
        ensure(phi(&common::mul(&q1, &q2), &one) == m1.mul(&m2), || format!("multiplicativity at {q1}, {q2}"))?;
        ensure(phi(&common::mul(&q1, &q2), &(&z1 * &z2)) == phi(&q1, &z1).mul(&phi(&q2, &z2)), || {
            format!("tensor multiplicativity at {q1}, {q2}")
        })?;
        ensure(m1.trace() == Complex::real(&q1.re * &two), || format!("trace at {q1}"))?;
        ensure(m1.det() == Complex::real(q1.norm_sq()), || format!("det at {q1}"))?;
        let (l1, l2) = eigenvalues(&q1).values();
        ensure(&l1 + &l2 == m1.trace() && &l1 * &l2 == m1.det(), || format!("eigen sums at {q1}"))?;
        for l in [&l1, &l2] {
            let char_poly = &(&(l * l) - &(&m1.trace() * l)) + &m1.det();
            ensure(char_poly == Complex::zero(), || format!("characteristic polynomial at {q1}"))?;
        }
    }
    Ok("500 pairs".into())
}

fn random_point(rng: &mut ChaCha8Rng) -> RatioPoint {
    loop {
        let (a, b) = (common::bounded_rational(rng, 5), common::bounded_rational(rng, 5));
        if let Ok(p) = RatioPoint::new(a, b) {
            return p;
        }
    }
}

/// A quaternion with eigenvalue ratio `c` or `1/c`: `t·(a + b·u)` for a rational unit vector `u`.
fn quaternion_with_ratio(rng: &mut ChaCha8Rng, c: &RatioPoint) -> Quaternion {
    let units = ["i", "-j", "3/5i+4/5k", "2/3i+1/3j-2/3k"];
    let u = common::q(units[rng.gen_range(0..units.len())]);
    let t = ExactScalar::from(random::nonzero_rational(rng, 9));
    (&Quaternion::scalar(c.a.clone().into()) + &u.scale(&c.b.clone().into())).scale(&t)
}

fn ratio_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let q = common::rational_quat(&mut rng, 20);
        let c = random_point(&mut rng);
        let shortcut = ratio_factor(&q, &c).unwrap();
        let (l1, l2) = eigenvalues(&q).values();
        let a_sq = Complex::real(ExactScalar::from(&c.a * &c.a));
        let b_sq = Complex::real(ExactScalar::from(&c.b * &c.b));
        let diff = &l1 - &l2;
        let sum = &l1 + &l2;
        let complex_form = &(&-&a_sq * &(&diff * &diff)) - &(&b_sq * &(&sum * &sum));
        let big_a = Complex::new(c.a.clone().into(), c.b.clone().into());
        let product_form = &(&(&big_a * &l1) - &(&big_a.conj() * &l2)) * &(&(&big_a * &l2) - &(&big_a.conj() * &l1));
        ensure(complex_form == Complex::real(shortcut.clone()), || format!("complex form at {q}"))?;
        ensure(product_form == Complex::real(shortcut), || format!("product form at {q}"))?;
    }
    let mut zeros = 0usize;
    for trial in 0..200 {
        let size = rng.gen_range(1..=3usize);
        let set: Vec<RatioPoint> = (0..size).map(|_| random_point(&mut rng)).collect();
        let q = if trial % 4 == 0 {
            let pick = rng.gen_range(0..size);
            quaternion_with_ratio(&mut rng, &set[pick])
        } else {
            common::rational_quat(&mut rng, 20)
        };
        let out = ratio_avoiding_eval(&q, &set).unwrap();
        if trial % 4 == 0 {
            ensure(out.is_zero(), || format!("{q} has a listed ratio but maps to {out}"))?;
        }
        if out.is_zero() {
            zeros += 1;
            continue;
        }
        for c in &set {
            ensure(!ratio_factor(&out, c).unwrap().is_zero(), || format!("{out} hits a listed ratio"))?;
        }
    }
    Ok(format!("200 factor checks, 200 avoidance checks ({zeros} zero outputs)"))
}

fn basis_expansion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let m = rng.gen_range(1..=5usize);
        let max_terms = (1..=m).product::<usize>().min(12);
        let p = common::random_multilinear(&mut rng, m, max_terms);
        let args: Vec<Quaternion> = (0..m).map(|_| common::rational_quat(&mut rng, 20)).collect();
        let full = p.evaluate(&args).unwrap();
        let expanded = common::basis_expansion(&p, &args);
        ensure(full == expanded, || format!("{p}: evaluate {full}, expansion {expanded}"))?;
        ensure(full == common::eval(&p, &args), || format!("{p}: matrix product oracle differs"))?;
    }
    Ok("100 polynomials".into())
}

fn verdict_sampler_agreement() -> Outcome {
    let mut seen = Vec::new();
    for entry in multilinear_entries() {
        let p = parse(entry.polynomial).unwrap();
        let class = classify(&p).unwrap().verdict;
        let sampled = sample_image(&p, 1000, 42, 100).verdict;
        ensure(sampled == sampler_counterpart(class), || {
            format!("{}: classifier {class}, sampler {sampled}", entry.polynomial)
        })?;
        seen.push(format!("{}: {class}/{sampled}", entry.name));
    }
    Ok(seen.join(", "))
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_quatimage");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["classify", "-p", "s4"],
        vec!["classify", "-p", "[x1,x2][x3,x4]+[x3,x4][x1,x2]"],
        vec!["witness", "-p", "x1*x2", "-t", "3+4i"],
        vec!["witness", "-p", "x1*x2", "-t", "-2+j-k"],
        vec!["witness", "-p", "[x1,x2]", "-t", "1"],
        vec!["sample", "-p", "[x1,x2]^2+[x1^2,x2^2]", "-n", "300", "--seed", "42"],
        vec!["weights", "-p", "x1^2 + x2^3"],
        vec!["phi", "-q", "1-2i+3/4k", "--z", "2-i"],
        vec!["corpus"],
        vec!["classify", "-p", "x1 +"],
    ];
    let run = |args: &[&str], threads: &str| {
        let out = Command::new(bin).args(args).env("RAYON_NUM_THREADS", threads).output().expect("binary runs");
        (out.status.code(), out.stdout, out.stderr)
    };
    for args in &invocations {
        let first = run(args, "1");
        ensure(!first.1.is_empty() || !first.2.is_empty(), || format!("{args:?}: no output"))?;
        for threads in ["1", "4"] {
            let again = run(args, threads);
            ensure(again == first, || format!("{args:?}: output differs with {threads} threads"))?;
        }
    }
    let listed = entries().len();
    Ok(format!("{} invocations x 3 runs, corpus of {listed} entries", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("classifier goldens", classifier_goldens),
        ("basis tuple values are single-axis and exact", basic_tuple_values),
        ("witness round trips", witness_round_trips),
        ("vector conjugation exactness", vector_conjugation),
        ("sampler goldens", sampler_goldens),
        ("phi and eigenvalue identities", phi_identities),
        ("ratio factors and ratio avoidance", ratio_machinery),
        ("basis expansion", basis_expansion),
        ("classifier and sampler agree", verdict_sampler_agreement),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
