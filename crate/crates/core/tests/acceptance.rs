//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use stablespan::closure::{pool_preset, saturate, scripted_closure, verify_certificate, SaturationStatus, Verdict};
use stablespan::filtration::{gr_dimension_check, FiltrationError, GradedDim, WeightFiltration};
use stablespan::growth::{gk_estimate, growth_sequence, standard_generating_set};
use stablespan::monomial::monomials_up_to;
use stablespan::{multiply, parse_element, Degree, Element, Execution, Field, Signature};

use common::{oracle_element, oracle_product, random_element, random_nonscalar, random_nonzero, rng, word_oracle};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {:.2} s, limit {} s", e.as_secs_f64(), limit.as_secs()))
}

fn normal_ordering_oracle() -> Outcome {
    let t = Instant::now();
    let mut pairs = 0;
    let mut r = rng(1);
    for n in [1, 2] {
        let sig = Signature::weyl(n, Field::Rational);
        let basis = monomials_up_to(sig.generator_count(), 6);
        for a in &basis {
            for b in basis.iter().filter(|b| a.total_degree() + b.total_degree() <= 6) {
                let got = multiply(&Element::monomial(&sig, a.clone()), &Element::monomial(&sig, b.clone())).unwrap();
                ensure(got == oracle_element(&sig, word_oracle(&sig, a, b)), || format!("A_{n}: {a:?} * {b:?}"))?;
                pairs += 1;
            }
        }
        for _ in 0..100 {
            let f = random_element(&sig, &mut r, 3, 4);
            let g = random_element(&sig, &mut r, 3, 4);
            ensure(multiply(&f, &g).unwrap() == oracle_product(&f, &g), || format!("A_{n}: ({f}) * ({g})"))?;
        }
    }
    within(t, Duration::from_secs(2))?;
    Ok(format!("{pairs} monomial pairs and 200 random element pairs in A_1, A_2"))
}

fn certified(seed: &Element, cap: u32, expect: usize) -> Result<(), String> {
    let cert = scripted_closure(seed, cap).map_err(|e| format!("seed {seed}: {e}"))?;
    ensure(cert.coverage.len() == expect, || format!("seed {seed}: {} monomials covered", cert.coverage.len()))?;
    let v = verify_certificate(&cert, Execution::Parallel);
    ensure(v == Verdict::Ok, || format!("seed {seed}: {v}"))
}

fn polynomial_closure() -> Outcome {
    let t = Instant::now();
    let sig = Signature::poly(2, Field::Rational);
    let mut r = rng(2);
    let mut seeds = vec![parse_element("z1^2*z2 + z1", &sig).unwrap()];
    seeds.extend((0..25).map(|_| random_nonscalar(&sig, &mut r, 3, 4)));
    for s in &seeds {
        certified(s, 4, 15)?;
    }
    within(t, Duration::from_secs(15))?;
    Ok(format!("{} seeds, 15 monomials each, all certificates verify", seeds.len()))
}

fn one_variable_fixpoint() -> Outcome {
    let sig = Signature::poly(1, Field::Rational);
    let pool = pool_preset(&sig, "affine", 6).unwrap();
    let mut dims = vec![];
    for d in [2u32, 3] {
        let seed = Element::generator(&sig, 0).pow(d);
        let sat = saturate(&[seed], &pool, 6, 50, Execution::Parallel);
        ensure(sat.status == SaturationStatus::Fixpoint, || format!("z^{d}: status {}", sat.status))?;
        ensure(sat.dim() == d as usize + 1, || format!("z^{d}: dim {}", sat.dim()))?;
        dims.push(format!("z^{d} -> dim {}", sat.dim()));
    }
    Ok(dims.join(", "))
}

fn weyl_closure() -> Outcome {
    let t = Instant::now();
    let sig = Signature::weyl(1, Field::Rational);
    for s in ["x1", "x1 + y1", "x1*y1"] {
        certified(&parse_element(s, &sig).unwrap(), 3, 10)?;
    }
    within(t, Duration::from_secs(15))?;
    Ok("x1, x1 + y1, x1*y1 each cover all 10 monomials; no saturation fallback needed".into())
}

fn frobenius_control() -> Outcome {
    let sig = Signature::poly(2, Field::prime(2).unwrap());
    let pool = pool_preset(&sig, "triangular", 6).unwrap();
    let sat = saturate(&[parse_element("z1^2", &sig).unwrap()], &pool, 6, 100, Execution::Parallel);
    ensure(sat.status != SaturationStatus::RoundLimit, || "did not terminate".into())?;
    let even = sat.basis.rows().all(|row| row.terms().all(|(m, _)| m.exponents().iter().all(|e| e % 2 == 0)));
    ensure(even, || "a basis row has an odd exponent".into())?;
    let full = monomials_up_to(2, 6).len();
    ensure(sat.dim() < full, || format!("dim {} is not proper", sat.dim()))?;
    Ok(format!("{}, dim {} of {full}, all rows in even-exponent monomials", sat.status, sat.dim()))
}

fn tensor_convolution() -> Outcome {
    let q = Field::Rational;
    let left = WeightFiltration::standard(&Signature::poly(1, q));
    let right = WeightFiltration::bernstein(&Signature::weyl(1, q));
    let report = gr_dimension_check(&left, &right, 8).unwrap();
    ensure(report.passed(), || "convolution identity fails".into())?;
    ensure(report.rows.len() == 9, || format!("{} rows", report.rows.len()))?;
    ensure(report.rows[2].tensor == GradedDim::Finite(6), || format!("degree 2 gives {}", report.rows[2].tensor))?;
    let out = Command::new(env!("CARGO_BIN_EXE_stablespan"))
        .args(["tensor-gr-check", "--algebra", "poly:1 x weyl:1", "--weights", "1,bernstein"])
        .output()
        .unwrap();
    // Mixed lists are a usage error; the full form must pass.
    ensure(out.status.code() == Some(2), || "mixed weight list accepted".into())?;
    let out = Command::new(env!("CARGO_BIN_EXE_stablespan"))
        .args(["tensor-gr-check", "--algebra", "poly:1 x weyl:1", "--weights", "1,1,1", "--cap", "8"])
        .output()
        .unwrap();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let dims: Vec<String> = report.rows.iter().map(|r| r.tensor.to_string()).collect();
    Ok(format!("degrees 0..8: {}", dims.join(" ")))
}

fn leading_form_multiplicative() -> Outcome {
    let sig = Signature::weyl(1, Field::Rational);
    let w = WeightFiltration::bernstein(&sig);
    let mut r = rng(7);
    for _ in 0..200 {
        let f = random_nonzero(&sig, &mut r, 3, 4);
        let g = random_nonzero(&sig, &mut r, 3, 4);
        let lhs = w.leading_form(&(&f * &g)).unwrap();
        let rhs = &w.leading_form(&f).unwrap() * &w.leading_form(&g).unwrap();
        ensure(lhs == rhs, || format!("f = {f}, g = {g}"))?;
    }
    Ok("200 pairs in A_1, Bernstein weights".into())
}

fn gk_additivity() -> Outcome {
    let q = Field::Rational;
    let cases = [
        (Signature::poly(2, q), 2u32),
        (Signature::weyl(1, q), 2),
        (Signature::parse("poly:1 x weyl:1", q).unwrap(), 3),
    ];
    let mut out = vec![];
    for (sig, want) in &cases {
        let rep = growth_sequence(sig, &standard_generating_set(sig), 12, Execution::Parallel).unwrap();
        ensure(rep.dims.len() >= 12, || "sequence too short".into())?;
        let d = gk_estimate(&rep.dims).map_err(|e| e.to_string())?;
        ensure(d == *want, || format!("{sig}: estimated {d}, expected {want}"))?;
        out.push(format!("{sig} -> {d}"));
    }
    let scalars = growth_sequence(&cases[0].0, &[Element::one(&cases[0].0)], 12, Execution::Parallel).unwrap();
    let d = gk_estimate(&scalars.dims).map_err(|e| e.to_string())?;
    ensure(d == 0, || format!("scalars: estimated {d}"))?;
    out.push("scalars -> 0".into());
    Ok(out.join(", "))
}

fn pencil_degrees() -> Outcome {
    let q = Field::Rational;
    let a1 = Signature::weyl(1, q);
    let mixed = Signature::parse("laurent:1 x weyl:1", q).unwrap();
    let filtrations = [WeightFiltration::bernstein(&a1), WeightFiltration::standard(&mixed)];
    let mut r = rng(9);
    for k in 0..50 {
        let w = &filtrations[k % 2];
        let sig = w.signature();
        let f = loop {
            let f = random_nonzero(sig, &mut r, 2, 3);
            if w.weight_degree(&f) >= Degree::Finite(1) {
                break f;
            }
        };
        let n = r.gen_range(1..=4u32);
        // Coefficients from F_0: scalars, or Laurent polynomials in z1.
        let f0 = |r: &mut rand_chacha::ChaCha8Rng| {
            let e = random_element(sig, r, 2, 2);
            e.filter_terms(|m| w.weights().iter().zip(m.exponents()).all(|(wt, ex)| *wt == 0 || *ex == 0))
        };
        let mut combo = Element::zero(sig);
        let mut power = Element::one(sig);
        for i in 0..=n {
            let mut d = f0(&mut r);
            if i == n {
                while d.is_zero() {
                    d = f0(&mut r);
                }
            }
            combo = &combo + &(&d * &power);
            power = &power * &f;
        }
        let df = w.weight_degree(&f).finite().unwrap();
        ensure(!combo.is_zero(), || format!("f = {f}, n = {n}: combination vanished"))?;
        let got = w.weight_degree(&combo);
        ensure(got == Degree::Finite(n as i64 * df), || format!("f = {f}, n = {n}: weight degree {got}"))?;
    }
    Ok("50 combinations in A_1 and k[z^±1] x A_1".into())
}

fn laurent_weights() -> Outcome {
    let sig = Signature::laurent(1, Field::Rational);
    match WeightFiltration::new(&sig, vec![1]) {
        Err(FiltrationError::InvertibleNotDegreeZero(g)) if g == "z1" => {}
        other => return Err(format!("weight 1 gave {other:?}")),
    }
    WeightFiltration::new(&sig, vec![0]).map_err(|e| format!("weight 0 rejected: {e}"))?;
    Ok("weight 1 on z1 rejected, weight 0 accepted".into())
}

fn round_trip_and_cli() -> Outcome {
    let q = Field::Rational;
    let sigs = [
        Signature::poly(3, q),
        Signature::laurent(2, q),
        Signature::weyl(2, q),
        Signature::parse("poly:1 x weyl:1", q).unwrap(),
        Signature::parse("laurent:1 x weyl:1", Field::prime(7).unwrap()).unwrap(),
    ];
    let mut r = rng(11);
    for sig in &sigs {
        for _ in 0..200 {
            let e = random_element(sig, &mut r, 4, 6);
            let back = parse_element(&e.to_string(), sig).map_err(|err| format!("{e}: {err}"))?;
            ensure(back == e, || format!("{sig}: {e} came back as {back}"))?;
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_stablespan");
    let closure = |name: &str| {
        let path = dir.path().join(name);
        let st = Command::new(bin)
            .args(["closure", "--algebra", "poly:2", "--seed", "z1^2*z2+z1", "--cap", "3", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        (st.status.success(), path)
    };
    let (ok_a, a) = closure("a.json");
    let (ok_b, b) = closure("b.json");
    ensure(ok_a && ok_b, || "closure failed".into())?;
    let bytes = std::fs::read(&a).unwrap();
    ensure(bytes == std::fs::read(&b).unwrap(), || "certificates differ".into())?;
    let verify = |p: &std::path::Path| Command::new(bin).arg("verify").arg("--cert").arg(p).output().unwrap().status.code();
    ensure(verify(&a) == Some(0), || "untampered certificate rejected".into())?;

    let mut doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    let step = doc["steps"].as_array_mut().unwrap().iter_mut().find(|s| s["kind"] == "combine").unwrap();
    step["coeffs"][0] = "5/7".into();
    std::fs::write(&b, serde_json::to_vec(&doc).unwrap()).unwrap();
    ensure(verify(&b) == Some(1), || "coefficient tamper not detected with exit 1".into())?;

    let mut doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    let last = doc["steps"].as_array().unwrap().len() - 1;
    doc["steps"][last]["result"] = "z1 + 1".into();
    std::fs::write(&b, serde_json::to_vec(&doc).unwrap()).unwrap();
    ensure(verify(&b) == Some(1), || "result tamper not detected with exit 1".into())?;
    Ok(format!("200 elements x {} signatures; byte-identical certificates; tampering exits 1", sigs.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("normal ordering agrees with swap rewriting", normal_ordering_oracle),
        ("scripted closure in Q[z1,z2], cap 4", polynomial_closure),
        ("Q[z] affine saturation of z^d has dim d+1", one_variable_fixpoint),
        ("scripted closure in A_1, cap 3", weyl_closure),
        ("F_2 saturation of z1^2 stays in even exponents", frobenius_control),
        ("graded dimensions of Q[z] x A_1 convolve", tensor_convolution),
        ("leading forms multiply under Bernstein weights", leading_form_multiplicative),
        ("GK estimates add", gk_additivity),
        ("pencil combinations keep weight degree", pencil_degrees),
        ("invertible generators need weight 0", laurent_weights),
        ("round trip, determinism, tamper detection", round_trip_and_cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
