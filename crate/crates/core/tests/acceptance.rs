//! Acceptance run: one PASS/FAIL line per criterion, exact equality throughout.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use localeps::character::MultiplicativeCharacter;
use localeps::hilbert::hilbert_qp;
use localeps::suites::{chi_over, run, SuiteConfig};
use localeps::verify::{self, Report};
use localeps::{Backend, PadicElement, Result, RootOfUnity, UnramifiedField};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_917;

struct Outcome {
    cases: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn from_reports(reports: Vec<Report>) -> Self {
        let failures = reports
            .iter()
            .filter(|r| !r.equal)
            .map(|r| format!("{} {:?}", r.identity, r.params))
            .collect();
        Outcome {
            cases: reports.len(),
            failures,
        }
    }
}

fn suite(name: &str, cfg: SuiteConfig) -> Result<Outcome> {
    Ok(Outcome::from_reports(run(name, &cfg)?))
}

fn primes(ps: &[u64]) -> SuiteConfig {
    SuiteConfig {
        primes: Some(ps.to_vec()),
        ..SuiteConfig::default()
    }
}

fn agreement_grid(p: u64, f: usize, ns: &[u32]) -> Result<Outcome> {
    let mut chars = Vec::new();
    for &n in ns {
        let fld = UnramifiedField::new(p, f, n + 4)?;
        for a in fld.unit_residues(n)? {
            chars.push(chi_over(&a, n)?);
        }
    }
    let reports: Vec<Report> = chars
        .par_iter()
        .map(verify::agreement)
        .collect::<Result<_>>()?;
    Ok(Outcome::from_reports(reports))
}

fn c1_oracle_closed() -> Result<Outcome> {
    let mut out = agreement_grid(3, 1, &[2, 3])?;
    let five = agreement_grid(5, 1, &[2, 3])?;
    out.cases += five.cases;
    out.failures.extend(five.failures);
    Ok(out)
}

fn c2_degree_two() -> Result<Outcome> {
    suite(
        "p3-agreement",
        SuiteConfig {
            primes: Some(vec![3]),
            f: 2,
            max_n: Some(2),
            seed: SEED,
            sample: 20,
            ..SuiteConfig::default()
        },
    )
}

fn c3_two_adic() -> Result<Outcome> {
    agreement_grid(2, 1, &[3, 4, 5, 6, 8])
}

fn c4_c7d() -> Result<Outcome> {
    let reports = [(3, 2), (3, 3), (5, 2)]
        .into_iter()
        .map(|(p, n)| verify::c7d(p, n, Backend::Oracle))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_reports(reports))
}

fn c5_c7abc_witt() -> Result<Outcome> {
    let mut out = suite("c7", primes(&[3]))?;
    let witt = suite("witt", primes(&[3]))?;
    out.cases += witt.cases;
    out.failures.extend(witt.failures);
    Ok(out)
}

fn c6_equivariance() -> Result<Outcome> {
    let out = suite("p1", primes(&[3, 5]))?;
    if out.cases < 20 {
        return Ok(Outcome {
            cases: out.cases,
            failures: vec![format!("only {} pairs", out.cases)],
        });
    }
    Ok(out)
}

fn c7_sqrt_lemma() -> Result<Outcome> {
    suite("sqrt-lemma", primes(&[3, 5, 7]))
}

fn c8_c4_c5() -> Result<Outcome> {
    let mut out = suite("c4", primes(&[3]))?;
    let c5 = suite("c5", primes(&[3, 5]))?;
    out.cases += c5.cases;
    out.failures.extend(c5.failures);
    Ok(out)
}

fn c9_c6() -> Result<Outcome> {
    suite("c6", primes(&[3]))
}

fn c10_l1a() -> Result<Outcome> {
    suite("l1a", primes(&[3, 5]))
}

fn c11_l1b() -> Result<Outcome> {
    let r = verify::l1b(3, 109, 31)?;
    let symbols = r
        .details
        .as_ref()
        .and_then(|d| d.get("symbols"))
        .cloned()
        .unwrap_or_default();
    let mut out = Outcome::from_reports(vec![r]);
    if symbols != serde_json::json!([1, -1]) {
        out.failures.push(format!("symbol pattern {symbols}"));
    }
    Ok(out)
}

fn c12_ultra() -> Result<Outcome> {
    suite("ultra-2adic", primes(&[2]))
}

// Randomized infrastructure checks.

const TRIALS: usize = 200;

fn random_field(rng: &mut ChaCha8Rng) -> Result<Arc<UnramifiedField>> {
    let (p, f) = *[(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)]
        .choose(rng)
        .unwrap();
    UnramifiedField::new(p, f, 8)
}

fn random_unit(rng: &mut ChaCha8Rng, fld: &Arc<UnramifiedField>) -> Result<PadicElement> {
    let code = rng.gen_range(1..fld.q());
    let p = fld.p() as i64;
    let y: Vec<i64> = (0..fld.f()).map(|_| p * rng.gen_range(-500..500)).collect();
    Ok(fld
        .teichmuller(code)?
        .mul(&fld.one().add(&fld.from_poly(&y))))
}

fn random_element(rng: &mut ChaCha8Rng, fld: &Arc<UnramifiedField>) -> Result<PadicElement> {
    let v = rng.gen_range(-2..3);
    let p = fld.from_int(fld.p() as i64);
    Ok(random_unit(rng, fld)?.mul(&p.pow(v)?))
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn c13_infrastructure() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut cases = 0;

    for _ in 0..TRIALS {
        let fld = random_field(&mut rng)?;
        let n = rng.gen_range(2..5u32);
        let num: Vec<i64> = (0..fld.f()).map(|_| rng.gen_range(-300..300)).collect();
        let alpha = fld
            .from_poly(&num)
            .div(&fld.from_int(fld.p().pow(n) as i64))?;
        let on_p = RootOfUnity::new(rng.gen_range(1..13), 1);
        let chi =
            MultiplicativeCharacter::new(&fld, on_p, rng.gen_range(0..30), Some(alpha), false)?;
        let x = random_element(&mut rng, &fld)?;
        let y = random_element(&mut rng, &fld)?;
        let lhs = chi.eval(&x.mul(&y))?;
        let rhs = chi.eval(&x)? * chi.eval(&y)?;
        check(&mut failures, lhs == rhs, || {
            format!("multiplicativity {chi} at {x}, {y}")
        });
        cases += 1;
    }

    for _ in 0..TRIALS {
        let fld = random_field(&mut rng)?;
        let x = random_unit(&mut rng, &fld)?;
        let y = random_unit(&mut rng, &fld)?;
        let ok = x.mul(&y).log()? == x.log()?.add(&y.log()?);
        check(&mut failures, ok, || format!("log additivity at {x}, {y}"));
        cases += 1;
    }

    for _ in 0..TRIALS {
        let fld = random_field(&mut rng)?;
        let code = rng.gen_range(1..fld.q());
        let t = fld.teichmuller(code)?;
        let ok = t.pow(fld.q() as i64)? == t
            && t.residue_code() == code
            && t.frobenius() == t.pow(fld.p() as i64)?;
        check(&mut failures, ok, || {
            format!("Teichmüller fixpoint for code {code}")
        });
        cases += 1;
    }

    let pool = [-1i64, 2, 3, 5, 6, 7, 10, 11, 12, 13, 15, 18, 27, 45];
    for _ in 0..TRIALS {
        let p = *[2u64, 3, 5, 7].choose(&mut rng).unwrap();
        let a = *pool.choose(&mut rng).unwrap();
        let b = *pool.choose(&mut rng).unwrap();
        let c = *pool.choose(&mut rng).unwrap();
        let h = |x: i64, y: i64| hilbert_qp(Rational64::from(x), Rational64::from(y), p);
        let ok = h(a * b, c)? == h(a, c)? * h(b, c)? && h(a, b)? == h(b, a)?;
        check(&mut failures, ok, || {
            format!("Hilbert bilinearity ({a}·{b}, {c})_{p}")
        });
        cases += 1;
    }

    for _ in 0..TRIALS {
        let m = rng.gen_range(1..2_000u64);
        let r = RootOfUnity::new(m, rng.gen_range(0..m as i64));
        let parts = r.decompose();
        let back = parts.values().fold(RootOfUnity::one(), |acc, &x| acc * x);
        let prime_powers = parts.iter().all(|(&l, x)| {
            x.order() == 1 || x.order() % l == 0 && r.order().is_multiple_of(x.order())
        });
        let exact = r.to_cyclotomic().as_root_of_unity() == Some(r);
        check(&mut failures, back == r && prime_powers && exact, || {
            format!("CRT recomposition of {r}")
        });
        cases += 1;
    }

    Ok(Outcome { cases, failures })
}

struct Criterion {
    label: &'static str,
    budget: Option<Duration>,
    run: fn() -> Result<Outcome>,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            label: "oracle = closed form, p in {3,5}, f = 1, n in {2,3}",
            budget: secs(10),
            run: c1_oracle_closed,
        },
        Criterion {
            label: "oracle = closed form, p = 3, f = 2, n = 2, 20 sampled units",
            budget: secs(30),
            run: c2_degree_two,
        },
        Criterion {
            label: "p = 2 branch, v(alpha) in {-3,-4,-5,-6,-8}",
            budget: secs(10),
            run: c3_two_adic,
        },
        Criterion {
            label: "W_p((1 - chi_{1/p^n})^{p^{n-1}}) = zeta_p",
            budget: None,
            run: c4_c7d,
        },
        Criterion {
            label: "c7 a/b/c and Witt, p = 3",
            budget: None,
            run: c5_c7abc_witt,
        },
        Criterion {
            label: "Galois equivariance of W*",
            budget: None,
            run: c6_equivariance,
        },
        Criterion {
            label: "sqrt(p*)^(sigma_k - 1) = (p,k)_p",
            budget: None,
            run: c7_sqrt_lemma,
        },
        Criterion {
            label: "Adams identities c4 (order 9) and c5 (order p)",
            budget: None,
            run: c8_c4_c5,
        },
        Criterion {
            label: "W_3(chi^3) = W_3(chi)^3, conductor 3",
            budget: None,
            run: c9_c6,
        },
        Criterion {
            label: "G(alpha)^2 = (-1, alpha^-1), odd conductor",
            budget: None,
            run: c10_l1a,
        },
        Criterion {
            label: "(3, 109, 31) conditions and symbols (+1, -1)",
            budget: None,
            run: c11_l1b,
        },
        Criterion {
            label: "2-adic quadratic formula, u in {3,5,7,-1,9}",
            budget: None,
            run: c12_ultra,
        },
        Criterion {
            label: "randomized invariants, 200 cases each",
            budget: secs(30),
            run: c13_infrastructure,
        },
    ];
    let mut all_ok = true;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (ok, note) = match result {
            Ok(o) if o.failures.is_empty() && o.cases > 0 => (true, format!("{} cases", o.cases)),
            Ok(o) if o.cases == 0 => (false, "no cases".to_string()),
            Ok(o) => (
                false,
                format!(
                    "{} of {} failed, first: {}",
                    o.failures.len(),
                    o.cases,
                    o.failures[0]
                ),
            ),
            Err(e) => (false, format!("error: {e}")),
        };
        let over = c.budget.is_some_and(|b| elapsed > b);
        let ok = ok && !over;
        all_ok &= ok;
        let budget = if over { " over budget" } else { "" };
        println!(
            "{} {:>2}  {}  [{note}; {:.2}s{budget}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            c.label,
            elapsed.as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
