//! Acceptance run: one PASS/FAIL line per criterion, with the time limit and
//! tolerance each one is held to.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hahn_cli::{run, Outcome};
use hahn_core::coefficients::FieldDescriptor;
use hahn_core::exponents::{GroupDescriptor, GroupElement};
use hahn_core::parallel::Exec;
use hahn_core::sample;
use hahn_core::series::{Domain, Evaluator, Horizon, Series, SeriesError};
use hahn_core::supports::{CheckBudget, FamilyDescriptor, RegionDescriptor, SupportSet};
use hahn_core::theorems::{
    brute_force_closure_probe, classify_khull, descriptor_catalog, refute_truncation_closure_f2,
    verify_fp_gap, verify_neumann_support, ProbeOp, Status,
};
use hahn_testkit::exprgen::{random_expr, GenConfig};
use hahn_testkit::oracle::Rat;
use serde_json::Value;

const SEED: u64 = 20_240_601;
const TERM_BOUND: usize = 10_000;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    tolerance: &'static str,
    body: fn() -> Check,
}

fn z_horizon(bound: i64) -> Horizon {
    Horizon::new(GroupElement::from(bound), TERM_BOUND).expect("positive term bound")
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fp_gap() -> Check {
    let primes = [2u64, 3, 5, 7, 11, 13];
    for p in primes {
        let r = verify_fp_gap(p, &z_horizon(10)).map_err(|e| format!("p={p}: {e}"))?;
        expect(r.status == Status::BoundedPass, || format!("p={p}: status {}", r.status))?;
        expect(r.details["coefficient_at_p"] == "0", || {
            format!("p={p}: b_p = {}", r.details["coefficient_at_p"])
        })?;
        expect(r.details["p_in_finite_sums"] == true, || format!("p={p}: p not in finite sums"))?;
    }
    Ok(format!("b_p = 0 and p in sums of {{1,p}} for p in {primes:?}"))
}

fn neumann() -> Check {
    let mut rng = sample::rng(SEED);
    let q_horizon = Horizon::new(GroupElement::rational(20, 1), TERM_BOUND).expect("positive term bound");
    for i in 0..100 {
        let (a, h) = if i % 2 == 0 {
            (sample::positive_series_integers(&mut rng, 5), z_horizon(20))
        } else {
            (sample::positive_series_rationals(&mut rng, 5), q_horizon.clone())
        };
        let r = verify_neumann_support(&a, &h).map_err(|e| format!("a = {a}: {e}"))?;
        expect(r.status == Status::Pass, || format!("a = {a}: {r}"))?;
    }
    Ok("100 series (50 over Z, 50 over Q), supports equal up to 20".into())
}

fn inversion_round_trip(field: FieldDescriptor, rng: &mut sample::SampleRng) -> Result<(), String> {
    let h = z_horizon(20);
    let domain = Domain::new(GroupDescriptor::Integers, field);
    let one = Series::one(domain);
    for _ in 0..200 {
        let b = sample::nonzero_series(rng, field, -5, 10, 6).map_err(|e| e.to_string())?;
        let prod = b.try_mul(&b.inverse(None).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let mut ev = Evaluator::new(domain, h.clone()).map_err(|e| e.to_string())?;
        let got = ev.term_list(&prod).map_err(|e| format!("{b}: {e}"))?;
        let want = ev.term_list(&one).map_err(|e| e.to_string())?;
        expect(got == want, || format!("over {field}: b = {b}, b*inv(b) = {got}"))?;
    }
    Ok(())
}

fn inversion() -> Check {
    let mut rng = sample::rng(SEED);
    let fields = [
        FieldDescriptor::Rationals,
        FieldDescriptor::prime_field(2).expect("prime"),
        FieldDescriptor::prime_field(5).expect("prime"),
    ];
    for field in fields {
        inversion_round_trip(field, &mut rng)?;
    }
    Ok("200 series per field over Q, F2, F5: b*inv(b) = 1 up to 20".into())
}

fn truncation_f2() -> Check {
    let r = refute_truncation_closure_f2(6, &z_horizon(30), Exec::default()).map_err(|e| e.to_string())?;
    expect(r.status == Status::BoundedPass, || r.to_string())?;
    Ok(format!("{} pairs, status {}", r.details["pairs_checked"], r.status))
}

fn closure_probe() -> Check {
    let budget = CheckBudget::new(z_horizon(10));
    let mut rng = sample::rng(SEED);
    let families: Vec<FamilyDescriptor> =
        (0..500).map(|_| sample::explicit_family(&mut rng, -3, 3)).collect();
    let outcomes = Exec::default().map(families, |f| {
        brute_force_closure_probe(
            GroupDescriptor::Integers,
            FieldDescriptor::Rationals,
            &f,
            ProbeOp::Add,
            &budget,
        )
        .map(|r| (f, r))
    });
    let (mut agree, mut closed) = (0, 0);
    for outcome in outcomes {
        let (f, r) = outcome.map_err(|e| e.to_string())?;
        expect(r.status == Status::Pass, || format!("{f}: {r}"))?;
        agree += 1;
        if r.details["closed"] == true {
            closed += 1;
        }
    }
    Ok(format!("{agree}/500 agree ({closed} closed, {} not)", agree - closed))
}

fn hahn(args: &[&str]) -> Outcome {
    run(std::iter::once("hahn").chain(args.iter().copied()))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn flag<'a>(v: &'a Value, name: &str) -> &'a str {
    v["flags"][name]["value"].as_str().unwrap_or("missing")
}

fn catalog() -> Check {
    let goldens = [
        ("W(Z)", "classify_w_z.json"),
        ("W(Z>=0)", "classify_w_z_nonneg.json"),
        ("FIN(Z)", "classify_fin_z.json"),
    ];
    for (family, file) in goldens {
        let out = hahn(&["classify", "--field", "Q", "--family", family, "--json"]);
        expect(out.code == 0, || format!("{family}: exit {} {}", out.code, out.stderr))?;
        expect(out.stdout == golden(file), || format!("{family}: JSON differs from {file}"))?;
    }
    let parse = |family: &str| -> Value {
        let out = hahn(&["classify", "--field", "Q", "--family", family, "--json"]);
        serde_json::from_str(&out.stdout).expect("classify prints JSON")
    };
    let w = parse("W(Z)");
    expect(flag(&w, "rayner_field") == "yes" && flag(&w, "hahn_field") == "yes", || "W(Z)".into())?;
    let nonneg = parse("W(Z>=0)");
    expect(
        flag(&nonneg, "subring") == "yes"
            && flag(&nonneg, "has_identity") == "yes"
            && flag(&nonneg, "subfield") == "no",
        || "W(Z>=0)".into(),
    )?;
    let fin = parse("FIN(Z)");
    let a4 = fin["flags"]["subfield"]["failed"]
        .as_array()
        .and_then(|f| f.iter().find(|x| x["condition"] == "A4"))
        .map(|x| x["witness"]["from"].clone());
    expect(
        flag(&fin, "has_identity") == "yes"
            && flag(&fin, "subfield") == "no"
            && a4 == Some(serde_json::json!(["{1}"])),
        || format!("FIN(Z): A4 witness {a4:?}"),
    )?;

    let zero = GroupElement::Trivial;
    let rayner_family = FamilyDescriptor::explicit([SupportSet::empty(), SupportSet::finite([zero])]);
    let same_family = |f: &FamilyDescriptor| {
        *f == rayner_family
            || matches!(
                f,
                FamilyDescriptor::W(RegionDescriptor::WholeGroup)
                    | FamilyDescriptor::Fin(RegionDescriptor::WholeGroup)
            )
    };
    let budget =
        CheckBudget::new(Horizon::new(GroupElement::Trivial, TERM_BOUND).map_err(|e| e.to_string())?);
    for field in ["Q", "F2", "F3", "F5(x)"] {
        let field = hahn_cli::semantics::parse_field(field).map_err(|e| e.to_string())?;
        for f in descriptor_catalog(GroupDescriptor::Trivial) {
            let c = classify_khull(GroupDescriptor::Trivial, field, &f, &budget);
            expect(c.rayner_field.is_yes() == same_family(&f), || {
                format!("trivial G over {field}: {f} rayner = {}", c.rayner_field)
            })?;
        }
    }
    Ok("3 golden JSON files match; trivial G: only {{},{0}} is Rayner over Q, F2, F3, F5(x)".into())
}

fn oracle() -> Check {
    let cfg = GenConfig::default();
    let bound = 40;
    let mut rng = sample::rng(SEED);
    let (mut compared, mut vanishing) = (0, 0);
    for _ in 0..300 {
        let e = random_expr(&mut rng, &cfg);
        let src = e.to_text();
        let out = hahn(&["eval", &src, "--exp-bound", &bound.to_string()]);
        match e.eval(&Rat::int(0), bound) {
            Some(d) => {
                let want = format!("{}\n", d.render(bound));
                expect(out.code == 0 && out.stdout == want, || {
                    format!("{src}\n  engine: {}{}  oracle: {want}", out.stdout, out.stderr)
                })?;
                compared += 1;
            }
            None => {
                // some inverse's argument vanishes up to the bound
                let zero = SeriesError::ZeroUpToHorizon { bound: GroupElement::from(bound) };
                expect(out.code == 3 && out.stderr.contains(&zero.to_string()), || {
                    format!("{src}: oracle found a vanishing inverse, engine exit {}", out.code)
                })?;
                vanishing += 1;
            }
        }
    }
    Ok(format!("{compared} byte-identical, {vanishing} vanishing inverses agreed"))
}

fn fibonacci() -> Check {
    let out = hahn(&["eval", "inv(1 - t^(1) - t^(2))", "--group", "Z", "--field", "Q", "--exp-bound", "6"]);
    let want = "1 + 1*t^(1) + 2*t^(2) + 3*t^(3) + 5*t^(4) + 8*t^(5) + 13*t^(6)\n";
    expect(out.code == 0 && out.stdout == want && out.stdout == golden("fibonacci.txt"), || {
        format!("got {:?}", out.stdout)
    })?;
    Ok("byte-exact".into())
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "fp-gap", limit: secs(5), tolerance: "exact", body: fp_gap },
        Criterion { id: 2, name: "neumann-support", limit: secs(30), tolerance: "exact", body: neumann },
        Criterion { id: 3, name: "inversion", limit: secs(60), tolerance: "exact", body: inversion },
        Criterion { id: 4, name: "truncation-f2", limit: secs(60), tolerance: "exact", body: truncation_f2 },
        Criterion {
            id: 5,
            name: "closure-probe",
            limit: secs(120),
            tolerance: "500/500",
            body: closure_probe,
        },
        Criterion { id: 6, name: "catalog", limit: secs(60), tolerance: "byte-exact JSON", body: catalog },
        Criterion { id: 7, name: "oracle", limit: secs(120), tolerance: "byte-exact", body: oracle },
        Criterion { id: 8, name: "fibonacci", limit: secs(5), tolerance: "byte-exact", body: fibonacci },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.body)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "{} criterion {} {}: {} [tolerance {}; {:.2}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            c.tolerance,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
