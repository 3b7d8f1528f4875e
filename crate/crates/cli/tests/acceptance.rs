//! Acceptance run: the shipped `verify-all.cfg` campaign, checked criterion by
//! criterion against the thresholds below. Prints one PASS/FAIL line each.

use std::path::PathBuf;
use std::process::ExitCode;

use ising_cli::config::{RunConfig, SUITES};
use ising_cli::report::Report;
use ising_cli::run_campaign;
use serde_json::Value;

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

fn records<'a>(r: &'a Report, suite: &str) -> &'a Value {
    &r.suite(suite).unwrap_or_else(|| panic!("suite {suite} missing from report")).records
}

fn runtime(r: &Report, suites: &[&str]) -> f64 {
    suites.iter().map(|s| r.environment.runtimes.get(*s).copied().unwrap_or(f64::INFINITY)).sum()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn arr(v: &Value) -> &[Value] {
    v.as_array().map(|a| a.as_slice()).unwrap_or(&[])
}

fn all_ok(r: &Report, suites: &[&str]) -> bool {
    suites.iter().all(|s| r.suite(s).is_some_and(|o| o.pass && o.error.is_none()))
}

fn car(r: &Report) -> Check {
    let rec = records(r, "car");
    let res = &rec["residuals"];
    let worst = f(&res["mixed"]).max(f(&res["creators"])).max(f(&res["annihilators"]));
    let t = runtime(r, &["car"]);
    let ok = all_ok(r, &["car"]) && rec["nodes"] == 32 && rec["cap"] == 4 && worst < 1e-12 && f(&res["creators"]) < 1e-14 && t < 10.0;
    Check::new(ok, format!("N={} K={} worst residual {worst:.2e}, {{z†,z†}} {:.2e}, {t:.1}s", rec["nodes"], rec["cap"], f(&res["creators"])))
}

fn pfaffian(r: &Report) -> Check {
    let rec = records(r, "pfaffian");
    let cases = arr(&rec["cases"]);
    let sizes: Vec<u64> = cases.iter().filter_map(|c| c["size"].as_u64()).collect();
    let worst = cases.iter().map(|c| f(&c["max_relative_residual"])).fold(0.0, f64::max);
    let samples_ok = cases.iter().all(|c| c["samples"].as_u64() >= Some(20));
    let t = runtime(r, &["pfaffian"]);
    let ok = all_ok(r, &["pfaffian"]) && sizes == [2, 4, 6] && samples_ok && worst < 1e-10 && t < 5.0;
    Check::new(ok, format!("sizes {sizes:?}, worst {worst:.2e}, {t:.2}s"))
}

fn identities(r: &Report) -> Check {
    let mut ok = all_ok(r, &["symmetry", "periodicity"]);
    let mut worst = 0.0_f64;
    for s in ["symmetry", "periodicity"] {
        let cases = arr(&records(r, s)["cases"]);
        let even_max = cases.iter().filter(|c| c["family"].as_str().is_some_and(|x| x.starts_with("even"))).filter_map(|c| c["length"].as_u64()).max();
        let odd_max = cases.iter().filter(|c| c["family"].as_str().is_some_and(|x| x.starts_with("odd"))).filter_map(|c| c["length"].as_u64()).max();
        ok &= even_max >= Some(12) && odd_max >= Some(11);
        ok &= cases.iter().all(|c| c["samples"].as_u64() >= Some(100));
        worst = cases.iter().map(|c| f(&c["max_residual"])).fold(worst, f64::max);
    }
    let t = runtime(r, &["symmetry", "periodicity"]);
    ok &= worst < 1e-10 && t < 30.0;
    Check::new(ok, format!("even to 2k=12, odd to 2j+1=11, worst {worst:.2e}, {t:.1}s"))
}

fn recursion(r: &Report) -> Check {
    let rec = records(r, "recursion");
    let even = arr(&rec["even"]);
    let even_worst = even.iter().map(|c| f(&c["max_residual"])).fold(0.0, f64::max);
    let rhs_zero = !even.is_empty() && even.iter().all(|c| c["rhs_exact_zero"] == true);
    let odd = arr(&rec["odd"]);
    let odd_case = |len: u64, tol: f64| {
        odd.iter().find(|c| c["length"].as_u64() == Some(len)).is_some_and(|c| {
            let samples = arr(&c["samples"]);
            samples.len() >= 10 && f(&c["max_residual"]) < tol && samples.iter().all(|s| f(&s["residual_half_radius"]) < tol)
        })
    };
    let prefactor = rec["unique_prefactor"] == true
        && arr(&rec["prefactors"]).iter().filter(|p| p["satisfied"] == true).map(|p| p["prefactor"].as_str()).collect::<Vec<_>>() == [Some("PerLevel")];
    let t = runtime(r, &["recursion"]);
    let ok = all_ok(r, &["recursion"]) && even_worst < 1e-12 && rhs_zero && odd_case(3, 1e-6) && odd_case(5, 1e-5) && prefactor && t < 120.0;
    Check::new(ok, format!("even worst {even_worst:.2e} (RHS exactly zero: {rhs_zero}), odd 3/5 within 1e-6/1e-5, (2πi)^-j unique: {prefactor}, {t:.1}s"))
}

fn closability(r: &Report) -> Check {
    let rec = records(r, "closability");
    let even_runs = arr(&rec["even"]["runs"]);
    let single_term = !even_runs.is_empty() && even_runs.iter().all(|run| run["nonzero_terms"] == 1);
    let refinement = f(&rec["even"]["refinement_variation"]);
    let odd = &rec["odd"]["report"];
    let terms: Vec<f64> = arr(&odd["terms"]).iter().filter(|t| t["m"].as_u64().is_some_and(|m| m % 2 == 1)).map(|t| f(&t["term"])).collect();
    let ratios: Vec<f64> = terms.windows(2).map(|w| w[1] / w[0]).collect();
    let odd_ok = odd["verdict"] == "converging"
        && terms.len() == 4
        && terms.iter().all(|t| t.is_finite() && *t > 0.0)
        && ratios.iter().all(|q| *q < 1.0)
        && ratios.windows(2).all(|w| w[1] < w[0]);
    let control = rec["control"]["report"]["verdict"].clone();
    let t = runtime(r, &["closability"]);
    let ok = all_ok(r, &["closability"]) && single_term && refinement < 0.02 && odd_ok && control != "converging" && t < 600.0;
    Check::new(ok, format!("even single term, refinement {refinement:.2e}; odd ratios {ratios:.3?} → {}; control {}; {t:.1}s", odd["verdict"], control))
}

fn qomega(r: &Report) -> Check {
    let rec = records(r, "qomega");
    let nodes: Vec<u64> = arr(&rec["runs"]).iter().filter_map(|x| x["nodes"].as_u64()).collect();
    let finite = arr(&rec["runs"]).iter().all(|x| f(&x["total"]).is_finite() && f(&x["total"]) > 0.0);
    let v = f(&rec["variation"]);
    let t = runtime(r, &["qomega"]);
    let ok = all_ok(r, &["qomega"]) && nodes == [16, 32, 64] && rec["omega"] == "log-power(ell=6)" && finite && v < 0.1 && t < 300.0;
    Check::new(ok, format!("N {nodes:?}, variation {v:.2e}, {t:.2}s"))
}

fn locality(r: &Report) -> Check {
    let rec = records(r, "locality");
    let v = &rec["verdict"];
    let battery: Vec<f64> = arr(&v["records"]).iter().filter(|x| x["is_control"] == false).map(|x| f(&x["norm"]["relative"])).collect();
    let max_b = battery.iter().copied().fold(0.0, f64::max);
    let contrast = f(&v["contrast"]);
    let passing = arr(&rec["arbiter"]["report"]["passing"]).len();
    let t = runtime(r, &["locality"]);
    let ok = all_ok(r, &["locality"])
        && rec["nodes"] == 24
        && rec["cap"] == 3
        && !battery.is_empty()
        && max_b < 1e-3
        && contrast > 10.0
        && passing == 1
        && rec["unique"] == true
        && t < 900.0;
    Check::new(ok, format!("{} battery norms, max {max_b:.2e}, contrast {contrast:.1}, passing conventions {passing} ({}), {t:.1}s", battery.len(), rec["arbiter"]["selected"]))
}

fn reeh_schlieder(r: &Report) -> Check {
    let rec = records(r, "reeh-schlieder");
    let even_n = rec["even"]["observables"].as_u64().unwrap_or(0);
    let all_n = rec["with_odd"]["observables"].as_u64().unwrap_or(0);
    let even_rank = rec["even"]["rank"].as_u64().unwrap_or(0);
    let all_rank = rec["with_odd"]["rank"].as_u64().unwrap_or(0);
    let t = runtime(r, &["reeh-schlieder"]);
    let ok = all_ok(r, &["reeh-schlieder"])
        && even_n >= 50
        && all_n >= even_n + 20
        && even_rank == 16
        && rec["even_parity_dim"] == 16
        && all_rank > even_rank
        && rec["monotone"] == true
        && t < 300.0;
    Check::new(ok, format!("{even_n} even observables rank {even_rank}/16; {all_n} with odd rank {all_rank}; {t:.2}s"))
}

fn assembly(r: &Report) -> Check {
    let cases = arr(&records(r, "assembly")["cases"]);
    let worst = cases.iter().map(|c| f(&c["relative_error"])).fold(0.0, f64::max);
    let worst_abs = cases.iter().map(|c| f(&c["absolute_error"])).fold(0.0, f64::max);
    let small = cases.iter().all(|c| c["nodes"].as_u64() <= Some(4) && c["cap"].as_u64() <= Some(3));
    let t = runtime(r, &["assembly"]);
    let ok = all_ok(r, &["assembly"]) && !cases.is_empty() && small && worst < 1e-12 && t < 60.0;
    Check::new(ok, format!("{} comparisons, worst per-block relative {worst:.2e} (absolute {worst_abs:.2e}), {t:.2}s", cases.len()))
}

fn main() -> ExitCode {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/verify-all.cfg");
    let cfg = match RunConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL  config: {e}");
            return ExitCode::FAILURE;
        }
    };
    let suites: Vec<String> = SUITES.iter().map(|s| s.to_string()).collect();
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(4);
    let first = run_campaign(&cfg, &suites, 1).expect("campaign runs");
    let second = run_campaign(&cfg, &suites, jobs).expect("campaign runs");
    for s in &first.suites {
        if let Some(e) = &s.error {
            println!("ERROR suite {}: {e}", s.suite);
        }
    }

    let criteria: [(&str, Check); 10] = [
        ("1 CAR relations", car(&first)),
        ("2 Pfaffian oracle", pfaffian(&first)),
        ("3 symmetry/periodicity", identities(&first)),
        ("4 recursion relations", recursion(&first)),
        ("5 closability", closability(&first)),
        ("6 Q^omega stability", qomega(&first)),
        ("7 omega-locality", locality(&first)),
        ("8 Reeh-Schlieder rank", reeh_schlieder(&first)),
        ("9 assembly oracle", assembly(&first)),
        (
            "10 reproducibility",
            Check::new(
                first.deterministic_json() == second.deterministic_json(),
                format!("two runs (jobs 1 and {jobs}), report hash {}", ising_cli::report::sha256_hex(first.deterministic_json().as_bytes())),
            ),
        ),
    ];
    let mut failed = 0;
    for (name, c) in &criteria {
        println!("{} {name}: {}", if c.ok { "PASS" } else { "FAIL" }, c.detail);
        failed += usize::from(!c.ok);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
